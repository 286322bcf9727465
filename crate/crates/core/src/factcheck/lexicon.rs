//! Entity mentions in a token stream: players from the game's rosters,
//! teams (those in the game and every other franchise), pronouns, and
//! capitalised name-like runs that match nobody.

use std::collections::HashMap;

use super::Span;
use crate::game::{GameData, Side};
use crate::teams::FRANCHISES;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MentionKind {
    /// Index into `GameData::players`.
    Player { index: usize },
    /// A surname from the rosters preceded by a first name that does not
    /// belong to that player ("Dwyane Dragic"). `candidates` are every
    /// player the mention might mean.
    Misnamed { candidates: Vec<usize> },
    /// Two or three capitalised words that look like a person but match
    /// no roster entry.
    UnknownPerson,
    /// `side` is `None` for franchises that did not play in this game.
    Team { side: Option<Side>, name: String },
    PlayerPronoun,
    TeamPronoun,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub kind: MentionKind,
    pub span: Span,
    pub sentence: usize,
    /// A team named by its city alone ("in Phoenix").
    pub bare_city: bool,
}

impl Mention {
    pub fn is_player_like(&self) -> bool {
        matches!(
            self.kind,
            MentionKind::Player { .. } | MentionKind::Misnamed { .. } | MentionKind::UnknownPerson | MentionKind::PlayerPronoun
        )
    }

    pub fn is_team_like(&self) -> bool {
        matches!(self.kind, MentionKind::Team { .. } | MentionKind::TeamPronoun)
    }

    pub fn is_pronoun(&self) -> bool {
        matches!(self.kind, MentionKind::PlayerPronoun | MentionKind::TeamPronoun)
    }
}

#[derive(Debug, Clone)]
enum Target {
    Player(usize),
    Team { side: Option<Side>, name: String, bare_city: bool },
}

const SUFFIXES: &[&str] = &["jr.", "jr", "sr.", "sr", "ii", "iii", "iv"];

const NOT_NAMES: &[&str] = &[
    "the", "a", "an", "he", "his", "him", "they", "their", "them", "it", "its", "in", "on", "at", "after", "before",
    "with", "both", "but", "and", "for", "despite", "while", "when", "meanwhile", "still", "this", "that", "however",
    "as", "of", "to", "from", "by", "nba", "mvp", "all-star", "all-stars", "eastern", "western", "conference",
    "division", "fg", "ft", "3pt", "ot", "i", "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december", "monday", "tuesday", "wednesday", "thursday",
    "friday", "saturday", "sunday", "next", "up", "over", "through", "thanks", "following", "coming", "going",
    "it's", "there", "here", "since", "if", "although", "though", "overall", "head", "coach", "rookie",
    "then", "also", "elsewhere", "together", "led",
];

const VENUE_WORDS: &[&str] = &[
    "arena", "center", "centre", "garden", "gardens", "stadium", "forum", "palace", "court", "coliseum", "field",
    "hall", "fieldhouse", "dome", "square", "park",
];

/// Lowercases and removes a possessive ending.
pub fn norm(token: &str) -> String {
    let lower = token.to_lowercase();
    for suffix in ["'s", "\u{2019}s", "'", "\u{2019}"] {
        if lower.len() > suffix.len() + 1 {
            if let Some(stripped) = lower.strip_suffix(suffix) {
                return stripped.to_string();
            }
        }
    }
    lower
}

fn starts_capitalised(token: &str) -> bool {
    token.chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
}

fn name_like(token: &str) -> bool {
    let mut chars = token.chars();
    let Some(first) = chars.next() else { return false };
    first.is_uppercase()
        && token.chars().count() >= 2
        && chars.all(|c| c.is_alphabetic() || matches!(c, '.' | '\'' | '\u{2019}' | '-'))
        && !NOT_NAMES.contains(&norm(token).as_str())
}

fn split_lower(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

/// Surface forms for the entities of one game.
#[derive(Debug, Clone)]
pub struct Lexicon<'g> {
    game: &'g GameData,
    /// Sorted by decreasing length; earlier entries win ties.
    forms: Vec<(Vec<String>, Target)>,
    surnames: HashMap<String, Vec<usize>>,
}

impl<'g> Lexicon<'g> {
    pub fn new(game: &'g GameData) -> Self {
        let mut forms: Vec<(Vec<String>, Target)> = Vec::new();
        let mut surnames: HashMap<String, Vec<usize>> = HashMap::new();

        for (i, p) in game.players.iter().enumerate() {
            let mut full = split_lower(&p.name);
            forms.push((full.clone(), Target::Player(i)));
            let undotted: Vec<String> = full.iter().map(|t| t.replace('.', "")).collect();
            if undotted != full {
                forms.push((undotted, Target::Player(i)));
            }
            if full.len() > 2 && SUFFIXES.contains(&full[full.len() - 1].as_str()) {
                full.pop();
                forms.push((full.clone(), Target::Player(i)));
            }
            if full.len() > 1 {
                surnames.entry(full[full.len() - 1].clone()).or_default().push(i);
            }
        }
        for (surname, players) in &surnames {
            if players.len() == 1 {
                forms.push((vec![surname.clone()], Target::Player(players[0])));
            }
        }

        let mut team_forms = |city: &str, nickname: &str, aliases: Vec<String>, side: Option<Side>| {
            let name = format!("{city} {nickname}");
            let team = |bare_city| Target::Team { side, name: name.clone(), bare_city };
            forms.push((split_lower(city), team(true)));
            for n in std::iter::once(nickname.to_string()).chain(aliases) {
                forms.push((split_lower(&n), team(false)));
                forms.push((split_lower(&format!("{city} {n}")), team(false)));
            }
        };
        for side in [Side::Home, Side::Visitor] {
            let t = game.team(side);
            team_forms(&t.city, &t.nickname, crate::teams::name_forms(&t.nickname), Some(side));
        }
        for f in FRANCHISES {
            if game.home.matches(f.nickname) || game.visitor.matches(f.nickname) {
                continue;
            }
            team_forms(f.city, f.nickname, f.aliases.iter().map(|a| a.to_string()).collect(), None);
        }
        // Stable sort keeps players ahead of game teams ahead of franchises.
        forms.sort_by_key(|(f, _)| std::cmp::Reverse(f.len()));
        Self { game, forms, surnames }
    }

    pub fn game(&self) -> &'g GameData {
        self.game
    }

    fn form_at(&self, tokens: &[String], pos: usize) -> Option<(usize, &Target)> {
        if !starts_capitalised(&tokens[pos]) {
            return None;
        }
        self.forms.iter().find_map(|(form, target)| {
            let end = pos + form.len();
            (end <= tokens.len() && form.iter().zip(&tokens[pos..end]).all(|(f, t)| *f == norm(t)))
                .then_some((form.len(), target))
        })
    }

    /// Every mention, left to right, without overlaps.
    pub fn scan(&self, tokens: &[String], sentence_of: &[usize]) -> Vec<Mention> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < tokens.len() {
            let lower = tokens[pos].to_lowercase();
            let pronoun = match lower.as_str() {
                "he" | "his" | "him" | "himself" => Some(MentionKind::PlayerPronoun),
                "they" | "their" | "them" | "themselves" => Some(MentionKind::TeamPronoun),
                _ => None,
            };
            if let Some(kind) = pronoun {
                out.push(Mention { kind, span: Span::new(pos, pos), sentence: sentence_of[pos], bare_city: false });
                pos += 1;
                continue;
            }
            if let Some(m) = self.name_run(tokens, pos, sentence_of) {
                pos = m.span.end + 1;
                out.push(m);
                continue;
            }
            if let Some((len, target)) = self.form_at(tokens, pos) {
                let span = Span::new(pos, pos + len - 1);
                let (kind, bare_city) = match target {
                    Target::Player(i) => (MentionKind::Player { index: *i }, false),
                    Target::Team { side, name, bare_city } => {
                        (MentionKind::Team { side: *side, name: name.clone() }, *bare_city)
                    }
                };
                out.push(Mention { kind, span, sentence: sentence_of[pos], bare_city });
                pos += len;
                continue;
            }
            pos += 1;
        }
        out
    }

    /// A run of two or three name-like tokens that is not a known full
    /// name: either a misnamed roster player or an unknown person.
    fn name_run(&self, tokens: &[String], pos: usize, sentence_of: &[usize]) -> Option<Mention> {
        if let Some((len, Target::Player(_))) = self.form_at(tokens, pos) {
            if len > 1 {
                return None;
            }
        }
        if matches!(self.form_at(tokens, pos), Some((_, Target::Team { .. }))) {
            return None;
        }
        // Only whole runs: a run never starts inside another one.
        if pos > 0 && sentence_of[pos - 1] == sentence_of[pos] && name_like(&tokens[pos - 1]) {
            return None;
        }
        let mut end = pos;
        while end < tokens.len() && end - pos < 3 && name_like(&tokens[end]) && sentence_of[end] == sentence_of[pos] {
            if end > pos && self.form_at(tokens, end).is_some_and(|(len, t)| len > 1 || matches!(t, Target::Team { .. })) {
                break;
            }
            end += 1;
        }
        let len = end - pos;
        if len < 2 {
            return None;
        }
        if tokens.get(end).is_some_and(|t| VENUE_WORDS.contains(&norm(t).as_str()) || name_like(t))
            || tokens[pos..end].iter().any(|t| VENUE_WORDS.contains(&norm(t).as_str()))
        {
            return None;
        }
        let sentence_initial = pos == 0 || sentence_of[pos - 1] != sentence_of[pos];
        if sentence_initial && len == 3 {
            // A capitalised sentence opener before a two-token name.
            let rest = self.name_run_from(tokens, pos + 1, end, sentence_of);
            return rest;
        }
        if sentence_initial && self.surnames.contains_key(&norm(&tokens[end - 1])) && len == 2 {
            return None;
        }
        self.name_run_from(tokens, pos, end, sentence_of)
    }

    fn name_run_from(&self, tokens: &[String], pos: usize, end: usize, sentence_of: &[usize]) -> Option<Mention> {
        if self.form_at(tokens, pos).is_some_and(|(len, _)| len == end - pos) {
            return None;
        }
        let span = Span::new(pos, end - 1);
        let sentence = sentence_of[pos];
        let surname = norm(&tokens[end - 1]);
        let first = norm(&tokens[pos]);
        let kind = match self.surnames.get(&surname) {
            Some(players) => {
                let compatible = players.iter().any(|&i| {
                    let given = split_lower(&self.game.players[i].name)[0].replace('.', "");
                    let first = first.replace('.', "");
                    given.starts_with(&first) || first.starts_with(&given)
                });
                if compatible {
                    return None;
                }
                let mut candidates = players.clone();
                candidates.extend(self.game.players.iter().enumerate().filter_map(|(i, p)| {
                    (split_lower(&p.name)[0] == first && !players.contains(&i)).then_some(i)
                }));
                MentionKind::Misnamed { candidates }
            }
            None => MentionKind::UnknownPerson,
        };
        Some(Mention { kind, span, sentence, bare_city: false })
    }
}

//! Pattern rules that turn a token stream into claims.

use chrono::Weekday;

use super::lexicon::MentionKind;
use super::numbers::{digit_value, is_ordinal, parse_number_token, parse_pair_token};
use super::{Claim, ClaimValue, Doc, EntityKind, EntityRef, LedScope, Property, ShotKind, Span};
use crate::annotation::TokenizedText;
use crate::game::{GameData, Period, Stat};

const CLAUSE_BREAKS: &[&str] = &[",", ";", ":", ".", "!", "?", "--", "(", ")"];

const RUN_WORDS: &[&str] = &[
    "run", "lead", "spurt", "streak", "advantage", "deficit", "margin", "edge", "cushion", "surge", "burst", "flurry",
    "stretch", "blitz", "series",
];

const RECORD_VERBS: &[&str] = &[
    "improved", "improve", "improves", "fell", "fall", "falls", "dropped", "drop", "drops", "moved", "move", "moves",
    "slipped", "slip", "evened", "climbed", "pushed", "advanced", "raised", "lowered", "extended", "sank", "went",
];

const OUTCOME_WORDS: &[&str] = &[
    "defeated", "defeat", "beat", "beats", "topped", "edged", "downed", "routed", "crushed", "won", "win", "victory",
    "lost", "loss", "fell", "final", "outlasted", "blew", "dispatched", "triumph",
];

const WIN_VERBS: &[&str] = &[
    "defeated", "defeats", "defeating", "beat", "beats", "beating", "topped", "tops", "topping", "edged", "edges",
    "edging", "downed", "routed", "routs", "routing", "crushed", "outlasted", "dispatched", "blasted", "trounced",
    "thumped", "upended", "toppled", "stunned", "survived",
];

const LOSS_VERBS: &[&str] = &["lost", "lose", "loses", "losing", "fell", "falls", "falling"];

const SCORING_VERBS: &[&str] = &[
    "scored", "score", "scores", "put", "poured", "had", "has", "tallied", "totaled", "totalled", "managed", "posted",
    "racked", "dropped", "shot", "hit", "made", "combined", "netted", "produced", "registered", "recorded",
    "mustered", "finished", "ended", "piled",
];

const BARRIERS: &[&str] = &[
    "bench", "reserves", "reserve", "starters", "combined", "together", "both", "duo", "trio", "teammates", "each",
    "apiece", "frontcourt", "backcourt",
];

const NEGATIONS: &[&str] =
    &["missed", "miss", "misses", "shy", "short", "nearly", "almost", "narrowly", "flirted", "near", "without", "no"];

enum Noun {
    Stat(Stat),
    Threes,
}

enum StatSubject {
    Player(Option<usize>),
    Team(usize),
}

struct Extractor<'d, 'a> {
    doc: &'d Doc<'a>,
    game: &'d GameData,
    doc_id: &'d str,
    claims: Vec<Claim>,
    used: Vec<bool>,
    /// Tokens inside season-average or streak phrases.
    suppressed: Vec<bool>,
    /// Tokens in clauses about the season or a career rather than the game.
    seasonal: Vec<bool>,
}

/// Claims found in one summary, in text order. Subjects given by pronouns
/// or left implicit are resolved afterwards by [`super::resolve_claim_subjects`].
pub fn extract_claims(text: &TokenizedText, game: &GameData) -> Vec<Claim> {
    let doc = Doc::new(&text.tokens, game);
    let n = doc.len();
    let mut ex = Extractor {
        doc: &doc,
        game,
        doc_id: &text.doc_id,
        claims: Vec::new(),
        used: vec![false; n],
        suppressed: vec![false; n],
        seasonal: vec![false; n],
    };
    for s in 0..doc.sentences.len() {
        ex.sentence(s);
    }
    let mut claims = ex.claims;
    claims.sort_by_key(|c| (c.span.start, c.span.end, c.value_spans.first().map(|v| v.start)));
    claims
}

fn weekday(token: &str) -> Option<Weekday> {
    const DAYS: [(&str, Weekday); 7] = [
        ("Monday", Weekday::Mon),
        ("Tuesday", Weekday::Tue),
        ("Wednesday", Weekday::Wed),
        ("Thursday", Weekday::Thu),
        ("Friday", Weekday::Fri),
        ("Saturday", Weekday::Sat),
        ("Sunday", Weekday::Sun),
    ];
    DAYS.iter().find(|(name, _)| *name == token).map(|&(_, d)| d)
}

fn shot_kind_token(lower: &str) -> Option<ShotKind> {
    match lower {
        "fg" | "fgs" => Some(ShotKind::FieldGoals),
        "3pt" | "3p" | "3-pt" | "3pm" | "3pts" => Some(ShotKind::ThreePointers),
        "ft" | "fts" => Some(ShotKind::FreeThrows),
        _ => None,
    }
}

fn led_stat(word: &str) -> Option<Stat> {
    match word {
        "points" | "scoring" | "scorers" | "scorer" => Some(Stat::Points),
        "rebounds" | "rebounding" | "rebounders" | "rebounder" | "boards" | "glass" => Some(Stat::Rebounds),
        "assists" | "passing" | "passer" | "passers" | "playmaking" | "dimes" => Some(Stat::Assists),
        "steals" => Some(Stat::Steals),
        "blocks" | "shot-blocking" | "blocked" => Some(Stat::Blocks),
        _ => None,
    }
}

fn is_possessive(token: &str) -> bool {
    token.ends_with('\'') || token.ends_with("'s") || token.ends_with('\u{2019}') || token.ends_with("\u{2019}s")
}

impl<'d, 'a> Extractor<'d, 'a> {
    /// Lowercased token, or "" outside the document.
    fn low(&self, i: isize) -> &'d str {
        if i < 0 {
            return "";
        }
        let doc: &'d Doc<'a> = self.doc;
        doc.lower.get(i as usize).map_or("", String::as_str)
    }

    /// Lowercased token, or "" outside sentence `sent`.
    fn at(&self, i: isize, sent: Span) -> &'d str {
        if i < sent.start as isize || i > sent.end as isize {
            ""
        } else {
            self.low(i)
        }
    }

    fn is_break(&self, i: usize) -> bool {
        CLAUSE_BREAKS.contains(&self.low(i as isize))
    }

    fn clause(&self, i: usize, sent: Span) -> Span {
        let mut start = i;
        while start > sent.start && !self.is_break(start - 1) {
            start -= 1;
        }
        let mut end = i;
        while end < sent.end && !self.is_break(end + 1) {
            end += 1;
        }
        Span::new(start, end)
    }

    fn mention(&self, mi: usize) -> &super::Mention {
        &self.doc.mentions[mi]
    }

    fn entity(&self, mi: usize) -> EntityRef {
        let m = self.mention(mi);
        let game = self.game;
        let named = |kind| EntityRef { kind, implicit: false, ..EntityRef::unresolved(kind, Some(m.span)) };
        match &m.kind {
            MentionKind::Player { index } => {
                let p = &game.players[*index];
                EntityRef { resolved_name: Some(p.name.clone()), side: Some(p.side), ..named(EntityKind::Player) }
            }
            MentionKind::Misnamed { candidates } => {
                let names: Vec<String> = candidates.iter().map(|&i| game.players[i].name.clone()).collect();
                EntityRef {
                    resolved_name: names.first().cloned(),
                    side: candidates.first().map(|&i| game.players[i].side),
                    misnamed: true,
                    candidates: names,
                    ..named(EntityKind::Player)
                }
            }
            MentionKind::UnknownPerson => EntityRef {
                resolved_name: Some(self.doc.tokens[m.span.start..=m.span.end].join(" ")),
                unknown: true,
                ..named(EntityKind::Player)
            },
            MentionKind::Team { side, name } => EntityRef {
                resolved_name: Some(name.clone()),
                side: *side,
                unknown: side.is_none(),
                ..named(EntityKind::Team)
            },
            MentionKind::PlayerPronoun => EntityRef::unresolved(EntityKind::Player, Some(m.span)),
            MentionKind::TeamPronoun => EntityRef::unresolved(EntityKind::Team, Some(m.span)),
        }
    }

    fn entity_or_implicit(&self, mi: Option<usize>, wants: EntityKind) -> EntityRef {
        mi.map_or_else(|| EntityRef::unresolved(wants, None), |mi| self.entity(mi))
    }

    fn last_before(&self, i: usize, sent: Span, pred: impl Fn(&super::Mention) -> bool) -> Option<usize> {
        (0..self.doc.mentions.len())
            .rev()
            .find(|&mi| {
                let m = self.mention(mi);
                m.span.end < i && m.span.start >= sent.start && pred(m)
            })
            .filter(|&mi| self.mention(mi).span.start >= sent.start)
    }

    fn first_after(&self, i: usize, limit: usize, pred: impl Fn(&super::Mention) -> bool) -> Option<usize> {
        (0..self.doc.mentions.len()).find(|&mi| {
            let m = self.mention(mi);
            m.span.start > i && m.span.start <= limit && pred(m)
        })
    }

    fn player_before(&self, i: usize, sent: Span) -> Option<usize> {
        self.last_before(i, sent, |m| m.is_player_like())
    }

    fn team_before(&self, i: usize, sent: Span) -> Option<usize> {
        self.last_before(i, sent, |m| m.is_team_like())
    }

    fn team_after(&self, i: usize, limit: usize) -> Option<usize> {
        self.first_after(i, limit, |m| matches!(m.kind, MentionKind::Team { .. }))
    }

    fn number_at(&self, i: usize, sent: Span) -> Option<super::NumberMatch> {
        if i > sent.end {
            return None;
        }
        parse_number_token(self.doc.tokens, i).filter(|m| m.span.end <= sent.end)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        sentence: usize,
        subject: EntityRef,
        object: Option<EntityRef>,
        property: Property,
        value: ClaimValue,
        value_spans: Vec<Span>,
        trigger: Option<Span>,
    ) {
        let sent = self.doc.sentences[sentence];
        let parts = value_spans
            .iter()
            .copied()
            .chain(trigger)
            .chain(subject.span.filter(|s| sent.contains(s)))
            .chain(object.as_ref().and_then(|o| o.span).filter(|s| sent.contains(s)));
        let Some(span) = parts.reduce(|a, b| a.cover(&b)) else { return };
        self.claims.push(Claim {
            doc_id: self.doc_id.to_string(),
            span,
            subject,
            object,
            property,
            value,
            value_spans,
            trigger,
            sentence,
        });
    }

    fn mark(flags: &mut [bool], span: Span) {
        for f in &mut flags[span.start..=span.end] {
            *f = true;
        }
    }

    fn sentence(&mut self, s: usize) {
        let sent = self.doc.sentences[s];
        if let Some(p) = self.next_game_trigger(sent) {
            self.next_game(s, p, sent);
            return;
        }
        if self.historical(sent) {
            return;
        }
        self.season_averages(s, sent);
        self.streaks(s, sent);
        let periods = self.periods(sent);
        self.numbers(s, sent, &periods);
        self.weekdays(s, sent);
        self.comparatives(s, sent, &periods);
    }

    fn next_game_trigger(&self, sent: Span) -> Option<usize> {
        (sent.start..=sent.end).find(|&i| {
            let w = self.low(i as isize);
            matches!(w, "next" | "upcoming" | "will")
                || (w == "action" && matches!(self.low(i as isize - 1), "to" | "in"))
        })
    }

    /// Forward-looking sentences: every team, weekday and venue word after
    /// the trigger is a claim the game data cannot support.
    fn next_game(&mut self, s: usize, p: usize, sent: Span) {
        let mut i = p + 1;
        while i <= sent.end {
            if let Some(mi) = self.doc.mention_at[i] {
                let m = self.mention(mi).clone();
                if let MentionKind::Team { name, .. } = &m.kind {
                    self.push(s, EntityRef::game(), None, Property::NextGame, ClaimValue::Text(name.clone()), vec![m.span], None);
                }
                i = m.span.end + 1;
                continue;
            }
            if let Some(d) = weekday(&self.doc.tokens[i]) {
                self.push(s, EntityRef::game(), None, Property::NextGame, ClaimValue::Weekday(d), vec![Span::single(i)], None);
            } else if matches!(self.low(i as isize), "home" | "road") {
                let v = ClaimValue::Text(self.doc.tokens[i].clone());
                self.push(s, EntityRef::game(), None, Property::NextGame, v, vec![Span::single(i)], None);
            }
            i += 1;
        }
    }

    fn historical(&self, sent: Span) -> bool {
        (sent.start..=sent.end).any(|i| {
            let i = i as isize;
            match self.low(i) {
                "previous" | "prior" | "earlier" => true,
                "last" => (1..=3).any(|k| {
                    matches!(
                        self.at(i + k, sent),
                        "game" | "games" | "meeting" | "meetings" | "season" | "time" | "outing" | "outings"
                            | "contest" | "contests" | "matchup" | "year" | "night" | "week"
                    )
                }),
                _ => false,
            }
        })
    }

    fn season_averages(&mut self, s: usize, sent: Span) {
        for i in sent.start..=sent.end {
            let ii = i as isize;
            let w = self.low(ii);
            let average = matches!(w, "averaging" | "averages" | "averaged")
                || (w == "average" && matches!(self.at(ii - 1, sent), "an" | "his" | "their" | "season"));
            if average && !self.suppressed[i] {
                let mut end = self.clause(i, sent).end;
                if end > i && end == sent.end && matches!(self.low(end as isize), "." | "!" | "?") {
                    end -= 1;
                }
                let span = Span::new(i, end);
                let subject = self.entity_or_implicit(self.player_before(i, sent), EntityKind::Player);
                self.push(s, subject, None, Property::SeasonAverage, ClaimValue::None, vec![span], None);
                Self::mark(&mut self.suppressed, span);
            }
            if w == "per" && matches!(self.at(ii + 1, sent), "game" | "contest" | "night" | "outing") {
                let from = i.saturating_sub(4).max(sent.start);
                if let Some(j) = (from..i).find(|&j| self.number_at(j, sent).is_some_and(|m| m.span.end < i)) {
                    if !self.suppressed[j] {
                        let span = Span::new(j, i + 1);
                        let subject = self.entity_or_implicit(self.player_before(j, sent), EntityKind::Player);
                        self.push(s, subject, None, Property::SeasonAverage, ClaimValue::None, vec![span], None);
                        Self::mark(&mut self.suppressed, span);
                    }
                }
            }
            let seasonal = (w == "this" && matches!(self.at(ii + 1, sent), "season" | "year"))
                || (w == "on" && self.at(ii + 1, sent) == "the" && matches!(self.at(ii + 2, sent), "season" | "year"))
                || (w == "so" && self.at(ii + 1, sent) == "far")
                || (w == "career" && !matches!(self.at(ii + 1, sent), "high" | "best" | "-"));
            if seasonal {
                let clause = self.clause(i, sent);
                Self::mark(&mut self.seasonal, clause);
            }
        }
    }

    fn streaks(&mut self, s: usize, sent: Span) {
        const STREAK_NOUNS: &[&str] = &[
            "win", "wins", "loss", "losses", "game", "games", "victory", "victories", "defeat", "defeats", "road",
            "home", "contest", "contests",
        ];
        for i in sent.start..=sent.end {
            let ii = i as isize;
            let mut span = None;
            if is_ordinal(&self.doc.tokens[i]) && matches!(self.at(ii + 1, sent), "straight" | "consecutive") {
                let mut end = i + 1;
                while end < sent.end && STREAK_NOUNS.contains(&self.low(end as isize + 1)) {
                    end += 1;
                }
                span = Some(Span::new(i, end));
            } else if self.low(ii) == "streak" {
                let mut start = i;
                while start > sent.start && i - start < 4 {
                    let prev = self.low(start as isize - 1);
                    if self.is_break(start - 1) || matches!(prev, "a" | "an" | "the" | "their" | "his" | "its") {
                        break;
                    }
                    start -= 1;
                }
                span = Some(Span::new(start, i));
            }
            if let Some(span) = span {
                if self.suppressed[span.start] {
                    continue;
                }
                let subject = self.entity_or_implicit(self.team_before(span.start, sent), EntityKind::Team);
                self.push(s, subject, None, Property::Streak, ClaimValue::None, vec![span], None);
                Self::mark(&mut self.suppressed, span);
            }
        }
    }

    /// Period phrases in the sentence; `None` marks overtime.
    fn periods(&self, sent: Span) -> Vec<(Option<Period>, Span)> {
        let mut out = Vec::new();
        for i in sent.start..=sent.end {
            let ii = i as isize;
            let w = self.low(ii);
            let n = self.at(ii + 1, sent);
            let ordinal = match w {
                "first" | "1st" | "opening" => Some(1),
                "second" | "2nd" => Some(2),
                "third" | "3rd" => Some(3),
                "fourth" | "4th" => Some(4),
                "final" | "last" | "closing" => Some(5),
                _ => None,
            };
            if let Some(o) = ordinal {
                if matches!(n, "quarter" | "period" | "frame" | "stanza" | "qtr") {
                    let q = match o {
                        1 => Period::Q1,
                        2 => Period::Q2,
                        3 => Period::Q3,
                        _ => Period::Q4,
                    };
                    out.push((Some(q), Span::new(i, i + 1)));
                } else if n == "half" {
                    match o {
                        1 => out.push((Some(Period::H1), Span::new(i, i + 1))),
                        2 | 5 => out.push((Some(Period::H2), Span::new(i, i + 1))),
                        _ => {}
                    }
                }
            }
            if matches!(w, "halftime" | "half-time" | "intermission") {
                out.push((Some(Period::H1), Span::single(i)));
            }
            if matches!(w, "half" | "break")
                && self.at(ii - 1, sent) == "the"
                && matches!(self.at(ii - 2, sent), "at" | "into" | "by")
            {
                out.push((Some(Period::H1), Span::new(i - 1, i)));
            }
            if matches!(w, "overtime" | "ot" | "overtimes") || (w == "extra" && matches!(n, "period" | "session" | "frame")) {
                out.push((None, Span::single(i)));
            }
        }
        out
    }

    /// The period a comparison or score at `[i, end]` refers to: a period
    /// phrase shortly after it in the same clause, else one before it in
    /// the clause (not separated by an outcome verb when `stop_at_outcome`).
    fn period_near(
        &self,
        i: usize,
        end: usize,
        periods: &[(Option<Period>, Span)],
        sent: Span,
        stop_at_outcome: bool,
    ) -> Option<Option<Period>> {
        let clause = self.clause(i, sent);
        if let Some((p, _)) = periods.iter().find(|(_, sp)| sp.start > end && sp.start <= end + 10 && clause.contains(sp)) {
            return Some(*p);
        }
        periods
            .iter()
            .rev()
            .find(|(_, sp)| {
                sp.end < i
                    && clause.contains(sp)
                    && !(stop_at_outcome && (sp.end + 1..i).any(|j| OUTCOME_WORDS.contains(&self.low(j as isize))))
            })
            .map(|(p, _)| *p)
    }

    fn has_outcome(&self, sent: Span) -> bool {
        (sent.start..=sent.end).any(|j| OUTCOME_WORDS.contains(&self.low(j as isize)) || self.outscore_at(j, sent).is_some())
    }

    fn numbers(&mut self, s: usize, sent: Span, periods: &[(Option<Period>, Span)]) {
        let mut i = sent.start;
        while i <= sent.end {
            if self.used[i] {
                i += 1;
                continue;
            }
            if let Some(next) = self.shooting(s, i, sent) {
                i = next;
            } else if let Some(next) = self.pair(s, i, sent, periods) {
                i = next;
            } else if let Some(next) = self.stat(s, i, sent, periods) {
                i = next;
            } else {
                i += 1;
            }
        }
    }

    /// Two numbers joined by a dash, as one token or three.
    fn pair_at(&self, i: usize, sent: Span) -> Option<(u32, u32, Span, Span, usize)> {
        if let Some((x, y)) = parse_pair_token(&self.doc.tokens[i]) {
            return Some((x, y, Span::single(i), Span::single(i), i));
        }
        if i + 2 > sent.end || !matches!(self.doc.tokens[i + 1].as_str(), "-" | "\u{2013}") {
            return None;
        }
        let x = digit_value(&self.doc.tokens[i])?;
        let y = digit_value(&self.doc.tokens[i + 2])?;
        Some((x, y, Span::single(i), Span::single(i + 2), i + 2))
    }

    fn stat_subject(&self, i: usize, sent: Span) -> StatSubject {
        let pl = self.player_before(i, sent);
        let tm = self.team_before(i, sent);
        let verb_follows = |t: usize| {
            let end = self.mention(t).span.end as isize;
            SCORING_VERBS.contains(&self.at(end + 1, sent)) || SCORING_VERBS.contains(&self.at(end + 2, sent))
        };
        match (pl, tm) {
            (Some(p), Some(t)) if self.mention(t).span.start > self.mention(p).span.start && verb_follows(t) => {
                StatSubject::Team(t)
            }
            (Some(p), _) => StatSubject::Player(Some(p)),
            (None, Some(t)) => StatSubject::Team(t),
            (None, None) => StatSubject::Player(None),
        }
    }

    fn barrier_between(&self, from: usize, to: usize) -> bool {
        (from..to).any(|j| BARRIERS.contains(&self.low(j as isize)))
    }

    fn shooting(&mut self, s: usize, i: usize, sent: Span) -> Option<usize> {
        let ii = i as isize;
        // "9 - 17 FG"
        if let Some((x, y, sx, sy, e)) = self.pair_at(i, sent) {
            if let Some(shot) = shot_kind_token(self.at(e as isize + 1, sent)) {
                Self::mark(&mut self.used, Span::new(i, e + 1));
                if x <= y {
                    self.push_shot(s, i, sent, shot, (x, y), vec![sx, sy]);
                }
                return Some(e + 2);
            }
        }
        // "9 - of - 17", "9 of 17", "9-of-17"
        let parts: Vec<&str> = self.doc.tokens[i].split('-').collect();
        let (x, y, sx, sy, e) = if parts.len() == 3 && matches!(parts[1], "of" | "for") {
            (digit_value(parts[0])?, digit_value(parts[2])?, Span::single(i), Span::single(i), i)
        } else {
            let m = self.number_at(i, sent).filter(|_| !matches!(self.low(ii), "a" | "an"))?;
            let k = m.span.end as isize;
            let (link, b) = if self.at(k + 1, sent) == "-" && matches!(self.at(k + 2, sent), "of" | "for") && self.at(k + 3, sent) == "-" {
                (true, m.span.end + 4)
            } else if matches!(self.at(k + 1, sent), "of" | "for") {
                (true, m.span.end + 2)
            } else {
                (false, 0)
            };
            if !link {
                return None;
            }
            let n = self.number_at(b, sent).filter(|_| !matches!(self.low(b as isize), "a" | "an"))?;
            (m.value, n.value, m.span, n.span, n.span.end)
        };
        if x > y || y > 60 {
            return None;
        }
        let scan_end = self.clause(e, sent).end.min(e + 7);
        let mut shot = ShotKind::FieldGoals;
        for j in e + 1..=scan_end {
            match self.low(j as isize) {
                "free" | "line" | "charity" | "stripe" | "foul" | "ft" => {
                    shot = ShotKind::FreeThrows;
                    break;
                }
                "three" | "three-point" | "3-point" | "deep" | "beyond" | "arc" | "downtown" | "long-range" | "3pt"
                | "threes" | "three-pointers" | "3-pointers" | "distance" => {
                    shot = ShotKind::ThreePointers;
                    break;
                }
                "field" | "fg" => break,
                _ => {}
            }
        }
        Self::mark(&mut self.used, Span::new(i, e));
        self.push_shot(s, i, sent, shot, (x, y), vec![sx, sy]);
        Some(e + 1)
    }

    fn push_shot(&mut self, s: usize, i: usize, sent: Span, shot: ShotKind, (x, y): (u32, u32), spans: Vec<Span>) {
        if let StatSubject::Player(mi) = self.stat_subject(i, sent) {
            let from = mi.map_or(sent.start, |mi| self.mention(mi).span.end + 1);
            if self.barrier_between(from, i) {
                return;
            }
            let subject = self.entity_or_implicit(mi, EntityKind::Player);
            self.push(s, subject, None, Property::Shooting { shot }, ClaimValue::Pair(x, y), spans, None);
        }
    }

    fn push_record(&mut self, s: usize, team: EntityRef, (x, y): (u32, u32), sx: Span, sy: Span) {
        self.push(s, team.clone(), None, Property::RecordWins, ClaimValue::Int(x), vec![sx], None);
        self.push(s, team, None, Property::RecordLosses, ClaimValue::Int(y), vec![sy], None);
    }

    /// The team that a score pair at `i` is told from: the subject of the
    /// nearest preceding out-scored/led/defeated trigger.
    fn comparison_subject(&self, i: usize, sent: Span) -> Option<usize> {
        for j in (sent.start..i).rev() {
            let w = self.low(j as isize);
            let trigger_end = if let Some(t) = self.outscore_at(j, sent) {
                t.end
            } else if matches!(w, "led" | "leading" | "leads") || WIN_VERBS.contains(&w) {
                j
            } else {
                continue;
            };
            if self.at(trigger_end as isize + 1, sent) == "by" {
                return self.first_after(trigger_end, sent.end, |m| m.is_team_like());
            }
            return self.team_before(j, sent);
        }
        None
    }

    fn pair(&mut self, s: usize, i: usize, sent: Span, periods: &[(Option<Period>, Span)]) -> Option<usize> {
        let (x, y, sx, sy, e) = self.pair_at(i, sent)?;
        Self::mark(&mut self.used, Span::new(i, e));
        let next_i = Some(e + 1);
        let (ii, ee) = (i as isize, e as isize);
        let prev = self.at(ii - 1, sent);
        let next = self.at(ee + 1, sent);
        if x > 200 || y > 200 || RUN_WORDS.contains(&next) {
            return next_i;
        }
        if prev == "(" && next == ")" {
            let team = (i >= 2).then(|| self.doc.mention_at[i - 2]).flatten();
            if let Some(mi) = team.filter(|&mi| matches!(self.mention(mi).kind, MentionKind::Team { .. })) {
                let team = self.entity(mi);
                self.push_record(s, team, (x, y), sx, sy);
            }
            return next_i;
        }
        let split = matches!(next, "at" | "against" | "versus" | "vs" | "vs." | "when" | "since" | "without" | "with" | "in")
            || (next == "on"
                && !(self.at(ee + 2, sent) == "the" && matches!(self.at(ee + 3, sent), "season" | "year")));
        let record_context = (prev == "to" && RECORD_VERBS.contains(&self.at(ii - 2, sent)))
            || prev == "now"
            || (prev == "at" && matches!(self.at(ii - 2, sent), "sit" | "sits" | "stand" | "stands"))
            || (matches!(prev, "is" | "are" | "remain" | "remains") && self.team_before(i, sent).is_some());
        if record_context {
            if !split {
                let team = self.entity_or_implicit(self.team_before(i, sent), EntityKind::Team);
                self.push_record(s, team, (x, y), sx, sy);
            }
            return next_i;
        }
        let period = match self.period_near(i, e, periods, sent, true) {
            Some(Some(p)) => p,
            Some(None) => return next_i,
            None if self.has_outcome(sent) => Period::Game,
            None => {
                let nearest = periods.iter().min_by_key(|(_, sp)| sp.start.abs_diff(i));
                match nearest {
                    Some((Some(p), _)) => *p,
                    _ => return next_i,
                }
            }
        };
        let subject = match period {
            Period::Game => EntityRef::game(),
            _ => self.comparison_subject(i, sent).map_or_else(EntityRef::game, |mi| self.entity(mi)),
        };
        self.push(s, subject, None, Property::PeriodScore { period }, ClaimValue::Pair(x, y), vec![sx, sy], None);
        next_i
    }

    fn stat_noun(&self, k: usize, sent: Span, after_article: bool) -> Option<(Noun, usize)> {
        let kk = k as isize;
        let noun = match self.at(kk, sent) {
            "points" | "point" | "pts" => Noun::Stat(Stat::Points),
            "rebounds" | "rebound" | "boards" | "board" | "reb" | "rebs" => Noun::Stat(Stat::Rebounds),
            "assists" | "assist" | "dimes" | "dime" | "ast" => Noun::Stat(Stat::Assists),
            "steals" | "steal" | "stl" => Noun::Stat(Stat::Steals),
            "blocks" | "block" | "blk" => Noun::Stat(Stat::Blocks),
            "blocked" if matches!(self.at(kk + 1, sent), "shots" | "shot") => return Some((Noun::Stat(Stat::Blocks), k + 1)),
            "turnovers" | "turnover" => Noun::Stat(Stat::Turnovers),
            "threes" | "three-pointers" | "three-pointer" | "3-pointers" | "3-pointer" | "treys" | "trey" | "3s" => Noun::Threes,
            "three" | "3" if self.at(kk + 1, sent) == "-" && matches!(self.at(kk + 2, sent), "pointers" | "pointer") => {
                return Some((Noun::Threes, k + 2));
            }
            "three" if after_article => Noun::Threes,
            _ => return None,
        };
        Some((noun, k))
    }

    fn stat(&mut self, s: usize, i: usize, sent: Span, periods: &[(Option<Period>, Span)]) -> Option<usize> {
        let m = self.number_at(i, sent)?;
        let article = matches!(self.low(i as isize), "a" | "an");
        let (noun, noun_end) = self.stat_noun(m.span.end + 1, sent, article)?;
        Self::mark(&mut self.used, m.span);
        let next_i = Some(noun_end + 1);
        if self.suppressed[i] || self.seasonal[i] {
            return next_i;
        }
        let ii = i as isize;
        let prev = self.at(ii - 1, sent);
        if matches!(
            prev,
            "by" | "of" | "than" | "within" | "over" | "under" | "past" | "first" | "final" | "last" | "next" | "opening"
                | "closing" | "only" | "least" | "about" | "nearly" | "almost" | "the" | "-" | "another" | "straight"
        ) {
            return next_i;
        }
        let ne = noun_end as isize;
        let (a1, a2, a3) = (self.at(ne + 1, sent), self.at(ne + 2, sent), self.at(ne + 3, sent));
        let partial = (a1 == "in" && a2 == "the" && a3 == "paint")
            || (a1 == "off" && a2 != "the")
            || matches!(a1, "from" | "per")
            || (a1 == "a" && a2 == "game");
        if partial {
            return next_i;
        }
        let clause = self.clause(i, sent);
        let period = periods.iter().find(|(_, sp)| clause.contains(sp)).map(|(p, _)| *p);
        let value = ClaimValue::Int(m.value);
        match self.stat_subject(i, sent) {
            StatSubject::Player(mi) => {
                let from = mi.map_or(sent.start, |mi| self.mention(mi).span.end + 1);
                if self.barrier_between(from, i) || period.is_some() {
                    return next_i;
                }
                let property = match noun {
                    Noun::Stat(stat) => Property::Stat { stat },
                    Noun::Threes => Property::Shooting { shot: ShotKind::ThreePointers },
                };
                let subject = self.entity_or_implicit(mi, EntityKind::Player);
                self.push(s, subject, None, property, value, vec![m.span], None);
            }
            StatSubject::Team(t) => {
                let from = self.mention(t).span.end + 1;
                if self.barrier_between(from, i) || !matches!(noun, Noun::Stat(Stat::Points)) {
                    return next_i;
                }
                let property = match period {
                    Some(Some(period)) => Property::PeriodScore { period },
                    Some(None) => return next_i,
                    None => Property::TeamTotal,
                };
                let subject = self.entity(t);
                self.push(s, subject, None, property, value, vec![m.span], None);
            }
        }
        next_i
    }

    fn weekdays(&mut self, s: usize, sent: Span) {
        for i in sent.start..=sent.end {
            if let Some(d) = weekday(&self.doc.tokens[i]) {
                if matches!(self.at(i as isize - 1, sent), "last" | "next" | "previous" | "since" | "until" | "before") {
                    continue;
                }
                self.push(s, EntityRef::game(), None, Property::DayOfWeek, ClaimValue::Weekday(d), vec![Span::single(i)], None);
            }
        }
    }

    fn outscore_at(&self, i: usize, sent: Span) -> Option<Span> {
        let ii = i as isize;
        match self.at(ii, sent) {
            "out-scored" | "outscored" | "out-scoring" | "outscoring" | "outscore" | "out-score" | "outscores"
            | "out-scores" => Some(Span::single(i)),
            "out" if self.at(ii + 1, sent) == "-" && self.at(ii + 2, sent).starts_with("scor") => Some(Span::new(i, i + 2)),
            _ => None,
        }
    }

    fn comparatives(&mut self, s: usize, sent: Span, periods: &[(Option<Period>, Span)]) {
        for i in sent.start..=sent.end {
            self.defeated(s, i, sent);
            self.outscored(s, i, sent, periods);
            self.led(s, i, sent, periods);
            self.team_high(s, i, sent);
            self.doubles(s, i, sent);
            self.home(s, i, sent);
        }
        let cities: Vec<usize> = (0..self.doc.mentions.len())
            .filter(|&mi| {
                let m = self.mention(mi);
                m.sentence == s
                    && m.bare_city
                    && self.at(m.span.start as isize - 1, sent) == "in"
                    && matches!(m.kind, MentionKind::Team { .. })
            })
            .collect();
        for mi in cities {
            let m = self.mention(mi);
            let (span, value) = (m.span, ClaimValue::Text(self.doc.tokens[m.span.start..=m.span.end].join(" ")));
            let subject = self.entity(mi);
            self.push(s, subject, None, Property::GameCity, value, vec![span], None);
        }
    }

    fn defeated(&mut self, s: usize, i: usize, sent: Span) {
        let ii = i as isize;
        let w = self.low(ii);
        let passive_aux = matches!(self.at(ii - 1, sent), "was" | "were" | "been" | "being" | "get" | "got");
        let (won, object) = if WIN_VERBS.contains(&w) {
            let passive = passive_aux && self.at(ii + 1, sent) == "by";
            match self.team_after(i, (i + 4).min(sent.end)) {
                Some(o) => (!passive, o),
                None => return,
            }
        } else if LOSS_VERBS.contains(&w) {
            let Some(to) = (i + 1..=(i + 4).min(sent.end)).find(|&j| self.low(j as isize) == "to") else { return };
            if self.number_at(to + 1, sent).is_some() {
                return;
            }
            match self.team_after(to, (to + 2).min(sent.end)) {
                Some(o) => (false, o),
                None => return,
            }
        } else if matches!(w, "victory" | "win" | "triumph" | "loss" | "defeat") {
            let won = matches!(w, "victory" | "win" | "triumph");
            let link = self.at(ii + 1, sent);
            let linked = if won { matches!(link, "over" | "against") } else { matches!(link, "to" | "against") };
            if !linked {
                return;
            }
            match self.team_after(i + 1, (i + 3).min(sent.end)) {
                Some(o) => (won, o),
                None => return,
            }
        } else {
            return;
        };
        let Some(subject) = self.team_before(i, sent) else { return };
        let (subject, object) = (self.entity(subject), self.entity(object));
        self.push(s, subject, Some(object), Property::Defeated, ClaimValue::Bool(won), vec![], Some(Span::single(i)));
    }

    fn outscored(&mut self, s: usize, i: usize, sent: Span, periods: &[(Option<Period>, Span)]) {
        let Some(trigger) = self.outscore_at(i, sent) else { return };
        let ii = i as isize;
        let passive = self.at(trigger.end as isize + 1, sent) == "by"
            && matches!(self.at(ii - 1, sent), "was" | "were" | "been" | "being" | "get" | "got");
        let after = self.first_after(trigger.end, (trigger.end + 4).min(sent.end), |m| m.is_team_like());
        let before = self.team_before(i, sent);
        let (subject, object) = if passive { (after, before) } else { (before, after) };
        let period = match self.period_near(i, trigger.end, periods, sent, false) {
            Some(Some(p)) => p,
            Some(None) => return,
            None => Period::Game,
        };
        let subject = self.entity_or_implicit(subject, EntityKind::Team);
        let object = object.map(|o| self.entity(o));
        self.push(s, subject, object, Property::OutScored { period }, ClaimValue::Bool(true), vec![], Some(trigger));
    }

    fn team_lead(&mut self, s: usize, i: usize, sent: Span, periods: &[(Option<Period>, Span)]) {
        let Some(team) = self.team_before(i, sent) else { return };
        if let Some(Some(period)) = self.period_near(i, i, periods, sent, false) {
            let subject = self.entity(team);
            let property = Property::Led { scope: LedScope::Team, stat: Stat::Points, period: Some(period) };
            self.push(s, subject, None, property, ClaimValue::Bool(true), vec![], Some(Span::single(i)));
        }
    }

    fn led(&mut self, s: usize, i: usize, sent: Span, periods: &[(Option<Period>, Span)]) {
        let ii = i as isize;
        let w = self.low(ii);
        let trigger = matches!(w, "led" | "leading" | "leads" | "paced" | "pacing" | "paces")
            || (w == "lead" && matches!(self.at(ii - 1, sent), "to" | "help" | "helped" | "helps"));
        if !trigger {
            return;
        }
        let next = self.at(ii + 1, sent);
        let subject_mention;
        let mut object = None;
        if next == "by" {
            let passive = self.first_after(i + 1, (i + 3).min(sent.end), |m| m.is_player_like() && !m.is_pronoun());
            match passive {
                Some(p) => {
                    subject_mention = Some(p);
                    object = self.team_before(i, sent);
                }
                None => return,
            }
        } else if self.number_at(i + 1, sent).is_some()
            || self.pair_at((i + 1).min(sent.end), sent).is_some()
            || matches!(next, "at" | "after" | "through" | "entering" | "heading")
        {
            self.team_lead(s, i, sent, periods);
            return;
        } else {
            let pl = self.player_before(i, sent);
            let tm = self.team_before(i, sent);
            if let Some(t) = tm {
                let tmention = self.mention(t);
                let adjacent = tmention.span.end + 1 == i
                    || (tmention.span.end + 2 == i && matches!(self.low(ii - 1), "have" | "had" | "has"));
                let later = pl.is_none_or(|p| tmention.span.start > self.mention(p).span.start);
                let possessive = is_possessive(&self.doc.tokens[tmention.span.end]);
                if later && adjacent && possessive {
                    object = Some(t);
                } else if later && (adjacent || pl.is_none()) {
                    self.team_lead(s, i, sent, periods);
                    return;
                }
            }
            subject_mention = pl;
        }

        let clause = self.clause(i, sent);
        let scan_from = subject_mention.filter(|_| next == "by").map_or(i + 1, |p| self.mention(p).span.end + 1);
        let mut scope = LedScope::Team;
        let mut stat = None;
        for j in scan_from..=clause.end.max(scan_from.min(clause.end)) {
            if j > clause.end {
                break;
            }
            if let Some(mi) = self.doc.mention_at[j] {
                if object.is_none() && next != "by" && matches!(self.mention(mi).kind, MentionKind::Team { .. }) {
                    object = Some(mi);
                }
                continue;
            }
            let w = self.low(j as isize);
            match w {
                "all" | "game" => {
                    let team_follows = self.doc.mention_at.get(j + 1).copied().flatten().is_some();
                    if !team_follows {
                        scope = LedScope::All;
                    }
                }
                "both" if matches!(self.at(j as isize + 1, sent), "teams" | "sides") => scope = LedScope::All,
                "bench" | "reserves" | "substitutes" => scope = LedScope::Bench,
                "unit" if self.low(j as isize - 1) == "second" => scope = LedScope::Bench,
                "starters" => return,
                _ => {}
            }
            if stat.is_none() {
                stat = led_stat(w);
            }
        }
        let subject = self.entity_or_implicit(subject_mention, EntityKind::Player);
        let object = object.map(|o| self.entity(o));
        let property = Property::Led { scope, stat: stat.unwrap_or(Stat::Points), period: None };
        self.push(s, subject, object, property, ClaimValue::Bool(true), vec![], Some(Span::single(i)));
    }

    fn team_high(&mut self, s: usize, i: usize, sent: Span) {
        let ii = i as isize;
        let w = self.low(ii);
        let (scope, trigger) = match w {
            "team-high" | "team-best" => (LedScope::Team, Span::single(i)),
            "game-high" | "game-best" => (LedScope::All, Span::single(i)),
            "team" | "game" if self.at(ii + 1, sent) == "-" && matches!(self.at(ii + 2, sent), "high" | "best") => {
                let scope = if w == "team" { LedScope::Team } else { LedScope::All };
                (scope, Span::new(i, i + 2))
            }
            _ => return,
        };
        let stat = (trigger.end + 1..=(trigger.end + 5).min(sent.end)).find_map(|j| match self.stat_noun(j, sent, false) {
            Some((Noun::Stat(stat), _)) => Some(stat),
            _ => None,
        });
        let Some(stat) = stat else { return };
        let subject = self.entity_or_implicit(self.player_before(i, sent), EntityKind::Player);
        let property = Property::Led { scope, stat, period: None };
        self.push(s, subject, None, property, ClaimValue::Bool(true), vec![], Some(trigger));
    }

    fn doubles(&mut self, s: usize, i: usize, sent: Span) {
        let ii = i as isize;
        let (property, trigger) = match self.low(ii) {
            "double-double" => (Property::DoubleDouble, Span::single(i)),
            "triple-double" => (Property::TripleDouble, Span::single(i)),
            "double" | "triple" if self.at(ii + 1, sent) == "-" && self.at(ii + 2, sent) == "double" => {
                let p = if self.low(ii) == "double" { Property::DoubleDouble } else { Property::TripleDouble };
                (p, Span::new(i, i + 2))
            }
            _ => return,
        };
        if (i.saturating_sub(4).max(sent.start)..i).any(|j| NEGATIONS.contains(&self.low(j as isize))) {
            return;
        }
        let pl = self.player_before(i, sent);
        let from = pl.map_or(sent.start, |p| self.mention(p).span.end + 1);
        if self.barrier_between(from, i) {
            return;
        }
        let subject = self.entity_or_implicit(pl, EntityKind::Player);
        self.push(s, subject, None, property, ClaimValue::Bool(true), vec![], Some(trigger));
    }

    fn home(&mut self, s: usize, i: usize, sent: Span) {
        let ii = i as isize;
        let w = self.low(ii);
        let home = match w {
            "home" if self.at(ii - 1, sent) == "at" => true,
            "road" if self.at(ii - 1, sent) == "the" && self.at(ii - 2, sent) == "on" => false,
            "hosted" | "hosting" if self.team_after(i, (i + 2).min(sent.end)).is_some() => true,
            "visited" if self.team_after(i, (i + 2).min(sent.end)).is_some() => false,
            _ => return,
        };
        let near_numbers = (i.saturating_sub(4).max(sent.start)..i).any(|j| self.number_at(j, sent).is_some() || self.pair_at(j, sent).is_some());
        if near_numbers && matches!(w, "home" | "road") {
            return;
        }
        let subject = self.entity_or_implicit(self.team_before(i, sent), EntityKind::Team);
        self.push(s, subject, None, Property::HomeGame, ClaimValue::Bool(home), vec![], Some(Span::single(i)));
    }
}

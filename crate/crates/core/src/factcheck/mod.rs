//! Rule-based fact checking of a summary against its game: claims are
//! extracted from the token stream, their subjects resolved, and each one
//! verified against the box score. Refuted claims become mistakes.

mod extract;
mod lexicon;
mod numbers;
mod resolve;
mod verify;

use chrono::Weekday;
use serde::{Deserialize, Serialize};

use crate::annotation::{MistakeList, TokenizedText};
use crate::game::{GameData, Period, Side, Stat};

pub use extract::extract_claims;
pub use lexicon::{norm as lexicon_norm, Lexicon, Mention, MentionKind};
pub use numbers::{is_number_word, is_ordinal, parse_number_token, parse_pair_token, NumberMatch};
pub use resolve::resolve_claim_subjects;
pub use verify::verify_claims;

/// Inclusive token range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Self { start, end }
    }

    pub fn single(token: usize) -> Self {
        Self::new(token, token)
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn cover(&self, other: &Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Player,
    Team,
    PronounUnresolved,
}

/// Who a claim is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRef {
    pub kind: EntityKind,
    /// The kind of entity the reference has to resolve to.
    pub wants: EntityKind,
    pub resolved_name: Option<String>,
    pub side: Option<Side>,
    /// Where the entity is mentioned; `None` for an implied subject.
    pub span: Option<Span>,
    /// Names a person on neither roster or a team that did not play.
    pub unknown: bool,
    /// A roster surname with someone else's given name.
    pub misnamed: bool,
    /// Reached through a pronoun or left implicit rather than named.
    pub implicit: bool,
    /// Players a misnamed mention may refer to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<String>,
}

impl EntityRef {
    pub(crate) fn unresolved(wants: EntityKind, span: Option<Span>) -> Self {
        Self {
            kind: EntityKind::PronounUnresolved,
            wants,
            resolved_name: None,
            side: None,
            span,
            unknown: false,
            misnamed: false,
            implicit: true,
            candidates: Vec::new(),
        }
    }

    /// The whole game rather than one participant (weekday claims).
    pub(crate) fn game() -> Self {
        Self { kind: EntityKind::Team, wants: EntityKind::Team, implicit: true, ..Self::unresolved(EntityKind::Team, None) }
    }

    pub fn is_named(&self) -> bool {
        !self.implicit && self.span.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotKind {
    FieldGoals,
    ThreePointers,
    FreeThrows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedScope {
    /// The player's own team (or the team named after the trigger).
    Team,
    /// Among bench players of the team.
    Bench,
    /// Among everyone in the game.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Property {
    Stat { stat: Stat },
    TeamTotal,
    Shooting { shot: ShotKind },
    /// Quarter, half or final score; a single number or a pair.
    PeriodScore { period: Period },
    RecordWins,
    RecordLosses,
    DayOfWeek,
    Defeated,
    OutScored { period: Period },
    Led { scope: LedScope, stat: Stat, period: Option<Period> },
    DoubleDouble,
    TripleDouble,
    HomeGame,
    GameCity,
    NextGame,
    SeasonAverage,
    Streak,
}

impl Property {
    pub fn is_checkable(&self) -> bool {
        !matches!(self, Property::NextGame | Property::SeasonAverage | Property::Streak)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum ClaimValue {
    Int(u32),
    Pair(u32, u32),
    Weekday(Weekday),
    Bool(bool),
    Text(String),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub doc_id: String,
    /// Covers the named subject (when in the same sentence), the trigger
    /// and the value tokens.
    pub span: Span,
    pub subject: EntityRef,
    /// The other party of a comparison ("defeated the Suns"), or the team
    /// a player is said to have led.
    pub object: Option<EntityRef>,
    pub property: Property,
    pub value: ClaimValue,
    /// One span per number in `value`; the token itself for weekdays.
    pub value_spans: Vec<Span>,
    /// The word a Word mistake would be placed on.
    pub trigger: Option<Span>,
    pub sentence: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Supported,
    Refuted,
    Uncheckable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: Claim,
    pub status: VerdictStatus,
    pub expected: Option<String>,
    /// Mistakes this claim contributes; a score pair can yield two.
    pub emitted: Vec<crate::annotation::Mistake>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Report refuted led/leading claims as warnings instead of mistakes.
    pub led_strict: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<Verdict>,
    pub mistakes: MistakeList,
}

/// Sentence number of every token; sentences end after `.`, `!` or `?`.
pub fn sentence_index(tokens: &[String]) -> Vec<usize> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut s = 0;
    for t in tokens {
        out.push(s);
        if matches!(t.as_str(), "." | "!" | "?") {
            s += 1;
        }
    }
    out
}

/// Tokens with their sentences and entity mentions, shared by extraction
/// and resolution.
pub(crate) struct Doc<'a> {
    pub tokens: &'a [String],
    pub lower: Vec<String>,
    pub sentences: Vec<Span>,
    pub mentions: Vec<Mention>,
    pub mention_at: Vec<Option<usize>>,
}

impl<'a> Doc<'a> {
    pub fn new(tokens: &'a [String], game: &GameData) -> Self {
        let sentence_of = sentence_index(tokens);
        let mut sentences: Vec<Span> = Vec::new();
        for (i, &s) in sentence_of.iter().enumerate() {
            if s == sentences.len() {
                sentences.push(Span::single(i));
            } else {
                sentences[s].end = i;
            }
        }
        let mentions = Lexicon::new(game).scan(tokens, &sentence_of);
        let mut mention_at = vec![None; tokens.len()];
        for (i, m) in mentions.iter().enumerate() {
            for slot in &mut mention_at[m.span.start..=m.span.end] {
                *slot = Some(i);
            }
        }
        Self { tokens, lower: tokens.iter().map(|t| t.to_lowercase()).collect(), sentences, mentions, mention_at }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }
}

/// Extracts, resolves and verifies every claim, returning the verdicts
/// and the resulting mistake list.
pub fn check_document_report(text: &TokenizedText, game: &GameData, options: CheckOptions) -> CheckReport {
    let claims = resolve_claim_subjects(extract_claims(text, game), text, game);
    let (verdicts, warnings): (Vec<Verdict>, Vec<Verdict>) = verify_claims(&claims, game)
        .into_iter()
        .partition(|v| !(options.led_strict && v.status == VerdictStatus::Refuted && matches!(v.claim.property, Property::Led { .. })));
    let mistakes = verify::normalize(verdicts.iter().flat_map(|v| v.emitted.iter().cloned()).collect());
    CheckReport { verdicts, warnings, mistakes }
}

/// The mistakes found in one summary.
pub fn check_document(text: &TokenizedText, game: &GameData, options: CheckOptions) -> MistakeList {
    check_document_report(text, game, options).mistakes
}

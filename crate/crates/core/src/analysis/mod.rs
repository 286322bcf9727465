//! Corpus statistics over gold annotations: which words the mistakes fall
//! on, how many mistakes each system makes per text, and where in a
//! summary they occur.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{MistakeCategory, MistakeList, Texts};
use crate::factcheck::{is_number_word, is_ordinal, parse_pair_token};
use crate::game::GameData;
use crate::teams::FRANCHISES;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("mistake refers to unknown document {0}")]
    UnknownDoc(String),
}

pub const NUM_DIGIT: &str = "NUM-DIGIT";
pub const NUM_WORD: &str = "NUM-WORD";
pub const DAY_WEEK: &str = "DAY-WEEK";
pub const TEAM: &str = "TEAM";
pub const PLAYER: &str = "PLAYER";
pub const ORDINAL: &str = "ORDINAL";
pub const ARTICLE_ONE: &str = "a (an)";

const WEEKDAYS: [&str; 7] = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"];

/// Team and player name words, from the franchise table plus the games.
#[derive(Debug, Clone, Default)]
pub struct SurfaceLexicon {
    team_words: BTreeSet<String>,
    player_words: BTreeSet<String>,
}

impl SurfaceLexicon {
    pub fn from_games<'g>(games: impl IntoIterator<Item = &'g GameData>) -> Self {
        let mut lex = SurfaceLexicon::default();
        let add = |set: &mut BTreeSet<String>, s: &str| set.extend(s.split_whitespace().map(str::to_lowercase));
        for f in FRANCHISES {
            add(&mut lex.team_words, f.city);
            add(&mut lex.team_words, f.nickname);
            for a in f.aliases {
                add(&mut lex.team_words, a);
            }
        }
        for g in games {
            for t in [&g.home, &g.visitor] {
                add(&mut lex.team_words, &t.city);
                add(&mut lex.team_words, &t.nickname);
            }
            for p in &g.players {
                add(&mut lex.player_words, &p.name);
            }
        }
        lex
    }

    /// Lexical class of a token: one of the upper-case classes, `a (an)`,
    /// or the lower-cased token itself.
    pub fn classify(&self, token: &str) -> String {
        let lower = token.to_lowercase();
        let bare = crate::factcheck::lexicon_norm(&lower);
        if is_ordinal(&lower) {
            ORDINAL.into()
        } else if lower.starts_with(|c: char| c.is_ascii_digit()) || parse_pair_token(&lower).is_some() {
            NUM_DIGIT.into()
        } else if is_number_word(&lower) {
            NUM_WORD.into()
        } else if lower == "a" || lower == "an" {
            ARTICLE_ONE.into()
        } else if WEEKDAYS.contains(&bare.as_str()) {
            DAY_WEEK.into()
        } else if self.team_words.contains(&bare) {
            TEAM.into()
        } else if self.player_words.contains(&bare) {
            PLAYER.into()
        } else {
            lower
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub surface: String,
    pub category: MistakeCategory,
    pub count: u64,
}

/// Counts gold mistakes by the class of their first token and category,
/// most frequent first.
pub fn frequency_table(gold: &MistakeList, texts: &Texts, lexicon: &SurfaceLexicon) -> Result<Vec<FrequencyRow>, AnalysisError> {
    let mut counts: BTreeMap<(String, MistakeCategory), u64> = BTreeMap::new();
    for m in gold {
        let text = texts.get(&m.doc_id).ok_or_else(|| AnalysisError::UnknownDoc(m.doc_id.clone()))?;
        let token = text.tokens.get(m.start).map_or("", String::as_str);
        *counts.entry((lexicon.classify(token), m.category)).or_default() += 1;
    }
    let mut rows: Vec<FrequencyRow> =
        counts.into_iter().map(|((surface, category), count)| FrequencyRow { surface, category, count }).collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.surface.cmp(&b.surface)).then(a.category.cmp(&b.category)));
    Ok(rows)
}

/// Mean mistakes per text of one system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorProfile {
    pub system_id: String,
    pub means: BTreeMap<MistakeCategory, Ratio<u64>>,
    pub text_count: u64,
}

impl ErrorProfile {
    pub fn mean(&self, category: MistakeCategory) -> Ratio<u64> {
        self.means.get(&category).copied().unwrap_or_else(|| Ratio::from_integer(0))
    }

    pub fn total(&self) -> u64 {
        self.means.values().map(|m| (m * self.text_count).to_integer()).sum()
    }
}

/// One decimal, halves rounded up.
pub fn render_one_decimal(value: Ratio<u64>) -> String {
    let tenths = (value * 20 + Ratio::from_integer(1)) / 2;
    let tenths = tenths.floor().to_integer();
    format!("{}.{}", tenths / 10, tenths % 10)
}

/// Per-system error profiles. Every text of the system counts, including
/// those without mistakes.
pub fn system_profile(gold: &MistakeList, texts: &Texts) -> Result<Vec<ErrorProfile>, AnalysisError> {
    let mut text_counts: BTreeMap<&str, u64> = BTreeMap::new();
    for t in texts.iter() {
        *text_counts.entry(t.system_id.as_str()).or_default() += 1;
    }
    let mut counts: BTreeMap<&str, BTreeMap<MistakeCategory, u64>> = BTreeMap::new();
    for m in gold {
        let text = texts.get(&m.doc_id).ok_or_else(|| AnalysisError::UnknownDoc(m.doc_id.clone()))?;
        *counts.entry(text.system_id.as_str()).or_default().entry(m.category).or_default() += 1;
    }
    Ok(text_counts
        .into_iter()
        .map(|(system, n)| {
            let per = counts.get(system);
            let means = MistakeCategory::ALL
                .iter()
                .map(|&c| (c, Ratio::new(per.and_then(|p| p.get(&c)).copied().unwrap_or(0), n)))
                .collect();
            ErrorProfile { system_id: system.to_string(), means, text_count: n }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionHistogram {
    pub bins: [u64; 10],
    pub category: Option<MistakeCategory>,
}

impl PositionHistogram {
    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Index of the largest bin, the last one on ties.
    pub fn peak(&self) -> usize {
        (0..10).max_by_key(|&i| self.bins[i]).unwrap_or(9)
    }
}

pub fn position_bin(start: usize, token_count: usize) -> usize {
    if token_count == 0 {
        return 9;
    }
    (10 * start / token_count).min(9)
}

/// Which tenth of its text (by token index) each mistake starts in.
pub fn position_histogram(
    gold: &MistakeList,
    texts: &Texts,
    category: Option<MistakeCategory>,
) -> Result<PositionHistogram, AnalysisError> {
    let mut bins = [0u64; 10];
    for m in gold.iter().filter(|m| category.is_none_or(|c| m.category == c)) {
        let text = texts.get(&m.doc_id).ok_or_else(|| AnalysisError::UnknownDoc(m.doc_id.clone()))?;
        bins[position_bin(m.start, text.len())] += 1;
    }
    Ok(PositionHistogram { bins, category })
}

/// Mistake totals per category.
pub fn category_totals(gold: &MistakeList) -> BTreeMap<MistakeCategory, u64> {
    MistakeCategory::ALL.iter().map(|&c| (c, gold.count(c) as u64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{Mistake, TokenizedText};
    use proptest::prelude::*;

    fn texts() -> Texts {
        [
            TokenizedText::from_line("a1", "Alpha", "Mike Conley led the Grizzlies with 24 points on Monday .").unwrap(),
            TokenizedText::from_line("a2", "Alpha", "The Suns lost .").unwrap(),
            TokenizedText::from_line("b1", "Beta", "six rebounds and a steal for the third straight game").unwrap(),
        ]
        .into_iter()
        .collect()
    }

    fn lexicon() -> SurfaceLexicon {
        SurfaceLexicon::from_games([&crate::factcheck::tests::sample_game()])
    }

    #[test]
    fn peak_prefers_the_later_bin_on_ties() {
        let h = PositionHistogram { bins: [0, 3, 0, 0, 0, 0, 0, 3, 0, 1], category: None };
        assert_eq!(h.peak(), 7);
        assert_eq!(PositionHistogram { bins: [0; 10], category: None }.peak(), 9);
    }

    #[test]
    fn classes() {
        let lex = lexicon();
        let got: Vec<String> =
            ["24", "102-91", "six", "Monday", "Grizzlies", "Suns'", "Conley", "an", "third", "3rd", "Led"]
                .iter()
                .map(|t| lex.classify(t))
                .collect();
        assert_eq!(got, ["NUM-DIGIT", "NUM-DIGIT", "NUM-WORD", "DAY-WEEK", "TEAM", "TEAM", "PLAYER", "a (an)", "ORDINAL", "ORDINAL", "led"]);
    }

    #[test]
    fn single_led_row_and_empty_table() {
        let t = texts();
        let gold = MistakeList::new(vec![Mistake::new("a1", 2, 2, MistakeCategory::Word)]);
        let rows = frequency_table(&gold, &t, &lexicon()).unwrap();
        assert_eq!(rows, vec![FrequencyRow { surface: "led".into(), category: MistakeCategory::Word, count: 1 }]);
        assert!(frequency_table(&MistakeList::default(), &t, &lexicon()).unwrap().is_empty());
    }

    #[test]
    fn frequency_sorted_desc() {
        let t = texts();
        let gold = MistakeList::new(vec![
            Mistake::new("a1", 6, 6, MistakeCategory::Number),
            Mistake::new("a1", 9, 9, MistakeCategory::Name),
            Mistake::new("b1", 0, 0, MistakeCategory::Number),
            Mistake::new("a2", 1, 1, MistakeCategory::Name),
            Mistake::new("a1", 4, 4, MistakeCategory::Name),
        ]);
        let rows = frequency_table(&gold, &t, &lexicon()).unwrap();
        assert_eq!((rows[0].surface.as_str(), rows[0].count), ("TEAM", 2));
        assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), 5);
    }

    #[test]
    fn profile_means() {
        let t = texts();
        let gold = MistakeList::new(vec![
            Mistake::new("b1", 0, 0, MistakeCategory::Name),
            Mistake::new("b1", 1, 1, MistakeCategory::Name),
            Mistake::new("b1", 3, 3, MistakeCategory::Name),
            Mistake::new("a1", 6, 6, MistakeCategory::Number),
        ]);
        let profiles = system_profile(&gold, &t).unwrap();
        let beta = profiles.iter().find(|p| p.system_id == "Beta").unwrap();
        assert_eq!(render_one_decimal(beta.mean(MistakeCategory::Name)), "3.0");
        let alpha = profiles.iter().find(|p| p.system_id == "Alpha").unwrap();
        assert_eq!(render_one_decimal(alpha.mean(MistakeCategory::Number)), "0.5");
        assert_eq!(alpha.total(), 1);
    }

    #[test]
    fn rendering_rounds_half_up() {
        assert_eq!(render_one_decimal(Ratio::new(208, 20)), "10.4");
        assert_eq!(render_one_decimal(Ratio::new(1, 20)), "0.1");
        assert_eq!(render_one_decimal(Ratio::new(1, 21)), "0.0");
    }

    #[test]
    fn bins() {
        assert_eq!(position_bin(0, 300), 0);
        assert_eq!(position_bin(299, 300), 9);
        assert_eq!(position_bin(30, 300), 1);
        assert_eq!(position_bin(29, 300), 0);
    }

    #[test]
    fn unknown_doc_is_an_error() {
        let gold = MistakeList::new(vec![Mistake::new("zz", 0, 0, MistakeCategory::Name)]);
        assert_eq!(position_histogram(&gold, &texts(), None), Err(AnalysisError::UnknownDoc("zz".into())));
    }

    proptest! {
        #[test]
        fn histogram_and_profile_conserve_counts(
            rows in proptest::collection::vec((0usize..3, 0usize..12, 0usize..6), 0..40),
            filter in proptest::option::of(0usize..6),
        ) {
            let t = texts();
            let ids = ["a1", "a2", "b1"];
            let gold: MistakeList = rows
                .iter()
                .map(|&(d, s, c)| {
                    let len = t.get(ids[d]).unwrap().len();
                    Mistake::new(ids[d], s % len, s % len, MistakeCategory::ALL[c])
                })
                .collect();
            let category = filter.map(|c| MistakeCategory::ALL[c]);
            let h = position_histogram(&gold, &t, category).unwrap();
            let expected = gold.iter().filter(|m| category.is_none_or(|c| m.category == c)).count() as u64;
            prop_assert_eq!(h.total(), expected);
            let profiles = system_profile(&gold, &t).unwrap();
            prop_assert_eq!(profiles.iter().map(ErrorProfile::total).sum::<u64>(), gold.len() as u64);
            let rows = frequency_table(&gold, &t, &lexicon()).unwrap();
            prop_assert_eq!(rows.iter().map(|r| r.count).sum::<u64>(), gold.len() as u64);
        }
    }
}

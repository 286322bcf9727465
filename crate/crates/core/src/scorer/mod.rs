//! Recall and precision of a submitted mistake list against a gold list,
//! at the level of mistakes and of tokens, overall and per category.
//!
//! Overall rows pair mistakes regardless of category; per-category rows pair
//! only mistakes that share the category. Arithmetic is exact; rounding
//! happens only when rendering.

mod matching;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{
    normalize_submission, validate_mistakes, AnnotationError, Finding, Mistake, MistakeCategory, MistakeList, Texts,
};

pub use matching::{match_mistakes, MatchConfig, MatchMode, MatchedPair, Matching};
pub use report::{render_report, ReportFormat};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("{which} list failed validation: {}", .findings.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid { which: &'static str, findings: Vec<Finding> },
    #[error(transparent)]
    Annotation(#[from] AnnotationError),
}

/// `hits / total`, undefined when `total` is zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub hits: u64,
    pub total: u64,
}

impl Rate {
    pub fn new(hits: u64, total: u64) -> Self {
        debug_assert!(hits <= total);
        Self { hits, total }
    }

    pub fn value(&self) -> Option<Ratio<u64>> {
        (self.total > 0).then(|| Ratio::new(self.hits, self.total))
    }

    pub fn is_defined(&self) -> bool {
        self.total > 0
    }

    pub fn as_f64(&self) -> Option<f64> {
        (self.total > 0).then(|| self.hits as f64 / self.total as f64)
    }

    /// Three-decimal rendering with halves rounded up; `-` when undefined.
    pub fn render(&self) -> String {
        if self.total == 0 {
            return "-".to_string();
        }
        let thousandths = (self.hits * 2000 + self.total) / (2 * self.total);
        format!("{}.{:03}", thousandths / 1000, thousandths % 1000)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub mistake_recall: Rate,
    pub mistake_precision: Rate,
    pub token_recall: Rate,
    pub token_precision: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub per_category: BTreeMap<MistakeCategory, ScoreRow>,
    pub overall: ScoreRow,
}

impl ScoreReport {
    pub fn row(&self, category: MistakeCategory) -> &ScoreRow {
        &self.per_category[&category]
    }
}

type TokenSet = BTreeSet<(String, usize)>;

fn token_set<'a>(mistakes: impl Iterator<Item = &'a Mistake>) -> TokenSet {
    mistakes.flat_map(|m| (m.start..=m.end).map(move |t| (m.doc_id.clone(), t))).collect()
}

fn score_row(gold: &MistakeList, submitted: &MistakeList, config: MatchConfig) -> ScoreRow {
    let matching = match_mistakes(gold, submitted, config);
    let pairs = matching.len() as u64;
    let gold_tokens = token_set(gold.iter());
    let sub_tokens = token_set(submitted.iter());
    let shared = gold_tokens.intersection(&sub_tokens).count() as u64;
    ScoreRow {
        mistake_recall: Rate::new(pairs, gold.len() as u64),
        mistake_precision: Rate::new(pairs, submitted.len() as u64),
        token_recall: Rate::new(shared, gold_tokens.len() as u64),
        token_precision: Rate::new(shared, sub_tokens.len() as u64),
    }
}

fn only(list: &MistakeList, category: MistakeCategory) -> MistakeList {
    list.iter().filter(|m| m.category == category).cloned().collect()
}

/// Scores lists that are already known to be valid and non-overlapping.
pub fn score_lists(gold: &MistakeList, submitted: &MistakeList, config: MatchConfig) -> ScoreReport {
    let strict = MatchConfig { category_strict: true, ..config };
    let per_category = MistakeCategory::ALL
        .iter()
        .map(|&c| (c, score_row(&only(gold, c), &only(submitted, c), strict)))
        .collect();
    ScoreReport { per_category, overall: score_row(gold, submitted, config) }
}

/// Validates both lists against `texts`, normalizes the submission
/// (merging same-category overlaps) and scores it.
pub fn compute_scores(
    gold: &MistakeList,
    submitted: &MistakeList,
    texts: &Texts,
    config: MatchConfig,
) -> Result<ScoreReport, ScoreError> {
    let report = validate_mistakes(gold, texts);
    if !report.is_valid() {
        return Err(ScoreError::Invalid { which: "gold", findings: report.findings });
    }
    let submitted = normalize_submission(submitted)?;
    let report = validate_mistakes(&submitted, texts);
    if !report.is_valid() {
        return Err(ScoreError::Invalid { which: "submitted", findings: report.findings });
    }
    Ok(score_lists(gold, &submitted, config))
}

/// Scores each system separately, using the texts' system ids.
pub fn compute_scores_by_system(
    gold: &MistakeList,
    submitted: &MistakeList,
    texts: &Texts,
    config: MatchConfig,
) -> Result<BTreeMap<String, ScoreReport>, ScoreError> {
    compute_scores(gold, submitted, texts, config)?;
    let submitted = normalize_submission(submitted)?;
    let mut systems: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for t in texts.iter() {
        systems.entry(&t.system_id).or_default().insert(&t.doc_id);
    }
    Ok(systems
        .into_iter()
        .map(|(system, docs)| {
            let pick = |l: &MistakeList| l.iter().filter(|m| docs.contains(m.doc_id.as_str())).cloned().collect();
            (system.to_string(), score_lists(&pick(gold), &pick(&submitted), config))
        })
        .collect())
}

/// Gold mistakes that no submission detects.
pub fn blind_spot(gold: &MistakeList, submissions: &[MistakeList], config: MatchConfig) -> MistakeList {
    let mut detected = vec![false; gold.len()];
    for sub in submissions {
        for p in match_mistakes(gold, sub, config).pairs {
            detected[p.gold] = true;
        }
    }
    gold.iter().zip(detected).filter(|(_, hit)| !hit).map(|(m, _)| m.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::TokenizedText;
    use MistakeCategory::*;

    #[test]
    fn rate_rendering() {
        assert_eq!(Rate::new(2, 3).render(), "0.667");
        assert_eq!(Rate::new(1, 1).render(), "1.000");
        assert_eq!(Rate::new(0, 0).render(), "-");
        assert_eq!(Rate::new(1, 8).render(), "0.125");
        assert_eq!(Rate::new(1, 16).render(), "0.063");
    }

    fn texts() -> Texts {
        [TokenizedText::from_line("D", "s", &vec!["x"; 30].join(" ")).unwrap()].into_iter().collect()
    }

    #[test]
    fn empty_submission_has_zero_recall_and_undefined_precision() {
        let gold: MistakeList = vec![Mistake::new("D", 1, 2, Name), Mistake::new("D", 5, 5, Number)].into_iter().collect();
        let r = compute_scores(&gold, &MistakeList::default(), &texts(), MatchConfig::default()).unwrap();
        assert_eq!(r.overall.mistake_recall, Rate::new(0, 2));
        assert!(!r.overall.mistake_precision.is_defined());
        assert_eq!(r.row(Name).mistake_recall.render(), "0.000");
        assert_eq!(r.row(Name).mistake_precision.render(), "-");
        assert!(!r.row(Word).mistake_recall.is_defined());
    }

    #[test]
    fn cross_category_pair_counts_overall_only() {
        let gold: MistakeList = vec![Mistake::new("D", 1, 2, Name)].into_iter().collect();
        let sub: MistakeList = vec![Mistake::new("D", 2, 3, Number)].into_iter().collect();
        let r = compute_scores(&gold, &sub, &texts(), MatchConfig::default()).unwrap();
        assert_eq!(r.overall.mistake_recall, Rate::new(1, 1));
        assert_eq!(r.overall.token_recall, Rate::new(1, 2));
        assert_eq!(r.overall.token_precision, Rate::new(1, 2));
        assert_eq!(r.row(Name).mistake_recall, Rate::new(0, 1));
        assert_eq!(r.row(Number).mistake_precision, Rate::new(0, 1));
    }

    #[test]
    fn invalid_gold_is_rejected() {
        let gold: MistakeList = vec![Mistake::new("D", 1, 40, Name)].into_iter().collect();
        assert!(matches!(
            compute_scores(&gold, &MistakeList::default(), &texts(), MatchConfig::default()),
            Err(ScoreError::Invalid { which: "gold", .. })
        ));
        let gold: MistakeList = vec![Mistake::new("Z", 1, 1, Name)].into_iter().collect();
        assert!(compute_scores(&gold, &MistakeList::default(), &texts(), MatchConfig::default()).is_err());
    }

    #[test]
    fn blind_spot_examples() {
        let gold: MistakeList = (0..4).map(|i| Mistake::new("D", i * 3, i * 3, Number)).collect();
        let sub1: MistakeList = vec![gold.entries[0].clone(), gold.entries[1].clone()].into_iter().collect();
        let sub2: MistakeList = vec![gold.entries[1].clone(), gold.entries[2].clone()].into_iter().collect();
        let cfg = MatchConfig::default();
        assert_eq!(blind_spot(&gold, &[sub1, sub2], cfg).entries, vec![gold.entries[3].clone()]);
        assert!(blind_spot(&gold, std::slice::from_ref(&gold), cfg).is_empty());
        assert_eq!(blind_spot(&gold, &[MistakeList::default(), MistakeList::default()], cfg), gold);
    }
}

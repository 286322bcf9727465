//! Choosing among alternative annotations and reconciling annotators.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AnnotationError, Mistake, MistakeCategory, MistakeList, Texts};

/// One hypothesis for correcting a sentence: the mistakes it would mark.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationCandidate {
    pub mistakes: Vec<Mistake>,
}

impl AnnotationCandidate {
    pub fn new(mistakes: Vec<Mistake>) -> Self {
        Self { mistakes }
    }

    fn priority_sequence(&self) -> Vec<u8> {
        let mut seq: Vec<u8> = self.mistakes.iter().map(|m| m.category.priority()).collect();
        seq.sort_unstable();
        seq
    }
}

/// Picks the candidate with the fewest mistakes; ties go to the candidate
/// whose sorted category priorities compare lexicographically smallest
/// (more Name, then Number, ... fixes), then to the earliest candidate.
pub fn select_minimal_annotation(candidates: &[AnnotationCandidate]) -> Result<&AnnotationCandidate, AnnotationError> {
    candidates
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            a.mistakes
                .len()
                .cmp(&b.mistakes.len())
                .then_with(|| a.priority_sequence().cmp(&b.priority_sequence()))
                .then_with(|| ia.cmp(ib))
        })
        .map(|(_, c)| c)
        .ok_or(AnnotationError::NoCandidates)
}

/// Token-level majority vote over three annotators: a token is gold with
/// category C when at least two annotators cover it with C. Maximal runs of
/// consecutive gold tokens sharing a category become one mistake.
pub fn merge_annotator_lists(a: &MistakeList, b: &MistakeList, c: &MistakeList, texts: &Texts) -> MistakeList {
    let lists = [a, b, c];
    let docs: BTreeSet<&str> = lists.iter().flat_map(|l| l.iter().map(|m| m.doc_id.as_str())).collect();
    let mut out = Vec::new();
    for doc in docs {
        let span_end = lists
            .iter()
            .flat_map(|l| l.for_doc(doc).map(|m| m.end + 1))
            .max()
            .unwrap_or(0);
        let len = texts.get(doc).map_or(span_end, |t| t.len().max(span_end));

        // votes[token][category] counted once per annotator
        let mut votes = vec![[0u8; 6]; len];
        for list in lists {
            let mut marked = BTreeSet::new();
            for m in list.for_doc(doc) {
                let cat = category_index(m.category);
                for t in m.start..=m.end {
                    if marked.insert((t, cat)) {
                        votes[t][cat] += 1;
                    }
                }
            }
        }

        let gold: Vec<Option<MistakeCategory>> = votes
            .iter()
            .map(|v| {
                MistakeCategory::ALL
                    .iter()
                    .filter(|&&cat| v[category_index(cat)] >= 2)
                    .min_by_key(|cat| cat.priority())
                    .copied()
            })
            .collect();

        let mut t = 0;
        while t < len {
            let Some(cat) = gold[t] else {
                t += 1;
                continue;
            };
            let start = t;
            while t + 1 < len && gold[t + 1] == Some(cat) {
                t += 1;
            }
            out.push(Mistake::new(doc, start, t, cat));
            t += 1;
        }
    }
    MistakeList::new(out)
}

fn category_index(cat: MistakeCategory) -> usize {
    MistakeCategory::ALL.iter().position(|&c| c == cat).expect("category listed in ALL")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::TokenizedText;
    use MistakeCategory::*;

    fn cand(cats: &[MistakeCategory]) -> AnnotationCandidate {
        AnnotationCandidate::new(cats.iter().enumerate().map(|(i, &c)| Mistake::new("D", i, i, c)).collect())
    }

    #[test]
    fn fewer_mistakes_wins() {
        let cands = [cand(&[Number, Number, Number]), cand(&[Name])];
        assert_eq!(select_minimal_annotation(&cands).unwrap(), &cands[1]);
    }

    #[test]
    fn seven_beats_nine() {
        // T1/T2: Word, Name, Name, Word, Number x3; T3: Word, Name, Number x7
        let t12 = cand(&[Word, Name, Name, Word, Number, Number, Number]);
        let t3 = cand(&[Word, Name, Number, Number, Number, Number, Number, Number, Number]);
        let cands = [t3, t12.clone()];
        assert_eq!(select_minimal_annotation(&cands).unwrap(), &t12);
    }

    #[test]
    fn ties_break_on_priority_then_order() {
        let cands = [cand(&[Number]), cand(&[Name])];
        assert_eq!(select_minimal_annotation(&cands).unwrap(), &cands[1]);
        let cands = [cand(&[Other]), cand(&[NotCheckable])];
        assert_eq!(select_minimal_annotation(&cands).unwrap(), &cands[0]);
        let same = [cand(&[Word]), cand(&[Word])];
        assert!(std::ptr::eq(select_minimal_annotation(&same).unwrap(), &same[0]));
        assert!(select_minimal_annotation(&[]).is_err());
    }

    fn texts(n: usize) -> Texts {
        let line = (0..n).map(|i| format!("t{i}")).collect::<Vec<_>>().join(" ");
        [TokenizedText::from_line("D", "s", &line).unwrap()].into_iter().collect()
    }

    #[test]
    fn unanimous_span_survives() {
        let l = MistakeList::new(vec![Mistake::new("D", 4, 6, Number)]);
        let merged = merge_annotator_lists(&l, &l, &l, &texts(10));
        assert_eq!(merged.entries, vec![Mistake::new("D", 4, 6, Number)]);
    }

    #[test]
    fn single_annotator_token_is_dropped() {
        let a = MistakeList::new(vec![Mistake::new("D", 2, 2, Word)]);
        let empty = MistakeList::default();
        assert!(merge_annotator_lists(&a, &empty, &empty, &texts(10)).is_empty());
    }

    #[test]
    fn three_annotator_majority() {
        // The only other Raptor to reach double figures in points was Dwyane Dragic , who came off the bench
        // 0   1    2     3      4  5     6      7       8  9      10  11     12     13 14  15   16  17  18
        // for 22 points ( 9 - 17 FG , 3 - 7 3Pt , 3 - 3 FT ) , six rebounds and five assists .
        // 19  20 21     22 23 24 25 26 27 28 29 30 31 32 33 34 35 36 37 38 39  40       41  42   43      44
        let t = texts(45);
        let t1 = MistakeList::new(vec![
            Mistake::new("D", 1, 2, Word),
            Mistake::new("D", 3, 3, Name),
            Mistake::new("D", 11, 11, Name),
            Mistake::new("D", 15, 18, Word),
            Mistake::new("D", 23, 23, Number),
            Mistake::new("D", 25, 25, Number),
            Mistake::new("D", 39, 39, Number),
        ]);
        let t2 = MistakeList::new(vec![
            Mistake::new("D", 1, 2, Word),
            Mistake::new("D", 3, 3, Name),
            Mistake::new("D", 11, 12, Name),
            Mistake::new("D", 16, 18, Word),
            Mistake::new("D", 23, 23, Number),
            Mistake::new("D", 25, 25, Number),
            Mistake::new("D", 39, 39, Number),
        ]);
        let t3 = MistakeList::new(vec![
            Mistake::new("D", 1, 2, Word),
            Mistake::new("D", 11, 12, Name),
            Mistake::new("D", 20, 20, Number),
            Mistake::new("D", 25, 25, Number),
            Mistake::new("D", 28, 28, Number),
            Mistake::new("D", 33, 33, Number),
            Mistake::new("D", 35, 35, Number),
            Mistake::new("D", 39, 39, Number),
            Mistake::new("D", 42, 42, Number),
        ]);
        let gold = merge_annotator_lists(&t1, &t2, &t3, &t);
        assert_eq!(
            gold.entries,
            vec![
                Mistake::new("D", 1, 2, Word),
                Mistake::new("D", 3, 3, Name),
                Mistake::new("D", 11, 12, Name),
                Mistake::new("D", 16, 18, Word),
                Mistake::new("D", 23, 23, Number),
                Mistake::new("D", 25, 25, Number),
                Mistake::new("D", 39, 39, Number),
            ]
        );
    }
}

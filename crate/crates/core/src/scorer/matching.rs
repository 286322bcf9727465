//! One-to-one pairing of gold and submitted mistakes.
//!
//! Within each document the chosen pairing has the largest possible number
//! of pairs; among those, the largest total number of shared tokens.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::annotation::{Mistake, MistakeList};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// A detection shares at least one token with the gold span.
    #[default]
    Overlap,
    /// A detection has exactly the gold span.
    Exact,
}

impl std::str::FromStr for MatchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "overlap" => Ok(MatchMode::Overlap),
            "exact" => Ok(MatchMode::Exact),
            _ => Err(format!("unknown match mode `{s}` (expected overlap|exact)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub mode: MatchMode,
    /// Only pair mistakes of the same category.
    pub category_strict: bool,
}

impl MatchConfig {
    fn admits(&self, gold: &Mistake, submitted: &Mistake) -> bool {
        if gold.doc_id != submitted.doc_id {
            return false;
        }
        if self.category_strict && gold.category != submitted.category {
            return false;
        }
        match self.mode {
            MatchMode::Overlap => gold.overlaps(submitted),
            MatchMode::Exact => gold.start == submitted.start && gold.end == submitted.end,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedPair {
    /// Index into the gold list.
    pub gold: usize,
    /// Index into the submitted list.
    pub submitted: usize,
}

/// Pairs plus the leftovers on each side, all as list indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_gold: Vec<usize>,
    pub unmatched_submitted: Vec<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn match_mistakes(gold: &MistakeList, submitted: &MistakeList, config: MatchConfig) -> Matching {
    let mut docs: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, m) in gold.entries.iter().enumerate() {
        docs.entry(&m.doc_id).or_default().0.push(i);
    }
    for (j, m) in submitted.entries.iter().enumerate() {
        docs.entry(&m.doc_id).or_default().1.push(j);
    }

    let mut pairs = Vec::new();
    for (gi, sj) in docs.values() {
        if gi.is_empty() || sj.is_empty() {
            continue;
        }
        let weights: Vec<Vec<Option<u64>>> = gi
            .iter()
            .map(|&i| {
                sj.iter()
                    .map(|&j| {
                        let (g, s) = (&gold.entries[i], &submitted.entries[j]);
                        config.admits(g, s).then(|| g.overlap_len(s) as u64)
                    })
                    .collect()
            })
            .collect();
        for (r, c) in max_cardinality_matching(&weights) {
            pairs.push(MatchedPair { gold: gi[r], submitted: sj[c] });
        }
    }
    pairs.sort_by_key(|p| (p.gold, p.submitted));

    let mut gold_hit = vec![false; gold.len()];
    let mut sub_hit = vec![false; submitted.len()];
    for p in &pairs {
        gold_hit[p.gold] = true;
        sub_hit[p.submitted] = true;
    }
    Matching {
        pairs,
        unmatched_gold: (0..gold.len()).filter(|&i| !gold_hit[i]).collect(),
        unmatched_submitted: (0..submitted.len()).filter(|&j| !sub_hit[j]).collect(),
    }
}

/// Maximum-cardinality matching on a bipartite graph given as a weight
/// matrix (`None` = no edge), breaking ties by maximum total weight.
/// Returns `(row, column)` pairs.
pub(crate) fn max_cardinality_matching(weights: &[Vec<Option<u64>>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // Each edge is worth more than every possible weight sum, so the
    // optimum first maximises the number of edges.
    let bonus: i64 = 1 + weights.iter().flatten().flatten().map(|&w| w as i64).sum::<i64>();
    let n = rows.max(cols);
    let mut cost = vec![vec![0i64; n + 1]; n + 1];
    for (r, row) in weights.iter().enumerate() {
        for (c, w) in row.iter().enumerate() {
            if let Some(w) = w {
                cost[r + 1][c + 1] = -(bonus + *w as i64);
            }
        }
    }
    let assignment = hungarian(&cost, n);
    assignment
        .into_iter()
        .enumerate()
        .filter_map(|(r, c)| (r < rows && c < cols && weights[r][c].is_some()).then_some((r, c)))
        .collect()
}

/// Minimum-cost perfect assignment on a 1-indexed `n x n` matrix; returns
/// the 0-based column for each 0-based row.
fn hungarian(cost: &[Vec<i64>], n: usize) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0][j] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut column_of = vec![0usize; n];
    for j in 1..=n {
        if owner[j] > 0 {
            column_of[owner[j] - 1] = j - 1;
        }
    }
    column_of
}

//! Tokenized summaries and categorized mistake spans.
//!
//! Token indices are 0-based and the end index is inclusive: a mistake on
//! the single token at position 6 is `start = 6, end = 6`.

mod consensus;
mod gsml;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use consensus::{merge_annotator_lists, select_minimal_annotation, AnnotationCandidate};
pub use gsml::{parse_gsml, parse_gsml_with, write_gsml, GsmlOptions, GSML_HEADER};

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unrecognised GSML header: {0}")]
    Header(String),
    #[error("row {row}: {reason}")]
    Row { row: u64, reason: String },
    #[error("text {doc_id}: {reason}")]
    Text { doc_id: String, reason: String },
    #[error("{doc_id}: mistakes [{}, {}] {} and [{}, {}] {} overlap with different categories",
        .first.0, .first.1, .first.2, .second.0, .second.1, .second.2)]
    CrossCategoryOverlap {
        doc_id: String,
        first: (usize, usize, MistakeCategory),
        second: (usize, usize, MistakeCategory),
    },
    #[error("no annotation candidates given")]
    NoCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MistakeCategory {
    Name,
    Number,
    Word,
    Context,
    NotCheckable,
    Other,
}

impl MistakeCategory {
    /// Row order used in reports.
    pub const ALL: [MistakeCategory; 6] = [
        MistakeCategory::Name,
        MistakeCategory::Number,
        MistakeCategory::Word,
        MistakeCategory::Context,
        MistakeCategory::NotCheckable,
        MistakeCategory::Other,
    ];

    /// Upper-case label used in GSML files.
    pub fn label(self) -> &'static str {
        match self {
            MistakeCategory::Name => "NAME",
            MistakeCategory::Number => "NUMBER",
            MistakeCategory::Word => "WORD",
            MistakeCategory::Context => "CONTEXT",
            MistakeCategory::NotCheckable => "NOT_CHECKABLE",
            MistakeCategory::Other => "OTHER",
        }
    }

    /// Human-readable row title for tables.
    pub fn title(self) -> &'static str {
        match self {
            MistakeCategory::Name => "Name",
            MistakeCategory::Number => "Number",
            MistakeCategory::Word => "Word",
            MistakeCategory::Context => "Context",
            MistakeCategory::NotCheckable => "Not checkable",
            MistakeCategory::Other => "Other",
        }
    }

    /// Annotation preference rank: Name, Number, Word, Context, Other,
    /// Not checkable (lower is preferred).
    pub fn priority(self) -> u8 {
        match self {
            MistakeCategory::Name => 0,
            MistakeCategory::Number => 1,
            MistakeCategory::Word => 2,
            MistakeCategory::Context => 3,
            MistakeCategory::Other => 4,
            MistakeCategory::NotCheckable => 5,
        }
    }
}

impl fmt::Display for MistakeCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MistakeCategory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace([' ', '-'], "_");
        match norm.as_str() {
            "NAME" => Ok(MistakeCategory::Name),
            "NUMBER" => Ok(MistakeCategory::Number),
            "WORD" => Ok(MistakeCategory::Word),
            "CONTEXT" => Ok(MistakeCategory::Context),
            "NOT_CHECKABLE" | "NOTCHECKABLE" => Ok(MistakeCategory::NotCheckable),
            "OTHER" => Ok(MistakeCategory::Other),
            _ => Err(format!("unknown category `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mistake {
    pub doc_id: String,
    pub start: usize,
    /// Inclusive.
    pub end: usize,
    pub category: MistakeCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Mistake {
    pub fn new(doc_id: impl Into<String>, start: usize, end: usize, category: MistakeCategory) -> Self {
        Self { doc_id: doc_id.into(), start, end, category, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = if note.is_empty() { None } else { Some(note) };
        self
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &Mistake) -> bool {
        self.doc_id == other.doc_id && self.start <= other.end && other.start <= self.end
    }

    /// Number of tokens shared with `other` (0 across documents).
    pub fn overlap_len(&self, other: &Mistake) -> usize {
        if !self.overlaps(other) {
            return 0;
        }
        self.end.min(other.end) + 1 - self.start.max(other.start)
    }

    pub fn covers(&self, token: usize) -> bool {
        self.start <= token && token <= self.end
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MistakeList {
    pub entries: Vec<Mistake>,
}

impl MistakeList {
    pub fn new(entries: Vec<Mistake>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Mistake> {
        self.entries.iter()
    }

    /// Entries grouped per document, preserving list order within each.
    pub fn by_doc(&self) -> BTreeMap<&str, Vec<&Mistake>> {
        let mut out: BTreeMap<&str, Vec<&Mistake>> = BTreeMap::new();
        for m in &self.entries {
            out.entry(m.doc_id.as_str()).or_default().push(m);
        }
        out
    }

    pub fn for_doc<'a>(&'a self, doc_id: &'a str) -> impl Iterator<Item = &'a Mistake> + 'a {
        self.entries.iter().filter(move |m| m.doc_id == doc_id)
    }

    pub fn count(&self, category: MistakeCategory) -> usize {
        self.entries.iter().filter(|m| m.category == category).count()
    }

    /// Sorts by document, then start, then end.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| {
            (a.doc_id.as_str(), a.start, a.end, a.category).cmp(&(b.doc_id.as_str(), b.start, b.end, b.category))
        });
    }
}

impl FromIterator<Mistake> for MistakeList {
    fn from_iter<T: IntoIterator<Item = Mistake>>(iter: T) -> Self {
        Self { entries: iter.into_iter().collect() }
    }
}

impl IntoIterator for MistakeList {
    type Item = Mistake;
    type IntoIter = std::vec::IntoIter<Mistake>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}

impl<'a> IntoIterator for &'a MistakeList {
    type Item = &'a Mistake;
    type IntoIter = std::slice::Iter<'a, Mistake>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// A pre-tokenized summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedText {
    pub doc_id: String,
    pub system_id: String,
    pub tokens: Vec<String>,
}

impl TokenizedText {
    pub fn new(doc_id: impl Into<String>, system_id: impl Into<String>, tokens: Vec<String>) -> Result<Self, AnnotationError> {
        let doc_id = doc_id.into();
        if tokens.is_empty() {
            return Err(AnnotationError::Text { doc_id, reason: "no tokens".into() });
        }
        if let Some(bad) = tokens.iter().position(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
            return Err(AnnotationError::Text { doc_id, reason: format!("token {bad} is empty or contains whitespace") });
        }
        Ok(Self { doc_id, system_id: system_id.into(), tokens })
    }

    /// Splits a pre-tokenized line on whitespace; no re-tokenization.
    pub fn from_line(doc_id: impl Into<String>, system_id: impl Into<String>, line: &str) -> Result<Self, AnnotationError> {
        Self::new(doc_id, system_id, line.split_whitespace().map(str::to_string).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn span_text(&self, start: usize, end: usize) -> String {
        self.tokens[start..=end.min(self.tokens.len() - 1)].join(" ")
    }
}

/// A collection of texts keyed by document id.
#[derive(Debug, Clone, Default)]
pub struct Texts {
    docs: BTreeMap<String, TokenizedText>,
}

impl Texts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, text: TokenizedText) {
        self.docs.insert(text.doc_id.clone(), text);
    }

    pub fn get(&self, doc_id: &str) -> Option<&TokenizedText> {
        self.docs.get(doc_id)
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.docs.contains_key(doc_id)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TokenizedText> {
        self.docs.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.docs.keys().map(String::as_str)
    }

    /// Loads every regular file in `dir` as one summary (file stem = doc
    /// id). The system id is the stem up to its first `_`, which matches
    /// the shared naming `<System>_<game>`; use [`Texts::assign_systems`]
    /// to override it.
    pub fn load_dir(dir: &Path) -> Result<Self, AnnotationError> {
        let io = |source| AnnotationError::Io { path: dir.display().to_string(), source };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        let mut texts = Texts::new();
        for path in paths {
            let Some(stem) = path.file_stem().map(|s| s.to_string_lossy().into_owned()) else { continue };
            if stem.starts_with('.') {
                continue;
            }
            let content = std::fs::read_to_string(&path)
                .map_err(|source| AnnotationError::Io { path: path.display().to_string(), source })?;
            let system = stem.split('_').next().unwrap_or(&stem).to_string();
            texts.insert(TokenizedText::from_line(stem, system, &content)?);
        }
        Ok(texts)
    }

    pub fn assign_systems(&mut self, systems: &BTreeMap<String, String>) {
        for (doc, system) in systems {
            if let Some(t) = self.docs.get_mut(doc) {
                t.system_id = system.clone();
            }
        }
    }
}

impl FromIterator<TokenizedText> for Texts {
    fn from_iter<T: IntoIterator<Item = TokenizedText>>(iter: T) -> Self {
        let mut texts = Texts::new();
        for t in iter {
            texts.insert(t);
        }
        texts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    UnknownDoc { index: usize, doc_id: String },
    StartAfterEnd { index: usize, doc_id: String, start: usize, end: usize },
    OutOfRange { index: usize, doc_id: String, start: usize, end: usize, token_count: usize },
    Overlap { doc_id: String, first: usize, second: usize },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::UnknownDoc { index, doc_id } => write!(f, "entry {index}: unknown document {doc_id}"),
            Finding::StartAfterEnd { index, doc_id, start, end } => {
                write!(f, "entry {index} ({doc_id}): start {start} > end {end}")
            }
            Finding::OutOfRange { index, doc_id, start, end, token_count } => write!(
                f,
                "entry {index} ({doc_id}): span [{start}, {end}] outside {token_count} tokens"
            ),
            Finding::Overlap { doc_id, first, second } => {
                write!(f, "{doc_id}: entries {first} and {second} overlap")
            }
        }
    }
}

/// Result of [`validate_mistakes`]; entries are referenced by list index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Reports out-of-range spans, unknown documents and overlapping pairs.
pub fn validate_mistakes(list: &MistakeList, texts: &Texts) -> ValidationReport {
    let mut findings = Vec::new();
    for (index, m) in list.entries.iter().enumerate() {
        if m.start > m.end {
            findings.push(Finding::StartAfterEnd { index, doc_id: m.doc_id.clone(), start: m.start, end: m.end });
        }
        match texts.get(&m.doc_id) {
            None => findings.push(Finding::UnknownDoc { index, doc_id: m.doc_id.clone() }),
            Some(t) if m.end >= t.len() || m.start >= t.len() => findings.push(Finding::OutOfRange {
                index,
                doc_id: m.doc_id.clone(),
                start: m.start,
                end: m.end,
                token_count: t.len(),
            }),
            Some(_) => {}
        }
    }
    findings.extend(overlapping_pairs(list));
    ValidationReport { findings }
}

fn overlapping_pairs(list: &MistakeList) -> Vec<Finding> {
    let mut per_doc: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, m) in list.entries.iter().enumerate() {
        per_doc.entry(&m.doc_id).or_default().push(i);
    }
    let mut out = Vec::new();
    for (doc, mut idx) in per_doc {
        idx.sort_by_key(|&i| (list.entries[i].start, list.entries[i].end, i));
        for (pos, &i) in idx.iter().enumerate() {
            for &j in &idx[pos + 1..] {
                if list.entries[j].start > list.entries[i].end {
                    break;
                }
                if list.entries[i].overlaps(&list.entries[j]) {
                    out.push(Finding::Overlap { doc_id: doc.to_string(), first: i.min(j), second: i.max(j) });
                }
            }
        }
    }
    out
}

/// Merges same-category overlapping spans of a submission; overlaps
/// between different categories are rejected. Output is sorted.
pub fn normalize_submission(list: &MistakeList) -> Result<MistakeList, AnnotationError> {
    let mut sorted = list.clone();
    sorted.sort();
    let mut out: Vec<Mistake> = Vec::with_capacity(sorted.len());
    for m in sorted.entries {
        if let Some(last) = out.last_mut() {
            if last.overlaps(&m) {
                if last.category != m.category {
                    return Err(AnnotationError::CrossCategoryOverlap {
                        doc_id: m.doc_id.clone(),
                        first: (last.start, last.end, last.category),
                        second: (m.start, m.end, m.category),
                    });
                }
                last.end = last.end.max(m.end);
                if last.note.is_none() {
                    last.note = m.note;
                }
                continue;
            }
        }
        out.push(m);
    }
    Ok(MistakeList::new(out))
}

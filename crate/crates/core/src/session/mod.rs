//! Annotation sessions: a human annotator works through a set of summaries,
//! accepting or rejecting machine suggestions and marking mistakes of their
//! own. Every edit is validated atomically against the document.

mod store;

use std::collections::BTreeSet;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{validate_mistakes, write_gsml, Mistake, MistakeCategory, MistakeList, Texts, TokenizedText};
use crate::scorer::Rate;

pub use store::{Lease, SessionStore, StoreError};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "error", content = "detail", rename_all = "snake_case")]
pub enum SessionError {
    #[error("document {0} appears twice")]
    DuplicateDoc(String),
    #[error("unknown document {0}")]
    UnknownDoc(String),
    #[error("invalid pre-annotations: {0}")]
    InvalidSuggestions(String),
    #[error("stale write: edit was based on version {based_on}, document is at {current}")]
    StaleWrite { based_on: u64, current: u64 },
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("document {0} is done; reopen it first")]
    DocDone(String),
    #[error("no mistake at [{start}, {end}]")]
    NoSuchMistake { start: usize, end: usize },
    #[error("no suggestion {0}")]
    NoSuchSuggestion(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocState {
    Pending,
    InProgress,
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuggestionStatus {
    Open,
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub mistake: Mistake,
    pub status: SuggestionStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionDoc {
    pub doc_id: String,
    pub system_id: String,
    pub tokens: Vec<String>,
    pub state: DocState,
    /// Bumped by every applied edit.
    pub version: u64,
    pub working: Vec<Mistake>,
    pub suggestions: Vec<Suggestion>,
    pub edits: u64,
    pub started_at: Option<DateTime<Utc>>,
    pub finished_at: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSession {
    pub session_id: String,
    pub annotator_id: String,
    pub created_at: DateTime<Utc>,
    pub docs: Vec<SessionDoc>,
}

/// The span a command refers to; spans are unique in a valid list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EditCommand {
    AcceptPre { suggestion: usize },
    RejectPre { suggestion: usize },
    Add { start: usize, end: usize, category: MistakeCategory, #[serde(default)] note: Option<String> },
    Remove { target: Target },
    MoveSpan { target: Target, start: usize, end: usize },
    SetCategory { target: Target, category: MistakeCategory },
    SetNote { target: Target, note: Option<String> },
    MarkDone,
    Reopen,
}

impl AnnotationSession {
    pub fn doc(&self, doc_id: &str) -> Option<&SessionDoc> {
        self.docs.iter().find(|d| d.doc_id == doc_id)
    }

    fn doc_mut(&mut self, doc_id: &str) -> Result<&mut SessionDoc, SessionError> {
        self.docs.iter_mut().find(|d| d.doc_id == doc_id).ok_or_else(|| SessionError::UnknownDoc(doc_id.to_string()))
    }

    pub fn texts(&self) -> Texts {
        self.docs.iter().map(|d| TokenizedText { doc_id: d.doc_id.clone(), system_id: d.system_id.clone(), tokens: d.tokens.clone() }).collect()
    }
}

/// New session over `texts` in the given order. Suggestions are shown to
/// the annotator; nothing is accepted on their behalf.
pub fn create_session(
    session_id: impl Into<String>,
    annotator_id: impl Into<String>,
    texts: Vec<TokenizedText>,
    pre: &MistakeList,
    now: DateTime<Utc>,
) -> Result<AnnotationSession, SessionError> {
    let mut seen = BTreeSet::new();
    for t in &texts {
        if !seen.insert(t.doc_id.clone()) {
            return Err(SessionError::DuplicateDoc(t.doc_id.clone()));
        }
    }
    let lookup: Texts = texts.iter().cloned().collect();
    let report = validate_mistakes(pre, &lookup);
    if !report.is_valid() {
        let reasons: Vec<String> = report.findings.iter().map(ToString::to_string).collect();
        return Err(SessionError::InvalidSuggestions(reasons.join("; ")));
    }
    let docs = texts
        .into_iter()
        .map(|t| {
            let mut suggestions: Vec<Suggestion> = pre
                .for_doc(&t.doc_id)
                .map(|m| Suggestion { mistake: m.clone(), status: SuggestionStatus::Open })
                .collect();
            suggestions.sort_by_key(|s| (s.mistake.start, s.mistake.end));
            SessionDoc {
                doc_id: t.doc_id,
                system_id: t.system_id,
                tokens: t.tokens,
                state: DocState::Pending,
                version: 0,
                working: Vec::new(),
                suggestions,
                edits: 0,
                started_at: None,
                finished_at: None,
            }
        })
        .collect();
    Ok(AnnotationSession { session_id: session_id.into(), annotator_id: annotator_id.into(), created_at: now, docs })
}

fn find(working: &[Mistake], target: Target) -> Result<usize, SessionError> {
    working
        .iter()
        .position(|m| m.start == target.start && m.end == target.end)
        .ok_or(SessionError::NoSuchMistake { start: target.start, end: target.end })
}

fn check_span(doc: &SessionDoc, start: usize, end: usize, ignore: Option<usize>) -> Result<(), SessionError> {
    if start > end {
        return Err(SessionError::Rejected(format!("start {start} > end {end}")));
    }
    if end >= doc.tokens.len() {
        return Err(SessionError::Rejected(format!("span [{start}, {end}] outside {} tokens", doc.tokens.len())));
    }
    if let Some(other) = doc
        .working
        .iter()
        .enumerate()
        .find(|&(i, m)| Some(i) != ignore && m.start <= end && start <= m.end)
        .map(|(_, m)| m)
    {
        return Err(SessionError::Rejected(format!(
            "[{start}, {end}] overlaps existing {} mistake [{}, {}]",
            other.category, other.start, other.end
        )));
    }
    Ok(())
}

/// Applies one command to a document whose version the caller last saw as
/// `based_on`. On error nothing changes.
pub fn apply_edit(
    session: &mut AnnotationSession,
    doc_id: &str,
    based_on: u64,
    command: &EditCommand,
    now: DateTime<Utc>,
) -> Result<(), SessionError> {
    let doc = session.doc_mut(doc_id)?;
    if based_on != doc.version {
        return Err(SessionError::StaleWrite { based_on, current: doc.version });
    }
    if doc.state == DocState::Done && *command != EditCommand::Reopen {
        return Err(SessionError::DocDone(doc_id.to_string()));
    }
    let mut next = doc.clone();
    match command {
        EditCommand::AcceptPre { suggestion } => {
            let s = next.suggestions.get(*suggestion).ok_or(SessionError::NoSuchSuggestion(*suggestion))?;
            let m = s.mistake.clone();
            let already = next.working.iter().any(|w| w.start == m.start && w.end == m.end && w.category == m.category);
            if !already {
                check_span(&next, m.start, m.end, None)?;
                next.working.push(m);
            }
            next.suggestions[*suggestion].status = SuggestionStatus::Accepted;
        }
        EditCommand::RejectPre { suggestion } => {
            let s = next.suggestions.get_mut(*suggestion).ok_or(SessionError::NoSuchSuggestion(*suggestion))?;
            s.status = SuggestionStatus::Rejected;
        }
        EditCommand::Add { start, end, category, note } => {
            check_span(&next, *start, *end, None)?;
            let mut m = Mistake::new(doc_id, *start, *end, *category);
            m.note = note.clone();
            next.working.push(m);
        }
        EditCommand::Remove { target } => {
            let i = find(&next.working, *target)?;
            let removed = next.working.remove(i);
            for s in &mut next.suggestions {
                if s.status == SuggestionStatus::Accepted && s.mistake.start == removed.start && s.mistake.end == removed.end {
                    s.status = SuggestionStatus::Open;
                }
            }
        }
        EditCommand::MoveSpan { target, start, end } => {
            let i = find(&next.working, *target)?;
            check_span(&next, *start, *end, Some(i))?;
            next.working[i].start = *start;
            next.working[i].end = *end;
        }
        EditCommand::SetCategory { target, category } => {
            let i = find(&next.working, *target)?;
            next.working[i].category = *category;
        }
        EditCommand::SetNote { target, note } => {
            let i = find(&next.working, *target)?;
            next.working[i].note = note.clone();
        }
        EditCommand::MarkDone => {
            next.state = DocState::Done;
            next.finished_at = Some(now);
        }
        EditCommand::Reopen => {
            next.state = DocState::InProgress;
            next.finished_at = None;
        }
    }
    if next.state == DocState::Pending {
        next.state = DocState::InProgress;
    }
    next.started_at.get_or_insert(now);
    next.working.sort_by_key(|m| (m.start, m.end));
    next.version += 1;
    next.edits += 1;
    *doc = next;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Export {
    pub gsml: String,
    pub warnings: Vec<String>,
}

/// GSML of every working list in session order; unfinished documents are
/// exported as they stand, with a warning.
pub fn export_gsml(session: &AnnotationSession) -> Export {
    let list: MistakeList = session.docs.iter().flat_map(|d| d.working.iter().cloned()).collect();
    let warnings = session
        .docs
        .iter()
        .filter(|d| d.state != DocState::Done)
        .map(|d| format!("document {} is not done", d.doc_id))
        .collect();
    Export { gsml: write_gsml(&list), warnings }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub docs_done: usize,
    pub edits: u64,
    /// Accepted suggestions over all suggestions, on done documents.
    pub acceptance_rate: Rate,
    /// Seconds from first edit to completion, per done document.
    pub seconds_per_doc: Vec<(String, f64)>,
}

pub fn session_metrics(session: &AnnotationSession) -> SessionMetrics {
    let done: Vec<&SessionDoc> = session.docs.iter().filter(|d| d.state == DocState::Done).collect();
    let total: usize = done.iter().map(|d| d.suggestions.len()).sum();
    let accepted: usize =
        done.iter().flat_map(|d| &d.suggestions).filter(|s| s.status == SuggestionStatus::Accepted).count();
    let seconds_per_doc = done
        .iter()
        .filter_map(|d| {
            let (start, end) = (d.started_at?, d.finished_at?);
            Some((d.doc_id.clone(), (end - start).num_milliseconds() as f64 / 1000.0))
        })
        .collect();
    SessionMetrics {
        docs_done: done.len(),
        edits: session.docs.iter().map(|d| d.edits).sum(),
        acceptance_rate: Rate::new(accepted as u64, total as u64),
        seconds_per_doc,
    }
}

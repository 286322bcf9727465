//! Factual-accuracy evaluation for generated basketball game summaries.
//!
//! - [`game`]: box-score ingestion and derived statistics
//! - [`annotation`]: tokenized texts, mistake spans, the GSML format
//! - [`scorer`]: recall/precision of submitted mistake lists
//! - [`factcheck`]: rule-based claim extraction and verification
//! - [`analysis`]: error frequency, per-system and position statistics
//! - [`session`]: persistent human annotation sessions over pre-annotations

pub mod analysis;
pub mod annotation;
pub mod factcheck;
pub mod game;
pub mod scorer;
pub mod session;
pub mod teams;

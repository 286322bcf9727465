//! GSML exchange format: UTF-8 CSV with header
//! `TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE` and RFC 4180 quoting.
//!
//! The reader also accepts the shared-task release layout (columns
//! `TEXT_ID`, `DOC_TOKEN_START`, `DOC_TOKEN_END`, `TYPE`, optional
//! `TOKENS`/`CORRECTION`), converting its indices to 0-based.

use std::collections::HashSet;

use super::{AnnotationError, Mistake, MistakeCategory, MistakeList, Texts};

pub const GSML_HEADER: [&str; 5] = ["TEXT_ID", "START_IDX", "END_IDX", "CATEGORY", "NOTE"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GsmlOptions {
    /// Index base of release-layout files. `None` detects it from the
    /// `TOKENS` column when texts are supplied and falls back to 1.
    pub release_index_base: Option<usize>,
}

struct Columns {
    text_id: usize,
    start: usize,
    end: usize,
    category: usize,
    note: Option<usize>,
    tokens: Option<usize>,
    release: bool,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self, AnnotationError> {
        let find = |name: &str| header.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let missing = || AnnotationError::Header(header.iter().collect::<Vec<_>>().join(","));
        let text_id = find("TEXT_ID").ok_or_else(missing)?;
        if let (Some(start), Some(end), Some(category)) = (find("START_IDX"), find("END_IDX"), find("CATEGORY")) {
            return Ok(Self { text_id, start, end, category, note: find("NOTE"), tokens: None, release: false });
        }
        match (find("DOC_TOKEN_START"), find("DOC_TOKEN_END"), find("TYPE")) {
            (Some(start), Some(end), Some(category)) => Ok(Self {
                text_id,
                start,
                end,
                category,
                note: find("CORRECTION"),
                tokens: find("TOKENS"),
                release: true,
            }),
            _ => Err(missing()),
        }
    }
}

struct RawRow {
    line: u64,
    doc_id: String,
    start: usize,
    end: usize,
    category: MistakeCategory,
    note: Option<String>,
    first_token: Option<String>,
}

pub fn parse_gsml(content: &str, texts: Option<&Texts>) -> Result<MistakeList, AnnotationError> {
    parse_gsml_with(content, texts, GsmlOptions::default())
}

pub fn parse_gsml_with(content: &str, texts: Option<&Texts>, options: GsmlOptions) -> Result<MistakeList, AnnotationError> {
    let content = content.strip_prefix('\u{feff}').unwrap_or(content);
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(content.as_bytes());
    let cols = Columns::from_header(reader.headers()?)?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let cell = |i: usize| record.get(i).map(str::trim).unwrap_or("");
        let row_err = |reason: String| AnnotationError::Row { row: line, reason };
        let index = |i: usize, name: &str| {
            cell(i).parse::<usize>().map_err(|_| row_err(format!("{name} `{}` is not a token index", cell(i))))
        };
        let doc_id = cell(cols.text_id).to_string();
        if doc_id.is_empty() {
            return Err(row_err("empty TEXT_ID".into()));
        }
        let category = cell(cols.category).parse::<MistakeCategory>().map_err(row_err)?;
        let note = cols.note.and_then(|i| record.get(i)).map(str::to_string).filter(|n| !n.is_empty());
        rows.push(RawRow {
            line,
            doc_id,
            start: index(cols.start, "start")?,
            end: index(cols.end, "end")?,
            category,
            note,
            first_token: cols.tokens.and_then(|i| cell(i).split_whitespace().next().map(str::to_string)),
        });
    }

    let shift = if cols.release { release_base(&rows, texts, options) } else { 0 };

    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let row_err = |reason: String| AnnotationError::Row { row: row.line, reason };
        if row.start < shift || row.end < shift {
            return Err(row_err(format!("index below base {shift}")));
        }
        let (start, end) = (row.start - shift, row.end - shift);
        if start > end {
            return Err(row_err(format!("start {start} > end {end}")));
        }
        if let Some(texts) = texts {
            let text = texts.get(&row.doc_id).ok_or_else(|| row_err(format!("unknown text {}", row.doc_id)))?;
            if end >= text.len() {
                return Err(row_err(format!("span [{start}, {end}] outside {} tokens of {}", text.len(), row.doc_id)));
            }
        }
        let mistake = Mistake { doc_id: row.doc_id, start, end, category: row.category, note: row.note };
        if !seen.insert(mistake.clone()) {
            return Err(row_err("duplicate row".into()));
        }
        entries.push(mistake);
    }
    Ok(MistakeList::new(entries))
}

fn release_base(rows: &[RawRow], texts: Option<&Texts>, options: GsmlOptions) -> usize {
    if let Some(base) = options.release_index_base {
        return base;
    }
    let Some(texts) = texts else { return 1 };
    let mut votes = [0usize; 2];
    for row in rows {
        let (Some(tok), Some(text)) = (&row.first_token, texts.get(&row.doc_id)) else { continue };
        for base in 0..2 {
            if row.start >= base && text.tokens.get(row.start - base) == Some(tok) {
                votes[base] += 1;
            }
        }
    }
    if votes[0] > votes[1] {
        0
    } else {
        1
    }
}

pub fn write_gsml(list: &MistakeList) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    writer.write_record(GSML_HEADER).expect("in-memory write");
    for m in &list.entries {
        writer
            .write_record([
                m.doc_id.as_str(),
                &m.start.to_string(),
                &m.end.to_string(),
                m.category.label(),
                m.note.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

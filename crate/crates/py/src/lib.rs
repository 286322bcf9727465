//! Python module `accucheck`: fact checking, scoring and GSML parsing.
//! Mistakes cross the boundary as dicts with keys `doc_id`, `start`,
//! `end` (inclusive), `category` and `note`.

use std::collections::HashMap;

use accucheck_core::annotation::{parse_gsml as parse, write_gsml as write, Mistake, MistakeList, Texts, TokenizedText};
use accucheck_core::factcheck::{check_document, CheckOptions};
use accucheck_core::game::{double_double_status, DoubleStatus, load_game, parse_game_value, PlayerLine, Side};
use accucheck_core::scorer::{compute_scores, render_report, MatchConfig, MatchMode, Rate, ReportFormat, ScoreRow};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mistake_dict<'py>(py: Python<'py>, m: &Mistake) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("doc_id", &m.doc_id)?;
    d.set_item("start", m.start)?;
    d.set_item("end", m.end)?;
    d.set_item("category", m.category.label())?;
    d.set_item("note", m.note.as_deref())?;
    Ok(d)
}

fn mistake_list<'py>(py: Python<'py>, list: &MistakeList) -> PyResult<Bound<'py, PyList>> {
    let items = list.iter().map(|m| mistake_dict(py, m)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn from_dict(d: &Bound<'_, PyDict>) -> PyResult<Mistake> {
    let get = |k: &str| d.get_item(k)?.ok_or_else(|| value_error(format!("mistake is missing `{k}`")));
    let category: String = get("category")?.extract()?;
    let mut m = Mistake::new(
        get("doc_id")?.extract::<String>()?,
        get("start")?.extract()?,
        get("end")?.extract()?,
        category.parse().map_err(value_error)?,
    );
    m.note = d.get_item("note")?.map(|n| n.extract::<Option<String>>()).transpose()?.flatten();
    Ok(m)
}

fn texts_from(map: HashMap<String, String>) -> PyResult<Texts> {
    let mut texts = Texts::new();
    for (doc, line) in map {
        let system = doc.split('_').next().unwrap_or(&doc).to_string();
        texts.insert(TokenizedText::from_line(doc, system, &line).map_err(value_error)?);
    }
    Ok(texts)
}

/// Mistakes the rule-based checker finds in `text` (space-separated
/// tokens) given the game's box-score JSON.
#[pyfunction]
#[pyo3(signature = (text, game_json, doc_id = "doc", led_strict = false))]
fn check<'py>(py: Python<'py>, text: &str, game_json: &str, doc_id: &str, led_strict: bool) -> PyResult<Bound<'py, PyList>> {
    let game = load_game(game_json, doc_id).map_err(value_error)?;
    let text = TokenizedText::from_line(doc_id, "python", text).map_err(value_error)?;
    mistake_list(py, &check_document(&text, &game, CheckOptions { led_strict }))
}

/// Consistency failures of a box-score JSON document; empty when valid.
#[pyfunction]
fn validate_game(game_json: &str) -> PyResult<Vec<String>> {
    let value: serde_json::Value = serde_json::from_str(game_json).map_err(value_error)?;
    Ok(match parse_game_value(&value, "game") {
        Ok(game) => game.validate(),
        Err(e) => vec![e.to_string()],
    })
}

#[pyfunction]
#[pyo3(signature = (content, texts = None))]
fn parse_gsml<'py>(py: Python<'py>, content: &str, texts: Option<HashMap<String, String>>) -> PyResult<Bound<'py, PyList>> {
    let texts = texts.map(texts_from).transpose()?;
    mistake_list(py, &parse(content, texts.as_ref()).map_err(value_error)?)
}

#[pyfunction]
fn write_gsml(mistakes: Vec<Bound<'_, PyDict>>) -> PyResult<String> {
    let list = mistakes.iter().map(from_dict).collect::<PyResult<Vec<_>>>()?;
    Ok(write(&MistakeList::new(list)))
}

fn rate(r: &Rate) -> Option<f64> {
    r.as_f64()
}

fn row_dict<'py>(py: Python<'py>, row: &ScoreRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mistake_recall", rate(&row.mistake_recall))?;
    d.set_item("mistake_precision", rate(&row.mistake_precision))?;
    d.set_item("token_recall", rate(&row.token_recall))?;
    d.set_item("token_precision", rate(&row.token_precision))?;
    Ok(d)
}

fn config(r#match: &str, category_strict: bool) -> PyResult<MatchConfig> {
    Ok(MatchConfig { mode: r#match.parse::<MatchMode>().map_err(value_error)?, category_strict })
}

/// Recall and precision per category plus `OVERALL`; undefined rates
/// are `None`. `texts` maps doc ids to space-separated tokens.
#[pyfunction]
#[pyo3(signature = (gold, submitted, texts, r#match = "overlap", category_strict = false))]
fn score<'py>(
    py: Python<'py>,
    gold: &str,
    submitted: &str,
    texts: HashMap<String, String>,
    r#match: &str,
    category_strict: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let texts = texts_from(texts)?;
    let gold = parse(gold, Some(&texts)).map_err(value_error)?;
    let submitted = parse(submitted, Some(&texts)).map_err(value_error)?;
    let report = compute_scores(&gold, &submitted, &texts, config(r#match, category_strict)?).map_err(value_error)?;
    let out = PyDict::new(py);
    for (c, row) in &report.per_category {
        out.set_item(c.label(), row_dict(py, row)?)?;
    }
    out.set_item("OVERALL", row_dict(py, &report.overall)?)?;
    Ok(out)
}

/// The score table as text (`table`, `csv` or `json`).
#[pyfunction]
#[pyo3(signature = (gold, submitted, texts, format = "table", r#match = "overlap", category_strict = false))]
fn score_report(
    gold: &str,
    submitted: &str,
    texts: HashMap<String, String>,
    format: &str,
    r#match: &str,
    category_strict: bool,
) -> PyResult<String> {
    let texts = texts_from(texts)?;
    let gold = parse(gold, Some(&texts)).map_err(value_error)?;
    let submitted = parse(submitted, Some(&texts)).map_err(value_error)?;
    let report = compute_scores(&gold, &submitted, &texts, config(r#match, category_strict)?).map_err(value_error)?;
    Ok(render_report(&report, format.parse::<ReportFormat>().map_err(value_error)?))
}

/// `"none"`, `"double_double"`, `"triple_double"` or `"higher_double"`.
#[pyfunction]
fn double_double(points: u32, rebounds: u32, assists: u32, steals: u32, blocks: u32) -> PyResult<String> {
    let mut p = PlayerLine::empty("player", Side::Home);
    p.played = true;
    (p.points, p.rebounds, p.assists, p.steals, p.blocks) = (points, rebounds, assists, steals, blocks);
    Ok(match double_double_status(&p).map_err(value_error)? {
        DoubleStatus::None => "none",
        DoubleStatus::DoubleDouble => "double_double",
        DoubleStatus::TripleDouble => "triple_double",
        DoubleStatus::HigherDouble => "higher_double",
    }
    .to_string())
}

#[pymodule]
fn accucheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(validate_game, m)?)?;
    m.add_function(wrap_pyfunction!(parse_gsml, m)?)?;
    m.add_function(wrap_pyfunction!(write_gsml, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(score_report, m)?)?;
    m.add_function(wrap_pyfunction!(double_double, m)?)?;
    Ok(())
}

use std::fmt::Write as _;

use super::{ScoreReport, ScoreRow};
use crate::annotation::MistakeCategory;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown format `{s}` (expected table|csv|json)")),
        }
    }
}

fn rows(report: &ScoreReport) -> Vec<(&'static str, &ScoreRow)> {
    MistakeCategory::ALL
        .iter()
        .map(|&c| (c.title(), report.row(c)))
        .chain(std::iter::once(("Overall", &report.overall)))
        .collect()
}

fn cells(row: &ScoreRow) -> [String; 4] {
    [
        row.mistake_recall.render(),
        row.mistake_precision.render(),
        row.token_recall.render(),
        row.token_precision.render(),
    ]
}

/// Renders rows Name, Number, Word, Context, Not checkable, Other, Overall
/// with three decimals; undefined cells print as `-`.
pub fn render_report(report: &ScoreReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Table => {
            let _ = writeln!(out, "{:<14}| {:^21} | {:^21}", "", "Mistake", "Token");
            let _ = writeln!(out, "{:<14}| {:>9} {:>11} | {:>9} {:>11}", "Type", "recall", "precision", "recall", "precision");
            let _ = writeln!(out, "{}", "-".repeat(62));
            for (title, row) in rows(report) {
                if title == "Overall" {
                    let _ = writeln!(out, "{}", "-".repeat(62));
                }
                let [mr, mp, tr, tp] = cells(row);
                let _ = writeln!(out, "{title:<14}| {mr:>9} {mp:>11} | {tr:>9} {tp:>11}");
            }
        }
        ReportFormat::Csv => {
            out.push_str("TYPE,MISTAKE_RECALL,MISTAKE_PRECISION,TOKEN_RECALL,TOKEN_PRECISION\n");
            for (title, row) in rows(report) {
                let [mr, mp, tr, tp] = cells(row);
                let _ = writeln!(out, "{title},{mr},{mp},{tr},{tp}");
            }
        }
        ReportFormat::Json => {
            out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
        }
    }
    out
}

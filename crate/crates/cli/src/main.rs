use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accucheck_core::analysis::{
    frequency_table, position_histogram, render_one_decimal, system_profile, SurfaceLexicon,
};
use accucheck_core::annotation::{parse_gsml, validate_mistakes, write_gsml, MistakeCategory, MistakeList, Texts};
use accucheck_core::factcheck::{check_document_report, CheckOptions};
use accucheck_core::game::{parse_game_value, GameSet};
use accucheck_core::scorer::{
    blind_spot, compute_scores, compute_scores_by_system, render_report, MatchConfig, MatchMode, ReportFormat,
};
use accucheck_core::session::SessionStore;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Factual-accuracy evaluation for generated basketball summaries.
#[derive(Parser)]
#[command(name = "accucheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check box-score JSON files for internal consistency.
    ValidateGame { files: Vec<PathBuf> },
    /// Check a GSML file against its texts.
    ValidateGsml {
        file: PathBuf,
        #[arg(long)]
        texts: PathBuf,
    },
    /// Score a submission against gold annotations.
    Score {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        submitted: PathBuf,
        #[command(flatten)]
        corpus: TextArgs,
        /// One report per system instead of one overall.
        #[arg(long)]
        per_system: bool,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
        #[command(flatten)]
        matching: MatchArgs,
    },
    /// Gold mistakes that none of the submissions detects, as GSML.
    BlindSpot {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        submitted: Vec<PathBuf>,
        #[command(flatten)]
        corpus: TextArgs,
        #[command(flatten)]
        matching: MatchArgs,
    },
    /// Run the fact checker and write its mistakes as GSML.
    Check {
        #[command(flatten)]
        corpus: TextArgs,
        #[arg(long)]
        games: PathBuf,
        /// CSV `doc_id,game_id` overriding the naming convention.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report refuted led/leading claims as warnings only.
        #[arg(long)]
        led_strict: bool,
        /// Also print every verdict as JSON lines on stderr.
        #[arg(long)]
        explain: bool,
    },
    /// Corpus statistics over gold annotations.
    Analyze {
        #[arg(long)]
        gold: PathBuf,
        #[command(flatten)]
        corpus: TextArgs,
        /// Box scores, for the TEAM/PLAYER surface classes.
        #[arg(long)]
        games: Option<PathBuf>,
        #[arg(long, value_enum)]
        report: AnalysisReport,
        #[arg(long)]
        category: Option<MistakeCategory>,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
        /// Rows to print in the frequency report.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
    /// Serve the annotation API.
    Serve {
        #[command(flatten)]
        corpus: TextArgs,
        #[arg(long)]
        games: Option<PathBuf>,
        /// GSML file offered as suggestions.
        #[arg(long)]
        pre: Option<PathBuf>,
        /// Directory for session snapshots and edit logs.
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, default_value_t = 60)]
        lease_seconds: i64,
    },
}

#[derive(Args)]
struct TextArgs {
    /// Directory with one tokenized summary per file.
    #[arg(long)]
    texts: PathBuf,
    /// CSV `doc_id,system_id`; by default the system is the file stem up to `_`.
    #[arg(long)]
    systems: Option<PathBuf>,
}

impl TextArgs {
    fn load(&self) -> Result<Texts> {
        let mut texts = Texts::load_dir(&self.texts).with_context(|| format!("loading texts from {}", self.texts.display()))?;
        if let Some(path) = &self.systems {
            texts.assign_systems(&read_pairs(path)?);
        }
        Ok(texts)
    }
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long = "match", default_value = "overlap")]
    mode: MatchMode,
    /// Only pair mistakes of the same category.
    #[arg(long)]
    category_strict: bool,
}

impl MatchArgs {
    fn config(&self) -> MatchConfig {
        MatchConfig { mode: self.mode, category_strict: self.category_strict }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalysisReport {
    Freq,
    Systems,
    Positions,
}

fn read_pairs(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BTreeMap::new();
    for row in reader.records() {
        let row = row.with_context(|| format!("reading {}", path.display()))?;
        match (row.get(0), row.get(1)) {
            (Some(a), Some(b)) => {
                out.insert(a.trim().to_string(), b.trim().to_string());
            }
            _ => bail!("{}: expected two columns", path.display()),
        }
    }
    Ok(out)
}

fn read_gsml(path: &Path, texts: Option<&Texts>) -> Result<MistakeList> {
    let content = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_gsml(&content, texts).with_context(|| format!("parsing {}", path.display()))
}

fn validate_games(files: &[PathBuf]) -> Result<bool> {
    let mut ok = true;
    for path in files {
        let content = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let failures = match serde_json::from_str(&content) {
            Err(e) => vec![e.to_string()],
            Ok(value) => match parse_game_value(&value, &stem) {
                Err(e) => vec![e.to_string()],
                Ok(game) => game.validate(),
            },
        };
        if failures.is_empty() {
            println!("{}: ok", path.display());
        } else {
            ok = false;
            for f in failures {
                println!("{}: {f}", path.display());
            }
        }
    }
    Ok(ok)
}

fn analyze(
    gold: &MistakeList,
    texts: &Texts,
    games: &GameSet,
    report: AnalysisReport,
    category: Option<MistakeCategory>,
    format: ReportFormat,
    top: usize,
) -> Result<String> {
    let mut out = String::new();
    match report {
        AnalysisReport::Freq => {
            let lexicon = SurfaceLexicon::from_games(games.iter());
            let rows: Vec<_> = frequency_table(gold, texts, &lexicon)?
                .into_iter()
                .filter(|r| category.is_none_or(|c| r.category == c))
                .take(top)
                .collect();
            match format {
                ReportFormat::Json => out = serde_json::to_string_pretty(&rows)? + "\n",
                ReportFormat::Csv => {
                    out.push_str("SURFACE,CATEGORY,COUNT\n");
                    for r in &rows {
                        writeln!(out, "{},{},{}", r.surface, r.category, r.count)?;
                    }
                }
                ReportFormat::Table => {
                    writeln!(out, "{:<16} {:<14} {:>6}", "Surface", "Category", "Count")?;
                    for r in &rows {
                        writeln!(out, "{:<16} {:<14} {:>6}", r.surface, r.category.title(), r.count)?;
                    }
                }
            }
        }
        AnalysisReport::Systems => {
            let profiles = system_profile(gold, texts)?;
            let cats = MistakeCategory::ALL;
            match format {
                ReportFormat::Json => {
                    let v: Vec<_> = profiles
                        .iter()
                        .map(|p| {
                            let means: BTreeMap<_, _> = cats.iter().map(|&c| (c.label(), render_one_decimal(p.mean(c)))).collect();
                            serde_json::json!({ "system": p.system_id, "texts": p.text_count, "means": means })
                        })
                        .collect();
                    out = serde_json::to_string_pretty(&v)? + "\n";
                }
                ReportFormat::Csv => {
                    let header: Vec<&str> = cats.iter().map(|c| c.label()).collect();
                    writeln!(out, "SYSTEM,TEXTS,{}", header.join(","))?;
                    for p in &profiles {
                        let cells: Vec<String> = cats.iter().map(|&c| render_one_decimal(p.mean(c))).collect();
                        writeln!(out, "{},{},{}", p.system_id, p.text_count, cells.join(","))?;
                    }
                }
                ReportFormat::Table => {
                    write!(out, "{:<14} {:>5}", "System", "Texts")?;
                    for c in cats {
                        write!(out, " {:>13}", c.title())?;
                    }
                    out.push('\n');
                    for p in &profiles {
                        write!(out, "{:<14} {:>5}", p.system_id, p.text_count)?;
                        for c in cats {
                            write!(out, " {:>13}", render_one_decimal(p.mean(c)))?;
                        }
                        out.push('\n');
                    }
                }
            }
        }
        AnalysisReport::Positions => {
            let h = position_histogram(gold, texts, category)?;
            match format {
                ReportFormat::Json => out = serde_json::to_string_pretty(&h)? + "\n",
                ReportFormat::Csv => {
                    out.push_str("BIN,COUNT\n");
                    for (i, n) in h.bins.iter().enumerate() {
                        writeln!(out, "{i},{n}")?;
                    }
                }
                ReportFormat::Table => {
                    let widest = h.bins.iter().copied().max().unwrap_or(0).max(1);
                    for (i, n) in h.bins.iter().enumerate() {
                        let bar = "#".repeat((40 * n / widest) as usize);
                        writeln!(out, "{:>3}-{:<3}% {:>6} {bar}", i * 10, i * 10 + 10, n)?;
                    }
                    writeln!(out, "peak bin {} of 10, {} mistakes", h.peak(), h.total())?;
                }
            }
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ValidateGame { files } => validate_games(&files),
        Command::ValidateGsml { file, texts } => {
            let texts = Texts::load_dir(&texts)?;
            let list = match read_gsml(&file, None) {
                Ok(list) => list,
                Err(e) => {
                    println!("{e:#}");
                    return Ok(false);
                }
            };
            let report = validate_mistakes(&list, &texts);
            for f in &report.findings {
                println!("{f}");
            }
            println!("{} mistakes, {} findings", list.len(), report.findings.len());
            Ok(report.is_valid())
        }
        Command::Score { gold, submitted, corpus, per_system, format, matching } => {
            let texts = corpus.load()?;
            let gold = read_gsml(&gold, Some(&texts))?;
            let submitted = read_gsml(&submitted, Some(&texts))?;
            if per_system {
                let reports = compute_scores_by_system(&gold, &submitted, &texts, matching.config())?;
                if format == ReportFormat::Json {
                    println!("{}", serde_json::to_string_pretty(&reports)?);
                } else {
                    for (system, report) in &reports {
                        println!("{system}");
                        print!("{}", render_report(report, format));
                        println!();
                    }
                }
            } else {
                print!("{}", render_report(&compute_scores(&gold, &submitted, &texts, matching.config())?, format));
            }
            Ok(true)
        }
        Command::BlindSpot { gold, submitted, corpus, matching } => {
            let texts = corpus.load()?;
            let gold = read_gsml(&gold, Some(&texts))?;
            let subs = submitted.iter().map(|p| read_gsml(p, Some(&texts))).collect::<Result<Vec<_>>>()?;
            let missed = blind_spot(&gold, &subs, matching.config());
            print!("{}", write_gsml(&missed));
            eprintln!("{} of {} gold mistakes detected by no submission", missed.len(), gold.len());
            Ok(true)
        }
        Command::Check { corpus, games, map, out, led_strict, explain } => {
            let texts = corpus.load()?;
            let mut games = GameSet::load_dir(&games)?;
            if let Some(map) = map {
                games = games.with_map(read_pairs(&map)?);
            }
            let options = CheckOptions { led_strict };
            let mut found = Vec::new();
            for text in texts.iter() {
                let Some(game) = games.for_doc(&text.doc_id) else {
                    eprintln!("warning: no game for {}; skipped", text.doc_id);
                    continue;
                };
                let report = check_document_report(text, game, options);
                if explain {
                    for v in report.verdicts.iter().chain(&report.warnings) {
                        eprintln!("{}", serde_json::to_string(v)?);
                    }
                }
                for w in &report.warnings {
                    eprintln!("warning: {} [{}, {}] {:?}", text.doc_id, w.claim.span.start, w.claim.span.end, w.expected);
                }
                found.extend(report.mistakes.entries);
            }
            let gsml = write_gsml(&MistakeList::new(found));
            match out {
                Some(path) => std::fs::write(&path, gsml).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{gsml}"),
            }
            Ok(true)
        }
        Command::Analyze { gold, corpus, games, report, category, format, top } => {
            let texts = corpus.load()?;
            let gold = read_gsml(&gold, Some(&texts))?;
            let games = games.map(|d| GameSet::load_dir(&d)).transpose()?.unwrap_or_default();
            print!("{}", analyze(&gold, &texts, &games, report, category, format, top)?);
            Ok(true)
        }
        Command::Serve { corpus, games, pre, state, port, host, lease_seconds } => {
            let texts = corpus.load()?;
            let games = games.map(|d| GameSet::load_dir(&d)).transpose()?.unwrap_or_default();
            let pre = pre.map(|p| read_gsml(&p, Some(&texts))).transpose()?;
            let store = SessionStore::open(&state)?;
            let mut app = accucheck_service::AppState::new(store, texts, games, pre);
            app.lease_ttl = accucheck_service::Duration::seconds(lease_seconds);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(accucheck_service::serve(app, SocketAddr::new(host, port)))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

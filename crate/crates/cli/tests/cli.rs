use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/sample")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_accucheck")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_game_reports_inconsistency() {
    let game = fixtures().join("game.json");
    let ok = run(&["validate-game", path(&game)]);
    assert!(ok.status.success(), "{}", stdout(&ok));

    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&game).unwrap()).unwrap();
    doc["home_line"]["TEAM-PTS"] = "1".into();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, doc.to_string()).unwrap();
    let out = run(&["validate-game", path(&game), path(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("broken.json:"), "{}", stdout(&out));
}

#[test]
fn validate_gsml() {
    let f = fixtures();
    let ok = run(&["validate-gsml", path(&f.join("gold.csv")), "--texts", path(&f.join("texts"))]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("10 mistakes, 0 findings"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\r\nsample,2,4,NAME,\r\nsample,3,3,NUMBER,\r\nsample,500,501,WORD,\r\n").unwrap();
    let out = run(&["validate-gsml", path(&bad), "--texts", path(&f.join("texts"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("overlap") && text.contains("outside"), "{text}");
}

#[test]
fn check_then_score_and_blind_spot() {
    let f = fixtures();
    let dir = tempfile::tempdir().unwrap();
    let checked = dir.path().join("checked.csv");
    let out = run(&["check", "--texts", path(&f.join("texts")), "--games", path(&f), "--out", path(&checked)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let gsml = std::fs::read_to_string(&checked).unwrap();
    assert!(gsml.starts_with("TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\r\n"));
    assert!(gsml.contains("sample,17,17,NAME,"), "{gsml}");

    let gold = f.join("gold.csv");
    let texts = f.join("texts");
    let out = run(&["score", "--gold", path(&gold), "--submitted", path(&checked), "--texts", path(&texts), "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout(&out);
    let overall = report.lines().find(|l| l.starts_with("Overall")).unwrap();
    assert!(overall.starts_with("Overall,0.700,1.000,"), "{report}");

    let out = run(&["blind-spot", "--gold", path(&gold), "--submitted", path(&checked), "--texts", path(&texts)]);
    assert!(out.status.success());
    let missed = stdout(&out);
    assert_eq!(missed.lines().count(), 4, "{missed}");
    assert!(missed.contains("CONTEXT"));
}

#[test]
fn scoring_gold_against_itself_is_perfect() {
    let f = fixtures();
    let gold = f.join("gold.csv");
    let out = run(&["score", "--gold", path(&gold), "--submitted", path(&gold), "--texts", path(&f.join("texts")), "--per-system"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("sample\n"), "{text}");
    let overall = text.lines().find(|l| l.starts_with("Overall")).unwrap();
    assert_eq!(overall.matches("1.000").count(), 4, "{overall}");
    let other = text.lines().find(|l| l.starts_with("Other")).unwrap();
    assert_eq!(other.matches('-').count(), 4, "{other}");
}

#[test]
fn analyze_reports() {
    let f = fixtures();
    let (gold, texts) = (f.join("gold.csv"), f.join("texts"));
    let base = ["analyze", "--gold", path(&gold), "--texts", path(&texts)];
    let with = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().copied().chain(extra.iter().copied()).collect();
        let out = run(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let freq = with(&["--games", path(&f), "--report", "freq", "--format", "csv"]);
    assert!(freq.contains("NUM-DIGIT,NUMBER,3"), "{freq}");
    assert!(freq.contains("DAY-WEEK,NAME,1"), "{freq}");
    let systems = with(&["--report", "systems", "--format", "csv"]);
    assert_eq!(systems.lines().nth(1), Some("sample,1,2.0,3.0,3.0,1.0,1.0,0.0"), "{systems}");
    let positions: serde_json::Value =
        serde_json::from_str(&with(&["--report", "positions", "--category", "NUMBER", "--format", "json"])).unwrap();
    assert_eq!(positions["bins"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum::<u64>(), 3);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["score", "--gold", "/nonexistent.csv", "--submitted", "/nonexistent.csv", "--texts", "/nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(run(&["score", "--format", "yaml"]).status.code(), Some(2));
}

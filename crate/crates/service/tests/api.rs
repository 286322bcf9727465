use std::path::Path;
use std::sync::{Arc, Mutex};

use accucheck_core::annotation::{parse_gsml, Texts, TokenizedText};
use accucheck_core::game::{load_game_file, GameSet};
use accucheck_core::session::SessionStore;
use accucheck_service::{router, AppState};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use chrono::{DateTime, Duration, Utc};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/sample"))
}

fn texts() -> Texts {
    let line = std::fs::read_to_string(fixtures().join("texts/sample.txt")).unwrap();
    [
        TokenizedText::from_line("sample", "fixture", &line).unwrap(),
        TokenizedText::from_line("other", "fixture", "The Suns won on Wednesday .").unwrap(),
    ]
    .into_iter()
    .collect()
}

struct Harness {
    app: Router,
    clock: Arc<Mutex<DateTime<Utc>>>,
    _dir: tempfile::TempDir,
}

fn harness_in(dir: tempfile::TempDir, with_pre: bool) -> Harness {
    let store = SessionStore::open(dir.path()).unwrap();
    let games = GameSet::new([load_game_file(&fixtures().join("game.json")).unwrap()]);
    let texts = texts();
    let pre = with_pre.then(|| parse_gsml(&std::fs::read_to_string(fixtures().join("gold.csv")).unwrap(), Some(&texts)).unwrap());
    let clock = Arc::new(Mutex::new(DateTime::from_timestamp(1_700_000_000, 0).unwrap()));
    let mut state = AppState::new(store, texts, games, pre);
    let c = clock.clone();
    state.clock = Arc::new(move || *c.lock().unwrap());
    Harness { app: router(Arc::new(state)), clock, _dir: dir }
}

fn harness() -> Harness {
    harness_in(tempfile::tempdir().unwrap(), false)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into_owned())))
}

async fn new_session(app: &Router, body: Value) -> String {
    let (status, v) = call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["session_id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn health_and_docs() {
    let h = harness();
    let (status, v) = call(&h.app, "GET", "/healthz", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["docs"], 2);
    let (_, v) = call(&h.app, "GET", "/docs", None).await;
    let has_game: Vec<bool> = v["docs"].as_array().unwrap().iter().map(|d| d["has_game"].as_bool().unwrap()).collect();
    assert_eq!(has_game, [false, true]);
}

#[tokio::test]
async fn checker_suggestions_and_edit_flow() {
    let h = harness();
    let id = new_session(&h.app, json!({ "annotator": "ann1", "docs": ["sample"] })).await;
    let uri = format!("/sessions/{id}/docs/sample");
    let (status, doc) = call(&h.app, "GET", &uri, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["version"], 0);
    assert_eq!(doc["working"], json!([]));
    let suggestions = doc["suggestions"].as_array().unwrap();
    assert!(suggestions.len() >= 6, "{doc}");
    assert!(suggestions.iter().any(|s| s["mistake"]["start"] == 17 && s["mistake"]["category"] == "NAME"));

    let (status, doc) =
        call(&h.app, "POST", &format!("{uri}/edits"), Some(json!({ "version": 0, "command": { "kind": "accept_pre", "suggestion": 0 } }))).await;
    assert_eq!(status, StatusCode::OK, "{doc}");
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["working"].as_array().unwrap().len(), 1);

    let add = json!({ "version": 1, "command": { "kind": "add", "start": 34, "end": 34, "category": "WORD", "note": "not strong" } });
    let (status, doc) = call(&h.app, "POST", &format!("{uri}/edits"), Some(add)).await;
    assert_eq!(status, StatusCode::OK, "{doc}");

    let (status, v) = call(&h.app, "POST", &format!("{uri}/edits"), Some(json!({ "version": 2, "command": { "kind": "mark_done" } }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    let (_, v) = call(&h.app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(v["docs"][0]["state"], "done");
    assert_eq!(v["metrics"]["docs_done"], 1);

    let (status, v) = call(&h.app, "POST", &format!("/sessions/{id}/export"), None).await;
    assert_eq!(status, StatusCode::OK);
    let gsml = v["gsml"].as_str().unwrap();
    assert!(gsml.starts_with("TEXT_ID,START_IDX,END_IDX,CATEGORY,NOTE\r\n"));
    assert!(gsml.contains("sample,34,34,WORD,not strong"), "{gsml}");
    assert_eq!(v["warnings"], json!([]));
}

#[tokio::test]
async fn file_suggestions() {
    let h = harness_in(tempfile::tempdir().unwrap(), true);
    let id = new_session(&h.app, json!({ "annotator": "ann1", "docs": ["sample"], "pre": "file" })).await;
    let (_, doc) = call(&h.app, "GET", &format!("/sessions/{id}/docs/sample"), None).await;
    assert_eq!(doc["suggestions"].as_array().unwrap().len(), 10);

    let h = harness();
    let (status, v) = call(&h.app, "POST", "/sessions", Some(json!({ "annotator": "a", "pre": "file" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{v}");
}

#[tokio::test]
async fn error_statuses() {
    let h = harness();
    let (status, v) = call(&h.app, "GET", "/sessions/nope", None).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::NOT_FOUND, Some("unknown_session")));
    let (status, v) = call(&h.app, "POST", "/sessions", Some(json!({ "annotator": "a", "docs": ["missing"] }))).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::NOT_FOUND, Some("unknown_doc")));

    let id = new_session(&h.app, json!({ "annotator": "a", "docs": ["other"], "pre": "none" })).await;
    let uri = format!("/sessions/{id}/docs/other/edits");
    let out_of_range = json!({ "version": 0, "command": { "kind": "add", "start": 3, "end": 99, "category": "NAME" } });
    let (status, v) = call(&h.app, "POST", &uri, Some(out_of_range)).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("rejected")), "{v}");
    let (status, v) = call(&h.app, "POST", &uri, Some(json!({ "version": 0, "command": { "kind": "remove", "target": { "start": 1, "end": 1 } } }))).await;
    assert_eq!((status, v["error"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("no_such_mistake")));
    let (status, _) = call(&h.app, "POST", &uri, Some(json!({ "version": 0, "command": { "kind": "explode" } }))).await;
    assert!(status.is_client_error());
    let (_, doc) = call(&h.app, "GET", &format!("/sessions/{id}/docs/other"), None).await;
    assert_eq!(doc["version"], 0, "rejected edits leave the document untouched");
}

#[tokio::test]
async fn concurrent_writers_on_one_version() {
    let h = harness();
    let id = new_session(&h.app, json!({ "annotator": "a", "docs": ["other"], "pre": "none" })).await;
    let uri = format!("/sessions/{id}/docs/other/edits");
    let mut tasks = Vec::new();
    for i in 0..8 {
        let app = h.app.clone();
        let uri = uri.clone();
        tasks.push(tokio::spawn(async move {
            let body = json!({ "version": 0, "command": { "kind": "add", "start": i % 5, "end": i % 5, "category": "NAME" } });
            call(&app, "POST", &uri, Some(body)).await
        }));
    }
    let mut ok = 0;
    for t in tasks {
        let (status, v) = t.await.unwrap();
        match status {
            StatusCode::OK => ok += 1,
            StatusCode::CONFLICT => {
                assert_eq!(v["error"], "stale_write");
                assert_eq!((v["based_on"].as_u64(), v["current"].as_u64()), (Some(0), Some(1)));
            }
            other => panic!("unexpected {other}: {v}"),
        }
    }
    assert_eq!(ok, 1);
    let (_, doc) = call(&h.app, "GET", &format!("/sessions/{id}/docs/other"), None).await;
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["working"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn leases_gate_writers_until_expiry() {
    let h = harness();
    let id = new_session(&h.app, json!({ "annotator": "a", "docs": ["other"], "pre": "none" })).await;
    let lease = format!("/sessions/{id}/lease");
    let (status, v) = call(&h.app, "POST", &lease, Some(json!({ "holder": "tab-1" }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    let (status, v) = call(&h.app, "POST", &lease, Some(json!({ "holder": "tab-2" }))).await;
    assert_eq!((status, v["holder"].as_str()), (StatusCode::LOCKED, Some("tab-1")));

    let uri = format!("/sessions/{id}/docs/other/edits");
    let add = |writer: &str| json!({ "version": 0, "writer": writer, "command": { "kind": "add", "start": 1, "end": 1, "category": "NAME" } });
    let (status, _) = call(&h.app, "POST", &uri, Some(add("tab-2"))).await;
    assert_eq!(status, StatusCode::LOCKED);

    *h.clock.lock().unwrap() += Duration::seconds(45);
    let (status, _) = call(&h.app, "POST", &format!("{lease}/heartbeat"), Some(json!({ "holder": "tab-1" }))).await;
    assert_eq!(status, StatusCode::OK);
    *h.clock.lock().unwrap() += Duration::seconds(45);
    let (status, _) = call(&h.app, "POST", &uri, Some(add("tab-2"))).await;
    assert_eq!(status, StatusCode::LOCKED, "heartbeat extended the lease");

    *h.clock.lock().unwrap() += Duration::seconds(61);
    let (status, v) = call(&h.app, "POST", &uri, Some(add("tab-2"))).await;
    assert_eq!(status, StatusCode::OK, "expired lease no longer blocks: {v}");

    let (status, _) = call(&h.app, "POST", &format!("{lease}/release"), Some(json!({ "holder": "tab-2" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn edits_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_path_buf();
    let h = harness_in(dir, false);
    let id = new_session(&h.app, json!({ "annotator": "a", "docs": ["other"], "pre": "none" })).await;
    let uri = format!("/sessions/{id}/docs/other/edits");
    let add = json!({ "version": 0, "command": { "kind": "add", "start": 1, "end": 1, "category": "NAME" } });
    assert_eq!(call(&h.app, "POST", &uri, Some(add)).await.0, StatusCode::OK);

    let reopened = AppState::new(SessionStore::open(&path).unwrap(), texts(), GameSet::default(), None);
    let app = router(Arc::new(reopened));
    let (status, doc) = call(&app, "GET", &format!("/sessions/{id}/docs/other"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["working"][0]["start"], 1);
}

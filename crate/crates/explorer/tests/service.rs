use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ppalg_explorer::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> (Router, Arc<AppState>) {
    let state = Arc::new(AppState::new(64));
    (router(state.clone(), None), state)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn profiles(state: &Value) -> Vec<String> {
    state["summands"].as_array().unwrap().iter().map(|s| s["profile"].as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn a2_session_mutates_and_returns() {
    let (app, _) = app();
    let (st, s) = call(&app, "POST", "/session", Some(json!({"type": "A2"}))).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(s["quiver"]["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(s["quiver"]["arrow_count"], 3);
    assert_eq!(s["exchangeable"], json!([1]));
    assert_eq!(profiles(&s), vec!["1", "1 / 2", "2 / 1"]);
    let id = s["id"].as_str().unwrap().to_string();

    let (st, m) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 1}))).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(m["mutation"]["added"], "2");
    assert_eq!(m["mutation"]["left"], "0 → (1) → (2 / 1) → (2) → 0");
    assert_eq!(m["mutation"]["right"], "0 → (2) → (1 / 2) → (1) → 0");
    assert_eq!(m["mutation"]["new_variable"], "(x3 + x4)/x1");
    assert_eq!(profiles(&m["state"])[0], "2");

    let (_, back) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 1}))).await;
    assert_eq!(profiles(&back["state"]), profiles(&s));
    assert_eq!(back["state"]["cluster_variables"], s["cluster_variables"]);
    assert_eq!(back["state"]["history"].as_array().unwrap().len(), 2);

    let (st, err) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 2}))).await;
    assert_eq!(st, StatusCode::CONFLICT, "{err}");
    let (st, _) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 7}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn a3_session_and_replay() {
    let (app, _) = app();
    let (_, s) = call(&app, "POST", "/session", Some(json!({"type": "A3"}))).await;
    assert_eq!(s["quiver"]["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(s["quiver"]["arrow_count"], 9);
    assert_eq!(s["exchangeable"], json!([1, 2, 3]));
    let id = s["id"].as_str().unwrap().to_string();
    let (_, m) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 2}))).await;
    assert_eq!(m["mutation"]["added"], "2 / 1 3");
    assert_eq!(m["mutation"]["new_variable"], "(x1*x5 + x3*x4)/x2");
    for k in [1, 3, 2] {
        let (st, _) = call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": k}))).await;
        assert_eq!(st, StatusCode::OK);
    }
    let (_, ex) = call(&app, "GET", &format!("/session/{id}/export"), None).await;
    assert_eq!(ex["history"], json!([2, 1, 3, 2]));
    let (_, current) = call(&app, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(ex["state_hash"], current["state_hash"]);

    let (st, replayed) = call(&app, "POST", "/session/import", Some(ex.clone())).await;
    assert_eq!(st, StatusCode::OK);
    assert_ne!(replayed["id"], current["id"]);
    assert_eq!(replayed["state_hash"], current["state_hash"]);
}

#[tokio::test]
async fn errors_and_catalog() {
    let (app, _) = app();
    let (st, _) = call(&app, "POST", "/session", Some(json!({"type": "D4"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (st, _) = call(&app, "GET", "/session/nope", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    let (st, _) = call(&app, "POST", "/session/nope/mutate", Some(json!({"k": 1}))).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    let (st, c) = call(&app, "GET", "/catalog/A3", None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(c["count"], 12);
    let (st, _) = call(&app, "GET", "/catalog/E6", None).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn sessions_are_evicted_beyond_the_cap() {
    let state = Arc::new(AppState::new(4));
    let app = router(state.clone(), None);
    let mut ids = Vec::new();
    for _ in 0..6 {
        let (_, s) = call(&app, "POST", "/session", Some(json!({"type": "A2"}))).await;
        ids.push(s["id"].as_str().unwrap().to_string());
    }
    assert_eq!(state.session_count(), 4);
    let (st, _) = call(&app, "GET", &format!("/session/{}", ids[0]), None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    let (st, _) = call(&app, "GET", &format!("/session/{}", ids[5]), None).await;
    assert_eq!(st, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_mutations_on_one_session_are_serialized() {
    let (app, _) = app();
    let (_, s) = call(&app, "POST", "/session", Some(json!({"type": "A3"}))).await;
    let id = s["id"].as_str().unwrap().to_string();
    let mut handles = Vec::new();
    for _ in 0..8 {
        let (app, id) = (app.clone(), id.clone());
        handles.push(tokio::spawn(async move {
            call(&app, "POST", &format!("/session/{id}/mutate"), Some(json!({"k": 1}))).await.0
        }));
    }
    for h in handles {
        assert_eq!(h.await.unwrap(), StatusCode::OK);
    }
    // an even number of mutations at the same position is the identity
    let (_, end) = call(&app, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(end["history"].as_array().unwrap().len(), 8);
    assert_eq!(profiles(&end), profiles(&s));
}

#[tokio::test]
async fn cors_headers_present() {
    let (app, _) = app();
    let req = Request::builder()
        .method("GET")
        .uri("/catalog/A2")
        .header("origin", "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

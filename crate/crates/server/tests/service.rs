use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use tigraph::session::Session;
use tigraph_server::{router, AppState};

const SCRIPT: [&str; 4] = ["g 4 0 1 0 2 0 3 2 3", "a 0 1 2", "a 1 2 1", "a 2 3 2"];

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map(|b| Body::from(b.to_string())).unwrap_or_default()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn new_session(app: &Router) -> String {
    let (status, body) = call(app, "POST", "/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    body["id"].as_str().unwrap().to_string()
}

async fn command(app: &Router, id: &str, line: &str) -> Value {
    let body = json!({ "command": line }).to_string();
    let (status, value) = call(app, "POST", &format!("/sessions/{id}/commands"), Some(&body)).await;
    assert_eq!(status, StatusCode::OK);
    value
}

#[tokio::test]
async fn example_script_over_http() {
    let app = router(AppState::new());
    let id = new_session(&app).await;
    let mut last = Value::Null;
    for line in SCRIPT {
        last = command(&app, &id, line).await;
        assert_eq!(last["ok"], true);
    }
    assert_eq!(last["output"][0], "Vertex 0: 12");
    assert_eq!(last["output"][6], "Arc 2 (2 3 2): 18 19");
    assert_eq!(last["state"]["spectrum"], "[12--20]");
    assert_eq!(last["state"]["flags"]["iti"], true);
    assert_eq!(last["state"]["transmissions"]["arcs"], json!([[17, 20], [16], [18, 19]]));

    let (status, got) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(got["state"], last["state"]);
}

#[tokio::test]
async fn repl_and_service_agree() {
    let script = ["g6 DQc", "a 0 1 3", "a 2 2 2", "bogus", "a 1 4 0", "d 0", "a 3 4 5", "c", "a 0 4 1"];
    let app = router(AppState::new());
    let id = new_session(&app).await;
    let mut local = Session::new();
    for line in script {
        let remote = command(&app, &id, line).await;
        let here = serde_json::to_value(local.execute(line)).unwrap();
        assert_eq!(remote, here, "{line}");
    }
}

#[tokio::test]
async fn command_errors_are_in_band() {
    let app = router(AppState::new());
    let id = new_session(&app).await;
    let before = command(&app, &id, SCRIPT[0]).await["state"].clone();
    let r = command(&app, &id, "a 0 7 1").await;
    assert_eq!(r["ok"], false);
    assert!(r["error"].as_str().unwrap().contains("out of range"));
    assert_eq!(r["state"], before);
}

#[tokio::test]
async fn unknown_and_deleted_sessions() {
    let app = router(AppState::new());
    let (status, body) = call(&app, "GET", "/sessions/999", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body["error"].is_string());
    let (status, _) = call(&app, "GET", "/sessions/not-a-number", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let id = new_session(&app).await;
    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let body = json!({ "command": "c" }).to_string();
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/commands"), Some(&body)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn malformed_bodies() {
    let app = router(AppState::new());
    let id = new_session(&app).await;
    let uri = format!("/sessions/{id}/commands");
    for body in ["{", "{\"cmd\": \"c\"}", "[]", "{\"command\": 5}"] {
        let (status, value) = call(&app, "POST", &uri, Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert!(value["error"].is_string());
    }
    let req = Request::builder().method("POST").uri(&uri).body(Body::from("c")).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn family_loading() {
    let app = router(AppState::new());
    let (status, families) = call(&app, "GET", "/families", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(families.as_array().unwrap().len(), 5);

    let id = new_session(&app).await;
    let uri = format!("/sessions/{id}/family");
    let (status, r) = call(&app, "POST", &uri, Some(&json!({"tag": "dob", "params": [3]}).to_string())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["response"]["state"]["spectrum"], "[13--23]");
    assert_eq!(r["response"]["state"]["order"], 11);

    let (status, r) = call(&app, "POST", &uri, Some(&json!({"tag": "G3", "params": [2]}).to_string())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(r["script"].as_array().unwrap().len(), 3);
    assert_eq!(r["response"]["state"]["flags"]["iti"], true);

    let (status, _) = call(&app, "POST", &uri, Some(&json!({"tag": "G1", "params": [1]}).to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn concurrent_commands_are_serialized_per_session() {
    let app = router(AppState::new());
    let a = new_session(&app).await;
    let b = new_session(&app).await;
    for id in [&a, &b] {
        command(&app, id, "g 3 0 1 1 2").await;
    }
    let mut tasks = Vec::new();
    for i in 0..40 {
        let app = app.clone();
        let id = if i % 2 == 0 { a.clone() } else { b.clone() };
        tasks.push(tokio::spawn(async move {
            command(&app, &id, &format!("a 0 2 {}", i % 5 + 1)).await
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap()["ok"], true);
    }
    for id in [&a, &b] {
        let (_, v) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
        assert_eq!(v["state"]["paths"].as_array().unwrap().len(), 20);
        assert_eq!(v["state"]["commands_applied"], 21);
    }
}

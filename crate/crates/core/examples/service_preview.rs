//! Drives the HTTP routes in-process: register, preview, commit, and read
//! the dashboard. `wscm serve` exposes the same router on a socket.

use axum::body::Body;
use axum::http::{Method, Request};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use wscm::model::ModelParameters;
use wscm::persistence::Store;
use wscm::service::{router, AppState};

async fn call(app: &axum::Router, method: Method, uri: &str, body: Option<Value>) -> Value {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap()
}

#[tokio::main(flavor = "current_thread")]
async fn main() {
    let app = router(AppState::new(Store::in_memory(ModelParameters::default()).unwrap()));
    call(
        &app,
        Method::POST,
        "/api/signals",
        Some(json!({"name": "gas-fumes", "date": "2026-01-01", "scores": [{"nrs_x": 1, "nrs_y": 1}], "frequency_count": 3})),
    )
    .await;

    let what_if =
        json!({"date": "2026-01-15", "scores": [{"assessor": "ana", "nrs_x": 4, "nrs_y": 4}], "frequency_count": 4});
    let preview = call(&app, Method::POST, "/api/signals/sig-0001/preview", Some(what_if)).await;
    println!("preview (not recorded): {}", preview["data"]["position"]);

    let actual = json!({"date": "2026-01-15", "scores": [{"nrs_x": 1, "nrs_y": 1}], "frequency_count": 4});
    let committed = call(&app, Method::POST, "/api/signals/sig-0001/assessments", Some(actual)).await;
    println!(
        "committed: {} alpha_eff={}",
        committed["data"]["position"], committed["data"]["outcome"]["alpha_eff"]
    );

    let stale = json!({"date": "2026-01-10", "decay": true});
    let refused = call(&app, Method::POST, "/api/signals/sig-0001/assessments", Some(stale)).await;
    println!("stale date: {}", refused["error"]);

    let dashboard = call(&app, Method::GET, "/api/dashboard", None).await;
    println!("{}", serde_json::to_string_pretty(&dashboard).unwrap());
}

#![allow(dead_code)]

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use crs::service::{self, AppState, Clock};
use crs::store::EventStore;
use crs_core::Engine;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub fn engine() -> Arc<Engine> {
    static E: OnceLock<Arc<Engine>> = OnceLock::new();
    E.get_or_init(|| {
        let catalog = crs::files::load_catalog(None).unwrap();
        Arc::new(Engine::builtin(catalog).unwrap())
    })
    .clone()
}

/// Milliseconds, advanced by hand.
#[derive(Clone, Default)]
pub struct ManualClock(Arc<AtomicU64>);

impl ManualClock {
    pub fn advance(&self, ms: u64) {
        self.0.fetch_add(ms, Ordering::SeqCst);
    }

    pub fn clock(&self) -> Clock {
        let t = self.0.clone();
        Arc::new(move || t.fetch_add(1, Ordering::SeqCst))
    }
}

pub struct Server {
    pub state: Arc<AppState>,
    pub router: Router,
    pub clock: ManualClock,
}

pub fn server(data_dir: &Path) -> Server {
    server_with(data_dir, ManualClock::default(), Duration::from_secs(86_400))
}

pub fn server_with(data_dir: &Path, clock: ManualClock, ttl: Duration) -> Server {
    let store = EventStore::open(data_dir).unwrap();
    let state = Arc::new(AppState::new(engine(), store, ttl, clock.clock()));
    let router = service::router(state.clone(), None);
    Server { state, router, clock }
}

pub struct Reply {
    pub status: StatusCode,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

impl Server {
    pub async fn call(&self, method: &str, uri: &str, body: Option<Value>) -> Reply {
        let req = Request::builder().method(method).uri(uri);
        let req = match body {
            Some(v) => req
                .header("content-type", "application/json")
                .body(Body::from(v.to_string()))
                .unwrap(),
            None => req.body(Body::empty()).unwrap(),
        };
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, body }
    }

    pub async fn create(&self, mode: &str, seed: u64) -> String {
        let r = self.call("POST", "/api/sessions", Some(serde_json::json!({"mode": mode, "seed": seed}))).await;
        assert_eq!(r.status, StatusCode::CREATED);
        r.json()["session_id"].as_str().unwrap().to_string()
    }

    pub async fn say(&self, id: &str, text: &str) -> Reply {
        self.call("POST", &format!("/api/sessions/{id}/utterance"), Some(serde_json::json!({ "text": text })))
            .await
    }
}

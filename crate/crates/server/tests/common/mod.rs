#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use healthwise_core::wire::{parse_envelope, render_request, Envelope, Fault};
use healthwise_server::{BackgroundServer, Response, ServerConfig};
use serde_json::Value;

pub const WAFER: &str = "4006381333931";
pub const DAY: &str = "2013-03-01";

pub fn config(dir: &Path) -> ServerConfig {
    ServerConfig {
        port: 0,
        data_dir: dir.to_path_buf(),
        ..ServerConfig::default()
    }
}

pub fn start(dir: &Path) -> BackgroundServer {
    BackgroundServer::start(config(dir)).expect("server starts")
}

pub fn golden(name: &str) -> Vec<u8> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub struct Client {
    base: String,
    agent: ureq::Agent,
}

pub struct HttpReply {
    pub status: u16,
    pub content_type: String,
    pub body: Vec<u8>,
}

impl HttpReply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&self.body)))
    }
}

impl Client {
    pub fn new(server: &BackgroundServer) -> Client {
        Client {
            base: server.url(),
            agent: ureq::Agent::config_builder()
                .http_status_as_error(false)
                .build()
                .into(),
        }
    }

    fn finish(result: Result<ureq::http::Response<ureq::Body>, ureq::Error>) -> HttpReply {
        let mut resp = result.expect("transport ok");
        let content_type = resp
            .headers()
            .get("content-type")
            .and_then(|v| v.to_str().ok())
            .unwrap_or_default()
            .to_string();
        HttpReply {
            status: resp.status().as_u16(),
            content_type,
            body: resp.body_mut().read_to_vec().expect("body readable"),
        }
    }

    pub fn post_raw(&self, path: &str, content_type: &str, body: &[u8]) -> HttpReply {
        Self::finish(
            self.agent
                .post(format!("{}{path}", self.base))
                .header("Content-Type", content_type)
                .send(body),
        )
    }

    pub fn get(&self, path: &str) -> HttpReply {
        Self::finish(self.agent.get(format!("{}{path}", self.base)).call())
    }

    pub fn delete(&self, path: &str) -> HttpReply {
        Self::finish(self.agent.delete(format!("{}{path}", self.base)).call())
    }

    pub fn put_json(&self, path: &str, body: &Value) -> HttpReply {
        Self::finish(
            self.agent
                .put(format!("{}{path}", self.base))
                .header("Content-Type", "application/json")
                .send(body.to_string()),
        )
    }

    pub fn post_json(&self, path: &str, body: &Value) -> HttpReply {
        self.post_raw(path, "application/json", body.to_string().as_bytes())
    }

    pub fn soap_bytes(&self, body: &[u8]) -> HttpReply {
        self.post_raw("/soap", "text/xml; charset=utf-8", body)
    }

    /// Sends one protocol request and decodes the reply.
    pub fn soap(&self, op: &str, fields: &[(&str, &str)]) -> Result<Response, Fault> {
        let map: BTreeMap<String, String> =
            fields.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let reply = self.soap_bytes(&render_request(op, &map).expect("valid request"));
        assert_eq!(reply.status, 200);
        match parse_envelope(&reply.body).expect("well-formed reply") {
            Envelope::Response(el) => Ok(Response::from_element(op, &el).expect("typed reply")),
            Envelope::Fault(f) => Err(f),
            Envelope::Request(r) => panic!("server answered with a request {r:?}"),
        }
    }
}

pub fn young_athlete_fields() -> Vec<(&'static str, &'static str)> {
    vec![
        ("name", "Alex Young"),
        ("gender", "male"),
        ("age", "20"),
        ("heightCm", "170"),
        ("weightKg", "60"),
        ("activity", "high"),
        ("email", "one@example.org"),
    ]
}

pub fn create_young_athlete(client: &Client) -> String {
    match client.soap("CreateProfile", &young_athlete_fields()) {
        Ok(Response::CreateProfile(r)) => r.user_id,
        other => panic!("{other:?}"),
    }
}

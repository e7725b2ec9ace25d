//! Blocking XML client for the server's `/soap` endpoint.

use std::collections::BTreeMap;

use healthwise_core::wire::{self, parse_envelope, render_request, Envelope, Fault, FaultCode};
use healthwise_server::Response;

#[derive(Debug)]
pub enum CallError {
    Fault(Fault),
    /// The server could not be reached or answered with something unusable.
    Transport(String),
}

impl From<Fault> for CallError {
    fn from(f: Fault) -> Self {
        CallError::Fault(f)
    }
}

pub struct Client {
    endpoint: String,
    agent: ureq::Agent,
}

impl Client {
    pub fn new(server_url: &str) -> Client {
        Client {
            endpoint: format!("{}/soap", server_url.trim_end_matches('/')),
            agent: ureq::Agent::config_builder()
                .http_status_as_error(false)
                .build()
                .into(),
        }
    }

    pub fn call(&self, op: &str, fields: &[(&str, String)]) -> Result<Response, CallError> {
        let map: BTreeMap<String, String> =
            fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        let body = render_request(op, &map).map_err(|e| CallError::Fault(e.into()))?;
        log::debug!("POST {} {}", self.endpoint, String::from_utf8_lossy(&body));
        let mut reply = self
            .agent
            .post(&self.endpoint)
            .header("Content-Type", wire::CONTENT_TYPE)
            .send(&body[..])
            .map_err(|e| CallError::Transport(format!("cannot reach {}: {e}", self.endpoint)))?;
        let status = reply.status();
        let bytes = reply
            .body_mut()
            .read_to_vec()
            .map_err(|e| CallError::Transport(format!("reading reply: {e}")))?;
        log::debug!("{status} {}", String::from_utf8_lossy(&bytes));
        match parse_envelope(&bytes) {
            Ok(Envelope::Response(el)) => Response::from_element(op, &el)
                .map_err(|e| CallError::Transport(format!("unexpected {op} reply: {e}"))),
            Ok(Envelope::Fault(f)) => Err(CallError::Fault(f)),
            Ok(Envelope::Request(_)) => Err(CallError::Transport("server echoed a request".into())),
            Err(e) => Err(CallError::Transport(format!("HTTP {status}, unreadable reply: {e}"))),
        }
    }
}

pub fn local_fault(code: FaultCode, message: impl Into<String>) -> CallError {
    CallError::Fault(Fault::new(code, message))
}

//! Routes: `/soap` for XML envelopes, `/api/*` for the JSON facade.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use chrono::NaiveDate;
use healthwise_core::wire::{self, operation, render_fault, Fault, FaultCode, Request, WireError};
use serde_json::{json, Value};

use crate::service::{Service, ServiceError};

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/soap", post(soap))
        .route("/api/users", post(create_user).get(list_users))
        .route("/api/users/{id}", put(update_user).delete(delete_user))
        .route("/api/users/{id}/log", get(user_log))
        .route("/api/products/{gtin}", get(get_product).put(put_product))
        .route("/api/check", post(check))
        .route("/api/consume", post(consume))
        .route("/api/exercises", get(exercises))
        .route("/api/decode", post(decode))
        .with_state(service)
}

/// Runs `f` off the async workers; store writes fsync.
async fn blocking<T: Send + 'static>(
    service: Arc<Service>,
    f: impl FnOnce(&Service) -> T + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(move || f(&service))
        .await
        .map_err(|e| ServiceError::Internal(format!("request handler failed: {e}")))
}

async fn soap(State(service): State<Arc<Service>>, body: Bytes) -> Response {
    let out = blocking(service, move |s| s.handle_soap(&body))
        .await
        .unwrap_or_else(|e| render_fault(&e.to_fault()));
    ([(header::CONTENT_TYPE, wire::CONTENT_TYPE)], out).into_response()
}

pub fn http_status(code: FaultCode) -> StatusCode {
    match code {
        FaultCode::ProductNotFound | FaultCode::NoSuchUser => StatusCode::NOT_FOUND,
        FaultCode::StorageFailure | FaultCode::InternalError => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::BAD_REQUEST,
    }
}

pub fn error_response(fault: &Fault) -> Response {
    let body = json!({ "error": { "code": fault.code.as_str(), "message": fault.message } });
    (http_status(fault.code), Json(body)).into_response()
}

fn reply<T: serde::Serialize>(result: Result<T, ServiceError>) -> Response {
    match result {
        Ok(value) => Json(value).into_response(),
        Err(e) => error_response(&e.to_fault()),
    }
}

/// Flattens a JSON object into protocol fields. Numbers and booleans become
/// their text form, nulls are skipped, and names outside the operation's
/// field list are dropped as on the XML side.
fn json_fields(op: &str, body: &[u8]) -> Result<BTreeMap<String, String>, ServiceError> {
    let known = operation(op).ok_or_else(|| WireError::UnknownOperation(op.into()))?;
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(BTreeMap::new());
    }
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| ServiceError::Validation(format!("request body is not JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(ServiceError::Validation("request body must be a JSON object".into()));
    };
    let mut fields = BTreeMap::new();
    for (name, value) in map {
        if !known.fields.iter().any(|f| f.name == name) {
            continue;
        }
        let text = match value {
            Value::Null => continue,
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Array(_) | Value::Object(_) => {
                return Err(WireError::InvalidValue {
                    field: name,
                    message: "expected a string or number".into(),
                }
                .into())
            }
        };
        fields.insert(name, text);
    }
    Ok(fields)
}

/// Builds the operation's request from the JSON body plus path or query
/// values, which take precedence, and runs it.
async fn call(
    service: Arc<Service>,
    op: &'static str,
    body: &[u8],
    overrides: Vec<(&'static str, String)>,
) -> Response {
    let request = json_fields(op, body).and_then(|mut fields| {
        for (name, value) in overrides {
            fields.insert(name.to_string(), value);
        }
        Ok(Request::new(op, fields)?)
    });
    let request = match request {
        Ok(r) => r,
        Err(e) => return error_response(&e.to_fault()),
    };
    let result = blocking(service, move |s| s.call(&request)).await.and_then(|r| r);
    reply(result.map(|r| r.to_json()))
}

async fn create_user(State(s): State<Arc<Service>>, body: Bytes) -> Response {
    call(s, "CreateProfile", &body, vec![]).await
}

async fn list_users(State(s): State<Arc<Service>>) -> Response {
    call(s, "GetProfiles", b"", vec![]).await
}

async fn update_user(State(s): State<Arc<Service>>, Path(id): Path<String>, body: Bytes) -> Response {
    call(s, "UpdateProfile", &body, vec![("userId", id)]).await
}

async fn delete_user(State(s): State<Arc<Service>>, Path(id): Path<String>) -> Response {
    call(s, "DeleteProfile", b"", vec![("userId", id)]).await
}

async fn get_product(State(s): State<Arc<Service>>, Path(gtin): Path<String>) -> Response {
    call(s, "GetProduct", b"", vec![("barcode", gtin)]).await
}

async fn put_product(State(s): State<Arc<Service>>, Path(gtin): Path<String>, body: Bytes) -> Response {
    call(s, "UpsertProduct", &body, vec![("barcode", gtin)]).await
}

async fn check(State(s): State<Arc<Service>>, body: Bytes) -> Response {
    call(s, "CheckEnergy", &body, vec![]).await
}

async fn consume(State(s): State<Arc<Service>>, body: Bytes) -> Response {
    call(s, "AddConsumption", &body, vec![]).await
}

async fn exercises(State(s): State<Arc<Service>>, Query(q): Query<HashMap<String, String>>) -> Response {
    let overrides = q.get("excess").map(|v| ("excessKcal", v.clone())).into_iter().collect();
    call(s, "GetExercises", b"", overrides).await
}

async fn user_log(
    State(s): State<Arc<Service>>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Response {
    let date = match q.get("date").map(|d| d.trim().parse::<NaiveDate>()).transpose() {
        Ok(d) => d,
        Err(e) => {
            return error_response(&Fault::new(
                FaultCode::ValidationError,
                format!("date must be YYYY-MM-DD: {e}"),
            ))
        }
    };
    reply(blocking(s, move |s| s.log(&id, date)).await)
}

async fn decode(State(s): State<Arc<Service>>, body: Bytes) -> Response {
    reply(blocking(s, move |s| s.decode(&body)).await.and_then(|r| r))
}

//! SOAP-style XML envelopes exchanged with the nutrition server.
//!
//! Every message is `<Envelope><Body><Operation>…</Operation></Body></Envelope>`
//! with one child element per field, all values as text. Errors travel as a
//! `Fault` element in place of the operation. There are no namespaces or
//! headers.
//!
//! ```
//! use std::collections::BTreeMap;
//! use healthwise_core::wire::{parse_envelope, render_request, Envelope};
//!
//! let fields = BTreeMap::from([("barcode".to_string(), "4006381333931".to_string())]);
//! let bytes = render_request("GetProduct", &fields).unwrap();
//! let Envelope::Request(req) = parse_envelope(&bytes).unwrap() else { panic!() };
//! assert_eq!(req.operation.name, "GetProduct");
//! assert_eq!(req.fields, fields);
//! ```

pub mod messages;
mod xml;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use xml::{parse_document, Element};

pub const XML_DECLARATION: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
pub const CONTENT_TYPE: &str = "text/xml; charset=utf-8";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("unknown operation {0:?}")]
    UnknownOperation(String),
    #[error("{operation} is missing field {field:?}")]
    MissingField { operation: String, field: String },
    #[error("field {field:?}: {message}")]
    InvalidValue { field: String, message: String },
}

impl WireError {
    pub fn fault_code(&self) -> FaultCode {
        match self {
            WireError::MalformedXml(_) => FaultCode::MalformedXml,
            WireError::UnknownOperation(_) => FaultCode::UnknownOperation,
            WireError::MissingField { .. } => FaultCode::MissingField,
            WireError::InvalidValue { .. } => FaultCode::ValidationError,
        }
    }
}

macro_rules! fault_codes {
    ($($code:ident),+ $(,)?) => {
        /// The closed set of error codes a server may return.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum FaultCode {
            $($code),+
        }

        impl FaultCode {
            pub const ALL: &'static [FaultCode] = &[$(FaultCode::$code),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(FaultCode::$code => stringify!($code)),+
                }
            }
        }

        impl FromStr for FaultCode {
            type Err = WireError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($code) => Ok(FaultCode::$code),)+
                    other => Err(WireError::InvalidValue {
                        field: "code".into(),
                        message: format!("unknown fault code {other:?}"),
                    }),
                }
            }
        }
    };
}

fault_codes!(
    MalformedXml,
    UnknownOperation,
    MissingField,
    ValidationError,
    NonDigitInput,
    UnsupportedLength,
    InvalidCheckDigit,
    ProductNotFound,
    NoSuchUser,
    NonPositiveQuantity,
    NoTableRow,
    InvariantViolation,
    MalformedImage,
    FlatScanline,
    NoGuardFound,
    AmbiguousDigit,
    ParityPatternUnknown,
    StorageFailure,
    InternalError,
);

impl fmt::Display for FaultCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{code}: {message}")]
pub struct Fault {
    pub code: FaultCode,
    pub message: String,
}

impl Fault {
    pub fn new(code: FaultCode, message: impl Into<String>) -> Fault {
        Fault {
            code,
            message: message.into(),
        }
    }

    pub fn to_element(&self) -> Element {
        Element::parent(
            "Fault",
            vec![
                Element::text("code", self.code.as_str()),
                Element::text("message", self.message.clone()),
            ],
        )
    }

    pub fn from_element(el: &Element) -> Result<Fault, WireError> {
        let text = |name: &str| {
            el.child(name)
                .map(|c| c.text.clone())
                .ok_or_else(|| WireError::MissingField {
                    operation: "Fault".into(),
                    field: name.into(),
                })
        };
        Ok(Fault {
            code: text("code")?.parse()?,
            message: text("message")?,
        })
    }
}

impl From<WireError> for Fault {
    fn from(e: WireError) -> Fault {
        Fault::new(e.fault_code(), e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    pub name: &'static str,
    pub required: bool,
}

/// One row of the protocol table.
#[derive(Debug, PartialEq, Eq)]
pub struct Operation {
    pub name: &'static str,
    pub response: &'static str,
    /// Request fields in wire order.
    pub fields: &'static [Field],
}

const fn req(name: &'static str) -> Field {
    Field {
        name,
        required: true,
    }
}

const fn opt(name: &'static str) -> Field {
    Field {
        name,
        required: false,
    }
}

const PROFILE_FIELDS: [Field; 7] = [
    req("name"),
    req("gender"),
    req("age"),
    req("heightCm"),
    req("weightKg"),
    req("activity"),
    req("email"),
];

const fn with_user_id(fields: [Field; 7]) -> [Field; 8] {
    [
        req("userId"),
        fields[0],
        fields[1],
        fields[2],
        fields[3],
        fields[4],
        fields[5],
        fields[6],
    ]
}

pub const OPERATIONS: &[Operation] = &[
    Operation {
        name: "GetProduct",
        response: "GetProductResponse",
        fields: &[req("barcode")],
    },
    Operation {
        name: "CheckEnergy",
        response: "CheckEnergyResponse",
        // Either barcode and quantityG, or a precomputed candidateKcal.
        fields: &[
            req("userId"),
            req("date"),
            opt("barcode"),
            opt("quantityG"),
            req("meal"),
            opt("candidateKcal"),
        ],
    },
    Operation {
        name: "AddConsumption",
        response: "AddConsumptionResponse",
        fields: &[
            req("userId"),
            req("date"),
            req("barcode"),
            req("quantityG"),
            req("meal"),
        ],
    },
    Operation {
        name: "GetExercises",
        response: "GetExercisesResponse",
        fields: &[req("excessKcal")],
    },
    Operation {
        name: "CreateProfile",
        response: "CreateProfileResponse",
        fields: &PROFILE_FIELDS,
    },
    Operation {
        name: "UpdateProfile",
        response: "UpdateProfileResponse",
        fields: &with_user_id(PROFILE_FIELDS),
    },
    Operation {
        name: "DeleteProfile",
        response: "DeleteProfileResponse",
        fields: &[req("userId")],
    },
    Operation {
        name: "GetProfiles",
        response: "GetProfilesResponse",
        fields: &[],
    },
    Operation {
        name: "UpsertProduct",
        response: "UpsertProductResponse",
        fields: &[
            req("barcode"),
            req("name"),
            req("energyPer100g"),
            opt("proteinPer100g"),
            opt("fatPer100g"),
            opt("carbPer100g"),
            opt("servingNote"),
        ],
    },
];

pub fn operation(name: &str) -> Option<&'static Operation> {
    OPERATIONS.iter().find(|op| op.name == name)
}

/// A parsed or to-be-rendered request: field name to text value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub operation: &'static Operation,
    pub fields: BTreeMap<String, String>,
}

impl Request {
    pub fn new(op_name: &str, fields: BTreeMap<String, String>) -> Result<Request, WireError> {
        let operation =
            operation(op_name).ok_or_else(|| WireError::UnknownOperation(op_name.into()))?;
        let request = Request { operation, fields };
        request.check_required()?;
        Ok(request)
    }

    fn check_required(&self) -> Result<(), WireError> {
        match self
            .operation
            .fields
            .iter()
            .find(|f| f.required && !self.fields.contains_key(f.name))
        {
            Some(missing) => Err(WireError::MissingField {
                operation: self.operation.name.into(),
                field: missing.name.into(),
            }),
            None => Ok(()),
        }
    }

    pub fn get(&self, field: &str) -> Option<&str> {
        self.fields.get(field).map(String::as_str)
    }

    /// Required field text; `MissingField` when absent.
    pub fn require(&self, field: &str) -> Result<&str, WireError> {
        self.get(field).ok_or_else(|| WireError::MissingField {
            operation: self.operation.name.into(),
            field: field.into(),
        })
    }

    /// Fields in protocol order. Names outside the protocol table are dropped.
    pub fn to_element(&self) -> Element {
        let children = self
            .operation
            .fields
            .iter()
            .filter_map(|f| self.fields.get(f.name).map(|v| Element::text(f.name, v.clone())))
            .collect();
        Element::parent(self.operation.name, children)
    }

    fn from_element(operation: &'static Operation, el: &Element) -> Result<Request, WireError> {
        let mut fields = BTreeMap::new();
        for child in &el.children {
            if operation.fields.iter().any(|f| f.name == child.name) {
                fields
                    .entry(child.name.clone())
                    .or_insert_with(|| child.text.clone());
            }
        }
        let request = Request { operation, fields };
        request.check_required()?;
        Ok(request)
    }

    pub fn render(&self) -> Vec<u8> {
        render_body(&self.to_element())
    }
}

/// Wraps one body element in the envelope, declaration first.
pub fn render_body(body: &Element) -> Vec<u8> {
    let mut out = String::from(XML_DECLARATION);
    out.push_str("<Envelope><Body>");
    body.write_to(&mut out);
    out.push_str("</Body></Envelope>");
    out.into_bytes()
}

pub fn render_request(op_name: &str, fields: &BTreeMap<String, String>) -> Result<Vec<u8>, WireError> {
    Ok(Request::new(op_name, fields.clone())?.render())
}

pub fn render_fault(fault: &Fault) -> Vec<u8> {
    render_body(&fault.to_element())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Envelope {
    Request(Request),
    /// A `<XxxResponse>` element for a known operation.
    Response(Element),
    Fault(Fault),
}

/// Extracts the single element inside `Envelope/Body`.
pub fn parse_body(bytes: &[u8]) -> Result<Element, WireError> {
    let root = parse_document(bytes)?;
    if root.name != "Envelope" {
        return Err(WireError::MalformedXml(format!(
            "root element is <{}>, expected <Envelope>",
            root.name
        )));
    }
    let [body] = root.children.as_slice() else {
        return Err(WireError::MalformedXml(
            "Envelope must contain exactly one Body".into(),
        ));
    };
    if body.name != "Body" {
        return Err(WireError::MalformedXml(format!(
            "expected <Body>, found <{}>",
            body.name
        )));
    }
    match body.children.as_slice() {
        [payload] => Ok(payload.clone()),
        _ => Err(WireError::MalformedXml(
            "Body must contain exactly one element".into(),
        )),
    }
}

pub fn parse_envelope(bytes: &[u8]) -> Result<Envelope, WireError> {
    let payload = parse_body(bytes)?;
    if payload.name == "Fault" {
        return Ok(Envelope::Fault(Fault::from_element(&payload)?));
    }
    if let Some(op) = operation(&payload.name) {
        return Ok(Envelope::Request(Request::from_element(op, &payload)?));
    }
    if OPERATIONS.iter().any(|op| op.response == payload.name) {
        return Ok(Envelope::Response(payload));
    }
    Err(WireError::UnknownOperation(payload.name))
}

//! Operation semantics shared by the XML and JSON endpoints.

use std::fmt::Display;
use std::str::FromStr;
use std::sync::{Mutex, MutexGuard, PoisonError, RwLock, RwLockReadGuard, RwLockWriteGuard};

use chrono::{DateTime, NaiveDate, Utc};
use healthwise_core::barcode::{decode_image, BarcodeError, DecodeOptions, Symbology};
use healthwise_core::catalog::{energy_for_quantity, Catalog, CatalogError, ProductRecord};
use healthwise_core::energy::{EnergyError, UserProfile};
use healthwise_core::exercise::suggest;
use healthwise_core::jsonl::StoreError;
use healthwise_core::ledger::{EnergyPolicy, Ledger, LedgerError, Meal};
use healthwise_core::wire::messages::{
    AddConsumptionResponse, CheckEnergyResponse, CreateProfileResponse, DeleteProfileResponse,
    GetExercisesResponse, GetProductResponse, GetProfilesResponse, Message, ProductInfo,
    ProfileInfo, Suggestion, UpdateProfileResponse, UpsertProductResponse,
};
use healthwise_core::wire::{
    parse_envelope, render_body, render_fault, Element, Envelope, Fault, FaultCode, Request,
    WireError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ServerConfig;
use crate::outbox::{notification, NotificationRecord, Outbox};
use crate::profiles::ProfileStore;
use crate::seed::seed_products;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error(transparent)]
    Barcode(#[from] BarcodeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("no user with id {0:?}")]
    NoSuchUser(String),
    #[error("{0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

fn barcode_code(e: &BarcodeError) -> FaultCode {
    match e {
        BarcodeError::NonDigitInput => FaultCode::NonDigitInput,
        BarcodeError::UnsupportedLength(_) => FaultCode::UnsupportedLength,
        BarcodeError::InvalidCheckDigit { .. } => FaultCode::InvalidCheckDigit,
        BarcodeError::InvalidNumberSystem(_)
        | BarcodeError::NotCompressible(_)
        | BarcodeError::UnsupportedSymbology(_) => FaultCode::ValidationError,
        BarcodeError::FlatScanline(_) => FaultCode::FlatScanline,
        BarcodeError::ScanlineTooShort(_)
        | BarcodeError::InvalidRuns
        | BarcodeError::MalformedImage(_) => FaultCode::MalformedImage,
        BarcodeError::NoGuardFound => FaultCode::NoGuardFound,
        BarcodeError::AmbiguousDigit { .. } => FaultCode::AmbiguousDigit,
        BarcodeError::ParityPatternUnknown(_) => FaultCode::ParityPatternUnknown,
    }
}

fn catalog_code(e: &CatalogError) -> FaultCode {
    match e {
        CatalogError::InvalidKey(b) => barcode_code(b),
        CatalogError::ProductNotFound(_) => FaultCode::ProductNotFound,
        CatalogError::InvariantViolation(_) => FaultCode::InvariantViolation,
        CatalogError::NonPositiveQuantity(_) => FaultCode::NonPositiveQuantity,
        CatalogError::Storage(_) => FaultCode::StorageFailure,
    }
}

fn energy_code(e: &EnergyError) -> FaultCode {
    match e {
        EnergyError::NoTableRow { .. } => FaultCode::NoTableRow,
        EnergyError::InvalidProfile(_) => FaultCode::ValidationError,
        EnergyError::InvalidConfig(_) => FaultCode::InternalError,
    }
}

impl ServiceError {
    pub fn fault_code(&self) -> FaultCode {
        match self {
            ServiceError::Wire(e) => e.fault_code(),
            ServiceError::Barcode(e) => barcode_code(e),
            ServiceError::Catalog(e) => catalog_code(e),
            ServiceError::Ledger(LedgerError::Energy(e)) | ServiceError::Energy(e) => energy_code(e),
            ServiceError::Ledger(LedgerError::Catalog(e)) => catalog_code(e),
            ServiceError::Ledger(LedgerError::NegativeCandidate(_)) => FaultCode::ValidationError,
            ServiceError::Ledger(LedgerError::Storage(_)) | ServiceError::Store(_) => {
                FaultCode::StorageFailure
            }
            ServiceError::NoSuchUser(_) => FaultCode::NoSuchUser,
            ServiceError::Validation(_) => FaultCode::ValidationError,
            ServiceError::Internal(_) => FaultCode::InternalError,
        }
    }

    pub fn to_fault(&self) -> Fault {
        let code = self.fault_code();
        if matches!(code, FaultCode::StorageFailure | FaultCode::InternalError) {
            log::error!("{self}");
        }
        Fault::new(code, self.to_string())
    }
}

/// A successful result of any protocol operation.
#[derive(Debug, Clone, PartialEq)]
pub enum Response {
    GetProduct(GetProductResponse),
    CheckEnergy(CheckEnergyResponse),
    AddConsumption(AddConsumptionResponse),
    GetExercises(GetExercisesResponse),
    CreateProfile(CreateProfileResponse),
    UpdateProfile(UpdateProfileResponse),
    DeleteProfile(DeleteProfileResponse),
    GetProfiles(GetProfilesResponse),
    UpsertProduct(UpsertProductResponse),
}

macro_rules! each_response {
    ($self:expr, $r:ident => $body:expr) => {
        match $self {
            Response::GetProduct($r) => $body,
            Response::CheckEnergy($r) => $body,
            Response::AddConsumption($r) => $body,
            Response::GetExercises($r) => $body,
            Response::CreateProfile($r) => $body,
            Response::UpdateProfile($r) => $body,
            Response::DeleteProfile($r) => $body,
            Response::GetProfiles($r) => $body,
            Response::UpsertProduct($r) => $body,
        }
    };
}

impl Response {
    pub fn to_element(&self) -> Element {
        each_response!(self, r => r.to_element())
    }

    pub fn to_json(&self) -> serde_json::Value {
        each_response!(self, r => serde_json::to_value(r).expect("response types serialize"))
    }

    /// Parses a response element of the kind `operation` returns.
    pub fn from_element(operation: &str, el: &Element) -> Result<Response, WireError> {
        Ok(match operation {
            "GetProduct" => Response::GetProduct(Message::from_element(el)?),
            "CheckEnergy" => Response::CheckEnergy(Message::from_element(el)?),
            "AddConsumption" => Response::AddConsumption(Message::from_element(el)?),
            "GetExercises" => Response::GetExercises(Message::from_element(el)?),
            "CreateProfile" => Response::CreateProfile(Message::from_element(el)?),
            "UpdateProfile" => Response::UpdateProfile(Message::from_element(el)?),
            "DeleteProfile" => Response::DeleteProfile(Message::from_element(el)?),
            "GetProfiles" => Response::GetProfiles(Message::from_element(el)?),
            "UpsertProduct" => Response::UpsertProduct(Message::from_element(el)?),
            other => return Err(WireError::UnknownOperation(other.into())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogEntry {
    pub entry_id: String,
    pub date: NaiveDate,
    pub meal: Meal,
    pub gtin: String,
    pub quantity_g: f64,
    pub energy_kcal: i64,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LogResponse {
    pub user_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
    pub consumed_kcal: i64,
    pub entries: Vec<LogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeResponse {
    pub gtin: String,
    pub symbology: Symbology,
}

fn read<T>(lock: &RwLock<T>) -> RwLockReadGuard<'_, T> {
    lock.read().unwrap_or_else(PoisonError::into_inner)
}

fn write<T>(lock: &RwLock<T>) -> RwLockWriteGuard<'_, T> {
    lock.write().unwrap_or_else(PoisonError::into_inner)
}

fn lock<T>(mutex: &Mutex<T>) -> MutexGuard<'_, T> {
    mutex.lock().unwrap_or_else(PoisonError::into_inner)
}

fn parse<T>(req: &Request, field: &str) -> Result<T, ServiceError>
where
    T: FromStr,
    T::Err: Display,
{
    let raw = req.require(field)?;
    raw.trim().parse().map_err(|e: T::Err| {
        WireError::InvalidValue {
            field: field.into(),
            message: format!("{raw:?}: {e}"),
        }
        .into()
    })
}

fn parse_optional<T>(req: &Request, field: &str, default: T) -> Result<T, ServiceError>
where
    T: FromStr,
    T::Err: Display,
{
    match req.get(field) {
        Some(_) => parse(req, field),
        None => Ok(default),
    }
}

fn profile_from(req: &Request, id: String) -> Result<UserProfile, ServiceError> {
    let profile = UserProfile {
        id,
        name: req.require("name")?.trim().to_string(),
        gender: parse(req, "gender")?,
        age: parse(req, "age")?,
        height_cm: parse(req, "heightCm")?,
        weight_kg: parse(req, "weightKg")?,
        activity: parse(req, "activity")?,
        email: req.require("email")?.trim().to_string(),
    };
    profile.validate()?;
    Ok(profile)
}

/// All server state. Each store has its own lock; writers commit to disk
/// before the in-memory copy changes.
pub struct Service {
    catalog: RwLock<Catalog>,
    ledger: RwLock<Ledger>,
    profiles: RwLock<ProfileStore>,
    outbox: Mutex<Outbox>,
    policy: EnergyPolicy,
}

impl Service {
    pub fn open(config: &ServerConfig) -> Result<Service, ServiceError> {
        let catalog_path = config.catalog_path();
        let fresh = !catalog_path.exists();
        let mut catalog = Catalog::open(catalog_path)?;
        if fresh && config.seed_catalog {
            catalog.upsert_batch(seed_products())?;
            log::info!("seeded catalog with {} products", catalog.len());
        }
        let ledger = Ledger::open(config.log_path())?;
        let profiles = ProfileStore::open(
            config.profiles_path(),
            ledger.entries().iter().map(|e| e.user_id.as_str()),
        )?;
        Ok(Service {
            catalog: RwLock::new(catalog),
            ledger: RwLock::new(ledger),
            profiles: RwLock::new(profiles),
            outbox: Mutex::new(Outbox::new(Some(config.outbox_path()), config.smtp.clone())),
            policy: config.policy.clone(),
        })
    }

    /// Memory-only state with the seed catalog; nothing touches disk.
    pub fn in_memory(policy: EnergyPolicy) -> Service {
        let mut catalog = Catalog::in_memory();
        catalog.upsert_batch(seed_products()).expect("seed products are valid");
        Service {
            catalog: RwLock::new(catalog),
            ledger: RwLock::new(Ledger::in_memory()),
            profiles: RwLock::new(ProfileStore::in_memory()),
            outbox: Mutex::new(Outbox::new(None, None)),
            policy,
        }
    }

    pub fn policy(&self) -> &EnergyPolicy {
        &self.policy
    }

    pub fn outbox_records(&self) -> Result<Vec<NotificationRecord>, ServiceError> {
        Ok(lock(&self.outbox).records()?)
    }

    /// Answers one XML request document. Never fails: errors become faults.
    pub fn handle_soap(&self, body: &[u8]) -> Vec<u8> {
        let result = match parse_envelope(body) {
            Ok(Envelope::Request(req)) => self.call(&req),
            Ok(Envelope::Response(el)) => Err(ServiceError::Wire(WireError::UnknownOperation(
                format!("{} is a response, not a request", el.name),
            ))),
            Ok(Envelope::Fault(_)) => Err(ServiceError::Wire(WireError::UnknownOperation(
                "Fault is not a request".into(),
            ))),
            Err(e) => Err(e.into()),
        };
        match result {
            Ok(response) => render_body(&response.to_element()),
            Err(e) => render_fault(&e.to_fault()),
        }
    }

    pub fn call(&self, req: &Request) -> Result<Response, ServiceError> {
        match req.operation.name {
            "GetProduct" => self.get_product(req).map(Response::GetProduct),
            "CheckEnergy" => self.check_energy(req).map(Response::CheckEnergy),
            "AddConsumption" => self.add_consumption(req).map(Response::AddConsumption),
            "GetExercises" => self.get_exercises(req).map(Response::GetExercises),
            "CreateProfile" => self.create_profile(req).map(Response::CreateProfile),
            "UpdateProfile" => self.update_profile(req).map(Response::UpdateProfile),
            "DeleteProfile" => self.delete_profile(req).map(Response::DeleteProfile),
            "GetProfiles" => Ok(Response::GetProfiles(self.get_profiles())),
            "UpsertProduct" => self.upsert_product(req).map(Response::UpsertProduct),
            other => Err(WireError::UnknownOperation(other.into()).into()),
        }
    }

    fn profile(&self, id: &str) -> Result<UserProfile, ServiceError> {
        read(&self.profiles)
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NoSuchUser(id.into()))
    }

    fn product(&self, code: &str) -> Result<ProductRecord, ServiceError> {
        Ok(read(&self.catalog).lookup(code)?.clone())
    }

    fn get_product(&self, req: &Request) -> Result<GetProductResponse, ServiceError> {
        let product = self.product(req.require("barcode")?)?;
        Ok(GetProductResponse {
            product: ProductInfo::from(&product),
        })
    }

    fn check_energy(&self, req: &Request) -> Result<CheckEnergyResponse, ServiceError> {
        let profile = self.profile(req.require("userId")?)?;
        let date: NaiveDate = parse(req, "date")?;
        let meal: Meal = parse(req, "meal")?;
        let candidate = match (req.get("barcode"), req.get("candidateKcal")) {
            (Some(code), None) => {
                let quantity: f64 = parse(req, "quantityG")?;
                energy_for_quantity(&self.product(code)?, quantity)?
            }
            (None, Some(_)) => parse(req, "candidateKcal")?,
            (Some(_), Some(_)) => {
                return Err(ServiceError::Validation(
                    "give either barcode and quantityG or candidateKcal, not both".into(),
                ))
            }
            (None, None) => {
                return Err(WireError::MissingField {
                    operation: req.operation.name.into(),
                    field: "barcode".into(),
                }
                .into())
            }
        };
        let verdict = read(&self.ledger).check_energy(&profile, date, candidate, meal, &self.policy)?;
        Ok(CheckEnergyResponse::from(&verdict))
    }

    fn add_consumption(&self, req: &Request) -> Result<AddConsumptionResponse, ServiceError> {
        let profile = self.profile(req.require("userId")?)?;
        let date: NaiveDate = parse(req, "date")?;
        let meal: Meal = parse(req, "meal")?;
        let quantity: f64 = parse(req, "quantityG")?;
        let product = self.product(req.require("barcode")?)?;
        let entry = write(&self.ledger).add_consumption(&profile, date, &product, quantity, meal, Utc::now())?;

        let record = notification(&profile, &entry, &product);
        let warning = match lock(&self.outbox).send(&record) {
            Ok(()) => None,
            Err(e) => {
                log::error!("entry {} stands but its notification was not recorded: {e}", entry.id);
                Some(format!("{}: notification not recorded: {e}", FaultCode::StorageFailure))
            }
        };
        Ok(AddConsumptionResponse {
            entry_id: entry.id,
            energy_kcal: entry.energy_kcal,
            warning,
        })
    }

    fn get_exercises(&self, req: &Request) -> Result<GetExercisesResponse, ServiceError> {
        let excess: i64 = parse(req, "excessKcal")?;
        if excess < 0 {
            return Err(ServiceError::Validation(format!(
                "excessKcal must be nonnegative, got {excess}"
            )));
        }
        Ok(GetExercisesResponse {
            suggestions: suggest(excess, &self.policy.exercise_chart)
                .iter()
                .map(Suggestion::from)
                .collect(),
        })
    }

    fn create_profile(&self, req: &Request) -> Result<CreateProfileResponse, ServiceError> {
        let profile = profile_from(req, String::new())?;
        let user_id = write(&self.profiles).create(profile)?;
        Ok(CreateProfileResponse { user_id })
    }

    fn update_profile(&self, req: &Request) -> Result<UpdateProfileResponse, ServiceError> {
        let user_id = req.require("userId")?.to_string();
        let profile = profile_from(req, user_id.clone())?;
        if !write(&self.profiles).update(profile)? {
            return Err(ServiceError::NoSuchUser(user_id));
        }
        Ok(UpdateProfileResponse { user_id })
    }

    fn delete_profile(&self, req: &Request) -> Result<DeleteProfileResponse, ServiceError> {
        let user_id = req.require("userId")?.to_string();
        if !write(&self.profiles).delete(&user_id)? {
            return Err(ServiceError::NoSuchUser(user_id));
        }
        Ok(DeleteProfileResponse { user_id })
    }

    fn get_profiles(&self) -> GetProfilesResponse {
        GetProfilesResponse {
            profiles: read(&self.profiles).list().iter().map(ProfileInfo::from).collect(),
        }
    }

    fn upsert_product(&self, req: &Request) -> Result<UpsertProductResponse, ServiceError> {
        let record = ProductRecord {
            gtin13: req.require("barcode")?.to_string(),
            name: req.require("name")?.trim().to_string(),
            energy_kcal_per_100g: parse(req, "energyPer100g")?,
            protein_g_per_100g: parse_optional(req, "proteinPer100g", 0.0)?,
            fat_g_per_100g: parse_optional(req, "fatPer100g", 0.0)?,
            carb_g_per_100g: parse_optional(req, "carbPer100g", 0.0)?,
            serving_note: req.get("servingNote").unwrap_or_default().to_string(),
        }
        .normalize()?;
        let gtin = record.gtin13.clone();
        let replaced = write(&self.catalog).upsert(record)?.is_some();
        Ok(UpsertProductResponse { gtin, replaced })
    }

    /// A user's consumption history, optionally for one date. History
    /// outlives the profile, so unknown ids simply have no entries.
    pub fn log(&self, user_id: &str, date: Option<NaiveDate>) -> LogResponse {
        let ledger = read(&self.ledger);
        let entries: Vec<LogEntry> = ledger
            .entries()
            .iter()
            .filter(|e| e.user_id == user_id && date.is_none_or(|d| d == e.date))
            .map(|e| LogEntry {
                entry_id: e.id.clone(),
                date: e.date,
                meal: e.meal,
                gtin: e.gtin13.clone(),
                quantity_g: e.quantity_g,
                energy_kcal: e.energy_kcal,
                timestamp: e.timestamp,
            })
            .collect();
        LogResponse {
            user_id: user_id.into(),
            date,
            consumed_kcal: entries.iter().map(|e| e.energy_kcal).sum(),
            entries,
        }
    }

    pub fn decode(&self, pgm: &[u8]) -> Result<DecodeResponse, ServiceError> {
        let gtin = decode_image(pgm, DecodeOptions::default())?;
        Ok(DecodeResponse {
            gtin: gtin.digits13().to_string(),
            symbology: gtin.symbology(),
        })
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, HashSet};
    use std::path::PathBuf;

    use super::*;

    fn req(op: &str, pairs: &[(&str, &str)]) -> Request {
        let fields: BTreeMap<String, String> =
            pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        Request::new(op, fields).unwrap()
    }

    fn young_athlete(service: &Service) -> String {
        let r = service
            .call(&req(
                "CreateProfile",
                &[
                    ("name", "Alex Young"),
                    ("gender", "male"),
                    ("age", "20"),
                    ("heightCm", "170"),
                    ("weightKg", "60"),
                    ("activity", "high"),
                    ("email", "one@example.org"),
                ],
            ))
            .unwrap();
        let Response::CreateProfile(CreateProfileResponse { user_id }) = r else {
            panic!("{r:?}")
        };
        user_id
    }

    fn code_of(service: &Service, r: Request) -> FaultCode {
        service.call(&r).unwrap_err().fault_code()
    }

    #[test]
    fn fault_mapping_is_total() {
        let io = || StoreError::Io {
            path: PathBuf::from("x"),
            source: std::io::Error::other("x"),
        };
        let cases: Vec<(ServiceError, FaultCode)> = vec![
            (WireError::MalformedXml("x".into()).into(), FaultCode::MalformedXml),
            (WireError::UnknownOperation("x".into()).into(), FaultCode::UnknownOperation),
            (
                WireError::MissingField { operation: "x".into(), field: "y".into() }.into(),
                FaultCode::MissingField,
            ),
            (
                WireError::InvalidValue { field: "x".into(), message: "y".into() }.into(),
                FaultCode::ValidationError,
            ),
            (BarcodeError::NonDigitInput.into(), FaultCode::NonDigitInput),
            (BarcodeError::UnsupportedLength(5).into(), FaultCode::UnsupportedLength),
            (
                BarcodeError::InvalidCheckDigit { expected: 1, found: 2 }.into(),
                FaultCode::InvalidCheckDigit,
            ),
            (BarcodeError::InvalidNumberSystem(2).into(), FaultCode::ValidationError),
            (BarcodeError::NotCompressible("x".into()).into(), FaultCode::ValidationError),
            (BarcodeError::UnsupportedSymbology(Symbology::UpcE).into(), FaultCode::ValidationError),
            (BarcodeError::FlatScanline(3).into(), FaultCode::FlatScanline),
            (BarcodeError::ScanlineTooShort(3).into(), FaultCode::MalformedImage),
            (BarcodeError::InvalidRuns.into(), FaultCode::MalformedImage),
            (BarcodeError::NoGuardFound.into(), FaultCode::NoGuardFound),
            (BarcodeError::AmbiguousDigit { position: 1 }.into(), FaultCode::AmbiguousDigit),
            (BarcodeError::ParityPatternUnknown("x".into()).into(), FaultCode::ParityPatternUnknown),
            (BarcodeError::MalformedImage("x".into()).into(), FaultCode::MalformedImage),
            (CatalogError::InvalidKey(BarcodeError::NonDigitInput).into(), FaultCode::NonDigitInput),
            (CatalogError::ProductNotFound("x".into()).into(), FaultCode::ProductNotFound),
            (CatalogError::InvariantViolation("x".into()).into(), FaultCode::InvariantViolation),
            (CatalogError::NonPositiveQuantity(0.0).into(), FaultCode::NonPositiveQuantity),
            (CatalogError::Storage(io()).into(), FaultCode::StorageFailure),
            (
                EnergyError::NoTableRow {
                    gender: healthwise_core::energy::Gender::Male,
                    age: 0,
                }
                .into(),
                FaultCode::NoTableRow,
            ),
            (EnergyError::InvalidProfile("x".into()).into(), FaultCode::ValidationError),
            (EnergyError::InvalidConfig("x".into()).into(), FaultCode::InternalError),
            (
                LedgerError::Energy(EnergyError::InvalidProfile("x".into())).into(),
                FaultCode::ValidationError,
            ),
            (
                LedgerError::Catalog(CatalogError::NonPositiveQuantity(-1.0)).into(),
                FaultCode::NonPositiveQuantity,
            ),
            (LedgerError::NegativeCandidate(-1).into(), FaultCode::ValidationError),
            (LedgerError::Storage(io()).into(), FaultCode::StorageFailure),
            (io().into(), FaultCode::StorageFailure),
            (ServiceError::NoSuchUser("u1".into()), FaultCode::NoSuchUser),
            (ServiceError::Validation("x".into()), FaultCode::ValidationError),
            (ServiceError::Internal("x".into()), FaultCode::InternalError),
        ];
        let mut reached = HashSet::new();
        for (err, code) in cases {
            assert_eq!(err.fault_code(), code, "{err:?}");
            reached.insert(code);
        }
        for code in FaultCode::ALL {
            assert!(reached.contains(code), "{code} is never produced");
        }
    }

    #[test]
    fn three_meals_through_service() {
        let s = Service::in_memory(EnergyPolicy::default());
        let u = young_athlete(&s);
        let mut seen = vec![];
        for (i, qty) in ["300", "200", "100"].into_iter().enumerate() {
            let fields = [
                ("userId", u.as_str()),
                ("date", "2013-03-01"),
                ("barcode", "4006381333931"),
                ("quantityG", qty),
                ("meal", "lunch"),
            ];
            let Response::CheckEnergy(v) = s.call(&req("CheckEnergy", &fields)).unwrap() else {
                panic!()
            };
            seen.push((v.balance_kcal, v.status.to_string()));
            if i < 2 {
                s.call(&req("AddConsumption", &fields)).unwrap();
            } else {
                assert_eq!(v.excess_kcal, 250);
                assert!(!v.suggestions.is_empty());
            }
        }
        assert_eq!(
            seen,
            vec![(1250, "green".into()), (250, "green".into()), (-250, "red".into())]
        );
        assert_eq!(s.log(&u, None).consumed_kcal, 2500);
    }

    #[test]
    fn candidate_forms() {
        let s = Service::in_memory(EnergyPolicy::default());
        let u = young_athlete(&s);
        let base = [("userId", u.as_str()), ("date", "2013-03-01"), ("meal", "dinner")];
        let with = |extra: &[(&'static str, &'static str)]| {
            let mut v: Vec<(&str, &str)> = base.to_vec();
            v.extend_from_slice(extra);
            req("CheckEnergy", &v)
        };
        let Response::CheckEnergy(v) = s.call(&with(&[("candidateKcal", "0")])).unwrap() else {
            panic!()
        };
        assert_eq!((v.standard_kcal, v.required_kcal), (2200, 2750));
        assert_eq!(code_of(&s, with(&[])), FaultCode::MissingField);
        assert_eq!(code_of(&s, with(&[("barcode", "4006381333931")])), FaultCode::MissingField);
        assert_eq!(
            code_of(&s, with(&[("barcode", "4006381333931"), ("candidateKcal", "1")])),
            FaultCode::ValidationError
        );
        assert_eq!(code_of(&s, with(&[("candidateKcal", "-5")])), FaultCode::ValidationError);
        assert_eq!(
            code_of(&s, with(&[("barcode", "4006381333931"), ("quantityG", "0")])),
            FaultCode::NonPositiveQuantity
        );
        assert_eq!(
            code_of(&s, with(&[("barcode", "5901234123457"), ("quantityG", "5")])),
            FaultCode::ProductNotFound
        );
    }

    #[test]
    fn profile_errors() {
        let s = Service::in_memory(EnergyPolicy::default());
        let fields = |age: &'static str| {
            vec![
                ("name", "X"),
                ("gender", "female"),
                ("age", age),
                ("heightCm", "150"),
                ("weightKg", "50"),
                ("activity", "sedentary"),
                ("email", "x@example.org"),
            ]
        };
        assert_eq!(code_of(&s, req("CreateProfile", &fields("0"))), FaultCode::ValidationError);
        assert_eq!(code_of(&s, req("CreateProfile", &fields("old"))), FaultCode::ValidationError);
        let mut update = fields("30");
        update.push(("userId", "u7"));
        assert_eq!(code_of(&s, req("UpdateProfile", &update)), FaultCode::NoSuchUser);
        assert_eq!(code_of(&s, req("DeleteProfile", &[("userId", "u7")])), FaultCode::NoSuchUser);
    }

    #[test]
    fn soap_never_fails() {
        let s = Service::in_memory(EnergyPolicy::default());
        for body in [&b"not xml"[..], b"", b"<Envelope><Body><GetProductResponse/></Body></Envelope>"] {
            let out = s.handle_soap(body);
            assert!(matches!(parse_envelope(&out), Ok(Envelope::Fault(_))));
        }
    }
}

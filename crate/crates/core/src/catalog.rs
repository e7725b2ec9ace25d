//! Product catalog keyed by canonical 13-digit GTIN.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barcode::{validate_code, BarcodeError};
use crate::energy::round_half_up;
use crate::jsonl::{self, StoreError};

/// Pure fat; nothing edible is denser.
pub const MAX_KCAL_PER_100G: f64 = 900.0;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid product key: {0}")]
    InvalidKey(#[from] BarcodeError),
    #[error("no product with barcode {0}")]
    ProductNotFound(String),
    #[error("invalid product record: {0}")]
    InvariantViolation(String),
    #[error("quantity must be positive, got {0} g")]
    NonPositiveQuantity(f64),
    #[error(transparent)]
    Storage(#[from] StoreError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductRecord {
    pub gtin13: String,
    pub name: String,
    pub energy_kcal_per_100g: f64,
    #[serde(default)]
    pub protein_g_per_100g: f64,
    #[serde(default)]
    pub fat_g_per_100g: f64,
    #[serde(default)]
    pub carb_g_per_100g: f64,
    #[serde(default)]
    pub serving_note: String,
}

impl ProductRecord {
    /// Checks field invariants and rewrites `gtin13` into canonical form.
    pub fn normalize(mut self) -> Result<ProductRecord, CatalogError> {
        self.gtin13 = validate_code(&self.gtin13)?.digits13().to_string();
        if self.name.trim().is_empty() {
            return Err(CatalogError::InvariantViolation("name must not be empty".into()));
        }
        if !(0.0..=MAX_KCAL_PER_100G).contains(&self.energy_kcal_per_100g) {
            return Err(CatalogError::InvariantViolation(format!(
                "energy {} kCal/100 g outside 0..={MAX_KCAL_PER_100G}",
                self.energy_kcal_per_100g
            )));
        }
        for (field, value) in [
            ("protein", self.protein_g_per_100g),
            ("fat", self.fat_g_per_100g),
            ("carb", self.carb_g_per_100g),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(CatalogError::InvariantViolation(format!(
                    "{field} {value} g/100 g must be a nonnegative number"
                )));
            }
        }
        Ok(self)
    }
}

/// Whole kCal in `quantity_g` grams of the product, halves rounded up.
pub fn energy_for_quantity(record: &ProductRecord, quantity_g: f64) -> Result<i64, CatalogError> {
    if !(quantity_g > 0.0 && quantity_g.is_finite()) {
        return Err(CatalogError::NonPositiveQuantity(quantity_g));
    }
    Ok(round_half_up(record.energy_kcal_per_100g * quantity_g / 100.0))
}

/// In-memory catalog, optionally mirrored to a JSON-lines file that is
/// rewritten in full on every change.
#[derive(Debug, Default)]
pub struct Catalog {
    path: Option<PathBuf>,
    records: BTreeMap<String, ProductRecord>,
}

impl Catalog {
    pub fn in_memory() -> Catalog {
        Catalog::default()
    }

    pub fn open(path: impl Into<PathBuf>) -> Result<Catalog, CatalogError> {
        let path = path.into();
        let mut records = BTreeMap::new();
        for record in jsonl::read_all::<ProductRecord>(&path)? {
            let record = record.normalize()?;
            records.insert(record.gtin13.clone(), record);
        }
        Ok(Catalog {
            path: Some(path),
            records,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> impl Iterator<Item = &ProductRecord> {
        self.records.values()
    }

    /// Looks up any valid EAN/UPC form of a code.
    pub fn lookup(&self, code: &str) -> Result<&ProductRecord, CatalogError> {
        let gtin = validate_code(code)?;
        self.records
            .get(gtin.digits13())
            .ok_or_else(|| CatalogError::ProductNotFound(gtin.digits13().to_string()))
    }

    /// Inserts or replaces a record, returning the one it replaced.
    pub fn upsert(&mut self, record: ProductRecord) -> Result<Option<ProductRecord>, CatalogError> {
        let mut previous = self.upsert_batch(vec![record])?;
        Ok(previous.pop().flatten())
    }

    /// Upserts several records with a single file rewrite. Nothing changes
    /// if any record is invalid or the write fails.
    pub fn upsert_batch(
        &mut self,
        records: Vec<ProductRecord>,
    ) -> Result<Vec<Option<ProductRecord>>, CatalogError> {
        let records = records
            .into_iter()
            .map(ProductRecord::normalize)
            .collect::<Result<Vec<_>, _>>()?;
        let mut next = self.records.clone();
        let previous = records
            .into_iter()
            .map(|r| next.insert(r.gtin13.clone(), r))
            .collect();
        if let Some(path) = &self.path {
            jsonl::write_all(path, &next.values().collect::<Vec<_>>())?;
        }
        self.records = next;
        Ok(previous)
    }
}

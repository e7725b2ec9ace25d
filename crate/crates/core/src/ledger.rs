//! Per-user daily consumption log and the green/red energy verdict.
//!
//! The verdict is always against the whole day's requirement. Meal budgets
//! ride along for display only.

use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{energy_for_quantity, CatalogError, ProductRecord};
use crate::energy::{
    required_energy, text_enum, ActivityFactors, EnergyError, MealBudgets, MealSplit,
    RequirementTable, UserProfile,
};
use crate::exercise::{suggest, ExerciseChart, ExercisePlanItem};
use crate::jsonl::{self, StoreError};

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("candidate energy must be nonnegative, got {0} kCal")]
    NegativeCandidate(i64),
    #[error(transparent)]
    Storage(#[from] StoreError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Meal {
    Breakfast,
    Lunch,
    Dinner,
}

text_enum!(Meal { Breakfast => "breakfast", Lunch => "lunch", Dinner => "dinner" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Green,
    Red,
}

text_enum!(Status { Green => "green", Red => "red" });

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumptionEntry {
    pub id: String,
    pub user_id: String,
    pub date: NaiveDate,
    pub meal: Meal,
    pub gtin13: String,
    pub quantity_g: f64,
    pub energy_kcal: i64,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyVerdict {
    pub standard_kcal: i64,
    pub required_kcal: i64,
    pub consumed_before_kcal: i64,
    pub candidate_kcal: i64,
    pub balance_kcal: i64,
    pub status: Status,
    pub excess_kcal: i64,
    pub meal: Meal,
    pub meal_budgets: MealBudgets,
    pub suggestions: Vec<ExercisePlanItem>,
}

/// Everything a verdict depends on besides the log itself.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyPolicy {
    pub requirement_table: RequirementTable,
    pub activity_factors: ActivityFactors,
    pub meal_split: MealSplit,
    pub exercise_chart: ExerciseChart,
}

impl EnergyPolicy {
    pub fn validate(&self) -> Result<(), EnergyError> {
        self.requirement_table.check_coverage()?;
        self.activity_factors.validate()?;
        self.meal_split.validate()
    }
}

/// Green while the day's balance stays at or above zero.
pub fn verdict(
    standard_kcal: i64,
    required_kcal: i64,
    meal_budgets: MealBudgets,
    consumed_before_kcal: i64,
    candidate_kcal: i64,
    meal: Meal,
    chart: &ExerciseChart,
) -> EnergyVerdict {
    let balance_kcal = required_kcal - consumed_before_kcal - candidate_kcal;
    let excess_kcal = (-balance_kcal).max(0);
    EnergyVerdict {
        standard_kcal,
        required_kcal,
        consumed_before_kcal,
        candidate_kcal,
        balance_kcal,
        status: if balance_kcal >= 0 { Status::Green } else { Status::Red },
        excess_kcal,
        meal,
        meal_budgets,
        suggestions: suggest(excess_kcal, chart),
    }
}

/// Append-only consumption log, replayed from its JSON-lines file on open.
#[derive(Debug, Default)]
pub struct Ledger {
    path: Option<PathBuf>,
    entries: Vec<ConsumptionEntry>,
    next_id: u64,
}

fn entry_number(id: &str) -> Option<u64> {
    id.strip_prefix('e')?.parse().ok()
}

impl Ledger {
    pub fn in_memory() -> Ledger {
        Ledger {
            next_id: 1,
            ..Ledger::default()
        }
    }

    pub fn open(path: impl Into<PathBuf>) -> Result<Ledger, LedgerError> {
        let path = path.into();
        let entries: Vec<ConsumptionEntry> = jsonl::replay(&path)?;
        let next_id = entries.iter().filter_map(|e| entry_number(&e.id)).max().unwrap_or(0) + 1;
        Ok(Ledger {
            path: Some(path),
            entries,
            next_id,
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn entries(&self) -> &[ConsumptionEntry] {
        &self.entries
    }

    pub fn entries_for<'a>(
        &'a self,
        user_id: &'a str,
        date: NaiveDate,
    ) -> impl Iterator<Item = &'a ConsumptionEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.user_id == user_id && e.date == date)
    }

    pub fn consumed_total(&self, user_id: &str, date: NaiveDate) -> i64 {
        self.entries_for(user_id, date).map(|e| e.energy_kcal).sum()
    }

    /// Judges `candidate_kcal` against what the user already ate that day.
    /// Never writes to the log.
    pub fn check_energy(
        &self,
        profile: &UserProfile,
        date: NaiveDate,
        candidate_kcal: i64,
        meal: Meal,
        policy: &EnergyPolicy,
    ) -> Result<EnergyVerdict, LedgerError> {
        if candidate_kcal < 0 {
            return Err(LedgerError::NegativeCandidate(candidate_kcal));
        }
        let req = required_energy(
            profile,
            &policy.requirement_table,
            &policy.activity_factors,
            &policy.meal_split,
        )?;
        Ok(verdict(
            req.standard_kcal,
            req.required_kcal,
            req.budgets,
            self.consumed_total(&profile.id, date),
            candidate_kcal,
            meal,
            &policy.exercise_chart,
        ))
    }

    /// Records that `quantity_g` of `product` was eaten. The entry is on disk
    /// before it becomes visible to readers.
    pub fn add_consumption(
        &mut self,
        profile: &UserProfile,
        date: NaiveDate,
        product: &ProductRecord,
        quantity_g: f64,
        meal: Meal,
        now: DateTime<Utc>,
    ) -> Result<ConsumptionEntry, LedgerError> {
        let energy_kcal = energy_for_quantity(product, quantity_g)?;
        let entry = ConsumptionEntry {
            id: format!("e{}", self.next_id),
            user_id: profile.id.clone(),
            date,
            meal,
            gtin13: product.gtin13.clone(),
            quantity_g,
            energy_kcal,
            timestamp: now,
        };
        if let Some(path) = &self.path {
            jsonl::append(path, &entry)?;
        }
        self.next_id += 1;
        self.entries.push(entry.clone());
        Ok(entry)
    }
}

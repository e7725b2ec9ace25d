//! Daily energy requirements: standard energy from an age/gender table,
//! scaled by an activity factor, then split across meal slots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("no requirement row for {gender} aged {age}")]
    NoTableRow { gender: Gender, age: u32 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activity {
    Sedentary,
    Moderate,
    High,
}

macro_rules! text_enum {
    ($ty:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),+ }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl std::str::FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($ty::$variant),)+
                    other => Err(format!(
                        "unknown {} {other:?}", stringify!($ty).to_ascii_lowercase()
                    )),
                }
            }
        }
    };
}
pub(crate) use text_enum;

text_enum!(Gender { Male => "male", Female => "female" });
text_enum!(Activity { Sedentary => "sedentary", Moderate => "moderate", High => "high" });

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub id: String,
    pub name: String,
    pub gender: Gender,
    pub age: u32,
    pub height_cm: u32,
    pub weight_kg: f64,
    pub activity: Activity,
    pub email: String,
}

impl UserProfile {
    pub fn validate(&self) -> Result<(), EnergyError> {
        let bad = |msg: String| Err(EnergyError::InvalidProfile(msg));
        if self.name.trim().is_empty() {
            return bad("name must not be empty".into());
        }
        if !(1..=120).contains(&self.age) {
            return bad(format!("age {} outside 1..=120", self.age));
        }
        if !(50..=250).contains(&self.height_cm) {
            return bad(format!("height {} cm outside 50..=250", self.height_cm));
        }
        if !(3.0..=300.0).contains(&self.weight_kg) {
            return bad(format!("weight {} kg outside 3..=300", self.weight_kg));
        }
        let mut parts = self.email.split('@');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(local), Some(domain), None) if !local.is_empty() && !domain.is_empty() => Ok(()),
            _ => bad(format!("email {:?} must contain one @ between nonempty parts", self.email)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequirementRow {
    pub gender: Gender,
    pub age_min: u32,
    pub age_max: u32,
    pub standard_kcal: u32,
}

/// Standard daily energy by gender and age band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequirementTable {
    rows: Vec<RequirementRow>,
}

impl RequirementTable {
    /// Accepts any rows; [`RequirementTable::check_coverage`] enforces the
    /// full-coverage invariant for configuration loading.
    pub fn new(rows: Vec<RequirementRow>) -> RequirementTable {
        RequirementTable { rows }
    }

    pub fn rows(&self) -> &[RequirementRow] {
        &self.rows
    }

    /// Every age 1..=120 must be covered exactly once for each gender.
    pub fn check_coverage(&self) -> Result<(), EnergyError> {
        for gender in [Gender::Male, Gender::Female] {
            for age in 1..=120 {
                let hits = self
                    .rows
                    .iter()
                    .filter(|r| r.gender == gender && (r.age_min..=r.age_max).contains(&age))
                    .count();
                if hits != 1 {
                    return Err(EnergyError::InvalidConfig(format!(
                        "{gender} age {age} is covered by {hits} rows"
                    )));
                }
            }
        }
        Ok(())
    }

    fn find(&self, gender: Gender, age: u32) -> Option<&RequirementRow> {
        self.rows
            .iter()
            .find(|r| r.gender == gender && (r.age_min..=r.age_max).contains(&age))
    }
}

impl Default for RequirementTable {
    /// Seeded from ICMR-style reference values. The male 18-29 band is pinned
    /// to 2200 kCal.
    fn default() -> Self {
        use Gender::{Female, Male};
        let row = |gender, age_min, age_max, standard_kcal| RequirementRow {
            gender,
            age_min,
            age_max,
            standard_kcal,
        };
        RequirementTable::new(vec![
            row(Male, 1, 3, 1060),
            row(Male, 4, 6, 1350),
            row(Male, 7, 9, 1690),
            row(Male, 10, 12, 2190),
            row(Male, 13, 15, 2750),
            row(Male, 16, 17, 3020),
            row(Male, 18, 29, 2200),
            row(Male, 30, 59, 2100),
            row(Male, 60, 120, 1900),
            row(Female, 1, 3, 1060),
            row(Female, 4, 6, 1350),
            row(Female, 7, 9, 1690),
            row(Female, 10, 12, 2010),
            row(Female, 13, 15, 2330),
            row(Female, 16, 17, 2440),
            row(Female, 18, 29, 1900),
            row(Female, 30, 59, 1800),
            row(Female, 60, 120, 1700),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivityFactors {
    pub sedentary: f64,
    pub moderate: f64,
    pub high: f64,
}

impl ActivityFactors {
    pub fn validate(&self) -> Result<(), EnergyError> {
        let ordered = 1.0 <= self.sedentary
            && self.sedentary <= self.moderate
            && self.moderate <= self.high
            && self.high <= 2.5;
        if ordered {
            Ok(())
        } else {
            Err(EnergyError::InvalidConfig(format!(
                "activity factors must satisfy 1 <= sedentary <= moderate <= high <= 2.5, got {self:?}"
            )))
        }
    }

    pub fn factor(&self, activity: Activity) -> f64 {
        match activity {
            Activity::Sedentary => self.sedentary,
            Activity::Moderate => self.moderate,
            Activity::High => self.high,
        }
    }
}

impl Default for ActivityFactors {
    fn default() -> Self {
        ActivityFactors {
            sedentary: 1.0,
            moderate: 1.12,
            high: 1.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MealSplit {
    pub breakfast: f64,
    pub lunch: f64,
    pub dinner: f64,
}

impl MealSplit {
    pub fn new(breakfast: f64, lunch: f64, dinner: f64) -> Result<MealSplit, EnergyError> {
        let split = MealSplit {
            breakfast,
            lunch,
            dinner,
        };
        split.validate()?;
        Ok(split)
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        let parts = [self.breakfast, self.lunch, self.dinner];
        if parts.iter().any(|f| f.is_nan() || *f <= 0.0) || (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(EnergyError::InvalidConfig(format!(
                "meal fractions must be positive and sum to 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

impl Default for MealSplit {
    fn default() -> Self {
        MealSplit {
            breakfast: 0.25,
            lunch: 0.40,
            dinner: 0.35,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealBudgets {
    pub breakfast: i64,
    pub lunch: i64,
    pub dinner: i64,
}

impl MealBudgets {
    pub fn total(&self) -> i64 {
        self.breakfast + self.lunch + self.dinner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyRequirement {
    pub standard_kcal: i64,
    pub required_kcal: i64,
    pub budgets: MealBudgets,
}

/// Rounds to the nearest whole number, halves away from zero for positive
/// values. The small bias absorbs binary representation error such as
/// `2750 * 0.35 = 962.4999..`.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5 + 1e-9).floor() as i64
}

pub fn standard_energy(profile: &UserProfile, table: &RequirementTable) -> Result<i64, EnergyError> {
    table
        .find(profile.gender, profile.age)
        .map(|row| i64::from(row.standard_kcal))
        .ok_or(EnergyError::NoTableRow {
            gender: profile.gender,
            age: profile.age,
        })
}

/// Standard and required energy; budgets are split with `split`.
pub fn required_energy(
    profile: &UserProfile,
    table: &RequirementTable,
    factors: &ActivityFactors,
    split: &MealSplit,
) -> Result<EnergyRequirement, EnergyError> {
    let standard_kcal = standard_energy(profile, table)?;
    let required_kcal = round_half_up(standard_kcal as f64 * factors.factor(profile.activity));
    Ok(EnergyRequirement {
        standard_kcal,
        required_kcal,
        budgets: meal_budgets(required_kcal, split),
    })
}

/// Splits a daily requirement across meals. Rounding residue goes to dinner
/// so the triple always sums to `required_kcal`.
pub fn meal_budgets(required_kcal: i64, split: &MealSplit) -> MealBudgets {
    let share = |f: f64| round_half_up(required_kcal as f64 * f);
    let breakfast = share(split.breakfast);
    let lunch = share(split.lunch);
    MealBudgets {
        breakfast,
        lunch,
        dinner: required_kcal - breakfast - lunch,
    }
}

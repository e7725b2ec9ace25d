//! Exercise chart and excess-calorie plans.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::round_half_up;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExerciseError {
    #[error("exercise chart is empty")]
    EmptyChart,
    #[error("invalid exercise {name:?}: burn rate {rate} outside 1..=30 kCal/min")]
    InvalidBurnRate { name: String, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExerciseSpec {
    pub name: String,
    pub burn_rate_kcal_per_min: f64,
}

impl ExerciseSpec {
    pub fn new(name: impl Into<String>, rate: f64) -> Result<ExerciseSpec, ExerciseError> {
        let spec = ExerciseSpec {
            name: name.into(),
            burn_rate_kcal_per_min: rate,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExerciseError> {
        if (1.0..=30.0).contains(&self.burn_rate_kcal_per_min) {
            Ok(())
        } else {
            Err(ExerciseError::InvalidBurnRate {
                name: self.name.clone(),
                rate: self.burn_rate_kcal_per_min,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExercisePlanItem {
    pub name: String,
    pub minutes: i64,
    pub burns_kcal: i64,
}

/// A nonempty list of exercises with validated burn rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExerciseSpec>", into = "Vec<ExerciseSpec>")]
pub struct ExerciseChart(Vec<ExerciseSpec>);

impl ExerciseChart {
    pub fn new(specs: Vec<ExerciseSpec>) -> Result<ExerciseChart, ExerciseError> {
        if specs.is_empty() {
            return Err(ExerciseError::EmptyChart);
        }
        specs.iter().try_for_each(ExerciseSpec::validate)?;
        Ok(ExerciseChart(specs))
    }

    pub fn specs(&self) -> &[ExerciseSpec] {
        &self.0
    }
}

impl TryFrom<Vec<ExerciseSpec>> for ExerciseChart {
    type Error = ExerciseError;

    fn try_from(specs: Vec<ExerciseSpec>) -> Result<Self, Self::Error> {
        ExerciseChart::new(specs)
    }
}

impl From<ExerciseChart> for Vec<ExerciseSpec> {
    fn from(chart: ExerciseChart) -> Self {
        chart.0
    }
}

impl Default for ExerciseChart {
    fn default() -> Self {
        ExerciseChart(vec![
            ExerciseSpec { name: "walking".into(), burn_rate_kcal_per_min: 4.0 },
            ExerciseSpec { name: "cycling".into(), burn_rate_kcal_per_min: 7.0 },
            ExerciseSpec { name: "jogging".into(), burn_rate_kcal_per_min: 10.0 },
            ExerciseSpec { name: "skipping".into(), burn_rate_kcal_per_min: 12.0 },
        ])
    }
}

/// Smallest whole number of minutes `m` with `m * rate >= excess`.
fn minutes_to_burn(excess: f64, rate: f64) -> i64 {
    let mut minutes = (excess / rate).ceil();
    if (minutes - 1.0) * rate >= excess {
        minutes -= 1.0;
    } else if minutes * rate < excess {
        minutes += 1.0;
    }
    minutes as i64
}

/// One alternative per chart entry, each enough on its own to burn `excess_kcal`.
/// Quickest first; equal durations ordered by name.
pub fn suggest(excess_kcal: i64, chart: &ExerciseChart) -> Vec<ExercisePlanItem> {
    if excess_kcal <= 0 {
        return Vec::new();
    }
    let mut items: Vec<ExercisePlanItem> = chart
        .specs()
        .iter()
        .map(|spec| {
            let rate = spec.burn_rate_kcal_per_min;
            let minutes = minutes_to_burn(excess_kcal as f64, rate);
            ExercisePlanItem {
                name: spec.name.clone(),
                minutes,
                burns_kcal: round_half_up(minutes as f64 * rate),
            }
        })
        .collect();
    items.sort_by(|a, b| a.minutes.cmp(&b.minutes).then_with(|| a.name.cmp(&b.name)));
    items
}

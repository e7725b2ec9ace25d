//! Typed response bodies. The same structs serialize to JSON for the REST
//! facade, with identical camelCase field names.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Element, WireError};
use crate::catalog::ProductRecord;
use crate::energy::{MealBudgets, UserProfile};
use crate::exercise::ExercisePlanItem;
use crate::ledger::{EnergyVerdict, Meal, Status};

/// Conversion to and from a wire element.
pub trait Message: Sized {
    const ELEMENT: &'static str;
    fn fields(&self) -> Vec<Element>;
    fn from_fields(el: &Element) -> Result<Self, WireError>;

    fn to_element(&self) -> Element {
        Element::parent(Self::ELEMENT, self.fields())
    }

    fn from_element(el: &Element) -> Result<Self, WireError> {
        if el.name != Self::ELEMENT {
            return Err(WireError::MalformedXml(format!(
                "expected <{}>, found <{}>",
                Self::ELEMENT,
                el.name
            )));
        }
        Self::from_fields(el)
    }
}

fn child<'a>(el: &'a Element, name: &str) -> Result<&'a Element, WireError> {
    el.child(name).ok_or_else(|| WireError::MissingField {
        operation: el.name.clone(),
        field: name.into(),
    })
}

fn text(el: &Element, name: &str) -> Result<String, WireError> {
    Ok(child(el, name)?.text.clone())
}

fn parse<T: FromStr>(el: &Element, name: &str) -> Result<T, WireError>
where
    T::Err: std::fmt::Display,
{
    let raw = &child(el, name)?.text;
    raw.trim().parse().map_err(|e: T::Err| WireError::InvalidValue {
        field: name.into(),
        message: format!("{raw:?}: {e}"),
    })
}

fn leaf(name: &str, value: impl ToString) -> Element {
    Element::text(name, value.to_string())
}

fn list<T>(el: &Element, name: &str, item: impl Fn(&Element) -> Result<T, WireError>) -> Result<Vec<T>, WireError> {
    child(el, name)?.children.iter().map(item).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductInfo {
    pub gtin: String,
    pub name: String,
    pub energy_per_100g: f64,
    pub protein_per_100g: f64,
    pub fat_per_100g: f64,
    pub carb_per_100g: f64,
}

impl From<&ProductRecord> for ProductInfo {
    fn from(r: &ProductRecord) -> Self {
        ProductInfo {
            gtin: r.gtin13.clone(),
            name: r.name.clone(),
            energy_per_100g: r.energy_kcal_per_100g,
            protein_per_100g: r.protein_g_per_100g,
            fat_per_100g: r.fat_g_per_100g,
            carb_per_100g: r.carb_g_per_100g,
        }
    }
}

impl Message for ProductInfo {
    const ELEMENT: &'static str = "product";

    fn fields(&self) -> Vec<Element> {
        vec![
            leaf("gtin", &self.gtin),
            leaf("name", &self.name),
            leaf("energyPer100g", self.energy_per_100g),
            leaf("proteinPer100g", self.protein_per_100g),
            leaf("fatPer100g", self.fat_per_100g),
            leaf("carbPer100g", self.carb_per_100g),
        ]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(ProductInfo {
            gtin: text(el, "gtin")?,
            name: text(el, "name")?,
            energy_per_100g: parse(el, "energyPer100g")?,
            protein_per_100g: parse(el, "proteinPer100g")?,
            fat_per_100g: parse(el, "fatPer100g")?,
            carb_per_100g: parse(el, "carbPer100g")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GetProductResponse {
    pub product: ProductInfo,
}

impl Message for GetProductResponse {
    const ELEMENT: &'static str = "GetProductResponse";

    fn fields(&self) -> Vec<Element> {
        vec![self.product.to_element()]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(GetProductResponse {
            product: ProductInfo::from_element(child(el, "product")?)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub name: String,
    pub minutes: i64,
}

impl From<&ExercisePlanItem> for Suggestion {
    fn from(item: &ExercisePlanItem) -> Self {
        Suggestion {
            name: item.name.clone(),
            minutes: item.minutes,
        }
    }
}

impl Message for Suggestion {
    const ELEMENT: &'static str = "suggestion";

    fn fields(&self) -> Vec<Element> {
        vec![leaf("name", &self.name), leaf("minutes", self.minutes)]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(Suggestion {
            name: text(el, "name")?,
            minutes: parse(el, "minutes")?,
        })
    }
}

fn suggestions_element(items: &[Suggestion]) -> Element {
    Element::parent("suggestions", items.iter().map(Message::to_element).collect())
}

fn suggestions_from(el: &Element) -> Result<Vec<Suggestion>, WireError> {
    list(el, "suggestions", Suggestion::from_element)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealBudgetsInfo {
    pub breakfast: i64,
    pub lunch: i64,
    pub dinner: i64,
}

impl From<MealBudgets> for MealBudgetsInfo {
    fn from(b: MealBudgets) -> Self {
        MealBudgetsInfo {
            breakfast: b.breakfast,
            lunch: b.lunch,
            dinner: b.dinner,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckEnergyResponse {
    pub required_kcal: i64,
    pub consumed_kcal: i64,
    pub candidate_kcal: i64,
    pub balance_kcal: i64,
    pub status: Status,
    pub excess_kcal: i64,
    pub suggestions: Vec<Suggestion>,
    pub standard_kcal: i64,
    pub meal: Meal,
    pub meal_budgets: MealBudgetsInfo,
}

impl From<&EnergyVerdict> for CheckEnergyResponse {
    fn from(v: &EnergyVerdict) -> Self {
        CheckEnergyResponse {
            required_kcal: v.required_kcal,
            consumed_kcal: v.consumed_before_kcal,
            candidate_kcal: v.candidate_kcal,
            balance_kcal: v.balance_kcal,
            status: v.status,
            excess_kcal: v.excess_kcal,
            suggestions: v.suggestions.iter().map(Suggestion::from).collect(),
            standard_kcal: v.standard_kcal,
            meal: v.meal,
            meal_budgets: v.meal_budgets.into(),
        }
    }
}

impl Message for CheckEnergyResponse {
    const ELEMENT: &'static str = "CheckEnergyResponse";

    fn fields(&self) -> Vec<Element> {
        vec![
            leaf("requiredKcal", self.required_kcal),
            leaf("consumedKcal", self.consumed_kcal),
            leaf("candidateKcal", self.candidate_kcal),
            leaf("balanceKcal", self.balance_kcal),
            leaf("status", self.status),
            leaf("excessKcal", self.excess_kcal),
            suggestions_element(&self.suggestions),
            leaf("standardKcal", self.standard_kcal),
            leaf("meal", self.meal),
            Element::parent(
                "mealBudgets",
                vec![
                    leaf("breakfast", self.meal_budgets.breakfast),
                    leaf("lunch", self.meal_budgets.lunch),
                    leaf("dinner", self.meal_budgets.dinner),
                ],
            ),
        ]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        let budgets = child(el, "mealBudgets")?;
        Ok(CheckEnergyResponse {
            required_kcal: parse(el, "requiredKcal")?,
            consumed_kcal: parse(el, "consumedKcal")?,
            candidate_kcal: parse(el, "candidateKcal")?,
            balance_kcal: parse(el, "balanceKcal")?,
            status: parse(el, "status")?,
            excess_kcal: parse(el, "excessKcal")?,
            suggestions: suggestions_from(el)?,
            standard_kcal: parse(el, "standardKcal")?,
            meal: parse(el, "meal")?,
            meal_budgets: MealBudgetsInfo {
                breakfast: parse(budgets, "breakfast")?,
                lunch: parse(budgets, "lunch")?,
                dinner: parse(budgets, "dinner")?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AddConsumptionResponse {
    pub entry_id: String,
    pub energy_kcal: i64,
    /// Set when the entry stands but a side effect (notification) failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl Message for AddConsumptionResponse {
    const ELEMENT: &'static str = "AddConsumptionResponse";

    fn fields(&self) -> Vec<Element> {
        let mut out = vec![leaf("entryId", &self.entry_id), leaf("energyKcal", self.energy_kcal)];
        if let Some(w) = &self.warning {
            out.push(leaf("warning", w));
        }
        out
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(AddConsumptionResponse {
            entry_id: text(el, "entryId")?,
            energy_kcal: parse(el, "energyKcal")?,
            warning: el.child("warning").map(|w| w.text.clone()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GetExercisesResponse {
    pub suggestions: Vec<Suggestion>,
}

impl Message for GetExercisesResponse {
    const ELEMENT: &'static str = "GetExercisesResponse";

    fn fields(&self) -> Vec<Element> {
        vec![suggestions_element(&self.suggestions)]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(GetExercisesResponse {
            suggestions: suggestions_from(el)?,
        })
    }
}

macro_rules! user_id_response {
    ($ty:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
        #[serde(rename_all = "camelCase")]
        pub struct $ty {
            pub user_id: String,
        }

        impl Message for $ty {
            const ELEMENT: &'static str = stringify!($ty);

            fn fields(&self) -> Vec<Element> {
                vec![leaf("userId", &self.user_id)]
            }

            fn from_fields(el: &Element) -> Result<Self, WireError> {
                Ok($ty {
                    user_id: text(el, "userId")?,
                })
            }
        }
    };
}

user_id_response!(CreateProfileResponse);
user_id_response!(UpdateProfileResponse);
user_id_response!(DeleteProfileResponse);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileInfo {
    pub user_id: String,
    pub name: String,
    pub gender: String,
    pub age: u32,
    pub height_cm: u32,
    pub weight_kg: f64,
    pub activity: String,
    pub email: String,
}

impl From<&UserProfile> for ProfileInfo {
    fn from(p: &UserProfile) -> Self {
        ProfileInfo {
            user_id: p.id.clone(),
            name: p.name.clone(),
            gender: p.gender.to_string(),
            age: p.age,
            height_cm: p.height_cm,
            weight_kg: p.weight_kg,
            activity: p.activity.to_string(),
            email: p.email.clone(),
        }
    }
}

impl Message for ProfileInfo {
    const ELEMENT: &'static str = "profile";

    fn fields(&self) -> Vec<Element> {
        vec![
            leaf("userId", &self.user_id),
            leaf("name", &self.name),
            leaf("gender", &self.gender),
            leaf("age", self.age),
            leaf("heightCm", self.height_cm),
            leaf("weightKg", self.weight_kg),
            leaf("activity", &self.activity),
            leaf("email", &self.email),
        ]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(ProfileInfo {
            user_id: text(el, "userId")?,
            name: text(el, "name")?,
            gender: text(el, "gender")?,
            age: parse(el, "age")?,
            height_cm: parse(el, "heightCm")?,
            weight_kg: parse(el, "weightKg")?,
            activity: text(el, "activity")?,
            email: text(el, "email")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GetProfilesResponse {
    pub profiles: Vec<ProfileInfo>,
}

impl Message for GetProfilesResponse {
    const ELEMENT: &'static str = "GetProfilesResponse";

    fn fields(&self) -> Vec<Element> {
        vec![Element::parent(
            "profiles",
            self.profiles.iter().map(Message::to_element).collect(),
        )]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(GetProfilesResponse {
            profiles: list(el, "profiles", ProfileInfo::from_element)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsertProductResponse {
    pub gtin: String,
    pub replaced: bool,
}

impl Message for UpsertProductResponse {
    const ELEMENT: &'static str = "UpsertProductResponse";

    fn fields(&self) -> Vec<Element> {
        vec![leaf("gtin", &self.gtin), leaf("replaced", self.replaced)]
    }

    fn from_fields(el: &Element) -> Result<Self, WireError> {
        Ok(UpsertProductResponse {
            gtin: text(el, "gtin")?,
            replaced: parse(el, "replaced")?,
        })
    }
}

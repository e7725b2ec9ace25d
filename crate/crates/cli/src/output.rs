//! Human-readable rendering of protocol responses.

use std::fmt::Write;

use healthwise_core::ledger::Status;
use healthwise_core::wire::messages::{
    CheckEnergyResponse, ProductInfo, ProfileInfo, Suggestion,
};
use healthwise_server::Response;

pub struct Style {
    pub color: bool,
}

impl Style {
    fn paint(&self, text: &str, ansi: &str) -> String {
        if self.color {
            format!("\x1b[{ansi}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn status(&self, status: Status) -> String {
        match status {
            Status::Green => self.paint("GREEN", "1;32"),
            Status::Red => self.paint("RED", "1;31"),
        }
    }
}

fn product(p: &ProductInfo) -> String {
    format!(
        "{}  {}\n  energy {} kcal/100 g, protein {} g, fat {} g, carbohydrate {} g\n",
        p.gtin, p.name, p.energy_per_100g, p.protein_per_100g, p.fat_per_100g, p.carb_per_100g
    )
}

fn exercises(out: &mut String, suggestions: &[Suggestion]) {
    for s in suggestions {
        let _ = writeln!(out, "  {:<10} {:>4} min", s.name, s.minutes);
    }
}

fn verdict(v: &CheckEnergyResponse, style: &Style) -> String {
    let mut out = format!(
        "{}  balance {} kcal (required {}, eaten {}, this item {})\n",
        style.status(v.status),
        v.balance_kcal,
        v.required_kcal,
        v.consumed_kcal,
        v.candidate_kcal
    );
    if v.status == Status::Red {
        let _ = writeln!(out, "{} kcal over; any one of these burns it off:", v.excess_kcal);
        exercises(&mut out, &v.suggestions);
    }
    out
}

fn profile(p: &ProfileInfo) -> String {
    format!(
        "{}  {}  {}, {} y, {} cm, {} kg, {} activity  <{}>\n",
        p.user_id, p.name, p.gender, p.age, p.height_cm, p.weight_kg, p.activity, p.email
    )
}

pub fn human(response: &Response, style: &Style) -> String {
    match response {
        Response::GetProduct(r) => product(&r.product),
        Response::CheckEnergy(v) => verdict(v, style),
        Response::AddConsumption(r) => format!("logged {}: {} kcal\n", r.entry_id, r.energy_kcal),
        Response::GetExercises(r) if r.suggestions.is_empty() => "nothing to burn off\n".into(),
        Response::GetExercises(r) => {
            let mut out = String::new();
            exercises(&mut out, &r.suggestions);
            out
        }
        Response::CreateProfile(r) => format!("created {}\n", r.user_id),
        Response::UpdateProfile(r) => format!("updated {}\n", r.user_id),
        Response::DeleteProfile(r) => format!("deleted {}\n", r.user_id),
        Response::GetProfiles(r) if r.profiles.is_empty() => "no profiles\n".into(),
        Response::GetProfiles(r) => r.profiles.iter().map(profile).collect(),
        Response::UpsertProduct(r) => {
            format!("{} {}\n", if r.replaced { "replaced" } else { "added" }, r.gtin)
        }
    }
}

//! Products loaded into a fresh catalog.

use healthwise_core::catalog::ProductRecord;

// gtin, name, kCal, protein, fat, carb per 100 g, serving note
const SEED: &[(&str, &str, f64, f64, f64, f64, &str)] = &[
    ("4006381333931", "Choco Wafer", 500.0, 6.5, 25.0, 62.0, "one bar is 25 g"),
    ("5000000000012", "Rolled Oats", 379.0, 13.2, 6.5, 67.7, ""),
    ("8901234567890", "Glucose Biscuits", 456.0, 7.0, 14.0, 76.0, "one biscuit is 7 g"),
    ("8901000000125", "Basmati Rice", 356.0, 8.1, 0.6, 78.0, "uncooked"),
    ("8901000000231", "Whole Wheat Atta", 341.0, 12.1, 1.7, 69.4, ""),
    ("8901000000347", "Toned Milk", 58.0, 3.1, 3.0, 4.7, "one glass is 200 g"),
    ("8901000000453", "Salted Potato Chips", 536.0, 7.0, 34.6, 52.9, ""),
    ("8901000000569", "Mango Drink", 62.0, 0.0, 0.0, 15.4, ""),
    ("8901000000675", "Roasted Peanuts", 585.0, 25.8, 49.7, 16.1, ""),
    ("8901000000781", "Plain Curd", 60.0, 3.1, 3.4, 4.0, ""),
    ("8901000000897", "Instant Noodles", 427.0, 8.7, 15.9, 61.9, "one cake is 70 g"),
    ("8901000000903", "Dark Chocolate", 546.0, 4.9, 31.0, 61.0, ""),
    ("55000963", "Chewing Gum", 250.0, 0.0, 0.0, 70.0, ""),
    ("042100005264", "Cola", 42.0, 0.0, 0.0, 10.6, "one can is 330 g"),
];

pub fn seed_products() -> Vec<ProductRecord> {
    SEED.iter()
        .map(|&(gtin, name, kcal, protein, fat, carb, note)| ProductRecord {
            gtin13: gtin.into(),
            name: name.into(),
            energy_kcal_per_100g: kcal,
            protein_g_per_100g: protein,
            fat_g_per_100g: fat,
            carb_g_per_100g: carb,
            serving_note: note.into(),
        })
        .collect()
}

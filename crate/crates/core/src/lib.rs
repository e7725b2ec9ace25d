pub mod barcode;
pub mod catalog;
pub mod energy;
pub mod exercise;
pub mod jsonl;
pub mod ledger;
pub mod wire;

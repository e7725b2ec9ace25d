//! EAN/UPC symbology family: article-number validation, UPC-E expansion,
//! module-level encoding and scanline decoding.
//!
//! Every accepted code is normalized to a 13-digit [`Gtin`] so downstream
//! stores share a single key space regardless of the symbology it was
//! scanned or typed in.

mod encode;
mod gtin;
mod pgm;
mod scan;
mod upce;

pub use encode::{encode, render_pgm, runs_from_bits};
pub use gtin::{compute_check_digit, validate_code, Gtin, Symbology};
pub use pgm::{decode_image, parse_pgm, GrayImage};
pub use scan::{
    binarize, decode_runs, decode_runs_with, threshold_samples, DecodeOptions, ModuleRuns,
    Scanline, CONTRAST_FLOOR, MIN_SCANLINE_WIDTH,
};
pub use upce::{compress_to_upce, expand_upce, is_canonical_upce};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BarcodeError {
    #[error("input contains a non-digit character")]
    NonDigitInput,
    #[error("unsupported code length {0}")]
    UnsupportedLength(usize),
    #[error("check digit mismatch: expected {expected}, found {found}")]
    InvalidCheckDigit { expected: u8, found: u8 },
    #[error("number system {0} is not valid for UPC-E")]
    InvalidNumberSystem(u8),
    #[error("no UPC-E form exists for {0}")]
    NotCompressible(String),
    #[error("symbology {0} cannot be encoded")]
    UnsupportedSymbology(Symbology),
    #[error("scanline contrast {0} is below the floor of {CONTRAST_FLOOR}")]
    FlatScanline(u8),
    #[error("scanline has {0} samples, at least {MIN_SCANLINE_WIDTH} required")]
    ScanlineTooShort(usize),
    #[error("run lengths must be positive and nonempty")]
    InvalidRuns,
    #[error("no start guard found")]
    NoGuardFound,
    #[error("digit {position} matches two patterns equally well")]
    AmbiguousDigit { position: usize },
    #[error("left-half parity pattern {0} is not an EAN parity pattern")]
    ParityPatternUnknown(String),
    #[error("malformed image: {0}")]
    MalformedImage(String),
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::upce::expand_upce;
use super::BarcodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbology {
    #[serde(rename = "EAN13")]
    Ean13,
    #[serde(rename = "EAN8")]
    Ean8,
    #[serde(rename = "UPCA")]
    UpcA,
    #[serde(rename = "UPCE")]
    UpcE,
}

impl fmt::Display for Symbology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbology::Ean13 => "EAN13",
            Symbology::Ean8 => "EAN8",
            Symbology::UpcA => "UPCA",
            Symbology::UpcE => "UPCE",
        })
    }
}

/// A validated article number in canonical 13-digit form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gtin {
    digits13: String,
    symbology: Symbology,
    original: String,
}

impl Gtin {
    /// Canonical key: 13 digits, left zero-padded.
    pub fn digits13(&self) -> &str {
        &self.digits13
    }

    pub fn symbology(&self) -> Symbology {
        self.symbology
    }

    /// The code as it was typed or scanned.
    pub fn original(&self) -> &str {
        &self.original
    }

    /// The 13 digits as numeric values.
    pub fn digit_values(&self) -> [u8; 13] {
        let mut out = [0u8; 13];
        for (slot, b) in out.iter_mut().zip(self.digits13.bytes()) {
            *slot = b - b'0';
        }
        out
    }

    /// Builds a UPC-E flavored Gtin from its 8-digit compressed form.
    pub fn from_upce(code8: &str) -> Result<Gtin, BarcodeError> {
        let upca = expand_upce(code8)?;
        Ok(Gtin {
            digits13: format!("0{upca}"),
            symbology: Symbology::UpcE,
            original: code8.to_string(),
        })
    }

    /// Reinterprets a 13-digit code starting with 0 as UPC-A.
    pub(crate) fn as_upca(&self) -> Option<Gtin> {
        self.digits13.strip_prefix('0').map(|rest| Gtin {
            digits13: self.digits13.clone(),
            symbology: Symbology::UpcA,
            original: rest.to_string(),
        })
    }

    pub(crate) fn from_valid_digits(digits: &[u8], symbology: Symbology) -> Gtin {
        let original: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        Gtin {
            digits13: format!("{original:0>13}"),
            symbology,
            original,
        }
    }
}

impl fmt::Display for Gtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits13)
    }
}

impl FromStr for Gtin {
    type Err = BarcodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        validate_code(s)
    }
}

pub(crate) fn parse_digits(text: &str) -> Result<Vec<u8>, BarcodeError> {
    text.bytes()
        .map(|b| {
            if b.is_ascii_digit() {
                Ok(b - b'0')
            } else {
                Err(BarcodeError::NonDigitInput)
            }
        })
        .collect()
}

pub(crate) fn check_digit_of(body: &[u8]) -> u8 {
    // Weights alternate 3,1,3,... starting from the rightmost body digit.
    let sum: u32 = body
        .iter()
        .rev()
        .enumerate()
        .map(|(i, &d)| u32::from(d) * if i % 2 == 0 { 3 } else { 1 })
        .sum();
    ((10 - sum % 10) % 10) as u8
}

/// Mod-10 check digit for a 7, 11 or 12 digit body.
pub fn compute_check_digit(body: &str) -> Result<u8, BarcodeError> {
    let digits = parse_digits(body)?;
    match digits.len() {
        7 | 11 | 12 => Ok(check_digit_of(&digits)),
        n => Err(BarcodeError::UnsupportedLength(n)),
    }
}

/// Validates a typed or scanned code and normalizes it to 13 digits.
///
/// Lengths 8, 12 and 13 are read as EAN-8, UPC-A and EAN-13. Surrounding
/// whitespace is ignored.
pub fn validate_code(text: &str) -> Result<Gtin, BarcodeError> {
    let trimmed = text.trim();
    let digits = parse_digits(trimmed)?;
    let symbology = match digits.len() {
        8 => Symbology::Ean8,
        12 => Symbology::UpcA,
        13 => Symbology::Ean13,
        n => return Err(BarcodeError::UnsupportedLength(n)),
    };
    let (body, found) = digits.split_at(digits.len() - 1);
    let expected = check_digit_of(body);
    if expected != found[0] {
        return Err(BarcodeError::InvalidCheckDigit {
            expected,
            found: found[0],
        });
    }
    Ok(Gtin {
        digits13: format!("{trimmed:0>13}"),
        symbology,
        original: trimmed.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: positions counted from the left of the full
    // 13-digit code, odd positions weight 1, even positions weight 3.
    fn oracle_ean13_valid(code: &str) -> bool {
        let sum: u32 = code
            .chars()
            .enumerate()
            .map(|(i, c)| c.to_digit(10).unwrap() * if i % 2 == 0 { 1 } else { 3 })
            .sum();
        sum.is_multiple_of(10)
    }

    #[test]
    fn known_check_digits() {
        assert!(oracle_ean13_valid("4006381333931"));
        assert_eq!(compute_check_digit("400638133393"), Ok(1));
        assert_eq!(compute_check_digit("000000000000"), Ok(0));
        assert_eq!(compute_check_digit("0000000"), Ok(0));
        assert_eq!(compute_check_digit("5500096"), Ok(3));
        assert_eq!(compute_check_digit("04210000526"), Ok(4));
    }

    #[test]
    fn check_digit_errors() {
        assert_eq!(compute_check_digit("40063813339x"), Err(BarcodeError::NonDigitInput));
        assert_eq!(compute_check_digit("123"), Err(BarcodeError::UnsupportedLength(3)));
        assert_eq!(compute_check_digit(""), Err(BarcodeError::UnsupportedLength(0)));
    }

    #[test]
    fn validate_examples() {
        let g = validate_code("4006381333931").unwrap();
        assert_eq!(g.digits13(), "4006381333931");
        assert_eq!(g.symbology(), Symbology::Ean13);

        assert_eq!(
            validate_code("4006381333932"),
            Err(BarcodeError::InvalidCheckDigit { expected: 1, found: 2 })
        );
        assert_eq!(validate_code("12345"), Err(BarcodeError::UnsupportedLength(5)));
        assert_eq!(validate_code("4006381-33931"), Err(BarcodeError::NonDigitInput));
    }

    #[test]
    fn short_forms_are_zero_padded() {
        let ean8 = validate_code("  55000963\n").unwrap();
        assert_eq!(ean8.digits13(), "0000055000963");
        assert_eq!(ean8.symbology(), Symbology::Ean8);
        assert_eq!(ean8.original(), "55000963");

        let upca = validate_code("042100005264").unwrap();
        assert_eq!(upca.digits13(), "0042100005264");
        assert_eq!(upca.symbology(), Symbology::UpcA);
    }

    #[test]
    fn upce_gtin_normalizes_through_expansion() {
        let g = Gtin::from_upce("04252614").unwrap();
        assert_eq!(g.digits13(), "0042100005264");
        assert_eq!(g.symbology(), Symbology::UpcE);
        assert_eq!(g.original(), "04252614");
    }
}

//! UPC-E zero-suppression.
//!
//! A UPC-E code is `s d1..d6 c`: number system, six data digits and the
//! check digit of the UPC-A code it expands to. The last data digit picks
//! where the suppressed zeros are reinserted.
//!
//! Several UPC-E codes can expand to the same UPC-A (e.g. `s d1 d2 0 d4 d5 3`
//! and `s d1 d2 0 d4 d5 0`). Compression always yields the canonical one,
//! see [`is_canonical_upce`].

use super::gtin::{check_digit_of, parse_digits};
use super::BarcodeError;

fn to_string(digits: &[u8]) -> String {
    digits.iter().map(|d| char::from(b'0' + d)).collect()
}

/// Expands an 8-digit UPC-E code into its 12-digit UPC-A form.
pub fn expand_upce(code8: &str) -> Result<String, BarcodeError> {
    let digits = parse_digits(code8)?;
    if digits.len() != 8 {
        return Err(BarcodeError::UnsupportedLength(digits.len()));
    }
    let system = digits[0];
    if system > 1 {
        return Err(BarcodeError::InvalidNumberSystem(system));
    }
    let d = &digits[1..7];
    let body: [u8; 11] = match d[5] {
        0..=2 => [system, d[0], d[1], d[5], 0, 0, 0, 0, d[2], d[3], d[4]],
        3 => [system, d[0], d[1], d[2], 0, 0, 0, 0, 0, d[3], d[4]],
        4 => [system, d[0], d[1], d[2], d[3], 0, 0, 0, 0, 0, d[4]],
        _ => [system, d[0], d[1], d[2], d[3], d[4], 0, 0, 0, 0, d[5]],
    };
    let expected = check_digit_of(&body);
    if expected != digits[7] {
        return Err(BarcodeError::InvalidCheckDigit {
            expected,
            found: digits[7],
        });
    }
    Ok(format!("{}{}", to_string(&body), expected))
}

/// Compresses a valid UPC-A code into UPC-E, when a zero-suppressed form exists.
pub fn compress_to_upce(code12: &str) -> Result<String, BarcodeError> {
    let m = parse_digits(code12)?;
    if m.len() != 12 {
        return Err(BarcodeError::UnsupportedLength(m.len()));
    }
    let expected = check_digit_of(&m[..11]);
    if expected != m[11] {
        return Err(BarcodeError::InvalidCheckDigit {
            expected,
            found: m[11],
        });
    }
    let not_compressible = || BarcodeError::NotCompressible(code12.to_string());
    if m[0] > 1 {
        return Err(not_compressible());
    }
    let zeros = |range: std::ops::Range<usize>| m[range].iter().all(|&d| d == 0);

    // Tried in the order that yields the canonical UPC-E form.
    let data: [u8; 6] = if m[3] <= 2 && zeros(4..8) {
        [m[1], m[2], m[8], m[9], m[10], m[3]]
    } else if zeros(4..9) {
        [m[1], m[2], m[3], m[9], m[10], 3]
    } else if zeros(5..10) {
        [m[1], m[2], m[3], m[4], m[10], 4]
    } else if zeros(6..10) && m[10] >= 5 {
        [m[1], m[2], m[3], m[4], m[5], m[10]]
    } else {
        return Err(not_compressible());
    };
    Ok(format!("{}{}{}", m[0], to_string(&data), m[11]))
}

/// True when `code8` is the form [`compress_to_upce`] produces for its
/// expansion. Invalid codes are not canonical.
pub fn is_canonical_upce(code8: &str) -> bool {
    expand_upce(code8)
        .and_then(|upca| compress_to_upce(&upca))
        .is_ok_and(|back| back == code8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::compute_check_digit;

    #[test]
    fn expansion_examples() {
        assert_eq!(expand_upce("04252614").unwrap(), "042100005264");
        assert_eq!(expand_upce("00000000").unwrap(), "000000000000");
        assert_eq!(
            expand_upce("24252614"),
            Err(BarcodeError::InvalidNumberSystem(2))
        );
        assert_eq!(
            expand_upce("04252615"),
            Err(BarcodeError::InvalidCheckDigit { expected: 4, found: 5 })
        );
        assert_eq!(expand_upce("0425261"), Err(BarcodeError::UnsupportedLength(7)));
        assert_eq!(expand_upce("0425261a"), Err(BarcodeError::NonDigitInput));
    }

    // Builds a UPC-E code whose check digit is taken from the hand-expanded
    // UPC-A body, then checks expansion reproduces that body.
    fn assert_rule(upce7: &str, expected_body: &str) {
        let c = compute_check_digit(expected_body).unwrap();
        assert_eq!(expand_upce(&format!("{upce7}{c}")).unwrap(), format!("{expected_body}{c}"));
    }

    #[test]
    fn one_expansion_per_rule() {
        assert_rule("0123450", "01200000345");
        assert_rule("0123452", "01220000345");
        assert_rule("0123453", "01230000045");
        assert_rule("0123454", "01234000005");
        assert_rule("0123457", "01234500007");
        assert_rule("1987659", "19876500009");
    }

    #[test]
    fn compression_examples() {
        assert_eq!(compress_to_upce("042100005264").unwrap(), "04252614");
        assert_eq!(compress_to_upce("000000000000").unwrap(), "00000000");
        assert_eq!(
            compress_to_upce("123456789012"),
            Err(BarcodeError::NotCompressible("123456789012".into()))
        );
        assert!(matches!(
            compress_to_upce("123456789013"),
            Err(BarcodeError::InvalidCheckDigit { .. })
        ));
    }

    #[test]
    fn non_canonical_forms_compress_to_their_twin() {
        // Rule 3 with d3 = 0 expands to the same UPC-A as rule 0.
        let c = compute_check_digit("01200000045").unwrap();
        let non_canonical = format!("0120453{c}");
        let canonical = format!("0120450{c}");
        assert_eq!(expand_upce(&non_canonical).unwrap(), expand_upce(&canonical).unwrap());
        assert!(!is_canonical_upce(&non_canonical));
        assert!(is_canonical_upce(&canonical));
        assert_eq!(
            compress_to_upce(&expand_upce(&non_canonical).unwrap()).unwrap(),
            canonical
        );
    }
}

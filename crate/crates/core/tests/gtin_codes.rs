use std::fs;

use healthwise_core::barcode::{
    compress_to_upce, compute_check_digit, expand_upce, is_canonical_upce, validate_code,
    BarcodeError, Symbology,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Left-to-right form of the mod-10 rule for a 12-digit body: odd positions
/// (1-based) weigh 1, even ones 3. Shorter bodies are left-padded with zeros.
fn oracle_check_digit(body: &[u8]) -> u8 {
    let mut padded = vec![0u8; 12 - body.len()];
    padded.extend_from_slice(body);
    let sum: u32 = padded
        .iter()
        .enumerate()
        .map(|(i, &d)| u32::from(d) * if i % 2 == 0 { 1 } else { 3 })
        .sum();
    ((10 - sum % 10) % 10) as u8
}

fn text(ds: &[u8]) -> String {
    ds.iter().map(|d| char::from(b'0' + d)).collect()
}

#[test]
fn exactly_one_final_digit_validates() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6716);
    for _ in 0..1000 {
        let body: Vec<u8> = (0..12).map(|_| rng.random_range(0..10)).collect();
        let body_text = text(&body);
        let expected = oracle_check_digit(&body);
        assert_eq!(compute_check_digit(&body_text).unwrap(), expected, "{body_text}");
        let passing: Vec<u8> = (0..10)
            .filter(|d| validate_code(&format!("{body_text}{d}")).is_ok())
            .collect();
        assert_eq!(passing, vec![expected], "{body_text}");
    }
}

#[test]
fn short_bodies_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for len in [7usize, 11] {
        for _ in 0..500 {
            let body: Vec<u8> = (0..len).map(|_| rng.random_range(0..10)).collect();
            assert_eq!(compute_check_digit(&text(&body)).unwrap(), oracle_check_digit(&body));
        }
    }
}

#[test]
fn validate_is_idempotent_on_digits13() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for len in [8usize, 12, 13] {
        for _ in 0..300 {
            let body: Vec<u8> = (0..len - 1).map(|_| rng.random_range(0..10)).collect();
            let code = format!("{}{}", text(&body), oracle_check_digit(&body));
            let gtin = validate_code(&code).unwrap();
            assert_eq!(gtin.digits13().len(), 13);
            let again = validate_code(gtin.digits13()).unwrap();
            assert_eq!(again.digits13(), gtin.digits13());
            assert_eq!(validate_code(again.digits13()).unwrap(), again);
        }
    }
}

#[test]
fn reference_codes() {
    assert_eq!(validate_code("4006381333931").unwrap().symbology(), Symbology::Ean13);
    assert_eq!(
        validate_code("4006381333932"),
        Err(BarcodeError::InvalidCheckDigit { expected: 1, found: 2 })
    );
    assert_eq!(validate_code("55000963").unwrap().digits13(), "0000055000963");
    assert_eq!(validate_code("042100005264").unwrap().symbology(), Symbology::UpcA);
}

fn status_of(code: &str) -> String {
    match validate_code(code) {
        Ok(g) => format!("ok:{}", g.symbology()),
        Err(BarcodeError::NonDigitInput) => "NonDigitInput".into(),
        Err(BarcodeError::UnsupportedLength(_)) => "UnsupportedLength".into(),
        Err(BarcodeError::InvalidCheckDigit { .. }) => "InvalidCheckDigit".into(),
        Err(other) => format!("unexpected:{other:?}"),
    }
}

#[test]
fn code_fixture_table() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/codes.tsv");
    let table = fs::read_to_string(path).unwrap();
    let mut rows = 0;
    for line in table.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let (code, expected) = line.split_once('\t').expect("two columns");
        assert_eq!(status_of(code), expected, "{code:?}");
        rows += 1;
    }
    assert!(rows >= 10);
}

/// Expansion written directly from the zero-suppression rules.
fn oracle_expand(upce: [u8; 8]) -> [u8; 12] {
    let [ns, d1, d2, d3, d4, d5, d6, check] = upce;
    let mid: [u8; 10] = match d6 {
        0..=2 => [d1, d2, d6, 0, 0, 0, 0, d3, d4, d5],
        3 => [d1, d2, d3, 0, 0, 0, 0, 0, d4, d5],
        4 => [d1, d2, d3, d4, 0, 0, 0, 0, 0, d5],
        _ => [d1, d2, d3, d4, d5, 0, 0, 0, 0, d6],
    };
    let mut out = [0u8; 12];
    out[0] = ns;
    out[1..11].copy_from_slice(&mid);
    out[11] = check;
    out
}

/// A UPC-E code with number system `ns`, six data digits from `data`, and the
/// check digit of its expansion.
fn upce_with_check(ns: u8, data: u32) -> [u8; 8] {
    let mut code = [0u8; 8];
    code[0] = ns;
    for i in 0..6 {
        code[6 - i] = (data / 10u32.pow(i as u32) % 10) as u8;
    }
    code[7] = oracle_check_digit(&oracle_expand(code)[..11]);
    code
}

/// The rules overlap: rule 3 with d3 = 0 and rule 4 with d4 = 0 spell the same
/// expansion as an earlier rule. Only the first spelling is canonical.
fn oracle_canonical(code: [u8; 8]) -> bool {
    match code[6] {
        3 => code[3] > 2,
        4 => code[4] != 0,
        5..=9 => code[5] != 0,
        _ => true,
    }
}

#[test]
fn upce_reference_pair() {
    assert_eq!(expand_upce("04252614").unwrap(), "042100005264");
    assert_eq!(compress_to_upce("042100005264").unwrap(), "04252614");
}

#[test]
fn upce_expansion_exhaustive_over_number_system_zero() {
    for data in 0..1_000_000u32 {
        let code = upce_with_check(0, data);
        let expected = text(&oracle_expand(code));
        assert_eq!(expand_upce(&text(&code)).unwrap(), expected);
    }
}

#[test]
fn upce_compress_expand_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e);
    let mut canonical = 0;
    for _ in 0..20_000 {
        let code = upce_with_check(rng.random_range(0..2), rng.random_range(0..1_000_000));
        let code_text = text(&code);
        let expanded = expand_upce(&code_text).unwrap();
        let back = compress_to_upce(&expanded).unwrap();
        assert_eq!(is_canonical_upce(&code_text), oracle_canonical(code), "{code_text}");
        if oracle_canonical(code) {
            assert_eq!(back, code_text);
            canonical += 1;
        } else {
            assert_ne!(back, code_text);
            assert!(is_canonical_upce(&back));
        }
        assert_eq!(expand_upce(&back).unwrap(), expanded);
    }
    assert!(canonical >= 10_000, "{canonical}");
}

#[test]
fn upce_rejections() {
    assert_eq!(expand_upce("24252614"), Err(BarcodeError::InvalidNumberSystem(2)));
    assert!(matches!(expand_upce("04252615"), Err(BarcodeError::InvalidCheckDigit { .. })));
    assert_eq!(expand_upce("0425261"), Err(BarcodeError::UnsupportedLength(7)));
    assert!(matches!(compress_to_upce("012345678905"), Err(BarcodeError::NotCompressible(_))));
}

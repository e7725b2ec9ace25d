use super::gtin::{Gtin, Symbology};
use super::pgm::GrayImage;
use super::scan::ModuleRuns;
use super::BarcodeError;

/// Left-half odd parity (L) codes, 7 modules each, most significant bit first.
pub(crate) const L_CODES: [u8; 10] = [
    0b0001101, 0b0011001, 0b0010011, 0b0111101, 0b0100011, 0b0110001, 0b0101111, 0b0111011,
    0b0110111, 0b0001011,
];

/// Parity of the six left-half digits of EAN-13, indexed by the leading digit.
/// `true` selects the even parity (G) code.
pub(crate) const FIRST_DIGIT_PARITY: [[bool; 6]; 10] = {
    const L: bool = false;
    const G: bool = true;
    [
        [L, L, L, L, L, L],
        [L, L, G, L, G, G],
        [L, L, G, G, L, G],
        [L, L, G, G, G, L],
        [L, G, L, L, G, G],
        [L, G, G, L, L, G],
        [L, G, G, G, L, L],
        [L, G, L, G, L, G],
        [L, G, L, G, G, L],
        [L, G, G, L, G, L],
    ]
};

/// R codes are the bitwise complement of L codes.
pub(crate) fn r_code(digit: u8) -> u8 {
    !L_CODES[digit as usize] & 0x7f
}

/// G codes are R codes read right to left.
pub(crate) fn g_code(digit: u8) -> u8 {
    r_code(digit).reverse_bits() >> 1
}

fn push_code(out: &mut Vec<bool>, code: u8) {
    out.extend((0..7).rev().map(|bit| code >> bit & 1 == 1));
}

const GUARD: [bool; 3] = [true, false, true];
const CENTER: [bool; 5] = [false, true, false, true, false];

/// Encodes a Gtin into bar (`true`) and space (`false`) modules.
///
/// EAN-13 yields 95 modules and EAN-8 yields 67. UPC-A codes are encoded as
/// EAN-13 with a leading zero. EAN-8 requires the canonical form to carry
/// five leading zeros.
pub fn encode(gtin: &Gtin, symbology: Symbology) -> Result<Vec<bool>, BarcodeError> {
    let digits = gtin.digit_values();
    match symbology {
        Symbology::Ean13 => {
            let parity = FIRST_DIGIT_PARITY[digits[0] as usize];
            let mut out = Vec::with_capacity(95);
            out.extend(GUARD);
            for (&d, &even) in digits[1..7].iter().zip(&parity) {
                push_code(&mut out, if even { g_code(d) } else { L_CODES[d as usize] });
            }
            out.extend(CENTER);
            for &d in &digits[7..] {
                push_code(&mut out, r_code(d));
            }
            out.extend(GUARD);
            Ok(out)
        }
        Symbology::Ean8 => {
            if digits[..5].iter().any(|&d| d != 0) {
                return Err(BarcodeError::UnsupportedSymbology(Symbology::Ean8));
            }
            let mut out = Vec::with_capacity(67);
            out.extend(GUARD);
            for &d in &digits[5..9] {
                push_code(&mut out, L_CODES[d as usize]);
            }
            out.extend(CENTER);
            for &d in &digits[9..] {
                push_code(&mut out, r_code(d));
            }
            out.extend(GUARD);
            Ok(out)
        }
        other => Err(BarcodeError::UnsupportedSymbology(other)),
    }
}

/// Collapses a module sequence into alternating run lengths.
pub fn runs_from_bits(bits: &[bool]) -> ModuleRuns {
    let mut runs: Vec<u32> = Vec::new();
    let mut prev = None;
    for &bit in bits {
        if prev == Some(bit) {
            *runs.last_mut().expect("run started") += 1;
        } else {
            runs.push(1);
            prev = Some(bit);
        }
    }
    ModuleRuns {
        runs,
        first_is_bar: bits.first().copied().unwrap_or(true),
    }
}

/// Renders modules as a binary PGM, `scale` pixels per module, with a blank
/// margin of `quiet_modules` on both sides.
pub fn render_pgm(bits: &[bool], scale: u32, height: u32, quiet_modules: u32) -> Vec<u8> {
    let margin = (quiet_modules * scale) as usize;
    let mut row = vec![255u8; margin];
    for &bit in bits {
        row.extend(std::iter::repeat_n(if bit { 0 } else { 255 }, scale as usize));
    }
    row.extend(std::iter::repeat_n(255, margin));
    GrayImage::from_row(row, height as usize).to_pgm()
}

//! Scanline binarization and run-length decoding of EAN-13 / EAN-8 symbols.
//!
//! Decoding works on run lengths only, so it is independent of the pixel
//! scale. Each digit occupies four runs; its widths are normalized to a
//! 7-module window and matched against the L/G/R tables by L1 distance.

use super::encode::{g_code, r_code, runs_from_bits, FIRST_DIGIT_PARITY, L_CODES};
use super::gtin::{check_digit_of, Gtin, Symbology};
use super::BarcodeError;

/// Samples in the narrowest scanline that can hold an EAN-13 symbol.
pub const MIN_SCANLINE_WIDTH: usize = 95;

/// Minimum `max - min` luminance for a scanline to be binarized.
pub const CONTRAST_FLOOR: u8 = 32;

const MIN_QUIET_MODULES: f64 = 7.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scanline {
    samples: Vec<u8>,
}

impl Scanline {
    pub fn new(samples: Vec<u8>) -> Result<Scanline, BarcodeError> {
        if samples.len() < MIN_SCANLINE_WIDTH {
            return Err(BarcodeError::ScanlineTooShort(samples.len()));
        }
        Ok(Scanline { samples })
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn width(&self) -> usize {
        self.samples.len()
    }
}

/// Midpoint threshold: samples darker than `(min + max) / 2` become bars.
pub fn threshold_samples(samples: &[u8]) -> Result<Vec<bool>, BarcodeError> {
    let (Some(&min), Some(&max)) = (samples.iter().min(), samples.iter().max()) else {
        return Err(BarcodeError::FlatScanline(0));
    };
    if max - min < CONTRAST_FLOOR {
        return Err(BarcodeError::FlatScanline(max - min));
    }
    let threshold = (f64::from(min) + f64::from(max)) / 2.0;
    Ok(samples.iter().map(|&s| f64::from(s) < threshold).collect())
}

pub fn binarize(scanline: &Scanline) -> Result<Vec<bool>, BarcodeError> {
    threshold_samples(&scanline.samples)
}

/// Alternating bar/space run lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRuns {
    pub runs: Vec<u32>,
    pub first_is_bar: bool,
}

impl ModuleRuns {
    pub fn new(runs: Vec<u32>, first_is_bar: bool) -> Result<ModuleRuns, BarcodeError> {
        if runs.is_empty() || runs.contains(&0) {
            return Err(BarcodeError::InvalidRuns);
        }
        Ok(ModuleRuns { runs, first_is_bar })
    }

    pub fn from_bits(bits: &[bool]) -> ModuleRuns {
        runs_from_bits(bits)
    }

    /// Every run multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> ModuleRuns {
        ModuleRuns {
            runs: self.runs.iter().map(|r| r * factor).collect(),
            first_is_bar: self.first_is_bar,
        }
    }

    /// Whether run `index` is a dark bar.
    pub fn is_bar(&self, index: usize) -> bool {
        index.is_multiple_of(2) == self.first_is_bar
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Report codes with a leading zero as UPC-A.
    pub prefer_upca: bool,
}

pub fn decode_runs(runs: &ModuleRuns) -> Result<Gtin, BarcodeError> {
    decode_runs_with(runs, DecodeOptions::default())
}

/// Locates a start guard and decodes the symbol that follows it.
///
/// Candidate guards are tried left to right. When none yields a symbol the
/// error from the deepest failed attempt is returned.
pub fn decode_runs_with(runs: &ModuleRuns, options: DecodeOptions) -> Result<Gtin, BarcodeError> {
    if runs.runs.is_empty() || runs.runs.contains(&0) {
        return Err(BarcodeError::InvalidRuns);
    }
    let r: Vec<f64> = runs.runs.iter().map(|&x| f64::from(x)).collect();
    let mut deepest = BarcodeError::NoGuardFound;

    for start in (0..r.len().saturating_sub(2)).filter(|&i| runs.is_bar(i)) {
        let Some(module) = guard_module(&r[start..start + 3]) else {
            continue;
        };
        if start > 0 && r[start - 1] < MIN_QUIET_MODULES * module {
            continue;
        }
        for layout in [Layout::EAN13, Layout::EAN8] {
            match layout.decode(&r, start, module) {
                Ok(digits) => {
                    let gtin = Gtin::from_valid_digits(&digits, layout.symbology);
                    if options.prefer_upca {
                        if let Some(upca) = gtin.as_upca() {
                            return Ok(upca);
                        }
                    }
                    return Ok(gtin);
                }
                Err(BarcodeError::NoGuardFound) => {}
                Err(e) => deepest = e,
            }
        }
    }
    Err(deepest)
}

/// Mean width of a guard if its runs are roughly equal, `None` otherwise.
fn guard_module(runs: &[f64]) -> Option<f64> {
    let mean = runs.iter().sum::<f64>() / runs.len() as f64;
    runs.iter()
        .all(|&w| (0.5..=1.5).contains(&(w / mean)))
        .then_some(mean)
}

fn guard_matches(runs: &[f64], module: f64) -> bool {
    guard_module(runs).is_some_and(|mean| (0.6..=1.67).contains(&(mean / module)))
}

struct Layout {
    symbology: Symbology,
    /// Digits per half.
    half: usize,
    modules: f64,
}

impl Layout {
    const EAN13: Layout = Layout {
        symbology: Symbology::Ean13,
        half: 6,
        modules: 95.0,
    };
    const EAN8: Layout = Layout {
        symbology: Symbology::Ean8,
        half: 4,
        modules: 67.0,
    };

    fn decode(&self, r: &[f64], start: usize, module: f64) -> Result<Vec<u8>, BarcodeError> {
        let left = start + 3;
        let center = left + 4 * self.half;
        let right = center + 5;
        let end = right + 4 * self.half;
        if end + 3 > r.len() {
            return Err(BarcodeError::NoGuardFound);
        }
        let guards = [&r[start..start + 3], &r[center..center + 5], &r[end..end + 3]];
        // Eleven guard modules average out more noise than the start guard alone.
        let estimate = guards.iter().flat_map(|g| g.iter()).sum::<f64>() / 11.0;
        if !(0.6..=1.67).contains(&(estimate / module))
            || !guards.iter().all(|g| guard_matches(g, estimate))
        {
            return Err(BarcodeError::NoGuardFound);
        }
        let module = estimate;
        if let Some(&trailing) = r.get(end + 3) {
            if trailing < MIN_QUIET_MODULES * module {
                return Err(BarcodeError::NoGuardFound);
            }
        }
        let width = r[start..end + 3].iter().sum::<f64>();
        if !(0.8..=1.2).contains(&(width / module / self.modules)) {
            return Err(BarcodeError::NoGuardFound);
        }
        // The whole symbol gives a steadier module width than any one digit.
        let unit = width / self.modules;

        let mut digits = Vec::with_capacity(2 * self.half + 1);
        let mut parity = Vec::with_capacity(self.half);
        for k in 0..self.half {
            let at = left + 4 * k;
            let (d, even) = classify(&r[at..at + 4], unit, Half::Left, k)?;
            digits.push(d);
            parity.push(even);
        }
        for k in 0..self.half {
            let at = right + 4 * k;
            let (d, _) = classify(&r[at..at + 4], unit, Half::Right, self.half + k)?;
            digits.push(d);
        }

        if self.half == 6 {
            let first = FIRST_DIGIT_PARITY
                .iter()
                .position(|p| p[..] == parity[..])
                .ok_or_else(|| BarcodeError::ParityPatternUnknown(parity_string(&parity)))?;
            digits.insert(0, first as u8);
        } else if parity.iter().any(|&even| even) {
            return Err(BarcodeError::ParityPatternUnknown(parity_string(&parity)));
        }

        let (body, check) = digits.split_at(digits.len() - 1);
        let expected = check_digit_of(body);
        if expected != check[0] {
            return Err(BarcodeError::InvalidCheckDigit {
                expected,
                found: check[0],
            });
        }
        Ok(digits)
    }
}

fn parity_string(parity: &[bool]) -> String {
    parity.iter().map(|&g| if g { 'G' } else { 'L' }).collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Half {
    Left,
    Right,
}

fn code_widths(code: u8) -> [f64; 4] {
    let bits: Vec<bool> = (0..7).rev().map(|b| code >> b & 1 == 1).collect();
    let runs = runs_from_bits(&bits).runs;
    [runs[0], runs[1], runs[2], runs[3]].map(f64::from)
}

/// Returns the digit and whether it matched the even parity (G) table.
fn classify(runs: &[f64], unit: f64, half: Half, position: usize) -> Result<(u8, bool), BarcodeError> {
    let norm: Vec<f64> = runs.iter().map(|w| w / unit).collect();

    let mut candidates: Vec<(u8, bool, [f64; 4])> = Vec::with_capacity(20);
    for d in 0..10u8 {
        match half {
            Half::Left => {
                candidates.push((d, false, code_widths(L_CODES[d as usize])));
                candidates.push((d, true, code_widths(g_code(d))));
            }
            Half::Right => candidates.push((d, false, code_widths(r_code(d)))),
        }
    }

    let mut best: Option<(f64, u8, bool)> = None;
    let mut tied = false;
    for (d, even, pattern) in candidates {
        let dist: f64 = norm.iter().zip(&pattern).map(|(a, b)| (a - b).abs()).sum();
        match best {
            Some((b, ..)) if (dist - b).abs() < 1e-9 => tied = true,
            Some((b, ..)) if dist > b => {}
            _ => {
                best = Some((dist, d, even));
                tied = false;
            }
        }
    }
    let (_, d, even) = best.expect("candidate tables are nonempty");
    if tied {
        return Err(BarcodeError::AmbiguousDigit { position });
    }
    Ok((d, even))
}

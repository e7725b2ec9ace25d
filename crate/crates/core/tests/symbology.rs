use std::time::{Duration, Instant};

use healthwise_core::barcode::{
    compute_check_digit, decode_image, decode_runs, encode, render_pgm, runs_from_bits,
    threshold_samples, validate_code, DecodeOptions, Gtin, ModuleRuns, Symbology,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const JITTER_MIN_SUCCESS: f64 = 0.95;
const QUIET: usize = 10;

fn random_ean13(rng: &mut impl Rng) -> Gtin {
    let body: String = (0..12).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect();
    let check = compute_check_digit(&body).unwrap();
    validate_code(&format!("{body}{check}")).unwrap()
}

fn random_ean8(rng: &mut impl Rng) -> Gtin {
    let body: String = (0..7).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect();
    let check = compute_check_digit(&body).unwrap();
    validate_code(&format!("{body}{check}")).unwrap()
}

#[test]
fn ean13_round_trip_at_scales_one_to_four() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let g = random_ean13(&mut rng);
        let runs = runs_from_bits(&encode(&g, Symbology::Ean13).unwrap());
        for scale in 1..=4 {
            let decoded = decode_runs(&runs.scaled(scale)).unwrap();
            assert_eq!(decoded.digits13(), g.digits13(), "scale {scale}");
        }
    }
    assert!(started.elapsed() < Duration::from_secs(10));
}

#[test]
fn ean8_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let g = random_ean8(&mut rng);
        let runs = runs_from_bits(&encode(&g, Symbology::Ean8).unwrap());
        for scale in 1..=4 {
            let decoded = decode_runs(&runs.scaled(scale)).unwrap();
            assert_eq!(decoded, g);
        }
    }
}

/// Pixel row at `scale` px/module with every run widened or narrowed by
/// -1, 0 or +1 px.
pub fn jittered_row(bits: &[bool], scale: u32, rng: &mut impl Rng) -> Vec<u8> {
    let runs = runs_from_bits(bits);
    let mut row = vec![255u8; QUIET * scale as usize];
    for (i, r) in runs.runs.iter().enumerate() {
        let width = (r * scale).saturating_add_signed(rng.random_range(-1..=1));
        let value = if runs.is_bar(i) { 0 } else { 255 };
        row.extend(std::iter::repeat_n(value, width as usize));
    }
    row.extend(std::iter::repeat_n(255, QUIET * scale as usize));
    row
}

#[test]
fn jitter_at_four_px_per_module() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca7);
    let trials = 200;
    let mut correct = 0;
    let mut wrong = 0;
    for _ in 0..trials {
        let g = random_ean13(&mut rng);
        let bits = encode(&g, Symbology::Ean13).unwrap();
        let row = jittered_row(&bits, 4, &mut rng);
        let decoded = threshold_samples(&row).map(|b| ModuleRuns::from_bits(&b)).and_then(|r| decode_runs(&r));
        match decoded {
            Ok(d) if d.digits13() == g.digits13() => correct += 1,
            Ok(_) => wrong += 1,
            Err(_) => {}
        }
    }
    let rate = f64::from(correct) / f64::from(trials);
    assert!(rate >= JITTER_MIN_SUCCESS, "success rate {rate}");
    assert_eq!(wrong, 0);
    assert!(started.elapsed() < Duration::from_secs(10));
}

#[test]
fn single_run_mutation_never_yields_another_code() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a7);
    let mut rejected = 0;
    for _ in 0..2000 {
        let g = random_ean13(&mut rng);
        let mut runs = runs_from_bits(&encode(&g, Symbology::Ean13).unwrap());
        let i = rng.random_range(0..runs.runs.len());
        let old = runs.runs[i];
        let new = loop {
            let v = rng.random_range(1..=4);
            if v != old {
                break v;
            }
        };
        runs.runs[i] = new;
        match decode_runs(&runs) {
            Ok(d) => assert_eq!(d.digits13(), g.digits13(), "run {i}: {old} -> {new}"),
            Err(_) => rejected += 1,
        }
    }
    assert!(rejected > 0);
}

#[test]
fn pgm_image_round_trip() {
    let g = validate_code("4006381333931").unwrap();
    let bits = encode(&g, Symbology::Ean13).unwrap();
    for scale in 1..=4 {
        let pgm = render_pgm(&bits, scale, 20, 10);
        assert_eq!(decode_image(&pgm, DecodeOptions::default()).unwrap(), g);
    }
}

#[test]
fn upca_preference() {
    let g = validate_code("042100005264").unwrap();
    let bits = encode(&g, Symbology::Ean13).unwrap();
    let pgm = render_pgm(&bits, 2, 10, 10);
    let plain = decode_image(&pgm, DecodeOptions::default()).unwrap();
    assert_eq!(plain.symbology(), Symbology::Ean13);
    let upca = decode_image(&pgm, DecodeOptions { prefer_upca: true }).unwrap();
    assert_eq!(upca.symbology(), Symbology::UpcA);
    assert_eq!(upca.digits13(), "0042100005264");
}


/// Harsher noise: every edge moves independently, so a run can change by 2 px.
/// Some codes fail to decode; none may decode to a different code.
#[test]
fn edge_jitter_never_misreads() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xed6e);
    for _ in 0..500 {
        let g = random_ean13(&mut rng);
        let runs = runs_from_bits(&encode(&g, Symbology::Ean13).unwrap());
        let mut edges: Vec<i64> = runs
            .runs
            .iter()
            .scan(0i64, |at, r| {
                *at += i64::from(*r) * 4;
                Some(*at)
            })
            .collect();
        let last = edges.len() - 1;
        for e in &mut edges[..last] {
            *e += rng.random_range(-1..=1);
        }
        let mut widths = vec![40u32];
        let mut prev = 0;
        for e in edges {
            widths.push((e - prev) as u32);
            prev = e;
        }
        widths.push(40);
        let noisy = ModuleRuns::new(widths, false).unwrap();
        if let Ok(d) = decode_runs(&noisy) {
            assert_eq!(d.digits13(), g.digits13());
        }
    }
}

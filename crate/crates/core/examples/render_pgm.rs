//! Renders a code as a binary PGM: `render_pgm <code> <px-per-module> <height> <out>`.

use healthwise_core::barcode::{encode, render_pgm, validate_code};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [code, scale, height, out] = args.as_slice() else {
        eprintln!("usage: render_pgm <code> <px-per-module> <height> <out.pgm>");
        std::process::exit(2);
    };
    let gtin = validate_code(code).unwrap_or_else(|e| panic!("{code}: {e}"));
    let bits = encode(&gtin, gtin.symbology()).expect("encodable");
    let pgm = render_pgm(&bits, scale.parse().expect("scale"), height.parse().expect("height"), 10);
    std::fs::write(out, pgm).expect("write image");
}

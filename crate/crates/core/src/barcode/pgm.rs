//! Binary PGM (P5) images, 8-bit grayscale only.

use super::gtin::Gtin;
use super::scan::{binarize, decode_runs_with, DecodeOptions, ModuleRuns, Scanline};
use super::BarcodeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    /// Stacks `height` copies of one row.
    pub fn from_row(row: Vec<u8>, height: usize) -> GrayImage {
        let width = row.len();
        let pixels = row.repeat(height);
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

fn malformed(msg: impl Into<String>) -> BarcodeError {
    BarcodeError::MalformedImage(msg.into())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, BarcodeError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed(format!("bad {what}")))
    }
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, BarcodeError> {
    if !bytes.starts_with(b"P5") {
        return Err(malformed("not a binary PGM (P5)"));
    }
    let mut header = Header { bytes, pos: 2 };
    if !header.bytes.get(2).is_some_and(u8::is_ascii_whitespace) {
        return Err(malformed("missing whitespace after magic"));
    }
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(malformed(format!("maxval {maxval}, only 255 is supported")));
    }
    if !bytes.get(header.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(malformed("missing whitespace after header"));
    }
    let data = &bytes[header.pos + 1..];
    let len = width
        .checked_mul(height)
        .ok_or_else(|| malformed("dimensions overflow"))?;
    if width == 0 || height == 0 || data.len() < len {
        return Err(malformed(format!(
            "{width}x{height} image needs {len} bytes, found {}",
            data.len()
        )));
    }
    Ok(GrayImage {
        width,
        height,
        pixels: data[..len].to_vec(),
    })
}

pub fn decode_image(bytes: &[u8], options: DecodeOptions) -> Result<Gtin, BarcodeError> {
    let image = parse_pgm(bytes)?;
    if image.width < super::MIN_SCANLINE_WIDTH {
        return Err(malformed(format!("width {} is too narrow", image.width)));
    }
    // Middle row first, then the quarter rows.
    let mut rows = vec![image.height / 2, image.height / 4, image.height * 3 / 4];
    rows.dedup();

    let mut last = BarcodeError::NoGuardFound;
    for y in rows {
        let attempt = Scanline::new(image.row(y).to_vec())
            .and_then(|line| binarize(&line))
            .and_then(|bits| decode_runs_with(&ModuleRuns::from_bits(&bits), options));
        match attempt {
            Ok(gtin) => return Ok(gtin),
            Err(e) => {
                log::debug!("row {y}: {e}");
                last = e;
            }
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::{encode, render_pgm, validate_code, Symbology};

    #[test]
    fn parses_header_with_comment() {
        let mut bytes = b"P5\n# made by hand\n3 2\n255\n".to_vec();
        bytes.extend([1, 2, 3, 4, 5, 6]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!((img.width, img.height), (3, 2));
        assert_eq!(img.row(1), &[4, 5, 6]);
        assert_eq!(parse_pgm(&img.to_pgm()).unwrap(), img);
    }

    #[test]
    fn rejects_malformed_images() {
        for bad in [
            &b"P2\n1 1\n255\n0"[..],
            b"P5\n1 1\n65535\n\0\0",
            b"P5\n2 2\n255\n\0",
            b"P5\nx 2\n255\n\0",
            b"P5",
            b"",
        ] {
            assert!(matches!(parse_pgm(bad), Err(BarcodeError::MalformedImage(_))), "{bad:?}");
        }
        assert!(matches!(
            decode_image(b"P5\n1 1\n255\n\0", DecodeOptions::default()),
            Err(BarcodeError::MalformedImage(_))
        ));
    }

    #[test]
    fn decodes_rendered_symbol() {
        let g = validate_code("4006381333931").unwrap();
        let pgm = render_pgm(&encode(&g, Symbology::Ean13).unwrap(), 3, 40, 10);
        assert_eq!(decode_image(&pgm, DecodeOptions::default()).unwrap(), g);
    }

    #[test]
    fn falls_back_to_quarter_rows() {
        let g = validate_code("4006381333931").unwrap();
        let pgm = render_pgm(&encode(&g, Symbology::Ean13).unwrap(), 2, 40, 10);
        let mut img = parse_pgm(&pgm).unwrap();
        let w = img.width;
        // smudge the middle row
        img.pixels[20 * w..21 * w].fill(128);
        img.pixels[20 * w] = 0;
        img.pixels[20 * w + 1] = 255;
        assert_eq!(decode_image(&img.to_pgm(), DecodeOptions::default()).unwrap(), g);
    }

    #[test]
    fn blank_image_reports_flat_scanline() {
        let img = GrayImage::from_row(vec![200; 120], 8);
        assert!(matches!(
            decode_image(&img.to_pgm(), DecodeOptions::default()),
            Err(BarcodeError::FlatScanline(0))
        ));
    }
}

//! Netpbm PGM (`P5` binary and `P2` plain) reading and writing.
//!
//! Header tokens are separated by any run of whitespace and `#` comments
//! may appear anywhere in the header. A binary raster starts after exactly
//! one whitespace byte following the maxval and must hold exactly
//! `width * height` bytes. Maxvals below 255 are rescaled to the 8-bit
//! range; larger ones are rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{Image, MAXVAL};

/// Raster encoding of a PGM file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PgmEncoding {
    /// Binary raster, magic `P5`.
    #[default]
    Binary,
    /// ASCII decimal raster, magic `P2`.
    Plain,
}

impl PgmEncoding {
    pub fn magic(self) -> &'static str {
        match self {
            PgmEncoding::Binary => "P5",
            PgmEncoding::Plain => "P2",
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token, or `None` at end of input.
    fn next_number(&mut self, what: &str) -> Result<Option<u32>> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(&b) => Err(Error::Format(format!(
                    "expected {what}, found byte {b:#04x}"
                ))),
            };
        }
        if let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_whitespace() && b != b'#' {
                return Err(Error::Format(format!(
                    "unexpected byte {b:#04x} after {what}"
                )));
            }
        }
        // Digits only, so parsing can fail only on overflow.
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(Some)
            .ok_or_else(|| Error::Format(format!("{what} out of range")))
    }

    fn header_number(&mut self, what: &str) -> Result<u32> {
        self.next_number(what)?
            .ok_or_else(|| Error::Format(format!("missing {what}")))
    }
}

fn rescale(sample: u32, maxval: u32) -> u8 {
    if maxval == u32::from(MAXVAL) {
        sample as u8
    } else {
        ((sample * u32::from(MAXVAL) + maxval / 2) / maxval) as u8
    }
}

/// Parses a `P5` or `P2` grayscale image.
pub fn read_pgm(bytes: &[u8]) -> Result<Image> {
    let encoding = match bytes.get(..2) {
        Some(b"P5") => PgmEncoding::Binary,
        Some(b"P2") => PgmEncoding::Plain,
        _ => return Err(Error::Format("magic number is not P5 or P2".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(Error::Format("magic number is not P5 or P2".into())),
    }

    let width = cur.header_number("width")? as usize;
    let height = cur.header_number("height")? as usize;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 {
        return Err(Error::Format("maxval must be positive".into()));
    }
    if maxval > u32::from(MAXVAL) {
        return Err(Error::Unsupported(format!(
            "maxval {maxval} exceeds 8-bit range"
        )));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;

    let pixels = match encoding {
        PgmEncoding::Binary => {
            // Exactly one whitespace byte separates maxval from the raster.
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                Some(_) => {
                    return Err(Error::Format("no whitespace after maxval".into()));
                }
                None => return Err(Error::Truncated { expected, found: 0 }),
            }
            let raster = &bytes[cur.pos..];
            if raster.len() < expected {
                return Err(Error::Truncated {
                    expected,
                    found: raster.len(),
                });
            }
            if raster.len() > expected {
                return Err(Error::Format(format!(
                    "{} bytes of trailing data after raster",
                    raster.len() - expected
                )));
            }
            if let Some(&bad) = raster.iter().find(|&&b| u32::from(b) > maxval) {
                return Err(Error::Format(format!(
                    "sample {bad} exceeds maxval {maxval}"
                )));
            }
            raster.iter().map(|&b| rescale(b.into(), maxval)).collect()
        }
        PgmEncoding::Plain => {
            let mut pixels = Vec::with_capacity(expected);
            while pixels.len() < expected {
                match cur.next_number("sample")? {
                    Some(v) if v <= maxval => pixels.push(rescale(v, maxval)),
                    Some(v) => {
                        return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
                    }
                    None => {
                        return Err(Error::Truncated {
                            expected,
                            found: pixels.len(),
                        });
                    }
                }
            }
            if cur.next_number("end of raster")?.is_some() {
                return Err(Error::Format("extra samples after raster".into()));
            }
            pixels
        }
    };
    Image::new(width, height, pixels)
}

/// Serializes `img` with maxval 255.
pub fn write_pgm(img: &Image, encoding: PgmEncoding) -> Vec<u8> {
    let header = format!(
        "{}\n{} {}\n{}\n",
        encoding.magic(),
        img.width(),
        img.height(),
        MAXVAL
    );
    match encoding {
        PgmEncoding::Binary => {
            let mut out = Vec::with_capacity(header.len() + img.pixels().len());
            out.extend_from_slice(header.as_bytes());
            out.extend_from_slice(img.pixels());
            out
        }
        PgmEncoding::Plain => {
            let mut text = header;
            // Netpbm recommends lines of at most 70 characters.
            for row in img.pixels().chunks(img.width()) {
                let mut line_len = 0;
                for (i, &p) in row.iter().enumerate() {
                    if i > 0 {
                        if line_len >= 66 {
                            text.push('\n');
                            line_len = 0;
                        } else {
                            text.push(' ');
                            line_len += 1;
                        }
                    }
                    let before = text.len();
                    let _ = write!(text, "{p}");
                    line_len += text.len() - before;
                }
                text.push('\n');
            }
            text.into_bytes()
        }
    }
}

pub fn read_pgm_file(path: impl AsRef<std::path::Path>) -> Result<Image> {
    read_pgm(&std::fs::read(path)?)
}

pub fn write_pgm_file(
    path: impl AsRef<std::path::Path>,
    img: &Image,
    encoding: PgmEncoding,
) -> Result<()> {
    std::fs::write(path, write_pgm(img, encoding))?;
    Ok(())
}

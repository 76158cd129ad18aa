//! Daubechies D4 analysis and synthesis on independent 4x4 blocks.
//!
//! A 4-sample signal is extended periodically, so one analysis pass is an
//! orthogonal 4x4 circulant-style operator: rows 0-1 of the output hold the
//! approximation `a[k] = sum_n h[n] x[(2k+n) mod 4]` and rows 2-3 the detail
//! `d[k] = sum_n g[n] x[(2k+n) mod 4]`. The 2-D block transform runs this
//! pass along every row and then down every column, which places the four
//! subbands in the quadrants of the coefficient block:
//!
//! ```text
//!   +----+----+
//!   | AF | HF |   AF: rows 0-1, cols 0-1    HF: rows 0-1, cols 2-3
//!   +----+----+
//!   | VF | DF |   VF: rows 2-3, cols 0-1    DF: rows 2-3, cols 2-3
//!   +----+----+
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;

/// Side length of a transform block.
pub const BLOCK: usize = 4;

/// A 4x4 block of real values, row-major.
pub type Block = [[f64; BLOCK]; BLOCK];

/// Low-pass and high-pass analysis filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterBank {
    pub h: [f64; 4],
    pub g: [f64; 4],
}

impl FilterBank {
    /// The four-tap Daubechies filter pair. The high-pass filter is the
    /// alternating flip of the low-pass one.
    pub fn daubechies4() -> Self {
        let s3 = 3f64.sqrt();
        let norm = 4.0 * 2f64.sqrt();
        let h = [
            (1.0 + s3) / norm,
            (3.0 + s3) / norm,
            (3.0 - s3) / norm,
            (1.0 - s3) / norm,
        ];
        let g = [h[3], -h[2], h[1], -h[0]];
        Self { h, g }
    }

    fn analyze(&self, x: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for k in 0..2 {
            for n in 0..4 {
                let sample = x[(2 * k + n) % 4];
                out[k] += self.h[n] * sample;
                out[k + 2] += self.g[n] * sample;
            }
        }
        out
    }

    fn synthesize(&self, y: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (m, slot) in out.iter_mut().enumerate() {
            for k in 0..2 {
                let tap = (m + 4 - 2 * k) % 4;
                *slot += self.h[tap] * y[k] + self.g[tap] * y[k + 2];
            }
        }
        out
    }
}

impl Default for FilterBank {
    fn default() -> Self {
        Self::daubechies4()
    }
}

/// One of the four 2x2 subbands of a transformed block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    /// Average / low frequency.
    Af,
    /// Horizontal / middle frequency.
    Hf,
    /// Vertical / middle frequency.
    Vf,
    /// Diagonal / high frequency.
    Df,
}

impl Band {
    pub const ALL: [Band; 4] = [Band::Af, Band::Hf, Band::Vf, Band::Df];

    /// Top-left `(row, col)` of the band's quadrant.
    pub fn origin(self) -> (usize, usize) {
        match self {
            Band::Af => (0, 0),
            Band::Hf => (0, 2),
            Band::Vf => (2, 0),
            Band::Df => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Band::Af => "AF",
            Band::Hf => "HF",
            Band::Vf => "VF",
            Band::Df => "DF",
        }
    }

    pub fn of_cell(row: usize, col: usize) -> Band {
        match (row < 2, col < 2) {
            (true, true) => Band::Af,
            (true, false) => Band::Hf,
            (false, true) => Band::Vf,
            (false, false) => Band::Df,
        }
    }
}

/// Transform coefficients of one 4x4 block.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoefficientMask {
    pub coeffs: Block,
}

impl CoefficientMask {
    pub fn new(coeffs: Block) -> Result<Self> {
        check_finite(&coeffs, "coefficient mask")?;
        Ok(Self { coeffs })
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.coeffs[row][col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.coeffs[row][col] = value;
    }

    pub fn quadrant(&self, band: Band) -> [[f64; 2]; 2] {
        let (r, c) = band.origin();
        [
            [self.coeffs[r][c], self.coeffs[r][c + 1]],
            [self.coeffs[r + 1][c], self.coeffs[r + 1][c + 1]],
        ]
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().flatten().sum()
    }

    pub fn band_sum(&self, band: Band) -> f64 {
        self.quadrant(band).iter().flatten().sum()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c * c).sum()
    }
}

fn check_finite(block: &Block, what: &'static str) -> Result<()> {
    if block.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(what))
    }
}

/// Forward transform of one block: rows first, then columns.
pub fn fdt_block(pixels: &Block, fb: &FilterBank) -> Result<CoefficientMask> {
    check_finite(pixels, "pixel block")?;
    Ok(CoefficientMask {
        coeffs: forward(pixels, fb),
    })
}

/// Inverse of [`fdt_block`]: columns first, then rows.
pub fn idt_block(mask: &CoefficientMask, fb: &FilterBank) -> Result<Block> {
    check_finite(&mask.coeffs, "coefficient mask")?;
    Ok(inverse(&mask.coeffs, fb))
}

pub(crate) fn forward(pixels: &Block, fb: &FilterBank) -> Block {
    let mut rows = [[0.0; 4]; 4];
    for (out, row) in rows.iter_mut().zip(pixels) {
        *out = fb.analyze(*row);
    }
    let mut out = [[0.0; 4]; 4];
    for col in 0..4 {
        let t = fb.analyze([rows[0][col], rows[1][col], rows[2][col], rows[3][col]]);
        for row in 0..4 {
            out[row][col] = t[row];
        }
    }
    out
}

pub(crate) fn inverse(coeffs: &Block, fb: &FilterBank) -> Block {
    let mut cols = [[0.0; 4]; 4];
    for col in 0..4 {
        let t = fb.synthesize([
            coeffs[0][col],
            coeffs[1][col],
            coeffs[2][col],
            coeffs[3][col],
        ]);
        for row in 0..4 {
            cols[row][col] = t[row];
        }
    }
    let mut out = [[0.0; 4]; 4];
    for (dst, row) in out.iter_mut().zip(&cols) {
        *dst = fb.synthesize(*row);
    }
    out
}

/// Rounds half away from zero and clamps to the 8-bit range.
#[inline]
pub fn quantize_pixel(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Transform coefficients of a whole image, one mask per 4x4 tile.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientImage {
    /// Dimensions of the source image before padding.
    pub width: usize,
    pub height: usize,
    /// Grid dimensions in masks.
    pub rows: usize,
    pub cols: usize,
    /// Row-major grid of masks.
    pub masks: Vec<CoefficientMask>,
}

impl CoefficientImage {
    #[inline]
    pub fn mask(&self, row: usize, col: usize) -> &CoefficientMask {
        &self.masks[row * self.cols + col]
    }

    #[inline]
    pub fn mask_mut(&mut self, row: usize, col: usize) -> &mut CoefficientMask {
        &mut self.masks[row * self.cols + col]
    }
}

/// Copies the tile at grid position `(row, col)` of an aligned image.
pub(crate) fn tile(img: &Image, row: usize, col: usize) -> Block {
    let mut block = [[0.0; 4]; 4];
    for (dy, out) in block.iter_mut().enumerate() {
        for (dx, v) in out.iter_mut().enumerate() {
            *v = f64::from(img.get(col * BLOCK + dx, row * BLOCK + dy));
        }
    }
    block
}

/// Transforms every 4x4 tile independently. Images whose dimensions are not
/// multiples of 4 are padded by edge replication first.
pub fn fdt_image(img: &Image, fb: &FilterBank) -> CoefficientImage {
    let padded = img.pad_to_multiple(BLOCK);
    let rows = padded.height() / BLOCK;
    let cols = padded.width() / BLOCK;
    let masks = (0..rows * cols)
        .into_par_iter()
        .map(|i| CoefficientMask {
            coeffs: forward(&tile(&padded, i / cols, i % cols), fb),
        })
        .collect();
    CoefficientImage {
        width: img.width(),
        height: img.height(),
        rows,
        cols,
        masks,
    }
}

/// Inverts every mask, rounds and clamps each pixel, and crops padding.
pub fn idt_image(ci: &CoefficientImage, fb: &FilterBank) -> Result<Image> {
    if ci.masks.len() != ci.rows * ci.cols {
        return Err(Error::Argument(format!(
            "{} masks for a {}x{} grid",
            ci.masks.len(),
            ci.rows,
            ci.cols
        )));
    }
    let blocks = ci
        .masks
        .par_iter()
        .map(|m| idt_block(m, fb))
        .collect::<Result<Vec<_>>>()?;
    let (pw, ph) = (ci.cols * BLOCK, ci.rows * BLOCK);
    let mut out = Image::filled(pw, ph, 0)?;
    for (i, block) in blocks.iter().enumerate() {
        let (row, col) = (i / ci.cols, i % ci.cols);
        for (dy, line) in block.iter().enumerate() {
            for (dx, &v) in line.iter().enumerate() {
                out.set(col * BLOCK + dx, row * BLOCK + dy, quantize_pixel(v));
            }
        }
    }
    out.crop(ci.width.min(pw), ci.height.min(ph))
}

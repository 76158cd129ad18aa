//! Per-mask secret bytes and where their bits go.
//!
//! Each mask carries one byte (`set1`, the average of all sixteen
//! coefficients) or two (`set1` plus `set2`, the average of the AF band).
//! The bits are split MSB-first into one group per band, in AF, HF, VF, DF
//! order, and each group is written into the magnitude of a single
//! coefficient of its band.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::wavelet::{Band, CoefficientMask};

/// Highest supported `max_lsb_positions`. Coefficient magnitudes of 8-bit
/// blocks stay below 2^11, so wider windows would only rewrite zero bits.
pub const MAX_LSB_LIMIT: u32 = 16;

/// Which secret bytes are embedded in each mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// One byte per mask, two bits per band (0.5 bits per cover byte).
    #[default]
    Set1Only,
    /// Two bytes per mask, four bits per band (1.0 bits per cover byte).
    Set1AndSet2,
}

impl Mode {
    pub fn bits_per_band(self) -> u32 {
        match self {
            Mode::Set1Only => 2,
            Mode::Set1AndSet2 => 4,
        }
    }

    pub fn bytes_per_mask(self) -> usize {
        match self {
            Mode::Set1Only => 1,
            Mode::Set1AndSet2 => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Set1Only => "set1",
            Mode::Set1AndSet2 => "set1set2",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set1" => Ok(Mode::Set1Only),
            "set1set2" => Ok(Mode::Set1AndSet2),
            other => Err(Error::Argument(format!(
                "unknown mode {other:?}, expected set1 or set1set2"
            ))),
        }
    }
}

/// The secret bytes of one mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SecretPayload {
    pub set1: u8,
    pub set2: Option<u8>,
}

impl SecretPayload {
    pub fn set1_only(set1: u8) -> Self {
        Self { set1, set2: None }
    }

    pub fn dual(set1: u8, set2: u8) -> Self {
        Self {
            set1,
            set2: Some(set2),
        }
    }

    /// Computes the payload a mask would carry in `mode`.
    pub fn from_mask(mask: &CoefficientMask, mode: Mode) -> Self {
        match mode {
            Mode::Set1Only => Self::set1_only(compute_set1(mask)),
            Mode::Set1AndSet2 => Self::dual(compute_set1(mask), compute_set2(mask)),
        }
    }

    pub fn mode(&self) -> Mode {
        match self.set2 {
            None => Mode::Set1Only,
            Some(_) => Mode::Set1AndSet2,
        }
    }

    /// Applies `f` to every present byte.
    pub fn map(self, mut f: impl FnMut(u8) -> u8) -> Self {
        Self {
            set1: f(self.set1),
            set2: self.set2.map(f),
        }
    }
}

/// Maps a real average onto a byte: round half away from zero, then reduce
/// modulo 256 (so negative values wrap).
pub fn byte_map(v: f64) -> u8 {
    if !v.is_finite() {
        return 0;
    }
    // Saturating cast; only the residue matters.
    (v.round() as i64).rem_euclid(256) as u8
}

/// Byte-mapped mean of all sixteen coefficients.
pub fn compute_set1(mask: &CoefficientMask) -> u8 {
    byte_map(mask.sum() / 16.0)
}

/// Byte-mapped mean of the AF band.
pub fn compute_set2(mask: &CoefficientMask) -> u8 {
    byte_map(mask.band_sum(Band::Af) / 4.0)
}

/// First embedding bit position (0 = least significant) for the
/// coefficient at `(cell_row, cell_col)` of a mask:
/// `((cell_col + 4 * cell_row) + bits_per_band) mod max_lsb_positions`.
pub fn hash_position(
    cell_row: u32,
    cell_col: u32,
    bits_per_band: u32,
    max_lsb_positions: u32,
) -> Result<u32> {
    if cell_row > 3 || cell_col > 3 {
        return Err(Error::Argument(format!(
            "cell ({cell_row}, {cell_col}) is outside a 4x4 mask"
        )));
    }
    if bits_per_band != 2 && bits_per_band != 4 {
        return Err(Error::Argument(format!(
            "bits per band must be 2 or 4, got {bits_per_band}"
        )));
    }
    if max_lsb_positions < bits_per_band || max_lsb_positions > MAX_LSB_LIMIT {
        return Err(Error::Argument(format!(
            "max LSB positions must be in [{bits_per_band}, {MAX_LSB_LIMIT}], got {max_lsb_positions}"
        )));
    }
    Ok((cell_col + cell_row * 4 + bits_per_band) % max_lsb_positions)
}

/// Bits of a payload split into one group per band.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BandGroups {
    groups: [Vec<bool>; 4],
}

fn band_index(band: Band) -> usize {
    match band {
        Band::Af => 0,
        Band::Hf => 1,
        Band::Vf => 2,
        Band::Df => 3,
    }
}

fn msb_first(byte: u8) -> impl Iterator<Item = bool> {
    (0..8).rev().map(move |i| (byte >> i) & 1 == 1)
}

fn pack(bits: impl Iterator<Item = bool>) -> u8 {
    bits.fold(0, |acc, b| (acc << 1) | u8::from(b))
}

impl BandGroups {
    pub fn new(groups: [Vec<bool>; 4]) -> Self {
        Self { groups }
    }

    pub fn get(&self, band: Band) -> &[bool] {
        &self.groups[band_index(band)]
    }

    pub fn set(&mut self, band: Band, bits: Vec<bool>) {
        self.groups[band_index(band)] = bits;
    }

    /// Inverse of [`distribute_bits`].
    pub fn reassemble(&self, mode: Mode) -> Result<SecretPayload> {
        let want = mode.bits_per_band() as usize;
        if let Some(bad) = self.groups.iter().find(|g| g.len() != want) {
            return Err(Error::Argument(format!(
                "band group of {} bits, expected {want}",
                bad.len()
            )));
        }
        let set1 = pack(self.groups.iter().flat_map(|g| g[..2].iter().copied()));
        Ok(match mode {
            Mode::Set1Only => SecretPayload::set1_only(set1),
            Mode::Set1AndSet2 => SecretPayload::dual(
                set1,
                pack(self.groups.iter().flat_map(|g| g[2..].iter().copied())),
            ),
        })
    }
}

/// Splits `set1` MSB-first into four 2-bit groups (AF, HF, VF, DF). In dual
/// mode each group is followed by the matching two bits of `set2`.
pub fn distribute_bits(payload: &SecretPayload) -> BandGroups {
    let set1: Vec<bool> = msb_first(payload.set1).collect();
    let set2: Option<Vec<bool>> = payload.set2.map(|s| msb_first(s).collect());
    let mut out = BandGroups::default();
    for (i, group) in out.groups.iter_mut().enumerate() {
        group.extend_from_slice(&set1[2 * i..2 * i + 2]);
        if let Some(set2) = &set2 {
            group.extend_from_slice(&set2[2 * i..2 * i + 2]);
        }
    }
    out
}

/// In-mask cell of the coefficient that carries each band's bits: the
/// third coefficient of the band in row-major order.
pub fn site_cell(band: Band) -> (u32, u32) {
    match band {
        Band::Af => (1, 0),
        Band::Hf => (1, 2),
        Band::Vf => (3, 0),
        Band::Df => (3, 2),
    }
}

/// Where one band's bit group is written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmbedSite {
    pub mask_row: usize,
    pub mask_col: usize,
    pub cell_row: u32,
    pub cell_col: u32,
    pub band: Band,
    /// Magnitude bit indices, in the order the group's bits are written.
    pub bit_positions: Vec<u32>,
}

/// The four embedding sites of a mask, in band order.
///
/// Each site's positions run consecutively from its hash position, wrapping
/// modulo `max_lsb_positions`.
pub fn sites_for_mask(
    mask_row: usize,
    mask_col: usize,
    mode: Mode,
    max_lsb_positions: u32,
) -> Result<[EmbedSite; 4]> {
    let bits = mode.bits_per_band();
    let site = |band: Band| -> Result<EmbedSite> {
        let (cell_row, cell_col) = site_cell(band);
        let start = hash_position(cell_row, cell_col, bits, max_lsb_positions)?;
        Ok(EmbedSite {
            mask_row,
            mask_col,
            cell_row,
            cell_col,
            band,
            bit_positions: (0..bits).map(|i| (start + i) % max_lsb_positions).collect(),
        })
    };
    Ok([
        site(Band::Af)?,
        site(Band::Hf)?,
        site(Band::Vf)?,
        site(Band::Df)?,
    ])
}

//! Embedding a mask's own signature into its coefficients, and checking it.
//!
//! For every 4x4 mask the embedder computes the secret bytes from the
//! mask's coefficients, XORs them with [`PAYLOAD_WHITENING`], spreads the
//! bits over the four band sites and rewrites those coefficients. After the
//! inverse transform the block is quantized to 8-bit pixels; if rounding
//! or clamping would disturb an embedded bit, [`settle`] nudges individual
//! pixels until the block authenticates again.
//!
//! The verifier repeats the forward transform, reads the bits back and
//! compares them against the secret recomputed from the candidate's own
//! coefficients, allowing a small wrapped byte distance because embedding
//! itself moves the averages slightly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::payload::{
    distribute_bits, sites_for_mask, BandGroups, Mode, SecretPayload, MAX_LSB_LIMIT,
};
use crate::wavelet::{self, tile, Band, Block, CoefficientMask, FilterBank, BLOCK};

/// XORed into every stored secret byte. Without it an all-black block
/// (zero coefficients, zero secret, zero embedded bits) would verify.
pub const PAYLOAD_WHITENING: u8 = 0x80;

/// Embedding and verification parameters. Both sides must agree on
/// `mode` and `max_lsb_positions`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedConfig {
    pub mode: Mode,
    /// Size of the low-order bit window the hash position wraps in.
    pub max_lsb_positions: u32,
    /// Largest accepted wrapped distance between an extracted and a
    /// recomputed secret byte.
    pub tolerance: u8,
    /// Minimum fraction of matching masks for an `Authentic` verdict.
    pub verdict_threshold: f64,
}

impl EmbedConfig {
    pub const DEFAULT_TOLERANCE: u8 = 4;
    pub const DEFAULT_THRESHOLD: f64 = 0.95;

    /// Defaults for `mode`. The bit window is as narrow as the mode allows,
    /// so every bit lands in the lowest magnitude bits of its coefficient.
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            max_lsb_positions: mode.bits_per_band(),
            tolerance: Self::DEFAULT_TOLERANCE,
            verdict_threshold: Self::DEFAULT_THRESHOLD,
        }
    }

    pub fn with_max_lsb_positions(mut self, positions: u32) -> Self {
        self.max_lsb_positions = positions;
        self
    }

    pub fn with_tolerance(mut self, tolerance: u8) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.verdict_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bits = self.mode.bits_per_band();
        if self.max_lsb_positions < bits || self.max_lsb_positions > MAX_LSB_LIMIT {
            return Err(Error::Argument(format!(
                "max LSB positions must be in [{bits}, {MAX_LSB_LIMIT}] for mode {}, got {}",
                self.mode, self.max_lsb_positions
            )));
        }
        if !(0.0..=1.0).contains(&self.verdict_threshold) {
            return Err(Error::Argument(format!(
                "verdict threshold must be in [0, 1], got {}",
                self.verdict_threshold
            )));
        }
        Ok(())
    }
}

impl Default for EmbedConfig {
    fn default() -> Self {
        Self::new(Mode::Set1Only)
    }
}

/// Rounds `c` half away from zero and overwrites the given bits of its
/// magnitude. The sign is kept; zero counts as positive.
///
/// # Panics
///
/// If `bits` and `positions` differ in length or a position is 63 or more.
pub fn embed_in_coefficient(c: f64, bits: &[bool], positions: &[u32]) -> f64 {
    assert_eq!(bits.len(), positions.len(), "one position per bit");
    let q = c.round();
    let mut magnitude = q.abs() as u64;
    for (&bit, &pos) in bits.iter().zip(positions) {
        assert!(pos < 63, "bit position {pos} out of range");
        magnitude = (magnitude & !(1 << pos)) | (u64::from(bit) << pos);
    }
    let m = magnitude as f64;
    if q < 0.0 {
        -m
    } else {
        m
    }
}

/// Reads the given bits of `|round(c)|`, in the order of `positions`.
pub fn extract_from_coefficient(c: f64, positions: &[u32]) -> Vec<bool> {
    let magnitude = c.round().abs() as u64;
    positions
        .iter()
        .map(|&p| (magnitude >> p) & 1 == 1)
        .collect()
}

/// `min(|a - b|, 256 - |a - b|)`.
pub fn wrapped_distance(a: u8, b: u8) -> u8 {
    let d = a.abs_diff(b);
    d.min(d.wrapping_neg())
}

/// One site's coefficient cell and the bits it must carry.
#[derive(Debug, Clone)]
struct SiteTarget {
    row: usize,
    col: usize,
    positions: Vec<u32>,
    bits: Vec<bool>,
}

/// What a single mask has to satisfy after quantization.
#[derive(Debug, Clone)]
struct MaskPlan {
    mode: Mode,
    tolerance: u8,
    secret: SecretPayload,
    sites: Vec<SiteTarget>,
}

impl MaskPlan {
    fn new(secret: SecretPayload, cfg: &EmbedConfig) -> Result<Self> {
        let groups = distribute_bits(&secret.map(|b| b ^ PAYLOAD_WHITENING));
        let sites = sites_for_mask(0, 0, cfg.mode, cfg.max_lsb_positions)?
            .into_iter()
            .map(|s| SiteTarget {
                row: s.cell_row as usize,
                col: s.cell_col as usize,
                bits: groups.get(s.band).to_vec(),
                positions: s.bit_positions,
            })
            .collect();
        Ok(Self {
            mode: cfg.mode,
            tolerance: cfg.tolerance,
            secret,
            sites,
        })
    }

    fn embed(&self, mask: &mut CoefficientMask) {
        for s in &self.sites {
            let c = mask.get(s.row, s.col);
            mask.set(s.row, s.col, embed_in_coefficient(c, &s.bits, &s.positions));
        }
    }

    fn set_distances(&self, mask: &CoefficientMask) -> (u8, u8) {
        let now = SecretPayload::from_mask(mask, self.mode);
        let d1 = wrapped_distance(self.secret.set1, now.set1);
        let d2 = match (self.secret.set2, now.set2) {
            (Some(a), Some(b)) => wrapped_distance(a, b),
            _ => 0,
        };
        (d1, d2)
    }

    /// True when the mask carries exactly the planned bits and its
    /// recomputed secret is within tolerance.
    fn satisfied(&self, mask: &CoefficientMask) -> bool {
        let bits_ok = self
            .sites
            .iter()
            .all(|s| extract_from_coefficient(mask.get(s.row, s.col), &s.positions) == s.bits);
        let (d1, d2) = self.set_distances(mask);
        bits_ok && d1 <= self.tolerance && d2 <= self.tolerance
    }

    /// Zero once every constraint holds with some margin.
    fn penalty(&self, mask: &CoefficientMask) -> f64 {
        const MARGIN: f64 = 0.4;
        let mut total = 0.0;
        for s in &self.sites {
            let v = mask.get(s.row, s.col);
            let d = if extract_from_coefficient(v, &s.positions) == s.bits {
                (v - v.round()).abs()
            } else {
                admissible_distance(v, &s.bits, &s.positions)
            };
            total += (d - MARGIN).max(0.0).powi(2);
        }
        // Real-valued so the search sees progress before the byte flips.
        // Rounding keeps the byte within tolerance while the average stays
        // closer than `tolerance + 0.5`.
        let slack = f64::from(self.tolerance) + 0.3;
        let mut set_term = |average: f64, byte: u8| {
            let d = (average - f64::from(byte) + 128.0).rem_euclid(256.0) - 128.0;
            total += (d.abs() - slack).max(0.0).powi(2);
        };
        set_term(mask.sum() / 16.0, self.secret.set1);
        if let Some(set2) = self.secret.set2 {
            set_term(mask.band_sum(Band::Af) / 4.0, set2);
        }
        total
    }
}

/// Distance from `v` to the nearest integer whose magnitude carries `bits`
/// at `positions`.
fn admissible_distance(v: f64, bits: &[bool], positions: &[u32]) -> f64 {
    let top = positions.iter().copied().max().unwrap_or(0);
    // The bit pattern repeats with this period in the magnitude.
    let window = (1i64 << (top + 1)).min(4096);
    let base = v.floor() as i64;
    let mut best = f64::INFINITY;
    for k in base - window..=base + window + 1 {
        let m = k.unsigned_abs();
        if bits
            .iter()
            .zip(positions)
            .all(|(&b, &p)| ((m >> p) & 1 == 1) == b)
        {
            best = best.min((v - k as f64).abs());
        }
    }
    best
}

/// How a block's quantization went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Settle {
    /// Plain rounding already satisfied the plan.
    Clean,
    /// Some pixels were moved off their rounded values.
    Adjusted,
    /// A nearby secret value was embedded instead of the block's own.
    Substituted,
    /// No nearby pixel block satisfied the plan.
    Unsettled,
}

const SETTLE_STEPS: usize = 256;
const PENALTY_WEIGHT: f64 = 1000.0;

/// Quantizes `target` into `pixels` so that the block satisfies `plan`,
/// staying as close to `target` as a greedy search manages.
///
/// `sources[i]` is the cell whose value cell `i` must copy; padding cells
/// point at the visible cell they replicate, every other cell at itself.
fn settle(
    plan: &MaskPlan,
    target: &Block,
    sources: &[usize; 16],
    fb: &FilterBank,
    pixels: &mut Block,
) -> Settle {
    let at = |b: &Block, i: usize| b[i / 4][i % 4];
    for i in 0..16 {
        pixels[i / 4][i % 4] = f64::from(wavelet::quantize_pixel(at(target, sources[i])));
    }
    let coeffs = |p: &Block| CoefficientMask {
        coeffs: wavelet::forward(p, fb),
    };
    if plan.satisfied(&coeffs(pixels)) {
        return Settle::Clean;
    }

    let free: Vec<usize> = (0..16).filter(|&i| sources[i] == i).collect();
    let cost = |p: &Block| -> f64 {
        let distortion: f64 = (0..16).map(|i| (at(p, i) - at(target, i)).powi(2)).sum();
        PENALTY_WEIGHT * plan.penalty(&coeffs(p)) + distortion
    };
    let assign = |p: &mut Block, var: usize, value: f64| {
        for i in 0..16 {
            if sources[i] == var {
                p[i / 4][i % 4] = value;
            }
        }
    };

    let mut current = cost(pixels);
    for _ in 0..SETTLE_STEPS {
        let mut best: Option<(f64, usize, f64)> = None;
        for &var in &free {
            let old = at(pixels, var);
            for step in [-2.0, -1.0, 1.0, 2.0] {
                let value = old + step;
                if !(0.0..=255.0).contains(&value) {
                    continue;
                }
                assign(pixels, var, value);
                let c = cost(pixels);
                if best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, var, value));
                }
            }
            assign(pixels, var, old);
        }
        match best {
            Some((c, var, value)) if c < current => {
                assign(pixels, var, value);
                current = c;
                if plan.satisfied(&coeffs(pixels)) {
                    return Settle::Adjusted;
                }
            }
            _ => break,
        }
    }
    Settle::Unsettled
}

/// Per-cell source indices for the tile at `(row, col)` of an image of the
/// given unpadded size.
fn padding_sources(row: usize, col: usize, width: usize, height: usize) -> [usize; 16] {
    let last_row = (height - 1 - row * BLOCK).min(BLOCK - 1);
    let last_col = (width - 1 - col * BLOCK).min(BLOCK - 1);
    std::array::from_fn(|i| (i / 4).min(last_row) * 4 + (i % 4).min(last_col))
}

/// Secrets tried, nearest first, when the block's own secret cannot be
/// settled. Any secret within tolerance of what the final pixels recompute
/// verifies, so a nearby value is an acceptable substitute.
fn fallback_secrets(secret: SecretPayload, radius: i32) -> Vec<SecretPayload> {
    let shift = |b: u8, d: i32| (i32::from(b) + d).rem_euclid(256) as u8;
    let mut out = Vec::new();
    match secret.set2 {
        None => {
            for d in 1..=radius {
                out.push(SecretPayload::set1_only(shift(secret.set1, d)));
                out.push(SecretPayload::set1_only(shift(secret.set1, -d)));
            }
        }
        Some(set2) => {
            let mut deltas: Vec<(i32, i32)> = (-radius..=radius)
                .flat_map(|a| (-radius..=radius).map(move |b| (a, b)))
                .filter(|&d| d != (0, 0))
                .collect();
            deltas.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a.abs(), a, b));
            for (a, b) in deltas {
                out.push(SecretPayload::dual(shift(secret.set1, a), shift(set2, b)));
            }
        }
    }
    out
}

const FALLBACK_RADIUS: i32 = 8;

/// Embeds one tile and quantizes it back to pixels.
fn embed_block(
    pixels: &Block,
    sources: &[usize; 16],
    cfg: &EmbedConfig,
    fb: &FilterBank,
) -> Result<(Block, Settle)> {
    let original = CoefficientMask {
        coeffs: wavelet::forward(pixels, fb),
    };
    let own = SecretPayload::from_mask(&original, cfg.mode);
    let attempt = |secret: SecretPayload| -> Result<(Block, Settle)> {
        let plan = MaskPlan::new(secret, cfg)?;
        let mut mask = original;
        plan.embed(&mut mask);
        let target = wavelet::inverse(&mask.coeffs, fb);
        let mut out = [[0.0; 4]; 4];
        let outcome = settle(&plan, &target, sources, fb, &mut out);
        Ok((out, outcome))
    };
    let first = attempt(own)?;
    if first.1 != Settle::Unsettled {
        return Ok(first);
    }
    for secret in fallback_secrets(own, FALLBACK_RADIUS) {
        let (out, outcome) = attempt(secret)?;
        if outcome != Settle::Unsettled {
            return Ok((out, Settle::Substituted));
        }
    }
    Ok(first)
}

/// Counters describing one embedding run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EmbedStats {
    pub masks: usize,
    /// Secret bytes written, one or two per mask.
    pub secret_bytes: usize,
    pub secret_bits: usize,
    /// Pixels of the (unpadded) cover image.
    pub cover_bytes: usize,
    /// Masks whose pixels had to be moved off plain rounding.
    pub adjusted_masks: usize,
    /// Masks that carry a secret a few units away from their own.
    pub substituted_masks: usize,
    /// Masks the quantization search could not satisfy.
    pub unsettled_masks: usize,
}

impl EmbedStats {
    /// Embedded secret bits per cover byte.
    pub fn bits_per_byte(&self) -> f64 {
        self.secret_bits as f64 / self.cover_bytes as f64
    }
}

#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub image: Image,
    pub stats: EmbedStats,
}

/// Embeds each mask's own secret and returns the stego image.
pub fn embed_image(cover: &Image, cfg: &EmbedConfig) -> Result<Image> {
    embed_image_with_stats(cover, cfg).map(|o| o.image)
}

pub fn embed_image_with_stats(cover: &Image, cfg: &EmbedConfig) -> Result<EmbedOutcome> {
    cfg.validate()?;
    let fb = FilterBank::daubechies4();
    let padded = cover.pad_to_multiple(BLOCK);
    let rows = padded.height() / BLOCK;
    let cols = padded.width() / BLOCK;

    let blocks = (0..rows * cols)
        .into_par_iter()
        .map(|i| {
            let (row, col) = (i / cols, i % cols);
            let sources = padding_sources(row, col, cover.width(), cover.height());
            embed_block(&tile(&padded, row, col), &sources, cfg, &fb)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = padded;
    let mut stats = EmbedStats {
        masks: blocks.len(),
        cover_bytes: cover.pixels().len(),
        ..EmbedStats::default()
    };
    for (i, (pixels, outcome)) in blocks.iter().enumerate() {
        let (row, col) = (i / cols, i % cols);
        for (dy, line) in pixels.iter().enumerate() {
            for (dx, &v) in line.iter().enumerate() {
                out.set(col * BLOCK + dx, row * BLOCK + dy, v as u8);
            }
        }
        match outcome {
            Settle::Clean => {}
            Settle::Adjusted => stats.adjusted_masks += 1,
            Settle::Substituted => stats.substituted_masks += 1,
            Settle::Unsettled => stats.unsettled_masks += 1,
        }
        stats.secret_bytes += cfg.mode.bytes_per_mask();
    }
    stats.secret_bits = stats.secret_bytes * 8;
    Ok(EmbedOutcome {
        image: out.crop(cover.width(), cover.height())?,
        stats,
    })
}

/// Authentication outcome of one mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskAuthResult {
    pub mask_row: usize,
    pub mask_col: usize,
    /// Secret read back from the embedded bits.
    pub extracted: SecretPayload,
    /// Secret recomputed from the candidate's coefficients.
    pub recomputed: SecretPayload,
    pub matched: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Authentic,
    Tampered,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Authentic => "Authentic",
            Verdict::Tampered => "Tampered",
        })
    }
}

/// Mask-resolution map of unmatched masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamperMap {
    pub rows: usize,
    pub cols: usize,
    flagged: Vec<bool>,
}

impl TamperMap {
    #[inline]
    pub fn is_flagged(&self, row: usize, col: usize) -> bool {
        self.flagged[row * self.cols + col]
    }

    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }

    /// One pixel per mask: 0 for matched, 255 for unmatched.
    pub fn to_image(&self) -> Image {
        let pixels = self
            .flagged
            .iter()
            .map(|&f| if f { 255 } else { 0 })
            .collect();
        Image::new(self.cols, self.rows, pixels).expect("grid is non-empty")
    }
}

#[derive(Debug, Clone)]
pub struct AuthReport {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, one entry per mask.
    pub results: Vec<MaskAuthResult>,
    pub match_fraction: f64,
    pub verdict: Verdict,
}

impl AuthReport {
    pub fn result(&self, row: usize, col: usize) -> &MaskAuthResult {
        &self.results[row * self.cols + col]
    }

    pub fn matched_count(&self) -> usize {
        self.results.iter().filter(|r| r.matched).count()
    }

    pub fn tamper_map(&self) -> TamperMap {
        TamperMap {
            rows: self.rows,
            cols: self.cols,
            flagged: self.results.iter().map(|r| !r.matched).collect(),
        }
    }
}

/// Reads back and checks one transformed mask.
pub fn authenticate_mask(
    mask: &CoefficientMask,
    mask_row: usize,
    mask_col: usize,
    cfg: &EmbedConfig,
) -> Result<MaskAuthResult> {
    let sites = sites_for_mask(mask_row, mask_col, cfg.mode, cfg.max_lsb_positions)?;
    let mut groups = BandGroups::default();
    for site in &sites {
        let c = mask.get(site.cell_row as usize, site.cell_col as usize);
        groups.set(site.band, extract_from_coefficient(c, &site.bit_positions));
    }
    let extracted = groups.reassemble(cfg.mode)?.map(|b| b ^ PAYLOAD_WHITENING);
    let recomputed = SecretPayload::from_mask(mask, cfg.mode);
    let close = |a: u8, b: u8| wrapped_distance(a, b) <= cfg.tolerance;
    let matched = close(extracted.set1, recomputed.set1)
        && match (extracted.set2, recomputed.set2) {
            (Some(a), Some(b)) => close(a, b),
            _ => true,
        };
    Ok(MaskAuthResult {
        mask_row,
        mask_col,
        extracted,
        recomputed,
        matched,
    })
}

/// Checks every mask of `candidate` against its own embedded signature.
pub fn authenticate_image(candidate: &Image, cfg: &EmbedConfig) -> Result<AuthReport> {
    cfg.validate()?;
    let ci = wavelet::fdt_image(candidate, &FilterBank::daubechies4());
    let results = ci
        .masks
        .par_iter()
        .enumerate()
        .map(|(i, mask)| authenticate_mask(mask, i / ci.cols, i % ci.cols, cfg))
        .collect::<Result<Vec<_>>>()?;
    let matched = results.iter().filter(|r| r.matched).count();
    let match_fraction = matched as f64 / results.len() as f64;
    let verdict = if match_fraction >= cfg.verdict_threshold {
        Verdict::Authentic
    } else {
        Verdict::Tampered
    };
    Ok(AuthReport {
        rows: ci.rows,
        cols: ci.cols,
        results,
        match_fraction,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embed_coefficient_examples() {
        assert_eq!(embed_in_coefficient(100.3, &[true], &[0]), 101.0);
        assert_eq!(embed_in_coefficient(-37.0, &[false, true], &[0, 1]), -38.0);
        assert_eq!(embed_in_coefficient(0.0, &[true], &[3]), 8.0);
        assert_eq!(embed_in_coefficient(-0.2, &[true], &[0]), 1.0);
    }

    #[test]
    fn extract_coefficient_examples() {
        assert_eq!(extract_from_coefficient(101.0, &[0]), vec![true]);
        assert_eq!(extract_from_coefficient(-38.2, &[0, 1]), vec![false, true]);
        assert_eq!(
            extract_from_coefficient(5.0, &[2, 0, 1]),
            vec![true, true, false]
        );
    }

    #[test]
    fn wrapped_distance_examples() {
        assert_eq!(wrapped_distance(3, 3), 0);
        assert_eq!(wrapped_distance(0, 255), 1);
        assert_eq!(wrapped_distance(255, 0), 1);
        assert_eq!(wrapped_distance(0, 128), 128);
        assert_eq!(wrapped_distance(10, 250), 16);
    }

    #[test]
    fn admissible_distance_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let v: f64 = rng.gen_range(-600.0..600.0);
            let positions = [rng.gen_range(0..3), 3];
            let bits = [rng.gen(), rng.gen()];
            let brute = (-2000i64..2000)
                .filter(|k| extract_from_coefficient(*k as f64, &positions) == bits)
                .map(|k| (v - k as f64).abs())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(admissible_distance(v, &bits, &positions), brute);
        }
    }

    #[test]
    fn config_validation() {
        assert!(EmbedConfig::new(Mode::Set1Only).validate().is_ok());
        assert_eq!(EmbedConfig::new(Mode::Set1AndSet2).max_lsb_positions, 4);
        assert!(EmbedConfig::new(Mode::Set1AndSet2)
            .with_max_lsb_positions(2)
            .validate()
            .is_err());
        assert!(EmbedConfig::default()
            .with_threshold(1.5)
            .validate()
            .is_err());
        assert!(EmbedConfig::default()
            .with_max_lsb_positions(MAX_LSB_LIMIT + 1)
            .validate()
            .is_err());
    }

    #[test]
    fn padding_sources_replicate_last_visible_cell() {
        let s = padding_sources(0, 0, 3, 2);
        assert_eq!(s[0], 0);
        assert_eq!(s[3], 2);
        assert_eq!(s[15], 6);
        assert_eq!(padding_sources(1, 1, 16, 16), std::array::from_fn(|i| i));
    }

    fn textured(width: usize, height: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(width, height, |x, y| {
            let base = 128.0 + 60.0 * ((x as f64) / 9.0).sin() * ((y as f64) / 13.0).cos();
            (base + rng.gen_range(-10.0..10.0))
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .unwrap()
    }

    #[test]
    fn round_trip_authenticates_in_both_modes() {
        let cover = textured(64, 48, 1);
        for mode in [Mode::Set1Only, Mode::Set1AndSet2] {
            let cfg = EmbedConfig::new(mode);
            let out = embed_image_with_stats(&cover, &cfg).unwrap();
            assert_eq!(out.stats.masks, 16 * 12);
            assert_eq!(out.stats.secret_bytes, 16 * 12 * mode.bytes_per_mask());
            assert_eq!(out.stats.unsettled_masks, 0);
            let report = authenticate_image(&out.image, &cfg).unwrap();
            assert_eq!(report.matched_count(), report.results.len());
            assert_eq!(report.verdict, Verdict::Authentic);
            // The embedded bits are exactly the whitened secret.
            for r in &report.results {
                assert!(wrapped_distance(r.extracted.set1, r.recomputed.set1) <= cfg.tolerance);
            }
        }
    }

    #[test]
    fn unaligned_and_saturated_images() {
        let cfg = EmbedConfig::default();
        for cover in [
            textured(14, 7, 2),
            textured(15, 10, 3),
            Image::filled(10, 6, 255).unwrap(),
            Image::filled(8, 8, 0).unwrap(),
            Image::filled(2, 3, 77).unwrap(),
        ] {
            let stego = embed_image(&cover, &cfg).unwrap();
            assert!(stego.same_dimensions(&cover));
            let report = authenticate_image(&stego, &cfg).unwrap();
            assert_eq!(report.verdict, Verdict::Authentic, "{cover:?}");
        }
    }

    #[test]
    fn single_column_edge_tiles_are_the_only_casualties() {
        let cfg = EmbedConfig::default();
        let cover = textured(13, 8, 6);
        let out = embed_image_with_stats(&cover, &cfg).unwrap();
        let report = authenticate_image(&out.image, &cfg).unwrap();
        for r in &report.results {
            if r.mask_col < 3 {
                assert!(r.matched, "{r:?}");
            }
        }
        assert_eq!(
            report.results.len() - report.matched_count(),
            out.stats.unsettled_masks
        );
    }

    #[test]
    fn embedding_is_deterministic() {
        let cover = textured(32, 32, 5);
        let cfg = EmbedConfig::new(Mode::Set1AndSet2);
        assert_eq!(
            embed_image(&cover, &cfg).unwrap(),
            embed_image(&cover, &cfg).unwrap()
        );
    }

    #[test]
    fn zeroed_tiles_are_flagged() {
        let cfg = EmbedConfig::default();
        let mut stego = embed_image(&textured(32, 32, 9), &cfg).unwrap();
        for y in 8..16 {
            for x in 8..16 {
                stego.set(x, y, 0);
            }
        }
        let report = authenticate_image(&stego, &cfg).unwrap();
        let map = report.tamper_map();
        for (r, c) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            assert!(map.is_flagged(r, c));
        }
        assert_eq!(map.flagged_count(), 4);
        assert_eq!(map.to_image().get(2, 3), 255);
        assert_eq!(map.to_image().get(0, 0), 0);
    }

    #[test]
    fn tampering_one_tile_only_affects_that_tile() {
        let cfg = EmbedConfig::default();
        let stego = embed_image(&textured(32, 32, 4), &cfg).unwrap();
        let before = authenticate_image(&stego, &cfg).unwrap();
        let mut edited = stego.clone();
        edited.set(21, 6, edited.get(21, 6).wrapping_add(40));
        let after = authenticate_image(&edited, &cfg).unwrap();
        for (i, (a, b)) in before.results.iter().zip(&after.results).enumerate() {
            if i != 8 + 5 {
                assert_eq!(a, b);
            }
        }
    }

    proptest! {
        #[test]
        fn extract_inverts_embed(c in -2000f64..2000.0, raw in proptest::collection::vec((any::<bool>(), 0u32..12), 1..5)) {
            let mut positions: Vec<u32> = Vec::new();
            let mut bits = Vec::new();
            for (b, p) in raw {
                if !positions.contains(&p) {
                    positions.push(p);
                    bits.push(b);
                }
            }
            let e = embed_in_coefficient(c, &bits, &positions);
            prop_assert_eq!(extract_from_coefficient(e, &positions), bits);
            let q = c.round();
            let diff = (e.abs() as u64) ^ (q.abs() as u64);
            let mask: u64 = positions.iter().map(|p| 1u64 << p).sum();
            prop_assert_eq!(diff & !mask, 0);
        }
    }
}

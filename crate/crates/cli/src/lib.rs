//! Command implementations behind the `sadt` binary.
//!
//! Every command returns an [`Outcome`], which maps onto the process exit
//! status: 0 for success or an authentic image, 1 for a tampered image and
//! 2 for any operational failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sadt::pgm::{read_pgm_file, write_pgm_file};
use sadt::{
    authenticate_image, embed_image_with_stats, EmbedConfig, Image, Mode, PgmEncoding,
    QualityMetrics, Verdict,
};

pub mod baselines;
pub mod report;

use report::{fmt_ratio, fmt_real, BenchRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: sadt::Error,
    },
    #[error(transparent)]
    Sadt(#[from] sadt::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

/// Result of a successful command run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Tampered,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Tampered => 1,
        }
    }
}

/// Exit status for operational failures.
pub const EXIT_ERROR: u8 = 2;

fn load(path: &Path) -> Result<Image, CliError> {
    read_pgm_file(path).map_err(|source| CliError::Image {
        path: path.to_path_buf(),
        source,
    })
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Flags shared by every command that embeds or verifies.
#[derive(Debug, Clone, Copy)]
pub struct CodecOptions {
    pub mode: Mode,
    /// `None` picks the narrowest window the mode allows.
    pub max_lsb: Option<u32>,
    pub tolerance: u8,
    pub threshold: f64,
}

impl CodecOptions {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            max_lsb: None,
            tolerance: EmbedConfig::DEFAULT_TOLERANCE,
            threshold: EmbedConfig::DEFAULT_THRESHOLD,
        }
    }

    pub fn config(&self) -> Result<EmbedConfig, CliError> {
        let mut cfg = EmbedConfig::new(self.mode)
            .with_tolerance(self.tolerance)
            .with_threshold(self.threshold);
        if let Some(n) = self.max_lsb {
            cfg = cfg.with_max_lsb_positions(n);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn measure(
    name: String,
    cover: &Image,
    stego: &Image,
    cfg: &EmbedConfig,
) -> Result<BenchRow, CliError> {
    let q = QualityMetrics::compute(cover, stego)?;
    let auth = authenticate_image(stego, cfg)?;
    Ok(BenchRow {
        image_name: name,
        mode: cfg.mode,
        mse: q.mse,
        psnr: q.psnr,
        image_fidelity: q.image_fidelity,
        match_fraction: auth.match_fraction,
    })
}

pub struct EmbedArgs<'a> {
    pub input: &'a Path,
    pub output: &'a Path,
    pub codec: CodecOptions,
    pub report: Option<&'a Path>,
    pub encoding: PgmEncoding,
}

pub fn cmd_embed(args: EmbedArgs<'_>, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let cfg = args.codec.config()?;
    let cover = load(args.input)?;
    let embedded = embed_image_with_stats(&cover, &cfg)?;
    let stats = embedded.stats;
    let row = measure(file_name(args.input), &cover, &embedded.image, &cfg)?;
    write_pgm_file(args.output, &embedded.image, args.encoding)?;
    if let Some(path) = args.report {
        report::write_rows(fs::File::create(path)?, std::slice::from_ref(&row))?;
    }
    writeln!(
        out,
        "{}: {}x{}, {} masks, {} secret bytes ({} bpB)",
        args.output.display(),
        cover.width(),
        cover.height(),
        stats.masks,
        stats.secret_bytes,
        fmt_real(stats.bits_per_byte()),
    )?;
    if stats.unsettled_masks > 0 {
        writeln!(
            out,
            "warning: {} masks could not hold their signature",
            stats.unsettled_masks
        )?;
    }
    writeln!(
        out,
        "mse={} psnr_db={} if={} match_fraction={}",
        fmt_real(row.mse),
        fmt_real(row.psnr),
        fmt_ratio(row.image_fidelity),
        fmt_ratio(row.match_fraction)
    )?;
    Ok(Outcome::Success)
}

pub struct VerifyArgs<'a> {
    pub stego: &'a Path,
    pub codec: CodecOptions,
    pub tamper_map: Option<&'a Path>,
}

pub fn cmd_verify(args: VerifyArgs<'_>, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let cfg = args.codec.config()?;
    let candidate = load(args.stego)?;
    let report = authenticate_image(&candidate, &cfg)?;
    if let Some(path) = args.tamper_map {
        write_pgm_file(path, &report.tamper_map().to_image(), PgmEncoding::Binary)?;
    }
    writeln!(
        out,
        "match_fraction={} matched={}/{} verdict={}",
        fmt_ratio(report.match_fraction),
        report.matched_count(),
        report.results.len(),
        report.verdict
    )?;
    Ok(match report.verdict {
        Verdict::Authentic => Outcome::Success,
        Verdict::Tampered => Outcome::Tampered,
    })
}

/// Prints `name,mse,psnr,if` for `b` measured against `a`.
pub fn cmd_metrics(a: &Path, b: &Path, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let (reference, other) = (load(a)?, load(b)?);
    let q = QualityMetrics::compute(&reference, &other)?;
    writeln!(
        out,
        "{},{},{},{}",
        file_name(b),
        fmt_real(q.mse),
        fmt_real(q.psnr),
        fmt_ratio(q.image_fidelity)
    )?;
    Ok(Outcome::Success)
}

/// `.pgm` files directly inside `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm") || e.eq_ignore_ascii_case("pnm"))
        })
        .collect();
    files.sort_by_key(|p| file_name(p));
    Ok(files)
}

/// Embeds, measures and verifies every image of a corpus.
pub fn bench_rows(dir: &Path, codec: CodecOptions) -> Result<Vec<BenchRow>, CliError> {
    let cfg = codec.config()?;
    let files = corpus_files(dir)?;
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "no PGM images in {}",
            dir.display()
        )));
    }
    files
        .par_iter()
        .map(|path| {
            let cover = load(path)?;
            let stego = embed_image_with_stats(&cover, &cfg)?.image;
            measure(file_name(path), &cover, &stego, &cfg)
        })
        .collect()
}

/// Writes the measured rows, their average, a blank line and the published
/// comparison table.
pub fn write_bench_report(rows: &[BenchRow], mut out: impl Write) -> Result<(), CliError> {
    let mut all = rows.to_vec();
    all.extend(BenchRow::average(rows));
    report::write_rows(&mut out, &all)?;
    writeln!(out)?;
    report::write_baselines(&mut out, &baselines::BASELINES)?;
    Ok(())
}

pub fn cmd_bench(
    dir: &Path,
    codec: CodecOptions,
    out_csv: Option<&Path>,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let rows = bench_rows(dir, codec)?;
    match out_csv {
        Some(path) => {
            write_bench_report(&rows, fs::File::create(path)?)?;
            let avg = BenchRow::average(&rows).expect("corpus is non-empty");
            writeln!(
                out,
                "{} images, mode {}: average mse={} psnr_db={} if={} match_fraction={}",
                rows.len(),
                codec.mode,
                fmt_real(avg.mse),
                fmt_real(avg.psnr),
                fmt_ratio(avg.image_fidelity),
                fmt_ratio(avg.match_fraction)
            )?;
        }
        None => write_bench_report(&rows, out)?,
    }
    Ok(Outcome::Success)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    /// Overwrite the region with black.
    ZeroRegion,
    /// Add seeded uniform noise in `[-8, 8]`, clamped.
    Noise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

pub const NOISE_AMPLITUDE: i16 = 8;

/// Applies a tampering attack in place.
pub fn attack(
    img: &mut Image,
    kind: AttackKind,
    region: Region,
    seed: u64,
) -> Result<(), CliError> {
    let fits = |start: usize, len: usize, limit: usize| {
        start.checked_add(len).is_some_and(|end| end <= limit)
    };
    if !fits(region.x, region.w, img.width()) || !fits(region.y, region.h, img.height()) {
        return Err(CliError::Usage(format!(
            "region {}x{} at ({}, {}) exceeds {}x{} image",
            region.w,
            region.h,
            region.x,
            region.y,
            img.width(),
            img.height()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for y in region.y..region.y + region.h {
        for x in region.x..region.x + region.w {
            let value = match kind {
                AttackKind::ZeroRegion => 0,
                AttackKind::Noise => {
                    let delta = rng.gen_range(-NOISE_AMPLITUDE..=NOISE_AMPLITUDE);
                    (i16::from(img.get(x, y)) + delta).clamp(0, 255) as u8
                }
            };
            img.set(x, y, value);
        }
    }
    Ok(())
}

pub fn cmd_attack(
    input: &Path,
    output: &Path,
    kind: AttackKind,
    region: Region,
    seed: u64,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let mut img = load(input)?;
    attack(&mut img, kind, region, seed)?;
    write_pgm_file(output, &img, PgmEncoding::Binary)?;
    writeln!(
        out,
        "{}: attacked {}x{} at ({}, {})",
        output.display(),
        region.w,
        region.h,
        region.x,
        region.y
    )?;
    Ok(Outcome::Success)
}

/// Writes `count` synthetic natural-like covers named `synthetic-NN.pgm`,
/// where NN is the seed the image was generated from.
pub fn cmd_fixtures(
    dir: &Path,
    count: usize,
    size: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    if count == 0 || size == 0 {
        return Err(CliError::Usage("count and size must be positive".into()));
    }
    fs::create_dir_all(dir)?;
    for i in 0..count {
        let s = seed + i as u64;
        let img = sadt::synth::natural_like(size, size, s);
        let path = dir.join(format!("synthetic-{s:02}.pgm"));
        write_pgm_file(&path, &img, PgmEncoding::Binary)?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(Outcome::Success)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sadt::{Mode, PgmEncoding};
use sadt_cli::{
    cmd_attack, cmd_bench, cmd_embed, cmd_fixtures, cmd_metrics, cmd_verify, AttackKind,
    CodecOptions, EmbedArgs, Region, VerifyArgs, EXIT_ERROR,
};

/// Self-authentication of grayscale PGM images with 4x4 Daubechies blocks.
///
/// Exit status: 0 on success (or an authentic image), 1 when `verify`
/// finds the image tampered, 2 on any error.
#[derive(Parser)]
#[command(name = "sadt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// One secret byte per mask (0.5 bpB).
    Set1,
    /// Two secret bytes per mask (1.0 bpB).
    Set1set2,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Set1 => Mode::Set1Only,
            ModeArg::Set1set2 => Mode::Set1AndSet2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    ZeroRegion,
    Noise,
}

#[derive(Args)]
struct CodecFlags {
    #[arg(long, value_enum, default_value = "set1")]
    mode: ModeArg,
    /// Width of the low-order bit window (default: bits per band of the mode).
    #[arg(long)]
    max_lsb: Option<u32>,
    /// Accepted wrapped distance between extracted and recomputed bytes.
    #[arg(long, default_value_t = 4)]
    tolerance: u8,
    /// Minimum fraction of matching masks for an authentic verdict.
    #[arg(long, default_value_t = 0.95)]
    threshold: f64,
}

impl CodecFlags {
    fn options(&self) -> CodecOptions {
        CodecOptions {
            mode: self.mode.into(),
            max_lsb: self.max_lsb,
            tolerance: self.tolerance,
            threshold: self.threshold,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Embed the image's own signature and write the stego image.
    Embed {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        codec: CodecFlags,
        /// Write a CSV row with MSE, PSNR and IF against the cover.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write an ASCII (P2) instead of a binary (P5) PGM.
        #[arg(long)]
        plain: bool,
    },
    /// Check an image against its embedded signature.
    Verify {
        stego: PathBuf,
        #[command(flatten)]
        codec: CodecFlags,
        /// Write a mask-resolution PGM: 0 = matched, 255 = unmatched.
        #[arg(long)]
        tamper_map: Option<PathBuf>,
    },
    /// Print `name,mse,psnr,if` for B measured against A.
    Metrics { a: PathBuf, b: PathBuf },
    /// Embed, measure and verify every PGM in a directory.
    Bench {
        corpus: PathBuf,
        #[command(flatten)]
        codec: CodecFlags,
        /// CSV destination (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tamper with a rectangle of an image.
    Attack {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write synthetic natural-like cover images.
    Fixtures {
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 512)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let out: &mut dyn std::io::Write = &mut stdout;
    let result = match &cli.command {
        Command::Embed {
            input,
            output,
            codec,
            report,
            plain,
        } => cmd_embed(
            EmbedArgs {
                input,
                output,
                codec: codec.options(),
                report: report.as_deref(),
                encoding: if *plain {
                    PgmEncoding::Plain
                } else {
                    PgmEncoding::Binary
                },
            },
            out,
        ),
        Command::Verify {
            stego,
            codec,
            tamper_map,
        } => cmd_verify(
            VerifyArgs {
                stego,
                codec: codec.options(),
                tamper_map: tamper_map.as_deref(),
            },
            out,
        ),
        Command::Metrics { a, b } => cmd_metrics(a, b, out),
        Command::Bench {
            corpus,
            codec,
            out: csv,
        } => cmd_bench(corpus, codec.options(), csv.as_deref(), out),
        Command::Attack {
            input,
            output,
            kind,
            x,
            y,
            w,
            h,
            seed,
        } => {
            let kind = match kind {
                KindArg::ZeroRegion => AttackKind::ZeroRegion,
                KindArg::Noise => AttackKind::Noise,
            };
            let region = Region {
                x: *x,
                y: *y,
                w: *w,
                h: *h,
            };
            cmd_attack(input, output, kind, region, *seed, out)
        }
        Command::Fixtures {
            dir,
            count,
            size,
            seed,
        } => cmd_fixtures(dir, *count, *size, *seed, out),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("sadt: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

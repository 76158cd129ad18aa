//! CSV rows produced by `embed --report` and `bench`.

use std::io::Write;

use sadt::Mode;

use crate::baselines::BaselineEntry;
use crate::CliError;

pub const BENCH_HEADER: [&str; 6] = ["image", "mode", "mse", "psnr_db", "if", "match_fraction"];
pub const BASELINE_HEADER: [&str; 5] = [
    "technique",
    "capacity_bytes",
    "cover_size",
    "bpb",
    "psnr_db",
];

/// Formats a real for reports: shortest round-trip digits, `inf` for the
/// identical-image PSNR.
pub fn fmt_real(v: f64) -> String {
    format!("{v}")
}

/// Like [`fmt_real`] but always with a decimal point, for ratios near 1.
pub fn fmt_ratio(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image_name: String,
    pub mode: Mode,
    pub mse: f64,
    pub psnr: f64,
    pub image_fidelity: f64,
    pub match_fraction: f64,
}

impl BenchRow {
    fn record(&self, name: &str) -> [String; 6] {
        [
            name.to_string(),
            self.mode.to_string(),
            fmt_real(self.mse),
            fmt_real(self.psnr),
            fmt_ratio(self.image_fidelity),
            fmt_ratio(self.match_fraction),
        ]
    }

    /// Column-wise arithmetic mean, named "Average".
    pub fn average(rows: &[BenchRow]) -> Option<BenchRow> {
        let first = rows.first()?;
        let n = rows.len() as f64;
        let mean = |f: fn(&BenchRow) -> f64| rows.iter().map(f).sum::<f64>() / n;
        Some(BenchRow {
            image_name: "Average".into(),
            mode: first.mode,
            mse: mean(|r| r.mse),
            psnr: mean(|r| r.psnr),
            image_fidelity: mean(|r| r.image_fidelity),
            match_fraction: mean(|r| r.match_fraction),
        })
    }
}

/// Writes a header plus one record per row.
pub fn write_rows<W: Write>(out: W, rows: &[BenchRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for row in rows {
        w.write_record(row.record(&row.image_name))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_baselines<W: Write>(out: W, entries: &[BaselineEntry]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BASELINE_HEADER)?;
    for e in entries {
        w.write_record([
            e.technique.to_string(),
            e.capacity_bytes.to_string(),
            format!("{}x{}", e.cover_width, e.cover_height),
            fmt_real(e.bpb),
            format!("{:.2}", e.psnr_db),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(name: &str, mse: f64, psnr: f64) -> BenchRow {
        BenchRow {
            image_name: name.into(),
            mode: Mode::Set1Only,
            mse,
            psnr,
            image_fidelity: 0.99,
            match_fraction: 1.0,
        }
    }

    #[test]
    fn average_is_columnwise_mean() {
        let avg = BenchRow::average(&[row("a", 1.0, 40.0), row("b", 2.0, 50.0)]).unwrap();
        assert_eq!(avg.image_name, "Average");
        assert_eq!(avg.mse, 1.5);
        assert_eq!(avg.psnr, 45.0);
        assert!(BenchRow::average(&[]).is_none());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_rows(&mut buf, &[row("x.pgm", 0.0, f64::INFINITY)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "image,mode,mse,psnr_db,if,match_fraction\nx.pgm,set1,0,inf,0.99,1.0\n"
        );
    }
}

//! Distortion between a cover image and a modified copy.

use crate::error::{Error, Result};
use crate::image::{Image, MAXVAL};

/// MSE, PSNR and image fidelity of one image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityMetrics {
    pub mse: f64,
    /// `f64::INFINITY` when the images are identical.
    pub psnr: f64,
    pub image_fidelity: f64,
}

impl QualityMetrics {
    /// Metrics of `distorted` against the `reference` (cover) image.
    pub fn compute(reference: &Image, distorted: &Image) -> Result<Self> {
        Ok(Self {
            mse: mse(reference, distorted)?,
            psnr: psnr(reference, distorted)?,
            image_fidelity: image_fidelity(reference, distorted)?,
        })
    }
}

fn check_dims(a: &Image, b: &Image) -> Result<()> {
    if a.same_dimensions(b) {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )))
    }
}

fn squared_error(a: &Image, b: &Image) -> f64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum()
}

pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    check_dims(a, b)?;
    Ok(squared_error(a, b) / a.pixels().len() as f64)
}

/// `10 log10(255^2 / mse)`; infinite for `mse == 0`.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        let peak = f64::from(MAXVAL);
        10.0 * (peak * peak / mse).log10()
    }
}

pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    mse(a, b).map(psnr_from_mse)
}

/// `1 - sum (a - b)^2 / sum a^2`, with `reference` as `a`.
pub fn image_fidelity(reference: &Image, distorted: &Image) -> Result<f64> {
    check_dims(reference, distorted)?;
    let energy: f64 = reference
        .pixels()
        .iter()
        .map(|&p| f64::from(p) * f64::from(p))
        .sum();
    if energy == 0.0 {
        return Err(Error::Undefined(
            "image fidelity against an all-zero reference",
        ));
    }
    Ok(1.0 - squared_error(reference, distorted) / energy)
}

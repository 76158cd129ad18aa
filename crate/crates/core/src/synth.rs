//! Deterministic synthetic test images.
//!
//! [`natural_like`] layers smooth multi-octave value noise, a few soft
//! shapes and fine grain into something with the mid-tone histogram and
//! mixed smooth/textured regions of a photograph. It stands in for a
//! natural-image corpus when none is available locally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::Image;

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

struct ValueNoise {
    cells: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(cells: usize, rng: &mut ChaCha8Rng) -> Self {
        let lattice = (0..(cells + 1) * (cells + 1))
            .map(|_| rng.gen::<f64>())
            .collect();
        Self { cells, lattice }
    }

    /// `u`, `v` in `[0, 1]`.
    fn sample(&self, u: f64, v: f64) -> f64 {
        let x = u * self.cells as f64;
        let y = v * self.cells as f64;
        let (x0, y0) = (
            (x.floor() as usize).min(self.cells - 1),
            (y.floor() as usize).min(self.cells - 1),
        );
        let (tx, ty) = (smoothstep(x - x0 as f64), smoothstep(y - y0 as f64));
        let at = |i: usize, j: usize| self.lattice[j * (self.cells + 1) + i];
        let top = at(x0, y0) * (1.0 - tx) + at(x0 + 1, y0) * tx;
        let bottom = at(x0, y0 + 1) * (1.0 - tx) + at(x0 + 1, y0 + 1) * tx;
        top * (1.0 - ty) + bottom * ty
    }
}

/// A photograph-like grayscale image, identical for identical arguments.
pub fn natural_like(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let octaves: Vec<(ValueNoise, f64)> = [(3, 1.0), (7, 0.55), (17, 0.3), (41, 0.16), (97, 0.09)]
        .into_iter()
        .map(|(cells, amp)| (ValueNoise::new(cells, &mut rng), amp))
        .collect();
    let shapes: Vec<(f64, f64, f64, f64)> = (0..rng.gen_range(4..10))
        .map(|_| {
            (
                rng.gen::<f64>(),
                rng.gen::<f64>(),
                rng.gen_range(0.04..0.25),
                rng.gen_range(-0.6..0.6),
            )
        })
        .collect();
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let (gx, gy) = (angle.cos(), angle.sin());
    let grain = rng.gen_range(1.0..4.0);

    let mut field = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let u = x as f64 / width.max(2) as f64;
            let v = y as f64 / height.max(2) as f64;
            let mut value: f64 = octaves.iter().map(|(n, a)| a * n.sample(u, v)).sum();
            value += 0.35 * (gx * u + gy * v);
            for &(cx, cy, r, level) in &shapes {
                let d = ((u - cx).powi(2) + (v - cy).powi(2)).sqrt();
                value += level * (1.0 - smoothstep(((d - r) / 0.01 + 0.5).clamp(0.0, 1.0)));
            }
            field.push(value);
        }
    }
    let (lo, hi) = field
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = (hi - lo).max(1e-9);
    let pixels = field
        .into_iter()
        .map(|v| {
            let level = 24.0 + 208.0 * (v - lo) / span + rng.gen_range(-grain..grain);
            level.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    Image::new(width, height, pixels).expect("dimensions match the generated raster")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_mid_toned() {
        let a = natural_like(64, 48, 11);
        assert_eq!(a, natural_like(64, 48, 11));
        assert_ne!(a, natural_like(64, 48, 12));
        let mean = a.pixels().iter().map(|&p| f64::from(p)).sum::<f64>() / a.pixels().len() as f64;
        assert!((40.0..215.0).contains(&mean));
    }
}

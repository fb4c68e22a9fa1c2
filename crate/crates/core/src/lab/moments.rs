//! Monte Carlo moments of a single forward step.
//!
//! From the origin, the forward step goes to the point of cone 0 with the
//! smallest `y`. With a Poisson process of intensity `λ`, the step vector
//! `L = (L_x, L_y)` scales like `1/√λ`; all estimates are normalized to
//! `λ = 1`.

use std::f64::consts::{FRAC_PI_3, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point, SQRT_3};
use crate::lab::derive_seed;

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimates {
    pub samples: usize,
    /// `E[L]`
    pub l: Estimate,
    pub lx: Estimate,
    pub ly: Estimate,
    /// `E[L²]`
    pub l2: Estimate,
    pub lx2: Estimate,
    pub ly2: Estimate,
    /// `E[L³]`
    pub l3: Estimate,
    /// `E[|L_x|³]`
    pub lx3: Estimate,
    pub ly3: Estimate,
}

/// Sector radius beyond which the chance of still having an empty cone
/// region is below `1e-12`.
pub fn truncation_radius(lambda: f64) -> f64 {
    (SQRT_3 * 27.7 / (lambda * 0.75)).sqrt()
}

const CHUNK: usize = 8192;

pub fn forward_moments(lambda: f64, samples: usize, seed: u64) -> Result<MomentEstimates> {
    if samples == 0 || !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::ContractViolation(format!(
            "forward_moments needs samples >= 1 and lambda > 0 (got {samples}, {lambda})"
        )));
    }
    let radius = truncation_radius(lambda);
    let count = Poisson::new(lambda * radius * radius * PI / 6.0).expect("positive mean");
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<[f64; 18]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0, c as u64));
            let m = CHUNK.min(samples - c * CHUNK);
            let mut acc = [0.0; 18];
            for _ in 0..m {
                let step = one_step(&mut rng, &count, radius) * lambda.sqrt();
                let l = step.norm();
                let vals = [
                    l,
                    step.x,
                    step.y,
                    l * l,
                    step.x * step.x,
                    step.y * step.y,
                    l * l * l,
                    step.x.abs().powi(3),
                    step.y.abs().powi(3),
                ];
                for (i, v) in vals.iter().enumerate() {
                    acc[2 * i] += v;
                    acc[2 * i + 1] += v * v;
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; 18];
    for s in &sums {
        for i in 0..18 {
            total[i] += s[i];
        }
    }
    let n = samples as f64;
    let est = |i: usize| {
        let mean = total[2 * i] / n;
        let var = if samples > 1 {
            ((total[2 * i + 1] - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate { mean, std_err: (var / n).sqrt() }
    };
    Ok(MomentEstimates {
        samples,
        l: est(0),
        lx: est(1),
        ly: est(2),
        l2: est(3),
        lx2: est(4),
        ly2: est(5),
        l3: est(6),
        lx3: est(7),
        ly3: est(8),
    })
}

/// One forward step from the origin into cone 0, redrawn in the
/// (negligible) event of an empty sector.
fn one_step(rng: &mut impl Rng, count: &Poisson<f64>, radius: f64) -> Point {
    loop {
        let n = count.sample(rng) as usize;
        let mut best: Option<Point> = None;
        for _ in 0..n {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = FRAC_PI_3 + FRAC_PI_3 * rng.random::<f64>();
            let p = Point::polar(theta) * r;
            if best.is_none_or(|b| p.y < b.y) {
                best = Some(p);
            }
        }
        if let Some(p) = best {
            return p;
        }
    }
}

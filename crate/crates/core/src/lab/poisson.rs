use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Axis-parallel rectangle of positive area.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Window {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self> {
        let w = Window { xmin, ymin, xmax, ymax };
        let finite = [xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite());
        if !finite || xmax <= xmin || ymax <= ymin {
            return Err(Error::ContractViolation(format!("window {w} has no area")));
        }
        Ok(w)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Closed containment.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    /// Bounding box of `points` grown by `margin` on every side.
    pub fn around(points: &[Point], margin: f64) -> Result<Self> {
        let xs = points.iter().map(|p| p.x);
        let ys = points.iter().map(|p| p.y);
        Window::new(
            xs.clone().fold(f64::INFINITY, f64::min) - margin,
            ys.clone().fold(f64::INFINITY, f64::min) - margin,
            xs.fold(f64::NEG_INFINITY, f64::max) + margin,
            ys.fold(f64::NEG_INFINITY, f64::max) + margin,
        )
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.xmin, self.ymin, self.xmax, self.ymax)
    }
}

/// Parses `xmin,ymin,xmax,ymax`.
impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::ContractViolation(format!("window {s:?}: {e}")))?;
        match v[..] {
            [a, b, c, d] => Window::new(a, b, c, d),
            _ => Err(Error::ContractViolation(format!(
                "window {s:?} needs four comma-separated numbers"
            ))),
        }
    }
}

/// Poisson point process of intensity `lambda` restricted to `window`.
pub fn sample_poisson(window: &Window, lambda: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_poisson_with(window, lambda, &mut rng)
}

pub(crate) fn sample_poisson_with(window: &Window, lambda: f64, rng: &mut impl Rng) -> Vec<Point> {
    let mean = lambda * window.area();
    if !(mean > 0.0) {
        return Vec::new();
    }
    let n = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    (0..n)
        .map(|_| {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            Point::new(window.xmin + u * window.width(), window.ymin + v * window.height())
        })
        .collect()
}

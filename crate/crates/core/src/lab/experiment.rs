//! Monte Carlo estimates of the expected routing ratio between two points
//! at unit distance in a Poisson process.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonical_triangle, ConeIndex, Point};
use crate::graph::{build_theta_graph, Parity, ThetaGraph};
use crate::lab::{derive_seed, predicted_ratio, sample_poisson, Window};
use crate::routing::{route, Algorithm, RouteTrace, Status};

fn default_phi_list() -> Vec<f64> {
    (0..13).map(|i| FRAC_PI_3 + (FRAC_PI_2 - FRAC_PI_3) * i as f64 / 12.0).collect()
}

fn default_margin() -> f64 {
    1.5
}

fn default_max_steps() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub lambda: f64,
    #[serde(default = "default_phi_list")]
    pub phi_list: Vec<f64>,
    pub algorithm: Algorithm,
    pub trials: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl ExperimentConfig {
    /// Configuration with the default angle grid, margin and step limit.
    pub fn new(algorithm: Algorithm, lambda: f64, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            lambda,
            phi_list: default_phi_list(),
            algorithm,
            trials,
            margin: default_margin(),
            master_seed,
            max_steps: default_max_steps(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ContractViolation(m));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return bad(format!("margin must be positive, got {}", self.margin));
        }
        if self.phi_list.is_empty() {
            return bad("empty phi list".into());
        }
        if let Some(phi) = self
            .phi_list
            .iter()
            .find(|p| !(FRAC_PI_3 - 1e-12..=FRAC_PI_2 + 1e-12).contains(*p))
        {
            return bad(format!("phi = {phi} outside [π/3, π/2]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidReason {
    /// The route depends on a region the window cuts off.
    Boundary,
    /// The route failed for another reason.
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TrialOutcome {
    Valid(f64),
    Invalid(InvalidReason),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiRecord {
    pub phi: f64,
    pub lambda: f64,
    pub trials: usize,
    pub valid_trials: usize,
    pub mean_ratio: Option<f64>,
    pub std_err: Option<f64>,
    pub predicted: Option<f64>,
    pub invalid_boundary: usize,
    pub invalid_other: usize,
}

impl PhiRecord {
    /// More than 1% of the trials were discarded.
    pub fn unreliable(&self) -> bool {
        (self.trials - self.valid_trials) as f64 > 0.01 * self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioStats {
    pub algorithm: Algorithm,
    pub records: Vec<PhiRecord>,
}

/// Source and target at unit distance and angle `phi`, in vertex order
/// `(s, t)`.
pub fn placement(algorithm: Algorithm, phi: f64) -> (Point, Point) {
    let far = Point::polar(phi);
    if algorithm.is_negative() {
        (far, Point::ORIGIN)
    } else {
        (Point::ORIGIN, far)
    }
}

fn graph_kind(algorithm: Algorithm) -> Parity {
    match algorithm {
        Algorithm::ThetaK | Algorithm::Theta6Auto => Parity::All,
        _ => Parity::Even,
    }
}

/// Runs one trial: Poisson points in the padded window plus `s` (index 0)
/// and `t` (index 1).
pub fn run_trial(config: &ExperimentConfig, phi_index: usize, trial: usize) -> TrialOutcome {
    let phi = config.phi_list[phi_index];
    let (s, t) = placement(config.algorithm, phi);
    let Ok(window) = Window::around(&[s, t], config.margin) else {
        return TrialOutcome::Invalid(InvalidReason::Other);
    };
    let seed = derive_seed(config.master_seed, phi_index as u64, trial as u64);
    let mut points = vec![s, t];
    points.extend(sample_poisson(&window, config.lambda, seed));
    let Ok(g) = build_theta_graph(&points, 6, graph_kind(config.algorithm)) else {
        return TrialOutcome::Invalid(InvalidReason::Other);
    };
    let trace = match route(config.algorithm, &g, 0, 1, config.max_steps) {
        Ok(tr) => tr,
        Err(_) => return TrialOutcome::Invalid(InvalidReason::Other),
    };
    match trace.status {
        Status::Arrived => {}
        Status::LeftWindow => return TrialOutcome::Invalid(InvalidReason::Boundary),
        _ => return TrialOutcome::Invalid(InvalidReason::Other),
    }
    let routed = match trace.parity {
        Parity::All => &g,
        p => g.half(p).unwrap_or(&g),
    };
    if !route_inside(routed, &trace, &window) {
        return TrialOutcome::Invalid(InvalidReason::Boundary);
    }
    TrialOutcome::Valid(trace.ratio)
}

/// Whether every cone successor the route could have looked at (those of
/// its vertices and of their neighbors) is certified by a canonical
/// triangle lying inside the window. A cone whose triangle leaves the
/// window might hold a nearer point of the unbounded process.
pub fn route_inside(g: &ThetaGraph, trace: &RouteTrace, window: &Window) -> bool {
    let cones: Vec<ConeIndex> =
        (0..g.k()).map(ConeIndex).filter(|&c| g.parity().keeps(c)).collect();
    let mut checked = std::collections::HashSet::new();
    let mut check = |v: usize| -> bool {
        if !checked.insert(v) {
            return true;
        }
        cones.iter().all(|&c| match g.successor(v, c) {
            None => false,
            Some(q) => canonical_triangle(g.point(v), g.point(q), g.k())
                .map(|tri| tri.corners().iter().all(|&p| window.contains(p)))
                .unwrap_or(false),
        })
    };
    for &v in &trace.vertices {
        if !check(v) {
            return false;
        }
        for &w in g.neighbors(v) {
            if !check(w as usize) {
                return false;
            }
        }
    }
    true
}

/// Runs all trials (in parallel) and aggregates them per angle. The result
/// does not depend on the number of threads.
pub fn ratio_experiment(config: &ExperimentConfig) -> Result<RatioStats> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = (0..config.phi_list.len())
        .flat_map(|i| (0..config.trials).map(move |j| (i, j)))
        .collect();
    let outcomes: Vec<TrialOutcome> =
        jobs.par_iter().map(|&(i, j)| run_trial(config, i, j)).collect();
    let records = config
        .phi_list
        .iter()
        .enumerate()
        .map(|(i, &phi)| {
            let chunk = &outcomes[i * config.trials..(i + 1) * config.trials];
            summarize(config, phi, chunk)
        })
        .collect();
    Ok(RatioStats { algorithm: config.algorithm, records })
}

fn summarize(config: &ExperimentConfig, phi: f64, outcomes: &[TrialOutcome]) -> PhiRecord {
    let ratios: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| match o {
            TrialOutcome::Valid(r) => Some(*r),
            _ => None,
        })
        .collect();
    let count = |r: InvalidReason| outcomes.iter().filter(|&&o| o == TrialOutcome::Invalid(r)).count();
    let n = ratios.len();
    let mean = (n > 0).then(|| ratios.iter().sum::<f64>() / n as f64);
    let std_err = mean.filter(|_| n > 1).map(|m| {
        let var = ratios.iter().map(|r| (r - m) * (r - m)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    });
    PhiRecord {
        phi,
        lambda: config.lambda,
        trials: outcomes.len(),
        valid_trials: n,
        mean_ratio: mean,
        std_err,
        predicted: predicted_ratio(config.algorithm, phi).ok(),
        invalid_boundary: count(InvalidReason::Boundary),
        invalid_other: count(InvalidReason::Other),
    }
}

/// Formats with six significant digits.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let rounded = format!("{:.*}", decimals, x);
    // rounding may add a digit (9.999995 -> 10.00000)
    match rounded.parse::<f64>() {
        Ok(r) if r.abs() >= 10f64.powi(magnitude + 1) && decimals > 0 => {
            format!("{:.*}", decimals - 1, x)
        }
        _ => rounded,
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "algorithm",
    "phi",
    "lambda",
    "trials",
    "valid_trials",
    "mean_ratio",
    "std_err",
    "predicted",
    "invalid_boundary",
    "invalid_other",
];

/// Writes the results table, followed by a comment row per unreliable
/// angle.
pub fn write_csv(w: impl Write, stats: &[RatioStats]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    let opt = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
    for st in stats {
        for r in &st.records {
            out.write_record([
                st.algorithm.name().to_string(),
                format_sig(r.phi),
                format_sig(r.lambda),
                r.trials.to_string(),
                r.valid_trials.to_string(),
                opt(r.mean_ratio),
                opt(r.std_err),
                opt(r.predicted),
                r.invalid_boundary.to_string(),
                r.invalid_other.to_string(),
            ])?;
        }
    }
    let mut w = out.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    for st in stats {
        for r in st.records.iter().filter(|r| r.unreliable()) {
            writeln!(
                w,
                "# unreliable: algorithm={} phi={} invalid={}/{}",
                st.algorithm,
                format_sig(r.phi),
                r.trials - r.valid_trials,
                r.trials
            )?;
        }
    }
    Ok(())
}

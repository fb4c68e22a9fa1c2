//! Poisson sampling, single-step moments, the closed-form predictor and
//! the Monte Carlo routing-ratio experiments.

mod experiment;
mod moments;
mod poisson;
mod predict;

pub use experiment::{
    format_sig, placement, ratio_experiment, route_inside, run_trial, write_csv, ExperimentConfig,
    InvalidReason, PhiRecord, RatioStats, TrialOutcome, CSV_HEADER,
};
pub use moments::{forward_moments, truncation_radius, Estimate, MomentEstimates};
pub use poisson::{sample_poisson, Window};
pub use predict::{predicted_average, predicted_ratio, tau1};

/// Mixes a master seed with two indices into an independent stream seed.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ a) ^ b.rotate_left(32))
}

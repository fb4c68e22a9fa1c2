//! Closed-form expected routing ratios for two points at unit distance in a
//! dense Poisson process, as a function of the angle `φ` of the segment.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::error::{Error, Result};
use crate::geometry::SQRT_3;
use crate::routing::Algorithm;

/// `τ₁ = (3 ln 3 + 4) / (4√3)`, the expected length per unit of bisector
/// advance of a forward path.
pub fn tau1() -> f64 {
    (3.0 * 3f64.ln() + 4.0) / (4.0 * SQRT_3)
}

fn check_algorithm(algorithm: Algorithm) -> Result<()> {
    match algorithm {
        Algorithm::Positive | Algorithm::Theta6Auto | Algorithm::Memoryless | Algorithm::Constmem => {
            Ok(())
        }
        a => Err(Error::ContractViolation(format!("no closed form for {a}"))),
    }
}

/// Expected routing ratio at angle `phi ∈ [π/3, π/2]`.
pub fn predicted_ratio(algorithm: Algorithm, phi: f64) -> Result<f64> {
    check_algorithm(algorithm)?;
    if !(FRAC_PI_3 - 1e-12..=FRAC_PI_2 + 1e-12).contains(&phi) {
        return Err(Error::ContractViolation(format!("phi = {phi} outside [π/3, π/2]")));
    }
    let (s, c) = phi.sin_cos();
    let t = tau1();
    Ok(match algorithm {
        Algorithm::Positive | Algorithm::Theta6Auto => t * (s + c / SQRT_3),
        Algorithm::Constmem => 4.0 / 3.0 * t * s,
        _ => t * (1.5 * s - SQRT_3 / 6.0 * c),
    })
}

/// Mean of [`predicted_ratio`] over `φ` uniform in `[π/3, π/2]`.
pub fn predicted_average(algorithm: Algorithm) -> Result<f64> {
    check_algorithm(algorithm)?;
    let t = tau1();
    Ok(match algorithm {
        Algorithm::Positive | Algorithm::Theta6Auto => 2.0 * SQRT_3 / PI * t,
        Algorithm::Constmem => 4.0 / PI * t,
        _ => (6.0 - SQRT_3) / PI * t,
    })
}

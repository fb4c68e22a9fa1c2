//! Θ-graphs, half-Θ6 (TD-Delaunay) triangulations and online routing on
//! them, with the oracles and the Poisson experiments used to measure the
//! expected routing ratios.

pub mod error;
pub mod geometry;
pub mod graph;
pub mod lab;
pub mod oracle;
pub mod routing;

pub use error::{Error, Result};

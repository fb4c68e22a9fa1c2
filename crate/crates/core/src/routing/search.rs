use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::graph::{build_theta_graph, Parity};
use crate::routing::{route, Algorithm, RouteTrace, Status};

/// A point set on which Θ3-routing from `source` to `target` cycles.
#[derive(Clone, Debug)]
pub struct LoopInstance {
    pub points: Vec<Point>,
    pub source: usize,
    pub target: usize,
    pub trace: RouteTrace,
    /// Number of random instances tried before this one.
    pub attempts: usize,
}

/// Randomized search over small point sets (4 to 6 points in the unit
/// square) for a pair on which Θ3-routing revisits a vertex.
pub fn find_theta3_loop(seed: u64, max_attempts: usize) -> Option<LoopInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_attempts {
        let n = rng.random_range(4..=6);
        let points: Vec<Point> =
            (0..n).map(|_| Point::new(rng.random(), rng.random())).collect();
        let Ok(g) = build_theta_graph(&points, 3, Parity::All) else {
            continue;
        };
        for s in 0..n {
            for t in 0..n {
                if s == t {
                    continue;
                }
                let trace = route(Algorithm::ThetaK, &g, s, t, 4 * n).expect("valid vertices");
                if trace.status == Status::LoopDetected {
                    return Some(LoopInstance { points, source: s, target: t, trace, attempts: attempt });
                }
            }
        }
    }
    None
}

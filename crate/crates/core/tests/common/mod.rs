#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_route::geometry::Point;
use theta_route::graph::{build_theta_graph, Parity, ThetaGraph};
use theta_route::lab::{sample_poisson, Window};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Poisson sample on `[0, side]²`.
pub fn poisson(lambda: f64, side: f64, seed: u64) -> Vec<Point> {
    let w = Window::new(0.0, 0.0, side, side).unwrap();
    sample_poisson(&w, lambda, seed)
}

pub fn uniform(n: usize, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    (0..n).map(|_| Point::new(r.random::<f64>(), r.random::<f64>())).collect()
}

pub fn theta6(points: &[Point]) -> ThetaGraph {
    build_theta_graph(points, 6, Parity::All).unwrap()
}

pub fn pair(r: &mut impl Rng, n: usize) -> (usize, usize) {
    loop {
        let (s, t) = (r.random_range(0..n), r.random_range(0..n));
        if s != t {
            return (s, t);
        }
    }
}

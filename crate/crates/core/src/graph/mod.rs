//! Θk-graphs and half-Θ6-graphs.
//!
//! A [`ThetaGraph`] stores, for every vertex and every cone it keeps, the
//! cone successor: the point of that cone with the smallest projection on
//! the cone bisector. Keeping only the even (or odd) cones of a six-cone
//! partition yields the half-Θ6-graph, which is a TD-Delaunay
//! triangulation; its faces are available through [`ThetaGraph::faces`].

mod certify;
mod faces;
mod grid;
mod io;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cone_index, bisector_projection, ConeIndex, Point};

pub use certify::{certify_empty_triangle, proper_crossings, segments_cross};
pub use faces::{extract_faces, FaceList};
pub use io::{read_points, write_points, GraphDump};

const NONE: u32 = u32::MAX;

/// Which cones of each vertex contribute successors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    pub fn keeps(self, cone: ConeIndex) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => cone.is_even(),
            Parity::Odd => !cone.is_even(),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::All => "all",
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Parity::All),
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::ContractViolation(format!("unknown parity {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ThetaGraph {
    points: Vec<Point>,
    k: usize,
    parity: Parity,
    succ: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    faces: OnceLock<FaceList>,
    halves: [OnceLock<Box<ThetaGraph>>; 2],
}

/// Builds the graph with a bucket grid for the cone-nearest queries.
pub fn build_theta_graph(points: &[Point], k: usize, parity: Parity) -> Result<ThetaGraph> {
    check_input(points, k)?;
    let index = grid::GridIndex::new(points);
    let mut succ = vec![NONE; points.len() * k];
    for (p, row) in succ.chunks_mut(k).enumerate() {
        index.cone_successors(p, k, |c| parity.keeps(c), row);
    }
    Ok(ThetaGraph::assemble(points.to_vec(), k, parity, succ))
}

/// Quadratic reference construction; same result as [`build_theta_graph`].
pub fn build_theta_graph_naive(points: &[Point], k: usize, parity: Parity) -> Result<ThetaGraph> {
    check_input(points, k)?;
    let n = points.len();
    let mut best: Vec<Option<(f64, u32)>> = vec![None; n * k];
    for (p, &a) in points.iter().enumerate() {
        for (q, &b) in points.iter().enumerate() {
            if p == q {
                continue;
            }
            let c = cone_index(a, b, k)?;
            if !parity.keeps(c) {
                continue;
            }
            let proj = bisector_projection(a, b, c, k)?;
            let slot = &mut best[p * k + c.0];
            let better = match *slot {
                None => true,
                Some((bp, bq)) => {
                    let o = points[bq as usize];
                    (proj, b.x, b.y) < (bp, o.x, o.y)
                }
            };
            if better {
                *slot = Some((proj, q as u32));
            }
        }
    }
    let succ = best.into_iter().map(|s| s.map_or(NONE, |(_, q)| q)).collect();
    Ok(ThetaGraph::assemble(points.to_vec(), k, parity, succ))
}

fn check_input(points: &[Point], k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::ContractViolation(format!("cone count {k} < 2")));
    }
    if points.len() >= NONE as usize {
        return Err(Error::ContractViolation("too many points".into()));
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput(format!("non-finite point {p}")));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(Error::DegenerateInput(format!(
                "duplicate point {} (indices {} and {})",
                points[w[0]],
                w[0].min(w[1]),
                w[0].max(w[1])
            )));
        }
    }
    Ok(())
}

impl ThetaGraph {
    /// Graph from an explicit successor table (`succ[v][i]`). Entries for
    /// cones the parity drops must be `None`.
    pub fn from_successors(
        points: Vec<Point>,
        k: usize,
        parity: Parity,
        succ: &[Vec<Option<usize>>],
    ) -> Result<ThetaGraph> {
        check_input(&points, k)?;
        if succ.len() != points.len() {
            return Err(Error::ContractViolation(format!(
                "{} successor rows for {} points",
                succ.len(),
                points.len()
            )));
        }
        let mut flat = Vec::with_capacity(points.len() * k);
        for (v, row) in succ.iter().enumerate() {
            if row.len() != k {
                return Err(Error::ContractViolation(format!("row {v} has {} entries", row.len())));
            }
            for (c, &q) in row.iter().enumerate() {
                match q {
                    None => flat.push(NONE),
                    Some(q) if q < points.len() && q != v && parity.keeps(ConeIndex(c)) => {
                        flat.push(q as u32)
                    }
                    Some(q) => {
                        return Err(Error::ContractViolation(format!(
                            "invalid successor {q} for vertex {v}, cone {c}"
                        )))
                    }
                }
            }
        }
        Ok(ThetaGraph::assemble(points, k, parity, flat))
    }

    fn assemble(points: Vec<Point>, k: usize, parity: Parity, succ: Vec<u32>) -> ThetaGraph {
        let n = points.len();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for v in 0..n {
            for &q in &succ[v * k..(v + 1) * k] {
                if q != NONE {
                    let v = v as u32;
                    edges.push((v.min(q), v.max(q)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let mut adj_start = vec![0u32; n + 1];
        for &(a, b) in &edges {
            adj_start[a as usize + 1] += 1;
            adj_start[b as usize + 1] += 1;
        }
        for i in 0..n {
            adj_start[i + 1] += adj_start[i];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; 2 * edges.len()];
        for &(a, b) in &edges {
            adj[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        let mut keyed: Vec<(f64, u32)> = Vec::new();
        for v in 0..n {
            let p = points[v];
            let list = &mut adj[adj_start[v] as usize..adj_start[v + 1] as usize];
            keyed.clear();
            keyed.extend(list.iter().map(|&w| ((points[w as usize] - p).angle(), w)));
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for (slot, &(_, w)) in list.iter_mut().zip(&keyed) {
                *slot = w;
            }
        }
        ThetaGraph {
            points,
            k,
            parity,
            succ,
            adj_start,
            adj,
            faces: OnceLock::new(),
            halves: [OnceLock::new(), OnceLock::new()],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    /// Cone successor of `v` in `cone`; `None` if the cone is empty or
    /// dropped by the parity filter.
    pub fn successor(&self, v: usize, cone: ConeIndex) -> Option<usize> {
        let q = self.succ[v * self.k + cone.0 % self.k];
        (q != NONE).then_some(q as usize)
    }

    /// Successor table as rows of `k` optional indices.
    pub fn successor_rows(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.len())
            .map(|v| (0..self.k).map(|c| self.successor(v, ConeIndex(c))).collect())
            .collect()
    }

    /// Neighbors of `v` sorted counterclockwise by direction.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.adj_start[v] as usize..self.adj_start[v + 1] as usize]
    }

    pub(crate) fn adjacency(&self) -> (&[u32], &[u32]) {
        (&self.adj_start, &self.adj)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).contains(&(v as u32))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.len() {
            for &v in self.neighbors(u) {
                if (u as u32) < v {
                    out.push((u, v as usize));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether this graph is a half-Θ6-graph.
    pub fn is_half_theta6(&self) -> bool {
        self.k == 6 && self.parity != Parity::All
    }

    /// Bounded faces of a half-Θ6-graph, computed on first use.
    pub fn faces(&self) -> Result<&FaceList> {
        if let Some(f) = self.faces.get() {
            return Ok(f);
        }
        let f = extract_faces(self)?;
        Ok(self.faces.get_or_init(|| f))
    }

    /// The half-Θ6-graph of the requested parity. A full Θ6-graph derives
    /// (and caches) it from its own successor table.
    pub fn half(&self, parity: Parity) -> Result<&ThetaGraph> {
        if self.k != 6 || parity == Parity::All {
            return Err(Error::ContractViolation(format!(
                "no {parity} half of a k={} graph",
                self.k
            )));
        }
        match self.parity {
            p if p == parity => Ok(self),
            Parity::All => {
                let slot = &self.halves[(parity == Parity::Odd) as usize];
                Ok(slot.get_or_init(|| {
                    let succ = self
                        .succ
                        .iter()
                        .enumerate()
                        .map(|(i, &q)| if parity.keeps(ConeIndex(i % 6)) { q } else { NONE })
                        .collect();
                    Box::new(ThetaGraph::assemble(self.points.clone(), 6, parity, succ))
                }))
            }
            p => Err(Error::ContractViolation(format!("no {parity} half of a {p} graph"))),
        }
    }
}

/// True iff the edges of `even` and `odd` together are exactly those of
/// `full`.
pub fn union_is_theta6(even: &ThetaGraph, odd: &ThetaGraph, full: &ThetaGraph) -> Result<bool> {
    if even.points != full.points || odd.points != full.points {
        return Err(Error::ContractViolation("graphs are built on different point sets".into()));
    }
    if even.k != 6 || odd.k != 6 || full.k != 6 {
        return Err(Error::ContractViolation("union check needs k = 6".into()));
    }
    let mut union = even.edges();
    union.extend(odd.edges());
    union.sort_unstable();
    union.dedup();
    Ok(union == full.edges())
}

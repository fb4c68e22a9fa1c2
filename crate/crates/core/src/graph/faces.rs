use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::graph::ThetaGraph;

const OUTER: u32 = u32::MAX;

/// Bounded triangular faces of a plane graph with edge-to-face incidence.
#[derive(Debug, Clone)]
pub struct FaceList {
    triangles: Vec<[u32; 3]>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    /// Face to the left of each directed edge `u → adj[slot]`.
    left: Vec<u32>,
}

impl FaceList {
    /// Triangles as counterclockwise vertex triples.
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    fn slot(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (self.adj_start[u] as usize, self.adj_start[u + 1] as usize);
        self.adj[a..b].iter().position(|&w| w as usize == v).map(|i| a + i)
    }

    /// Bounded face on the left of the directed edge `u → v`.
    pub fn left_face(&self, u: usize, v: usize) -> Option<usize> {
        let f = self.left[self.slot(u, v)?];
        (f != OUTER).then_some(f as usize)
    }

    /// `(left, right)` faces of `u → v`, or `None` if `uv` is not an edge.
    pub fn edge_faces(&self, u: usize, v: usize) -> Option<(Option<usize>, Option<usize>)> {
        let l = self.left[self.slot(u, v)?];
        let r = self.left[self.slot(v, u)?];
        let f = |x: u32| (x != OUTER).then_some(x as usize);
        Some((f(l), f(r)))
    }

    /// Third vertex of the triangle on the given side of `u → v`.
    pub fn third_vertex(&self, u: usize, v: usize, left: bool) -> Option<usize> {
        let f = if left { self.left_face(u, v)? } else { self.left_face(v, u)? };
        self.triangles[f]
            .iter()
            .map(|&w| w as usize)
            .find(|&w| w != u && w != v)
    }
}

/// Walks the faces of the straight-line embedding of a half-Θ6-graph and
/// keeps the bounded ones.
pub fn extract_faces(g: &ThetaGraph) -> Result<FaceList> {
    if !g.is_half_theta6() {
        return Err(Error::ContractViolation(format!(
            "faces need a half-Θ6-graph, got k={} parity={}",
            g.k(),
            g.parity()
        )));
    }
    let (adj_start, adj) = g.adjacency();
    let n = g.len();
    let pts = g.points();
    let slot_of = |u: usize, v: u32| -> usize {
        let a = adj_start[u] as usize;
        let b = adj_start[u + 1] as usize;
        a + adj[a..b].iter().position(|&w| w == v).expect("adjacency is symmetric")
    };
    let owner: Vec<u32> = (0..n)
        .flat_map(|u| std::iter::repeat_n(u as u32, (adj_start[u + 1] - adj_start[u]) as usize))
        .collect();

    let angle: Vec<f64> = adj
        .iter()
        .zip(&owner)
        .map(|(&v, &u)| (pts[v as usize] - pts[u as usize]).angle())
        .collect();

    let mut left = vec![OUTER; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut triangles = Vec::new();
    let mut cycles = 0usize;
    let mut cycle = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        cycle.clear();
        let mut s = start;
        let mut area = 0.0;
        let mut turning = 0.0;
        loop {
            seen[s] = true;
            cycle.push(s);
            let (u, v) = (owner[s] as usize, adj[s]);
            area += pts[u].cross(pts[v as usize]);
            // next edge: the neighbor of v just clockwise of u
            let back = slot_of(v as usize, u as u32);
            let lo = adj_start[v as usize] as usize;
            let deg = adj_start[v as usize + 1] as usize - lo;
            s = lo + (back - lo + deg - 1) % deg;
            let wedge = if adj[s] as usize == u {
                TAU
            } else {
                let a = angle[back] - angle[s];
                if a <= 0.0 { a + TAU } else { a }
            };
            turning += PI - wedge;
            if s == start {
                break;
            }
            if seen[s] {
                return Err(Error::InvariantViolation("face walk did not close".into()));
            }
        }
        // a plane drawing has bounded faces turning once counterclockwise
        // and outer boundaries turning once clockwise
        let winding = (turning / TAU).round();
        if (winding == 1.0) != (area > 0.0) || winding.abs() != 1.0 {
            return Err(Error::InvariantViolation(format!(
                "edge set is not plane: face at vertex {} winds {winding} times",
                owner[start]
            )));
        }
        if area > 0.0 {
            if cycle.len() != 3 {
                return Err(Error::InvariantViolation(format!(
                    "bounded face with {} edges at vertex {}",
                    cycle.len(),
                    owner[start]
                )));
            }
            let id = triangles.len() as u32;
            triangles.push([owner[cycle[0]], owner[cycle[1]], owner[cycle[2]]]);
            for &e in &cycle {
                left[e] = id;
            }
        }
    }

    // Euler: each component with an edge satisfies V - E + F = 2.
    let mut comp = Dsu::new(n);
    for (s, &v) in adj.iter().enumerate() {
        comp.union(owner[s] as usize, v as usize);
    }
    let mut roots = Vec::new();
    let mut touched = 0usize;
    for v in 0..n {
        if adj_start[v + 1] > adj_start[v] {
            touched += 1;
            roots.push(comp.find(v));
        }
    }
    roots.sort_unstable();
    roots.dedup();
    let e = adj.len() / 2;
    if touched + cycles != e + 2 * roots.len() {
        return Err(Error::InvariantViolation(format!(
            "edge set is not plane: V={touched} E={e} F={cycles} components={}",
            roots.len()
        )));
    }

    Ok(FaceList {
        triangles,
        adj_start: adj_start.to_vec(),
        adj: adj.to_vec(),
        left,
    })
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

//! Ground truth: shortest paths, spanning ratios, corridor boundaries and
//! certification of graphs and routes. These are slow reference
//! computations meant for tests and audits.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    bisector, side_of_line, ConeIndex, OrientedConeLine, Side, SQRT_3,
};
use crate::graph::{
    certify_empty_triangle, extract_faces, proper_crossings, union_is_theta6, Parity, ThetaGraph,
};
use crate::routing::{Frame, RouteTrace, Status, StepTag};

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShortestPathResult {
    pub length: f64,
    pub path: Vec<usize>,
    pub reachable: bool,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Euclidean shortest-path distances and predecessors from `s`.
pub fn distances_from(g: &ThetaGraph, s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = g.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Entry(0.0, s));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &w in g.neighbors(u) {
            let w = w as usize;
            let nd = d + g.point(u).dist(g.point(w));
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = u;
                heap.push(Entry(nd, w));
            }
        }
    }
    (dist, pred)
}

pub fn shortest_path(g: &ThetaGraph, s: usize, t: usize) -> ShortestPathResult {
    let (dist, pred) = distances_from(g, s);
    if !dist[t].is_finite() {
        return ShortestPathResult { length: f64::INFINITY, path: Vec::new(), reachable: false };
    }
    let mut path = vec![t];
    while *path.last().expect("nonempty") != s {
        path.push(pred[*path.last().expect("nonempty")]);
    }
    path.reverse();
    ShortestPathResult { length: dist[t], path, reachable: true }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanningReport {
    /// Largest shortest-path-to-distance ratio over reachable pairs.
    pub max_ratio: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub evaluated: usize,
    pub unreachable: Vec<(usize, usize)>,
}

/// Stretch of the graph over the sampled pairs. Unreachable pairs are
/// listed and left out of the maximum.
pub fn spanning_ratio(g: &ThetaGraph, pairs: &[(usize, usize)]) -> Result<SpanningReport> {
    if pairs.is_empty() {
        return Err(Error::ContractViolation("no pairs to evaluate".into()));
    }
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(s, t) in pairs {
        if s >= g.len() || t >= g.len() {
            return Err(Error::ContractViolation(format!("pair ({s}, {t}) out of range")));
        }
        by_source.entry(s).or_default().push(t);
    }
    let mut sources: Vec<_> = by_source.into_iter().collect();
    sources.sort_unstable();
    let mut report =
        SpanningReport { max_ratio: 1.0, worst_pair: None, evaluated: 0, unreachable: Vec::new() };
    for (s, targets) in sources {
        let (dist, _) = distances_from(g, s);
        for t in targets {
            if s == t {
                continue;
            }
            if !dist[t].is_finite() {
                report.unreachable.push((s, t));
                continue;
            }
            report.evaluated += 1;
            let r = dist[t] / g.point(s).dist(g.point(t));
            if report.worst_pair.is_none() || r > report.max_ratio {
                report.max_ratio = r;
                report.worst_pair = Some((s, t));
            }
        }
    }
    Ok(report)
}

/// The boundary path from `s` to `t` on the positive side of the union of
/// the triangles crossed by `line`, computed from the whole face list.
///
/// Works in the coordinates of `g` (use a line of the even frame on an
/// even half-graph).
pub fn corridor_boundary(
    g: &ThetaGraph,
    s: usize,
    t: usize,
    line: &OrientedConeLine,
) -> Result<Vec<usize>> {
    if side_of_line(line, g.point(t)) == Side::Negative {
        return Err(Error::ContractViolation(format!("vertex {t} is on the negative side")));
    }
    let path = corridor_from(g, s, line)?;
    match path.iter().position(|&v| v == t) {
        Some(j) => Ok(path[..=j].to_vec()),
        None => Err(Error::ContractViolation(format!(
            "no corridor of the line leads from {s} to {t}"
        ))),
    }
}

/// The whole boundary path of the corridor through `s`, from `s` to the
/// last triangle crossed by `line` in its direction.
pub fn corridor_from(g: &ThetaGraph, s: usize, line: &OrientedConeLine) -> Result<Vec<usize>> {
    let faces = g.faces()?;
    let side = |v: usize| side_of_line(line, g.point(v));
    if side(s) == Side::Negative {
        return Err(Error::ContractViolation(format!("vertex {s} is on the negative side")));
    }
    // crossing edges as (param, positive end, negative end)
    let mut crossing: Vec<(f64, usize, usize)> = Vec::new();
    for (a, b) in g.edges() {
        let (pos, neg) = match (side(a), side(b)) {
            (Side::Negative, Side::Negative) => continue,
            (Side::Negative, _) => (b, a),
            (_, Side::Negative) => (a, b),
            _ => continue,
        };
        let (pp, pn) = (g.point(pos), g.point(neg));
        let (sp, sn) = (line.signed_distance(pp), line.signed_distance(pn));
        let x = pp + (pn - pp) * (sp / (sp - sn));
        crossing.push((line.param(x), pos, neg));
    }
    // triangles crossed by the line, chained through shared crossing edges
    let mut dsu = Dsu::new(faces.len());
    let mut first_face = Vec::with_capacity(crossing.len());
    for &(_, a, b) in &crossing {
        let (l, r) = faces.edge_faces(a, b).expect("crossing edge is an edge");
        if let (Some(x), Some(y)) = (l, r) {
            dsu.union(x, y);
        }
        first_face.push(l.or(r));
    }
    let chains: Vec<Option<usize>> = first_face.iter().map(|f| f.map(|f| dsu.find(f))).collect();
    let mut reach: HashMap<usize, f64> = HashMap::new();
    for (i, c) in chains.iter().enumerate() {
        if let Some(c) = *c {
            let r = reach.entry(c).or_insert(f64::NEG_INFINITY);
            *r = r.max(crossing[i].0);
        }
    }
    // the corridor through s holds its furthest crossing edge; when s is on
    // the line several corridors can meet there, and the one reaching
    // furthest ahead wins
    let key = |i: usize| (crossing[i].0, chains[i].map_or(f64::NEG_INFINITY, |c| reach[&c]));
    let start = (0..crossing.len())
        .filter(|&i| crossing[i].1 == s && chains[i].is_some())
        .max_by(|&i, &j| {
            let (a, b) = (key(i), key(j));
            a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
        })
        .ok_or_else(|| {
            Error::ContractViolation(format!("vertex {s} touches no triangle crossed by the line"))
        })?;
    let mut edges: Vec<(f64, usize)> = (0..crossing.len())
        .filter(|&i| chains[i] == chains[start])
        .map(|i| (crossing[i].0, crossing[i].1))
        .collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut path: Vec<usize> = Vec::new();
    for (_, v) in edges {
        if path.last() != Some(&v) {
            path.push(v);
        }
    }
    let i = path.iter().position(|&v| v == s).expect("s is on its corridor");
    Ok(path.split_off(i))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Outcome of one audit check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(check: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { check: check.into(), pass, detail: detail.into() }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// The graph a trace actually ran on.
fn routed_graph<'g>(trace: &RouteTrace, graph: &'g ThetaGraph) -> Result<&'g ThetaGraph> {
    match (graph.parity(), trace.parity) {
        (a, b) if a == b => Ok(graph),
        (Parity::All, p) => graph.half(p),
        (a, b) => Err(Error::ContractViolation(format!("trace ran on a {b} graph, got {a}"))),
    }
}

/// Audits an arrived trace: edges, length and ratio bookkeeping, the ratio
/// bound and the per-phase length bounds. Checks after the first failure
/// still run so the report is complete.
pub fn certify_trace(trace: &RouteTrace, graph: &ThetaGraph, bound: f64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::new(
        "status",
        trace.status == Status::Arrived,
        format!("{:?}", trace.status),
    ));
    let g = match routed_graph(trace, graph) {
        Ok(g) => g,
        Err(e) => {
            out.push(Check::new("graph", false, e.to_string()));
            return out;
        }
    };
    let v = &trace.vertices;
    let ends_ok = v.first() == Some(&trace.source)
        && (trace.status != Status::Arrived || v.last() == Some(&trace.target));
    out.push(Check::new("endpoints", ends_ok, format!("{:?} .. {:?}", v.first(), v.last())));
    let bad_edge = v.windows(2).find(|w| !g.has_edge(w[0], w[1]));
    out.push(Check::new(
        "edges",
        bad_edge.is_none(),
        bad_edge.map_or("all consecutive vertices adjacent".into(), |w| {
            format!("{} and {} are not adjacent", w[0], w[1])
        }),
    ));
    let length: f64 = v.windows(2).map(|w| g.point(w[0]).dist(g.point(w[1]))).sum();
    out.push(Check::new(
        "length",
        (length - trace.length).abs() <= TOL * length.max(1.0),
        format!("recomputed {length}, recorded {}", trace.length),
    ));
    let direct = g.point(trace.source).dist(g.point(trace.target));
    let ratio = if direct > 0.0 { length / direct } else { 1.0 };
    out.push(Check::new(
        "ratio",
        (ratio - trace.ratio).abs() <= TOL * ratio.max(1.0) && ratio <= bound + TOL,
        format!("ratio {ratio}, bound {bound}"),
    ));
    for c in phase_checks(trace, g) {
        out.push(c);
    }
    if trace.status == Status::Arrived && trace.source != trace.target {
        let sp = shortest_path(g, trace.source, trace.target);
        out.push(Check::new(
            "shortest-path",
            sp.reachable && length >= sp.length - TOL,
            format!("route {length}, shortest {}", sp.length),
        ));
    }
    out
}

/// Forward runs, side runs and side-run colors.
fn phase_checks(trace: &RouteTrace, g: &ThetaGraph) -> Vec<Check> {
    let frame: Frame = trace.frame;
    let v = &trace.vertices;
    let mut forward = Check::new("forward-runs", true, "");
    let mut side = Check::new("side-runs", true, "");
    let mut colors = Check::new("side-colors", true, "");
    let (mut nf, mut ns) = (0, 0);
    for (tag, a, b) in trace.runs() {
        let len: f64 = (a..b).map(|i| g.point(v[i]).dist(g.point(v[i + 1]))).sum();
        let step = trace.steps[a];
        match tag {
            StepTag::Forward => {
                let Some(cone) = step.cone else { continue };
                nf += 1;
                let advance = (g.point(v[b]) - g.point(v[a])).dot(bisector(cone, g.k()));
                if len > 2.0 / SQRT_3 * advance + TOL && forward.pass {
                    forward.pass = false;
                    forward.detail = format!("run {a}..{b}: length {len} > 2/√3 · {advance}");
                }
            }
            StepTag::Side => {
                let Some(line) = step.line else { continue };
                ns += 1;
                let p0 = frame.point(g.point(v[a]));
                let p1 = frame.point(g.point(v[b]));
                let proj = (line.param(p1) - line.param(p0)).abs();
                if len > 2.0 * proj + TOL && side.pass {
                    side.pass = false;
                    side.detail = format!("run {a}..{b}: length {len} > 2 · {proj}");
                }
                let third = frame.cone(line.opposite_color());
                let third = if g.k() == 6 { third } else { ConeIndex(third.0 % g.k()) };
                for i in a..b {
                    let (x, y) = (v[i], v[i + 1]);
                    if (g.successor(x, third) == Some(y) || g.successor(y, third) == Some(x))
                        && colors.pass
                    {
                        colors.pass = false;
                        colors.detail = format!("edge {x}-{y} has the third color (cone {})", third.0);
                    }
                }
            }
            _ => {}
        }
    }
    if forward.pass {
        forward.detail = format!("{nf} forward runs within bound");
    }
    if side.pass {
        side.detail = format!("{ns} side runs within bound");
    }
    if colors.pass {
        colors.detail = "side runs avoid the third color".into();
    }
    vec![forward, side, colors]
}

/// Structural audit of a graph: empty canonical triangles for every
/// successor edge and, for six cones, planarity of the halves, their faces
/// and the union identity.
pub fn certify_graph(g: &ThetaGraph) -> Vec<Check> {
    let mut out = Vec::new();
    let pts = g.points();
    let mut bad = None;
    'outer: for v in 0..g.len() {
        for c in 0..g.k() {
            if let Some(q) = g.successor(v, ConeIndex(c)) {
                if !certify_empty_triangle(pts[v], pts[q], g.k(), pts) {
                    bad = Some((v, q));
                    break 'outer;
                }
            }
        }
    }
    out.push(Check::new(
        "empty-triangles",
        bad.is_none(),
        bad.map_or(format!("{} edges certified", g.edge_count()), |(v, q)| {
            format!("triangle of {v} -> {q} holds another point")
        }),
    ));
    if g.k() != 6 {
        return out;
    }
    let halves: Vec<&ThetaGraph> = match g.parity() {
        Parity::All => [Parity::Even, Parity::Odd].iter().filter_map(|&p| g.half(p).ok()).collect(),
        _ => vec![g],
    };
    for h in &halves {
        let edges = h.edges();
        let crossings = proper_crossings(pts, &edges);
        out.push(Check::new(
            &format!("plane-{}", h.parity()),
            crossings.is_empty(),
            match crossings.first() {
                None => format!("{} edges, no crossings", edges.len()),
                Some((a, b)) => format!("{} crossings, first {a:?} x {b:?}", crossings.len()),
            },
        ));
        match extract_faces(h) {
            Ok(f) => out.push(Check::new(
                &format!("faces-{}", h.parity()),
                true,
                format!("{} triangles", f.len()),
            )),
            Err(e) => out.push(Check::new(&format!("faces-{}", h.parity()), false, e.to_string())),
        }
    }
    if g.parity() == Parity::All {
        let ok = union_is_theta6(halves[0], halves[1], g).unwrap_or(false);
        out.push(Check::new("union", ok, "even ∪ odd = Θ6"));
    }
    out
}

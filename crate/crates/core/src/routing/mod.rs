//! Online routing on Θ-graphs.
//!
//! Step functions see the graph only through a [`NeighborhoodView`]; the
//! driver [`route`] iterates them, tracks the phase of the route and stops
//! on arrival, failure, a repeated state or the step limit.

mod search;
mod steps;
mod view;

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    bisector_angle, cone_of_vector, ray_direction_index, ConeIndex, OrientedConeLine, Point,
};
use crate::graph::{Parity, ThetaGraph};

pub use search::{find_theta3_loop, LoopInstance};
pub use steps::{
    bose_negative_step, constmem_negative_step, forward_step, memoryless_negative_step,
    side_step, source_line, theta_step, Decision, LadderCase, StepError, StepTag,
};
pub use view::{Frame, LocalityViolation, NeighborhoodView, RoutingMemory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Classic Θk-routing on any Θk-graph.
    ThetaK,
    /// Positive routing on a half-Θ6-graph.
    Positive,
    #[serde(alias = "memoryless-negative")]
    Memoryless,
    #[serde(alias = "constmem-negative")]
    Constmem,
    #[serde(alias = "bose-negative")]
    Bose,
    /// Positive routing on the half of a full Θ6-graph in which the target
    /// lies in a positive cone of the source.
    Theta6Auto,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::ThetaK,
        Algorithm::Positive,
        Algorithm::Memoryless,
        Algorithm::Constmem,
        Algorithm::Bose,
        Algorithm::Theta6Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ThetaK => "theta-k",
            Algorithm::Positive => "positive",
            Algorithm::Memoryless => "memoryless",
            Algorithm::Constmem => "constmem",
            Algorithm::Bose => "bose",
            Algorithm::Theta6Auto => "theta6-auto",
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Algorithm::Memoryless | Algorithm::Constmem | Algorithm::Bose)
    }

    /// Proven worst-case routing ratio, if any.
    pub fn ratio_bound(self) -> Option<f64> {
        match self {
            Algorithm::Positive | Algorithm::Theta6Auto => Some(2.0),
            Algorithm::Memoryless | Algorithm::Constmem | Algorithm::Bose => {
                Some(5.0 / crate::geometry::SQRT_3)
            }
            Algorithm::ThetaK => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::ContractViolation(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Arrived,
    LoopDetected,
    DeadEnd,
    StepLimit,
    LeftWindow,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Arrived => "arrived",
            Status::LoopDetected => "loop-detected",
            Status::DeadEnd => "dead-end",
            Status::StepLimit => "step-limit",
            Status::LeftWindow => "left-window",
        })
    }
}

/// One edge of a route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub tag: StepTag,
    pub case: Option<LadderCase>,
    /// Cone followed, in the original coordinates.
    pub cone: Option<ConeIndex>,
    /// Line followed by a side step, in routing-frame coordinates.
    pub line: Option<OrientedConeLine>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouteTrace {
    pub algorithm: Algorithm,
    pub source: usize,
    pub target: usize,
    pub vertices: Vec<usize>,
    pub steps: Vec<Step>,
    pub length: f64,
    pub ratio: f64,
    pub split_point: Option<usize>,
    pub status: Status,
    /// Frame of the `line` fields of the steps.
    pub frame: Frame,
    /// Parity of the graph the route ran on.
    pub parity: Parity,
    /// Failure description for unsuccessful routes.
    pub detail: Option<String>,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    vertices: &'a [usize],
    tags: Vec<StepTag>,
    length: f64,
    ratio: f64,
    split_point: Option<usize>,
    status: Status,
}

impl Serialize for RouteTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TraceJson {
            vertices: &self.vertices,
            tags: self.steps.iter().map(|st| st.tag).collect(),
            length: self.length,
            ratio: self.ratio,
            split_point: self.split_point,
            status: self.status,
        }
        .serialize(s)
    }
}

impl RouteTrace {
    pub fn arrived(&self) -> bool {
        self.status == Status::Arrived
    }

    pub fn tags(&self) -> Vec<StepTag> {
        self.steps.iter().map(|s| s.tag).collect()
    }

    /// Maximal runs of steps with equal tag along the same cone or line,
    /// as `(tag, first step, end step)`.
    pub fn runs(&self) -> Vec<(StepTag, usize, usize)> {
        let mut out: Vec<(StepTag, usize, usize)> = Vec::new();
        for (i, s) in self.steps.iter().enumerate() {
            match out.last_mut() {
                Some(r) if r.0 == s.tag && same_leg(&self.steps[r.1], s) => r.2 = i + 1,
                _ => out.push((s.tag, i, i + 1)),
            }
        }
        out
    }
}

/// Whether two steps move along the same cone or line.
fn same_leg(a: &Step, b: &Step) -> bool {
    a.cone == b.cone && a.line == b.line
}

/// Graph and frame an algorithm runs on, resolved from the input graph.
fn resolve(
    algorithm: Algorithm,
    graph: &ThetaGraph,
    s: usize,
    t: usize,
) -> Result<(&ThetaGraph, Frame)> {
    if algorithm == Algorithm::ThetaK {
        return Ok((graph, Frame::Identity));
    }
    if graph.k() != 6 {
        return Err(Error::ContractViolation(format!(
            "{algorithm} routing needs a six-cone graph, got k={}",
            graph.k()
        )));
    }
    let (g, frame) = match (algorithm, graph.parity()) {
        (Algorithm::Theta6Auto, Parity::All) => {
            let c = cone_of_vector(graph.point(t) - graph.point(s), 6);
            if s == t || c.is_even() {
                (graph.half(Parity::Even)?, Frame::Identity)
            } else {
                (graph.half(Parity::Odd)?, Frame::HalfTurn)
            }
        }
        (Algorithm::Theta6Auto, p) => {
            return Err(Error::ContractViolation(format!(
                "theta6-auto needs the full Θ6-graph, got the {p} half"
            )))
        }
        (_, Parity::All) => (graph.half(Parity::Even)?, Frame::Identity),
        (_, Parity::Even) => (graph, Frame::Identity),
        (_, Parity::Odd) => (graph, Frame::HalfTurn),
    };
    g.faces()?;
    Ok((g, frame))
}

/// Phase of positive routing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Start,
    Forward(ConeIndex),
    Side(u8),
}

/// Routes from vertex `s` to vertex `t`.
pub fn route(
    algorithm: Algorithm,
    graph: &ThetaGraph,
    s: usize,
    t: usize,
    max_steps: usize,
) -> Result<RouteTrace> {
    let n = graph.len();
    if s >= n || t >= n {
        return Err(Error::ContractViolation(format!(
            "vertices {s}, {t} out of range for {n} points"
        )));
    }
    let (g, frame) = resolve(algorithm, graph, s, t)?;
    let ps = frame.point(g.point(s));
    let pt = frame.point(g.point(t));
    let memory = match algorithm {
        Algorithm::Constmem => RoutingMemory::Source(ps),
        _ => RoutingMemory::None,
    };

    let mut trace = RouteTrace {
        algorithm,
        source: s,
        target: t,
        vertices: vec![s],
        steps: Vec::new(),
        length: 0.0,
        ratio: 1.0,
        split_point: None,
        status: Status::Arrived,
        frame,
        parity: g.parity(),
        detail: None,
    };
    if s == t {
        return Ok(trace);
    }

    let mut phase = Phase::Start;
    let mut seen: HashSet<(usize, Phase)> = HashSet::new();
    let mut u = s;
    let status = loop {
        if u == t {
            break Status::Arrived;
        }
        if trace.steps.len() >= max_steps {
            break Status::StepLimit;
        }
        let view = NeighborhoodView::new(g, u, frame);
        let decision = match algorithm {
            Algorithm::ThetaK => theta_step(&view, pt).map(|next| Decision {
                next,
                tag: StepTag::Theta,
                case: None,
                cone: Some(cone_of_vector(pt - view.center_position(), g.k())),
                line: None,
            }),
            Algorithm::Positive | Algorithm::Theta6Auto => {
                positive_step(&view, ps, pt, &mut phase)
            }
            Algorithm::Memoryless => memoryless_negative_step(&view, pt),
            Algorithm::Constmem => constmem_negative_step(&view, pt, &memory),
            Algorithm::Bose => bose_negative_step(&view, pt),
        };
        if !seen.insert((u, phase)) {
            break Status::LoopDetected;
        }
        let d = match decision {
            Ok(d) => d,
            Err(e) => {
                trace.detail = Some(e.to_string());
                break match e {
                    StepError::EmptyCone { .. } | StepError::CorridorExhausted { .. } => {
                        Status::LeftWindow
                    }
                    _ => Status::DeadEnd,
                };
            }
        };
        let cone = d.cone.map(|c| if g.k() == 6 { frame.cone(c) } else { c });
        trace.steps.push(Step { tag: d.tag, case: d.case, cone, line: d.line });
        trace.length += g.point(u).dist(g.point(d.next));
        u = d.next;
        trace.vertices.push(u);
    };
    trace.status = status;
    trace.ratio = trace.length / ps.dist(pt);
    trace.split_point = trace
        .steps
        .windows(2)
        .position(|w| w[0].tag != w[1].tag)
        .map(|i| trace.vertices[i + 1]);
    Ok(trace)
}

/// Positive routing with `t` in an even cone `i` of `s`: forward in cone
/// `i` while inside the cone of `t` that contains `s`, then along the
/// boundary ray of that cone that the route crossed.
fn positive_step(
    view: &NeighborhoodView,
    ps: Point,
    pt: Point,
    phase: &mut Phase,
) -> std::result::Result<Decision, StepError> {
    if *phase == Phase::Start {
        let i = cone_of_vector(pt - ps, 6);
        if !i.is_even() {
            return Err(StepError::Geometry(format!(
                "target lies in negative cone {} of the source",
                i.0
            )));
        }
        *phase = Phase::Forward(i);
    }
    let u = view.center_position();
    if let Phase::Forward(i) = *phase {
        let c = cone_of_vector(u - pt, 6);
        if c == i.opposite(6) {
            let next = forward_step(view, i)?;
            return Ok(Decision {
                next,
                tag: StepTag::Forward,
                case: None,
                cone: Some(i),
                line: None,
            });
        }
        // boundary rays of the cone of t containing s
        let back = bisector_angle(i.opposite(6), 6);
        let ray = match (c.0 + 6 - i.0) % 6 {
            1 | 2 => back - PI / 6.0,
            4 | 5 => back + PI / 6.0,
            _ => {
                return Err(StepError::Geometry(format!(
                    "forward phase overshot into cone {} of the target",
                    c.0
                )))
            }
        };
        let line = OrientedConeLine::new(pt, ray_direction_index(ray));
        let line = if (pt - u).dot(line.unit()) < 0.0 { line.reversed() } else { line };
        *phase = Phase::Side(line.direction);
    }
    let Phase::Side(dir) = *phase else { unreachable!() };
    let line = OrientedConeLine::new(pt, dir);
    let next = side_step(view, &line)?;
    Ok(Decision { next, tag: StepTag::Side, case: None, cone: None, line: Some(line) })
}

//! Single routing steps. All geometry is in the routing frame, where the
//! graph is an even half-Θ6-graph (or a Θk-graph for [`theta_step`]).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    bisector_angle, canonical_triangle, cone_of_vector, line_intersection, ray_direction_index,
    side_of_line, ConeIndex, OrientedConeLine, Point, Side, EPS_GEOM,
};
use crate::routing::view::{LocalityViolation, NeighborhoodView, RoutingMemory};

/// Why a step could not be taken.
#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    EmptyCone { vertex: usize, cone: ConeIndex },
    CorridorExhausted { vertex: usize },
    Locality(LocalityViolation),
    Geometry(String),
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::EmptyCone { vertex, cone } => {
                write!(f, "cone {} of vertex {vertex} is empty", cone.0)
            }
            StepError::CorridorExhausted { vertex } => {
                write!(f, "no corridor triangle ahead of vertex {vertex}")
            }
            StepError::Locality(v) => write!(f, "{v}"),
            StepError::Geometry(m) => f.write_str(m),
        }
    }
}

impl From<LocalityViolation> for StepError {
    fn from(v: LocalityViolation) -> Self {
        StepError::Locality(v)
    }
}

/// Phase label of a routing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepTag {
    Forward,
    Side,
    Theta,
    BoseNegative,
}

/// Which rule of a negative-routing ladder produced a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderCase {
    /// Case 1: the target is in a positive cone.
    Positive,
    /// Case 2: the clockwise successor is outside `T_tu`.
    ClockwiseOut,
    /// Case 3: the counterclockwise successor is outside `T_tu`.
    CounterclockwiseOut,
    /// Case 4 (or 4′): both successors inside `T_tu`.
    BothInside,
}

/// One decision of a step function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub next: usize,
    pub tag: StepTag,
    pub case: Option<LadderCase>,
    /// Cone of the center followed, for cone steps.
    pub cone: Option<ConeIndex>,
    /// Line followed, for side steps.
    pub line: Option<OrientedConeLine>,
}

impl Decision {
    fn forward(next: usize, cone: ConeIndex, case: Option<LadderCase>) -> Self {
        Decision { next, tag: StepTag::Forward, case, cone: Some(cone), line: None }
    }

    fn side(next: usize, line: OrientedConeLine, case: Option<LadderCase>) -> Self {
        Decision { next, tag: StepTag::Side, case, cone: None, line: Some(line) }
    }
}

/// Classic Θk-routing: follow the edge of the cone containing `t`.
pub fn theta_step(view: &NeighborhoodView, t: Point) -> Result<usize, StepError> {
    let u = view.center_position();
    if u == t {
        return Err(StepError::Geometry("already at the target".into()));
    }
    let cone = cone_of_vector(t - u, view.k());
    view.successor(cone).ok_or(StepError::EmptyCone { vertex: view.center(), cone })
}

/// Follows the successor edge in the even cone `cone`.
pub fn forward_step(view: &NeighborhoodView, cone: ConeIndex) -> Result<usize, StepError> {
    if !cone.is_even() {
        return Err(StepError::Geometry(format!("forward step in odd cone {}", cone.0)));
    }
    view.successor(cone).ok_or(StepError::EmptyCone { vertex: view.center(), cone })
}

/// Next vertex of the corridor boundary along `line`.
///
/// The corridor is the union of the triangles crossed by the line; the
/// boundary path runs through their vertices on the closed positive side.
/// From the center, the walk starts at the farthest crossing edge incident
/// to it and turns through the triangles ahead until it meets a vertex on
/// the positive side.
pub fn side_step(view: &NeighborhoodView, line: &OrientedConeLine) -> Result<usize, StepError> {
    let v = view.center();
    let pv = view.center_position();
    if side_of_line(line, pv) == Side::Negative {
        return Err(StepError::Geometry(format!("vertex {v} is on the negative side of the line")));
    }
    let d = line.unit();
    let sv = line.signed_distance(pv);

    // crossing edge at v reaching farthest along the line; on-line centers
    // compare by direction instead
    let mut start: Option<(f64, f64, usize, Point)> = None;
    for (n, pn) in view.neighbors() {
        if side_of_line(line, pn) != Side::Negative {
            continue;
        }
        let sn = line.signed_distance(pn);
        let x = pv + (pn - pv) * (sv / (sv - sn));
        let key = (line.param(x), (pn - pv).dot(d) / pn.dist(pv));
        if start.is_none_or(|(a, b, _, _)| key > (a, b)) {
            start = Some((key.0, key.1, n, pn));
        }
    }
    let Some((_, _, mut n, mut pn)) = start else {
        return Err(StepError::CorridorExhausted { vertex: v });
    };
    for _ in 0..view_degree_bound(view) {
        let left = (pn - pv).cross(d) > 0.0;
        let Some(w) = view.third_vertex(n, left)? else {
            return Err(StepError::CorridorExhausted { vertex: v });
        };
        let pw = view.position(w)?;
        if side_of_line(line, pw) != Side::Negative {
            return Ok(w);
        }
        (n, pn) = (w, pw);
    }
    Err(StepError::Geometry(format!("side step from {v} turned around its fan")))
}

fn view_degree_bound(view: &NeighborhoodView) -> usize {
    view.neighbors().count() + 1
}

/// The two sides of `T_tu` incident to `t`, as lines traveled toward `t`,
/// paired with the successor of `u` in the adjacent positive cone.
struct NegativeState {
    cw_cone: ConeIndex,
    ccw_cone: ConeIndex,
    cw: Option<usize>,
    ccw: Option<usize>,
    cw_line: OrientedConeLine,
    ccw_line: OrientedConeLine,
    cw_out: bool,
    ccw_out: bool,
}

/// Line through `anchor` along the ray at angle `theta`, oriented toward
/// `target` (or along the ray if `target` lies on the normal).
fn line_toward(anchor: Point, theta: f64, from: Point, target: Point) -> OrientedConeLine {
    let line = OrientedConeLine::new(anchor, ray_direction_index(theta));
    if (target - from).dot(line.unit()) < 0.0 {
        line.reversed()
    } else {
        line
    }
}

fn negative_state(view: &NeighborhoodView, t: Point) -> Result<NegativeState, StepError> {
    let u = view.center_position();
    let cone = cone_of_vector(t - u, 6);
    let ttu = canonical_triangle(t, u, 6).map_err(|e| StepError::Geometry(e.to_string()))?;
    let theta = bisector_angle(ttu.cone, 6);
    let (cw_cone, ccw_cone) = (cone.offset(-1, 6), cone.offset(1, 6));
    let cw = view.successor(cw_cone);
    let ccw = view.successor(ccw_cone);
    let out = |w: Option<usize>| -> Result<bool, StepError> {
        Ok(match w {
            None => true,
            Some(w) => !ttu.contains(view.position(w)?, true),
        })
    };
    Ok(NegativeState {
        cw_cone,
        ccw_cone,
        cw,
        ccw,
        cw_line: line_toward(t, theta + PI / 6.0, u, t),
        ccw_line: line_toward(t, theta - PI / 6.0, u, t),
        cw_out: out(cw)?,
        ccw_out: out(ccw)?,
    })
}

/// Cases 1–3, shared by the memoryless and constant-memory ladders.
fn ladder_prefix(
    view: &NeighborhoodView,
    t: Point,
) -> Result<Result<Decision, NegativeState>, StepError> {
    let u = view.center_position();
    if u == t {
        return Err(StepError::Geometry("already at the target".into()));
    }
    let cone = cone_of_vector(t - u, 6);
    if cone.is_even() {
        let next = forward_step(view, cone)?;
        return Ok(Ok(Decision::forward(next, cone, Some(LadderCase::Positive))));
    }
    let st = negative_state(view, t)?;
    if st.cw_out {
        let next = side_step(view, &st.cw_line)?;
        return Ok(Ok(Decision::side(next, st.cw_line, Some(LadderCase::ClockwiseOut))));
    }
    if st.ccw_out {
        let next = side_step(view, &st.ccw_line)?;
        return Ok(Ok(Decision::side(next, st.ccw_line, Some(LadderCase::CounterclockwiseOut))));
    }
    Ok(Err(st))
}

/// Memoryless negative routing.
pub fn memoryless_negative_step(view: &NeighborhoodView, t: Point) -> Result<Decision, StepError> {
    let st = match ladder_prefix(view, t)? {
        Ok(d) => return Ok(d),
        Err(st) => st,
    };
    // Case 4: successor inside the smaller part of T_tu, the one along the
    // side of T_tu nearer to u
    let u = view.center_position();
    let dcw = st.cw_line.signed_distance(u).abs();
    let dccw = st.ccw_line.signed_distance(u).abs();
    // ties within the snapping tolerance go counterclockwise
    let (next, cone) =
        if dcw < dccw - EPS_GEOM { (st.cw, st.cw_cone) } else { (st.ccw, st.ccw_cone) };
    let next = next.ok_or(StepError::EmptyCone { vertex: view.center(), cone })?;
    Ok(Decision::forward(next, cone, Some(LadderCase::BothInside)))
}

/// Line from the source `s` along the side of `T_st` that meets the
/// boundary of `T_ts` closest to `s`.
pub fn source_line(s: Point, t: Point) -> Result<OrientedConeLine, StepError> {
    if s == t {
        return Err(StepError::Geometry("source equals target".into()));
    }
    let c = cone_of_vector(t - s, 6);
    let theta = bisector_angle(c, 6);
    let back = theta + PI;
    let mut best: Option<(f64, OrientedConeLine)> = None;
    // counterclockwise side first so it wins ties
    for (ray, other) in [(theta + PI / 6.0, back - PI / 6.0), (theta - PI / 6.0, back + PI / 6.0)] {
        let u = Point::polar(ray);
        let x = line_intersection(s, u, t, Point::polar(other))
            .ok_or_else(|| StepError::Geometry("parallel triangle sides".into()))?;
        let dist = (x - s).dot(u);
        if best.is_none_or(|(b, _)| dist < b - 1e-12) {
            best = Some((dist, OrientedConeLine::new(s, ray_direction_index(ray))));
        }
    }
    Ok(best.expect("two candidates").1)
}

/// Constant-memory negative routing: remembers the source and replaces
/// Case 4 by a side step along [`source_line`].
pub fn constmem_negative_step(
    view: &NeighborhoodView,
    t: Point,
    memory: &RoutingMemory,
) -> Result<Decision, StepError> {
    let RoutingMemory::Source(s) = *memory else {
        return Err(StepError::Geometry("constant-memory routing needs the source".into()));
    };
    if let Ok(d) = ladder_prefix(view, t)? {
        return Ok(d);
    }
    let line = source_line(s, t)?;
    let next = side_step(view, &line)?;
    Ok(Decision::side(next, line, Some(LadderCase::BothInside)))
}

/// Negative routing after Bose et al.: into the smaller sub-triangle when
/// neither is empty, along the side of an empty one otherwise (the larger
/// one if both are empty).
pub fn bose_negative_step(view: &NeighborhoodView, t: Point) -> Result<Decision, StepError> {
    let u = view.center_position();
    if u == t {
        return Err(StepError::Geometry("already at the target".into()));
    }
    let cone = cone_of_vector(t - u, 6);
    if cone.is_even() {
        let next = forward_step(view, cone)?;
        return Ok(Decision::forward(next, cone, Some(LadderCase::Positive)));
    }
    let st = negative_state(view, t)?;
    let dcw = st.cw_line.signed_distance(u).abs();
    let dccw = st.ccw_line.signed_distance(u).abs();
    // the sub-triangle along the nearer side is the smaller one
    let cw_smaller = dcw < dccw - EPS_GEOM;
    let side = match (st.cw_out, st.ccw_out) {
        (false, false) => None,
        (true, false) => Some((st.cw_line, LadderCase::ClockwiseOut)),
        (false, true) => Some((st.ccw_line, LadderCase::CounterclockwiseOut)),
        (true, true) if cw_smaller => Some((st.ccw_line, LadderCase::CounterclockwiseOut)),
        (true, true) => Some((st.cw_line, LadderCase::ClockwiseOut)),
    };
    if let Some((line, case)) = side {
        let next = side_step(view, &line)?;
        return Ok(Decision::side(next, line, Some(case)));
    }
    let (next, c) = if cw_smaller { (st.cw, st.cw_cone) } else { (st.ccw, st.ccw_cone) };
    let next = next.ok_or(StepError::EmptyCone { vertex: view.center(), cone: c })?;
    Ok(Decision {
        next,
        tag: StepTag::BoseNegative,
        case: Some(LadderCase::BothInside),
        cone: Some(c),
        line: None,
    })
}

//! Planar predicates, cone labelling and canonical triangles.
//!
//! Cones around an apex are labelled counterclockwise starting from cone 0,
//! whose bisector is the upward vertical ray. Cone `i` of a `k`-cone
//! partition covers the polar angles `[90° + 360°·i/k − 180°/k, 90° + 360°·i/k + 180°/k)`:
//! the clockwise boundary ray belongs to the cone, the counterclockwise one
//! does not.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute snapping tolerance for every predicate in the crate.
pub const EPS_GEOM: f64 = 1e-12;

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// A point (or a free vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at polar angle `theta`.
    pub fn polar(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Polar angle normalized to `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            // a single wrap; -0.0 maps to 0
            let w = a + TAU;
            if w >= TAU {
                0.0
            } else {
                w
            }
        } else {
            a
        }
    }

    /// Rotation by +90°.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Index of a cone in a `k`-cone partition. Even cones are the positive ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeIndex(pub usize);

impl ConeIndex {
    pub fn value(self) -> usize {
        self.0
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `self + delta (mod k)`.
    pub fn offset(self, delta: isize, k: usize) -> ConeIndex {
        ConeIndex((self.0 as isize + delta).rem_euclid(k as isize) as usize)
    }

    /// The cone opposite to this one (only meaningful for even `k`).
    pub fn opposite(self, k: usize) -> ConeIndex {
        ConeIndex((self.0 + k / 2) % k)
    }
}

/// Polar angle of the bisector of cone `i`.
pub fn bisector_angle(cone: ConeIndex, k: usize) -> f64 {
    FRAC_PI_2 + TAU * cone.0 as f64 / k as f64
}

/// Unit vector along the bisector of cone `i`.
pub fn bisector(cone: ConeIndex, k: usize) -> Point {
    Point::polar(bisector_angle(cone, k))
}

/// Cone of `apex` that contains `q`.
pub fn cone_index(apex: Point, q: Point, k: usize) -> Result<ConeIndex> {
    if k < 2 {
        return Err(Error::ContractViolation(format!("cone count {k} < 2")));
    }
    let d = q - apex;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(Error::DegenerateInput(format!("coincident points {apex}")));
    }
    Ok(cone_of_vector(d, k))
}

/// Cone containing the nonzero direction `d`.
pub(crate) fn cone_of_vector(d: Point, k: usize) -> ConeIndex {
    let width = TAU / k as f64;
    let start = FRAC_PI_2 - PI / k as f64;
    let f = ((d.angle() - start) / width).rem_euclid(k as f64);
    let r = f.round();
    let idx = if (f - r).abs() < EPS_GEOM {
        r as usize % k
    } else {
        f.floor() as usize % k
    };
    ConeIndex(idx)
}

/// Length of the projection of `apex → q` on the bisector of `cone`.
pub fn bisector_projection(apex: Point, q: Point, cone: ConeIndex, k: usize) -> Result<f64> {
    let d = q - apex;
    let b = bisector(cone, k);
    let proj = d.dot(b);
    let lateral = d.cross(b).abs();
    let half = (PI / k as f64).tan();
    if proj < -EPS_GEOM || lateral > half * proj.max(0.0) + EPS_GEOM {
        return Err(Error::ContractViolation(format!(
            "{q} is outside cone {} of {apex}",
            cone.0
        )));
    }
    Ok(proj.max(0.0))
}

/// The empty-region certificate `T_pq`: the part of the apex cone containing
/// `q` that is not farther than `q` along the cone bisector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalTriangle {
    pub apex: Point,
    pub cone: ConeIndex,
    pub k: usize,
    pub depth: f64,
}

pub fn canonical_triangle(p: Point, q: Point, k: usize) -> Result<CanonicalTriangle> {
    let cone = cone_index(p, q, k)?;
    let depth = (q - p).dot(bisector(cone, k)).max(0.0);
    Ok(CanonicalTriangle { apex: p, cone, k, depth })
}

impl CanonicalTriangle {
    /// Corners in counterclockwise order: apex, clockwise far corner,
    /// counterclockwise far corner.
    pub fn corners(&self) -> [Point; 3] {
        let b = bisector(self.cone, self.k);
        let half = (PI / self.k as f64).tan();
        let mid = self.apex + b * self.depth;
        let side = b.perp() * (half * self.depth);
        [self.apex, mid - side, mid + side]
    }

    /// Membership test; `closed` decides whether the boundary counts.
    pub fn contains(&self, w: Point, closed: bool) -> bool {
        let b = bisector(self.cone, self.k);
        let d = w - self.apex;
        let proj = d.dot(b);
        let lateral = d.cross(b).abs();
        let half = (PI / self.k as f64).tan() * proj;
        if closed {
            proj >= -EPS_GEOM && proj <= self.depth + EPS_GEOM && lateral <= half + EPS_GEOM
        } else {
            proj > EPS_GEOM && proj < self.depth - EPS_GEOM && lateral < half - EPS_GEOM
        }
    }

    pub fn area(&self) -> f64 {
        self.depth * self.depth * (PI / self.k as f64).tan()
    }
}

/// Which side of an [`OrientedConeLine`] a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Positive,
    On,
    Negative,
}

impl Side {
    /// Positive or on the line.
    pub fn is_closed_positive(self) -> bool {
        self != Side::Negative
    }
}

/// A line through `anchor` parallel to one of the six cone rays of a
/// six-cone partition, with a direction of travel.
///
/// `direction` is the index `m` of the travel direction at polar angle
/// `m·60°`. The positive side is the one bounding the even cones: below a
/// horizontal line, above a line of slope `±√3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedConeLine {
    pub anchor: Point,
    pub direction: u8,
}

impl OrientedConeLine {
    pub fn new(anchor: Point, direction: u8) -> Self {
        OrientedConeLine { anchor, direction: direction % 6 }
    }

    /// Same line, opposite travel direction.
    pub fn reversed(self) -> Self {
        OrientedConeLine::new(self.anchor, (self.direction + 3) % 6)
    }

    pub fn unit(&self) -> Point {
        Point::polar(self.direction as f64 * FRAC_PI_3)
    }

    /// Unit normal pointing into the positive side.
    pub fn positive_normal(&self) -> Point {
        match self.direction % 3 {
            0 => Point::new(0.0, -1.0),
            1 => Point::new(-SQRT_3 / 2.0, 0.5),
            _ => Point::new(SQRT_3 / 2.0, 0.5),
        }
    }

    /// Signed distance, positive on the positive side.
    pub fn signed_distance(&self, w: Point) -> f64 {
        (w - self.anchor).dot(self.positive_normal())
    }

    /// Coordinate of `w` along the travel direction.
    pub fn param(&self, w: Point) -> f64 {
        (w - self.anchor).dot(self.unit())
    }

    /// The even cone whose successors lie across the line from the
    /// vertices of a side-routing path along it.
    pub fn opposite_color(&self) -> ConeIndex {
        ConeIndex([0, 4, 2][(self.direction % 3) as usize])
    }
}

pub fn side_of_line(line: &OrientedConeLine, w: Point) -> Side {
    let s = line.signed_distance(w);
    if s > EPS_GEOM {
        Side::Positive
    } else if s < -EPS_GEOM {
        Side::Negative
    } else {
        Side::On
    }
}

/// Clockwise angle from `from` to `to`, in radians within `[0, 2π)`.
pub fn clockwise_angle(from: Point, to: Point) -> Result<f64> {
    if (from.x == 0.0 && from.y == 0.0) || (to.x == 0.0 && to.y == 0.0) {
        return Err(Error::DegenerateInput("zero direction vector".into()));
    }
    let a = from.angle() - to.angle();
    let a = if a < 0.0 { a + TAU } else { a };
    Ok(if a >= TAU { 0.0 } else { a })
}

/// Direction index (0..6) of a cone ray at polar angle `theta`, which must
/// be a multiple of 60° up to rounding.
pub(crate) fn ray_direction_index(theta: f64) -> u8 {
    ((theta / FRAC_PI_3).round() as i64).rem_euclid(6) as u8
}

/// Intersection of the lines `a + s·u` and `b + r·v`, or `None` if parallel.
pub(crate) fn line_intersection(a: Point, u: Point, b: Point, v: Point) -> Option<Point> {
    let den = u.cross(v);
    if den.abs() < 1e-15 {
        return None;
    }
    let s = (b - a).cross(v) / den;
    Some(a + u * s)
}

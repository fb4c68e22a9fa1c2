use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{ConeIndex, Point};
use crate::graph::ThetaGraph;

/// Coordinate frame in which a route is computed.
///
/// Routing on the odd half-Θ6-graph is routing on the even one after a
/// half turn: negating coordinates maps cone `i` onto cone `i + 3`.
/// Rotations keep orientation, so faces keep their left and right.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    #[default]
    Identity,
    HalfTurn,
}

impl Frame {
    /// Maps a point between the original and the routing frame (the map is
    /// an involution).
    pub fn point(self, p: Point) -> Point {
        match self {
            Frame::Identity => p,
            Frame::HalfTurn => -p,
        }
    }

    /// Maps a cone index of a six-cone partition between frames.
    pub fn cone(self, c: ConeIndex) -> ConeIndex {
        match self {
            Frame::Identity => c,
            Frame::HalfTurn => ConeIndex((c.0 + 3) % 6),
        }
    }
}

/// What a routing algorithm may remember between steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RoutingMemory {
    None,
    /// Coordinates of the source, in the routing frame.
    Source(Point),
}

/// The only access a step function has to the graph: the current vertex,
/// its neighbors with their coordinates, and its own cone successors.
#[derive(Clone, Copy)]
pub struct NeighborhoodView<'g> {
    graph: &'g ThetaGraph,
    center: usize,
    frame: Frame,
}

/// A step function asked about a vertex outside the current neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalityViolation {
    pub center: usize,
    pub vertex: usize,
}

impl fmt::Display for LocalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {} is not in the neighborhood of {}", self.vertex, self.center)
    }
}

impl<'g> NeighborhoodView<'g> {
    pub fn new(graph: &'g ThetaGraph, center: usize, frame: Frame) -> Self {
        NeighborhoodView { graph, center, frame }
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// Position of the center or one of its neighbors, in the routing frame.
    pub fn position(&self, v: usize) -> Result<Point, LocalityViolation> {
        if v == self.center || self.graph.has_edge(self.center, v) {
            Ok(self.frame.point(self.graph.point(v)))
        } else {
            Err(LocalityViolation { center: self.center, vertex: v })
        }
    }

    pub fn center_position(&self) -> Point {
        self.frame.point(self.graph.point(self.center))
    }

    /// Successor of the center in `cone` (a routing-frame cone index).
    pub fn successor(&self, cone: ConeIndex) -> Option<usize> {
        let c = if self.graph.k() == 6 { self.frame.cone(cone) } else { cone };
        self.graph.successor(self.center, c)
    }

    /// Neighbors with routing-frame coordinates.
    pub fn neighbors(&self) -> impl Iterator<Item = (usize, Point)> + '_ {
        self.graph
            .neighbors(self.center)
            .iter()
            .map(|&w| (w as usize, self.frame.point(self.graph.point(w as usize))))
    }

    /// Third vertex of the face on the left (or right) of the edge from the
    /// center to its neighbor `n`. Such a vertex is itself a neighbor.
    pub fn third_vertex(&self, n: usize, left: bool) -> Result<Option<usize>, LocalityViolation> {
        if !self.graph.has_edge(self.center, n) {
            return Err(LocalityViolation { center: self.center, vertex: n });
        }
        match self.graph.faces() {
            Ok(f) => Ok(f.third_vertex(self.center, n, left)),
            Err(_) => Ok(None),
        }
    }
}

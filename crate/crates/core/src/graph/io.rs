//! Point files and graph dumps.
//!
//! A point file holds one point per line as two whitespace-separated
//! decimals; lines starting with `#` and blank lines are ignored.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{Parity, ThetaGraph};

pub fn read_points(reader: impl BufRead) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let mut it = t.split_whitespace();
        let mut coord = |name: &str| -> Result<f64> {
            let tok = it.next().ok_or_else(|| bad(format!("missing {name} coordinate")))?;
            let v: f64 = tok.parse().map_err(|_| bad(format!("invalid number {tok:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(format!("non-finite coordinate {tok:?}")))
            }
        };
        let (x, y) = (coord("x")?, coord("y")?);
        if let Some(extra) = it.next() {
            return Err(bad(format!("unexpected token {extra:?}")));
        }
        out.push(Point::new(x, y));
    }
    Ok(out)
}

/// Writes `header` lines as comments, then the points with enough digits
/// to round-trip exactly.
pub fn write_points(mut w: impl Write, header: &[String], points: &[Point]) -> Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    for p in points {
        writeln!(w, "{:?} {:?}", p.x, p.y)?;
    }
    Ok(())
}

/// JSON form of a [`ThetaGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub points: Vec<[f64; 2]>,
    pub k: usize,
    pub parity: Parity,
    pub successors: Vec<Vec<Option<usize>>>,
}

impl GraphDump {
    pub fn from_graph(g: &ThetaGraph) -> Self {
        GraphDump {
            points: g.points().iter().map(|p| [p.x, p.y]).collect(),
            k: g.k(),
            parity: g.parity(),
            successors: g.successor_rows(),
        }
    }

    pub fn into_graph(self) -> Result<ThetaGraph> {
        let points = self.points.iter().map(|&[x, y]| Point::new(x, y)).collect();
        ThetaGraph::from_successors(points, self.k, self.parity, &self.successors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_theta_graph;

    #[test]
    fn parse_points() {
        let text = "# comment\n0 0\n\n  1.5\t-2e-3\n";
        let p = read_points(text.as_bytes()).unwrap();
        assert_eq!(p, vec![Point::new(0.0, 0.0), Point::new(1.5, -0.002)]);
    }

    #[test]
    fn parse_errors_carry_line() {
        for (text, line) in [("0 0\n1\n", 2), ("x 1\n", 1), ("1 2 3\n", 1), ("nan 0\n", 1)] {
            match read_points(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn points_round_trip() {
        let pts = vec![Point::new(0.1, 1.0 / 3.0), Point::new(-7.25, 1e-17)];
        let mut buf = Vec::new();
        write_points(&mut buf, &["hdr".into()], &pts).unwrap();
        assert_eq!(read_points(buf.as_slice()).unwrap(), pts);
    }

    #[test]
    fn dump_round_trip() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(0.2, 1.0), Point::new(1.0, 0.3)];
        let g = build_theta_graph(&pts, 6, Parity::Even).unwrap();
        let json = serde_json::to_string(&GraphDump::from_graph(&g)).unwrap();
        assert!(json.contains("\"parity\":\"even\""));
        let back: GraphDump = serde_json::from_str(&json).unwrap();
        let h = back.into_graph().unwrap();
        assert_eq!(h.successor_rows(), g.successor_rows());
        assert_eq!(h.edges(), g.edges());
    }
}

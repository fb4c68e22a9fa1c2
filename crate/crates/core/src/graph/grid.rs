//! Uniform bucket grid answering cone-nearest queries.
//!
//! A query scans the cells under the bounding box of the part of the cone
//! no deeper than a trial depth along the bisector. If that part holds no
//! point, the depth grows and the scan repeats.

use std::f64::consts::PI;

use crate::geometry::{bisector, cone_of_vector, ConeIndex, Point};

const NONE: u32 = u32::MAX;

pub(crate) struct GridIndex<'a> {
    points: &'a [Point],
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    h: f64,
    nx: usize,
    ny: usize,
    cell_start: Vec<u32>,
    items: Vec<u32>,
}

impl<'a> GridIndex<'a> {
    /// Buckets sized for about two points per cell.
    pub(crate) fn new(points: &'a [Point]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        if points.is_empty() {
            (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
        }
        let w = (x1 - x0).max(1e-9);
        let hgt = (y1 - y0).max(1e-9);
        let h = (2.0 * w * hgt / points.len().max(1) as f64)
            .sqrt()
            .max(w.max(hgt) / 4096.0);
        let nx = ((w / h).floor() as usize + 1).max(1);
        let ny = ((hgt / h).floor() as usize + 1).max(1);

        let mut counts = vec![0u32; nx * ny + 1];
        let cell_of = |p: &Point| {
            let cx = (((p.x - x0) / h) as usize).min(nx - 1);
            let cy = (((p.y - y0) / h) as usize).min(ny - 1);
            cy * nx + cx
        };
        for p in points {
            counts[cell_of(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let c = cell_of(p);
            items[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        GridIndex { points, x0, y0, x1, y1, h, nx, ny, cell_start: counts, items }
    }


    /// Calls `f` on the points of every cell meeting the box.
    fn for_cells_in(&self, lo: Point, hi: Point, mut f: impl FnMut(u32)) {
        if hi.x < self.x0 || hi.y < self.y0 || lo.x > self.x1 || lo.y > self.y1 {
            return;
        }
        let row = |y: f64| (((y - self.y0) / self.h).max(0.0) as usize).min(self.ny - 1);
        let col = |x: f64| (((x - self.x0) / self.h).max(0.0) as usize).min(self.nx - 1);
        let (c0, c1) = (col(lo.x), col(hi.x));
        for cy in row(lo.y)..=row(hi.y) {
            let start = cy * self.nx;
            let a = self.cell_start[start + c0] as usize;
            let b = self.cell_start[start + c1 + 1] as usize;
            for &q in &self.items[a..b] {
                f(q);
            }
        }
    }

    /// Cone successors of `points[p]` for the cones `keep` accepts, written
    /// to `out` (`u32::MAX` for an empty cone). The successor has the
    /// smallest bisector projection; ties are broken by `(projection, x, y)`.
    pub(crate) fn cone_successors(
        &self,
        p: usize,
        k: usize,
        keep: impl Fn(ConeIndex) -> bool,
        out: &mut [u32],
    ) {
        let apex = self.points[p];
        let e = 1e-9;
        let half = if k > 2 { (PI / k as f64).tan() } else { f64::INFINITY };
        let corners = [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ];
        for c in 0..k {
            out[c] = NONE;
            if !keep(ConeIndex(c)) {
                continue;
            }
            let cone = ConeIndex(c);
            let b = bisector(cone, k);
            let deepest = corners.iter().map(|&v| (v - apex).dot(b)).fold(0.0, f64::max);
            let mut depth = 3.0 * self.h;
            let mut best = f64::INFINITY;
            loop {
                let (lo, hi) = if k > 2 {
                    let mid = apex + b * depth;
                    let side = b.perp() * (half * depth);
                    let (u, v) = (mid - side, mid + side);
                    (
                        Point::new(apex.x.min(u.x).min(v.x) - e, apex.y.min(u.y).min(v.y) - e),
                        Point::new(apex.x.max(u.x).max(v.x) + e, apex.y.max(u.y).max(v.y) + e),
                    )
                } else {
                    (Point::new(self.x0, self.y0), Point::new(self.x1, self.y1))
                };
                self.for_cells_in(lo, hi, |q| {
                    let qp = self.points[q as usize];
                    let d = qp - apex;
                    let proj = d.dot(b);
                    if proj > best || proj > depth + e || proj < -e || q as usize == p {
                        return;
                    }
                    if d.cross(b).abs() > half * proj + e {
                        return;
                    }
                    let better = out[c] == NONE || {
                        let o = self.points[out[c] as usize];
                        (proj, qp.x, qp.y) < (best, o.x, o.y)
                    };
                    if better && cone_of_vector(d, k) == cone {
                        best = proj;
                        out[c] = q;
                    }
                });
                if out[c] != NONE || depth >= deepest {
                    break;
                }
                depth *= 4.0;
            }
        }
    }
}

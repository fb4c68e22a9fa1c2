use crate::geometry::{canonical_triangle, Point};

/// Brute-force check that no point other than `p` and `q` lies in the open
/// canonical triangle `T_pq` of a `k`-cone partition.
pub fn certify_empty_triangle(p: Point, q: Point, k: usize, points: &[Point]) -> bool {
    let Ok(t) = canonical_triangle(p, q, k) else {
        return false;
    };
    points
        .iter()
        .all(|&w| w == p || w == q || !t.contains(w, false))
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Whether segments `ab` and `cd` cross at a point interior to both.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let eps = 1e-14;
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps))
        && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))
}

/// All pairs of edges that properly cross. Quadratic in the edge count.
pub fn proper_crossings(points: &[Point], edges: &[(usize, usize)]) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_cross(points[a], points[b], points[c], points[d]) {
                out.push(((a, b), (c, d)));
            }
        }
    }
    out
}

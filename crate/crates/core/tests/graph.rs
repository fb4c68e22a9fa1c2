mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use theta_route::geometry::{canonical_triangle, cone_index, ConeIndex, Point};
use theta_route::graph::{
    build_theta_graph, build_theta_graph_naive, certify_empty_triangle, extract_faces,
    proper_crossings, read_points, union_is_theta6, write_points, GraphDump, Parity, ThetaGraph,
};
use theta_route::Error;

/// Edges `pq` with `q` in a kept cone of `p` and nothing else in the open
/// canonical triangle, by an O(n³) scan.
fn brute_force_edges(points: &[Point], k: usize, parity: Parity) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, &p) in points.iter().enumerate() {
        for (j, &q) in points.iter().enumerate() {
            if i == j || !parity.keeps(cone_index(p, q, k).unwrap()) {
                continue;
            }
            let t = canonical_triangle(p, q, k).unwrap();
            if points.iter().enumerate().all(|(w, &x)| w == i || w == j || !t.contains(x, false)) {
                out.insert((i.min(j), i.max(j)));
            }
        }
    }
    out
}

fn edge_set(g: &ThetaGraph) -> BTreeSet<(usize, usize)> {
    g.edges().into_iter().collect()
}

fn hull_size(points: &[Point]) -> usize {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut hull: Vec<Point> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        for &q in &p {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(q - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(q);
        }
        hull.pop();
        if pass == 0 {
            p.reverse();
        }
    }
    hull.len()
}

#[test]
fn two_points() {
    let g = build_theta_graph(&[Point::new(0.0, 0.0), Point::new(0.0, 1.0)], 6, Parity::All)
        .unwrap();
    assert_eq!(g.successor(0, ConeIndex(0)), Some(1));
    assert_eq!(g.successor(1, ConeIndex(3)), Some(0));
    let others = (0..2)
        .flat_map(|v| (0..6).map(move |c| (v, c)))
        .filter(|&(v, c)| g.successor(v, ConeIndex(c)).is_some())
        .count();
    assert_eq!(others, 2);
}

#[test]
fn nearer_point_blocks_farther() {
    let pts = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(0.0, 2.0)];
    let g = build_theta_graph(&pts, 6, Parity::Even).unwrap();
    assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
}

#[test]
fn degenerate_inputs_are_rejected() {
    let p = Point::new(0.5, 0.5);
    assert!(matches!(build_theta_graph(&[p, p], 6, Parity::All), Err(Error::DegenerateInput(_))));
    assert!(build_theta_graph(&[p], 1, Parity::All).is_err());
    let nan = Point::new(f64::NAN, 0.0);
    assert!(build_theta_graph(&[p, nan], 6, Parity::All).is_err());
    assert!(build_theta_graph(&[], 6, Parity::All).unwrap().is_empty());
}

#[test]
fn edges_match_empty_triangle_oracle() {
    for seed in 0..30 {
        let pts = common::uniform(20 + seed as usize, seed);
        for k in [3, 4, 6, 8] {
            for parity in [Parity::All, Parity::Even, Parity::Odd] {
                let g = build_theta_graph(&pts, k, parity).unwrap();
                assert_eq!(edge_set(&g), brute_force_edges(&pts, k, parity), "seed {seed} k {k}");
                assert_eq!(edge_set(&g), edge_set(&build_theta_graph_naive(&pts, k, parity).unwrap()));
            }
        }
    }
}

#[test]
fn successor_edges_are_certified_empty() {
    let pts = common::poisson(200.0, 1.0, 5);
    let g = common::theta6(&pts);
    for v in 0..g.len() {
        for c in 0..6 {
            if let Some(q) = g.successor(v, ConeIndex(c)) {
                assert!(certify_empty_triangle(pts[v], pts[q], 6, &pts));
            }
        }
    }
    // a blocked pair is not certified
    let blocked = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(0.05, 0.5)];
    assert!(!certify_empty_triangle(blocked[0], blocked[1], 6, &blocked));
}

#[test]
fn halves_union_to_theta6() {
    for seed in 0..20 {
        let pts = common::uniform(50, 1000 + seed);
        let full = common::theta6(&pts);
        let even = build_theta_graph(&pts, 6, Parity::Even).unwrap();
        let odd = build_theta_graph(&pts, 6, Parity::Odd).unwrap();
        assert!(union_is_theta6(&even, &odd, &full).unwrap());
        assert_eq!(edge_set(full.half(Parity::Even).unwrap()), edge_set(&even));
        // drop one successor of the full graph
        let mut rows = full.successor_rows();
        let (v, c) = (0..50)
            .flat_map(|v| (0..6).map(move |c| (v, c)))
            .find(|&(v, c)| rows[v][c].is_some())
            .unwrap();
        let q = rows[v][c].take().unwrap();
        let broken = ThetaGraph::from_successors(pts.clone(), 6, Parity::All, &rows).unwrap();
        // the edge may survive through q's own successor
        let survives = broken.has_edge(v, q);
        assert_eq!(union_is_theta6(&even, &odd, &broken).unwrap(), survives);
    }
    let one = common::theta6(&[Point::new(0.0, 0.0)]);
    assert!(union_is_theta6(one.half(Parity::Even).unwrap(), one.half(Parity::Odd).unwrap(), &one)
        .unwrap());
    let other = common::theta6(&[Point::new(1.0, 0.0)]);
    assert!(matches!(
        union_is_theta6(&one, &one, &other),
        Err(Error::ContractViolation(_))
    ));
}

#[test]
fn halves_are_plane_triangulations() {
    for seed in 0..10 {
        let pts = common::uniform(100, 50 + seed);
        for parity in [Parity::Even, Parity::Odd] {
            let g = build_theta_graph(&pts, 6, parity).unwrap();
            assert!(proper_crossings(&pts, &g.edges()).is_empty());
            let f = extract_faces(&g).unwrap();
            // every bounded face is a triangle, and the count respects
            // Euler's formula for the edges present
            let n = pts.len();
            assert_eq!(f.len() + n, g.edge_count() + 1, "seed {seed}");
            assert!(f.len() <= 2 * n - 2 - hull_size(&pts));
        }
    }
    // the full graph is not plane in general
    let g = common::theta6(&common::uniform(100, 3));
    assert!(!proper_crossings(g.points(), &g.edges()).is_empty());
}

#[test]
fn small_face_counts() {
    let tri = [Point::new(0.0, 0.0), Point::new(1.0, 0.1), Point::new(0.4, 0.9)];
    let g = build_theta_graph(&tri, 6, Parity::Even).unwrap();
    assert_eq!(extract_faces(&g).unwrap().len(), 1);
    let quad = [Point::new(0.0, 0.0), Point::new(1.0, 0.1), Point::new(1.1, 1.0), Point::new(0.1, 0.9)];
    let g = build_theta_graph(&quad, 6, Parity::Even).unwrap();
    let f = extract_faces(&g).unwrap();
    assert_eq!(f.len(), 2);
    let shared: Vec<_> = g.edges().into_iter().filter(|&(a, b)| {
        matches!(f.edge_faces(a, b), Some((Some(_), Some(_))))
    }).collect();
    assert_eq!(shared.len(), 1);
}

#[test]
fn io_round_trips() {
    let pts = common::uniform(30, 9);
    let mut buf = Vec::new();
    write_points(&mut buf, &["seed 9".to_string()], &pts).unwrap();
    let back = read_points(&buf[..]).unwrap();
    assert_eq!(back, pts);
    let err = read_points("0 0\n1 x\n".as_bytes()).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    let g = build_theta_graph(&pts, 6, Parity::Odd).unwrap();
    let json = serde_json::to_string(&GraphDump::from_graph(&g)).unwrap();
    let dump: GraphDump = serde_json::from_str(&json).unwrap();
    let g2 = dump.into_graph().unwrap();
    assert_eq!(g2.parity(), Parity::Odd);
    assert_eq!(g2.successor_rows(), g.successor_rows());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Dropping a point into an edge's canonical triangle removes the edge.
    #[test]
    fn blocking_removes_edges(seed in 0u64..1000, pick in 0usize..1000, a in 0.1..0.9f64, b in 0.1..0.9f64) {
        let pts = common::uniform(25, seed);
        let g = &build_theta_graph(&pts, 6, Parity::All).unwrap();
        let succ: Vec<(usize, usize)> = (0..pts.len())
            .flat_map(|v| (0..6).filter_map(move |c| Some(v).zip(g.successor(v, ConeIndex(c)))))
            .collect();
        let (p, q) = succ[pick % succ.len()];
        let t = canonical_triangle(pts[p], pts[q], 6).unwrap();
        let [apex, cw, ccw] = t.corners();
        // a point strictly inside, by barycentric weights
        let (u, v) = (a * 0.5, b * 0.5);
        let w = apex + (cw - apex) * u + (ccw - apex) * v;
        prop_assume!(t.contains(w, false));
        let mut more = pts.clone();
        more.push(w);
        let g2 = build_theta_graph(&more, 6, Parity::All).unwrap();
        let c = cone_index(pts[p], pts[q], 6).unwrap();
        prop_assert_ne!(g2.successor(p, c), Some(q));
        prop_assert!(!certify_empty_triangle(pts[p], pts[q], 6, &more));
    }
}

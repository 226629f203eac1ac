use std::collections::BTreeSet;
use std::fs;

use origami_core::classics::{
    descendants, pleat_crimp_fold_steps, pleat_fold, pleat_fold_steps, rabbit_ear_fold, squash_fold_steps, ClassicError,
    CrimpVariant, LayerPair,
};
use origami_core::engine::bring_ray;
use origami_core::script::run_source;
use origami_core::{
    fold, graph_equal, AbstractOrigami, FaceId, FoldSpec, Graph, OrigamiError, Point, Ray,
};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    fs::read_to_string(path).unwrap()
}

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn ray(a: Point, b: Point) -> Ray {
    Ray::new(a, b).unwrap()
}

fn ids(v: &[u64]) -> BTreeSet<FaceId> {
    v.iter().map(|&n| FaceId(n)).collect()
}

fn squash_o5() -> AbstractOrigami {
    let text = fixture("squash.ori");
    run_source(&text).unwrap().snapshot(5).unwrap().clone()
}

// I, G and F of the squash fixture
const I: Point = Point { x: 0.5, y: 0.5 };
const G: Point = Point { x: 1.0, y: 0.5 };
const F: Point = Point { x: 0.5, y: 0.0 };

#[test]
fn squash_keeps_adjacency_and_reaches_o10() {
    let o5 = squash_o5();
    assert_eq!(o5.face_ids(), ids(&[4, 6, 10, 11, 14, 15]));
    let steps = squash_fold_steps(&o5, LayerPair::new(FaceId(10), FaceId(11)), ray(I, G), ray(F, I)).unwrap();
    assert_eq!(steps.len(), 5);
    let o10 = &steps.last().unwrap().1;
    assert!(graph_equal(&o5.adjacency_graph(), &o10.adjacency_graph()));
    assert!(o10.adjacency_graph().has_edge(FaceId(10), FaceId(11)));
    assert!(o10.cut_register().is_empty());
    for (_, s) in &steps {
        assert!(s.check_superposition_acyclic());
        assert!((s.total_area() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn glue_fails_before_the_third_squash_fold() {
    let o5 = squash_o5();
    let (below, above) = (FaceId(10), FaceId(11));
    let cut = o5.cut_edge(below, above).unwrap();
    let one = fold(&cut, &FoldSpec::valley(ray(I, G)).targets(descendants(&cut, &[below]))).unwrap();
    let two = fold(&one, &FoldSpec::valley(ray(F, I)).targets(descendants(&one, &[above]))).unwrap();
    assert!(matches!(two.glue_edges(), Err(OrigamiError::GlueMismatch { .. })));
    let both = descendants(&two, &[below, above]);
    let three = fold(&two, &FoldSpec::valley(bring_ray(F, G).unwrap()).targets(both)).unwrap();
    assert!(three.glue_edges().unwrap().cut_register().is_empty());
}

#[test]
fn squash_rays_must_share_a_point() {
    let o5 = squash_o5();
    let err = squash_fold_steps(&o5, LayerPair::new(FaceId(10), FaceId(11)), ray(I, G), ray(F, G)).unwrap_err();
    assert!(matches!(err, ClassicError::Precondition(_)));
}

#[test]
fn rabbit_ear_checks_its_rays() {
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let (f, a, h, d) = (p(0.5, 0.5), p(0.0, 0.0), p(0.0, 0.5), p(0.0, 1.0));
    let pair = LayerPair::new(FaceId(2), FaceId(3));
    let err = rabbit_ear_fold(&sq, pair, ray(f, a), ray(p(0.4, 0.5), h), ray(f, d)).unwrap_err();
    assert!(matches!(err, ClassicError::Precondition(_)));
    // no right angle at R for P, Q, R
    let err = rabbit_ear_fold(&sq, pair, ray(f, a), ray(f, p(0.0, 0.4)), ray(f, d)).unwrap_err();
    assert!(matches!(err, ClassicError::Precondition(_)));
}

#[test]
fn pleat_on_the_unit_square() {
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let first = ray(p(2.0 / 3.0, 0.0), p(2.0 / 3.0, 1.0));
    let second = ray(p(5.0 / 6.0, 0.0), p(5.0 / 6.0, 1.0));
    let ao = pleat_fold(&sq, first, second, None).unwrap();
    assert_eq!(ao.face_ids(), ids(&[2, 6, 7]));
    assert_eq!(ao.layer_order(), &[FaceId(2), FaceId(7), FaceId(6)]);
    // the strip x in [1/2, 2/3] is three layers thick
    let xs = |id| {
        let f = ao.face(FaceId(id)).unwrap();
        let (lo, hi) = f.polygon.bounds();
        (lo.x, hi.x)
    };
    let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12;
    assert!(close(xs(2), (0.0, 2.0 / 3.0)));
    assert!(close(xs(6), (0.5, 2.0 / 3.0)));
    assert!(close(xs(7), (0.5, 2.0 / 3.0)));
    assert!((ao.total_area() - 1.0).abs() < 1e-12);
    let kinds: Vec<_> = ao.adjacency().map(|e| (e.a.0, e.b.0, e.kind.to_string())).collect();
    assert!(kinds.contains(&(2, 6, "valley".to_string())));
    assert!(kinds.contains(&(6, 7, "mountain".to_string())));
}

#[test]
fn pleat_second_line_must_cross_the_moved_stack() {
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let first = ray(p(2.0 / 3.0, 0.0), p(2.0 / 3.0, 1.0));
    let second = ray(p(0.1, 0.0), p(0.1, 1.0));
    let err = pleat_fold(&sq, first, second, None).unwrap_err();
    assert!(matches!(err, ClassicError::Precondition(_)));
}

#[test]
fn pleat_fold_records_two_steps() {
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let steps = pleat_fold_steps(&sq, ray(p(0.5, 0.0), p(0.5, 1.0)), ray(p(0.75, 0.0), p(0.75, 1.0)), None).unwrap();
    let labels: Vec<_> = steps.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, vec!["valley fold", "mountain fold faces {3}"]);
}

#[test]
fn pleat_crimp_variants_differ_only_in_layers() {
    let prep = fixture("pleat_crimp_outside.ori");
    let prep: String = prep.lines().filter(|l| !l.starts_with("pleat_crimp") && !l.starts_with("assert")).collect::<Vec<_>>().join("\n");
    let o7 = run_source(&prep).unwrap().last().clone();
    let (g, pp, q) = (p(0.5, 0.5), p(0.0, 0.3), p(0.0, 0.6));
    let pair = LayerPair::new(FaceId(8), FaceId(12));
    let run = |v| pleat_crimp_fold_steps(&o7, pair, ray(g, pp), ray(g, q), v).unwrap().last().unwrap().1.clone();
    let (out, inn) = (run(CrimpVariant::Outside), run(CrimpVariant::Inside));
    assert!(graph_equal(&out.adjacency_graph(), &o7.adjacency_graph()));
    assert!(graph_equal(&inn.adjacency_graph(), &o7.adjacency_graph()));
    assert_ne!(out.superposition_graph(), inn.superposition_graph());
    assert!(out.cut_register().is_empty() && inn.cut_register().is_empty());
}

#[test]
fn pleat_crimp_needs_adjacent_faces() {
    let sq = AbstractOrigami::init_square(["A", "B", "C", "D"], None).unwrap();
    let ao = origami_core::unfold(&fold(&sq, &FoldSpec::valley(ray(p(0.5, 0.0), p(0.5, 1.0)))).unwrap()).unwrap();
    let ao = origami_core::unfold(&fold(&ao, &FoldSpec::valley(ray(p(0.0, 0.5), p(1.0, 0.5)))).unwrap()).unwrap();
    // 4 and 7 only meet at the centre point
    let pair = LayerPair::new(FaceId(4), FaceId(7));
    let r = pleat_crimp_fold_steps(&ao, pair, ray(p(0.2, 0.0), p(0.2, 1.0)), ray(p(0.1, 0.0), p(0.1, 1.0)), CrimpVariant::Outside);
    assert!(matches!(r, Err(ClassicError::Precondition(_))));
}

fn oracle_cyclic(nodes: u64, edges: &[(u64, u64)]) -> bool {
    let mut g = DiGraph::<(), ()>::new();
    let idx: Vec<_> = (0..nodes).map(|_| g.add_node(())).collect();
    for &(a, b) in edges {
        g.add_edge(idx[a as usize], idx[b as usize], ());
    }
    is_cyclic_directed(&g)
}

proptest! {
    #[test]
    fn acyclicity_matches_petgraph(n in 2u64..8, raw in prop::collection::vec((0u64..8, 0u64..8), 0..14)) {
        let edges: Vec<(u64, u64)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
        let g = Graph {
            directed: true,
            nodes: (0..n).map(FaceId).collect(),
            edges: edges.iter().map(|&(a, b)| (FaceId(a), FaceId(b))).collect(),
        };
        prop_assert_eq!(g.is_acyclic(), !oracle_cyclic(n, &edges));
    }
}

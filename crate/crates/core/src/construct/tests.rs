use super::*;
use crate::algorithms::verify_hamilton_cycle;
use crate::construct::decompose::tests::grid_points;
use crate::geometry::sample_poisson;
use crate::hitting::{hitting_radius, MonotoneProperty};
use crate::algorithms::SearchBudget;

fn rules(graph: SquareGraph, blowup: usize, m: usize) -> SquareRules {
    SquareRules { square_graph: graph, join: 1, blowup, min_points: m }
}

fn assert_disjoint_cover(walks: &[AnchoredWalk], must_cover: &[usize]) {
    let mut seen = std::collections::HashSet::new();
    for w in walks {
        for &v in &w.vertices {
            assert!(seen.insert(v), "vertex {v} on two walks");
        }
    }
    for v in must_cover {
        assert!(seen.contains(v), "vertex {v} not covered");
    }
}

#[test]
fn tessellation_side_follows_r0() {
    let ps = sample_poisson(BoxSpec::planar(std::f64::consts::PI.exp()).unwrap(), 3);
    let t = tessellate(&ps, &ConstructionParams::default(), Norm::EUCLIDEAN).unwrap();
    assert!((t.side() - 0.25).abs() < 1e-12);
    let t = tessellate(&ps, &ConstructionParams { square_side: Some(0.5), ..Default::default() }, Norm::EUCLIDEAN).unwrap();
    assert_eq!(t.side(), 0.5);
    assert!(tessellate(&ps, &ConstructionParams { c: 2, ..Default::default() }, Norm::EUCLIDEAN).is_err());
}

#[test]
fn component_bound_and_budget() {
    assert_eq!(ConstructionParams { c: 10, ..Default::default() }.component_bound(2), 453);
    assert!(!ConstructionParams::default().budget_inequality_holds(2));
    // 2U + 2 + 2001^2 is about 1.03e7
    assert!(!ConstructionParams::asymptotic().budget_inequality_holds(2));
    assert!(ConstructionParams { c: 1000, min_points: 11_000_000, square_side: None }.budget_inequality_holds(2));
}

#[test]
fn empty_decomposition_passes_vacuously() {
    let (ps, t) = grid_points(4, &[5; 16]);
    let dec = decompose(&t, &rules(SquareGraph::euclidean(2, 2.0), 8, 4));
    assert!(dec.components.is_empty());
    let checks = check_structural_lemmas(&dec, &t, &ConstructionParams::default(), ps.bounds(), Norm::EUCLIDEAN);
    assert!(checks.iter().all(|c| c.held), "{checks:?}");
}

/// 9x9 grid, full everywhere except an empty ring of width two around a
/// centre square holding two points.
fn ring_fixture() -> (PointSet, Tessellation, SeaDecomposition) {
    let mut counts = vec![4; 81];
    for y in 2..7 {
        for x in 2..7 {
            counts[y * 9 + x] = 0;
        }
    }
    counts[4 * 9 + 4] = 2;
    let (ps, t) = grid_points(9, &counts);
    let dec = decompose(&t, &rules(SquareGraph::euclidean(2, 2.0), 3, 3));
    (ps, t, dec)
}

#[test]
fn far_diameter_violation_is_reported() {
    let mut counts = vec![4; 121];
    for y in 2..9 {
        for x in 2..9 {
            counts[y * 11 + x] = 0;
        }
    }
    counts[5 * 11 + 4] = 1;
    counts[5 * 11 + 6] = 1;
    let (ps, t) = grid_points(11, &counts);
    let dec = decompose(&t, &rules(SquareGraph::euclidean(2, 2.0), 3, 3));
    assert_eq!(dec.components.len(), 1);
    assert_eq!(dec.components[0].far.len(), 9);
    let checks = check_structural_lemmas(&dec, &t, &ConstructionParams::default(), ps.bounds(), Norm::EUCLIDEAN);
    let far = checks.iter().find(|c| c.name == "far_diameter").unwrap();
    assert!(!far.held);
    assert_eq!(far.violations, 1);
}

#[test]
fn far_region_becomes_one_anchored_walk() {
    let (ps, t, dec) = ring_fixture();
    let g = build_gilbert(&ps, 3.2, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    let walks = stitch_component(&g, &t, &dec, 0, &mut pool).unwrap();
    let centre: Vec<usize> = t.points_in(4 * 9 + 4).to_vec();
    assert_eq!(walks.len(), 1);
    assert_disjoint_cover(&walks, &centre);
    let w = &walks[0];
    assert!(dec.in_sea(w.anchor));
    assert_eq!(t.square_of(w.vertices[0]), w.anchor);
    assert_eq!(t.square_of(*w.vertices.last().unwrap()), w.anchor);
    for pair in w.vertices.windows(2) {
        assert!(g.has_edge(pair[0], pair[1]));
    }
    assert!(w.vertices.iter().all(|&v| pool.is_used(v)));
}

#[test]
fn close_square_with_one_point() {
    let mut counts = vec![4; 49];
    counts[24] = 1;
    let (ps, t) = grid_points(7, &counts);
    let dec = decompose(&t, &rules(SquareGraph::euclidean(2, 2.0), 2, 3));
    let comp = &dec.components[0];
    assert_eq!(comp.close, vec![24]);
    assert!(comp.far.is_empty());
    assert_eq!(comp.cutoff_outside(), 0);
    let g = build_gilbert(&ps, 2.5, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    let walks = stitch_component(&g, &t, &dec, 0, &mut pool).unwrap();
    assert_eq!(walks.len(), 1);
    let x = t.points_in(24)[0];
    let w = &walks[0].vertices;
    assert_eq!(w.len(), 3);
    assert_eq!(w[1], x);
    assert_eq!(t.square_of(w[0]), walks[0].anchor);
    assert_eq!(t.square_of(w[2]), walks[0].anchor);
}

#[test]
fn empty_cutoff_gives_no_walks() {
    let mut counts = vec![4; 49];
    counts[24] = 0;
    let (ps, t) = grid_points(7, &counts);
    let dec = decompose(&t, &rules(SquareGraph::euclidean(2, 2.0), 2, 3));
    let g = build_gilbert(&ps, 2.5, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    assert!(stitch_component(&g, &t, &dec, 0, &mut pool).unwrap().is_empty());
    let (walks, picks) = stitch_component_knn(&g, &t, &dec, 0, &mut pool).unwrap();
    assert!(walks.is_empty());
    assert_eq!(picks, 0);
}

#[test]
fn tree_cycle_on_a_single_square() {
    let (ps, t) = grid_points(1, &[5]);
    let dec = decompose(&t, &rules(SquareGraph::lattice(2), 1, 3));
    let g = build_gilbert(&ps, 1.0, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    let cycle = build_tree_cycle(&g, &t, &dec, &mut pool, &[]).unwrap();
    assert_eq!(cycle.order().len(), 5);
    assert!(verify_hamilton_cycle(&g, &cycle));
}

#[test]
fn tree_cycle_on_a_full_grid() {
    let (ps, t) = grid_points(3, &[3; 9]);
    let dec = decompose(&t, &rules(SquareGraph::lattice(2), 1, 3));
    let root = 0;
    let children = sea_spanning_tree(&t, &dec, root).unwrap();
    let tour = tree_tour(&children, root);
    assert_eq!(tour.len(), 2 * 8 + 1);
    assert_eq!(tour[0], root);
    assert_eq!(*tour.last().unwrap(), root);
    let g = build_gilbert(&ps, 1.8, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    let cycle = build_tree_cycle(&g, &t, &dec, &mut pool, &[]).unwrap();
    assert!(verify_hamilton_cycle(&g, &cycle));
}

#[test]
fn tree_cycle_needs_a_point_per_visit() {
    let (ps, t) = grid_points(2, &[1; 4]);
    let dec = decompose(&t, &rules(SquareGraph::lattice(2), 1, 1));
    let g = build_gilbert(&ps, 1.8, Norm::EUCLIDEAN).unwrap();
    let mut pool = VertexPool::new(&t);
    let err = build_tree_cycle(&g, &t, &dec, &mut pool, &[]).unwrap_err();
    assert!(err.0.contains("visited"), "{}", err.0);
}

fn two_connected_radius(ps: &PointSet) -> f64 {
    hitting_radius(ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, SearchBudget::default())
        .unwrap()
        .radius
}

#[test]
fn default_constants_leave_no_sea_at_desk_scale() {
    for seed in 0..4 {
        let ps = sample_poisson(BoxSpec::planar(500.0).unwrap(), seed);
        let r = 3.0 * two_connected_radius(&ps);
        let rep = construct_hamilton(&ps, r, &ConstructionParams::default(), Norm::EUCLIDEAN).unwrap();
        let (stage, why) = rep.failure().unwrap();
        assert_eq!(stage, Stage::Decompose);
        assert!(why.contains("sea empty"));
        assert!(!rep.warnings.is_empty());
    }
}

#[test]
fn larger_squares_give_verified_cycles() {
    let mut cycles = 0;
    for seed in 0..10 {
        let ps = sample_poisson(BoxSpec::planar(500.0).unwrap(), seed);
        let r = 3.0 * two_connected_radius(&ps);
        let params = ConstructionParams { square_side: Some(r / 2.0), ..Default::default() };
        let rep = construct_hamilton(&ps, r, &params, Norm::EUCLIDEAN).unwrap();
        if let Some(cycle) = rep.cycle() {
            let g = build_gilbert(&ps, r, Norm::EUCLIDEAN).unwrap();
            assert!(verify_hamilton_cycle(&g, &cycle));
            cycles += 1;
        }
        let again = construct_hamilton(&ps, r, &params, Norm::EUCLIDEAN).unwrap();
        assert_eq!(rep, again);
        let back = ConstructionReport::from_json(&rep.to_json().unwrap()).unwrap();
        assert_eq!(rep, back);
    }
    assert!(cycles >= 8, "only {cycles} of 10 runs produced a cycle");
}

#[test]
fn disconnected_graph_never_yields_a_cycle() {
    let ps = sample_poisson(BoxSpec::planar(500.0).unwrap(), 7);
    let rc = hitting_radius(&ps, MonotoneProperty::Connected, Norm::EUCLIDEAN, SearchBudget::default()).unwrap().radius;
    let r = rc * (1.0 - 1e-9);
    let params = ConstructionParams { square_side: Some(2.0), ..Default::default() };
    let rep = construct_hamilton(&ps, r, &params, Norm::EUCLIDEAN).unwrap();
    assert!(rep.cycle().is_none());
    assert!(rep.failure().is_some());
}

#[test]
fn knn_complete_graph_gives_a_cycle() {
    let ps = sample_poisson(BoxSpec::planar(30.0).unwrap(), 2);
    let rep = construct_hamilton_knn(&ps, ps.len() - 1, &KnnParams::default(), Norm::EUCLIDEAN).unwrap();
    let cycle = rep.cycle().expect("complete graph");
    let g = undirect(&build_knn_directed(&ps, ps.len() - 1, Norm::EUCLIDEAN).unwrap());
    assert!(verify_hamilton_cycle(&g, &cycle));
}

#[test]
fn knn_desk_runs_are_sound_and_isoperimetric() {
    for seed in 0..5 {
        let ps = sample_poisson(BoxSpec::planar(2000.0).unwrap(), seed);
        let k = crate::hitting::hitting_k(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, SearchBudget::default())
            .unwrap()
            .k;
        for side in [None, Some(2.0)] {
            let params = KnnParams { square_side: side, ..Default::default() };
            let rep = construct_hamilton_knn(&ps, k, &params, Norm::EUCLIDEAN).unwrap();
            if let Some(cycle) = rep.cycle() {
                let g = undirect(&build_knn_directed(&ps, k, Norm::EUCLIDEAN).unwrap());
                assert!(verify_hamilton_cycle(&g, &cycle));
            } else {
                assert!(rep.failure().is_some());
            }
            for c in rep.components.as_deref().unwrap_or(&[]) {
                let u = c.size as f64;
                assert!(c.cutoff_outside as f64 <= u * u / 2.0 + u);
            }
        }
    }
}

#[test]
fn knn_isoperimetric_check_on_a_fixture() {
    let (_, t, dec) = ring_fixture();
    let checks = check_knn_structure(&dec, &t, &KnnParams::default());
    let iso = checks.iter().find(|c| c.name == "isoperimetric").unwrap();
    assert!(iso.held);
    assert_eq!(iso.evaluated, 1);
}

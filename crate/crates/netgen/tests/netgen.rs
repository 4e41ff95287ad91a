use forms::{DualOptions, PressurePairing};
use netgen::*;
use netgraph::{EdgeKind, SpatialGraph};
use proptest::prelude::*;
use solvers::SpectrumOptions;
use spaces::DualNorm;

fn murray_residual(g: &SpatialGraph) -> f64 {
    let mut worst: f64 = 0.0;
    for v in g.internal_vertices() {
        let parent = g.edges_in(v)[0];
        let r3 = g.edge(parent).radius1.powi(3);
        let kids: f64 = g.edges_out(v).iter().map(|&e| g.edge(e).radius1.powi(3)).sum();
        worst = worst.max((kids / r3 - 1.0).abs());
    }
    worst
}

#[test]
fn murray_daughter_radii() {
    let (a, b) = murray_daughters(1.0, 1.0);
    assert!((a - 0.7937).abs() < 1e-4 && a == b);
    let (d1, d2) = murray_daughters(1.0, 0.5);
    assert!((d2 - 0.9615).abs() < 1e-4, "{d2}");
    assert!((d1 - 0.4807).abs() < 1e-4, "{d1}");
}

#[test]
fn murray_tree_structure() {
    let single = murray_tree(&MurrayTreeSpec::new(1, 1.0, 1e-3)).unwrap();
    assert_eq!(single.num_edges(), 1);
    assert!((single.edge(0).length - 1e-2).abs() < 1e-15);

    for n in 1..=6 {
        for gamma in [0.25, 0.5, 1.0] {
            let g = murray_tree(&MurrayTreeSpec::new(n, gamma, 1e-3)).unwrap();
            assert_eq!(g.num_edges(), (1 << n) - 1);
            assert_eq!(g.boundary_vertices().len(), (1 << (n - 1)) + 1);
            assert!(g.is_boundary(0));
            assert!(murray_residual(&g) < 1e-12);
            for e in g.edges() {
                assert!((e.length - 10.0 * e.radius1).abs() < 1e-15);
                assert_eq!(e.ratio, 3.0);
                assert_eq!(e.kind, Some(EdgeKind::Artery));
            }
        }
    }
}

#[test]
fn pruned_trees_have_requested_bifurcations() {
    for n in TREE_SIZES {
        let g = conditioning_tree(n);
        assert_eq!(g.internal_vertices().len(), n);
        assert_eq!(g.num_edges(), 2 * n + 1);
    }
    let full = murray_tree(&MurrayTreeSpec::new(4, 1.0, 1.0)).unwrap();
    assert_eq!(conditioning_tree(7).edge_specs(), full.edge_specs());
}

#[test]
fn honeycomb_family() {
    let expected = [8, 18, 32, 50, 72, 98, 128];
    for (k, n) in HONEYCOMB_SIZES.iter().zip(expected) {
        let g = honeycomb(*k).unwrap();
        assert_eq!(g.internal_vertices().len(), n);
        let bdry = g.boundary_vertices();
        assert_eq!(bdry.len(), 2);
        assert!(bdry.iter().all(|&v| g.degree(v) == 1));
        assert!(g.edges().iter().all(|e| e.length == 1.0));
        assert!(g.internal_vertices().iter().all(|&v| (2..=3).contains(&g.degree(v))));
    }
    assert!(honeycomb(0).is_err());
}

#[test]
fn y_graph_geometry() {
    let g = y_graph();
    assert_eq!(g.internal_vertices(), vec![1]);
    let l: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
    assert!((l[0] - 0.5).abs() < 1e-15);
    assert!((l[1] - 0.5f64.sqrt()).abs() < 1e-15 && (l[2] - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn manufactured_solution() {
    let case = y_mms();
    assert!((case.q(0, 0.5) - 1.0).abs() < 1e-15);
    assert!((case.q(1, 0.0) - 0.5).abs() < 1e-15 && (case.q(2, 0.0) - 0.5).abs() < 1e-15);
    assert!(case.vertex_jump(1).abs() < 1e-14);
    assert_eq!(case.p(0, 0.0), 1.0);
    // Residual of R q + ∂p = g and ∂q = f with centered differences.
    let mut seed = 7u64;
    let mut rnd = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let d = 1e-5;
    for _ in 0..100 {
        let e = (rnd() * 3.0) as usize % 3;
        let l = case.graph.edge(e).length;
        let s = d + rnd() * (l - 2.0 * d);
        let dq = (case.q(e, s + d) - case.q(e, s - d)) / (2.0 * d);
        let dp = (case.p(e, s + d) - case.p(e, s - d)) / (2.0 * d);
        assert!((dq - case.f(e, s)).abs() < 1e-8);
        assert!((case.q(e, s) + dp - case.g(e, s)).abs() < 1e-8);
    }
    // Pressure is continuous at the bifurcation.
    let l0 = case.graph.edge(0).length;
    assert!((case.p(0, l0) - case.p(1, 0.0)).abs() < 1e-15);
    let src = case.source();
    assert_eq!(src.p_ref.len(), 3);
    assert!((src.traction(0) + 1.0).abs() < 1e-15);
}

#[test]
fn arterio_venous_networks() {
    let g = arterio_venous(&ArterioVenousSpec::new(3, 1.0)).unwrap();
    assert_eq!(g.num_edges(), 2 * 7 + 4);
    assert_eq!(g.boundary_vertices(), vec![0, g.num_vertices() - 1]);
    let count = |k| g.edges().iter().filter(|e| e.kind == Some(k)).count();
    assert_eq!((count(EdgeKind::Artery), count(EdgeKind::Vein), count(EdgeKind::Capillary)), (7, 7, 4));
    let back = SpatialGraph::from_json(&g.to_json()).unwrap();
    assert_eq!(back.edge_specs(), g.edge_specs());

    let r_min = g
        .edges()
        .iter()
        .filter(|e| e.kind == Some(EdgeKind::Artery))
        .map(|e| e.radius1)
        .fold(f64::INFINITY, f64::min);
    let thin = arterio_venous(&ArterioVenousSpec::new(3, 0.01)).unwrap();
    for (a, b) in g.edges().iter().zip(thin.edges()) {
        if a.kind == Some(EdgeKind::Capillary) {
            assert!((a.radius1 - r_min).abs() < 1e-18);
            let rel = (b.radius1 / a.radius1).powi(-4);
            assert!((rel / 1e8 - 1.0).abs() < 1e-9);
        } else {
            assert_eq!(a.radius1, b.radius1);
        }
    }
    assert!(arterio_venous(&ArterioVenousSpec::new(1, 1.0)).is_err());
    assert!(arterio_venous(&ArterioVenousSpec::new(3, 0.0)).is_err());
}

#[test]
fn convergence_rates_and_monotone_errors() {
    let case = y_mms();
    for f in [Formulation::Primal, Formulation::DualHydraulic] {
        for k in 1..=2 {
            let rows = convergence_study(&case, f, k, 3).unwrap();
            for w in rows.windows(2) {
                assert!(w[1].err_q < w[0].err_q && w[1].err_p < w[0].err_p);
            }
            let last = rows.last().unwrap();
            assert!((last.rate_q.unwrap() - k as f64).abs() < 0.15, "{f:?} {k} {rows:?}");
            assert!((last.rate_p.unwrap() - k as f64).abs() < 0.15, "{f:?} {k} {rows:?}");
        }
    }
    let csv = convergence_csv(&convergence_study(&case, Formulation::Primal, 1, 2).unwrap());
    assert!(csv.starts_with("h,err_q,rate_q,err_p,rate_p\n"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn conditioning_entries() {
    let o = SpectrumOptions::default();
    let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
    let c = condition_entry(&conditioning_tree(3), 0.5, TableNorm::Primal, 1.0, o).unwrap();
    assert!((c.condition - phi2).abs() < 1e-8);
    let c = condition_entry(&honeycomb(1).unwrap(), 0.5, TableNorm::Primal, 1.0, o).unwrap();
    assert!((c.condition - phi2).abs() < 1e-8);

    let rows = conditioning_table(
        Family::Tree,
        &[1, 3],
        &[1.0, 0.5],
        TableNorm::Dual(DualNorm::Weighted),
        1.0,
        o,
    );
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.as_ref().unwrap().condition < 4.5));

    // Branch-continuous pressures lose the inf-sup bound under refinement.
    let th = DualOptions {
        pressure: PressurePairing::Continuous,
        ..DualOptions::hydraulic(2)
    };
    let beta = |h| {
        condition_with(&y_graph(), h, Some((th, DualNorm::Weighted)), 1.0, o)
            .unwrap()
            .beta
    };
    assert!(beta(1.0) > 2.0 * beta(0.25));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn murray_identity(n in 1usize..7, gamma in 0.05f64..1.0, root in 1e-5f64..1.0) {
        let g = murray_tree(&MurrayTreeSpec::new(n, gamma, root)).unwrap();
        prop_assert!(murray_residual(&g) < 1e-12);
    }

    #[test]
    fn pruned_tree_counts(n in 0usize..60) {
        let g = conditioning_tree(n);
        prop_assert_eq!(g.internal_vertices().len(), n);
        prop_assert_eq!(g.boundary_vertices().len(), n + 2);
    }
}

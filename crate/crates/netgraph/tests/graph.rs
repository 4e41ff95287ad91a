use netgraph::{EdgeKind, EdgeSpec, GraphError, GraphMesh, SpatialGraph, Vertex};
use proptest::prelude::*;

fn segment() -> SpatialGraph {
    SpatialGraph::new(
        vec![Vertex::new(0, [0.0; 3]), Vertex::new(1, [1.0, 0.0, 0.0])],
        vec![EdgeSpec::plain(0, 0, 1)],
    )
    .unwrap()
}

fn y_graph() -> SpatialGraph {
    SpatialGraph::new(
        vec![
            Vertex::new(0, [0.0, 0.0, 0.0]),
            Vertex::new(1, [0.0, 0.5, 0.0]),
            Vertex::new(2, [-0.5, 1.0, 0.0]),
            Vertex::new(3, [0.5, 1.0, 0.0]),
        ],
        vec![
            EdgeSpec::plain(0, 0, 1),
            EdgeSpec::plain(1, 1, 2),
            EdgeSpec::plain(2, 1, 3),
        ],
    )
    .unwrap()
}

#[test]
fn single_segment() {
    let g = segment();
    let (internal, boundary) = g.classify_vertices();
    assert!(internal.is_empty());
    assert_eq!(boundary, vec![0, 1]);
    assert_eq!(g.total_length(), 1.0);
    assert!((g.vertex_alpha(0) - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn y_graph_lengths_and_alpha() {
    let g = y_graph();
    let lens: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
    assert!((lens[0] - 0.5).abs() < 1e-15);
    assert!((lens[1] - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((lens[2] - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!(g.classify_vertices(), (vec![1], vec![0, 2, 3]));

    let ell = 0.5 + 2.0 * 0.5f64.sqrt();
    assert!((g.total_length() - ell).abs() < 1e-14);
    assert!((g.total_length() - 1.9142).abs() < 1e-4);
    assert!((g.vertex_alpha(1) - (ell / 4.0).sqrt()).abs() < 1e-15);
    assert!((g.vertex_alpha(1) - 0.6918).abs() < 1e-4);
    assert!((g.vertex_alpha(0) - 0.3536).abs() < 1e-4);
}

#[test]
fn rejects_bad_input() {
    let vs = || (0..4).map(|i| Vertex::new(i, [i as f64, 0.0, 0.0])).collect::<Vec<_>>();
    let err = SpatialGraph::new(vs(), vec![EdgeSpec::plain(0, 0, 99)]).unwrap_err();
    assert_eq!(err, GraphError::DanglingEdgeReference { edge: 0, vertex: 99 });

    let err = SpatialGraph::new(vs(), vec![EdgeSpec::plain(0, 1, 1)]).unwrap_err();
    assert_eq!(err, GraphError::SelfLoop { edge: 0 });

    let err = SpatialGraph::new(
        vs(),
        vec![EdgeSpec::plain(0, 0, 1), EdgeSpec::plain(1, 2, 3)],
    )
    .unwrap_err();
    assert_eq!(err, GraphError::DisconnectedGraph);

    let err = SpatialGraph::new(
        vs(),
        vec![
            EdgeSpec::plain(0, 0, 1),
            EdgeSpec::plain(0, 1, 2),
            EdgeSpec::plain(2, 2, 3),
        ],
    )
    .unwrap_err();
    assert!(matches!(err, GraphError::DuplicateId { what: "edge", id: 0 }));

    let err = SpatialGraph::new(
        vs()[..2].to_vec(),
        vec![EdgeSpec::plain(0, 0, 1).with_radius(1.0, 1.0)],
    )
    .unwrap_err();
    assert!(matches!(err, GraphError::InvalidEdge { edge: 0, .. }));
}

#[test]
fn explicit_length_overrides_geometry() {
    let g = SpatialGraph::new(
        vec![Vertex::new(0, [0.0; 3]), Vertex::new(1, [0.0; 3])],
        vec![EdgeSpec::plain(0, 0, 1).with_length(2.5)],
    )
    .unwrap();
    assert_eq!(g.edge(0).length, 2.5);
}

#[test]
fn meshing_ceiling_rule() {
    let m = GraphMesh::uniform(&segment(), 0.25).unwrap();
    assert_eq!(m.cells_per_edge(), &[4]);
    let m = GraphMesh::uniform(&y_graph(), 0.5).unwrap();
    assert_eq!(m.cells_per_edge(), &[1, 2, 2]);
    assert!(m.h() <= 0.5);
    assert!(matches!(
        GraphMesh::uniform(&segment(), 0.0),
        Err(GraphError::NonPositiveMeshSize(_))
    ));
}

#[test]
fn mesh_numbering() {
    let m = GraphMesh::uniform(&y_graph(), 0.25).unwrap();
    assert_eq!(m.cells_per_edge(), &[2, 3, 3]);
    assert_eq!(m.num_cells(), 8);
    // 4 graph vertices plus 1 + 2 + 2 interior nodes.
    assert_eq!(m.num_nodes(), 9);
    assert_eq!(m.cell_nodes(0), (0, 4));
    assert_eq!(m.cell_nodes(1), (4, 1));
    assert_eq!(m.cell_nodes(2).0, 1);
    assert_eq!(m.cell_nodes(7).1, 3);
    let (c, xi) = m.locate(1, 0.5f64.sqrt()).unwrap();
    assert_eq!((c, xi), (4, 1.0));
    assert!(m.locate(0, 0.6).is_err());
    assert!((m.vertex_mean_h(1) - (0.25 + 2.0 * 0.5f64.sqrt() / 3.0) / 3.0).abs() < 1e-15);
}

#[test]
fn json_round_trip_keeps_kinds() {
    let g = SpatialGraph::new(
        vec![
            Vertex::new(0, [0.0; 3]),
            Vertex::new(1, [1.0, 0.0, 0.0]),
            Vertex::new(2, [2.0, 0.0, 0.0]),
        ],
        vec![
            EdgeSpec::plain(0, 0, 1).with_kind(EdgeKind::Artery),
            EdgeSpec::plain(1, 1, 2).with_kind(EdgeKind::Capillary).with_length(3.0),
        ],
    )
    .unwrap();
    let text = g.to_json();
    assert!(text.contains("\"capillary\""));
    let back = SpatialGraph::from_json(&text).unwrap();
    assert_eq!(back.edges(), g.edges());
    assert_eq!(back.vertices(), g.vertices());
    assert!(matches!(
        SpatialGraph::from_json("{\"vertices\": 3}"),
        Err(GraphError::Format(_))
    ));
}

/// Random trees: vertex i > 0 attaches to a random earlier vertex.
fn arb_tree() -> impl Strategy<Value = SpatialGraph> {
    (2usize..30)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                proptest::collection::vec(0.05f64..3.0, n - 1),
            )
        })
        .prop_map(|(n, parents, lens)| {
            let vs = (0..n).map(|i| Vertex::new(i, [i as f64, 0.0, 0.0])).collect();
            let es = (1..n)
                .map(|i| {
                    let p = parents[i - 1].index(i);
                    EdgeSpec::plain(i - 1, p, i).with_length(lens[i - 1])
                })
                .collect();
            SpatialGraph::new(vs, es).unwrap()
        })
}

proptest! {
    #[test]
    fn mesh_partitions_edges(g in arb_tree(), h in 0.01f64..2.0) {
        let m = GraphMesh::uniform(&g, h).unwrap();
        prop_assert!(m.h() <= h * (1.0 + 1e-12));
        for e in 0..g.num_edges() {
            let total: f64 = m.edge_cells(e).map(|c| {
                let (a, b) = m.cell_bounds(c);
                b - a
            }).sum();
            let l = g.edge(e).length;
            prop_assert!((total - l).abs() <= 1e-12 * l);
        }
    }

    #[test]
    fn classification_is_a_partition(g in arb_tree()) {
        let (i, b) = g.classify_vertices();
        prop_assert_eq!(i.len() + b.len(), g.num_vertices());
        for v in &b { prop_assert_eq!(g.degree(*v), 1); }
        for v in &i { prop_assert!(g.degree(*v) >= 2); }
    }

    #[test]
    fn alpha_squared_recovers_incident_length(g in arb_tree()) {
        let m = g.num_vertices() as f64;
        for v in 0..g.num_vertices() {
            let a = g.vertex_alpha(v);
            let exact = g.incident_length(v);
            prop_assert!((a * a * m - exact).abs() <= 1e-12 * exact);
        }
    }

    #[test]
    fn halving_h_doubles_exact_counts(g in arb_tree(), k in 1usize..5) {
        // Lengths that are exact multiples of h.
        let specs: Vec<EdgeSpec> = g.edge_specs().into_iter().enumerate()
            .map(|(i, s)| s.with_length(((i % 3) + 1) as f64 * 0.5)).collect();
        let g = SpatialGraph::new(g.vertices().to_vec(), specs).unwrap();
        let h = 0.5 / k as f64;
        let a = GraphMesh::uniform(&g, h).unwrap();
        let b = GraphMesh::uniform(&g, h / 2.0).unwrap();
        for e in 0..g.num_edges() {
            prop_assert_eq!(2 * a.cells_per_edge()[e], b.cells_per_edge()[e]);
        }
    }
}

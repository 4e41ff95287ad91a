use std::f64::consts::PI;
use std::sync::Arc;

use netgraph::{EdgeSpec, GraphMesh, SpatialGraph, Vertex};
use proptest::prelude::*;
use spaces::assemble::{bilinear, jump_matrix, mass, stiffness, vertex_value_matrix};
use spaces::quadrature::{gauss_legendre, points_for_degree};
use spaces::{
    norm_matrix, Coo, DualNorm, FunctionSpace, GraphFunction, NormChoice, NormWeights, SpaceError,
    SpaceKind, VertexSet,
};

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

fn mesh_each(g: &SpatialGraph, n: usize) -> Arc<GraphMesh> {
    Arc::new(GraphMesh::with_cells_each(g, n).unwrap())
}

fn space(mesh: &Arc<GraphMesh>, kind: SpaceKind) -> FunctionSpace {
    FunctionSpace::new(mesh.clone(), kind).unwrap()
}

/// Dense Cholesky; returns false if a pivot is not positive.
fn is_spd(a: &Coo) -> bool {
    let mut m = a.to_dense();
    let n = m.len();
    for j in 0..n {
        let mut d = m[j][j];
        for k in 0..j {
            d -= m[j][k] * m[j][k];
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        m[j][j] = d;
        for i in j + 1..n {
            let mut s = m[i][j];
            for k in 0..j {
                s -= m[i][k] * m[j][k];
            }
            m[i][j] = s / d;
        }
    }
    true
}

#[test]
fn dof_counts_on_y_graph() {
    let mesh = mesh_each(&y_graph(), 1);
    assert_eq!(space(&mesh, SpaceKind::CgGlobal(1)).dim(), 4);
    assert_eq!(space(&mesh, SpaceKind::CgBranch(1)).dim(), 6);
    assert_eq!(space(&mesh, SpaceKind::DgBranch(0)).dim(), 3);
    assert_eq!(space(&mesh, SpaceKind::VertexMultiplier(VertexSet::All)).dim(), 4);
    assert_eq!(
        space(&mesh, SpaceKind::VertexMultiplier(VertexSet::Internal)).dim(),
        1
    );
    assert_eq!(
        FunctionSpace::new(mesh.clone(), SpaceKind::CgGlobal(0)).unwrap_err(),
        SpaceError::UnsupportedDegree(0)
    );

    // 4 graph vertices, 6 edge-interior mesh nodes, 9 cell midpoints.
    let mesh = mesh_each(&y_graph(), 3);
    assert_eq!(space(&mesh, SpaceKind::CgGlobal(2)).dim(), 4 + 6 + 9);
    assert_eq!(space(&mesh, SpaceKind::CgBranch(2)).dim(), 3 * (3 * 2 + 1));
    assert_eq!(space(&mesh, SpaceKind::DgBranch(1)).dim(), 9 * 2);
}

#[test]
fn evaluation() {
    let mesh = mesh_each(&y_graph(), 1);
    let cg = space(&mesh, SpaceKind::CgGlobal(1));
    let one = GraphFunction::interpolate(&cg, |_, _| 1.0);
    assert_eq!(one.evaluate(2, 0.3).unwrap(), 1.0);

    let mut hat = GraphFunction::zeros(&cg);
    hat.coeffs[cg.vertex_dof(1).unwrap()] = 1.0;
    assert!((hat.evaluate(0, 0.25).unwrap() - 0.5).abs() < 1e-15);
    assert!(hat.evaluate(0, 0.6).is_err());

    let fine = mesh_each(&y_graph(), 8);
    let cg = space(&fine, SpaceKind::CgGlobal(2));
    let q = GraphFunction::interpolate(&cg, |_, s| 1.0 + (PI * s).cos() + (2.0 * PI * s).sin());
    assert!((q.evaluate(0, 0.5).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn jumps() {
    let mesh = mesh_each(&y_graph(), 2);
    let br = space(&mesh, SpaceKind::CgBranch(1));
    let vals = [2.0, 1.5, 0.5];
    let f = GraphFunction::interpolate(&br, |e, _| vals[e]);
    assert!(f.jump(1).unwrap().abs() < 1e-15);
    assert_eq!(f.jump(0).unwrap(), -2.0);
    assert_eq!(f.jump(3).unwrap(), 0.5);

    // Exact MMS flux: incoming 1.0, outgoing 0.5 + 0.5 at the bifurcation.
    let q = GraphFunction::interpolate(&br, |e, s| {
        let (c, t) = if e == 0 { (1.0, s) } else { (0.5, s + 0.5) };
        c + (PI * t).cos() + (2.0 * PI * t).sin()
    });
    assert!(q.jump(1).unwrap().abs() < 1e-14);

    let seg = mesh_each(&segment(), 3);
    let br = space(&seg, SpaceKind::CgBranch(1));
    let q = GraphFunction::interpolate(&br, |_, s| s);
    assert_eq!(q.jump(1).unwrap(), 1.0);
    let div = q.divergence().unwrap();
    assert!(div.edge.iter().all(|d| (d - 1.0).abs() < 1e-13));
    assert_eq!(div.vertex, vec![0.0, 1.0]);

    let q = GraphFunction::interpolate(&br, |_, _| 3.0);
    let div = q.divergence().unwrap();
    assert!(div.edge.iter().all(|d| d.abs() < 1e-13));
}

#[test]
fn integration_by_parts_matrix_identity() {
    for k in 1..=3 {
        let mesh = Arc::new(GraphMesh::uniform(&y_graph(), 0.2).unwrap());
        let psi = space(&mesh, SpaceKind::CgBranch(k));
        let phi = space(&mesh, SpaceKind::CgGlobal(k));
        let ones = vec![1.0; mesh.num_cells()];
        // Zero boundary trace: drop columns of the boundary vertex dofs.
        let bnd = phi.boundary_dofs();
        let keep: Vec<usize> = (0..phi.dim()).filter(|d| !bnd.contains(d)).collect();
        let rows: Vec<usize> = (0..psi.dim()).collect();

        let all: Vec<usize> = (0..4).collect();
        let jump = jump_matrix(&psi, &all).transpose();
        let trace = vertex_value_matrix(&phi, &all);
        let mut vertex_term = Coo::new(psi.dim(), phi.dim());
        let jd = jump.to_dense();
        let td = trace.to_dense();
        for (i, row) in jd.iter().enumerate() {
            for (v, &jv) in row.iter().enumerate() {
                for (d, &tv) in td[v].iter().enumerate() {
                    vertex_term.push(i, d, jv * tv);
                }
            }
        }

        let b1 = bilinear(&psi, &phi, true, false, &ones)
            .add(&vertex_term.scaled(-1.0))
            .restrict(&rows, &keep)
            .to_dense();
        let b2 = bilinear(&psi, &phi, false, true, &ones)
            .restrict(&rows, &keep)
            .to_dense();
        for (r1, r2) in b1.iter().zip(&b2) {
            for (x, y) in r1.iter().zip(r2) {
                assert!((x + y).abs() < 1e-12, "k={k}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn quadrature_exactness() {
    for n in 1..8 {
        let (x, w) = gauss_legendre(n);
        for p in 0..2 * n {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
            assert!((q - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "n={n} p={p}");
        }
    }
    assert_eq!(points_for_degree(1), 3);
    assert_eq!(points_for_degree(3), 5);

    // Single cell of length h.
    let h = 0.37;
    let g = SpatialGraph::new(
        vec![Vertex::new(0, [0.0; 3]), Vertex::new(1, [h, 0.0, 0.0])],
        vec![EdgeSpec::plain(0, 0, 1)],
    )
    .unwrap();
    let mesh = mesh_each(&g, 1);
    let p1 = space(&mesh, SpaceKind::CgGlobal(1));
    let m = mass(&p1, &[1.0]).to_dense();
    let k = stiffness(&p1, &[1.0]).to_dense();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-13;
    assert!(close(m[0][0], h / 3.0) && close(m[0][1], h / 6.0));
    assert!(close(k[0][0], 1.0 / h) && close(k[0][1], -1.0 / h));

    let p2 = space(&mesh, SpaceKind::CgGlobal(2));
    let m = mass(&p2, &[1.0]).to_dense();
    // Dof order: vertex 0, vertex 1, midpoint.
    let exact = [[4.0, -1.0, 2.0], [-1.0, 4.0, 2.0], [2.0, 2.0, 16.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert!(close(m[i][j], h * exact[i][j] / 30.0), "({i},{j})");
        }
    }
}

#[test]
fn norm_examples() {
    let seg = mesh_each(&segment(), 1);
    let dg = space(&seg, SpaceKind::DgBranch(0));
    let w = NormWeights::unit(&seg);
    let m = norm_matrix(&dg, NormChoice::PrimalV, &w).unwrap();
    assert!((m.to_dense()[0][0] - 1.0).abs() < 1e-15 && m.nrows == 1);

    let cg = space(&seg, SpaceKind::CgGlobal(1));
    let m = norm_matrix(&cg, NormChoice::PrimalM, &w).unwrap();
    let free: Vec<usize> = (0..cg.dim()).filter(|d| !cg.boundary_dofs().contains(d)).collect();
    assert_eq!(m.restrict(&free, &free).nrows, 0);

    let y = mesh_each(&y_graph(), 2);
    let w = NormWeights::unit(&y);
    let mult = space(&y, SpaceKind::VertexMultiplier(VertexSet::All));
    let m = norm_matrix(&mult, NormChoice::DualMultiplier(DualNorm::Weighted), &w)
        .unwrap()
        .to_dense();
    let g = y.graph();
    let ell = g.total_length();
    assert!((ell - 1.9142).abs() < 1e-4);
    for v in 0..4 {
        let a = g.vertex_alpha(v);
        assert!((m[v][v] - a * a / (ell * ell)).abs() < 1e-15);
    }

    let mut bad = NormWeights::unit(&y);
    bad.r_cell[0] = 0.0;
    assert!(matches!(
        norm_matrix(&mult, NormChoice::DualMultiplier(DualNorm::RRobust), &bad),
        Err(SpaceError::SingularWeight { .. })
    ));
}

#[test]
fn norm_matrices_are_spd() {
    let g = y_graph();
    for n in [1, 3] {
        let mesh = mesh_each(&g, n);
        let w = NormWeights::new(&mesh, |e, s| 1.0 + e as f64 + s);
        let br = space(&mesh, SpaceKind::CgBranch(1));
        let dg = space(&mesh, SpaceKind::DgBranch(0));
        let mult = space(&mesh, SpaceKind::VertexMultiplier(VertexSet::Internal));
        let cg = space(&mesh, SpaceKind::CgGlobal(1));
        let free: Vec<usize> = (0..cg.dim()).filter(|d| !cg.boundary_dofs().contains(d)).collect();
        for kind in [
            DualNorm::Unweighted,
            DualNorm::Weighted,
            DualNorm::MeshWeighted,
            DualNorm::RRobust,
        ] {
            for (sp, choice) in [
                (&br, NormChoice::DualV(kind)),
                (&dg, NormChoice::DualPressure(kind)),
                (&mult, NormChoice::DualMultiplier(kind)),
            ] {
                let m = norm_matrix(sp, choice, &w).unwrap();
                assert!(m.asymmetry() < 1e-14);
                assert!(is_spd(&m), "{choice:?}");
            }
        }
        let m = norm_matrix(&dg, NormChoice::PrimalV, &w).unwrap();
        assert!(is_spd(&m));
        let m = norm_matrix(&cg, NormChoice::PrimalM, &w)
            .unwrap()
            .restrict(&free, &free);
        assert!(m.asymmetry() < 1e-14);
        assert!(is_spd(&m));
    }
}

proptest! {
    #[test]
    fn telescoping(coeffs in prop::collection::vec(-5.0f64..5.0, 3 * 4 * 2)) {
        let mesh = mesh_each(&y_graph(), 4);
        let dg = space(&mesh, SpaceKind::DgBranch(1));
        let q = GraphFunction::new(&dg, coeffs).unwrap();
        let div = q.divergence().unwrap();
        // Degree-0 derivative: integrate cellwise constants.
        let edge_integral: f64 = (0..mesh.num_cells())
            .map(|c| div.edge[div.edge_space.cell_dofs(c)[0]] * mesh.cell_length(c))
            .sum();
        let jump_sum: f64 = div.vertex.iter().sum();
        // DG functions also jump inside edges; include those.
        let mut interior = 0.0;
        for c in 0..mesh.num_cells() {
            let e = mesh.cell_edge(c);
            if c + 1 < mesh.edge_cells(e).end {
                let right = q.coeffs[dg.cell_dofs(c)[1]];
                let left = q.coeffs[dg.cell_dofs(c + 1)[0]];
                interior += right - left;
            }
        }
        prop_assert!((edge_integral - jump_sum - interior).abs() < 1e-11);
    }

    #[test]
    fn telescoping_branch_continuous(coeffs in prop::collection::vec(-5.0f64..5.0, 3 * (3 * 2 + 1))) {
        let mesh = mesh_each(&y_graph(), 3);
        let br = space(&mesh, SpaceKind::CgBranch(2));
        let q = GraphFunction::new(&br, coeffs).unwrap();
        let div = q.divergence().unwrap();
        let ones = vec![1.0; mesh.num_cells()];
        let m = mass(&div.edge_space, &ones);
        let one = vec![1.0; div.edge_space.dim()];
        let integral: f64 = m.matvec(&div.edge).iter().zip(&one).map(|(a, b)| a * b).sum();
        prop_assert!((integral - div.vertex.iter().sum::<f64>()).abs() < 1e-11);
    }

    #[test]
    fn continuous_interpolant_has_zero_jump_on_paths(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        // A path graph has matching in/out multiplicity at each internal vertex.
        let g = SpatialGraph::new(
            (0..4).map(|i| Vertex::new(i, [i as f64, 0.0, 0.0])).collect(),
            (0..3).map(|i| EdgeSpec::plain(i, i, i + 1)).collect(),
        ).unwrap();
        let mesh = mesh_each(&g, 2);
        let br = space(&mesh, SpaceKind::CgBranch(1));
        let q = GraphFunction::interpolate(&br, |e, s| a * (e as f64 + s) + b);
        prop_assert!(q.jump(1).unwrap().abs() < 1e-13);
        prop_assert!(q.jump(2).unwrap().abs() < 1e-13);
    }
}

//! Assembly primitives shared by all variational forms.

use netgraph::GraphMesh;

use crate::quadrature::{gauss_legendre, points_for_degree};
use crate::{Coo, FunctionSpace};

/// Sample `f(edge, s)` at every cell midpoint.
pub fn cellwise(mesh: &GraphMesh, f: impl Fn(usize, f64) -> f64) -> Vec<f64> {
    (0..mesh.num_cells())
        .map(|c| f(mesh.cell_edge(c), mesh.cell_midpoint(c)))
        .collect()
}

/// Quadrature rule adequate for products of the two spaces.
fn rule(a: &FunctionSpace, b: &FunctionSpace) -> (Vec<f64>, Vec<f64>) {
    gauss_legendre(points_for_degree(a.degree().max(b.degree())))
}

/// Values (or s-derivatives) of the local basis at the quadrature points.
fn tabulate(space: &FunctionSpace, pts: &[f64], deriv: bool, h: f64) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|&x| {
            if deriv {
                space.basis().derivs(x).into_iter().map(|d| d / h).collect()
            } else {
                space.basis().values(x)
            }
        })
        .collect()
}

/// ∫ coef · Dφ_i · Dψ_j ds over all cells, with φ from `rows`, ψ from
/// `cols`, D the identity or ∂_s. `coef` holds one value per cell.
pub fn bilinear(
    rows: &FunctionSpace,
    cols: &FunctionSpace,
    row_deriv: bool,
    col_deriv: bool,
    coef: &[f64],
) -> Coo {
    assert!(rows.is_edge_space() && cols.is_edge_space());
    let mesh = rows.mesh();
    assert_eq!(coef.len(), mesh.num_cells());
    let (pts, wts) = rule(rows, cols);
    let mut out = Coo::new(rows.dim(), cols.dim());
    // Cells on one edge share their tabulation.
    for e in 0..mesh.graph().num_edges() {
        let h = mesh.edge_h(e);
        let tr = tabulate(rows, &pts, row_deriv, h);
        let tc = tabulate(cols, &pts, col_deriv, h);
        let nr = rows.basis().len();
        let nc = cols.basis().len();
        let mut local = vec![0.0; nr * nc];
        for (q, w) in wts.iter().enumerate() {
            for i in 0..nr {
                for j in 0..nc {
                    local[i * nc + j] += w * h * tr[q][i] * tc[q][j];
                }
            }
        }
        for c in mesh.edge_cells(e) {
            let k = coef[c];
            if k == 0.0 {
                continue;
            }
            let rd = rows.cell_dofs(c);
            let cd = cols.cell_dofs(c);
            for i in 0..nr {
                for j in 0..nc {
                    out.push(rd[i], cd[j], k * local[i * nc + j]);
                }
            }
        }
    }
    out
}

pub fn mass(space: &FunctionSpace, coef: &[f64]) -> Coo {
    bilinear(space, space, false, false, coef)
}

pub fn stiffness(space: &FunctionSpace, coef: &[f64]) -> Coo {
    bilinear(space, space, true, true, coef)
}

/// ∫ f(edge, s) φ_i ds (or ∫ f ∂_s φ_i ds when `deriv`).
pub fn load(space: &FunctionSpace, deriv: bool, f: &dyn Fn(usize, f64) -> f64) -> Vec<f64> {
    let mesh = space.mesh();
    let (pts, wts) = gauss_legendre(points_for_degree(space.degree()));
    let mut out = vec![0.0; space.dim()];
    for e in 0..mesh.graph().num_edges() {
        let h = mesh.edge_h(e);
        let tab = tabulate(space, &pts, deriv, h);
        for c in mesh.edge_cells(e) {
            let (s0, s1) = mesh.cell_bounds(c);
            let dofs = space.cell_dofs(c);
            for (q, (&x, &w)) in pts.iter().zip(&wts).enumerate() {
                let fv = f(e, s0 + x * (s1 - s0));
                for (i, &d) in dofs.iter().enumerate() {
                    out[d] += w * (s1 - s0) * fv * tab[q][i];
                }
            }
        }
    }
    out
}

/// Matrix of the generalized jump ⟦q⟧_v = Σ_in q_e(v) − Σ_out q_e(v), one row
/// per entry of `vertices`.
pub fn jump_matrix(space: &FunctionSpace, vertices: &[usize]) -> Coo {
    let g = space.mesh().graph();
    let mut out = Coo::new(vertices.len(), space.dim());
    for (row, &v) in vertices.iter().enumerate() {
        for (e, sign) in g.incident(v) {
            for (d, val) in space.edge_trace(e, sign > 0.0) {
                out.push(row, d, sign * val);
            }
        }
    }
    out
}

/// Rows picking the value of a vertex-carrying space at each of `vertices`.
pub fn vertex_value_matrix(space: &FunctionSpace, vertices: &[usize]) -> Coo {
    let mut out = Coo::new(vertices.len(), space.dim());
    for (row, &v) in vertices.iter().enumerate() {
        let d = space
            .vertex_dof(v)
            .expect("space has no dof at this vertex");
        out.push(row, d, 1.0);
    }
    out
}

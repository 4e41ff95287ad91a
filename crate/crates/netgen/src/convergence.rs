use std::fmt::Write;
use std::sync::Arc;

use forms::{assemble_dual_hydraulic, assemble_primal};
use netgraph::GraphMesh;
use solvers::solve_saddle;
use spaces::quadrature::gauss_legendre;
use spaces::GraphFunction;

use crate::mms::MmsCase;
use crate::NetgenError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// q in L², p in H¹.
    Primal,
    /// q in H(div) with vertex multipliers, p in L² on edges and vertices.
    DualHydraulic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub err_q: f64,
    pub rate_q: Option<f64>,
    pub err_p: f64,
    pub rate_p: Option<f64>,
}

/// Coarsest mesh size of the study.
pub const COARSEST_H: f64 = 1.0 / 32.0;

/// ∫ over all cells of `f(e, s)` by a Gauss rule with `n` points per cell.
fn integrate(mesh: &GraphMesh, n: usize, f: impl Fn(usize, f64) -> f64) -> f64 {
    let (pts, wts) = gauss_legendre(n);
    (0..mesh.num_cells())
        .map(|c| {
            let e = mesh.cell_edge(c);
            let (a, b) = mesh.cell_bounds(c);
            pts.iter()
                .zip(&wts)
                .map(|(x, w)| w * f(e, a + x * (b - a)))
                .sum::<f64>()
                * (b - a)
        })
        .sum()
}

fn eval(u: &GraphFunction, e: usize, s: f64) -> f64 {
    u.evaluate(e, s).expect("quadrature point lies on the edge")
}

fn deriv(u: &GraphFunction, e: usize, s: f64) -> f64 {
    u.derivative(e, s).expect("quadrature point lies on the edge")
}

/// Discrete errors (‖q − q_h‖, ‖p − p_h‖) on one mesh.
pub fn mms_errors(
    case: &MmsCase,
    formulation: Formulation,
    k: usize,
    h: f64,
) -> Result<(f64, f64), NetgenError> {
    let mesh = Arc::new(GraphMesh::uniform(&case.graph, h)?);
    let src = case.source();
    let nq = k + 6;
    match formulation {
        Formulation::Primal => {
            let sys = assemble_primal(&mesh, &case.field(), &src, k)?;
            let sol = solve_saddle(&sys)?;
            let (q, p) = (sol.flux(&sys), sol.pressure_block(&sys, 0));
            let eq = integrate(&mesh, nq, |e, s| (case.q(e, s) - eval(&q, e, s)).powi(2));
            let ep = integrate(&mesh, nq, |e, s| {
                (case.p(e, s) - eval(&p, e, s)).powi(2) + (case.dp(e, s) - deriv(&p, e, s)).powi(2)
            });
            Ok((eq.sqrt(), ep.sqrt()))
        }
        Formulation::DualHydraulic => {
            let sys = assemble_dual_hydraulic(&mesh, &case.field(), &src, k)?;
            let sol = solve_saddle(&sys)?;
            let q = sol.flux(&sys);
            let (p, lam) = (sol.pressure_block(&sys, 0), sol.pressure_block(&sys, 1));
            let mut eq = integrate(&mesh, nq, |e, s| {
                (case.q(e, s) - eval(&q, e, s)).powi(2) + (case.dq(e, s) - deriv(&q, e, s)).powi(2)
            });
            let mut ep = integrate(&mesh, nq, |e, s| (case.p(e, s) - eval(&p, e, s)).powi(2));
            let verts = sys.m_spaces[1].multiplier_vertices();
            for (d, &v) in verts.iter().enumerate() {
                eq += (case.vertex_jump(v) - q.jump(v).expect("vertex exists")).powi(2);
                // The multiplier is the negated vertex pressure.
                ep += (case.vertex_pressure(v) + lam.coeffs[d]).powi(2);
            }
            Ok((eq.sqrt(), ep.sqrt()))
        }
    }
}

/// Errors and observed rates on `levels` meshes, h halving from 1/32.
pub fn convergence_study(
    case: &MmsCase,
    formulation: Formulation,
    k: usize,
    levels: usize,
) -> Result<Vec<ConvergenceRow>, NetgenError> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    for l in 0..levels {
        let h = COARSEST_H / f64::from(1u32 << l);
        let (err_q, err_p) = mms_errors(case, formulation, k, h)?;
        let rate = |prev: f64, now: f64| (prev / now).log2();
        let (rate_q, rate_p) = match rows.last() {
            Some(r) => (Some(rate(r.err_q, err_q)), Some(rate(r.err_p, err_p))),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            h,
            err_q,
            rate_q,
            err_p,
            rate_p,
        });
    }
    Ok(rows)
}

/// CSV body with header `h,err_q,rate_q,err_p,rate_p`; the first row has
/// empty rates.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("h,err_q,rate_q,err_p,rate_p\n");
    let fmt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{:.6e},{:.6e},{},{:.6e},{}",
            r.h,
            r.err_q,
            fmt(r.rate_q),
            r.err_p,
            fmt(r.rate_p)
        )
        .unwrap();
    }
    out
}

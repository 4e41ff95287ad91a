//! Extreme eigenvalues of large symmetric pencils by Lanczos iteration in
//! the N inner product.

use faer::prelude::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::{Mat, Side};
use spaces::Coo;

use crate::{to_faer, SolverError};

struct Factor(Lu<usize, f64>);

impl Factor {
    fn new(m: &Coo) -> Result<Self, SolverError> {
        let lu = to_faer(&m.compress())?
            .sp_lu()
            .map_err(|_| SolverError::SingularSystem {
                residual: f64::INFINITY,
            })?;
        Ok(Self(lu))
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
        let x = self.0.solve(&rhs);
        (0..b.len()).map(|i| x[(i, 0)]).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest |θ| among the Ritz values of an N-self-adjoint operator `op`.
/// `n_mat` supplies the inner product.
fn largest_magnitude(
    n: usize,
    n_mat: &Coo,
    op: &dyn Fn(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<f64, SolverError> {
    // Deterministic start vector with energy in every component.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548776662).sin()).collect();
    let nv = n_mat.matvec(&v);
    let s = dot(&v, &nv).sqrt();
    v.iter_mut().for_each(|x| *x /= s);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut nbasis: Vec<Vec<f64>> = Vec::new();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut last = f64::NAN;
    let steps = max_iter.min(n);
    for it in 0..steps {
        let nv = n_mat.matvec(&v);
        let mut w = op(&v);
        let a = dot(&w, &nv);
        alpha.push(a);
        basis.push(v.clone());
        nbasis.push(nv);
        // Full reorthogonalization, applied twice for stability.
        for _ in 0..2 {
            for (b, nb) in basis.iter().zip(&nbasis) {
                let c = dot(&w, nb);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nw = n_mat.matvec(&w);
        let b = dot(&w, &nw).max(0.0).sqrt();

        let check = (it + 1) % 10 == 0 || it + 1 == steps || b <= 1e-14 * a.abs().max(1.0);
        if check {
            let m = alpha.len();
            let t = Mat::from_fn(m, m, |i, j| {
                if i == j {
                    alpha[i]
                } else if i + 1 == j {
                    beta[i]
                } else if j + 1 == i {
                    beta[j]
                } else {
                    0.0
                }
            });
            let vals = t
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| SolverError::Backend(format!("{e:?}")))?;
            let top = vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
            if (top - last).abs() <= tol * top || b <= 1e-14 * top || it + 1 == steps {
                return Ok(top);
            }
            last = top;
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
    Ok(last)
}

/// β = min |ξ| and max |ξ| of K x = ξ N x through two Lanczos runs: one on
/// N⁻¹K and one on K⁻¹N.
pub(crate) fn extremes(k: &Coo, n_mat: &Coo, tol: f64, max_iter: usize) -> Result<(f64, f64), SolverError> {
    let n = k.nrows;
    let nf = Factor::new(n_mat).map_err(|_| SolverError::NormNotSpd)?;
    let kf = Factor::new(k)?;
    let max_abs = largest_magnitude(n, n_mat, &|x| nf.solve(&k.matvec(x)), tol, max_iter)?;
    let inv_beta = largest_magnitude(n, n_mat, &|x| kf.solve(&n_mat.matvec(x)), tol, max_iter)?;
    Ok((1.0 / inv_beta, max_abs))
}

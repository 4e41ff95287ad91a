//! Linear algebra back end: sparse LU for saddle systems and a dense
//! generalized eigensolver for inf-sup studies.

use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Par, Side};
use forms::SaddleSystem;
use spaces::{Coo, GraphFunction};

mod lanczos;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("system is singular (relative residual {residual:e})")]
    SingularSystem { residual: f64 },
    #[error("dimension {dim} exceeds the dense cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("norm matrix is not symmetric positive definite")]
    NormNotSpd,
    #[error("operator is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("norm matrix has size {got}, expected {expected}")]
    NormSizeMismatch { expected: usize, got: usize },
    #[error("linear algebra failure: {0}")]
    Backend(String),
}

/// Relative residual above which a solve is declared failed.
pub const RESIDUAL_TOL: f64 = 1e-10;

pub(crate) fn to_faer(m: &Coo) -> Result<SparseColMat<usize, f64>, SolverError> {
    let trips: Vec<Triplet<usize, usize, f64>> = m
        .entries
        .iter()
        .map(|&(row, col, val)| Triplet { row, col, val })
        .collect();
    SparseColMat::try_new_from_triplets(m.nrows, m.ncols, &trips)
        .map_err(|e| SolverError::Backend(format!("{e:?}")))
}

/// Solve a square sparse system; returns the solution and the normwise
/// relative residual ‖Kx − b‖ / (‖K‖‖x‖ + ‖b‖).
pub fn solve_sparse(k: &Coo, rhs: &[f64]) -> Result<(Vec<f64>, f64), SolverError> {
    assert_eq!(k.nrows, k.ncols);
    assert_eq!(k.nrows, rhs.len());
    let n = rhs.len();
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let k = k.compress();
    // A structurally or numerically singular factorization is reported as
    // a singular system; the residual check below catches the rest.
    let lu = to_faer(&k)?
        .sp_lu()
        .map_err(|_| SolverError::SingularSystem {
            residual: f64::INFINITY,
        })?;
    let b = Mat::from_fn(n, 1, |i, _| rhs[i]);
    let x = lu.solve(&b);
    let x: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    let r = k.matvec(&x);
    let res = r
        .iter()
        .zip(rhs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let norm_b = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let norm_x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let norm_k = k.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max);
    let scale = norm_k * norm_x + norm_b;
    let rel = if scale > 0.0 { res / scale } else { res };
    if !rel.is_finite() || rel > RESIDUAL_TOL {
        return Err(SolverError::SingularSystem { residual: rel });
    }
    Ok((x, rel))
}

/// Discrete flux and pressure of a solved saddle system.
#[derive(Debug, Clone)]
pub struct SaddleSolution {
    pub q: Vec<f64>,
    /// All M unknowns, prescribed values included.
    pub p: Vec<f64>,
    pub residual: f64,
}

impl SaddleSolution {
    pub fn flux<'a>(&self, sys: &'a SaddleSystem) -> GraphFunction<'a> {
        GraphFunction::new(&sys.v_space, self.q.clone()).expect("flux size")
    }

    /// Coefficients of M block `i` as a function on its space.
    pub fn pressure_block<'a>(&self, sys: &'a SaddleSystem, i: usize) -> GraphFunction<'a> {
        let off = sys.m_offsets()[i];
        let space = &sys.m_spaces[i];
        GraphFunction::new(space, self.p[off..off + space.dim()].to_vec()).expect("block size")
    }
}

pub fn solve_saddle(sys: &SaddleSystem) -> Result<SaddleSolution, SolverError> {
    let red = sys.reduce();
    let (x, residual) = solve_sparse(&red.matrix, &red.rhs)?;
    let (q, p) = x.split_at(red.nv);
    Ok(SaddleSolution {
        q: q.to_vec(),
        p: sys.expand_m(p),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Largest dimension handled by the dense eigensolver.
    pub cap: usize,
    /// Also compute eigenvectors and verify β^h through a Rayleigh quotient.
    pub rayleigh_check: bool,
    /// Relative magnitude below which an eigenvalue counts as numerical nullspace.
    pub null_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            cap: 4000,
            rayleigh_check: false,
            null_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Eigenvalues sorted by increasing magnitude.
    pub eigenvalues: Vec<f64>,
    /// Smallest magnitude outside the numerical nullspace.
    pub beta: f64,
    pub max_abs: f64,
    pub condition: f64,
    /// Number of eigenvalues excluded as numerical nullspace.
    pub null_count: usize,
    /// xᵀKx / xᵀNx on the eigenvector of β (when requested), in absolute value.
    pub rayleigh_beta: Option<f64>,
}

/// Spectrum of K x = ξ N x where K is the saddle matrix restricted to free
/// unknowns and N = blockdiag(`v_norm`, `m_norm`). `m_norm` spans all M
/// unknowns; rows of prescribed ones are dropped.
pub fn infsup_spectrum(
    sys: &SaddleSystem,
    v_norm: &Coo,
    m_norm: &Coo,
    opts: SpectrumOptions,
) -> Result<SpectrumReport, SolverError> {
    if v_norm.nrows != sys.nv() {
        return Err(SolverError::NormSizeMismatch {
            expected: sys.nv(),
            got: v_norm.nrows,
        });
    }
    if m_norm.nrows != sys.nm() {
        return Err(SolverError::NormSizeMismatch {
            expected: sys.nm(),
            got: m_norm.nrows,
        });
    }
    let red = sys.reduce();
    let n = red.matrix.nrows;
    if n > opts.cap {
        return Err(SolverError::DimensionCapExceeded { dim: n, cap: opts.cap });
    }
    let asym = red.matrix.asymmetry();
    if asym > 1e-10 {
        return Err(SolverError::NotSymmetric(asym));
    }
    let nm = m_norm.restrict(&red.free_m, &red.free_m);
    let norm = spaces::block_diag(&[v_norm, &nm]);
    generalized_symmetric(&red.matrix, &norm, opts)
}

/// How an extreme-eigenvalue estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionEstimate {
    pub beta: f64,
    pub max_abs: f64,
    pub condition: f64,
    pub method: SpectrumMethod,
}

/// Largest dimension accepted by [`condition_number`] on the sparse path.
pub const SPARSE_CAP: usize = 400_000;

/// Condition number max|ξ|/min|ξ| of the pencil used by [`infsup_spectrum`].
/// Problems up to `opts.cap` unknowns are solved densely; larger ones use
/// Lanczos iterations on N⁻¹K and K⁻¹N, converged to 1e-10 relative.
pub fn condition_number(
    sys: &SaddleSystem,
    v_norm: &Coo,
    m_norm: &Coo,
    opts: SpectrumOptions,
) -> Result<ConditionEstimate, SolverError> {
    let n = sys.reduce().matrix.nrows;
    if n <= opts.cap {
        let rep = infsup_spectrum(sys, v_norm, m_norm, opts)?;
        return Ok(ConditionEstimate {
            beta: rep.beta,
            max_abs: rep.max_abs,
            condition: rep.condition,
            method: SpectrumMethod::Dense,
        });
    }
    if n > SPARSE_CAP {
        return Err(SolverError::DimensionCapExceeded { dim: n, cap: SPARSE_CAP });
    }
    if v_norm.nrows != sys.nv() || m_norm.nrows != sys.nm() {
        return Err(SolverError::NormSizeMismatch {
            expected: sys.nv() + sys.nm(),
            got: v_norm.nrows + m_norm.nrows,
        });
    }
    let red = sys.reduce();
    let nm = m_norm.restrict(&red.free_m, &red.free_m);
    let norm = spaces::block_diag(&[v_norm, &nm]);
    let (beta, max_abs) = lanczos::extremes(&red.matrix, &norm, 1e-10, 600)?;
    Ok(ConditionEstimate {
        beta,
        max_abs,
        condition: max_abs / beta,
        method: SpectrumMethod::Lanczos,
    })
}

/// Dense solve of the symmetric pencil (K, N) with N SPD.
pub fn generalized_symmetric(
    k: &Coo,
    n_mat: &Coo,
    opts: SpectrumOptions,
) -> Result<SpectrumReport, SolverError> {
    faer::set_global_parallelism(Par::Seq);
    let n = k.nrows;
    let dense = |m: &Coo| {
        let mut d = Mat::<f64>::zeros(n, n);
        for &(i, j, v) in &m.entries {
            d[(i, j)] += v;
        }
        d
    };
    let kd = dense(k);
    let nd = dense(n_mat);
    // Cholesky of N; the block-diagonal structure of N is preserved by the
    // factor, so each block is scaled independently.
    let llt = nd.llt(Side::Lower).map_err(|_| SolverError::NormNotSpd)?;
    let l = llt.L().to_owned();
    // C = L⁻¹ K L⁻ᵀ
    let mut y = kd.clone();
    solve_lower_triangular_in_place(l.as_ref(), y.as_mut(), Par::Seq);
    let mut c = y.transpose().to_owned();
    solve_lower_triangular_in_place(l.as_ref(), c.as_mut(), Par::Seq);
    let c = Mat::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));

    let (values, rayleigh) = if opts.rayleigh_check {
        let evd = c
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| SolverError::Backend(format!("{e:?}")))?;
        let s = evd.S();
        let vals: Vec<f64> = (0..n).map(|i| s[i]).collect();
        (vals, Some(evd.U().to_owned()))
    } else {
        let vals = c
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| SolverError::Backend(format!("{e:?}")))?;
        (vals, None)
    };

    let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()));
    let cut = opts.null_tol * max_abs;
    let null_count = order.iter().filter(|&&i| values[i].abs() < cut).count();
    let beta_idx = order.get(null_count).copied();
    let beta = beta_idx.map_or(0.0, |i| values[i].abs());

    let rayleigh_beta = match (rayleigh, beta_idx) {
        (Some(u), Some(i)) => {
            // x = L⁻ᵀ y; xᵀKx / xᵀNx = yᵀCy / yᵀy.
            let mut x = Mat::from_fn(n, 1, |r, _| u[(r, i)]);
            solve_upper_from_lower(&l, &mut x);
            let xv: Vec<f64> = (0..n).map(|r| x[(r, 0)]).collect();
            let kx = k.matvec(&xv);
            let nx = n_mat.matvec(&xv);
            let num: f64 = kx.iter().zip(&xv).map(|(a, b)| a * b).sum();
            let den: f64 = nx.iter().zip(&xv).map(|(a, b)| a * b).sum();
            Some((num / den).abs())
        }
        _ => None,
    };

    Ok(SpectrumReport {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        beta,
        max_abs,
        condition: if beta > 0.0 { max_abs / beta } else { f64::INFINITY },
        null_count,
        rayleigh_beta,
    })
}

/// Solve Lᵀ x = b in place by back substitution.
fn solve_upper_from_lower(l: &Mat<f64>, x: &mut Mat<f64>) {
    let n = l.nrows();
    for i in (0..n).rev() {
        let mut s = x[(i, 0)];
        for j in i + 1..n {
            s -= l[(j, i)] * x[(j, 0)];
        }
        x[(i, 0)] = s / l[(i, i)];
    }
}

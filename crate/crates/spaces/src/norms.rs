//! Riesz matrices of the weighted norms used as preconditioners.

use netgraph::GraphMesh;

use crate::assemble::{bilinear, jump_matrix, mass, stiffness};
use crate::{Coo, FunctionSpace, SpaceError, SpaceKind};

/// Weights entering the graph norms.
#[derive(Debug, Clone)]
pub struct NormWeights {
    /// ℓ, the total network length.
    pub total_length: f64,
    /// α_j per graph vertex.
    pub alpha: Vec<f64>,
    /// Resistance per mesh cell.
    pub r_cell: Vec<f64>,
    /// Mean edge-midpoint resistance per graph vertex.
    pub r_vertex: Vec<f64>,
    /// Mean incident cell length per graph vertex.
    pub h_vertex: Vec<f64>,
    /// Vertices whose jumps enter the flux norm.
    pub jump_vertices: Vec<usize>,
}

impl NormWeights {
    /// Weights for `mesh` with resistance `r(edge, s)`; jumps are measured at
    /// internal vertices.
    pub fn new(mesh: &GraphMesh, r: impl Fn(usize, f64) -> f64) -> Self {
        let g = mesh.graph();
        let r_cell = crate::assemble::cellwise(mesh, &r);
        let r_vertex = (0..g.num_vertices())
            .map(|v| {
                let (sum, n) = g.incident(v).fold((0.0, 0usize), |(s, n), (e, _)| {
                    (s + r(e, 0.5 * g.edge(e).length), n + 1)
                });
                sum / n as f64
            })
            .collect();
        Self {
            total_length: g.total_length(),
            alpha: (0..g.num_vertices()).map(|v| g.vertex_alpha(v)).collect(),
            r_cell,
            r_vertex,
            h_vertex: (0..g.num_vertices()).map(|v| mesh.vertex_mean_h(v)).collect(),
            jump_vertices: g.internal_vertices(),
        }
    }

    pub fn unit(mesh: &GraphMesh) -> Self {
        Self::new(mesh, |_, _| 1.0)
    }

    pub fn with_jump_vertices(mut self, vertices: Vec<usize>) -> Self {
        self.jump_vertices = vertices;
        self
    }

    fn validate(&self) -> Result<(), SpaceError> {
        let check = |what, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SpaceError::SingularWeight { what, value: v })
            }
        };
        check("total length", self.total_length)?;
        for &a in &self.alpha {
            check("alpha", a)?;
        }
        for &r in self.r_cell.iter().chain(&self.r_vertex) {
            check("resistance", r)?;
        }
        for &h in &self.h_vertex {
            check("vertex mesh size", h)?;
        }
        Ok(())
    }
}

/// Scalings of the dual mixed norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualNorm {
    /// ‖q‖² + ‖∂q‖² + Σ⟦q⟧², ‖p‖² + Σ p_V².
    Unweighted,
    /// Total-length and α weights.
    Weighted,
    /// h_j weights on the vertex terms.
    MeshWeighted,
    /// Weighted norm with resistance scaling.
    RRobust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormChoice {
    /// (R q, q) on the primal flux space.
    PrimalV,
    /// (R⁻¹ ∂p, ∂p) on the primal pressure space.
    PrimalM,
    /// Flux norm of the dual formulation.
    DualV(DualNorm),
    /// Edge pressure part of the dual formulation.
    DualPressure(DualNorm),
    /// Vertex multiplier part of the dual formulation.
    DualMultiplier(DualNorm),
}

/// Symmetric positive (semi-)definite matrix realizing the chosen squared norm.
pub fn norm_matrix(
    space: &FunctionSpace,
    choice: NormChoice,
    w: &NormWeights,
) -> Result<Coo, SpaceError> {
    w.validate()?;
    let l2 = w.total_length * w.total_length;
    let ones = vec![1.0; space.mesh().num_cells()];
    let inv_r: Vec<f64> = w.r_cell.iter().map(|r| 1.0 / r).collect();
    let edge_only = |norm| {
        if space.is_edge_space() {
            Ok(())
        } else {
            Err(SpaceError::NormSpaceMismatch { norm })
        }
    };
    match choice {
        NormChoice::PrimalV => {
            edge_only("primal V")?;
            Ok(mass(space, &w.r_cell).compress())
        }
        NormChoice::PrimalM => {
            edge_only("primal M")?;
            Ok(stiffness(space, &inv_r).compress())
        }
        NormChoice::DualV(kind) => {
            edge_only("dual V")?;
            let (m, d) = match kind {
                DualNorm::Unweighted | DualNorm::MeshWeighted => (ones.clone(), ones),
                DualNorm::Weighted => (ones.clone(), vec![l2; ones.len()]),
                DualNorm::RRobust => (w.r_cell.clone(), w.r_cell.iter().map(|r| l2 * r).collect()),
            };
            let jump_w: Vec<f64> = w
                .jump_vertices
                .iter()
                .map(|&v| match kind {
                    DualNorm::Unweighted => 1.0,
                    DualNorm::Weighted => l2 / (w.alpha[v] * w.alpha[v]),
                    DualNorm::MeshWeighted => 1.0 / w.h_vertex[v],
                    DualNorm::RRobust => l2 * w.r_vertex[v] / (w.alpha[v] * w.alpha[v]),
                })
                .collect();
            let mut out = mass(space, &m).add(&bilinear(space, space, true, true, &d));
            let j = jump_matrix(space, &w.jump_vertices);
            out = out.add(&gram(&j, &jump_w));
            Ok(out.compress())
        }
        NormChoice::DualPressure(kind) => {
            edge_only("dual pressure")?;
            let coef: Vec<f64> = match kind {
                DualNorm::Unweighted | DualNorm::MeshWeighted => ones,
                DualNorm::Weighted => vec![1.0 / l2; ones.len()],
                DualNorm::RRobust => inv_r.iter().map(|ir| ir / l2).collect(),
            };
            Ok(mass(space, &coef).compress())
        }
        NormChoice::DualMultiplier(kind) => {
            if !matches!(space.kind(), SpaceKind::VertexMultiplier(_)) {
                return Err(SpaceError::NormSpaceMismatch {
                    norm: "dual multiplier",
                });
            }
            let d: Vec<f64> = space
                .multiplier_vertices()
                .iter()
                .map(|&v| match kind {
                    DualNorm::Unweighted => 1.0,
                    DualNorm::Weighted => w.alpha[v] * w.alpha[v] / l2,
                    DualNorm::MeshWeighted => w.h_vertex[v],
                    DualNorm::RRobust => w.alpha[v] * w.alpha[v] / (l2 * w.r_vertex[v]),
                })
                .collect();
            Ok(Coo::diag(&d))
        }
    }
}

/// Jᵀ diag(d) J.
fn gram(j: &Coo, d: &[f64]) -> Coo {
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); j.nrows];
    for &(i, c, v) in &j.entries {
        rows[i].push((c, v));
    }
    let mut out = Coo::new(j.ncols, j.ncols);
    for (row, &w) in rows.iter().zip(d) {
        for &(a, va) in row {
            for &(b, vb) in row {
                out.push(a, b, w * va * vb);
            }
        }
    }
    out
}

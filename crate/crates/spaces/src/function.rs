use crate::{FunctionSpace, SpaceError, SpaceKind};

/// Coefficients of a discrete function over a [`FunctionSpace`].
#[derive(Debug, Clone)]
pub struct GraphFunction<'a> {
    pub space: &'a FunctionSpace,
    pub coeffs: Vec<f64>,
}

/// Edge and vertex parts of the graph divergence of a discrete flux.
#[derive(Debug, Clone)]
pub struct Divergence {
    /// Cellwise ∂_s q in a discontinuous space one degree lower.
    pub edge_space: FunctionSpace,
    pub edge: Vec<f64>,
    /// ⟦q⟧_j at every graph vertex.
    pub vertex: Vec<f64>,
}

impl<'a> GraphFunction<'a> {
    pub fn new(space: &'a FunctionSpace, coeffs: Vec<f64>) -> Result<Self, SpaceError> {
        if coeffs.len() != space.dim() {
            return Err(SpaceError::DimensionMismatch {
                expected: space.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: &'a FunctionSpace) -> Self {
        Self {
            space,
            coeffs: vec![0.0; space.dim()],
        }
    }

    /// Nodal interpolant of `f(edge, s)`. Shared vertex dofs of a globally
    /// continuous space take the value seen from the lowest-numbered edge.
    /// Multiplier spaces take `f` at the vertex via its first incident edge.
    pub fn interpolate(space: &'a FunctionSpace, f: impl Fn(usize, f64) -> f64) -> Self {
        let mesh = space.mesh();
        let mut coeffs = vec![f64::NAN; space.dim()];
        if space.is_edge_space() {
            for c in 0..mesh.num_cells() {
                let e = mesh.cell_edge(c);
                let (s0, s1) = mesh.cell_bounds(c);
                for (&d, &x) in space.cell_dofs(c).iter().zip(space.basis().nodes()) {
                    if coeffs[d].is_nan() {
                        coeffs[d] = f(e, s0 + x * (s1 - s0));
                    }
                }
            }
        } else {
            let g = mesh.graph();
            for (d, &v) in space.multiplier_vertices().iter().enumerate() {
                let (e, sign) = g.incident(v).next().expect("connected graph");
                let s = if sign > 0.0 { g.edge(e).length } else { 0.0 };
                coeffs[d] = f(e, s);
            }
        }
        Self { space, coeffs }
    }

    /// Value at arclength `s` of edge `e`. On a branch space the edge-local
    /// trace is returned at vertices.
    pub fn evaluate(&self, e: usize, s: f64) -> Result<f64, SpaceError> {
        if !self.space.is_edge_space() {
            return Err(SpaceError::NotAnEdgeSpace);
        }
        let (c, xi) = self.space.mesh().locate(e, s)?;
        Ok(self
            .space
            .cell_dofs(c)
            .iter()
            .zip(self.space.basis().values(xi))
            .map(|(&d, b)| self.coeffs[d] * b)
            .sum())
    }

    /// ∂_s at arclength `s` of edge `e`.
    pub fn derivative(&self, e: usize, s: f64) -> Result<f64, SpaceError> {
        if !self.space.is_edge_space() {
            return Err(SpaceError::NotAnEdgeSpace);
        }
        let mesh = self.space.mesh();
        let (c, xi) = mesh.locate(e, s)?;
        let h = mesh.cell_length(c);
        Ok(self
            .space
            .cell_dofs(c)
            .iter()
            .zip(self.space.basis().derivs(xi))
            .map(|(&d, b)| self.coeffs[d] * b / h)
            .sum())
    }

    /// ⟦q⟧_v = Σ_in q_i(v) − Σ_out q_i(v).
    pub fn jump(&self, v: usize) -> Result<f64, SpaceError> {
        if !self.space.is_edge_space() {
            return Err(SpaceError::NotAnEdgeSpace);
        }
        let g = self.space.mesh().graph();
        Ok(g.incident(v)
            .map(|(e, sign)| {
                let val: f64 = self
                    .space
                    .edge_trace(e, sign > 0.0)
                    .into_iter()
                    .map(|(d, b)| self.coeffs[d] * b)
                    .sum();
                sign * val
            })
            .sum())
    }

    /// Graph divergence: cellwise derivative plus vertex jumps.
    pub fn divergence(&self) -> Result<Divergence, SpaceError> {
        let k = match self.space.kind() {
            SpaceKind::CgBranch(k) | SpaceKind::CgGlobal(k) | SpaceKind::DgBranch(k) => *k,
            SpaceKind::VertexMultiplier(_) => return Err(SpaceError::NotAnEdgeSpace),
        };
        let mesh = self.space.mesh_arc();
        let edge_space = FunctionSpace::new(mesh.clone(), SpaceKind::DgBranch(k.saturating_sub(1)))?;
        let mut edge = vec![0.0; edge_space.dim()];
        if k > 0 {
            for c in 0..mesh.num_cells() {
                let h = mesh.cell_length(c);
                let dofs = self.space.cell_dofs(c);
                // The derivative has degree k-1, so matching at the nodes of
                // the lower-degree basis is exact.
                for (&target, &x) in edge_space.cell_dofs(c).iter().zip(edge_space.basis().nodes()) {
                    edge[target] = dofs
                        .iter()
                        .zip(self.space.basis().derivs(x))
                        .map(|(&d, b)| self.coeffs[d] * b / h)
                        .sum();
                }
            }
        }
        let vertex = (0..mesh.graph().num_vertices())
            .map(|v| self.jump(v))
            .collect::<Result<_, _>>()?;
        Ok(Divergence {
            edge_space,
            edge,
            vertex,
        })
    }
}

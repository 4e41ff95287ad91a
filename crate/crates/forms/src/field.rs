use std::collections::BTreeMap;
use std::sync::Arc;

use netgraph::GraphMesh;

use crate::FormsError;

/// A scalar field on the edges, evaluated at (edge, arclength).
pub type Field = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

pub fn constant(value: f64) -> Field {
    Arc::new(move |_, _| value)
}

/// Lumped resistance, cross-section area and effective viscosity along the
/// edges at one instant.
#[derive(Clone)]
pub struct ResistanceField {
    pub resistance: Field,
    pub area: Field,
    pub nu_eff: Field,
}

impl ResistanceField {
    pub fn new(resistance: Field, area: Field, nu_eff: Field) -> Self {
        Self {
            resistance,
            area,
            nu_eff,
        }
    }

    /// R = `r`, A = 1, ν_eff = 0.
    pub fn uniform(r: f64) -> Self {
        Self::new(constant(r), constant(1.0), constant(0.0))
    }

    pub fn with_nu_eff(mut self, nu_eff: Field) -> Self {
        self.nu_eff = nu_eff;
        self
    }

    /// Resistance at cell midpoints; rejects nonpositive or non-finite samples.
    pub fn sample_resistance(&self, mesh: &GraphMesh) -> Result<Vec<f64>, FormsError> {
        sample(mesh, &self.resistance, "resistance", false)
    }

    pub fn sample_area(&self, mesh: &GraphMesh) -> Result<Vec<f64>, FormsError> {
        sample(mesh, &self.area, "area", false)
    }

    /// Effective viscosity at cell midpoints (zero allowed).
    pub fn sample_nu_eff(&self, mesh: &GraphMesh) -> Result<Vec<f64>, FormsError> {
        sample(mesh, &self.nu_eff, "effective viscosity", true)
    }
}

impl std::fmt::Debug for ResistanceField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ResistanceField { .. }")
    }
}

fn sample(
    mesh: &GraphMesh,
    field: &Field,
    what: &'static str,
    allow_zero: bool,
) -> Result<Vec<f64>, FormsError> {
    (0..mesh.num_cells())
        .map(|c| {
            let (e, s) = (mesh.cell_edge(c), mesh.cell_midpoint(c));
            let v = field(e, s);
            let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
            if ok {
                Ok(v)
            } else {
                Err(FormsError::InconsistentField {
                    what,
                    edge: e,
                    s,
                    value: v,
                })
            }
        })
        .collect()
}

/// Right-hand side data of the network equations.
#[derive(Clone)]
pub struct SourceData {
    /// Edge part of the divergence datum, ∇_𝒢·q = f.
    pub f_edge: Field,
    /// Vertex part of the divergence datum (⟦q⟧_j = f_j); empty means zero.
    pub f_vertex: Vec<f64>,
    /// Edge momentum source.
    pub g: Field,
    /// Boundary traction datum p̃ref per boundary vertex; missing entries are 0.
    /// For the hydraulic model the boundary pressure is p = −p̃ref.
    pub p_ref: BTreeMap<usize, f64>,
}

impl SourceData {
    pub fn zero() -> Self {
        Self {
            f_edge: constant(0.0),
            f_vertex: Vec::new(),
            g: constant(0.0),
            p_ref: BTreeMap::new(),
        }
    }

    pub fn with_f(mut self, f: Field) -> Self {
        self.f_edge = f;
        self
    }

    pub fn with_g(mut self, g: Field) -> Self {
        self.g = g;
        self
    }

    pub fn with_traction(mut self, vertex: usize, p_ref: f64) -> Self {
        self.p_ref.insert(vertex, p_ref);
        self
    }

    /// Prescribe the physical pressure at a boundary vertex.
    pub fn with_boundary_pressure(self, vertex: usize, p: f64) -> Self {
        self.with_traction(vertex, -p)
    }

    pub fn traction(&self, vertex: usize) -> f64 {
        self.p_ref.get(&vertex).copied().unwrap_or(0.0)
    }

    pub fn vertex_source(&self, vertex: usize) -> f64 {
        self.f_vertex.get(vertex).copied().unwrap_or(0.0)
    }
}

impl std::fmt::Debug for SourceData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceData")
            .field("f_vertex", &self.f_vertex)
            .field("p_ref", &self.p_ref)
            .finish_non_exhaustive()
    }
}

/// Divergence datum produced by prescribed wall motion: f = −σ ∂_t A with
/// σ = 1 for the mass balance ∂_s q + ∂_t A = 0 and σ = −1 for
/// ∂_s q = ∂_t A. The momentum source is g = ν_eff ∂_s f, differentiated
/// numerically inside each edge.
pub fn source_from_wall_motion(
    dadt: Field,
    nu_eff: Field,
    lengths: Vec<f64>,
    sign: f64,
) -> SourceData {
    let f: Field = {
        let dadt = dadt.clone();
        Arc::new(move |e, s| -sign * dadt(e, s))
    };
    let g: Field = {
        let f = f.clone();
        Arc::new(move |e, s| {
            let l = lengths[e];
            let d = 1e-6 * l;
            let (a, b) = ((s - d).max(0.0), (s + d).min(l));
            let dfds = (f(e, b) - f(e, a)) / (b - a);
            nu_eff(e, s) * dfds
        })
    };
    SourceData::zero().with_f(f).with_g(g)
}

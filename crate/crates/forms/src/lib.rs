//! Variational forms of the hydraulic and Stokes–Brinkman network models.
//!
//! Sign conventions: ⟦q⟧_j sums incoming minus outgoing traces, the
//! divergence datum satisfies ∂_s q = f on edges and ⟦q⟧_j = f_j at vertices,
//! and the boundary datum is the traction p̃ref (pressure p = −p̃ref for the
//! hydraulic model).

mod field;
mod system;

use std::sync::Arc;

use netgraph::GraphMesh;
use spaces::assemble::{bilinear, jump_matrix, load, mass, stiffness};
use spaces::{FunctionSpace, SpaceError, SpaceKind, VertexSet};

pub use field::{constant, source_from_wall_motion, Field, ResistanceField, SourceData};
pub use system::{ReducedSystem, SaddleSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormsError {
    #[error("{what} = {value} at edge {edge}, s = {s} is not admissible")]
    InconsistentField {
        what: &'static str,
        edge: usize,
        s: f64,
        value: f64,
    },
    #[error("degree {0} is not supported by this pairing")]
    UnsupportedDegree(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Primal mixed form: V = DG_{k−1}, M = CG_k with Dirichlet pressure
/// p = −p̃ref at boundary vertices.
pub fn assemble_primal(
    mesh: &Arc<GraphMesh>,
    field: &ResistanceField,
    src: &SourceData,
    k: usize,
) -> Result<SaddleSystem, FormsError> {
    if k < 1 {
        return Err(FormsError::UnsupportedDegree(k));
    }
    let v = FunctionSpace::new(mesh.clone(), SpaceKind::DgBranch(k - 1))?;
    let m = FunctionSpace::new(mesh.clone(), SpaceKind::CgGlobal(k))?;
    let r = field.sample_resistance(mesh)?;
    let ones = vec![1.0; mesh.num_cells()];

    let a = mass(&v, &r).compress();
    let b = bilinear(&m, &v, true, false, &ones).compress();
    let rhs_v = load(&v, false, &*src.g);
    let mut rhs_m: Vec<f64> = load(&m, false, &*src.f_edge).iter().map(|x| -x).collect();
    let g = mesh.graph();
    // (q, ∂φ) = −(∂q, φ) + Σ ⟦q⟧ φ(v), hence the vertex datum enters with +.
    for j in g.internal_vertices() {
        rhs_m[m.vertex_dof(j).expect("vertex dof")] += src.vertex_source(j);
    }
    let m_fixed = g
        .boundary_vertices()
        .into_iter()
        .map(|j| (m.vertex_dof(j).expect("vertex dof"), -src.traction(j)))
        .collect();
    Ok(SaddleSystem {
        a,
        b,
        rhs_v,
        rhs_m,
        v_space: v,
        m_spaces: vec![m],
        m_fixed,
    })
}

/// Which vertices carry a multiplier in the dual forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Multipliers {
    /// One per vertex; boundary multipliers are fixed by the traction datum.
    #[default]
    All,
    /// Internal vertices only; the traction enters the right-hand side.
    Internal,
}

/// Pressure space paired with branch-wise continuous fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PressurePairing {
    /// DG_{k−1} edge pressures (Raviart–Thomas type).
    #[default]
    Discontinuous,
    /// CG_{k−1} edge pressures (Taylor–Hood type), needs k ≥ 2.
    Continuous,
}

/// Weight in the zero-order term of the dual a-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxMass {
    /// (R q, ψ).
    #[default]
    Resistance,
    /// (q, ψ), the literal form used in the analysis with R = 1.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualOptions {
    pub k: usize,
    pub pressure: PressurePairing,
    pub multipliers: Multipliers,
    pub flux_mass: FluxMass,
    /// Add the viscous term (ν_eff ∂q, ∂ψ) of the Stokes–Brinkman model.
    pub viscous: bool,
}

impl DualOptions {
    pub fn hydraulic(k: usize) -> Self {
        Self {
            k,
            pressure: PressurePairing::Discontinuous,
            multipliers: Multipliers::All,
            flux_mass: FluxMass::Resistance,
            viscous: false,
        }
    }

    pub fn stokes_brinkman(k: usize) -> Self {
        Self {
            pressure: PressurePairing::Continuous,
            viscous: true,
            ..Self::hydraulic(k)
        }
    }
}

/// Dual mixed hydraulic form with V = Π CG_k(Λ_i), M = DG_{k−1} × ℝ^m.
pub fn assemble_dual_hydraulic(
    mesh: &Arc<GraphMesh>,
    field: &ResistanceField,
    src: &SourceData,
    k: usize,
) -> Result<SaddleSystem, FormsError> {
    assemble_dual(mesh, field, src, DualOptions::hydraulic(k))
}

/// Dual Stokes–Brinkman form with the branch-wise Taylor–Hood pairing.
pub fn assemble_dual_stokes_brinkman(
    mesh: &Arc<GraphMesh>,
    field: &ResistanceField,
    src: &SourceData,
    k: usize,
) -> Result<SaddleSystem, FormsError> {
    assemble_dual(mesh, field, src, DualOptions::stokes_brinkman(k))
}

pub fn assemble_dual(
    mesh: &Arc<GraphMesh>,
    field: &ResistanceField,
    src: &SourceData,
    opts: DualOptions,
) -> Result<SaddleSystem, FormsError> {
    let k = opts.k;
    let min_k = match opts.pressure {
        PressurePairing::Discontinuous => 1,
        PressurePairing::Continuous => 2,
    };
    if k < min_k {
        return Err(FormsError::UnsupportedDegree(k));
    }
    let g = mesh.graph();
    let v = FunctionSpace::new(mesh.clone(), SpaceKind::CgBranch(k))?;
    let p = FunctionSpace::new(
        mesh.clone(),
        match opts.pressure {
            PressurePairing::Discontinuous => SpaceKind::DgBranch(k - 1),
            PressurePairing::Continuous => SpaceKind::CgGlobal(k - 1),
        },
    )?;
    let set = match opts.multipliers {
        Multipliers::All => VertexSet::All,
        Multipliers::Internal => VertexSet::Internal,
    };
    let lam = FunctionSpace::new(mesh.clone(), SpaceKind::VertexMultiplier(set))?;

    let ones = vec![1.0; mesh.num_cells()];
    let zero_order = match opts.flux_mass {
        FluxMass::Resistance => field.sample_resistance(mesh)?,
        FluxMass::Unit => ones.clone(),
    };
    let mut a = mass(&v, &zero_order);
    if opts.viscous {
        a = a.add(&stiffness(&v, &field.sample_nu_eff(mesh)?));
    }

    // b(q, φ) = −(∂_s q, φ_E) − Σ ⟦q⟧_j φ_j
    let bp = bilinear(&p, &v, false, true, &ones).scaled(-1.0);
    let bl = jump_matrix(&v, lam.multiplier_vertices()).scaled(-1.0);
    let mut b = spaces::Coo::new(p.dim() + lam.dim(), v.dim());
    b.add_block(0, 0, &bp);
    b.add_block(p.dim(), 0, &bl);

    let mut rhs_v = load(&v, false, &*src.g);
    let mut rhs_m: Vec<f64> = load(&p, false, &*src.f_edge).iter().map(|x| -x).collect();
    rhs_m.extend(lam.multiplier_vertices().iter().map(|&j| -src.vertex_source(j)));

    let mut m_fixed = Vec::new();
    match opts.multipliers {
        Multipliers::All => {
            // Eliminating φ_j = p̃ref reproduces the boundary term of L.
            for (d, &j) in lam.multiplier_vertices().iter().enumerate() {
                if g.is_boundary(j) {
                    m_fixed.push((p.dim() + d, src.traction(j)));
                }
            }
        }
        Multipliers::Internal => {
            for j in g.boundary_vertices() {
                let (e, sigma) = g.incident(j).next().expect("boundary vertex has an edge");
                for (d, val) in v.edge_trace(e, sigma > 0.0) {
                    rhs_v[d] += sigma * src.traction(j) * val;
                }
            }
        }
    }

    Ok(SaddleSystem {
        a: a.compress(),
        b: b.compress(),
        rhs_v,
        rhs_m,
        v_space: v,
        m_spaces: vec![p, lam],
        m_fixed,
    })
}

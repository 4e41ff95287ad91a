use std::sync::Arc;

use forms::{assemble_dual, assemble_primal, DualOptions, ResistanceField, SourceData};
use netgraph::{GraphMesh, SpatialGraph};
use solvers::{condition_number, ConditionEstimate, SpectrumOptions};
use spaces::{norm_matrix, DualNorm, NormChoice, NormWeights};

use crate::honeycomb::honeycomb;
use crate::trees::conditioning_tree;
use crate::NetgenError;

/// Internal-vertex counts of the tree family.
pub const TREE_SIZES: [usize; 7] = [1, 3, 7, 15, 28, 50, 108];
/// Lattice sizes k of the honeycomb family (2(k+1)² internal vertices).
pub const HONEYCOMB_SIZES: [usize; 7] = [1, 2, 3, 4, 5, 6, 7];
/// Mesh sizes of the conditioning tables.
pub const TABLE_H: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Tree,
    Honeycomb,
}

impl Family {
    /// Default member sizes: bifurcations for trees, lattice size for
    /// honeycombs.
    pub fn sizes(self) -> &'static [usize] {
        match self {
            Family::Tree => &TREE_SIZES,
            Family::Honeycomb => &HONEYCOMB_SIZES,
        }
    }

    pub fn member(self, size: usize) -> Result<SpatialGraph, NetgenError> {
        Ok(match self {
            Family::Tree => conditioning_tree(size),
            Family::Honeycomb => honeycomb(size)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableNorm {
    /// Primal formulation with its natural norms.
    Primal,
    /// Dual hydraulic formulation with the given norm scaling.
    Dual(DualNorm),
}

/// Condition number of the discretization of `graph` at mesh size `h`
/// with uniform resistance `r`.
pub fn condition_entry(
    graph: &SpatialGraph,
    h: f64,
    norm: TableNorm,
    r: f64,
    opts: SpectrumOptions,
) -> Result<ConditionEstimate, NetgenError> {
    let dual = match norm {
        TableNorm::Primal => None,
        TableNorm::Dual(kind) => Some((DualOptions::hydraulic(1), kind)),
    };
    condition_with(graph, h, dual, r, opts)
}

/// As [`condition_entry`] with explicit dual options; `None` selects the
/// primal k = 1 formulation.
pub fn condition_with(
    graph: &SpatialGraph,
    h: f64,
    dual: Option<(DualOptions, DualNorm)>,
    r: f64,
    opts: SpectrumOptions,
) -> Result<ConditionEstimate, NetgenError> {
    let mesh = Arc::new(GraphMesh::uniform(graph, h)?);
    let field = ResistanceField::uniform(r);
    let w = NormWeights::new(&mesh, |_, _| r);
    let src = SourceData::zero();
    let est = match dual {
        None => {
            let sys = assemble_primal(&mesh, &field, &src, 1)?;
            let nv = norm_matrix(&sys.v_space, NormChoice::PrimalV, &w)?;
            let nm = norm_matrix(&sys.m_spaces[0], NormChoice::PrimalM, &w)?;
            condition_number(&sys, &nv, &nm, opts)?
        }
        Some((dopts, kind)) => {
            let sys = assemble_dual(&mesh, &field, &src, dopts)?;
            let nv = norm_matrix(&sys.v_space, NormChoice::DualV(kind), &w)?;
            let np = norm_matrix(&sys.m_spaces[0], NormChoice::DualPressure(kind), &w)?;
            let nl = norm_matrix(&sys.m_spaces[1], NormChoice::DualMultiplier(kind), &w)?;
            condition_number(&sys, &nv, &sys.m_norm(&[np, nl]), opts)?
        }
    };
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionRow {
    /// Internal vertex count of the member.
    pub n: usize,
    pub h: f64,
    pub condition: f64,
}

/// Table of condition numbers over a family and the standard mesh sizes.
/// Rows whose solve fails are returned as errors next to their position.
pub fn conditioning_table(
    family: Family,
    sizes: &[usize],
    hs: &[f64],
    norm: TableNorm,
    r: f64,
    opts: SpectrumOptions,
) -> Vec<Result<ConditionRow, (usize, f64, NetgenError)>> {
    let mut out = Vec::new();
    for &size in sizes {
        let graph = match family.member(size) {
            Ok(g) => g,
            Err(e) => {
                out.push(Err((size, f64::NAN, e)));
                continue;
            }
        };
        let n = graph.internal_vertices().len();
        for &h in hs {
            out.push(
                condition_entry(&graph, h, norm, r, opts)
                    .map(|est| ConditionRow {
                        n,
                        h,
                        condition: est.condition,
                    })
                    .map_err(|e| (n, h, e)),
            );
        }
    }
    out
}

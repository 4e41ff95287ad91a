use std::sync::Arc;

use netgraph::GraphMesh;

use crate::basis::Lagrange;
use crate::SpaceError;

/// Which vertices carry a multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexSet {
    All,
    Internal,
    Boundary,
    List(Vec<usize>),
}

impl VertexSet {
    pub fn resolve(&self, mesh: &GraphMesh) -> Vec<usize> {
        let g = mesh.graph();
        match self {
            VertexSet::All => (0..g.num_vertices()).collect(),
            VertexSet::Internal => g.internal_vertices(),
            VertexSet::Boundary => g.boundary_vertices(),
            VertexSet::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceKind {
    /// Continuous piecewise polynomials of degree k over the whole graph.
    CgGlobal(usize),
    /// Continuous on each edge, independent across vertices.
    CgBranch(usize),
    /// Discontinuous piecewise polynomials of the given degree (may be 0).
    DgBranch(usize),
    /// One real number per designated vertex.
    VertexMultiplier(VertexSet),
}

/// A finite element space with its degree-of-freedom map.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    mesh: Arc<GraphMesh>,
    kind: SpaceKind,
    basis: Lagrange,
    dim: usize,
    /// Flattened per-cell dof lists (basis.len() entries per cell); empty
    /// for multiplier spaces.
    cell_dofs: Vec<usize>,
    /// Multiplier vertices; empty for edge spaces.
    vertices: Vec<usize>,
}

impl FunctionSpace {
    pub fn new(mesh: Arc<GraphMesh>, kind: SpaceKind) -> Result<Self, SpaceError> {
        let nc = mesh.num_cells();
        let (basis, dim, cell_dofs, vertices) = match &kind {
            SpaceKind::CgGlobal(k) => {
                let k = *k;
                if k < 1 {
                    return Err(SpaceError::UnsupportedDegree(k));
                }
                let nn = mesh.num_nodes();
                let mut dofs = Vec::with_capacity(nc * (k + 1));
                for c in 0..nc {
                    let (a, b) = mesh.cell_nodes(c);
                    dofs.push(a);
                    for j in 1..k {
                        dofs.push(nn + c * (k - 1) + j - 1);
                    }
                    dofs.push(b);
                }
                (Lagrange::new(k), nn + nc * (k - 1), dofs, Vec::new())
            }
            SpaceKind::CgBranch(k) => {
                let k = *k;
                if k < 1 {
                    return Err(SpaceError::UnsupportedDegree(k));
                }
                let mut dofs = Vec::with_capacity(nc * (k + 1));
                let mut offset = 0;
                for e in 0..mesh.graph().num_edges() {
                    let n = mesh.cells_per_edge()[e];
                    for jc in 0..n {
                        for j in 0..=k {
                            dofs.push(offset + jc * k + j);
                        }
                    }
                    offset += n * k + 1;
                }
                (Lagrange::new(k), offset, dofs, Vec::new())
            }
            SpaceKind::DgBranch(d) => {
                let d = *d;
                let dofs = (0..nc * (d + 1)).collect();
                (Lagrange::new(d), nc * (d + 1), dofs, Vec::new())
            }
            SpaceKind::VertexMultiplier(set) => {
                let vs = set.resolve(&mesh);
                let m = mesh.graph().num_vertices();
                if let Some(&bad) = vs.iter().find(|&&v| v >= m) {
                    return Err(SpaceError::UnknownVertex(bad));
                }
                (Lagrange::new(0), vs.len(), Vec::new(), vs)
            }
        };
        Ok(Self {
            mesh,
            kind,
            basis,
            dim,
            cell_dofs,
            vertices,
        })
    }

    pub fn mesh(&self) -> &GraphMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> Arc<GraphMesh> {
        self.mesh.clone()
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &Lagrange {
        &self.basis
    }

    /// Polynomial degree of the edge basis.
    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn is_edge_space(&self) -> bool {
        !matches!(self.kind, SpaceKind::VertexMultiplier(_))
    }

    /// Global dofs of cell `c` in local-node order.
    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        let n = self.basis.len();
        &self.cell_dofs[c * n..(c + 1) * n]
    }

    /// Vertices carrying the multiplier dofs, in dof order.
    pub fn multiplier_vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Dof holding the value at graph vertex `v` (continuous global spaces only).
    pub fn vertex_dof(&self, v: usize) -> Option<usize> {
        match self.kind {
            SpaceKind::CgGlobal(_) => Some(v),
            SpaceKind::VertexMultiplier(_) => self.vertices.iter().position(|&w| w == v),
            _ => None,
        }
    }

    /// Dofs sitting on boundary vertices of a globally continuous space.
    pub fn boundary_dofs(&self) -> Vec<usize> {
        match self.kind {
            SpaceKind::CgGlobal(_) => self.mesh.graph().boundary_vertices(),
            _ => Vec::new(),
        }
    }

    /// Dofs and basis values giving the trace of edge `e` at its tail
    /// (`at_head = false`) or head. For DG spaces this is the one-sided trace.
    pub fn edge_trace(&self, e: usize, at_head: bool) -> Vec<(usize, f64)> {
        let cells = self.mesh.edge_cells(e);
        let (c, xi) = if at_head {
            (cells.end - 1, 1.0)
        } else {
            (cells.start, 0.0)
        };
        self.cell_dofs(c)
            .iter()
            .zip(self.basis.values(xi))
            .filter(|(_, v)| v.abs() > 1e-15)
            .map(|(&d, v)| (d, v))
            .collect()
    }
}

use crate::{GraphError, SpatialGraph};

/// Uniform 1D meshes on every edge, with global numbering.
///
/// Cells are numbered edge by edge. Mesh nodes are the graph vertices
/// (numbered as in the graph) followed by the interior nodes of each edge,
/// again edge by edge.
#[derive(Debug, Clone)]
pub struct GraphMesh {
    graph: SpatialGraph,
    cells_per_edge: Vec<usize>,
    cell_offset: Vec<usize>,
    node_offset: Vec<usize>,
    cell_edge: Vec<usize>,
}

impl GraphMesh {
    /// Split edge i into ⌈ℓ_i / h_target⌉ equal cells.
    pub fn uniform(graph: &SpatialGraph, h_target: f64) -> Result<Self, GraphError> {
        if !(h_target.is_finite() && h_target > 0.0) {
            return Err(GraphError::NonPositiveMeshSize(h_target));
        }
        let counts = graph
            .edges()
            .iter()
            .map(|e| {
                // Guard against ℓ/h landing a hair above an integer.
                let r = e.length / h_target;
                let n = (r - 1e-12 * r.max(1.0)).ceil();
                (n as usize).max(1)
            })
            .collect();
        Self::with_cells(graph, counts)
    }

    /// Mesh with an explicit cell count per edge.
    pub fn with_cells(graph: &SpatialGraph, cells_per_edge: Vec<usize>) -> Result<Self, GraphError> {
        if cells_per_edge.len() != graph.num_edges() {
            return Err(GraphError::MeshMismatch {
                expected: graph.num_edges(),
                got: cells_per_edge.len(),
            });
        }
        if let Some(e) = cells_per_edge.iter().position(|&n| n == 0) {
            return Err(GraphError::InvalidEdge {
                edge: e,
                reason: "an edge needs at least one cell".into(),
            });
        }
        let mut cell_offset = Vec::with_capacity(cells_per_edge.len() + 1);
        let mut node_offset = Vec::with_capacity(cells_per_edge.len() + 1);
        let mut cell_edge = Vec::new();
        let (mut c, mut nd) = (0, graph.num_vertices());
        for (e, &n) in cells_per_edge.iter().enumerate() {
            cell_offset.push(c);
            node_offset.push(nd);
            c += n;
            nd += n - 1;
            cell_edge.extend(std::iter::repeat(e).take(n));
        }
        cell_offset.push(c);
        node_offset.push(nd);
        Ok(Self {
            graph: graph.clone(),
            cells_per_edge,
            cell_offset,
            node_offset,
            cell_edge,
        })
    }

    /// Mesh with `n` cells on every edge.
    pub fn with_cells_each(graph: &SpatialGraph, n: usize) -> Result<Self, GraphError> {
        Self::with_cells(graph, vec![n; graph.num_edges()])
    }

    pub fn graph(&self) -> &SpatialGraph {
        &self.graph
    }

    pub fn cells_per_edge(&self) -> &[usize] {
        &self.cells_per_edge
    }

    pub fn num_cells(&self) -> usize {
        *self.cell_offset.last().unwrap()
    }

    pub fn num_nodes(&self) -> usize {
        *self.node_offset.last().unwrap()
    }

    /// Global cell indices of edge `e`.
    pub fn edge_cells(&self, e: usize) -> std::ops::Range<usize> {
        self.cell_offset[e]..self.cell_offset[e + 1]
    }

    pub fn cell_edge(&self, c: usize) -> usize {
        self.cell_edge[c]
    }

    /// Position of cell `c` within its edge.
    pub fn cell_local(&self, c: usize) -> usize {
        c - self.cell_offset[self.cell_edge[c]]
    }

    /// Length of the cells on edge `e`.
    pub fn edge_h(&self, e: usize) -> f64 {
        self.graph.edge(e).length / self.cells_per_edge[e] as f64
    }

    pub fn cell_length(&self, c: usize) -> f64 {
        self.edge_h(self.cell_edge[c])
    }

    /// Arclength interval [s0, s1] of cell `c` on its edge.
    pub fn cell_bounds(&self, c: usize) -> (f64, f64) {
        let e = self.cell_edge[c];
        let j = self.cell_local(c);
        let n = self.cells_per_edge[e];
        let l = self.graph.edge(e).length;
        let s0 = l * j as f64 / n as f64;
        let s1 = if j + 1 == n { l } else { l * (j + 1) as f64 / n as f64 };
        (s0, s1)
    }

    pub fn cell_midpoint(&self, c: usize) -> f64 {
        let (a, b) = self.cell_bounds(c);
        0.5 * (a + b)
    }

    /// Global node index of local node `j ∈ 0..=n_e` on edge `e`.
    pub fn edge_node(&self, e: usize, j: usize) -> usize {
        let n = self.cells_per_edge[e];
        let edge = self.graph.edge(e);
        if j == 0 {
            edge.tail
        } else if j == n {
            edge.head
        } else {
            self.node_offset[e] + j - 1
        }
    }

    /// The two mesh nodes bounding cell `c`, in arclength order.
    pub fn cell_nodes(&self, c: usize) -> (usize, usize) {
        let e = self.cell_edge[c];
        let j = self.cell_local(c);
        (self.edge_node(e, j), self.edge_node(e, j + 1))
    }

    /// Largest cell length.
    pub fn h(&self) -> f64 {
        (0..self.graph.num_edges())
            .map(|e| self.edge_h(e))
            .fold(0.0, f64::max)
    }

    /// Cell containing arclength `s` of edge `e` and the local coordinate
    /// ξ ∈ [0, 1] inside it.
    pub fn locate(&self, e: usize, s: f64) -> Result<(usize, f64), GraphError> {
        let l = self.graph.edge(e).length;
        let tol = 1e-12 * l;
        if !(s >= -tol && s <= l + tol) {
            return Err(GraphError::OutOfRange { edge: e, s, length: l });
        }
        let n = self.cells_per_edge[e];
        let h = l / n as f64;
        let j = ((s / h).floor().max(0.0) as usize).min(n - 1);
        let (s0, s1) = self.cell_bounds(self.cell_offset[e] + j);
        let xi = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
        Ok((self.cell_offset[e] + j, xi))
    }

    /// Mean length of the cells touching graph vertex `v`, taken over all
    /// incident edges.
    pub fn vertex_mean_h(&self, v: usize) -> f64 {
        let hs: Vec<f64> = self.graph.incident(v).map(|(e, _)| self.edge_h(e)).collect();
        hs.iter().sum::<f64>() / hs.len() as f64
    }
}

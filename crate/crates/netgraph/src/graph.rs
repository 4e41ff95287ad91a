use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::GraphError;

/// Role of a vessel segment in a vascular network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Artery,
    Capillary,
    Vein,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub position: [f64; 3],
}

impl Vertex {
    pub fn new(id: usize, position: [f64; 3]) -> Self {
        Self { id, position }
    }
}

/// Edge description as supplied by a caller or a file. `length = None`
/// means "use the Euclidean distance between the endpoints".
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub radius1: f64,
    pub ratio: f64,
    pub length: Option<f64>,
    pub kind: Option<EdgeKind>,
}

impl EdgeSpec {
    /// Edge with unit inner radius, ratio 3 and geometric length.
    pub fn plain(id: usize, tail: usize, head: usize) -> Self {
        Self {
            id,
            tail,
            head,
            radius1: 1.0,
            ratio: 3.0,
            length: None,
            kind: None,
        }
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = Some(length);
        self
    }

    pub fn with_radius(mut self, radius1: f64, ratio: f64) -> Self {
        self.radius1 = radius1;
        self.ratio = ratio;
        self
    }

    pub fn with_kind(mut self, kind: EdgeKind) -> Self {
        self.kind = Some(kind);
        self
    }
}

/// A validated edge. `tail` is the vertex at arclength 0, `head` the vertex
/// at arclength `length`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub length: f64,
    pub radius1: f64,
    pub ratio: f64,
    pub kind: Option<EdgeKind>,
    /// Whether `length` was given explicitly rather than derived.
    pub explicit_length: bool,
}

/// Connected, oriented metric graph with straight edges.
#[derive(Debug, Clone)]
pub struct SpatialGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    e_in: Vec<Vec<usize>>,
    e_out: Vec<Vec<usize>>,
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn check_contiguous(mut ids: Vec<usize>, what: &'static str) -> Result<(), GraphError> {
    ids.sort_unstable();
    for (expected, id) in ids.iter().enumerate() {
        if *id != expected {
            if expected > 0 && ids[expected - 1] == *id {
                return Err(GraphError::DuplicateId { what, id: *id });
            }
            return Err(GraphError::NonContiguousIds { what });
        }
    }
    Ok(())
}

impl SpatialGraph {
    /// Build and validate a graph. Vertices and edges may be given in any
    /// order; ids must be unique and contiguous from 0.
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<EdgeSpec>) -> Result<Self, GraphError> {
        check_contiguous(vertices.iter().map(|v| v.id).collect(), "vertex")?;
        check_contiguous(edges.iter().map(|e| e.id).collect(), "edge")?;
        vertices.sort_by_key(|v| v.id);
        edges.sort_by_key(|e| e.id);
        let m = vertices.len();
        if m == 0 {
            return Err(GraphError::Empty);
        }

        let mut built = Vec::with_capacity(edges.len());
        for e in edges {
            for v in [e.tail, e.head] {
                if v >= m {
                    return Err(GraphError::DanglingEdgeReference { edge: e.id, vertex: v });
                }
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop { edge: e.id });
            }
            let (length, explicit_length) = match e.length {
                Some(l) => (l, true),
                None => (
                    distance(vertices[e.tail].position, vertices[e.head].position),
                    false,
                ),
            };
            if !(length.is_finite() && length > 0.0) {
                return Err(GraphError::InvalidEdge {
                    edge: e.id,
                    reason: format!("length must be positive, got {length}"),
                });
            }
            if !(e.radius1.is_finite() && e.radius1 > 0.0) {
                return Err(GraphError::InvalidEdge {
                    edge: e.id,
                    reason: format!("radius1 must be positive, got {}", e.radius1),
                });
            }
            if !(e.ratio.is_finite() && e.ratio > 1.0) {
                return Err(GraphError::InvalidEdge {
                    edge: e.id,
                    reason: format!("radius ratio must exceed 1, got {}", e.ratio),
                });
            }
            built.push(Edge {
                id: e.id,
                tail: e.tail,
                head: e.head,
                length,
                radius1: e.radius1,
                ratio: e.ratio,
                kind: e.kind,
                explicit_length,
            });
        }

        let mut e_in = vec![Vec::new(); m];
        let mut e_out = vec![Vec::new(); m];
        for e in &built {
            e_out[e.tail].push(e.id);
            e_in[e.head].push(e.id);
        }

        let g = Self {
            vertices,
            edges: built,
            e_in,
            e_out,
        };
        if !g.is_connected() {
            return Err(GraphError::DisconnectedGraph);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let m = self.vertices.len();
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for (e, _) in self.incident(v) {
                let edge = &self.edges[e];
                let w = if edge.tail == v { edge.head } else { edge.tail };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == m
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edges ending at `v` (λ(ℓ) = v).
    pub fn edges_in(&self, v: usize) -> &[usize] {
        &self.e_in[v]
    }

    /// Edges starting at `v` (λ(0) = v).
    pub fn edges_out(&self, v: usize) -> &[usize] {
        &self.e_out[v]
    }

    /// Incident edges of `v` with orientation sign: +1 for incoming edges,
    /// -1 for outgoing ones. This is the sign used by the generalized jump.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.e_in[v]
            .iter()
            .map(|&e| (e, 1.0))
            .chain(self.e_out[v].iter().map(|&e| (e, -1.0)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.e_in[v].len() + self.e_out[v].len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// Partition of the vertex set into (internal, boundary), both sorted.
    pub fn classify_vertices(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.num_vertices()).partition(|&v| !self.is_boundary(v))
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        self.classify_vertices().0
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        self.classify_vertices().1
    }

    /// ℓ = Σ ℓ_i.
    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Sum of lengths of edges incident to `v`.
    pub fn incident_length(&self, v: usize) -> f64 {
        self.incident(v).map(|(e, _)| self.edges[e].length).sum()
    }

    /// α_j = sqrt(Σ_{incident} ℓ_i / m) with m the total vertex count.
    pub fn vertex_alpha(&self, v: usize) -> f64 {
        (self.incident_length(v) / self.num_vertices() as f64).sqrt()
    }

    /// Point on edge `e` at arclength `s`, straight-segment convention.
    pub fn point_on_edge(&self, e: usize, s: f64) -> [f64; 3] {
        let edge = &self.edges[e];
        let a = self.vertices[edge.tail].position;
        let b = self.vertices[edge.head].position;
        let t = s / edge.length;
        [
            a[0] + t * (b[0] - a[0]),
            a[1] + t * (b[1] - a[1]),
            a[2] + t * (b[2] - a[2]),
        ]
    }

    /// The input description of this graph, suitable for rebuilding it.
    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec {
                id: e.id,
                tail: e.tail,
                head: e.head,
                radius1: e.radius1,
                ratio: e.ratio,
                length: e.explicit_length.then_some(e.length),
                kind: e.kind,
            })
            .collect()
    }

    /// Copy of the graph with every inner radius replaced by `f(edge)`.
    pub fn map_radii(&self, f: impl Fn(&Edge) -> f64) -> Result<Self, GraphError> {
        let mut specs = self.edge_specs();
        for (spec, e) in specs.iter_mut().zip(&self.edges) {
            spec.radius1 = f(e);
        }
        Self::new(self.vertices.clone(), specs)
    }
}

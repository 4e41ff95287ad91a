use std::f64::consts::PI;
use std::sync::Arc;

use forms::{Field, ResistanceField, SourceData};
use netgraph::{EdgeSpec, SpatialGraph, Vertex};

/// The Y-shaped graph: root edge (0,0,0)→(0,0.5,0) and two daughters to
/// (∓0.5,1,0).
pub fn y_graph() -> SpatialGraph {
    SpatialGraph::new(
        vec![
            Vertex::new(0, [0.0, 0.0, 0.0]),
            Vertex::new(1, [0.0, 0.5, 0.0]),
            Vertex::new(2, [-0.5, 1.0, 0.0]),
            Vertex::new(3, [0.5, 1.0, 0.0]),
        ],
        vec![
            EdgeSpec::plain(0, 0, 1),
            EdgeSpec::plain(1, 1, 2),
            EdgeSpec::plain(2, 1, 3),
        ],
    )
    .expect("Y graph is valid")
}

/// Manufactured stationary solution of the hydraulic model on the Y graph
/// with R = 1 and A = 1.
#[derive(Debug, Clone)]
pub struct MmsCase {
    pub graph: SpatialGraph,
    /// Distance from the root at the tail of each edge.
    offsets: Vec<f64>,
}

pub fn y_mms() -> MmsCase {
    MmsCase {
        graph: y_graph(),
        offsets: vec![0.0, 0.5, 0.5],
    }
}

impl MmsCase {
    /// Distance from the root of the point at arclength `s` on edge `e`.
    pub fn root_distance(&self, e: usize, s: f64) -> f64 {
        self.offsets[e] + s
    }

    pub fn q(&self, e: usize, s: f64) -> f64 {
        let x = self.root_distance(e, s);
        let c = if e == 0 { 1.0 } else { 0.5 };
        c + (PI * x).cos() + (2.0 * PI * x).sin()
    }

    pub fn dq(&self, e: usize, s: f64) -> f64 {
        let x = self.root_distance(e, s);
        -PI * (PI * x).sin() + 2.0 * PI * (2.0 * PI * x).cos()
    }

    pub fn p(&self, e: usize, s: f64) -> f64 {
        let x = self.root_distance(e, s);
        (PI * x).sin() + (2.0 * PI * x).cos()
    }

    pub fn dp(&self, e: usize, s: f64) -> f64 {
        let x = self.root_distance(e, s);
        PI * (PI * x).cos() - 2.0 * PI * (2.0 * PI * x).sin()
    }

    /// ∂_s q.
    pub fn f(&self, e: usize, s: f64) -> f64 {
        self.dq(e, s)
    }

    /// R q + ∂_s p with R = 1.
    pub fn g(&self, e: usize, s: f64) -> f64 {
        self.q(e, s) + self.dp(e, s)
    }

    /// Exact pressure at a vertex.
    pub fn vertex_pressure(&self, v: usize) -> f64 {
        let (e, sigma) = self.graph.incident(v).next().expect("vertex has an edge");
        self.p(e, if sigma > 0.0 { self.graph.edge(e).length } else { 0.0 })
    }

    /// Exact ⟦q⟧ at a vertex (inflow minus outflow).
    pub fn vertex_jump(&self, v: usize) -> f64 {
        self.graph
            .incident(v)
            .map(|(e, sigma)| {
                let s = if sigma > 0.0 { self.graph.edge(e).length } else { 0.0 };
                sigma * self.q(e, s)
            })
            .sum()
    }

    pub fn field(&self) -> ResistanceField {
        ResistanceField::uniform(1.0)
    }

    /// f, g and the exact boundary pressures.
    pub fn source(&self) -> SourceData {
        let me = Arc::new(self.clone());
        let f: Field = {
            let me = me.clone();
            Arc::new(move |e, s| me.f(e, s))
        };
        let g: Field = {
            let me = me.clone();
            Arc::new(move |e, s| me.g(e, s))
        };
        let mut src = SourceData::zero().with_f(f).with_g(g);
        for v in self.graph.boundary_vertices() {
            src = src.with_boundary_pressure(v, self.vertex_pressure(v));
        }
        src
    }
}

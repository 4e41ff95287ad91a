//! Network JSON format.

use serde::{Deserialize, Serialize};

use crate::{EdgeKind, EdgeSpec, GraphError, SpatialGraph, Vertex};

#[derive(Debug, Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    id: usize,
    tail: usize,
    head: usize,
    radius1: f64,
    ratio: f64,
    length: Option<f64>,
    kind: Option<EdgeKind>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkRecord {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

impl SpatialGraph {
    pub fn to_json(&self) -> String {
        let rec = NetworkRecord {
            vertices: self
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    id: v.id,
                    x: v.position[0],
                    y: v.position[1],
                    z: v.position[2],
                })
                .collect(),
            edges: self
                .edge_specs()
                .into_iter()
                .map(|e| EdgeRecord {
                    id: e.id,
                    tail: e.tail,
                    head: e.head,
                    radius1: e.radius1,
                    ratio: e.ratio,
                    length: e.length,
                    kind: e.kind,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rec).expect("network records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let rec: NetworkRecord =
            serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
        let vertices = rec
            .vertices
            .into_iter()
            .map(|v| Vertex::new(v.id, [v.x, v.y, v.z]))
            .collect();
        let edges = rec
            .edges
            .into_iter()
            .map(|e| EdgeSpec {
                id: e.id,
                tail: e.tail,
                head: e.head,
                radius1: e.radius1,
                ratio: e.ratio,
                length: e.length,
                kind: e.kind,
            })
            .collect();
        SpatialGraph::new(vertices, edges)
    }
}

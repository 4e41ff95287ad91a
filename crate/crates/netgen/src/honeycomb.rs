use std::collections::BTreeMap;

use netgraph::{EdgeSpec, GraphError, SpatialGraph, Vertex};

/// Hexagonal lattice of `k` × `k` cells with unit edges, an inlet stem at
/// the lower left corner and an outlet stem at the top of the last column.
/// Each stem is two unit edges, so the graph has 2(k+1)² internal vertices
/// and two boundary vertices.
pub fn honeycomb(k: usize) -> Result<SpatialGraph, GraphError> {
    if k < 1 {
        return Err(GraphError::InvalidEdge {
            edge: 0,
            reason: "a honeycomb needs at least one row".into(),
        });
    }
    let rows = 2 * k + 2;
    // Lattice nodes (i, j): column i ∈ 0..=k, row j ∈ 0..rows, minus two
    // dangling corners.
    let removed = [(0, rows - 1), (k, (rows - 1) * (k % 2))];
    let mut ids = BTreeMap::new();
    let mut pos = Vec::new();
    for i in 0..=k {
        for j in 0..rows {
            if removed.contains(&(i, j)) {
                continue;
            }
            ids.insert((i, j), pos.len());
            let x = 0.5 + i as f64 + (i / 2) as f64 + (j % 2) as f64 * ((i % 2) as f64 - 0.5);
            let y = 3f64.sqrt() / 2.0 * j as f64;
            pos.push([x, y, 0.0]);
        }
    }
    let mut pairs = Vec::new();
    for i in 0..=k {
        for j in 0..rows - 1 {
            pairs.push(((i, j), (i, j + 1)));
        }
    }
    for i in 0..k {
        for j in (0..rows).filter(|j| i % 2 == j % 2) {
            pairs.push(((i, j), (i + 1, j)));
        }
    }
    let mut links: Vec<(usize, usize)> = pairs
        .into_iter()
        .filter_map(|(a, b)| Some((*ids.get(&a)?, *ids.get(&b)?)))
        .collect();

    let mut stem = |anchor: usize, dir: f64, inward: bool| {
        let p = pos[anchor];
        let mid = pos.len();
        pos.push([p[0] + dir, p[1], 0.0]);
        pos.push([p[0] + 2.0 * dir, p[1], 0.0]);
        let end = mid + 1;
        if inward {
            links.push((end, mid));
            links.push((mid, anchor));
        } else {
            links.push((anchor, mid));
            links.push((mid, end));
        }
    };
    let inlet = ids[&(0, 0)];
    let outlet_row = (0..rows).rev().find(|&j| ids.contains_key(&(k, j))).expect("column k is non-empty");
    let outlet = ids[&(k, outlet_row)];
    stem(inlet, -1.0, true);
    stem(outlet, 1.0, false);

    let vertices = pos.into_iter().enumerate().map(|(i, p)| Vertex::new(i, p)).collect();
    let edges = links
        .into_iter()
        .enumerate()
        .map(|(id, (t, h))| EdgeSpec::plain(id, t, h).with_length(1.0))
        .collect();
    SpatialGraph::new(vertices, edges)
}

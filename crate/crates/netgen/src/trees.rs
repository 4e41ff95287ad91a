use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_4;

use netgraph::{EdgeKind, EdgeSpec, GraphError, SpatialGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MurrayTreeSpec {
    pub generations: usize,
    /// Branching symmetry γ = R¹_{d1}/R¹_{d2} ∈ (0, 1].
    pub gamma: f64,
    pub root_radius: f64,
    /// ℓ_i = length_factor · R¹_i.
    pub length_factor: f64,
    /// R²/R¹.
    pub ratio: f64,
}

impl MurrayTreeSpec {
    pub fn new(generations: usize, gamma: f64, root_radius: f64) -> Self {
        Self {
            generations,
            gamma,
            root_radius,
            length_factor: 10.0,
            ratio: 3.0,
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |reason: String| Err(GraphError::InvalidEdge { edge: 0, reason });
        if self.generations < 1 {
            return bad("a tree needs at least one generation".into());
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad(format!("branching symmetry {} outside (0, 1]", self.gamma));
        }
        if !(self.root_radius > 0.0 && self.root_radius.is_finite()) {
            return bad(format!("root radius {} must be positive", self.root_radius));
        }
        if !(self.length_factor > 0.0) || !(self.ratio > 1.0) {
            return bad("length factor must be positive and radius ratio above 1".into());
        }
        Ok(())
    }
}

/// Daughter radii (R_{d1}, R_{d2}) with R_p³ = R_{d1}³ + R_{d2}³ and
/// R_{d1} = γ R_{d2}.
pub fn murray_daughters(parent: f64, gamma: f64) -> (f64, f64) {
    let d2 = parent / (1.0 + gamma.powi(3)).cbrt();
    (gamma * d2, d2)
}

struct Tip {
    vertex: usize,
    radius: f64,
    angle: f64,
    depth: usize,
}

/// Tree grown from a single root edge by bifurcating the oldest leaf until
/// `n_internal` bifurcations exist. The root vertex is 0.
fn grow(spec: &MurrayTreeSpec, n_internal: usize) -> (Vec<[f64; 3]>, Vec<EdgeSpec>, Vec<usize>) {
    let mut pos = vec![[0.0; 3]];
    let mut edges = Vec::new();
    let mut depth = Vec::new();
    let mut tips = VecDeque::new();
    let mut add = |pos: &mut Vec<[f64; 3]>, from: usize, r: f64, angle: f64, d: usize| {
        let l = spec.length_factor * r;
        let p = pos[from];
        pos.push([p[0] + l * angle.cos(), p[1] + l * angle.sin(), 0.0]);
        let v = pos.len() - 1;
        edges.push(
            EdgeSpec::plain(edges.len(), from, v)
                .with_length(l)
                .with_radius(r, spec.ratio)
                .with_kind(EdgeKind::Artery),
        );
        depth.push(d);
        Tip {
            vertex: v,
            radius: r,
            angle,
            depth: d,
        }
    };
    tips.push_back(add(&mut pos, 0, spec.root_radius, std::f64::consts::FRAC_PI_2, 0));
    for _ in 0..n_internal {
        let tip = tips.pop_front().expect("a tree always has a leaf");
        let (r1, r2) = murray_daughters(tip.radius, spec.gamma);
        // Spread shrinks with depth so the drawing stays readable.
        let spread = FRAC_PI_4 / (1.0 + 0.3 * tip.depth as f64);
        tips.push_back(add(&mut pos, tip.vertex, r1, tip.angle + spread, tip.depth + 1));
        tips.push_back(add(&mut pos, tip.vertex, r2, tip.angle - spread, tip.depth + 1));
    }
    (pos, edges, depth)
}

fn build(pos: Vec<[f64; 3]>, edges: Vec<EdgeSpec>) -> SpatialGraph {
    let vertices = pos.into_iter().enumerate().map(|(i, p)| Vertex::new(i, p)).collect();
    SpatialGraph::new(vertices, edges).expect("generated tree is valid")
}

/// Full binary Murray tree with `generations` levels: 2^N − 1 edges, root
/// inlet at vertex 0.
pub fn murray_tree(spec: &MurrayTreeSpec) -> Result<SpatialGraph, GraphError> {
    spec.validate()?;
    let (pos, edges, _) = grow(spec, (1 << (spec.generations - 1)) - 1);
    Ok(build(pos, edges))
}

/// Tree with exactly `n_internal` bifurcations, obtained by splitting leaves
/// in breadth-first order. Full trees are the special case n = 2^k − 1.
pub fn pruned_tree(spec: &MurrayTreeSpec, n_internal: usize) -> Result<SpatialGraph, GraphError> {
    MurrayTreeSpec {
        generations: 1,
        ..*spec
    }
    .validate()?;
    let (pos, edges, _) = grow(spec, n_internal);
    Ok(build(pos, edges))
}

/// Member of the tree family used in the conditioning tables: unit root
/// radius, γ = 1 and `n` bifurcations.
pub fn conditioning_tree(n_internal: usize) -> SpatialGraph {
    pruned_tree(&MurrayTreeSpec::new(1, 1.0, 1.0), n_internal).expect("valid tree")
}

/// Arterial tree, a mirrored venous tree, and one capillary from each
/// arterial leaf to its venous twin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArterioVenousSpec {
    pub tree: MurrayTreeSpec,
    /// R¹ of a capillary relative to the smallest arterial R¹.
    pub capillary_ratio: f64,
}

impl ArterioVenousSpec {
    pub fn new(generations: usize, capillary_ratio: f64) -> Self {
        Self {
            tree: MurrayTreeSpec::new(generations, 1.0, 1e-3),
            capillary_ratio,
        }
    }
}

/// Vertex 0 is the arterial root and the venous root is the last vertex.
/// Venous edges point toward the venous root, so a positive flux runs from
/// artery through capillary to vein.
pub fn arterio_venous(spec: &ArterioVenousSpec) -> Result<SpatialGraph, GraphError> {
    let t = &spec.tree;
    t.validate()?;
    if t.generations < 2 {
        return Err(GraphError::InvalidEdge {
            edge: 0,
            reason: "an arterio-venous network needs at least two generations".into(),
        });
    }
    let c = spec.capillary_ratio;
    if !(c > 0.0 && c <= 1.0) {
        return Err(GraphError::InvalidEdge {
            edge: 0,
            reason: format!("capillary ratio {c} outside (0, 1]"),
        });
    }
    let (apos, aedges, _) = grow(t, (1 << (t.generations - 1)) - 1);
    let na = apos.len();
    let top = apos.iter().map(|p| p[1]).fold(f64::MIN, f64::max);
    let r_min = aedges.iter().map(|e| e.radius1).fold(f64::INFINITY, f64::min);
    let r_cap = c * r_min;
    let l_cap = t.length_factor * r_cap;
    // Mirror about a horizontal line above the arterial leaves.
    let mirror = top + (t.length_factor * r_min).max(l_cap);
    let vein = |i: usize| 2 * na - 1 - i;

    let mut pos = apos.clone();
    pos.resize(2 * na, [0.0; 3]);
    for (i, p) in apos.iter().enumerate() {
        pos[vein(i)] = [p[0], 2.0 * mirror - p[1], 0.0];
    }
    let mut edges = aedges.clone();
    for e in &aedges {
        let id = edges.len();
        edges.push(EdgeSpec {
            id,
            tail: vein(e.head),
            head: vein(e.tail),
            kind: Some(EdgeKind::Vein),
            ..e.clone()
        });
    }
    let mut degree = vec![0usize; na];
    for e in &aedges {
        degree[e.tail] += 1;
        degree[e.head] += 1;
    }
    for leaf in (1..na).filter(|&v| degree[v] == 1) {
        let id = edges.len();
        edges.push(
            EdgeSpec::plain(id, leaf, vein(leaf))
                .with_length(l_cap)
                .with_radius(r_cap, t.ratio)
                .with_kind(EdgeKind::Capillary),
        );
    }
    Ok(build(pos, edges))
}

/// Lagrange basis of degree `d` on [0, 1] with equispaced nodes.
/// Degree 0 uses the single node ξ = 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrange {
    nodes: Vec<f64>,
}

impl Lagrange {
    pub fn new(degree: usize) -> Self {
        let nodes = if degree == 0 {
            vec![0.5]
        } else {
            (0..=degree).map(|j| j as f64 / degree as f64).collect()
        };
        Self { nodes }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Value of basis function `j` at ξ.
    pub fn value(&self, j: usize, xi: f64) -> f64 {
        let xj = self.nodes[j];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != j)
            .map(|(_, &xm)| (xi - xm) / (xj - xm))
            .product()
    }

    /// d/dξ of basis function `j` at ξ.
    pub fn deriv(&self, j: usize, xi: f64) -> f64 {
        let xj = self.nodes[j];
        let mut total = 0.0;
        for (a, &xa) in self.nodes.iter().enumerate() {
            if a == j {
                continue;
            }
            let mut term = 1.0 / (xj - xa);
            for (m, &xm) in self.nodes.iter().enumerate() {
                if m != j && m != a {
                    term *= (xi - xm) / (xj - xm);
                }
            }
            total += term;
        }
        total
    }

    pub fn values(&self, xi: f64) -> Vec<f64> {
        (0..self.len()).map(|j| self.value(j, xi)).collect()
    }

    pub fn derivs(&self, xi: f64) -> Vec<f64> {
        (0..self.len()).map(|j| self.deriv(j, xi)).collect()
    }
}

use spaces::{block_diag, Coo, FunctionSpace};

/// Assembled saddle-point system [[A, Bᵀ], [B, 0]] [q; p] = [L; F].
///
/// The M unknowns are the concatenation of `m_spaces`. Entries of
/// `m_fixed` are prescribed values (Dirichlet pressures or boundary
/// multipliers) that are eliminated symmetrically before solving.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub a: Coo,
    pub b: Coo,
    pub rhs_v: Vec<f64>,
    pub rhs_m: Vec<f64>,
    pub v_space: FunctionSpace,
    pub m_spaces: Vec<FunctionSpace>,
    pub m_fixed: Vec<(usize, f64)>,
}

/// The system restricted to the free M unknowns.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: Coo,
    pub rhs: Vec<f64>,
    pub nv: usize,
    /// Global M index of every free M unknown, in order.
    pub free_m: Vec<usize>,
}

impl SaddleSystem {
    pub fn nv(&self) -> usize {
        self.v_space.dim()
    }

    pub fn nm(&self) -> usize {
        self.m_spaces.iter().map(|s| s.dim()).sum()
    }

    /// Offset of each M block in the M numbering.
    pub fn m_offsets(&self) -> Vec<usize> {
        self.m_spaces
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.dim();
                Some(o)
            })
            .collect()
    }

    pub fn free_m(&self) -> Vec<usize> {
        let mut fixed = vec![false; self.nm()];
        for &(i, _) in &self.m_fixed {
            fixed[i] = true;
        }
        (0..self.nm()).filter(|&i| !fixed[i]).collect()
    }

    /// Full matrix over all unknowns, fixed ones included.
    pub fn full_matrix(&self) -> Coo {
        let (nv, nm) = (self.nv(), self.nm());
        let mut k = Coo::new(nv + nm, nv + nm);
        k.add_block(0, 0, &self.a);
        k.add_block(0, nv, &self.b.transpose());
        k.add_block(nv, 0, &self.b);
        k
    }

    pub fn reduce(&self) -> ReducedSystem {
        let nv = self.nv();
        let free_m = self.free_m();
        let mut fixed_vals = vec![0.0; self.nm()];
        for &(i, v) in &self.m_fixed {
            fixed_vals[i] = v;
        }
        // L − Bᵀ p_fixed
        let mut rhs_v = self.rhs_v.clone();
        for &(i, j, v) in &self.b.entries {
            rhs_v[j] -= v * fixed_vals[i];
        }
        let all_v: Vec<usize> = (0..nv).collect();
        let b = self.b.restrict(&free_m, &all_v);
        let mut matrix = Coo::new(nv + free_m.len(), nv + free_m.len());
        matrix.add_block(0, 0, &self.a);
        matrix.add_block(0, nv, &b.transpose());
        matrix.add_block(nv, 0, &b);
        let mut rhs = rhs_v;
        rhs.extend(free_m.iter().map(|&i| self.rhs_m[i]));
        ReducedSystem {
            matrix: matrix.compress(),
            rhs,
            nv,
            free_m,
        }
    }

    /// Block-diagonal M norm assembled from one matrix per M block.
    pub fn m_norm(&self, blocks: &[Coo]) -> Coo {
        let refs: Vec<&Coo> = blocks.iter().collect();
        block_diag(&refs)
    }

    /// Expand a solution of the reduced system to all M unknowns.
    pub fn expand_m(&self, free_values: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.nm()];
        for &(i, v) in &self.m_fixed {
            p[i] = v;
        }
        for (&i, &v) in self.free_m().iter().zip(free_values) {
            p[i] = v;
        }
        p
    }
}

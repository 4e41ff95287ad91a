use std::collections::BTreeMap;

/// Sparse matrix in triplet form. Duplicate entries are summed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Coo {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Coo {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.nrows && j < self.ncols, "({i},{j}) out of bounds");
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.push(i, i, 1.0);
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::new(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.push(i, i, v);
        }
        m
    }

    /// Sum duplicates and drop zeros; entries end up sorted by (row, col),
    /// which makes downstream arithmetic order independent of assembly order.
    pub fn compress(&self) -> Self {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(i, j, v) in &self.entries {
            *map.entry((i, j)).or_insert(0.0) += v;
        }
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: map
                .into_iter()
                .filter(|&(_, v)| v != 0.0)
                .map(|((i, j), v)| (i, j, v))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().map(|&(i, j, v)| (i, j, s * v)).collect(),
        }
    }

    pub fn add(&self, other: &Coo) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = self.clone();
        m.entries.extend_from_slice(&other.entries);
        m
    }

    /// Keep rows `rows` and columns `cols` (given as lists of old indices);
    /// the new numbering follows the order of the lists.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        let rmap = index_map(self.nrows, rows);
        let cmap = index_map(self.ncols, cols);
        let entries = self
            .entries
            .iter()
            .filter_map(|&(i, j, v)| Some((rmap[i]?, cmap[j]?, v)))
            .collect();
        Self {
            nrows: rows.len(),
            ncols: cols.len(),
            entries,
        }
    }

    /// Place `block` at offset (r0, c0) of `self`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Coo) {
        assert!(r0 + block.nrows <= self.nrows && c0 + block.ncols <= self.ncols);
        for &(i, j, v) in &block.entries {
            self.entries.push((r0 + i, c0 + j, v));
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for &(i, j, v) in &self.entries {
            d[i][j] += v;
        }
        d
    }

    /// Max |A - Aᵀ| relative to max |A|.
    pub fn asymmetry(&self) -> f64 {
        let c = self.compress();
        let mut map = BTreeMap::new();
        for &(i, j, v) in &c.entries {
            map.insert((i, j), v);
        }
        let scale = c.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for (&(i, j), &v) in &map {
            let w = map.get(&(j, i)).copied().unwrap_or(0.0);
            worst = worst.max((v - w).abs());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }
}

fn index_map(n: usize, keep: &[usize]) -> Vec<Option<usize>> {
    let mut map = vec![None; n];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = Some(new);
    }
    map
}

/// Block-diagonal combination.
pub fn block_diag(blocks: &[&Coo]) -> Coo {
    let n: usize = blocks.iter().map(|b| b.nrows).sum();
    let m: usize = blocks.iter().map(|b| b.ncols).sum();
    let mut out = Coo::new(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.add_block(r, c, b);
        r += b.nrows;
        c += b.ncols;
    }
    out
}

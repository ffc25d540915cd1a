//! Dense matrices over F₂ and over F₂[X].

use crate::coeff::F2Poly;

/// A row of bits packed into words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn dot(&self, other: &BitRow) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

/// A dense matrix over F₂.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Mat {
    rows: Vec<BitRow>,
    cols: usize,
}

impl F2Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Mat { rows: vec![BitRow::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j)
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    /// row `dst` += row `src`
    pub fn add_row(&mut self, src: usize, dst: usize) {
        let r = self.rows[src].clone();
        self.rows[dst].xor_with(&r);
    }

    /// column `dst` += column `src`
    pub fn add_col(&mut self, src: usize, dst: usize) {
        for r in &mut self.rows {
            if r.get(src) {
                r.flip(dst);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (x, y) = (r.get(a), r.get(b));
            r.set(a, y);
            r.set(b, x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.nrows(), |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &F2Mat) -> F2Mat {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let mut out = F2Mat::zeros(self.nrows(), other.cols);
        for i in 0..self.nrows() {
            for k in self.rows[i].ones().collect::<Vec<_>>() {
                out.rows[i].xor_with(&other.rows[k]);
            }
        }
        out
    }

    pub fn add(&self, other: &F2Mat) -> F2Mat {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_with(b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row.get(col) {
                        row.xor_with(&pivot);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn inverse(&self) -> Option<F2Mat> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = F2Mat::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| a.get(r, col))?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            for r in 0..n {
                if r != col && a.get(r, col) {
                    a.add_row(col, r);
                    inv.add_row(col, r);
                }
            }
        }
        Some(inv)
    }

    /// If this is a permutation matrix, returns `p` with `self[p[j]][j] = 1`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let mut p = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        for (j, slot) in p.iter_mut().enumerate() {
            let ones: Vec<usize> = (0..n).filter(|&i| self.get(i, j)).collect();
            if ones.len() != 1 || seen[ones[0]] {
                return None;
            }
            seen[ones[0]] = true;
            *slot = ones[0];
        }
        Some(p)
    }

    pub fn to_bit_rows(&self) -> Vec<Vec<u8>> {
        (0..self.nrows()).map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect()).collect()
    }
}

/// Row-reduced homogeneous system solver: returns a basis of `{x : A x = 0}`.
pub fn nullspace(equations: &[BitRow], nvars: usize) -> Vec<BitRow> {
    let mut rows: Vec<BitRow> = equations.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..nvars {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) {
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_with(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; nvars];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..nvars).filter(|&c| !is_pivot[c]) {
        let mut x = BitRow::zeros(nvars);
        x.set(free, true);
        for (k, &pc) in pivots.iter().enumerate() {
            if rows[k].get(free) {
                x.set(pc, true);
            }
        }
        basis.push(x);
    }
    basis
}

/// Solves `A x = b` where each equation is a row of `A` together with its right-hand bit.
pub fn solve_affine(equations: &[(BitRow, bool)], nvars: usize) -> Option<BitRow> {
    let mut rows: Vec<(BitRow, bool)> = equations.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..nvars {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r].0.get(col)) {
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.0.get(col) {
                    row.0.xor_with(&pivot.0);
                    row.1 ^= pivot.1;
                }
            }
            pivots.push(col);
            rank += 1;
        }
    }
    if rows[rank..].iter().any(|r| r.1) {
        return None;
    }
    let mut x = BitRow::zeros(nvars);
    for (k, &pc) in pivots.iter().enumerate() {
        if rows[k].1 {
            x.set(pc, true);
        }
    }
    Some(x)
}

/// A dense matrix over F₂[X]; entry (i, j) is the coefficient of basis element
/// i in the image of basis element j.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<F2Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat { n_rows: rows, n_cols: cols, data: vec![F2Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F2Poly::one());
        }
        m
    }

    pub fn from_f2(m: &F2Mat) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in m.row(i).ones() {
                out.set(i, j, F2Poly::one());
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.n_rows
    }

    pub fn ncols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F2Poly {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F2Poly) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &F2Poly) {
        let idx = i * self.n_cols + j;
        self.data[idx] = &self.data[idx] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &F2Poly)> + '_ {
        self.data.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(move |(k, p)| (k / self.n_cols, k % self.n_cols, p))
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch");
        let mut out = PolyMat::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        PolyMat { n_rows: self.n_rows, n_cols: self.n_cols, data }
    }

    /// The matrix of constant terms.
    pub fn constant_part(&self) -> F2Mat {
        F2Mat::from_fn(self.n_rows, self.n_cols, |i, j| self.get(i, j).constant())
    }

    /// Evaluation at X = 1.
    pub fn eval_one(&self) -> F2Mat {
        F2Mat::from_fn(self.n_rows, self.n_cols, |i, j| self.get(i, j).exponents().len() % 2 == 1)
    }

    pub fn has_constant_entries(&self) -> bool {
        self.data.iter().any(|p| p.constant())
    }

    pub fn map(&self, f: impl Fn(&F2Poly) -> F2Poly) -> PolyMat {
        PolyMat { n_rows: self.n_rows, n_cols: self.n_cols, data: self.data.iter().map(f).collect() }
    }

    /// Kronecker product: index (i1, i2) ↦ i1 * n2 + i2.
    pub fn kron(&self, other: &PolyMat) -> PolyMat {
        let (r2, c2) = (other.n_rows, other.n_cols);
        let mut out = PolyMat::zeros(self.n_rows * r2, self.n_cols * c2);
        for (i1, j1, a) in self.nonzero_entries() {
            for (i2, j2, b) in other.nonzero_entries() {
                out.set(i1 * r2 + i2, j1 * c2 + j2, a.mul(b));
            }
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMat {
        let mut out = PolyMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Simultaneous row/column permutation: new index k holds old index `order[k]`.
    pub fn permute(&self, order: &[usize]) -> PolyMat {
        self.select(order, order)
    }
}

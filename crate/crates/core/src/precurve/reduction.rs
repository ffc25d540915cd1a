//! Matrix form of arrow sliding.
//!
//! Rather than pushing arrows through a word one at a time, this works on `P`
//! directly. Each round joins one U-point to one Q-point. The joined pairs
//! grow partial curves, and every unjoined point sees a sequence of face keys
//! along its partial curve. Columns are compared by that sequence, rows by
//! its reverse, and the smallest column block meets the largest row block.
//! Every basis change is an allowed face move, paired with the partner move
//! where the face demands it, and corrected at joined pairs so they stay clean.

use crate::error::{Error, Result};
use crate::linalg::F2Mat;
use crate::matching::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Step {
    /// The partial curve stops at an unjoined column.
    EndCol,
    Key(u8, i64),
    /// The partial curve stops at an unjoined row.
    EndRow,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    /// column b += column a
    Col(usize, usize),
    /// row x += row y, written `Row(y, x)`
    Row(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tail {
    Col(usize),
    Row(usize),
    Puncture,
}

/// A closed family of parallel strands: column `cols[i]` is joined to row
/// `pi[cols[i]]`, and the block of `P` on those rows and columns is `block`.
#[derive(Clone, Debug)]
pub(super) struct Band {
    pub cols: Vec<usize>,
    pub block: F2Mat,
}

pub(super) struct Reduced {
    pub p: F2Mat,
    pub m: F2Mat,
    pub ninv: F2Mat,
    /// column j is joined to row `pi[j]`
    pub pi: Vec<usize>,
    pub bands: Vec<Band>,
}

struct Reducer<'a> {
    u: &'a [Status],
    q: &'a [Status],
    p: F2Mat,
    m: F2Mat,
    ninv: F2Mat,
    row_of: Vec<Option<usize>>,
    col_of: Vec<Option<usize>>,
    /// columns and rows already gathered into a band
    band_col: Vec<bool>,
    band_row: Vec<bool>,
    moves: usize,
    move_cap: usize,
}

fn illegal(what: &str) -> Error {
    Error::Internal(format!("strand reduction reached a disallowed {} move", what))
}

impl<'a> Reducer<'a> {
    fn n(&self) -> usize {
        self.u.len()
    }

    /// Applies `op` together with every move it forces, most recent first,
    /// then sweeps up entries left in joined rows and columns.
    fn apply(&mut self, op: Op) -> Result<()> {
        let mut queue = vec![op];
        loop {
            let Some(op) = queue.pop().or_else(|| self.stray()) else { return Ok(()) };
            self.moves += 1;
            if self.moves > self.move_cap {
                return Err(Error::SlideBudget);
            }
            match op {
                Op::Col(a, b) => {
                    let (sa, sb) = (self.u[a], self.u[b]);
                    self.raw_col(a, b, &mut queue)?;
                    if !(sa.is_free() && sb.is_free()) && sa.key() >= sb.key() {
                        if sa.key() > sb.key() {
                            return Err(illegal("column"));
                        }
                        self.raw_col(sa.partner().unwrap(), sb.partner().unwrap(), &mut queue)?;
                    }
                }
                Op::Row(y, x) => {
                    let (sy, sx) = (self.q[y], self.q[x]);
                    self.raw_row(y, x, &mut queue)?;
                    if !(sy.is_free() && sx.is_free()) && sx.key() >= sy.key() {
                        if sx.key() > sy.key() {
                            return Err(illegal("row"));
                        }
                        self.raw_row(sy.partner().unwrap(), sx.partner().unwrap(), &mut queue)?;
                    }
                }
            }
        }
    }

    /// A move that removes an entry left behind in a joined row or column.
    fn stray(&self) -> Option<Op> {
        for c in 0..self.n() {
            let Some(r) = self.row_of[c] else { continue };
            if self.band_col[c] {
                continue;
            }
            if let Some(x) = self.p.row(r).ones().find(|&x| x != c) {
                return Some(match self.row_of[x] {
                    None => Op::Col(c, x),
                    Some(rx) => Op::Row(rx, r),
                });
            }
            if let Some(z) = (0..self.n()).find(|&z| z != r && self.p.get(z, c)) {
                return Some(match self.col_of[z] {
                    None => Op::Row(r, z),
                    Some(cz) => Op::Col(cz, c),
                });
            }
        }
        None
    }

    fn raw_col(&mut self, s: usize, t: usize, queue: &mut Vec<Op>) -> Result<()> {
        if self.band_col[s] || self.band_col[t] {
            return Err(illegal("band"));
        }
        self.p.add_col(s, t);
        self.m.add_col(s, t);
        match self.row_of[s] {
            Some(rs) => {
                if self.p.get(rs, t) {
                    match self.row_of[t] {
                        Some(rt) => queue.push(Op::Row(rt, rs)),
                        None => return Err(illegal("column")),
                    }
                }
            }
            None => {
                if let Some(rt) = self.row_of[t] {
                    for z in 0..self.n() {
                        if z != rt && self.p.get(z, s) && self.p.get(z, t) {
                            queue.push(Op::Row(rt, z));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn raw_row(&mut self, y: usize, x: usize, queue: &mut Vec<Op>) -> Result<()> {
        if self.band_row[y] || self.band_row[x] {
            return Err(illegal("band"));
        }
        self.p.add_row(y, x);
        self.ninv.add_row(y, x);
        match self.col_of[y] {
            Some(cy) => {
                if self.p.get(x, cy) {
                    match self.col_of[x] {
                        Some(cx) => queue.push(Op::Col(cx, cy)),
                        None => return Err(illegal("row")),
                    }
                }
            }
            None => {
                if let Some(cx) = self.col_of[x] {
                    let support: Vec<usize> = self.p.row(y).ones().collect();
                    for c in support {
                        if c != cx && self.p.get(x, c) {
                            queue.push(Op::Col(cx, c));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Keys along the partial curve leaving an unjoined column through its U face.
    fn col_signature(&self, mut c: usize) -> (Vec<Step>, Tail) {
        let mut out = Vec::new();
        loop {
            let s = self.u[c];
            out.push(Step::Key(s.key().0, s.key().1));
            let Some(pc) = s.partner() else { return (out, Tail::Puncture) };
            let Some(r) = self.row_of[pc] else {
                out.push(Step::EndCol);
                return (out, Tail::Col(pc));
            };
            let s = self.q[r];
            out.push(Step::Key(s.key().0, s.key().1));
            let Some(pr) = s.partner() else { return (out, Tail::Puncture) };
            let Some(c2) = self.col_of[pr] else {
                out.push(Step::EndRow);
                return (out, Tail::Row(pr));
            };
            c = c2;
        }
    }

    /// Keys along the partial curve leaving an unjoined row through its Q face.
    fn row_signature(&self, mut r: usize) -> (Vec<Step>, Tail) {
        let mut out = Vec::new();
        loop {
            let s = self.q[r];
            out.push(Step::Key(s.key().0, s.key().1));
            let Some(pr) = s.partner() else { return (out, Tail::Puncture) };
            let Some(c) = self.col_of[pr] else {
                out.push(Step::EndRow);
                return (out, Tail::Row(pr));
            };
            let s = self.u[c];
            out.push(Step::Key(s.key().0, s.key().1));
            let Some(pc) = s.partner() else { return (out, Tail::Puncture) };
            let Some(r2) = self.row_of[pc] else {
                out.push(Step::EndCol);
                return (out, Tail::Col(pc));
            };
            r = r2;
        }
    }

    fn is_clean(&self, r: usize, c: usize) -> bool {
        self.p.row(r).ones().eq([c]) && (0..self.n()).filter(|&z| self.p.get(z, c)).eq([r])
    }

    fn join(&mut self, r: usize, c: usize) {
        self.row_of[c] = Some(r);
        self.col_of[r] = Some(c);
    }

    /// Clears the rest of row `r` and column `c` among unjoined points.
    fn clear_single(&mut self, r: usize, c: usize) -> Result<()> {
        let n = self.n();
        for _ in 0..4 {
            for c2 in 0..n {
                if c2 != c && self.row_of[c2].is_none() && self.p.get(r, c2) {
                    self.apply(Op::Col(c, c2))?;
                }
            }
            for r2 in 0..n {
                if r2 != r && self.col_of[r2].is_none() && self.p.get(r2, c) {
                    self.apply(Op::Row(r, r2))?;
                }
            }
            if self.is_clean(r, c) {
                return Ok(());
            }
        }
        Err(Error::Internal("strand reduction could not isolate a joined pair".into()))
    }

    /// Conjugates the block of a closed family by `L = 1 + E_ab`.
    fn conjugate(&mut self, rows: &[usize], cols: &[usize], a: usize, b: usize) -> Result<()> {
        let before = block(&self.p, rows, cols);
        self.apply(Op::Col(cols[a], cols[b]))?;
        let mut expect = before;
        expect.add_col(a, b);
        expect.add_row(b, a);
        if block(&self.p, rows, cols) != expect {
            return Err(Error::Internal("closed family did not transform by conjugation".into()));
        }
        Ok(())
    }

    fn round(&mut self, bands: &mut Vec<Band>) -> Result<bool> {
        let n = self.n();
        let ucols: Vec<usize> = (0..n).filter(|&c| self.row_of[c].is_none()).collect();
        if ucols.is_empty() {
            return Ok(false);
        }
        let urows: Vec<usize> = (0..n).filter(|&r| self.col_of[r].is_none()).collect();
        let csig: Vec<(Vec<Step>, Tail)> = ucols.iter().map(|&c| self.col_signature(c)).collect();
        let min = csig.iter().map(|s| &s.0).min().unwrap().clone();
        let fam_f: Vec<usize> = ucols.iter().zip(&csig).filter(|(_, s)| s.0 == min).map(|(&c, _)| c).collect();
        let rsig: Vec<(Vec<Step>, Tail)> = urows.iter().map(|&r| self.row_signature(r)).collect();
        let max = urows
            .iter()
            .zip(&rsig)
            .filter(|(&r, _)| fam_f.iter().any(|&c| self.p.get(r, c)))
            .map(|(_, s)| &s.0)
            .max()
            .ok_or_else(|| Error::Internal("singular P during strand reduction".into()))?
            .clone();
        let fam_e: Vec<(usize, Tail)> =
            urows.iter().zip(&rsig).filter(|(_, s)| s.0 == max).map(|(&r, s)| (r, s.1)).collect();

        let closes = fam_e.iter().any(|(_, t)| matches!(t, Tail::Col(c) if fam_f.contains(c)));
        if !closes {
            let e: Vec<usize> = fam_e.iter().map(|x| x.0).collect();
            let (r, c) = e
                .iter()
                .find_map(|&r| fam_f.iter().find(|&&c| self.p.get(r, c)).map(|&c| (r, c)))
                .expect("a row of the block meets it");
            for &c2 in &fam_f {
                if c2 != c && self.p.get(r, c2) {
                    self.apply(Op::Col(c, c2))?;
                }
            }
            for &r2 in &e {
                if r2 != r && self.p.get(r2, c) {
                    self.apply(Op::Row(r, r2))?;
                }
            }
            self.clear_single(r, c)?;
            self.join(r, c);
            return Ok(true);
        }

        // A closed family: each row's partial curve ends at a column of the block.
        let rows: Vec<usize> = fam_e.iter().map(|x| x.0).collect();
        let cols: Vec<usize> = fam_e
            .iter()
            .map(|(_, t)| match *t {
                Tail::Col(c) if fam_f.contains(&c) => Ok(c),
                _ => Err(Error::Internal("closed family is not a bijection".into())),
            })
            .collect::<Result<_>>()?;
        let b = block(&self.p, &rows, &cols);
        let (s, inv_dim, chains) = jordan_basis(&b);
        let g = s.inverse().expect("basis");
        for (x, y) in elementary_factors(&g).into_iter().rev() {
            self.conjugate(&rows, &cols, x, y)?;
        }
        let b = block(&self.p, &rows, &cols);
        if inv_dim > 0 {
            let (brows, bcols) = (rows[..inv_dim].to_vec(), cols[..inv_dim].to_vec());
            let blk = block(&self.p, &brows, &bcols);
            let blk_inv = blk.inverse().ok_or_else(|| Error::Internal("band block is singular".into()))?;
            // Clear the band rows outside the block, then the band columns.
            for c2 in 0..n {
                if self.row_of[c2].is_some() || bcols.contains(&c2) {
                    continue;
                }
                let v: Vec<bool> = brows.iter().map(|&r| self.p.get(r, c2)).collect();
                let w = mul_vec(&blk_inv, &v);
                for (j, &wj) in w.iter().enumerate() {
                    if wj {
                        self.apply(Op::Col(bcols[j], c2))?;
                    }
                }
            }
            let blk_inv_t = blk_inv.transpose();
            for r2 in 0..n {
                if self.col_of[r2].is_some() || brows.contains(&r2) {
                    continue;
                }
                let v: Vec<bool> = bcols.iter().map(|&c| self.p.get(r2, c)).collect();
                let y = mul_vec(&blk_inv_t, &v);
                for (i, &yi) in y.iter().enumerate() {
                    if yi {
                        self.apply(Op::Row(brows[i], r2))?;
                    }
                }
            }
            if block(&self.p, &brows, &bcols) != blk {
                return Err(Error::Internal("band block changed while clearing".into()));
            }
            for i in 0..inv_dim {
                let (r, c) = (brows[i], bcols[i]);
                let clean = self.p.row(r).ones().all(|x| bcols.contains(&x))
                    && (0..n).all(|z| !self.p.get(z, c) || brows.contains(&z));
                if !clean {
                    return Err(Error::Internal("band could not be isolated".into()));
                }
            }
            for i in 0..inv_dim {
                self.join(brows[i], bcols[i]);
                self.band_row[brows[i]] = true;
                self.band_col[bcols[i]] = true;
            }
            bands.push(Band { cols: bcols, block: blk });
            return Ok(true);
        }
        // Nilpotent: the first chain of length two or more joins two strands.
        let (top, _) = chains.iter().copied().find(|&(_, len)| len >= 2).expect("nonzero nilpotent block");
        let (r, c) = (rows[top + 1], cols[top]);
        debug_assert!(b.get(top + 1, top));
        self.clear_single(r, c)?;
        self.join(r, c);
        Ok(true)
    }
}

fn block(p: &F2Mat, rows: &[usize], cols: &[usize]) -> F2Mat {
    F2Mat::from_fn(rows.len(), cols.len(), |i, j| p.get(rows[i], cols[j]))
}

fn mul_vec(a: &F2Mat, v: &[bool]) -> Vec<bool> {
    (0..a.nrows()).map(|i| a.row(i).ones().filter(|&j| v[j]).count() % 2 == 1).collect()
}

fn power(b: &F2Mat, e: usize) -> F2Mat {
    let mut out = F2Mat::identity(b.nrows());
    for _ in 0..e {
        out = out.mul(b);
    }
    out
}

/// Echelon basis over F₂ with membership tests.
#[derive(Default)]
struct Span {
    rows: Vec<(usize, Vec<bool>)>,
}

impl Span {
    fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut v = v.to_vec();
        for (piv, r) in &self.rows {
            if v[*piv] {
                for (x, y) in v.iter_mut().zip(r) {
                    *x ^= *y;
                }
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    fn insert(&mut self, v: &[bool]) -> bool {
        let v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x) else { return false };
        for (_, r) in &mut self.rows {
            if r[piv] {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x ^= *y;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

fn kernel(a: &F2Mat) -> Vec<Vec<bool>> {
    let n = a.ncols();
    // Row-reduce and read off free variables.
    let mut rows: Vec<Vec<bool>> = (0..a.nrows()).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c]) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] {
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![false; n];
            v[f] = true;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[i][f];
            }
            v
        })
        .collect()
}

fn column(a: &F2Mat, j: usize) -> Vec<bool> {
    (0..a.nrows()).map(|i| a.get(i, j)).collect()
}

/// A basis `S` (as columns) with `S⁻¹ B S = diag(C, J)`: `C` invertible of
/// size `inv_dim` and `J` nilpotent in Jordan form, each chain listed as
/// `v, Bv, B²v, …`. Chains are returned as (first index, length).
fn jordan_basis(b: &F2Mat) -> (F2Mat, usize, Vec<(usize, usize)>) {
    let k = b.nrows();
    let bk = power(b, k);
    let mut basis: Vec<Vec<bool>> = Vec::new();
    let mut im = Span::default();
    for j in 0..k {
        let v = column(&bk, j);
        if im.insert(&v) {
            basis.push(v);
        }
    }
    let inv_dim = basis.len();
    let apply = |v: &[bool]| mul_vec(b, v);
    // Kernels of B^j restricted to the nilpotent part ker B^k.
    let kers: Vec<Vec<Vec<bool>>> = (0..=k).map(|j| kernel(&power(b, j))).collect();
    let mut tops: Vec<(Vec<bool>, usize)> = Vec::new();
    for j in (1..=k).rev() {
        let mut w = Span::default();
        for v in &kers[j - 1] {
            w.insert(v);
        }
        for (t, len) in &tops {
            let mut v = t.clone();
            for _ in 0..(len - j) {
                v = apply(&v);
            }
            w.insert(&v);
        }
        for v in &kers[j] {
            if w.insert(v) {
                tops.push((v.clone(), j));
            }
        }
    }
    let mut chains = Vec::new();
    for (t, len) in tops {
        chains.push((basis.len(), len));
        let mut v = t;
        for _ in 0..len {
            basis.push(v.clone());
            v = apply(&v);
        }
    }
    let s = F2Mat::from_fn(k, k, |i, j| basis[j][i]);
    (s, inv_dim, chains)
}

/// Row operations `(a, b)` meaning row a += row b, with `g = L₁ L₂ ⋯ Lₜ`.
fn elementary_factors(g: &F2Mat) -> Vec<(usize, usize)> {
    let n = g.nrows();
    let mut w = g.clone();
    let mut ops = Vec::new();
    let push = |w: &mut F2Mat, a: usize, b: usize, ops: &mut Vec<(usize, usize)>| {
        w.add_row(b, a);
        ops.push((a, b));
    };
    for c in 0..n {
        if !w.get(c, c) {
            let p = (c + 1..n).find(|&i| w.get(i, c)).expect("invertible");
            push(&mut w, c, p, &mut ops);
        }
        for i in 0..n {
            if i != c && w.get(i, c) {
                push(&mut w, i, c, &mut ops);
            }
        }
    }
    debug_assert_eq!(w, F2Mat::identity(n));
    ops
}

/// Joins every U-point to a Q-point, or gathers closed families into bands.
pub(super) fn reduce_strands(u: &[Status], q: &[Status], p0: &F2Mat, round_cap: usize) -> Result<Reduced> {
    let n = u.len();
    let mut red = Reducer {
        u,
        q,
        p: p0.clone(),
        m: F2Mat::identity(n),
        ninv: F2Mat::identity(n),
        row_of: vec![None; n],
        col_of: vec![None; n],
        band_col: vec![false; n],
        band_row: vec![false; n],
        moves: 0,
        move_cap: 64 * (n + 1) * (n + 1) * (n + 1) + 10_000,
    };
    let mut bands = Vec::new();
    let mut rounds = 0;
    while red.round(&mut bands)? {
        rounds += 1;
        if rounds > round_cap {
            return Err(Error::SlideBudget);
        }
    }
    let pi = red.row_of.iter().map(|r| r.expect("every column joined")).collect();
    Ok(Reduced { p: red.p, m: red.m, ninv: red.ninv, pi, bands })
}

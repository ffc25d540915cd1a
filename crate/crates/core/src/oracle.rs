//! Brute-force local-equivalence search straight from the mod-U definitions.
//!
//! The chain-map condition and the ι̅-commutation condition are linear over F₂
//! in the coefficients of `f` and the constant part of the homotopy `H`, so the
//! candidate maps form a subspace. It is enumerated up to a cap and each
//! candidate is tested for inducing an isomorphism on `U⁻¹H`.

use crate::coeff::F2Poly;
use crate::iota::{AlmostIotaComplex, ModUMap};
use crate::linalg::{nullspace, BitRow, F2Mat, PolyMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_generators: usize,
    pub max_u_degree: u32,
    pub max_solutions: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_generators: 7, max_u_degree: 4, max_solutions: 1 << 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ModUMap),
    /// Certified: no local map with entries of U-degree within the budget.
    NoneWithinBudget,
    /// The search was cut short by the budget.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    True,
    False,
    Unknown,
}

impl Answer {
    pub fn definite(self) -> Option<bool> {
        match self {
            Answer::True => Some(true),
            Answer::False => Some(false),
            Answer::Unknown => None,
        }
    }
}

/// One unknown coefficient: the U-power `k` in entry (row, col) of f.
#[derive(Clone, Copy, Debug)]
struct FVar {
    row: usize,
    col: usize,
    k: u32,
}

/// Rank-based membership test: is `v` in the column space of `m`?
fn in_column_space(m: &F2Mat, v: &[bool]) -> bool {
    let aug = F2Mat::from_fn(m.nrows(), m.ncols() + 1, |i, j| if j < m.ncols() { m.get(i, j) } else { v[i] });
    aug.rank() == m.rank()
}

/// A cycle of `d(1)` that is not a boundary, i.e. a representative of the tower.
fn tower_cycle(d1: &F2Mat) -> Option<Vec<bool>> {
    let n = d1.ncols();
    let eqs: Vec<BitRow> = (0..d1.nrows()).map(|i| d1.row(i).clone()).collect();
    nullspace(&eqs, n).into_iter().map(|x| (0..n).map(|i| x.get(i)).collect::<Vec<bool>>()).find(|x| !in_column_space(d1, x))
}

fn induces_tower_iso(f1: &F2Mat, x: &[bool], d2: &F2Mat) -> bool {
    let y: Vec<bool> = (0..f1.nrows()).map(|i| (0..f1.ncols()).filter(|&j| f1.get(i, j) && x[j]).count() % 2 == 1).collect();
    !in_column_space(d2, &y)
}

pub fn search_local_map(c1: &AlmostIotaComplex, c2: &AlmostIotaComplex, budget: &SearchBudget) -> SearchOutcome {
    let (n, m) = (c1.len(), c2.len());
    if n > budget.max_generators || m > budget.max_generators {
        return SearchOutcome::Unknown;
    }
    let (g1, g2) = (c1.gens(), c2.gens());
    let mut fvars = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let diff = g2[i].gr_u - g1[j].gr_u;
            if diff >= 0 && diff % 2 == 0 && diff / 2 <= budget.max_u_degree as i64 {
                fvars.push(FVar { row: i, col: j, k: (diff / 2) as u32 });
            }
        }
    }
    let mut hvar = vec![vec![usize::MAX; n]; m];
    let nf = fvars.len();
    let mut nvars = nf;
    for i in 0..m {
        for j in 0..n {
            if g2[i].gr_u == g1[j].gr_u + 1 {
                hvar[i][j] = nvars;
                nvars += 1;
            }
        }
    }
    let mut fvar_at = vec![vec![None; n]; m];
    for (v, fv) in fvars.iter().enumerate() {
        fvar_at[fv.row][fv.col] = Some(v);
    }
    let (d1, d2) = (c1.d(), c2.d());
    let (i1, i2) = (c1.iota().constant_part(), c2.iota().constant_part());
    let mut eqs: Vec<BitRow> = Vec::new();
    // [∂, f] = 0, one equation per (i, j, exponent).
    for i in 0..m {
        for j in 0..n {
            let mut by_exp: std::collections::BTreeMap<u32, BitRow> = Default::default();
            let mut push = |e: u32, v: usize| by_exp.entry(e).or_insert_with(|| BitRow::zeros(nvars)).flip(v);
            for l in 0..m {
                if let Some(v) = fvar_at[l][j] {
                    for &e in d2.get(i, l).exponents() {
                        push(e + fvars[v].k, v);
                    }
                }
            }
            for l in 0..n {
                if let Some(v) = fvar_at[i][l] {
                    for &e in d1.get(l, j).exponents() {
                        push(e + fvars[v].k, v);
                    }
                }
            }
            eqs.extend(by_exp.into_values());
        }
    }
    // Constant part of f ι̅₁ + ι̅₂ f + H ∂₁ + ∂₂ H vanishes.
    let (c_d1, c_d2) = (d1.constant_part(), d2.constant_part());
    for i in 0..m {
        for j in 0..n {
            let mut row = BitRow::zeros(nvars);
            for l in 0..n {
                if i1.get(l, j) {
                    if let Some(v) = fvar_at[i][l].filter(|&v| fvars[v].k == 0) {
                        row.flip(v);
                    }
                }
                if c_d1.get(l, j) && hvar[i][l] != usize::MAX {
                    row.flip(hvar[i][l]);
                }
            }
            for l in 0..m {
                if i2.get(i, l) {
                    if let Some(v) = fvar_at[l][j].filter(|&v| fvars[v].k == 0) {
                        row.flip(v);
                    }
                }
                if c_d2.get(i, l) && hvar[l][j] != usize::MAX {
                    row.flip(hvar[l][j]);
                }
            }
            eqs.push(row);
        }
    }
    // Project the solution space onto the f coordinates.
    let mut proj: Vec<BitRow> = Vec::new();
    for sol in nullspace(&eqs, nvars) {
        let mut r = BitRow::zeros(nf);
        for v in 0..nf {
            if sol.get(v) {
                r.set(v, true);
            }
        }
        if !r.is_zero() {
            proj.push(r);
        }
    }
    let basis = row_basis(proj, nf);
    let Some(x) = tower_cycle(&d1.eval_one()) else { return SearchOutcome::Unknown };
    let d2_one = d2.eval_one();
    let dim = basis.len();
    let total = if dim >= 63 { usize::MAX } else { 1usize << dim };
    let to_map = |bits: &BitRow| {
        let mut mat = PolyMat::zeros(m, n);
        for (v, fv) in fvars.iter().enumerate() {
            if bits.get(v) {
                mat.set(fv.row, fv.col, F2Poly::monomial(fv.k));
            }
        }
        mat
    };
    // Gray-code walk over the subspace, skipping zero.
    let mut cur = BitRow::zeros(nf);
    for step in 1..total.min(budget.max_solutions.saturating_add(1)) {
        let flip = step.trailing_zeros() as usize;
        cur.xor_with(&basis[flip]);
        let mat = to_map(&cur);
        if induces_tower_iso(&mat.eval_one(), &x, &d2_one) {
            return SearchOutcome::Found(ModUMap { matrix: mat, shift: 0 });
        }
    }
    if total > budget.max_solutions.saturating_add(1) {
        SearchOutcome::Unknown
    } else {
        SearchOutcome::NoneWithinBudget
    }
}

fn row_basis(mut rows: Vec<BitRow>, ncols: usize) -> Vec<BitRow> {
    let mut out = Vec::new();
    for col in 0..ncols {
        if let Some(p) = rows.iter().position(|r| r.get(col)) {
            let pivot = rows.swap_remove(p);
            for r in rows.iter_mut() {
                if r.get(col) {
                    r.xor_with(&pivot);
                }
            }
            out.push(pivot);
        }
    }
    out
}

pub fn bruteforce_local_equiv(c1: &AlmostIotaComplex, c2: &AlmostIotaComplex, budget: &SearchBudget) -> Answer {
    let there = search_local_map(c1, c2, budget);
    if there == SearchOutcome::NoneWithinBudget {
        return Answer::False;
    }
    let back = search_local_map(c2, c1, budget);
    match (there, back) {
        (SearchOutcome::Found(_), SearchOutcome::Found(_)) => Answer::True,
        (_, SearchOutcome::NoneWithinBudget) => Answer::False,
        _ => Answer::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iota::{acyclic_pair, build_standard, direct_sum, StandardParams};

    fn std(s: &str) -> AlmostIotaComplex {
        build_standard(&s.parse::<StandardParams>().unwrap())
    }

    #[test]
    fn identity_is_found() {
        let c = std("C(+,-2)");
        match search_local_map(&c, &c, &SearchBudget::default()) {
            SearchOutcome::Found(f) => assert!(f.matrix.eval_one().rank() >= 1),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn summand_deletion() {
        let a = direct_sum(&std("C(+,-2)"), &acyclic_pair(1, 0, ("x", "y"))).unwrap();
        let b = std("C(+,-2)");
        assert!(matches!(search_local_map(&a, &b, &SearchBudget::default()), SearchOutcome::Found(_)));
        assert_eq!(bruteforce_local_equiv(&a, &b, &SearchBudget::default()), Answer::True);
    }

    #[test]
    fn distinct_classes() {
        let budget = SearchBudget::default();
        assert_eq!(bruteforce_local_equiv(&std("C(+,1)"), &std("C(-,1)"), &budget), Answer::False);
        assert_eq!(bruteforce_local_equiv(&std("C(+,1)"), &std("C()"), &budget), Answer::False);
        assert_eq!(bruteforce_local_equiv(&std("C(-,-2)"), &std("C(-,-2)"), &budget), Answer::True);
    }

    #[test]
    fn budget_gives_unknown() {
        let budget = SearchBudget { max_generators: 2, ..SearchBudget::default() };
        assert_eq!(bruteforce_local_equiv(&std("C(+,1)"), &std("C(+,1)"), &budget), Answer::Unknown);
    }
}

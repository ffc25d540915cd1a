//! Almost ι-complexes: construction, validation, reduction, products, and the
//! passage to complexes over R = F₂[U,Q]/(UQ).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeff::{parse_u_poly, F2Poly, RElem, Var};
use crate::error::{Error, Result};
use crate::linalg::{solve_affine, BitRow, F2Mat, PolyMat};
use crate::matching::reduce_face;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub gr_u: i64,
    pub gr_q: Option<i64>,
}

impl Generator {
    pub fn new(name: impl Into<String>, gr_u: i64) -> Self {
        Generator { name: name.into(), gr_u, gr_q: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Parameters `(a₁, b₂, …, a₂ₙ₋₁, b₂ₙ)` of a standard complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardParams {
    pairs: Vec<(Sign, i64)>,
}

impl StandardParams {
    pub fn new(pairs: Vec<(Sign, i64)>) -> Result<Self> {
        if pairs.iter().any(|&(_, b)| b == 0) {
            return Err(Error::ZeroB);
        }
        Ok(StandardParams { pairs })
    }

    pub fn trivial() -> Self {
        StandardParams { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(Sign, i64)] {
        &self.pairs
    }

    /// Number of (a, b) pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_standard(text)
    }
}

impl fmt::Display for StandardParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{},{}", a.symbol(), b)).collect();
        write!(f, "C({})", body.join(","))
    }
}

impl FromStr for StandardParams {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_standard(s)
    }
}

/// Parses `C(` [sign `,` int (`,` sign `,` int)*] `)`; whitespace is ignored.
pub fn parse_standard(text: &str) -> Result<StandardParams> {
    let toks: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let end = text.len();
    let mut i = 0;
    let expect = |i: &mut usize, want: char| -> Result<()> {
        match toks.get(*i) {
            Some(&(_, c)) if c == want => {
                *i += 1;
                Ok(())
            }
            Some(&(p, c)) => Err(Error::syntax(p, format!("expected '{}', found '{}'", want, c))),
            None => Err(Error::syntax(end, format!("expected '{}'", want))),
        }
    };
    expect(&mut i, 'C')?;
    expect(&mut i, '(')?;
    let mut pairs = Vec::new();
    if let Some(&(_, ')')) = toks.get(i) {
        i += 1;
    } else {
        loop {
            let sign = match toks.get(i) {
                Some(&(_, '+')) => Sign::Plus,
                Some(&(_, '-')) => Sign::Minus,
                Some(&(p, c)) => return Err(Error::syntax(p, format!("expected sign, found '{}'", c))),
                None => return Err(Error::syntax(end, "expected sign")),
            };
            i += 1;
            expect(&mut i, ',')?;
            let start_pos = toks.get(i).map(|t| t.0).unwrap_or(end);
            let mut neg = false;
            if let Some(&(_, c)) = toks.get(i) {
                if c == '-' || c == '+' {
                    neg = c == '-';
                    i += 1;
                }
            }
            let digits_start = i;
            let mut val: i64 = 0;
            while let Some(&(_, c)) = toks.get(i) {
                match c.to_digit(10) {
                    Some(d) => {
                        val = val
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(d as i64))
                            .filter(|&v| v <= crate::coeff::MAX_EXP as i64)
                            .ok_or(Error::ExponentOverflow)?;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == digits_start {
                return Err(Error::syntax(start_pos, "expected integer"));
            }
            let b = if neg { -val } else { val };
            if b == 0 {
                return Err(Error::ZeroB);
            }
            pairs.push((sign, b));
            match toks.get(i) {
                Some(&(_, ',')) => i += 1,
                Some(&(_, ')')) => {
                    i += 1;
                    break;
                }
                Some(&(p, c)) => return Err(Error::syntax(p, format!("expected ',' or ')', found '{}'", c))),
                None => return Err(Error::syntax(end, "expected ')'")),
            }
        }
    }
    if let Some(&(p, c)) = toks.get(i) {
        return Err(Error::syntax(p, format!("trailing character '{}'", c)));
    }
    StandardParams::new(pairs)
}

/// A graded free F₂[U] complex with the map ι̅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostIotaComplex {
    gens: Vec<Generator>,
    d: PolyMat,
    iota: PolyMat,
}

impl AlmostIotaComplex {
    /// Checks shapes and name uniqueness only; use [`validate`] for the axioms.
    pub fn new(gens: Vec<Generator>, d: PolyMat, iota: PolyMat) -> Result<Self> {
        let n = gens.len();
        if d.nrows() != n || d.ncols() != n || iota.nrows() != n || iota.ncols() != n {
            return Err(Error::Shape(format!("expected {}x{} matrices", n, n)));
        }
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate generator name '{}'", g.name)));
            }
        }
        Ok(AlmostIotaComplex { gens, d, iota })
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn d(&self) -> &PolyMat {
        &self.d
    }

    pub fn iota(&self) -> &PolyMat {
        &self.iota
    }

    /// ω = 1 + ι̅.
    pub fn omega(&self) -> PolyMat {
        self.iota.add(&PolyMat::identity(self.len()))
    }

    pub fn is_reduced(&self) -> bool {
        !self.d.has_constant_entries()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Same complex with generators reordered: new index k is old index `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> AlmostIotaComplex {
        AlmostIotaComplex {
            gens: order.iter().map(|&k| self.gens[k].clone()).collect(),
            d: self.d.permute(order),
            iota: self.iota.permute(order),
        }
    }

    pub fn with_names(mut self, prefix: &str) -> AlmostIotaComplex {
        for g in &mut self.gens {
            g.name = format!("{}{}", prefix, g.name);
        }
        self
    }
}

/// A square matrix over R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat {
    n: usize,
    data: Vec<RElem>,
}

impl RMat {
    pub fn zeros(n: usize) -> Self {
        RMat { n, data: vec![RElem::zero(); n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RElem {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RElem) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &RMat) -> RMat {
        let n = self.n;
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn has_constant_entries(&self) -> bool {
        self.data.iter().any(|x| x.constant())
    }

    /// The F₂[U] part (constant and U terms).
    pub fn u_side(&self) -> PolyMat {
        let mut m = PolyMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).mod_q());
            }
        }
        m
    }

    /// The F₂[Q] part (constant and Q terms).
    pub fn q_side(&self) -> PolyMat {
        let mut m = PolyMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).mod_u());
            }
        }
        m
    }

    pub fn from_sides(u: &PolyMat, q: &PolyMat) -> RMat {
        let n = u.nrows();
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let a = RElem::from_var_poly(Var::U, u.get(i, j));
                let b = RElem::from_var_poly(Var::Q, q.get(i, j));
                out.set(i, j, a.add(&b));
            }
        }
        out
    }
}

/// A free R-complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RComplex {
    pub gens: Vec<Generator>,
    pub delta: RMat,
}

impl RComplex {
    pub fn new(gens: Vec<Generator>, delta: RMat) -> Result<Self> {
        if delta.size() != gens.len() {
            return Err(Error::Shape("delta size does not match generator count".into()));
        }
        Ok(RComplex { gens, delta })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn delta_squared_zero(&self) -> bool {
        self.delta.mul(&self.delta).is_zero()
    }
}

/// A map between almost ι-complexes, recorded as a matrix over F₂[U]
/// (rows index the target) together with its grading shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModUMap {
    pub matrix: PolyMat,
    pub shift: i64,
}

impl ModUMap {
    pub fn identity(n: usize) -> Self {
        ModUMap { matrix: PolyMat::identity(n), shift: 0 }
    }

    /// True if every entry is a monomial compatible with the gradings and shift.
    pub fn is_homogeneous(&self, source: &AlmostIotaComplex, target: &AlmostIotaComplex) -> bool {
        self.matrix.nonzero_entries().all(|(i, j, p)| match p.as_monomial() {
            Some(k) => target.gens[i].gr_u - 2 * k as i64 == source.gens[j].gr_u + self.shift,
            None => false,
        })
    }
}

/// Naive bigrading of T₀ … T₂ₙ.
pub fn naive_bigrading(p: &StandardParams) -> Vec<(i64, i64)> {
    let mut out = vec![(0i64, 0i64)];
    for &(a, b) in p.pairs() {
        let &(u, q) = out.last().unwrap();
        let q1 = match a {
            Sign::Plus => q - 1,
            Sign::Minus => q + 1,
        };
        out.push((u, q1));
        let u2 = if b > 0 { u - 2 * b + 1 } else { u + 2 * (-b) - 1 };
        out.push((u2, q1));
    }
    out
}

pub fn build_standard(p: &StandardParams) -> AlmostIotaComplex {
    let grades = naive_bigrading(p);
    let n = grades.len();
    let gens = grades
        .iter()
        .enumerate()
        .map(|(i, &(u, q))| Generator { name: format!("T{}", i), gr_u: u, gr_q: Some(q) })
        .collect();
    let mut d = PolyMat::zeros(n, n);
    let mut iota = PolyMat::identity(n);
    for (k, &(a, b)) in p.pairs().iter().enumerate() {
        let odd = 2 * k + 1;
        let even = 2 * k + 2;
        match a {
            Sign::Plus => iota.set(odd - 1, odd, F2Poly::one()),
            Sign::Minus => iota.set(odd, odd - 1, F2Poly::one()),
        }
        let len = b.unsigned_abs() as u32;
        if b > 0 {
            d.set(odd, even, F2Poly::monomial(len));
        } else {
            d.set(even, odd, F2Poly::monomial(len));
        }
    }
    AlmostIotaComplex { gens, d, iota }
}

/// A two-generator acyclic summand `x → U^k y` with ι̅ = id; `x` sits in grading `gr_x`.
pub fn acyclic_pair(k: u32, gr_x: i64, names: (&str, &str)) -> AlmostIotaComplex {
    let gens = vec![Generator::new(names.0, gr_x), Generator::new(names.1, gr_x - 1 + 2 * k as i64)];
    let mut d = PolyMat::zeros(2, 2);
    d.set(1, 0, F2Poly::monomial(k));
    AlmostIotaComplex { gens, d, iota: PolyMat::identity(2) }
}

pub fn direct_sum(a: &AlmostIotaComplex, b: &AlmostIotaComplex) -> Result<AlmostIotaComplex> {
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let mut d = PolyMat::zeros(n, n);
    let mut iota = PolyMat::zeros(n, n);
    for (i, j, p) in a.d.nonzero_entries() {
        d.set(i, j, p.clone());
    }
    for (i, j, p) in b.d.nonzero_entries() {
        d.set(n1 + i, n1 + j, p.clone());
    }
    for (i, j, p) in a.iota.nonzero_entries() {
        iota.set(i, j, p.clone());
    }
    for (i, j, p) in b.iota.nonzero_entries() {
        iota.set(n1 + i, n1 + j, p.clone());
    }
    let gens = a.gens.iter().chain(b.gens.iter()).cloned().collect();
    AlmostIotaComplex::new(gens, d, iota)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Whether a tower in odd grading is an error (otherwise a warning).
    pub require_even_tower: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { require_even_tower: true }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub d_squared_zero: bool,
    /// First homogeneity violation, if any.
    pub inhomogeneity: Option<String>,
    pub iota_chain_mod_u: bool,
    /// Constant part of a homotopy H with ι̅² + 1 + [H, ∂] ≡ 0 mod U.
    pub iota_squared_witness: Option<F2Mat>,
    /// Gradings of the free generators left after reducing ∂ over F₂[U].
    pub tower_gradings: Vec<i64>,
    pub require_even_tower: bool,
}

impl ValidationReport {
    pub fn single_tower(&self) -> bool {
        self.tower_gradings.len() == 1
    }

    pub fn tower_even(&self) -> bool {
        self.tower_gradings.len() == 1 && self.tower_gradings[0].rem_euclid(2) == 0
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.d_squared_zero {
            out.push("d∘d ≠ 0".to_string());
        }
        if let Some(msg) = &self.inhomogeneity {
            out.push(msg.clone());
        }
        if !self.iota_chain_mod_u {
            out.push("ι̅∂ + ∂ι̅ has a nonzero constant part".to_string());
        }
        if self.iota_squared_witness.is_none() {
            out.push("ι̅² is not homotopic to the identity mod U".to_string());
        }
        if !self.single_tower() {
            out.push(format!("expected one U-tower, found {}", self.tower_gradings.len()));
        } else if self.require_even_tower && !self.tower_even() {
            out.push("the U-tower is not in even grading".to_string());
        }
        out
    }

    pub fn warnings(&self) -> Vec<String> {
        if !self.require_even_tower && self.single_tower() && !self.tower_even() {
            vec!["the U-tower is not in even grading".to_string()]
        } else {
            Vec::new()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        let f = self.failures();
        if f.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(f.join("; ")))
        }
    }
}

fn homogeneity_violation(c: &AlmostIotaComplex) -> Option<String> {
    for (what, m, drop) in [("d", &c.d, 1i64), ("iota", &c.iota, 0)] {
        for (i, j, p) in m.nonzero_entries() {
            let ok = match p.as_monomial() {
                Some(k) => c.gens[i].gr_u == c.gens[j].gr_u - drop + 2 * k as i64,
                None => false,
            };
            if !ok {
                return Some(format!(
                    "{} entry {} from '{}' to '{}' is not homogeneous",
                    what,
                    p.fmt_in(Var::U),
                    c.gens[j].name,
                    c.gens[i].name
                ));
            }
        }
    }
    None
}

/// Gradings of free generators after reducing ∂ to matching form.
pub fn tower_gradings(c: &AlmostIotaComplex) -> Result<Vec<i64>> {
    let red = reduce_face(&c.d)?;
    Ok(red.matching.free_points().iter().map(|&i| c.gens[i].gr_u).collect())
}

pub fn validate(c: &AlmostIotaComplex) -> ValidationReport {
    validate_with(c, ValidateOptions::default())
}

pub fn validate_with(c: &AlmostIotaComplex, opts: ValidateOptions) -> ValidationReport {
    let n = c.len();
    let d_squared_zero = c.d.mul(&c.d).is_zero();
    let inhomogeneity = homogeneity_violation(c);
    let comm = c.d.mul(&c.iota).add(&c.iota.mul(&c.d));
    let iota_chain_mod_u = comm.constant_part().is_zero();
    let sq = ModUMap { matrix: c.iota.mul(&c.iota), shift: 0 };
    let witness = homotopic_mod_u(c, c, &sq, &ModUMap::identity(n)).ok().flatten();
    let towers = if d_squared_zero && inhomogeneity.is_none() { tower_gradings(c).unwrap_or_default() } else { Vec::new() };
    ValidationReport {
        d_squared_zero,
        inhomogeneity,
        iota_chain_mod_u,
        iota_squared_witness: witness,
        tower_gradings: towers,
        require_even_tower: opts.require_even_tower,
    }
}

/// Finds the constant part of H (raising grading by `shift + 1`) with
/// f + g + H∂ + ∂'H ≡ 0 mod U, or returns `None` if the F₂ system has no solution.
pub fn homotopic_mod_u(
    source: &AlmostIotaComplex,
    target: &AlmostIotaComplex,
    f: &ModUMap,
    g: &ModUMap,
) -> Result<Option<F2Mat>> {
    let (n, m) = (source.len(), target.len());
    for map in [f, g] {
        if map.matrix.nrows() != m || map.matrix.ncols() != n {
            return Err(Error::Shape("map does not match source and target".into()));
        }
    }
    if f.shift != g.shift {
        return Err(Error::Shape("maps have different grading shifts".into()));
    }
    let rhs = f.matrix.add(&g.matrix).constant_part();
    let d0 = source.d.constant_part();
    let d1 = target.d.constant_part();
    // Unknowns: H[i][j] where the grading allows a constant entry.
    let mut var_of = vec![vec![usize::MAX; n]; m];
    let mut nvars = 0;
    for (i, row) in var_of.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if target.gens[i].gr_u == source.gens[j].gr_u + f.shift + 1 {
                *slot = nvars;
                nvars += 1;
            }
        }
    }
    let mut eqs = Vec::with_capacity(n * m);
    for i in 0..m {
        for j in 0..n {
            let mut row = BitRow::zeros(nvars);
            // (H d0)[i][j] = Σ_k H[i][k] d0[k][j]
            for k in 0..n {
                if d0.get(k, j) && var_of[i][k] != usize::MAX {
                    row.flip(var_of[i][k]);
                }
            }
            // (d1 H)[i][j] = Σ_k d1[i][k] H[k][j]
            for k in 0..m {
                if d1.get(i, k) && var_of[k][j] != usize::MAX {
                    row.flip(var_of[k][j]);
                }
            }
            eqs.push((row, rhs.get(i, j)));
        }
    }
    Ok(solve_affine(&eqs, nvars).map(|x| {
        F2Mat::from_fn(m, n, |i, j| var_of[i][j] != usize::MAX && x.get(var_of[i][j]))
    }))
}

/// Result of cancelling every constant differential entry.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub complex: AlmostIotaComplex,
    /// C → Cr
    pub to: ModUMap,
    /// Cr → C
    pub from: ModUMap,
}

/// Cancels constant entries of ∂ pairwise (lowest (row, col) first),
/// transferring ι̅ along each cancellation.
pub fn reduce(c: &AlmostIotaComplex) -> Result<Reduction> {
    validate_with(c, ValidateOptions { require_even_tower: false }).into_result()?;
    Ok(reduce_unchecked(c))
}

pub(crate) fn reduce_unchecked(c: &AlmostIotaComplex) -> Reduction {
    let n0 = c.len();
    let mut cur = c.clone();
    let mut to = PolyMat::identity(n0);
    let mut from = PolyMat::identity(n0);
    loop {
        let n = cur.len();
        let pivot = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| cur.d.get(i, j).constant());
        let Some((y, x)) = pivot else { break };
        debug_assert_eq!(cur.d.get(y, x).as_monomial(), Some(0));
        // h(y) = x
        let mut h = PolyMat::zeros(n, n);
        h.set(x, y, F2Poly::one());
        let id = PolyMat::identity(n);
        let a = id.add(&cur.d.mul(&h));
        let b = id.add(&h.mul(&cur.d));
        let rest: Vec<usize> = (0..n).filter(|&k| k != x && k != y).collect();
        let all: Vec<usize> = (0..n).collect();
        let new_d = a.mul(&cur.d).mul(&b).select(&rest, &rest);
        let new_iota = a.mul(&cur.iota).mul(&b).select(&rest, &rest);
        let to_step = a.select(&rest, &all);
        let from_step = b.select(&all, &rest);
        to = to_step.mul(&to);
        from = from.mul(&from_step);
        cur = AlmostIotaComplex { gens: rest.iter().map(|&k| cur.gens[k].clone()).collect(), d: new_d, iota: new_iota };
    }
    Reduction { complex: cur, to: ModUMap { matrix: to, shift: 0 }, from: ModUMap { matrix: from, shift: 0 } }
}

/// Reduces and checks ω² ≡ 0 mod U on the result.
pub fn reduce_checked(c: &AlmostIotaComplex) -> Result<Reduction> {
    let r = reduce(c)?;
    let w = r.complex.omega().constant_part();
    if !w.mul(&w).is_zero() {
        return Err(Error::Internal("reduced complex has ω² ≢ 0 mod U".into()));
    }
    Ok(r)
}

pub fn product(c1: &AlmostIotaComplex, c2: &AlmostIotaComplex) -> AlmostIotaComplex {
    let (n1, n2) = (c1.len(), c2.len());
    let i1 = PolyMat::identity(n1);
    let i2 = PolyMat::identity(n2);
    let d = c1.d.kron(&i2).add(&i1.kron(&c2.d));
    let iota = c1.iota.kron(&c2.iota);
    let mut gens = Vec::with_capacity(n1 * n2);
    for a in &c1.gens {
        for b in &c2.gens {
            gens.push(Generator {
                name: format!("{}.{}", a.name, b.name),
                gr_u: a.gr_u + b.gr_u,
                gr_q: a.gr_q.zip(b.gr_q).map(|(x, y)| x + y),
            });
        }
    }
    AlmostIotaComplex { gens, d, iota }
}

/// δ¹ = ∂ + Q·(constant part of ω); requires a reduced complex.
pub fn lift_to_r(c: &AlmostIotaComplex) -> Result<RComplex> {
    if !c.is_reduced() {
        return Err(Error::NotReduced("the differential has constant entries".into()));
    }
    let n = c.len();
    let w0 = c.omega().constant_part();
    let mut delta = RMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let q = if w0.get(i, j) { F2Poly::monomial(1) } else { F2Poly::zero() };
            delta.set(i, j, RElem::from_parts(false, c.d.get(i, j).clone(), q));
        }
    }
    let out = RComplex { gens: c.gens.clone(), delta };
    if !out.delta_squared_zero() {
        return Err(Error::NotReduced("δ¹ does not square to zero (ω² ≢ 0 mod U)".into()));
    }
    Ok(out)
}

/// Sets Q² = 0: ∂ comes from the constant and U parts, ω from the Q-linear part.
pub fn q2_reduce(m: &RComplex) -> AlmostIotaComplex {
    let n = m.len();
    let d = m.delta.u_side();
    let mut iota = PolyMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            if m.delta.get(i, j).q_part().coeff(1) {
                iota.add_at(i, j, &F2Poly::one());
            }
        }
    }
    AlmostIotaComplex { gens: m.gens.clone(), d, iota }
}

/// The twisted tensor product of two standard complexes with the product bigrading.
pub fn twisted_product(p1: &StandardParams, p2: &StandardParams) -> RComplex {
    let c1 = build_standard(p1);
    let c2 = build_standard(p2);
    let (n1, n2) = (c1.len(), c2.len());
    let i1 = PolyMat::identity(n1);
    let i2 = PolyMat::identity(n2);
    let d = c1.d.kron(&i2).add(&i1.kron(&c2.d));
    let w = c1.omega().kron(&i2).add(&i1.kron(&c2.omega())).constant_part();
    let n = n1 * n2;
    let mut delta = RMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let q = if w.get(i, j) { F2Poly::monomial(1) } else { F2Poly::zero() };
            delta.set(i, j, RElem::from_parts(false, d.get(i, j).clone(), q));
        }
    }
    let gens = product(&c1, &c2).gens;
    RComplex { gens, delta }
}

/// Checks that every δ¹ component is homogeneous: a U^k entry has bigraded
/// degree (−1, 0) and a Q^k entry degree (0, −1) when k = 1, so each drops
/// total degree by exactly one. Returns the first offending entry.
pub fn bigraded_homogeneity_violation(m: &RComplex) -> Option<(usize, usize)> {
    for i in 0..m.len() {
        for j in 0..m.len() {
            let e = m.delta.get(i, j);
            if e.is_zero() {
                continue;
            }
            let (Some(qi), Some(qj)) = (m.gens[i].gr_q, m.gens[j].gr_q) else { return Some((i, j)) };
            let (ui, uj) = (m.gens[i].gr_u, m.gens[j].gr_u);
            if e.constant() {
                return Some((i, j));
            }
            for &k in e.u_part().exponents() {
                if (ui - 2 * k as i64, qi) != (uj - 1, qj) {
                    return Some((i, j));
                }
            }
            for &k in e.q_part().exponents() {
                if (ui, qi - 2 * k as i64) != (uj, qj - 1) {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

// JSON form of a general complex.

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GeneratorJson {
    pub name: String,
    #[serde(rename = "grU")]
    pub gr_u: i64,
    #[serde(rename = "grQ", default, skip_serializing_if = "Option::is_none")]
    pub gr_q: Option<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EntryJson {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub d: Vec<EntryJson>,
    #[serde(default)]
    pub iota: Vec<EntryJson>,
}

impl AlmostIotaComplex {
    pub fn to_json(&self) -> ComplexJson {
        let entries = |m: &PolyMat| {
            let mut v: Vec<EntryJson> = m
                .nonzero_entries()
                .map(|(i, j, p)| EntryJson {
                    from: self.gens[j].name.clone(),
                    to: self.gens[i].name.clone(),
                    coeff: p.fmt_in(Var::U),
                })
                .collect();
            v.sort_by(|a, b| {
                let ka = (self.index_of(&a.from), self.index_of(&a.to));
                let kb = (self.index_of(&b.from), self.index_of(&b.to));
                ka.cmp(&kb)
            });
            v
        };
        ComplexJson {
            generators: self.gens.iter().map(|g| GeneratorJson { name: g.name.clone(), gr_u: g.gr_u, gr_q: g.gr_q }).collect(),
            d: entries(&self.d),
            iota: entries(&self.iota),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let gens: Vec<Generator> =
            j.generators.iter().map(|g| Generator { name: g.name.clone(), gr_u: g.gr_u, gr_q: g.gr_q }).collect();
        let n = gens.len();
        let mut c = AlmostIotaComplex::new(gens, PolyMat::zeros(n, n), PolyMat::zeros(n, n))?;
        for (which, list) in [(0, &j.d), (1, &j.iota)] {
            for e in list {
                let from = c.index_of(&e.from).ok_or_else(|| Error::Invalid(format!("unknown generator '{}'", e.from)))?;
                let to = c.index_of(&e.to).ok_or_else(|| Error::Invalid(format!("unknown generator '{}'", e.to)))?;
                let p = parse_u_poly(&e.coeff)?;
                if which == 0 {
                    c.d.add_at(to, from, &p);
                } else {
                    c.iota.add_at(to, from, &p);
                }
            }
        }
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: ComplexJson = serde_json::from_str(text).map_err(|e| {
            let pos = text
                .lines()
                .take(e.line().saturating_sub(1))
                .map(|l| l.len() + 1)
                .sum::<usize>()
                + e.column().saturating_sub(1);
            if e.is_data() {
                Error::Invalid(e.to_string())
            } else {
                Error::syntax(pos, e.to_string())
            }
        })?;
        Self::from_json(&j)
    }
}

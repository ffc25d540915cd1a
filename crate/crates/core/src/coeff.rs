//! Exact arithmetic in F₂[U], F₂[Q] and R = F₂[U,Q]/(UQ).

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest exponent the library will represent.
pub const MAX_EXP: u32 = (1u32 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Var {
    U,
    Q,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::U => 'U',
            Var::Q => 'Q',
        }
    }
}

/// A polynomial over F₂ in one variable, stored as its sorted set of exponents.
///
/// The representation is sparse so that large exponents cost nothing; the
/// empty set is the zero polynomial.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Poly {
    exps: Vec<u32>,
}

impl F2Poly {
    pub fn zero() -> Self {
        F2Poly { exps: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: u32) -> Self {
        assert!(k <= MAX_EXP, "exponent overflow");
        F2Poly { exps: vec![k] }
    }

    /// Builds a polynomial from exponents; repeated exponents cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = u32>>(it: I) -> Self {
        let mut v: Vec<u32> = it.into_iter().collect();
        v.sort_unstable();
        let mut exps = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j < v.len() && v[j] == v[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                exps.push(v[i]);
            }
            i = j;
        }
        F2Poly { exps }
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.exps.last().copied()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u32> {
        self.exps.first().copied()
    }

    pub fn coeff(&self, k: u32) -> bool {
        self.exps.binary_search(&k).is_ok()
    }

    pub fn constant(&self) -> bool {
        self.coeff(0)
    }

    /// The single exponent if this is a monomial.
    pub fn as_monomial(&self) -> Option<u32> {
        match self.exps.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// Drops the constant term.
    pub fn positive_part(&self) -> Self {
        F2Poly { exps: self.exps.iter().copied().filter(|&e| e > 0).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.exps.len() * other.exps.len());
        for &a in &self.exps {
            for &b in &other.exps {
                let s = a as u64 + b as u64;
                if s > MAX_EXP as u64 {
                    return Err(Error::ExponentOverflow);
                }
                terms.push(s as u32);
            }
        }
        Ok(Self::from_exponents(terms))
    }

    /// Multiplication; panics only when an exponent would exceed [`MAX_EXP`].
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("exponent overflow")
    }

    pub fn shift(&self, k: u32) -> Self {
        self.mul(&Self::monomial(k))
    }

    /// Applies `f` to every exponent (used by the arc-lengthening shift).
    pub fn map_exponents(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::from_exponents(self.exps.iter().map(|&e| f(e)))
    }

    pub fn fmt_in(&self, var: Var) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.exps
            .iter()
            .map(|&e| match e {
                0 => "1".to_string(),
                1 => var.symbol().to_string(),
                _ => format!("{}^{}", var.symbol(), e),
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl Add for &F2Poly {
    type Output = F2Poly;
    fn add(self, rhs: &F2Poly) -> F2Poly {
        let (a, b) = (&self.exps, &rhs.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        F2Poly { exps: out }
    }
}

impl Add for F2Poly {
    type Output = F2Poly;
    fn add(self, rhs: F2Poly) -> F2Poly {
        &self + &rhs
    }
}

impl AddAssign<&F2Poly> for F2Poly {
    fn add_assign(&mut self, rhs: &F2Poly) {
        *self = &*self + rhs;
    }
}

impl fmt::Debug for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_in(Var::U))
    }
}

/// An element of R = F₂[U,Q]/(UQ), kept as `c + u + q` with `u(0) = q(0) = 0`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct RElem {
    c: bool,
    u: F2Poly,
    q: F2Poly,
}

impl RElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        RElem { c: true, ..Self::default() }
    }

    pub fn u_pow(k: u32) -> Self {
        Self::from_var_poly(Var::U, &F2Poly::monomial(k))
    }

    pub fn q_pow(k: u32) -> Self {
        Self::from_var_poly(Var::Q, &F2Poly::monomial(k))
    }

    /// Embeds a polynomial in one variable, routing its constant term to `c`.
    pub fn from_var_poly(var: Var, p: &F2Poly) -> Self {
        let pos = p.positive_part();
        let c = p.constant();
        match var {
            Var::U => RElem { c, u: pos, q: F2Poly::zero() },
            Var::Q => RElem { c, u: F2Poly::zero(), q: pos },
        }
    }

    /// Assembles from parts; nonzero constant terms in `u` or `q` are folded into `c`.
    pub fn from_parts(c: bool, u: F2Poly, q: F2Poly) -> Self {
        let c = c ^ u.constant() ^ q.constant();
        RElem { c, u: u.positive_part(), q: q.positive_part() }
    }

    pub fn split(&self) -> (bool, F2Poly, F2Poly) {
        (self.c, self.u.clone(), self.q.clone())
    }

    pub fn constant(&self) -> bool {
        self.c
    }

    pub fn u_part(&self) -> &F2Poly {
        &self.u
    }

    pub fn q_part(&self) -> &F2Poly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        !self.c && self.u.is_zero() && self.q.is_zero()
    }

    /// The image in F₂[U] obtained by setting Q = 0.
    pub fn mod_q(&self) -> F2Poly {
        let c = if self.c { F2Poly::one() } else { F2Poly::zero() };
        &c + &self.u
    }

    /// The image in F₂[Q] obtained by setting U = 0.
    pub fn mod_u(&self) -> F2Poly {
        let c = if self.c { F2Poly::one() } else { F2Poly::zero() };
        &c + &self.q
    }

    pub fn add(&self, other: &Self) -> Self {
        RElem { c: self.c ^ other.c, u: &self.u + &other.u, q: &self.q + &other.q }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        // Mixed products U^a Q^b vanish, so the U and Q parts never interact.
        let u = (self.mod_q()).try_mul(&other.mod_q())?;
        let q = (self.mod_u()).try_mul(&other.mod_u())?;
        Ok(RElem { c: self.c && other.c, u: u.positive_part(), q: q.positive_part() })
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("exponent overflow")
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_coeff(text)
    }
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.c {
            terms.push("1".to_string());
        }
        if !self.u.is_zero() {
            terms.push(self.u.fmt_in(Var::U));
        }
        if !self.q.is_zero() {
            terms.push(self.q.fmt_in(Var::Q));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl fmt::Debug for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn relem_add(x: &RElem, y: &RElem) -> RElem {
    x.add(y)
}

pub fn relem_mul(x: &RElem, y: &RElem) -> RElem {
    x.mul(y)
}

pub fn relem_split(x: &RElem) -> (bool, F2Poly, F2Poly) {
    x.split()
}

/// Parses the coefficient grammar `term ("+" term)*` where a term is `0`, `1`,
/// `U`, `Q`, or a variable raised to a natural power. Whitespace is ignored.
pub fn parse_coeff(text: &str) -> Result<RElem> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::syntax(0, "empty coefficient"));
    }
    let mut acc = RElem::zero();
    let mut i = 0;
    loop {
        let (pos, ch) = *chars.get(i).ok_or_else(|| Error::syntax(text.len(), "expected a term"))?;
        let term = match ch {
            '0' => {
                i += 1;
                RElem::zero()
            }
            '1' => {
                i += 1;
                RElem::one()
            }
            'U' | 'Q' => {
                i += 1;
                let mut exp: u64 = 1;
                if let Some(&(_, '^')) = chars.get(i) {
                    i += 1;
                    let start = i;
                    let mut val: u64 = 0;
                    while let Some(&(_, d)) = chars.get(i) {
                        if let Some(v) = d.to_digit(10) {
                            val = val * 10 + v as u64;
                            if val > MAX_EXP as u64 {
                                return Err(Error::ExponentOverflow);
                            }
                            i += 1;
                        } else {
                            break;
                        }
                    }
                    if i == start {
                        let p = chars.get(i).map(|c| c.0).unwrap_or(text.len());
                        return Err(Error::syntax(p, "expected exponent after '^'"));
                    }
                    exp = val;
                }
                let p = F2Poly::monomial(exp as u32);
                RElem::from_var_poly(if ch == 'U' { Var::U } else { Var::Q }, &p)
            }
            other => return Err(Error::syntax(pos, format!("unexpected character '{}'", other))),
        };
        acc = acc.add(&term);
        match chars.get(i) {
            None => break,
            Some(&(_, '+')) => i += 1,
            Some(&(p, c)) => return Err(Error::syntax(p, format!("unexpected character '{}'", c))),
        }
    }
    Ok(acc)
}

/// Parses a coefficient that must lie in F₂[U].
pub fn parse_u_poly(text: &str) -> Result<F2Poly> {
    let r = parse_coeff(text)?;
    if !r.q_part().is_zero() {
        return Err(Error::Invalid(format!("coefficient '{}' must be a polynomial in U", text)));
    }
    Ok(r.mod_q())
}

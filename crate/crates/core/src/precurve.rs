//! Precurves on the twice-punctured disk and their simplification to
//! decorated immersed curves.
//!
//! A precurve is a pair of face differentials joined across the single arc by
//! an invertible F₂ matrix `P`: `dU` acts on the s₁ side (facing the
//! U-puncture), `dQ` on the s₂ side, and the corresponding R-complex has
//! `δ¹ = dU + P⁻¹ dQ P`.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iota::{Generator, RComplex, RMat, Sign, StandardParams};
use crate::linalg::{F2Mat, PolyMat};
use crate::matching::{reduce_face, Matching, Status};

mod reduction;

/// A factor of the word realizing `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ElementaryMove {
    /// Transposition of adjacent positions `i` and `i + 1`.
    Crossing { i: usize },
    /// The matrix `1 + E_{from,to}`: position `to` picks up a copy of `from`.
    Crossover { from: usize, to: usize },
}

impl ElementaryMove {
    fn apply_right(&self, m: &mut F2Mat) {
        match *self {
            ElementaryMove::Crossing { i } => m.swap_cols(i, i + 1),
            ElementaryMove::Crossover { from, to } => m.add_col(from, to),
        }
    }
}

pub fn word_product(n: usize, word: &[ElementaryMove]) -> F2Mat {
    let mut m = F2Mat::identity(n);
    for w in word {
        w.apply_right(&mut m);
    }
    m
}

/// Gaussian decomposition of an invertible matrix into crossings followed by
/// crossover arrows. Returns the word and the permutation part.
pub fn decompose(p: &F2Mat) -> (Vec<ElementaryMove>, Vec<usize>) {
    let n = p.nrows();
    let mut m = p.clone();
    let mut ops = Vec::new();
    let mut used = vec![false; n];
    for j in 0..n {
        let r = (0..n).find(|&r| !used[r] && m.get(r, j)).expect("invertible");
        used[r] = true;
        for j2 in 0..n {
            if j2 != j && m.get(r, j2) {
                m.add_col(j, j2);
                ops.push(ElementaryMove::Crossover { from: j, to: j2 });
            }
        }
    }
    let perm = m.as_permutation().expect("column reduction ends at a permutation");
    // Bubble-sort the permutation into adjacent transpositions.
    let mut word = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect(); // cur[j] = row of the 1 in column j of the running product
    let mut pm = F2Mat::identity(n);
    for target in 0..n {
        // want column target to carry row perm[target]
        let mut pos = (0..n).find(|&j| cur[j] == perm[target]).unwrap();
        while pos > target {
            word.push(ElementaryMove::Crossing { i: pos - 1 });
            cur.swap(pos - 1, pos);
            pm.swap_cols(pos - 1, pos);
            pos -= 1;
        }
    }
    debug_assert_eq!(pm, m);
    word.extend(ops.into_iter().rev());
    (word, perm)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precurve {
    pub gens: Vec<Generator>,
    pub du: PolyMat,
    pub dq: PolyMat,
    pub p: F2Mat,
    pub pword: Vec<ElementaryMove>,
}

impl Precurve {
    pub fn new(gens: Vec<Generator>, du: PolyMat, dq: PolyMat, p: F2Mat) -> Result<Self> {
        let n = gens.len();
        if du.nrows() != n || dq.nrows() != n || p.nrows() != n || du.ncols() != n || dq.ncols() != n || p.ncols() != n {
            return Err(Error::Shape("precurve matrices must be n x n".into()));
        }
        if du.has_constant_entries() || dq.has_constant_entries() {
            return Err(Error::Invalid("face differentials must have zero constant terms".into()));
        }
        if !du.mul(&du).is_zero() || !dq.mul(&dq).is_zero() {
            return Err(Error::Invalid("face differentials must square to zero".into()));
        }
        if p.inverse().is_none() {
            return Err(Error::Invalid("P must be invertible".into()));
        }
        let (pword, _) = decompose(&p);
        Ok(Precurve { gens, du, dq, p, pword })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn word_matches(&self) -> bool {
        word_product(self.len(), &self.pword) == self.p
    }
}

/// The functor F: splits δ¹ into its U and Q parts with `P = 1`.
pub fn to_precurve(m: &RComplex) -> Result<Precurve> {
    if m.delta.has_constant_entries() {
        return Err(Error::NotReduced("δ¹ has constant entries".into()));
    }
    let n = m.len();
    Precurve::new(m.gens.clone(), m.delta.u_side(), m.delta.q_side(), F2Mat::identity(n))
}

/// The functor G: δ¹ = dU + P⁻¹ dQ P.
pub fn from_precurve(pc: &Precurve) -> RComplex {
    let pinv = pc.p.inverse().expect("P is invertible by construction");
    let q = PolyMat::from_f2(&pinv).mul(&pc.dq).mul(&PolyMat::from_f2(&pc.p));
    RComplex { gens: pc.gens.clone(), delta: RMat::from_sides(&pc.du, &q) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Face {
    U,
    Q,
}

/// Rank of the localized homology on one face: the number of unmatched
/// side-points after normalizing that face.
pub fn homology_rank(pc: &Precurve, face: Face) -> Result<usize> {
    let d = match face {
        Face::U => &pc.du,
        Face::Q => &pc.dq,
    };
    Ok(reduce_face(d)?.matching.free_points().len())
}

/// The same count computed from an R-complex: reduce δ¹ mod Q (resp. mod U).
pub fn rcomplex_homology_rank(m: &RComplex, face: Face) -> Result<usize> {
    let d = match face {
        Face::U => m.delta.u_side(),
        Face::Q => m.delta.q_side(),
    };
    Ok(reduce_face(&d)?.matching.free_points().len())
}

/// Lengthens every U-arc of length at least `n` by one.
pub fn shift_precurve(pc: &Precurve, n: u32) -> Result<Precurve> {
    if n < 1 {
        return Err(Error::ShiftIndex);
    }
    let du = pc.du.map(|p| p.map_exponents(|e| if e >= n { e + 1 } else { e }));
    Ok(Precurve { du, ..pc.clone() })
}

/// A precurve whose faces are in matching form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplyFaced {
    pub precurve: Precurve,
    pub u: Matching,
    pub q: Matching,
}

impl SimplyFaced {
    pub fn from_precurve(pc: &Precurve) -> Option<SimplyFaced> {
        let u = Matching::from_matrix(&pc.du)?;
        let q = Matching::from_matrix(&pc.dq)?;
        Some(SimplyFaced { precurve: pc.clone(), u, q })
    }
}

/// Minimal-pivot elimination on each face; constant basis changes `A` on s₁
/// and `B` on s₂ update `P ← B·P·A⁻¹` in the sense that the new `P` relates
/// the new bases.
pub fn simply_face(pc: &Precurve) -> Result<SimplyFaced> {
    let ru = reduce_face(&pc.du)?;
    let rq = reduce_face(&pc.dq)?;
    let ninv = rq.basis_constant.inverse().ok_or_else(|| Error::Internal("singular basis change".into()))?;
    let p = ninv.mul(&pc.p).mul(&ru.basis_constant);
    let (pword, _) = decompose(&p);
    let precurve =
        Precurve { gens: pc.gens.clone(), du: ru.matching.to_matrix(), dq: rq.matching.to_matrix(), p, pword };
    Ok(SimplyFaced { precurve, u: ru.matching, q: rq.matching })
}

/// The outcome of pushing a test arrow along two strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Walk {
    /// The arrow can be pushed out after this many faces.
    Good(usize),
    /// The strands diverge after this many faces in the wrong direction.
    Bad(usize),
    /// The strands never diverge.
    Parallel,
}

impl Walk {
    fn steps(&self) -> Option<usize> {
        match *self {
            Walk::Good(k) | Walk::Bad(k) => Some(k),
            Walk::Parallel => None,
        }
    }
}

/// Internal strand picture: the s₂ side is relabelled by strands, and what
/// remains of `P` is the product of the crossover arrows in `arrows`.
#[derive(Clone, Debug)]
struct Strands {
    u: Vec<Status>,
    q: Vec<Status>,
    arrows: Vec<(usize, usize)>,
}

fn relabel_status(st: &[Status], perm: &[usize]) -> Vec<Status> {
    // perm[old] = new
    let mut out = vec![Status::Free; st.len()];
    for (old, s) in st.iter().enumerate() {
        out[perm[old]] = match *s {
            Status::Free => Status::Free,
            Status::Source { partner, len } => Status::Source { partner: perm[partner], len },
            Status::Target { partner, len } => Status::Target { partner: perm[partner], len },
        };
    }
    out
}

fn face_status<'a>(s: &'a Strands, face: Face) -> &'a [Status] {
    match face {
        Face::U => &s.u,
        Face::Q => &s.q,
    }
}

fn other(face: Face) -> Face {
    match face {
        Face::U => Face::Q,
        Face::Q => Face::U,
    }
}

fn walk(s: &Strands, mut a: usize, mut b: usize, mut face: Face) -> Walk {
    let mut seen = HashSet::new();
    let mut steps = 0;
    loop {
        if !seen.insert((a, b, face)) {
            return Walk::Parallel;
        }
        steps += 1;
        let st = face_status(s, face);
        let (sa, sb) = (st[a], st[b]);
        if sa.is_free() && sb.is_free() {
            return Walk::Good(steps);
        }
        match sa.key().cmp(&sb.key()) {
            Ordering::Less => return Walk::Good(steps),
            Ordering::Greater => return Walk::Bad(steps),
            Ordering::Equal => {
                a = sa.partner().unwrap();
                b = sb.partner().unwrap();
                face = other(face);
            }
        }
    }
}

/// Sequence of face keys met when following strand `a` starting into `face`,
/// truncated once it must repeat.
fn key_sequence(s: &Strands, mut a: usize, mut face: Face) -> Vec<(u8, i64)> {
    let n = s.u.len();
    let mut out = Vec::new();
    for _ in 0..(2 * n + 2) {
        let st = face_status(s, face)[a];
        out.push(st.key());
        match st.partner() {
            None => break,
            Some(p) => {
                a = p;
                face = other(face);
            }
        }
    }
    out
}

/// An ordered simply-faced precurve, ready for arrow sliding.
#[derive(Clone, Debug)]
pub struct OrderedPrecurve {
    pub simply_faced: SimplyFaced,
    /// Strand indices sorted by the divergence order.
    pub order: Vec<usize>,
    strands: Strands,
}

impl OrderedPrecurve {
    /// The current crossover arrows as (from, to) strand pairs.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.strands.arrows.clone()
    }
}

/// Sorts strands by the divergence order and rewrites `P` as crossings
/// (absorbed into the strand labels) followed by crossover arrows.
pub fn order_strands(sf: &SimplyFaced) -> OrderedPrecurve {
    let n = sf.precurve.len();
    let p = &sf.precurve.p;
    let (word, perm) = decompose(p);
    // P = Π · arrows, with Π[perm[j]][j] = 1: strand j meets s₂ point perm[j].
    let mut inv = vec![0; n];
    for (j, &r) in perm.iter().enumerate() {
        inv[r] = j;
    }
    let q = relabel_status(&sf.q.statuses(), &inv);
    let arrows = word
        .iter()
        .filter_map(|w| match *w {
            ElementaryMove::Crossover { from, to } => Some((from, to)),
            ElementaryMove::Crossing { .. } => None,
        })
        .collect();
    let strands = Strands { u: sf.u.statuses(), q, arrows };
    let mut order: Vec<usize> = (0..n).collect();
    let keys: Vec<Vec<(u8, i64)>> = (0..n).map(|a| key_sequence(&strands, a, Face::U)).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    let mut sf = sf.clone();
    let mut ordered_word: Vec<ElementaryMove> =
        word.iter().filter(|w| matches!(w, ElementaryMove::Crossing { .. })).copied().collect();
    ordered_word.extend(word.iter().filter(|w| matches!(w, ElementaryMove::Crossover { .. })).copied());
    sf.precurve.pword = ordered_word;
    OrderedPrecurve { simply_faced: sf, order, strands }
}

/// Number of faces traversed until the strands of `arrow` diverge, in the
/// better of the two directions; `None` for parallel strands.
pub fn arrow_depth(op: &OrderedPrecurve, arrow: (usize, usize)) -> Result<Option<usize>> {
    let n = op.strands.u.len();
    let (a, b) = arrow;
    if a >= n || b >= n || a == b {
        return Err(Error::Invalid(format!("arrow {:?} out of range", arrow)));
    }
    let wu = walk(&op.strands, a, b, Face::U).steps();
    let wq = walk(&op.strands, a, b, Face::Q).steps();
    Ok(match (wu, wq) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    #[serde(rename = "U")]
    UPuncture,
    #[serde(rename = "Q")]
    QPuncture,
    #[serde(rename = "closed")]
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// δ¹ of the earlier generator hits the later one.
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub face: Face,
    pub power: u32,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComponent {
    /// Strand indices in path order; for closed curves the last segment
    /// returns to the first generator.
    pub generators: Vec<usize>,
    pub segments: Vec<Segment>,
    pub start: End,
    pub end: End,
    /// Local system on the parallel copies (1×1 identity when undecorated).
    pub decoration: F2Mat,
}

impl CurveComponent {
    pub fn is_decorated(&self) -> bool {
        self.decoration != F2Mat::identity(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multicurve {
    pub names: Vec<String>,
    pub components: Vec<CurveComponent>,
    /// The simply-faced precurve the components were read from.
    pub precurve: Precurve,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub generators: Vec<String>,
    pub segments: Vec<Segment>,
    pub start: End,
    pub end: End,
    pub decoration: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticurveJson {
    pub components: Vec<ComponentJson>,
}

impl Multicurve {
    pub fn to_json(&self) -> MulticurveJson {
        let components = self
            .components
            .iter()
            .map(|c| ComponentJson {
                generators: c.generators.iter().map(|&i| self.names[i].clone()).collect(),
                segments: c.segments.clone(),
                start: c.start,
                end: c.end,
                decoration: c.decoration.to_bit_rows(),
            })
            .collect();
        MulticurveJson { components }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("multicurve serializes")
    }
}

pub fn components(mc: &Multicurve) -> &[CurveComponent] {
    &mc.components
}

fn segment_at(st: &[Status], from: usize, face: Face) -> Option<(usize, Segment)> {
    match st[from] {
        Status::Free => None,
        Status::Source { partner, len } => Some((partner, Segment { face, power: len, direction: Direction::Forward })),
        Status::Target { partner, len } => Some((partner, Segment { face, power: len, direction: Direction::Backward })),
    }
}

fn trace_components(s: &Strands) -> Vec<CurveComponent> {
    let n = s.u.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let end_of = |face: Face| match face {
        Face::U => End::UPuncture,
        Face::Q => End::QPuncture,
    };
    let trace = |start: usize, first: Face, seen: &mut Vec<bool>| {
        let mut gens = vec![start];
        let mut segs = Vec::new();
        seen[start] = true;
        let mut cur = start;
        let mut face = first;
        let start_end = {
            let back = other(first);
            if face_status(s, back)[start].is_free() {
                end_of(back)
            } else {
                End::Closed
            }
        };
        let end;
        loop {
            match segment_at(face_status(s, face), cur, face) {
                None => {
                    end = end_of(face);
                    break;
                }
                Some((next, seg)) => {
                    segs.push(seg);
                    if next == start {
                        end = End::Closed;
                        break;
                    }
                    seen[next] = true;
                    gens.push(next);
                    cur = next;
                    face = other(face);
                }
            }
        }
        CurveComponent { generators: gens, segments: segs, start: start_end, end, decoration: F2Mat::identity(1) }
    };
    // Open components first: start at U-free points, then Q-free points.
    for i in 0..n {
        if !seen[i] && s.u[i].is_free() {
            comps.push(trace(i, Face::Q, &mut seen));
        }
    }
    for i in 0..n {
        if !seen[i] && s.q[i].is_free() {
            comps.push(trace(i, Face::U, &mut seen));
        }
    }
    for i in 0..n {
        if !seen[i] {
            comps.push(trace(i, Face::U, &mut seen));
        }
    }
    comps
}

/// Runs the arrow-sliding algorithm to completion.
pub fn slide_arrows(op: &OrderedPrecurve) -> Result<Multicurve> {
    let sf = &op.simply_faced;
    let n = sf.precurve.len();
    let total_len: usize = sf.u.arcs().iter().map(|a| a.len as usize).sum::<usize>()
        + sf.q.arcs().iter().map(|a| a.len as usize).sum::<usize>();
    let cap = 16 * n.max(1) * total_len.max(1);
    let u = sf.u.statuses();
    let red = reduction::reduce_strands(&u, &sf.q.statuses(), &sf.precurve.p, cap)?;
    // Certify the accumulated basis changes.
    if red.ninv.mul(&sf.precurve.p).mul(&red.m) != red.p {
        return Err(Error::Internal("arrow sliding lost track of P".into()));
    }
    certify_face(&sf.precurve.du, &red.m)?;
    let n_acc = red.ninv.inverse().expect("product of elementary matrices");
    certify_face(&sf.precurve.dq, &n_acc)?;
    // Strand j runs from U-point j to Q-point pi[j].
    let mut inv = vec![0; n];
    for (j, &r) in red.pi.iter().enumerate() {
        inv[r] = j;
    }
    let w = F2Mat::from_fn(n, n, |i, j| red.p.get(red.pi[i], j));
    let mut expect = F2Mat::identity(n);
    for b in &red.bands {
        for (i, &ci) in b.cols.iter().enumerate() {
            for (j, &cj) in b.cols.iter().enumerate() {
                expect.set(ci, cj, b.block.get(i, j));
            }
        }
    }
    if w != expect {
        return Err(Error::Internal("arrow sliding left a stray arrow".into()));
    }
    let s = Strands { u, q: relabel_status(&sf.q.statuses(), &inv), arrows: Vec::new() };
    let mut comps = trace_components(&s);
    attach_decorations(&red.bands, &mut comps);
    order_components(&mut comps);
    let names: Vec<String> = sf.precurve.gens.iter().map(|g| g.name.clone()).collect();
    let qm = Matching::new(n, statuses_to_arcs(&s.q))?;
    let (pword, _) = decompose(&w);
    let precurve = Precurve { gens: sf.precurve.gens.clone(), du: sf.precurve.du.clone(), dq: qm.to_matrix(), p: w, pword };
    Ok(Multicurve { names, components: comps, precurve })
}

/// Checks that conjugating a matched face by the constant change `m` gives a
/// differential that positive-length changes bring back to the same matching.
fn certify_face(d: &PolyMat, m: &F2Mat) -> Result<()> {
    let minv = m.inverse().ok_or_else(|| Error::Internal("singular face change".into()))?;
    let conj = PolyMat::from_f2(&minv).mul(d).mul(&PolyMat::from_f2(m));
    let red = reduce_face(&conj)?;
    if red.matching.to_matrix() != *d || red.basis_constant != F2Mat::identity(d.nrows()) {
        return Err(Error::Internal("face change is not a face automorphism".into()));
    }
    Ok(())
}

fn statuses_to_arcs(st: &[Status]) -> Vec<crate::matching::Arc> {
    st.iter()
        .enumerate()
        .filter_map(|(i, s)| match *s {
            Status::Source { partner, len } => Some(crate::matching::Arc { src: i, dst: partner, len }),
            _ => None,
        })
        .collect()
}

/// Merges the parallel closed copies of each band into one component
/// carrying the band's local system. Bands with trivial local system stay
/// as separate copies.
fn attach_decorations(bands: &[reduction::Band], comps: &mut Vec<CurveComponent>) {
    for b in bands {
        if b.block == F2Mat::identity(b.cols.len()) {
            continue;
        }
        let members: Vec<usize> = b
            .cols
            .iter()
            .map(|c| comps.iter().position(|k| k.generators.contains(c)).expect("every strand is traced"))
            .collect();
        let mut base = comps[members[0]].clone();
        base.decoration = b.block.clone();
        let mut drop: Vec<usize> = members.clone();
        drop.sort_unstable();
        drop.dedup();
        for &k in drop.iter().rev() {
            comps.remove(k);
        }
        comps.push(base);
    }
}

fn order_components(comps: &mut [CurveComponent]) {
    comps.sort_by_key(|c| {
        let has_u = c.start == End::UPuncture || c.end == End::UPuncture;
        (!has_u, c.generators.iter().min().copied().unwrap_or(usize::MAX))
    });
}

/// The primitive component γ₀ with its standard-complex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveCurve {
    pub params: StandardParams,
    /// Strand indices labelled T₀ … T₂ₙ.
    pub generators: Vec<usize>,
    pub segments: Vec<Segment>,
    pub initial: usize,
    pub final_gen: usize,
    pub bigrading: Option<Vec<(i64, i64)>>,
}

pub fn extract_primitive(mc: &Multicurve) -> Result<PrimitiveCurve> {
    let candidates: Vec<&CurveComponent> = mc.components.iter().filter(|c| c.start == End::UPuncture).collect();
    let comp = match candidates.as_slice() {
        [c] => *c,
        [] => return Err(Error::Invalid("no curve ends at the U-puncture".into())),
        _ => return Err(Error::Invalid("more than one curve ends at the U-puncture".into())),
    };
    if comp.is_decorated() {
        return Err(Error::Internal("the primitive curve carries a decoration".into()));
    }
    if comp.end != End::QPuncture {
        return Err(Error::Invalid("the U-puncture curve does not end at the Q-puncture".into()));
    }
    let params = read_segments(&comp.segments)?;
    let bigrading = {
        let gs: Vec<_> = comp.generators.iter().map(|&i| &mc.precurve.gens[i]).collect();
        if gs.iter().all(|g| g.gr_q.is_some()) {
            Some(gs.iter().map(|g| (g.gr_u, g.gr_q.unwrap())).collect())
        } else {
            None
        }
    };
    Ok(PrimitiveCurve {
        params,
        generators: comp.generators.clone(),
        segments: comp.segments.clone(),
        initial: comp.generators[0],
        final_gen: *comp.generators.last().unwrap(),
        bigrading,
    })
}

fn read_segments(segs: &[Segment]) -> Result<StandardParams> {
    if segs.len() % 2 != 0 {
        return Err(Error::Invalid("primitive curve must have an even number of segments".into()));
    }
    let mut pairs = Vec::new();
    for pair in segs.chunks(2) {
        let (q, u) = (pair[0], pair[1]);
        if q.face != Face::Q || u.face != Face::U {
            return Err(Error::Invalid("segments do not alternate Q and U".into()));
        }
        if q.power != 1 {
            return Err(Error::Invalid(format!("Q-segment of length {} on the primitive curve", q.power)));
        }
        // Forward means T_{i-1} → T_i; ωT_i = T_{i-1} is the backward case.
        let a = match q.direction {
            Direction::Backward => Sign::Plus,
            Direction::Forward => Sign::Minus,
        };
        let b = match u.direction {
            Direction::Backward => u.power as i64,
            Direction::Forward => -(u.power as i64),
        };
        pairs.push((a, b));
    }
    StandardParams::new(pairs)
}

pub fn readout_standard(g: &PrimitiveCurve) -> Result<StandardParams> {
    read_segments(&g.segments)
}

/// Stage-by-stage record of the pipeline, used for conservation checks.
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub initial: Precurve,
    pub simply_faced: SimplyFaced,
    pub ordered: OrderedPrecurve,
    pub multicurve: Multicurve,
}

pub fn run_pipeline(m: &RComplex) -> Result<PipelineTrace> {
    let initial = to_precurve(m)?;
    let simply_faced = simply_face(&initial)?;
    let ordered = order_strands(&simply_faced);
    let multicurve = slide_arrows(&ordered)?;
    Ok(PipelineTrace { initial, simply_faced, ordered, multicurve })
}

/// Helper for fixtures: an R-complex from a list of δ¹ components `(from, to, coeff)`.
pub fn rcomplex_from_edges(names: &[&str], edges: &[(&str, &str, &str)]) -> Result<RComplex> {
    let gens: Vec<Generator> = names.iter().map(|n| Generator::new(*n, 0)).collect();
    let idx = |s: &str| names.iter().position(|n| *n == s).ok_or_else(|| Error::Invalid(format!("unknown generator '{}'", s)));
    let mut delta = RMat::zeros(names.len());
    for &(from, to, c) in edges {
        let (j, i) = (idx(from)?, idx(to)?);
        let v = delta.get(i, j).add(&crate::coeff::parse_coeff(c)?);
        delta.set(i, j, v);
    }
    RComplex::new(gens, delta)
}

//! Classification up to local equivalence and the integer homomorphisms
//! read off a standard representative.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iota::{
    lift_to_r, naive_bigrading, reduce, validate_with, AlmostIotaComplex, RComplex, Sign, StandardParams,
    ValidateOptions,
};
use crate::precurve::{extract_primitive, readout_standard, run_pipeline, PipelineTrace, PrimitiveCurve};

/// Everything the pipeline produced on the way to the standard representative.
#[derive(Clone, Debug)]
pub struct Classification {
    pub params: StandardParams,
    pub lift: RComplex,
    pub trace: PipelineTrace,
    pub primitive: PrimitiveCurve,
}

/// Runs the pipeline on an R-complex without constant entries.
pub fn classify_r(m: &RComplex) -> Result<(StandardParams, PipelineTrace, PrimitiveCurve)> {
    let trace = run_pipeline(m)?;
    let primitive = extract_primitive(&trace.multicurve)?;
    let params = readout_standard(&primitive)?;
    Ok((params, trace, primitive))
}

pub fn classify_detailed(c: &AlmostIotaComplex, opts: ValidateOptions) -> Result<Classification> {
    validate_with(c, opts).into_result()?;
    let r = reduce(c)?;
    let w = r.complex.omega().constant_part();
    if !w.mul(&w).is_zero() {
        return Err(Error::Internal("reduced complex has ω² ≢ 0 mod U".into()));
    }
    let lift = lift_to_r(&r.complex)?;
    let (params, trace, primitive) = classify_r(&lift)?;
    Ok(Classification { params, lift, trace, primitive })
}

/// The standard complex locally equivalent to `c`.
pub fn classify(c: &AlmostIotaComplex) -> Result<StandardParams> {
    classify_with(c, ValidateOptions::default())
}

pub fn classify_with(c: &AlmostIotaComplex, opts: ValidateOptions) -> Result<StandardParams> {
    Ok(classify_detailed(c, opts)?.params)
}

/// Final U-grading of the standard complex.
pub fn p_invariant(p: &StandardParams) -> i64 {
    naive_bigrading(p).last().unwrap().0
}

pub fn p_omega(p: &StandardParams) -> i64 {
    p.pairs().iter().map(|&(a, _)| if a == Sign::Plus { 1 } else { -1 }).sum()
}

pub fn phi_n(p: &StandardParams, n: u32) -> Result<i64> {
    if n < 1 {
        return Err(Error::ShiftIndex);
    }
    let n = n as i64;
    Ok(p.pairs().iter().map(|&(_, b)| if b == n { 1 } else if b == -n { -1 } else { 0 }).sum())
}

/// All nonzero φₙ.
pub fn phi(p: &StandardParams) -> BTreeMap<u32, i64> {
    let mut out = BTreeMap::new();
    for &(_, b) in p.pairs() {
        *out.entry(b.unsigned_abs() as u32).or_insert(0) += b.signum();
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn sh_standard(p: &StandardParams, n: u32) -> Result<StandardParams> {
    if n < 1 {
        return Err(Error::ShiftIndex);
    }
    let pairs = p
        .pairs()
        .iter()
        .map(|&(a, b)| if b.unsigned_abs() >= n as u64 { (a, b + b.signum()) } else { (a, b) })
        .collect();
    StandardParams::new(pairs)
}

/// Bigradings of the two ends of the primitive curve, `x_i = T₀` and `x_f = T₂ₙ`.
pub fn endpoint_bigradings(p: &StandardParams) -> ((i64, i64), (i64, i64)) {
    let g = naive_bigrading(p);
    (g[0], *g.last().unwrap())
}

pub fn locally_equivalent(c1: &AlmostIotaComplex, c2: &AlmostIotaComplex) -> Result<bool> {
    Ok(classify(c1)? == classify(c2)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    #[serde(with = "params_text")]
    pub params: StandardParams,
    #[serde(rename = "P")]
    pub p: i64,
    #[serde(rename = "Pomega")]
    pub p_omega: i64,
    #[serde(with = "phi_keys")]
    pub phi: BTreeMap<u32, i64>,
}

impl InvariantRecord {
    pub fn from_params(p: &StandardParams) -> Self {
        InvariantRecord { params: p.clone(), p: p_invariant(p), p_omega: p_omega(p), phi: phi(p) }
    }
}

mod params_text {
    use super::StandardParams;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &StandardParams, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(p)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<StandardParams, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

mod phi_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    // JSON object keys are strings; keep numeric order when printing.
    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, i64>, D::Error> {
        let raw: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<u32>().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

//! Seeded property checks over random pairs of standard complexes.
//!
//! Each trial draws its own RNG stream from the seed, so trials can run in any
//! order and on any number of threads without changing the report.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use iotacurve::invariants::{endpoint_bigradings, sh_standard};
use iotacurve::iota::{build_standard, product};
use iotacurve::{classify, Sign, StandardParams};

/// The invariant functions under test. Swapping one out is how the mutation
/// tests check that the suite notices a bug.
#[derive(Clone, Copy)]
pub struct Invariants {
    pub p: fn(&StandardParams) -> i64,
    pub p_omega: fn(&StandardParams) -> i64,
    pub phi_n: fn(&StandardParams, u32) -> i64,
}

impl Default for Invariants {
    fn default() -> Self {
        Invariants {
            p: iotacurve::invariants::p_invariant,
            p_omega: iotacurve::invariants::p_omega,
            phi_n: |p, n| iotacurve::invariants::phi_n(p, n).expect("n >= 1"),
        }
    }
}

pub const PROPERTIES: [&str; 8] = [
    "classification",
    "round_trip",
    "p_additive",
    "p_omega_additive",
    "phi_additive",
    "p_from_phi",
    "shift",
    "final_q_grading",
];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: String,
    pub b: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.properties.iter().filter(|p| p.failed > 0).map(|p| p.name.as_str()).collect()
    }
}

/// n uniform in 0..=3, signs uniform, |b| uniform in 1..=4.
pub fn random_params(rng: &mut impl Rng) -> StandardParams {
    let n = rng.gen_range(0..=3);
    let pairs = (0..n)
        .map(|_| {
            let a = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
            let b: i64 = rng.gen_range(1..=4);
            (a, if rng.gen_bool(0.5) { b } else { -b })
        })
        .collect();
    StandardParams::new(pairs).expect("b is nonzero")
}

type Outcome = [Option<Result<(), String>>; PROPERTIES.len()];

fn check(cond: bool, detail: impl FnOnce() -> String) -> Option<Result<(), String>> {
    Some(if cond { Ok(()) } else { Err(detail()) })
}

fn run_trial(a: &StandardParams, b: &StandardParams, shift_n: u32, inv: &Invariants) -> Outcome {
    let mut out: Outcome = Default::default();
    let cls = |x: &StandardParams, y: &StandardParams| classify(&product(&build_standard(x), &build_standard(y)));
    let ab = match cls(a, b) {
        Ok(c) => {
            out[0] = Some(Ok(()));
            c
        }
        Err(e) => {
            out[0] = Some(Err(e.to_string()));
            return out;
        }
    };
    out[1] = match classify(&build_standard(a)) {
        Ok(c) => check(c == *a, || format!("classified as {}", c)),
        Err(e) => Some(Err(e.to_string())),
    };
    out[2] = check((inv.p)(&ab) == (inv.p)(a) + (inv.p)(b), || {
        format!("P({}) = {}, P(A) + P(B) = {}", ab, (inv.p)(&ab), (inv.p)(a) + (inv.p)(b))
    });
    out[3] = check((inv.p_omega)(&ab) == (inv.p_omega)(a) + (inv.p_omega)(b), || {
        format!("Pω({}) = {}, Pω(A) + Pω(B) = {}", ab, (inv.p_omega)(&ab), (inv.p_omega)(a) + (inv.p_omega)(b))
    });
    out[4] = match (1..=5).find(|&n| (inv.phi_n)(&ab, n) != (inv.phi_n)(a, n) + (inv.phi_n)(b, n)) {
        None => Some(Ok(())),
        Some(n) => Some(Err(format!("φ_{} not additive on {}", n, ab))),
    };
    // |b| ≤ 4 on each side, so indices above 8 cannot occur in the product.
    let combo = |x: &StandardParams| (1..=8u32).map(|n| (1 - 2 * n as i64) * (inv.phi_n)(x, n)).sum::<i64>();
    out[5] = match [a, b, &ab].into_iter().find(|x| combo(x) != (inv.p)(x)) {
        None => Some(Ok(())),
        Some(x) => Some(Err(format!("P({}) = {} but Σ(1-2n)φ_n = {}", x, (inv.p)(x), combo(x)))),
    };
    out[6] = match (sh_standard(a, shift_n), sh_standard(b, shift_n), sh_standard(&ab, shift_n)) {
        (Ok(sa), Ok(sb), Ok(sab)) => match cls(&sa, &sb) {
            Ok(c) => check(c == sab, || format!("sh_{}: product of shifts is {}, shift of product is {}", shift_n, c, sab)),
            Err(e) => Some(Err(e.to_string())),
        },
        _ => Some(Err(format!("sh_{} failed", shift_n))),
    };
    out[7] = match [a, b, &ab].into_iter().find(|x| endpoint_bigradings(x).1 .1 != -(inv.p_omega)(x)) {
        None => Some(Ok(())),
        Some(x) => Some(Err(format!("grQ(x_f) = {} for {} but Pω = {}", endpoint_bigradings(x).1 .1, x, (inv.p_omega)(x)))),
    };
    out
}

pub fn verify_suite(seed: u64, trials: usize) -> VerifyReport {
    verify_suite_with(seed, trials, &Invariants::default())
}

pub fn verify_suite_with(seed: u64, trials: usize, inv: &Invariants) -> VerifyReport {
    let per_trial: Vec<(String, String, Outcome)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let a = random_params(&mut rng);
            let b = random_params(&mut rng);
            let n = rng.gen_range(1..=3);
            let out = run_trial(&a, &b, n, inv);
            (a.to_string(), b.to_string(), out)
        })
        .collect();
    let properties = PROPERTIES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut r = PropertyResult { name: name.to_string(), passed: 0, failed: 0, counterexample: None };
            for (a, b, out) in &per_trial {
                match &out[k] {
                    Some(Ok(())) => r.passed += 1,
                    Some(Err(detail)) => {
                        r.failed += 1;
                        let cx = Counterexample { a: a.clone(), b: b.clone(), detail: detail.clone() };
                        if r.counterexample.as_ref().map_or(true, |c| cx < *c) {
                            r.counterexample = Some(cx);
                        }
                    }
                    None => {}
                }
            }
            r
        })
        .collect();
    VerifyReport { seed, trials, properties }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_zero_passes() {
        let r = verify_suite(0, 100);
        assert!(r.all_passed(), "{:?}", r.failing());
        assert!(r.properties.iter().all(|p| p.passed == 100));
    }

    #[test]
    fn deterministic() {
        assert_eq!(verify_suite(7, 24), verify_suite(7, 24));
    }

    #[test]
    fn sign_bug_in_p_omega_is_isolated() {
        let inv = Invariants { p_omega: |p| -iotacurve::invariants::p_omega(p), ..Invariants::default() };
        let r = verify_suite_with(0, 40, &inv);
        assert_eq!(r.failing(), vec!["final_q_grading"]);
        let cx = r.properties[7].counterexample.as_ref().unwrap();
        assert!(cx.a.starts_with("C(") && cx.b.starts_with("C("));
    }

    #[test]
    fn broken_phi_is_caught() {
        let inv = Invariants { phi_n: |p, n| iotacurve::invariants::phi_n(p, n).unwrap().abs(), ..Invariants::default() };
        let r = verify_suite_with(3, 40, &inv);
        assert!(r.failing().contains(&"phi_additive"));
    }
}

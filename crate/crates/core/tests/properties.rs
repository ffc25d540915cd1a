use iotacurve::coeff::{relem_add, relem_mul, relem_split, F2Poly, RElem};
use iotacurve::invariants::{classify, endpoint_bigradings, p_invariant, p_omega, phi_n, sh_standard};
use iotacurve::iota::{
    build_standard, bigraded_homogeneity_violation, lift_to_r, naive_bigrading, product, q2_reduce, reduce,
    twisted_product, validate, Sign, StandardParams,
};
use iotacurve::precurve::{
    extract_primitive, from_precurve, homology_rank, readout_standard, run_pipeline, simply_face, to_precurve, Face,
};
use iotacurve::linalg::F2Mat;
use iotacurve::matching::{Arc, Matching};
use iotacurve::precurve::{order_strands, slide_arrows, Precurve};
use iotacurve::Generator;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly() -> impl Strategy<Value = F2Poly> {
    prop::collection::vec(1u32..6, 0..4).prop_map(F2Poly::from_exponents)
}

fn relem() -> impl Strategy<Value = RElem> {
    (any::<bool>(), poly(), poly()).prop_map(|(c, u, q)| RElem::from_parts(c, u, q))
}

fn params(max_pairs: usize) -> impl Strategy<Value = StandardParams> {
    prop::collection::vec((any::<bool>(), 1i64..=4, any::<bool>()), 0..=max_pairs).prop_map(|v| {
        let pairs = v
            .into_iter()
            .map(|(plus, b, pos)| (if plus { Sign::Plus } else { Sign::Minus }, if pos { b } else { -b }))
            .collect();
        StandardParams::new(pairs).unwrap()
    })
}

fn random_matching(rng: &mut impl Rng, n: usize) -> Matching {
    let mut pts: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        pts.swap(i, rng.gen_range(0..=i));
    }
    let arcs = (0..rng.gen_range(0..=n / 2)).map(|i| Arc { src: pts[2 * i], dst: pts[2 * i + 1], len: 1 }).collect();
    Matching::new(n, arcs).unwrap()
}

/// Matched faces with unit arcs and an arbitrary invertible gluing matrix.
fn random_precurve(n: usize, seed: u64) -> Precurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_matching(&mut rng, n);
    let q = random_matching(&mut rng, n);
    let p = loop {
        let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(0.3)).collect();
        let m = F2Mat::from_fn(n, n, |i, j| bits[i * n + j]);
        if m.rank() == n {
            break m;
        }
    };
    let gens = (0..n).map(|i| Generator::new(format!("g{}", i), 0)).collect();
    Precurve::new(gens, u.to_matrix(), q.to_matrix(), p).unwrap()
}

fn classify_product(a: &StandardParams, b: &StandardParams) -> StandardParams {
    classify(&product(&build_standard(a), &build_standard(b))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(x in relem(), y in relem(), z in relem()) {
        prop_assert_eq!(relem_mul(&relem_mul(&x, &y), &z), relem_mul(&x, &relem_mul(&y, &z)));
        prop_assert_eq!(relem_mul(&x, &relem_add(&y, &z)), relem_add(&relem_mul(&x, &y), &relem_mul(&x, &z)));
        prop_assert_eq!(relem_mul(&x, &y), relem_mul(&y, &x));
        prop_assert_eq!(relem_add(&x, &y), relem_add(&y, &x));
        prop_assert!(relem_add(&x, &x).is_zero());
    }

    #[test]
    fn mixed_monomials_vanish(a in 1u32..50, b in 1u32..50) {
        prop_assert!(relem_mul(&RElem::u_pow(a), &RElem::q_pow(b)).is_zero());
    }

    #[test]
    fn split_reassembles(x in relem()) {
        let (c, u, q) = relem_split(&x);
        prop_assert_eq!(RElem::from_parts(c, u, q), x.clone());
        prop_assert_eq!(RElem::parse(&x.to_string()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn standard_complexes_are_valid(p in params(3)) {
        let c = build_standard(&p);
        prop_assert!(validate(&c).passed());
        prop_assert!(c.d().mul(c.d()).is_zero());
        let m = lift_to_r(&c).unwrap();
        prop_assert!(m.delta_squared_zero());
        prop_assert_eq!(q2_reduce(&m), c);
    }

    #[test]
    fn bigrading_edges(p in params(3)) {
        let g = naive_bigrading(&p);
        prop_assert_eq!(g[0], (0, 0));
        for (k, w) in g.windows(2).enumerate() {
            if k % 2 == 0 {
                prop_assert_eq!(w[0].0, w[1].0);
            } else {
                prop_assert_eq!(w[0].1, w[1].1);
            }
        }
    }

    #[test]
    fn products_validate(a in params(2), b in params(2)) {
        let c = product(&build_standard(&a), &build_standard(&b));
        prop_assert!(validate(&c).passed());
        let r = reduce(&c).unwrap();
        prop_assert!(lift_to_r(&r.complex).unwrap().delta_squared_zero());
    }

    #[test]
    fn twisted_products_are_homogeneous(a in params(2), b in params(2)) {
        let m = twisted_product(&a, &b);
        prop_assert!(m.delta_squared_zero());
        prop_assert_eq!(bigraded_homogeneity_violation(&m), None);
    }

    #[test]
    fn twisted_simply_faced_respects_bigrading(a in params(2), b in params(2)) {
        let m = twisted_product(&a, &b);
        let sf = simply_face(&to_precurve(&m).unwrap()).unwrap();
        let gr = |i: usize| (m.gens[i].gr_u, m.gens[i].gr_q.unwrap());
        for arc in sf.u.arcs() {
            prop_assert_eq!(gr(arc.dst).1, gr(arc.src).1);
            prop_assert_eq!(gr(arc.dst).0, gr(arc.src).0 - 1 + 2 * arc.len as i64);
        }
        for arc in sf.q.arcs() {
            prop_assert_eq!(gr(arc.dst).0, gr(arc.src).0);
            prop_assert_eq!(gr(arc.dst).1, gr(arc.src).1 - 1 + 2 * arc.len as i64);
        }
        let p = &sf.precurve.p;
        for i in 0..m.len() {
            for j in 0..m.len() {
                if p.get(i, j) {
                    prop_assert_eq!(gr(i), gr(j));
                }
            }
        }
    }

    #[test]
    fn pipeline_round_trip(p in params(3)) {
        let m = lift_to_r(&build_standard(&p)).unwrap();
        let pc = to_precurve(&m).unwrap();
        prop_assert_eq!(from_precurve(&pc), m.clone());
        prop_assert_eq!(homology_rank(&pc, Face::U).unwrap(), 1);
        prop_assert_eq!(homology_rank(&pc, Face::Q).unwrap(), 1);
        let tr = run_pipeline(&m).unwrap();
        let prim = extract_primitive(&tr.multicurve).unwrap();
        prop_assert_eq!(readout_standard(&prim).unwrap(), p);
    }

    #[test]
    fn pipeline_conserves_ranks(a in params(2), b in params(2)) {
        let c = reduce(&product(&build_standard(&a), &build_standard(&b))).unwrap().complex;
        let m = lift_to_r(&c).unwrap();
        let tr = run_pipeline(&m).unwrap();
        for pc in [&tr.initial, &tr.simply_faced.precurve, &tr.multicurve.precurve] {
            prop_assert_eq!(homology_rank(pc, Face::U).unwrap(), 1);
            prop_assert_eq!(homology_rank(pc, Face::Q).unwrap(), 1);
            prop_assert!(pc.word_matches());
        }
        prop_assert!(extract_primitive(&tr.multicurve).is_ok());
    }

    #[test]
    fn homomorphisms_are_additive(a in params(3), b in params(3)) {
        let c = classify_product(&a, &b);
        prop_assert_eq!(p_invariant(&c), p_invariant(&a) + p_invariant(&b));
        prop_assert_eq!(p_omega(&c), p_omega(&a) + p_omega(&b));
        for n in 1..=5 {
            prop_assert_eq!(phi_n(&c, n).unwrap(), phi_n(&a, n).unwrap() + phi_n(&b, n).unwrap());
        }
    }

    #[test]
    fn p_is_a_phi_combination(p in params(4)) {
        let s: i64 = (1..=5u32).map(|n| (1 - 2 * n as i64) * phi_n(&p, n).unwrap()).sum();
        prop_assert_eq!(s, p_invariant(&p));
    }

    #[test]
    fn shift_changes_p_by_tail_sum(p in params(4), n in 1u32..4) {
        let tail: i64 = (n..=6).map(|i| phi_n(&p, i).unwrap()).sum();
        prop_assert_eq!(p_invariant(&sh_standard(&p, n).unwrap()), p_invariant(&p) - 2 * tail);
    }

    #[test]
    fn shift_commutes_with_products(a in params(2), b in params(2), n in 1u32..4) {
        let lhs = classify_product(&sh_standard(&a, n).unwrap(), &sh_standard(&b, n).unwrap());
        prop_assert_eq!(lhs, sh_standard(&classify_product(&a, &b), n).unwrap());
    }

    #[test]
    fn product_has_unit(p in params(3)) {
        prop_assert_eq!(classify_product(&StandardParams::trivial(), &p), p.clone());
        prop_assert_eq!(classify_product(&p, &StandardParams::trivial()), p);
    }

    #[test]
    fn product_is_associative_on_classes(a in params(1), b in params(1), c in params(1)) {
        let (ca, cb, cc) = (build_standard(&a), build_standard(&b), build_standard(&c));
        let left = classify(&product(&product(&ca, &cb), &cc)).unwrap();
        let right = classify(&product(&ca, &product(&cb, &cc))).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn final_q_grading_is_minus_p_omega(p in params(4)) {
        let (_, xf) = endpoint_bigradings(&p);
        prop_assert_eq!(xf.1, -p_omega(&p));
    }

    #[test]
    fn sliding_finishes_on_arbitrary_gluings(n in 1usize..=10, seed in any::<u64>()) {
        let pc = random_precurve(n, seed);
        let mc = slide_arrows(&order_strands(&simply_face(&pc).unwrap())).unwrap();
        // A decorated component stands for as many parallel copies as its local system has rows.
        let strands: usize = mc.components.iter().map(|c| c.generators.len() * c.decoration.nrows()).sum();
        prop_assert_eq!(strands, n);
        prop_assert!(mc.precurve.word_matches());
    }
}

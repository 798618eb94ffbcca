use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use torus_lefschetz::hochschild::{reduce_to_normal_form, Tensor1, Tensor2};
use torus_lefschetz::json;
use torus_lefschetz::lattice::{kernel, vec2, Cokernel};
use torus_lefschetz::oracle::{self, SearchBudget};
use torus_lefschetz::semiconjugacy::{is_witness, Classifier};
use torus_lefschetz::trace::{self, ActionSide};
use torus_lefschetz::*;

fn elem(r: i64) -> impl Strategy<Value = GroupElement> {
    (-r..=r, -r..=r).prop_map(|(m, n)| GroupElement::new(m, n))
}

fn endo() -> impl Strategy<Value = Endomorphism> {
    prop::array::uniform4(-4i64..=4).prop_map(|[a, b, c, d]| Endomorphism::from_rows(a, b, c, d))
}

fn matrix() -> impl Strategy<Value = IntMatrix2> {
    prop::array::uniform4(-30i64..=30).prop_map(|[a, b, c, d]| IntMatrix2::new(a, b, c, d))
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

fn ring(r: i64) -> impl Strategy<Value = RingElement> {
    prop::collection::vec((elem(r), coeff()), 0..5).prop_map(|ts| ts.into_iter().map(|(g, c)| (g, BigInt::from(c))).collect())
}

fn chain1(r: i64) -> impl Strategy<Value = TensorChain1> {
    prop::collection::vec((elem(r), elem(r), coeff()), 0..6)
        .prop_map(|ts| ts.into_iter().map(|(a, b, c)| (Tensor1::new(a, b), BigInt::from(c))).collect())
}

fn chain2(r: i64) -> impl Strategy<Value = TensorChain2> {
    prop::collection::vec((elem(r), elem(r), elem(r), coeff()), 1..6)
        .prop_map(|ts| ts.into_iter().map(|(a, b, c, k)| (Tensor2::new(a, b, c), BigInt::from(k))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn phi_is_a_homomorphism(phi in endo(), g in elem(20), h in elem(20)) {
        prop_assert_eq!(phi.apply(&(&g * &h)), &phi.apply(&g) * &phi.apply(&h));
    }

    #[test]
    fn phi_is_a_ring_homomorphism(phi in endo(), x in ring(6), y in ring(6)) {
        prop_assert_eq!(apply_phi(&phi, &ring_mul(&x, &y)), ring_mul(&apply_phi(&phi, &x), &apply_phi(&phi, &y)));
    }

    #[test]
    fn ring_is_associative_and_distributive(x in ring(5), y in ring(5), z in ring(5)) {
        prop_assert_eq!(ring_mul(&ring_mul(&x, &y), &z), ring_mul(&x, &ring_mul(&y, &z)));
        prop_assert_eq!(ring_mul(&x, &(&y + &z)), &ring_mul(&x, &y) + &ring_mul(&x, &z));
        prop_assert_eq!(ring_mul(&x, &y), ring_mul(&y, &x));
    }

    #[test]
    fn smith_form_factorizes(m in matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &s.s) * &s.v, m.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular() && s.s.is_diagonal());
        let (d1, d2) = s.invariant_factors();
        prop_assert!(!d1.is_negative() && !d2.is_negative());
        let divides = if d1.is_zero() { d2.is_zero() } else { (&d2 % &d1).is_zero() };
        prop_assert!(divides);
        prop_assert_eq!(d1 * d2, m.det().abs());
    }

    #[test]
    fn affine_solutions_solve(m in matrix(), z in (-20i64..=20, -20i64..=20)) {
        let w = m.apply(&vec2(z.0, z.1));
        let sol = solve_affine(&m, &w).expect("w is in the image");
        prop_assert_eq!(m.apply(&sol.particular), w);
        for k in sol.kernel.basis() {
            prop_assert!(vec_zero(&m.apply(k)));
        }
        prop_assert_eq!(sol.kernel.rank(), kernel(&m).rank());
    }

    #[test]
    fn cokernel_representatives_are_distinct(phi in endo()) {
        let a = phi.minus_identity();
        if let Cokernel::Finite(reps) = cokernel_reps(&a) {
            prop_assert_eq!(BigInt::from(reps.len()), a.det().abs());
            let c = Classifier::new(&phi);
            let ids: std::collections::BTreeSet<_> = reps.iter().map(|r| c.class_of_exponents(r)).collect();
            prop_assert_eq!(ids.len(), reps.len());
        } else {
            prop_assert!(a.det().is_zero());
        }
    }

    #[test]
    fn class_id_is_a_twisted_conjugacy_invariant(phi in endo(), g in elem(15), h in elem(15)) {
        let conj = &(&h * &g) * &phi.apply(&h).inverse();
        prop_assert_eq!(class_id(&phi, &g), class_id(&phi, &conj));
        let z = same_class(&phi, &conj, &g).expect("conjugate elements share a class");
        prop_assert!(is_witness(&phi, &conj, &g, &z));
    }

    #[test]
    fn same_class_matches_class_ids(phi in endo(), g1 in elem(8), g2 in elem(8)) {
        let w = same_class(&phi, &g1, &g2);
        prop_assert_eq!(w.is_some(), class_id(&phi, &g1) == class_id(&phi, &g2));
        if let Some(z) = w {
            prop_assert!(is_witness(&phi, &g1, &g2, &z));
        }
    }

    #[test]
    fn semicentralizer_is_the_fixed_lattice(phi in endo(), g in elem(10)) {
        let fixed = phi.apply(&g) == g;
        prop_assert_eq!(semicentralizer(&phi).contains(&g.exponents()), fixed);
    }

    #[test]
    fn boundary_of_boundary_vanishes(phi in endo(), y in chain2(20)) {
        prop_assert!(d1(&phi, &d2(&phi, &y)).is_zero());
    }

    #[test]
    fn boundaries_have_zero_invariant(phi in endo(), y in chain2(10)) {
        let x = d2(&phi, &y);
        for (_, c) in decompose_components(&phi, &x) {
            prop_assert!(vec_zero(&homology_invariant(&phi, &c).unwrap()));
        }
    }

    #[test]
    fn components_partition_the_chain(phi in endo(), x in chain1(10)) {
        let parts = decompose_components(&phi, &x);
        let mut sum = TensorChain1::zero();
        for (class, c) in &parts {
            for t in c.keys() {
                prop_assert_eq!(&class_id(&phi, &(&t.a * &t.b)), class);
            }
            sum += c;
        }
        prop_assert_eq!(sum, x);
    }

    #[test]
    fn normal_form_keeps_the_homology_class(phi in endo(), y in chain2(6), extra in (elem(6), elem(6))) {
        // a cycle: a boundary plus a fixed left factor
        let mut x = d2(&phi, &y);
        let (a, b) = extra;
        if phi.apply(&a) == a {
            x += &hochschild::tensor1(1, a, b);
        }
        let red = reduce_to_normal_form(&phi, &x);
        prop_assert_eq!(&red.residual + &d2(&phi, &red.certificate), x);
    }

    #[test]
    fn triviality_verdicts_are_sound(phi in endo(), y in chain2(6)) {
        let x = d2(&phi, &y);
        for (_, c) in decompose_components(&phi, &x) {
            match is_trivial(&phi, &c, DEFAULT_SUPPORT_BOUND).unwrap() {
                TrivialityVerdict::Trivial(cert) => prop_assert_eq!(d2(&phi, &cert), c),
                v => prop_assert!(false, "boundary component declared {}", v.label()),
            }
        }
    }

    #[test]
    fn fixed_left_factors_give_their_invariant(k in -6i64..=6, m in -6i64..=6, n in -6i64..=6) {
        let phi = Endomorphism::from_rows(1, 1, 0, 1);
        let x = hochschild::tensor1(1, GroupElement::new(k, 0), GroupElement::new(m, n));
        match is_trivial(&phi, &x, DEFAULT_SUPPORT_BOUND).unwrap() {
            TrivialityVerdict::Trivial(c) => {
                prop_assert_eq!(k, 0);
                prop_assert_eq!(d2(&phi, &c), x);
            }
            v => prop_assert_eq!(v, TrivialityVerdict::Nontrivial(vec2(k, 0))),
        }
    }

    #[test]
    fn generated_data_is_valid(seed in 0u64..10_000, phi_seed in 0u64..10_000) {
        let phi = oracle::random_rank_one_phi(phi_seed, 3);
        let data = oracle::generate_valid_data(&phi, &SearchBudget::default(), seed).unwrap();
        prop_assert!(validate_cellular(&phi, &data).is_empty());
        let r = one_parameter_trace(&phi, &data, ActionSide::Right).unwrap();
        prop_assert!(is_cycle(&phi, &r));
        let full = trace::full_trace(&data);
        prop_assert_eq!(d1(&phi, &full), &data.f1.reidemeister_trace() - &data.f0.reidemeister_trace());
        let rep = analyze(&phi, &r, DEFAULT_SUPPORT_BOUND).unwrap();
        prop_assert_ne!(rep.theorem, TheoremVerdict::Fails);
    }

    #[test]
    fn left_action_negates_the_trace(seed in 0u64..10_000) {
        let phi = Endomorphism::from_rows(1, 1, 0, 1);
        let data = oracle::generate_valid_data(&phi, &SearchBudget::default(), seed).unwrap();
        let right = one_parameter_trace(&phi, &data, ActionSide::Right).unwrap();
        let left = one_parameter_trace(&phi, &data, ActionSide::Left).unwrap();
        prop_assert_eq!(&left, &-right.clone());
        let r = analyze(&phi, &right, DEFAULT_SUPPORT_BOUND).unwrap();
        let l = analyze(&phi, &left, DEFAULT_SUPPORT_BOUND).unwrap();
        prop_assert_eq!(r.nielsen, l.nielsen);
        prop_assert_eq!(torus_lefschetz::lattice::vec_neg(&r.lefschetz), l.lefschetz);
    }

    #[test]
    fn json_round_trips(phi in endo(), x in chain1(30), y in chain2(30), seed in 0u64..1000) {
        prop_assert_eq!(json::chain1_from_json(&json::chain1_to_json(&x)).unwrap(), x);
        prop_assert_eq!(json::chain2_from_json(&json::chain2_to_json(&y)).unwrap(), y);
        let shear = Endomorphism::from_rows(1, 1, 0, 1);
        let data = oracle::generate_valid_data(&shear, &SearchBudget::default(), seed).unwrap();
        let doc = json::document_to_json(&shear, &data);
        let text = json::to_canonical_string(&doc);
        let (p, d) = json::document_from_json(&json::parse(&text).unwrap()).unwrap();
        prop_assert_eq!(p, shear);
        prop_assert_eq!(d, data);
        prop_assert_eq!(json::endomorphism_from_json(&json::matrix_to_json(phi.matrix())).unwrap(), phi);
    }

    #[test]
    fn brute_witnesses_reconstruct(phi in endo(), g1 in elem(4), g2 in elem(4)) {
        if let Some(z) = oracle::brute_same_class(&phi, &g1, &g2, &SearchBudget::window(8)) {
            prop_assert!(is_witness(&phi, &g1, &g2, &z));
            prop_assert!(same_class(&phi, &g1, &g2).is_some());
        }
    }
}

fn vec_zero(v: &torus_lefschetz::lattice::Vec2) -> bool {
    v[0].is_zero() && v[1].is_zero()
}

#[test]
fn large_exponents_stay_exact() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let phi = Endomorphism::from_rows(1, 1, 0, 1);
    let x = hochschild::tensor1(1, GroupElement::new(big.clone(), 0), GroupElement::new(-&big, big.clone()));
    assert!(is_cycle(&phi, &x));
    assert_eq!(homology_invariant(&phi, &x).unwrap(), vec2(big.clone(), 0));
    let y = hochschild::tensor2(1, GroupElement::new(0, 1), GroupElement::new(big.clone(), 0), GroupElement::new(0, -&big));
    assert!(d1(&phi, &d2(&phi, &y)).is_zero());
}

/// Normal-form certificates against the brute-force search on small boundaries.
#[test]
fn brute_and_normal_form_agree_on_small_boundaries() {
    let phi = Endomorphism::from_rows(1, 1, 0, 1);
    for (a, b, c) in [((0, 1), (1, 0), (0, 0)), ((1, 1), (0, 1), (-1, 0)), ((0, 2), (0, -1), (1, 1))] {
        let y = hochschild::tensor2(1, GroupElement::new(a.0, a.1), GroupElement::new(b.0, b.1), GroupElement::new(c.0, c.1));
        let x = d2(&phi, &y);
        let brute = oracle::brute_certificate(&phi, &x, &SearchBudget::window(3)).unwrap();
        let verdict = is_trivial(&phi, &x, DEFAULT_SUPPORT_BOUND).unwrap();
        assert!(brute.is_some() || x.is_zero());
        assert!(matches!(verdict, TrivialityVerdict::Trivial(_)));
    }
}

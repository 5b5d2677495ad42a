use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use scnorm_core::groebner::{kernel_of_ring_map, Ideal};
use scnorm_core::polycore::{Monomial, MonomialOrder, Polynomial, QPoly, Rationals, VarSet};

const SEED: [u8; 32] = *b"scnorm-groebner-property-seed-01";

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn vars2() -> Arc<VarSet> {
    VarSet::new(vec!["x", "y"])
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=3).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn monomial(nvars: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_exp, nvars).prop_map(Monomial::new)
}

fn poly2() -> impl Strategy<Value = QPoly> {
    prop::collection::vec((monomial(2, 2), rational()), 0..4).prop_map(|terms| {
        Polynomial::from_terms(Rationals, vars2(), MonomialOrder::GrevLex, terms)
    })
}

fn ideal2() -> impl Strategy<Value = Ideal> {
    prop::collection::vec(poly2(), 1..3)
        .prop_map(|gens| Ideal::new(vars2(), gens))
}

#[test]
fn normal_form_is_idempotent_and_membership_exact() {
    runner(80)
        .run(&(ideal2(), poly2()), |(i, f)| {
            let nf = i.normal_form(&f);
            prop_assert_eq!(i.normal_form(&nf), nf.clone());
            let diff = &f - &nf;
            prop_assert!(i.contains(&diff));
            prop_assert!(i.contains(&f) == nf.is_zero());
            Ok(())
        })
        .unwrap();
}

#[test]
fn generators_and_combinations_are_members() {
    runner(60)
        .run(&(ideal2(), poly2(), poly2()), |(i, a, b)| {
            for g in i.gens() {
                prop_assert!(i.contains(g));
            }
            if let (Some(g0), Some(g1)) = (i.gens().first(), i.gens().last()) {
                let combo = &(&a * g0) + &(&b * g1);
                prop_assert!(i.contains(&combo));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn eliminated_generators_stay_in_the_source_ideal() {
    runner(40)
        .run(&ideal2(), |i| {
            // keep only y: members of the eliminated ideal lie in the original
            let e = i.eliminate(&[1]);
            for g in e.gens() {
                prop_assert!(i.contains(g));
                prop_assert!(!g.support_vars().contains(&0));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn saturation_is_idempotent_and_grows_the_ideal() {
    runner(40)
        .run(&(ideal2(), poly2()), |(i, f)| {
            prop_assume!(!f.is_zero());
            let s = i.saturate(&f);
            prop_assert!(s.contains_ideal(&i));
            prop_assert!(s.saturate(&f).equals(&s));
            Ok(())
        })
        .unwrap();
}

#[test]
fn intersection_is_sandwiched_between_product_and_factors() {
    runner(40)
        .run(&(ideal2(), ideal2()), |(a, b)| {
            let i = a.intersect(&b).unwrap();
            for g in i.gens() {
                prop_assert!(a.contains(g));
                prop_assert!(b.contains(g));
            }
            let p = a.product(&b);
            prop_assert!(i.contains_ideal(&p));
            Ok(())
        })
        .unwrap();
}

fn tpoly() -> impl Strategy<Value = QPoly> {
    let tv = VarSet::new(vec!["t"]);
    prop::collection::vec(rational(), 1..5).prop_map(move |coeffs| {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(d, c)| (Monomial::var(1, 0, d as u32), c))
            .collect();
        Polynomial::from_terms(Rationals, tv.clone(), MonomialOrder::GrevLex, terms)
    })
}

#[test]
fn ring_map_kernel_generators_map_to_zero() {
    let target = Ideal::zero(VarSet::new(vec!["t"]));
    runner(40)
        .run(&(tpoly(), tpoly()), |(im0, im1)| {
            let src = vars2();
            let k = kernel_of_ring_map(&src, &target, &[im0.clone(), im1.clone()]);
            for g in k.gens() {
                let image = g.substitute(&[im0.clone(), im1.clone()]).unwrap();
                prop_assert!(image.is_zero());
            }
            Ok(())
        })
        .unwrap();
}

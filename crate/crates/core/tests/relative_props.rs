//! Arc-pair relative closure: exact per-arc tests and the sampling refuter.

mod common;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsclosure::relative::{delta, minimal_truncation, star_arc_test};
use wsclosure::{
    bounded_search, construct_from_igt, delta_pair_of_ideal, i_greater, in_integral_closure, pullback_order,
    refute_star_membership, relative_membership, sigma1_check, ArcPair, ArcSampler, LocalArc, MonomialIdeal, Poly,
    TruncatedSeries, UniPoly,
};

fn random_arc(rng: &mut ChaCha8Rng, n: usize, max_w: u32) -> LocalArc {
    let comps = (0..n)
        .map(|_| {
            let mut v = vec![BigRational::zero(); max_w as usize + 2];
            for _ in 0..rng.gen_range(1..=2) {
                v[rng.gen_range(1..=max_w as usize + 1)] = common::q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            }
            UniPoly::new(v)
        })
        .collect();
    LocalArc::new(comps).unwrap()
}

fn random_series(rng: &mut ChaCha8Rng, k: usize) -> TruncatedSeries {
    TruncatedSeries::new((0..k).map(|_| common::random_rational(rng, 3, 2)).collect(), k)
}

/// Single-arc integral-closure test `ord_t(h∘φ) >= min_g ord_t(g∘φ)`.
fn single_arc_closure(h: &Poly, ideal: &MonomialIdeal, arc: &LocalArc) -> bool {
    let orders = ideal.generators().iter().filter_map(|g| pullback_order(&Poly::monomial(g.clone(), common::q(1)), arc));
    match (pullback_order(h, arc), orders.min()) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(o), Some(m)) => o >= m,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn series_form_a_ring(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_series(&mut rng, k), random_series(&mut rng, k), random_series(&mut rng, k));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), TruncatedSeries::zero(k));
        match a.inverse() {
            Some(inv) => prop_assert_eq!(a.mul(&inv), TruncatedSeries::one(k)),
            None => prop_assert!(a.coeffs().first().is_none_or(|c| c.is_zero())),
        }
    }

    #[test]
    fn members_of_i_plus_igt_are_never_refuted(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = common::random_finite_colength(&mut rng, 2, 3, 2);
        let big = i.sum(&i_greater(&i).unwrap()).unwrap();
        let h = common::random_igt_element(&mut rng, &big, 2, 1);
        let sampler = ArcSampler { seed, count: 40, ..ArcSampler::default() };
        let r = refute_star_membership(&h, &i, &sampler).unwrap();
        prop_assert!(r.inconclusive(), "refuted {} at {:?}", h, r.witness);
        prop_assert_eq!(r.tried, 40);
    }

    #[test]
    fn certified_members_pass_sampled_pairs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = common::random_finite_colength(&mut rng, 2, 3, 2);
        let h = Poly::monomial(common::random_monomial(&mut rng, 2, 3), common::q(1));
        prop_assume!(!h.is_zero() && h.constant_term().is_zero());
        let pair = delta_pair_of_ideal(&i).unwrap();
        let found = bounded_search(&h, &i, 2, None).unwrap().system().is_some();
        let arcs = ArcSampler { seed, count: 30, ..ArcSampler::default() }.pairs(2);
        let refuted = arcs.iter().any(|a| !star_arc_test(&h, &pair, a).unwrap());
        prop_assert!(!(found && refuted), "{} certified and refuted over {}", h, i);
    }

    #[test]
    fn zero_second_arc_is_the_single_arc_closure_test(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = common::random_finite_colength(&mut rng, 2, 4, 2);
        let h = Poly::monomial(common::random_monomial(&mut rng, 2, 4), common::q(1));
        prop_assume!(h.constant_term().is_zero());
        let pair = delta_pair_of_ideal(&i).unwrap();
        let member = in_integral_closure(&h, &i).unwrap();
        for _ in 0..6 {
            let arc = random_arc(&mut rng, 2, 4);
            let pair_arcs = ArcPair::new(arc.clone(), LocalArc::zero(2)).unwrap();
            let joined = pair_arcs.joined();
            let k = minimal_truncation(&pair, &joined);
            let relative = relative_membership(&delta(&h), &pair, &joined, k).unwrap();
            let single = single_arc_closure(&h, &i, &arc);
            prop_assert_eq!(relative, single);
            if member {
                prop_assert!(single);
            }
        }
        prop_assert_eq!(member, sigma1_check(&h, &i).unwrap());
    }

    #[test]
    fn verdicts_are_stable_under_larger_truncation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = common::random_finite_colength(&mut rng, 2, 3, 1);
        let h = &Poly::monomial(common::random_monomial(&mut rng, 2, 3), common::q(1))
            + &Poly::monomial(common::random_monomial(&mut rng, 2, 3), common::q(2));
        prop_assume!(h.constant_term().is_zero());
        let pair = delta_pair_of_ideal(&i).unwrap();
        let arcs = ArcPair::new(random_arc(&mut rng, 2, 3), random_arc(&mut rng, 2, 3)).unwrap().joined();
        let k = minimal_truncation(&pair, &arcs);
        let at_k = relative_membership(&delta(&h), &pair, &arcs, k).unwrap();
        prop_assert_eq!(at_k, relative_membership(&delta(&h), &pair, &arcs, 2 * k).unwrap());
        prop_assert_eq!(at_k, relative_membership(&delta(&h), &pair, &arcs, k + 3).unwrap());
    }

    #[test]
    fn constructed_certificates_are_never_refuted(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = common::random_finite_colength(&mut rng, 2, 3, 2);
        let a = common::random_igt_element(&mut rng, &i_greater(&i).unwrap(), 2, 1);
        prop_assert!(construct_from_igt(&a, &i, 40).is_ok());
        let r = refute_star_membership(&a, &i, &ArcSampler { seed, count: 25, ..ArcSampler::default() }).unwrap();
        prop_assert!(r.inconclusive());
    }
}

#[test]
fn xy_over_the_squares() {
    let i = common::ideal(&[&[2, 0], &[0, 2]]);
    let xy = common::mono(&[1, 1]);
    let r = refute_star_membership(&xy, &i, &ArcSampler::default()).unwrap();
    let (idx, arcs) = r.witness.expect("refuted");
    assert!(idx < 10);
    assert_eq!(arcs, ArcSampler::prefix(2)[0]);
    assert_eq!(arcs.to_string(), "((t, t), (t, -t))");
}

#[test]
fn truncation_guard() {
    let i = common::ideal(&[&[2, 0], &[0, 3]]);
    let pair = delta_pair_of_ideal(&i).unwrap();
    let arcs = ArcSampler::prefix(2)[0].joined();
    let k = minimal_truncation(&pair, &arcs);
    assert_eq!(k, 3);
    let h = delta(&common::mono(&[1, 2]));
    assert!(relative_membership(&h, &pair, &arcs, k).unwrap());
    assert_eq!(relative_membership(&h, &pair, &arcs, 1).unwrap_err().code(), "E_GUARD");
}

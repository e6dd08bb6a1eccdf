//! The asymptotic Samuel function against its defining limit, and closure inclusions.

mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use wsclosure::{
    construct_from_igt, i_greater, in_i_greater, in_integral_closure, integral_closure, newton_polyhedron, vbar,
    ExponentVector, MonomialIdeal, Poly, Vbar,
};

fn finite_colength(n: usize, max_exp: u32, max_extra: usize) -> impl Strategy<Value = MonomialIdeal> {
    (
        prop::collection::vec(1..=max_exp, n),
        prop::collection::vec(prop::collection::vec(0..=max_exp, n), 0..=max_extra),
    )
        .prop_map(move |(pure, extra)| {
            let mut gens: Vec<ExponentVector> = (0..n)
                .map(|i| {
                    let mut v = vec![0; n];
                    v[i] = pure[i];
                    ExponentVector::new(v)
                })
                .collect();
            gens.extend(extra.into_iter().filter(|v| v.iter().any(|&e| e > 0)).map(ExponentVector::new));
            MonomialIdeal::new(n, gens).unwrap()
        })
}

fn with_monomial(n: usize, max_exp: u32, max_extra: usize, mono_exp: u32) -> impl Strategy<Value = (MonomialIdeal, ExponentVector)> {
    (finite_colength(n, max_exp, max_extra), prop::collection::vec(0..=mono_exp, n))
        .prop_map(|(i, e)| (i, ExponentVector::new(e)))
}

fn finite(v: Vbar) -> BigRational {
    match v {
        Vbar::Finite(x) => x,
        Vbar::Infinite => panic!("expected a finite value"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_ratios_stay_below_the_limit((i, e) in with_monomial(2, 4, 3, 3)) {
        let a = Poly::monomial(e, common::q(1));
        let v = finite(vbar(&a, &i).unwrap());
        let vals = wsclosure::rees_valuations(&i).unwrap();
        let max_v = vals.iter().map(|r| r.value_on_ideal).max().unwrap();
        for m in [1u32, 2, 3, 5, 8, 13, 64] {
            let r = common::order_ratio(&a, &i, m);
            prop_assert!(r <= v);
            if m == 64 {
                prop_assert!(&v - &r <= common::frac(max_v, 64));
            }
        }
    }

    #[test]
    fn vbar_scales_with_powers((i, e) in with_monomial(2, 4, 3, 5), k in 1u32..=4) {
        let a = Poly::monomial(e, common::q(1));
        let v = finite(vbar(&a, &i).unwrap());
        let vk = finite(vbar(&a, &i.power(k)).unwrap());
        prop_assert_eq!(vk, v / common::q(k as i64));
    }

    #[test]
    fn closures_sandwich(i in (2usize..=3).prop_flat_map(|n| finite_colength(n, 4, 4))) {
        let bar = integral_closure(&i).unwrap();
        let igt = i_greater(&i).unwrap();
        prop_assert!(i.is_subset_of(&bar));
        prop_assert!(igt.is_subset_of(&bar));
        prop_assert!(i.sum(&igt).unwrap().is_subset_of(&bar));
        prop_assert_eq!(integral_closure(&bar).unwrap(), bar.clone());
    }

    #[test]
    fn igt_depends_only_on_the_closure(i in finite_colength(2, 6, 4), extra in prop::collection::vec(0usize..64, 0..3)) {
        // J: the vertices of NP(I) plus some monomials of the closure
        let np = newton_polyhedron(&i).unwrap();
        let bar = integral_closure(&i).unwrap();
        let mut gens = np.vertices().to_vec();
        for k in extra {
            gens.push(bar.generators()[k % bar.generators().len()].clone());
        }
        let j = MonomialIdeal::new(2, gens).unwrap();
        prop_assert_eq!(integral_closure(&j).unwrap(), bar);
        prop_assert_eq!(i_greater(&j).unwrap(), i_greater(&i).unwrap());
    }

    #[test]
    fn igt_members_have_high_powers((i, e) in with_monomial(2, 4, 3, 4)) {
        let a = Poly::monomial(e, common::q(1));
        prop_assume!(in_i_greater(&a, &i).unwrap());
        let sys = construct_from_igt(&a, &i, 40).unwrap();
        for n in sys.q() + 1..=2 * sys.q() + 2 {
            prop_assert!(i.power(n + 1).contains_poly(&a.pow(n)));
        }
    }

    #[test]
    fn closure_membership_matches_minkowski_oracle((i, e) in with_monomial(2, 4, 3, 6)) {
        let a = Poly::monomial(e.clone(), common::q(1));
        prop_assert_eq!(in_integral_closure(&a, &i).unwrap(), common::brute_in_closure(&e, &i, 24));
    }
}

#[test]
fn vbar_examples_match_the_limit() {
    use common::{frac, ideal, mono, order_ratio};
    let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
    for (e, expected) in [(&[1u32, 1][..], frac(5, 6)), (&[2, 1][..], frac(4, 3))] {
        let a = mono(e);
        assert_eq!(vbar(&a, &i).unwrap(), Vbar::Finite(expected.clone()));
        let best = (1..=60).map(|n| order_ratio(&a, &i, n)).max().unwrap();
        assert_eq!(best, expected);
    }
    assert_eq!(vbar(&Poly::one(2), &i).unwrap(), Vbar::Finite(frac(0, 1)));
}

#[test]
fn closure_examples() {
    use common::{ideal, mono, q};
    let m = MonomialIdeal::maximal(2);
    assert_eq!(integral_closure(&ideal(&[&[2, 0], &[0, 2]])).unwrap(), m.power(2));
    let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
    assert_eq!(integral_closure(&i).unwrap(), i);
    assert_eq!(integral_closure(&m).unwrap(), m);
    assert_eq!(i_greater(&ideal(&[&[2, 0], &[0, 2]])).unwrap(), m.power(3));
    assert_eq!(i_greater(&i).unwrap(), ideal(&[&[3, 0], &[2, 1], &[1, 2], &[0, 4]]));
    assert_eq!(i_greater(&m.power(2)).unwrap(), m.power(3));
    let f = &mono(&[3, 0]) + &mono(&[2, 1]).scale(&q(7));
    assert!(in_i_greater(&f, &i).unwrap());
    assert!(!in_i_greater(&mono(&[2, 0]), &i).unwrap());
    assert!(in_integral_closure(&Poly::zero(2), &i).unwrap());
}

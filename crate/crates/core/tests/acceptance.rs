//! Acceptance run: one PASS or FAIL line per criterion, with elapsed time against its budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsclosure::reduction::{is_reduction_parameter, multiplicity, square_reduction_pair};
use wsclosure::{
    bounded_search, classify_reductions, construct_from_igt, core_via_colon, derivative_chain_check, dim_i_mod_igt,
    i_greater, in_integral_closure, integral_closure, intersect_star_two, is_reduction_monomial, newton_polyhedron,
    refute_star_membership, rees_valuations, star_of_min_reduction, unique_deep_root_check, vbar, verify, zz_membership,
    ArcSampler, EquationWindow, ExponentVector, MonicHypersurface, MonomialIdeal, Poly, PolyIdeal, ReductionClass,
    TruncatedQuotient, Vbar,
};

type Check = std::result::Result<(), String>;

/// Name, check, and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ideal(rows: &[&[u32]]) -> MonomialIdeal {
    common::ideal(rows)
}

fn valuation_set(i: &MonomialIdeal) -> Vec<(Vec<i64>, i64)> {
    let mut v: Vec<_> = rees_valuations(i).unwrap().into_iter().map(|r| (r.weight, r.value_on_ideal)).collect();
    v.sort();
    v
}

fn criterion_1() -> Check {
    let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
    let j = ideal(&[&[2, 0], &[0, 3]]);
    ensure!(valuation_set(&i) == vec![(vec![3, 2], 6)], "Rees valuations {:?}", valuation_set(&i));
    ensure!(integral_closure(&i).map_err(|e| e.to_string())? == i, "I is not integrally closed");
    let igt = i_greater(&i).map_err(|e| e.to_string())?;
    ensure!(igt == ideal(&[&[3, 0], &[2, 1], &[1, 2], &[0, 4]]), "I_> = {igt}");
    let core = core_via_colon(&i, &j).map_err(|e| e.to_string())?;
    ensure!(core == ideal(&[&[3, 0], &[2, 1], &[1, 3], &[0, 4]]), "core = {core}");
    ensure!(dim_i_mod_igt(&i).unwrap() == 2, "dim I/I_> = {}", dim_i_mod_igt(&i).unwrap());
    ensure!(
        classify_reductions(&i).unwrap() == ReductionClass::EveryReductionStarEqualsI,
        "classification {}",
        classify_reductions(&i).unwrap()
    );
    let star = star_of_min_reduction(&PolyIdeal::from_monomial(&j).unwrap(), &i).map_err(|e| e.to_string())?;
    ensure!(star.contains(&common::mono(&[1, 2])), "xy^2 is not in *J");
    Ok(())
}

fn criterion_2() -> Check {
    let i = ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
    let squares = ideal(&[&[2, 0], &[0, 2]]);
    ensure!(valuation_set(&i) == vec![(vec![1, 1], 2)], "Rees valuations {:?}", valuation_set(&i));
    let igt = i_greater(&i).unwrap();
    ensure!(igt == MonomialIdeal::maximal(2).power(3), "I_> = {igt}");
    ensure!(core_via_colon(&i, &squares).unwrap() == igt, "core differs from I_>");
    ensure!(squares.colength() == Some(4), "colength {:?}", squares.colength());
    ensure!(multiplicity(&i).unwrap() == 4, "e(I) = {}", multiplicity(&i).unwrap());
    let (ja, jb) = square_reduction_pair(&common::q(1), &common::q(1));
    ensure!(is_reduction_parameter(&ja, &i).unwrap(), "(x^2+xy, y^2) is not a reduction");
    ensure!(is_reduction_parameter(&jb, &i).unwrap(), "(x^2, y^2+xy) is not a reduction");
    let both = intersect_star_two(&ja, &jb, &i).unwrap();
    let mut gens = PolyIdeal::from_monomial(&igt).unwrap().generators().to_vec();
    gens.push(&(&common::mono(&[2, 0]) + &common::mono(&[1, 1])) + &common::mono(&[0, 2]));
    let expected = TruncatedQuotient::new(2, both.order(), &gens).unwrap();
    ensure!(both.same_space(&expected), "*J_a ∩ *J_b differs from I_> + (x^2+xy+y^2)");
    ensure!(
        classify_reductions(&i).unwrap() == ReductionClass::IntersectionIsIGreater,
        "classification {}",
        classify_reductions(&i).unwrap()
    );
    Ok(())
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..20 {
        let n = 2 + case % 2;
        let max_exp = if n == 2 { 4 } else { 2 };
        let i = common::random_finite_colength(&mut rng, n, max_exp, 2);
        let e = common::random_monomial(&mut rng, n, max_exp);
        let a = Poly::monomial(e, common::q(1));
        let v = match vbar(&a, &i).unwrap() {
            Vbar::Finite(v) => v,
            Vbar::Infinite => return Err(format!("vbar infinite for {a} over {i}")),
        };
        let r = common::order_ratio(&a, &i, 64);
        let max_v = rees_valuations(&i).unwrap().iter().map(|r| r.value_on_ideal).max().unwrap();
        ensure!(r <= v, "case {case}: ord(a^64)/64 = {r} exceeds vbar = {v} for {a} over {i}");
        ensure!(&v - &r <= common::frac(max_v, 64), "case {case}: gap {} exceeds {max_v}/64", &v - &r);
    }
    Ok(())
}

fn criterion_4() -> Check {
    let ideals = [
        ideal(&[&[2, 0], &[1, 2], &[0, 3]]),
        ideal(&[&[2, 0], &[0, 2]]),
        ideal(&[&[3, 0], &[1, 1], &[0, 3]]),
        ideal(&[&[2, 0], &[0, 3]]),
        ideal(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in &ideals {
        let igt = i_greater(i).unwrap();
        for _ in 0..4 {
            let a = common::random_igt_element(&mut rng, &igt, 2, 1);
            let sys = construct_from_igt(&a, i, 40).map_err(|e| format!("construct {a} over {i}: {e}"))?;
            ensure!(verify(&a, &sys, i), "verify fails for {a} over {i}");
            ensure!(derivative_chain_check(&EquationWindow::from_system(&sys)), "chain check fails for {a}");
            let q = sys.q();
            for k in 1..=q + 1 {
                ensure!(
                    i.power(q + k + 1).contains_poly(sys.coeff(q + k)),
                    "a_{} of {a} is outside I^{}",
                    q + k,
                    q + k + 1
                );
            }
            let found = bounded_search(&a, i, q, None).map_err(|e| format!("search {a} over {i}: {e}"))?;
            match found.system() {
                Some(s) => ensure!(s.q() <= q && verify(&a, s, i), "search result for {a} is not valid"),
                None => return Err(format!("search found nothing for {a} over {i} up to q = {q}")),
            }
        }
    }
    Ok(())
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sampler = ArcSampler::default();
    for case in 0..100 {
        let i = common::random_finite_colength(&mut rng, 2, 3, 2);
        let big = i.sum(&i_greater(&i).unwrap()).unwrap();
        let h = common::random_igt_element(&mut rng, &big, 2, 1);
        let r = refute_star_membership(&h, &i, &sampler).map_err(|e| e.to_string())?;
        ensure!(r.tried == 500, "case {case}: only {} pairs tried", r.tried);
        if let Some((idx, arcs)) = r.witness {
            return Err(format!("case {case}: {h} in I + I_> refuted over {i} by pair {idx} {arcs}"));
        }
    }
    let xy = common::mono(&[1, 1]);
    let r = refute_star_membership(&xy, &ideal(&[&[2, 0], &[0, 2]]), &sampler).unwrap();
    match r.witness {
        Some((idx, arcs)) => {
            ensure!(idx < 10, "witness at index {idx}");
            ensure!(arcs.to_string() == "((t, t), (t, -t))", "witness {arcs}");
        }
        None => return Err("xy over (x^2, y^2) not refuted".into()),
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..100 {
        let i = common::random_finite_colength(&mut rng, 2, 8, 4);
        let np = newton_polyhedron(&i).unwrap();
        let dd: std::collections::BTreeSet<(Vec<i64>, i64)> =
            np.bounded_facets().map(|f| (f.normal.clone(), f.value)).collect();
        ensure!(dd == common::sweep_bounded_facets(&i), "case {case}: facets of {i} disagree");
    }
    for case in 0..200 {
        let i = common::random_finite_colength(&mut rng, 2, 6, 3);
        let e = common::random_monomial(&mut rng, 2, 4);
        let member = in_integral_closure(&Poly::monomial(e.clone(), common::q(1)), &i).unwrap();
        ensure!(member == common::brute_in_closure(&e, &i, 24), "case {case}: x^{e:?} over {i}");
    }
    for case in 0..50 {
        let n = 2 + case % 2;
        let i = common::random_finite_colength(&mut rng, n, 3, 2);
        let bounds = i.pure_power_bounds().unwrap();
        let gens: Vec<ExponentVector> = bounds
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let mut v = vec![0; n];
                v[k] = b + if rng.gen_bool(0.25) { 1 } else { 0 };
                ExponentVector::new(v)
            })
            .collect();
        let j = MonomialIdeal::new(n, gens).unwrap();
        let by_vals = is_reduction_monomial(&j, &i).unwrap();
        let by_colength = is_reduction_parameter(&PolyIdeal::from_monomial(&j).unwrap(), &i).unwrap();
        ensure!(by_vals == by_colength, "case {case}: {j} in {i}: valuations {by_vals}, colength {by_colength}");
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
    let igt = i_greater(&i).unwrap();
    for _ in 0..10 {
        let h = common::random_igt_element(&mut rng, &igt, 2, 1);
        let sys = construct_from_igt(&h, &i, 40).map_err(|e| e.to_string())?;
        let f = MonicHypersurface::from_rrs(&sys, None).map_err(|e| e.to_string())?;
        for _ in 0..25 {
            let x: Vec<BigRational> = (0..2).map(|_| common::random_rational(&mut rng, 4, 3)).collect();
            ensure!(zz_membership(&f, &x, &h.eval(&x)), "(x, h(x)) off ZZ(F) for h = {h}");
        }
    }
    for case in 0..20 {
        let f = random_monic(&mut rng, case % 2 == 0);
        let samples: Vec<Vec<BigRational>> = (0..50).map(|_| vec![common::random_rational(&mut rng, 4, 3)]).collect();
        ensure!(unique_deep_root_check(&f, &samples), "case {case}: two deep roots over a sample point");
        for x in &samples {
            let oracle = common::roots_with_multiplicity(f.specialize(x).coeffs())
                .into_iter()
                .filter(|(_, m)| *m > f.ell() as usize)
                .count();
            ensure!(f.deep_roots(x).len() == oracle, "case {case}: deep roots disagree with synthetic division");
        }
    }
    Ok(())
}

/// A monic `F(X, T)` of degree at most 7: either a product of linear roots in `X`
/// (often with a deep root), or dense random coefficients.
fn random_monic(rng: &mut ChaCha8Rng, factored: bool) -> MonicHypersurface {
    let x = Poly::var(2, 0);
    let t = Poly::var(2, 1);
    let f = if factored {
        let mut f = Poly::one(2);
        while f.total_degree().unwrap_or(0) == 0 || rng.gen_bool(0.5) {
            let root = &Poly::constant(2, common::random_rational(rng, 3, 2)) + &x.scale(&common::q(rng.gen_range(-2..=2)));
            let factor = (&t - &root).pow(rng.gen_range(1..=4));
            let candidate = &f * &factor;
            if candidate.terms().map(|(e, _)| e.entries()[1]).max().unwrap_or(0) > 7 {
                break;
            }
            f = candidate;
        }
        f
    } else {
        let d = rng.gen_range(1..=7u32);
        let mut f = t.pow(d);
        for k in 0..d {
            let c = &Poly::constant(2, common::random_rational(rng, 3, 1))
                + &x.pow(rng.gen_range(0..=2)).scale(&common::q(rng.gen_range(-2..=2)));
            f = &f + &(&c * &t.pow(k));
        }
        f
    };
    MonicHypersurface::new(f, 1).expect("monic by construction")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 golden suite for (x^2, xy^2, y^3)", criterion_1, 1),
        ("2 golden suite for (x^2, xy, y^2)", criterion_2, 1),
        ("3 asymptotic limit", criterion_3, 60),
        ("4 equation systems round trip", criterion_4, 120),
        ("5 refuter soundness and power", criterion_5, 120),
        ("6 oracle equivalences", criterion_6, 120),
        ("7 branched covers", criterion_7, 60),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        match (&outcome, over) {
            (Ok(()), false) => println!("PASS criterion {name} ({:.2}s, budget {budget}s)", elapsed.as_secs_f64()),
            (Ok(()), true) => {
                failed += 1;
                println!("FAIL criterion {name}: {:.2}s exceeds budget {budget}s", elapsed.as_secs_f64());
            }
            (Err(msg), _) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

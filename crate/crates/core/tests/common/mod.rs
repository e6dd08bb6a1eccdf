//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wsclosure::{ExponentVector, MonomialIdeal, Poly};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn ideal(rows: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(rows[0].len(), rows).unwrap()
}

pub fn mono(e: &[u32]) -> Poly {
    Poly::monomial(ExponentVector::from(e), q(1))
}

/// Pure powers `x_i^{d_i}` with `1 <= d_i <= max_exp` plus `extra` random generators.
pub fn random_finite_colength(rng: &mut ChaCha8Rng, nvars: usize, max_exp: u32, extra: usize) -> MonomialIdeal {
    let mut gens = Vec::new();
    for i in 0..nvars {
        let mut v = vec![0; nvars];
        v[i] = rng.gen_range(1..=max_exp);
        gens.push(ExponentVector::new(v));
    }
    for _ in 0..extra {
        let v: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect();
        if v.iter().any(|&e| e > 0) {
            gens.push(ExponentVector::new(v));
        }
    }
    MonomialIdeal::new(nvars, gens).unwrap()
}

pub fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, max_exp: u32) -> ExponentVector {
    ExponentVector::new((0..nvars).map(|_| rng.gen_range(0..=max_exp)).collect())
}

// ---- two-variable hull by pairwise edges ---------------------------------

/// Bounded facets of a finite-colength ideal in two variables, as `(normal, value)`.
///
/// Every pair of generators spans a candidate line with an exact integer normal; it is a
/// facet when no generator lies strictly below it. Independent of double description.
pub fn sweep_bounded_facets(ideal: &MonomialIdeal) -> BTreeSet<(Vec<i64>, i64)> {
    let pts: Vec<(i64, i64)> = ideal
        .generators()
        .iter()
        .map(|g| (g.entries()[0] as i64, g.entries()[1] as i64))
        .collect();
    let mut out = BTreeSet::new();
    if pts.len() == 1 {
        // the single generator is a pure power of each variable only in one variable, not here
        return out;
    }
    for &p in &pts {
        for &r in &pts {
            if !(p.0 < r.0 && p.1 > r.1) {
                continue;
            }
            let (a, b) = (p.1 - r.1, r.0 - p.0);
            let g = a.gcd(&b);
            let (a, b) = (a / g, b / g);
            let c = a * p.0 + b * p.1;
            if pts.iter().all(|s| a * s.0 + b * s.1 >= c) {
                out.insert((vec![a, b], c));
            }
        }
    }
    out
}

// ---- Minkowski brute force -----------------------------------------------

fn minimal(mut vs: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    vs.sort();
    vs.dedup();
    let keep: Vec<Vec<u32>> = vs
        .iter()
        .filter(|v| !vs.iter().any(|u| u != *v && u.iter().zip(v.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect();
    keep
}

/// Generators of `I^m` by repeated Minkowski sums of exponent sets.
pub fn minkowski_power(gens: &[Vec<u32>], m: u32) -> Vec<Vec<u32>> {
    let n = gens[0].len();
    let mut acc = vec![vec![0u32; n]];
    for _ in 0..m {
        let mut next = Vec::new();
        for a in &acc {
            for g in gens {
                next.push(a.iter().zip(g).map(|(x, y)| x + y).collect());
            }
        }
        acc = minimal(next);
    }
    acc
}

fn dominated(a: &[u32], gens: &[Vec<u32>]) -> bool {
    gens.iter().any(|g| g.iter().zip(a).all(|(x, y)| x <= y))
}

/// `x^a ∈ Ī` iff `x^{ma} ∈ I^m` for some `m`; tried for `m <= max_m`.
pub fn brute_in_closure(a: &ExponentVector, ideal: &MonomialIdeal, max_m: u32) -> bool {
    let gens: Vec<Vec<u32>> = ideal.generators().iter().map(|g| g.entries().to_vec()).collect();
    let mut power = vec![vec![0u32; a.len()]];
    for m in 1..=max_m {
        let mut next = Vec::new();
        for p in &power {
            for g in &gens {
                next.push(p.iter().zip(g).map(|(x, y)| x + y).collect());
            }
        }
        power = minimal(next);
        let scaled: Vec<u32> = a.entries().iter().map(|x| x * m).collect();
        if dominated(&scaled, &power) {
            return true;
        }
    }
    false
}

// ---- asymptotic Samuel function by its defining limit --------------------

/// `ord_I(f^n) / n`.
pub fn order_ratio(f: &Poly, ideal: &MonomialIdeal, n: u32) -> BigRational {
    let ord = ideal.ord(&f.pow(n), 100 * n).finite().expect("finite order below the cap");
    frac(ord as i64, n as i64)
}

// ---- rational roots by synthetic division --------------------------------

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Rational roots and multiplicities of `sum c_i T^i`, by candidate enumeration and
/// repeated synthetic division.
pub fn roots_with_multiplicity(coeffs: &[BigRational]) -> Vec<(BigRational, usize)> {
    let mut c: Vec<BigRational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut out = Vec::new();
    let mut zero_mult = 0;
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((BigRational::zero(), zero_mult));
    }
    if c.len() <= 1 {
        return out;
    }
    let l = c.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut cands = BTreeSet::new();
    for p in divisors(&ints[0]) {
        for d in divisors(&ints[ints.len() - 1]) {
            cands.insert(BigRational::new(p.clone(), d.clone()));
            cands.insert(-BigRational::new(p.clone(), d.clone()));
        }
    }
    for r in cands {
        let mut cur = c.clone();
        let mut mult = 0;
        loop {
            // synthetic division by (T - r)
            let deg = cur.len() - 1;
            if deg == 0 {
                break;
            }
            let mut quot = vec![BigRational::zero(); deg];
            let mut acc = BigRational::zero();
            for k in (0..=deg).rev() {
                acc = acc * &r + &cur[k];
                if k > 0 {
                    quot[k - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                break;
            }
            mult += 1;
            cur = quot;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    out
}

/// A random rational in `[-bound, bound]` with denominator at most `den`.
pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64, den: i64) -> BigRational {
    let d = rng.gen_range(1..=den);
    frac(rng.gen_range(-bound * d..=bound * d), d)
}

/// Random polynomial supported on monomials of `I_>` with small nonzero coefficients.
pub fn random_igt_element(rng: &mut ChaCha8Rng, igt: &MonomialIdeal, max_terms: usize, max_exp: u32) -> Poly {
    let n = igt.nvars();
    let mut f = Poly::zero(n);
    while f.is_zero() {
        for _ in 0..rng.gen_range(1..=max_terms) {
            let g = &igt.generators()[rng.gen_range(0..igt.generators().len())];
            let bump = random_monomial(rng, n, max_exp);
            let c = q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            f = &f + &Poly::monomial(g.add(&bump), c);
        }
    }
    f
}

pub fn is_nonneg(x: &BigRational) -> bool {
    !x.is_negative()
}

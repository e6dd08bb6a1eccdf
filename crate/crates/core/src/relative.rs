//! Relative closure of modules tested along arcs, and the arc-pair test for `*I`.
//!
//! For submodules `M ⊆ N ⊆ B^r`, an element `h` is in the relative closure of `M` in `N`
//! when for every local arc `φ: B -> k[[t]]`
//!
//! ```text
//! φ*(h) ∈ φ*(M) k[[t]] + t φ*(N) k[[t]].
//! ```
//!
//! For an ideal `I` of `A`, the pair `(Δ(I), 2I)` lives in `(A ⊗ A)^2`, where
//! `Δ(g) = (g ⊗ 1, 1 ⊗ g)` and `2I` is generated by `(g ⊗ 1, 0)` and `(0, 1 ⊗ g)`.
//! An element `h` is in `*I` exactly when `Δ(h)` is in the relative closure of `Δ(I)` in `2I`,
//! and an arc of `A ⊗ A` is a pair of arcs of `A`. Sampling arc pairs can refute membership
//! in `*I` but never certify it.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::newton::rees_valuations;
use crate::poly::{rational, Poly};
use crate::univariate::UniPoly;

/// A power series known modulo `t^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// The series with these leading coefficients, padded or cut to precision `k`.
    pub fn new(mut coeffs: Vec<BigRational>, k: usize) -> Self {
        coeffs.resize(k, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(k: usize) -> Self {
        TruncatedSeries::new(vec![], k)
    }

    pub fn one(k: usize) -> Self {
        TruncatedSeries::new(vec![BigRational::one()], k)
    }

    pub fn from_unipoly(p: &UniPoly, k: usize) -> Self {
        TruncatedSeries::new(p.coeffs().iter().take(k).cloned().collect(), k)
    }

    /// The truncation order `K`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient; `None` when zero modulo `t^K`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.precision().min(other.precision());
        TruncatedSeries {
            coeffs: (0..k).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.precision().min(other.precision());
        TruncatedSeries {
            coeffs: (0..k).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.precision().min(other.precision());
        let mut out = vec![BigRational::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate().take(k) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `t^s`, keeping the precision.
    pub fn shift(&self, s: usize) -> Self {
        let k = self.precision();
        let mut out = vec![BigRational::zero(); k];
        if s < k {
            out[s..].clone_from_slice(&self.coeffs[..k - s]);
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Option<Self> {
        let k = self.precision();
        let c0 = self.coeffs.first()?;
        if c0.is_zero() {
            return None;
        }
        let inv0 = BigRational::one() / c0;
        let mut out = vec![BigRational::zero(); k];
        out[0] = inv0.clone();
        for i in 1..k {
            let mut s = BigRational::zero();
            for j in 1..=i {
                s += &self.coeffs[j] * &out[i - j];
            }
            out[i] = -s * &inv0;
        }
        Some(TruncatedSeries { coeffs: out })
    }

    /// A series `c` of precision `k` with `c * p ≡ self` modulo `t^{precision}`.
    ///
    /// Requires `order(self) >= order(p)`; the coefficients not fixed by the congruence are zero.
    fn quotient(&self, p: &Self, k: usize) -> Self {
        let o = p.order().expect("nonzero divisor");
        let len = self.precision().min(p.precision());
        let num = TruncatedSeries::new(self.coeffs[o.min(len)..len].to_vec(), len - o);
        let den = TruncatedSeries::new(p.coeffs[o..len].to_vec(), len - o);
        let q = num.mul(&den.inverse().expect("unit after removing the order"));
        TruncatedSeries::new(q.coeffs, k)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Poly::from_terms(
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (crate::monomial::ExponentVector::new(vec![i as u32]), c.clone())),
        );
        let names = vec!["t".to_string()];
        write!(f, "{} + O(t^{})", p.display_with(&names), self.precision())
    }
}

/// A local arc `A -> k[[t]]`: one polynomial in `t` per variable, all without constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalArc {
    comps: Vec<UniPoly>,
}

impl LocalArc {
    pub fn new(comps: Vec<UniPoly>) -> Result<Self> {
        if comps.iter().any(|c| c.coeffs().first().is_some_and(|c0| !c0.is_zero())) {
            return Err(Error::Precondition("arc components must have zero constant term".into()));
        }
        Ok(LocalArc { comps })
    }

    /// The arc sending every variable to zero.
    pub fn zero(nvars: usize) -> Self {
        LocalArc {
            comps: vec![UniPoly::zero(); nvars],
        }
    }

    /// `x_i -> c_i t^{w_i}` (a zero coefficient gives the zero component).
    pub fn monomial(terms: &[(BigRational, u32)]) -> Result<Self> {
        let comps = terms
            .iter()
            .map(|(c, w)| {
                let mut v = vec![BigRational::zero(); *w as usize + 1];
                v[*w as usize] = c.clone();
                UniPoly::new(v)
            })
            .collect();
        LocalArc::new(comps)
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[UniPoly] {
        &self.comps
    }

    /// `f(arc(t))` exactly.
    pub fn compose(&self, f: &Poly) -> UniPoly {
        assert_eq!(f.nvars(), self.nvars(), "arc dimension");
        let mut acc = UniPoly::zero();
        for (e, c) in f.terms() {
            let mut term = UniPoly::new(vec![c.clone()]);
            for (comp, &k) in self.comps.iter().zip(e.entries()) {
                for _ in 0..k {
                    term = term.mul(comp);
                }
            }
            acc = UniPoly::new(add_coeffs(acc.coeffs(), term.coeffs()));
        }
        acc
    }

    /// `f(arc(t))` modulo `t^k`.
    pub fn pullback(&self, f: &Poly, k: usize) -> TruncatedSeries {
        assert_eq!(f.nvars(), self.nvars(), "arc dimension");
        let comps: Vec<TruncatedSeries> = self.comps.iter().map(|c| TruncatedSeries::from_unipoly(c, k)).collect();
        let mut acc = TruncatedSeries::zero(k);
        for (e, c) in f.terms() {
            let low: u64 = e
                .entries()
                .iter()
                .zip(&self.comps)
                .map(|(&a, comp)| a as u64 * comp.coeffs().iter().position(|x| !x.is_zero()).unwrap_or(k) as u64)
                .sum();
            if low >= k as u64 {
                continue;
            }
            let mut term = TruncatedSeries::new(vec![c.clone()], k);
            for (comp, &a) in comps.iter().zip(e.entries()) {
                for _ in 0..a {
                    term = term.mul(comp);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

fn add_coeffs(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

impl fmt::Display for LocalArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = vec!["t".to_string()];
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|c| {
                let p = Poly::from_terms(
                    1,
                    c.coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, x)| (crate::monomial::ExponentVector::new(vec![i as u32]), x.clone())),
                );
                p.display_with(&names)
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `t`-order of `f(arc(t))`; `None` when the composition vanishes.
pub fn pullback_order(f: &Poly, arc: &LocalArc) -> Option<u32> {
    let p = arc.compose(f);
    p.coeffs().iter().position(|c| !c.is_zero()).map(|o| o as u32)
}

/// Two arcs of `A`, read as one arc of `A ⊗ A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcPair {
    pub first: LocalArc,
    pub second: LocalArc,
}

impl ArcPair {
    pub fn new(first: LocalArc, second: LocalArc) -> Result<Self> {
        if first.nvars() != second.nvars() {
            return Err(Error::DimensionMismatch {
                expected: first.nvars(),
                found: second.nvars(),
            });
        }
        Ok(ArcPair { first, second })
    }

    pub fn nvars(&self) -> usize {
        self.first.nvars()
    }

    /// The arc of `A ⊗ A` in `2n` variables: first factor, then second.
    pub fn joined(&self) -> LocalArc {
        let mut comps = self.first.comps.clone();
        comps.extend(self.second.comps.iter().cloned());
        LocalArc { comps }
    }
}

impl fmt::Display for ArcPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Submodules `M ⊆ N` of a free module of rank `r` over a polynomial ring.
///
/// The inclusion is assumed, not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmodulePair {
    nvars: usize,
    rank: usize,
    inner: Vec<Vec<Poly>>,
    outer: Vec<Vec<Poly>>,
}

impl SubmodulePair {
    pub fn new(nvars: usize, rank: usize, inner: Vec<Vec<Poly>>, outer: Vec<Vec<Poly>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("module rank must be at least 1".into()));
        }
        for tuple in inner.iter().chain(&outer) {
            if tuple.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: tuple.len(),
                });
            }
            if let Some(bad) = tuple.iter().find(|p| p.nvars() != nvars) {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: bad.nvars(),
                });
            }
        }
        Ok(SubmodulePair {
            nvars,
            rank,
            inner,
            outer,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Generators of `M`.
    pub fn inner(&self) -> &[Vec<Poly>] {
        &self.inner
    }

    /// Generators of `N`.
    pub fn outer(&self) -> &[Vec<Poly>] {
        &self.outer
    }

    /// `N` contains every standard basis vector as a generator.
    pub fn outer_is_free(&self) -> bool {
        (0..self.rank).all(|j| {
            self.outer.iter().any(|t| {
                t.iter()
                    .enumerate()
                    .all(|(i, p)| if i == j { *p == Poly::one(self.nvars) } else { p.is_zero() })
            })
        })
    }

    /// Every entry of every generator of `M` vanishes at the origin.
    pub fn inner_in_maximal_times_free(&self) -> bool {
        self.inner.iter().flatten().all(|p| p.constant_term().is_zero())
    }
}

/// `Δ(h) = (h ⊗ 1, 1 ⊗ h)` in `2n` variables.
pub fn delta(h: &Poly) -> Vec<Poly> {
    let n = h.nvars();
    vec![h.embed(0, 2 * n), h.embed(n, 2 * n)]
}

/// `(Δ(I), 2I)` from generators of `I` in `n` variables.
pub fn delta_pair_from_generators(nvars: usize, gens: &[Poly]) -> Result<SubmodulePair> {
    let total = 2 * nvars;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        inner.push(delta(g));
        outer.push(vec![g.embed(0, total), Poly::zero(total)]);
        outer.push(vec![Poly::zero(total), g.embed(nvars, total)]);
    }
    SubmodulePair::new(total, 2, inner, outer)
}

/// `(Δ(I), 2I)` for a monomial ideal.
pub fn delta_pair_of_ideal(ideal: &MonomialIdeal) -> Result<SubmodulePair> {
    let gens: Vec<Poly> = ideal
        .generators()
        .iter()
        .map(|g| Poly::monomial(g.clone(), rational(1)))
        .collect();
    delta_pair_from_generators(ideal.nvars(), &gens)
}

type Tuple = Vec<TruncatedSeries>;

/// Hermite elimination over `k[[t]]` for submodules of `⊕_j k[[t]]/t^{K_j}`.
struct SeriesModule {
    precisions: Vec<usize>,
    /// `(component, pivot tuple)`, in component order.
    pivots: Vec<(usize, Tuple)>,
}

impl SeriesModule {
    fn new(precisions: Vec<usize>, mut gens: Vec<Tuple>) -> Self {
        let kmax = precisions.iter().copied().max().unwrap_or(0);
        let mut pivots = Vec::new();
        for j in 0..precisions.len() {
            let best = gens
                .iter()
                .enumerate()
                .filter_map(|(i, g)| g[j].order().map(|o| (o, i)))
                .min();
            let Some((o, idx)) = best else { continue };
            let p = gens.swap_remove(idx);
            let mut rest = Vec::with_capacity(gens.len() + 1);
            for g in gens.drain(..) {
                let reduced = if g[j].is_zero() { g } else { eliminate(&g, &p, j, kmax) };
                if reduced.iter().any(|s| !s.is_zero()) {
                    rest.push(reduced);
                }
            }
            // t^{K_j - o} p vanishes in component j but may survive elsewhere
            let tail: Tuple = p.iter().map(|s| s.shift(precisions[j] - o)).collect();
            if tail.iter().any(|s| !s.is_zero()) {
                rest.push(tail);
            }
            pivots.push((j, p));
            gens = rest;
        }
        SeriesModule { precisions, pivots }
    }

    fn contains(&self, target: &Tuple) -> bool {
        let kmax = self.precisions.iter().copied().max().unwrap_or(0);
        let mut w = target.clone();
        for (j, p) in &self.pivots {
            if w[*j].is_zero() {
                continue;
            }
            if w[*j].order() < p[*j].order() {
                return false;
            }
            w = eliminate(&w, p, *j, kmax);
        }
        w.iter().all(|s| s.is_zero())
    }
}

/// `v - c p` with `c` chosen to clear component `j`.
fn eliminate(v: &Tuple, p: &Tuple, j: usize, kmax: usize) -> Tuple {
    let c = v[j].quotient(&p[j], kmax);
    v.iter()
        .zip(p)
        .map(|(a, b)| {
            let cb = TruncatedSeries::new(c.coeffs.clone(), b.precision()).mul(b);
            a.sub(&cb)
        })
        .collect()
}

fn pulled_back_tuples(tuples: &[Vec<Poly>], arc: &LocalArc, precisions: &[usize]) -> Vec<Tuple> {
    tuples
        .iter()
        .map(|t| t.iter().zip(precisions).map(|(p, &k)| arc.pullback(p, k)).collect())
        .collect()
}

/// Components along which every generator of `M` and `N` pulls back to zero.
fn dead_components(pair: &SubmodulePair, arc: &LocalArc) -> Vec<bool> {
    (0..pair.rank)
        .map(|j| {
            pair.inner
                .iter()
                .chain(&pair.outer)
                .all(|t| arc.compose(&t[j]).is_zero())
        })
        .collect()
}

/// `t`-order of `N` in each component: the least order of an `N`-entry there.
pub fn outer_orders(pair: &SubmodulePair, arc: &LocalArc) -> Vec<Option<u32>> {
    (0..pair.rank)
        .map(|j| pair.outer.iter().filter_map(|t| pullback_order(&t[j], arc)).min())
        .collect()
}

/// Least uniform truncation `K` with `K > o_j` for every component order `o_j` of `N`.
///
/// This is the truncation that suffices for `(Δ(I), 2I)`; other pairs are checked by
/// [`relative_membership`] itself.
pub fn minimal_truncation(pair: &SubmodulePair, arc: &LocalArc) -> u32 {
    outer_orders(pair, arc).into_iter().flatten().max().map_or(1, |o| o + 1)
}

/// Is `φ*(h) ∈ φ*(M) k[[t]] + t φ*(N) k[[t]]`?
///
/// Components where every generator of `M` and `N` pulls back to zero require the
/// target to vanish there exactly. The other components are read modulo `t^K`, which is
/// exact once `t^K k[[t]]` in each of them lies in the module; that is checked one order
/// higher (Nakayama), and a `K` failing the check is a guard error.
pub fn relative_membership(h: &[Poly], pair: &SubmodulePair, arc: &LocalArc, k: u32) -> Result<bool> {
    if h.len() != pair.rank {
        return Err(Error::DimensionMismatch {
            expected: pair.rank,
            found: h.len(),
        });
    }
    if arc.nvars() != pair.nvars {
        return Err(Error::DimensionMismatch {
            expected: pair.nvars,
            found: arc.nvars(),
        });
    }
    if let Some(bad) = h.iter().find(|p| p.nvars() != pair.nvars) {
        return Err(Error::DimensionMismatch {
            expected: pair.nvars,
            found: bad.nvars(),
        });
    }
    let dead = dead_components(pair, arc);
    for (j, &is_dead) in dead.iter().enumerate() {
        if is_dead && !arc.compose(&h[j]).is_zero() {
            return Ok(false);
        }
    }
    let k = k as usize;
    // dead components get precision 0 and drop out of the computation
    let precisions = |extra: usize| -> Vec<usize> { dead.iter().map(|&d| if d { 0 } else { k + extra }).collect() };

    // saturation: t^K e_j ∈ L + t^{K+1} F for every live component j
    let sat_prec = precisions(1);
    let sat_module = SeriesModule::new(sat_prec.clone(), module_generators(pair, arc, &sat_prec));
    for j in (0..pair.rank).filter(|&j| !dead[j]) {
        let unit: Tuple = (0..pair.rank)
            .map(|i| if i == j { TruncatedSeries::one(sat_prec[i]).shift(k) } else { TruncatedSeries::zero(sat_prec[i]) })
            .collect();
        if !sat_module.contains(&unit) {
            return Err(Error::Guard(format!(
                "truncation {k} does not reach the module in component {j}; raise it"
            )));
        }
    }

    let prec = precisions(0);
    let module = SeriesModule::new(prec.clone(), module_generators(pair, arc, &prec));
    let target: Tuple = h.iter().zip(&prec).map(|(p, &kk)| arc.pullback(p, kk)).collect();
    Ok(module.contains(&target))
}

/// Generators of `φ*(M) + t φ*(N)` at the given precisions.
fn module_generators(pair: &SubmodulePair, arc: &LocalArc, prec: &[usize]) -> Vec<Tuple> {
    let mut gens = pulled_back_tuples(&pair.inner, arc, prec);
    for t in pulled_back_tuples(&pair.outer, arc, prec) {
        gens.push(t.iter().map(|s| s.shift(1)).collect());
    }
    gens.retain(|t| t.iter().any(|s| !s.is_zero()));
    gens
}

/// `Δ(h)` against `(Δ(I), 2I)` along an arc pair, at the least valid truncation.
pub fn star_arc_test(h: &Poly, pair: &SubmodulePair, arcs: &ArcPair) -> Result<bool> {
    let arc = arcs.joined();
    let k = minimal_truncation(pair, &arc);
    relative_membership(&delta(h), pair, &arc, k)
}

/// Settings for the deterministic arc-pair stream used by [`refute_star_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSampler {
    pub seed: u64,
    /// Total number of pairs, the fixed prefix included.
    pub count: usize,
    /// Largest exponent of `t` in a sampled arc component.
    pub weight_bound: u32,
    /// Coefficients of sampled arc terms.
    pub coeff_set: Vec<BigRational>,
}

impl Default for ArcSampler {
    fn default() -> Self {
        ArcSampler {
            seed: 0,
            count: 500,
            weight_bound: 4,
            coeff_set: vec![
                rational(1),
                rational(-1),
                rational(2),
                rational(-2),
                rational(3),
                BigRational::new(1.into(), 2.into()),
            ],
        }
    }
}

impl ArcSampler {
    /// The fixed prefix: the diagonal arc paired with each single-sign flip of itself
    /// (the last coordinate first), then the diagonal paired with the zero arc both ways.
    pub fn prefix(nvars: usize) -> Vec<ArcPair> {
        let t = |c: i64| UniPoly::new(vec![BigRational::zero(), rational(c)]);
        let diag = LocalArc::new(vec![t(1); nvars]).expect("local");
        let mut out = Vec::new();
        for i in (0..nvars).rev() {
            let mut comps = vec![t(1); nvars];
            comps[i] = t(-1);
            out.push(ArcPair::new(diag.clone(), LocalArc::new(comps).expect("local")).expect("same ring"));
        }
        out.push(ArcPair::new(diag.clone(), LocalArc::zero(nvars)).expect("same ring"));
        out.push(ArcPair::new(LocalArc::zero(nvars), diag).expect("same ring"));
        out
    }

    /// The first `count` arc pairs: the prefix, then seeded monomial and two-term arcs.
    pub fn pairs(&self, nvars: usize) -> Vec<ArcPair> {
        let mut out = ArcSampler::prefix(nvars);
        out.truncate(self.count);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let wb = self.weight_bound.max(1);
        while out.len() < self.count {
            let two_term = out.len() % 2 == 1;
            let mut arc = || {
                let comps = (0..nvars)
                    .map(|_| {
                        let mut v = vec![BigRational::zero(); wb as usize + 2];
                        let w1 = rng.gen_range(1..=wb);
                        v[w1 as usize] = self.coeff_set[rng.gen_range(0..self.coeff_set.len())].clone();
                        if two_term {
                            let w2 = rng.gen_range(w1 + 1..=wb + 1);
                            v[w2 as usize] = self.coeff_set[rng.gen_range(0..self.coeff_set.len())].clone();
                        }
                        UniPoly::new(v)
                    })
                    .collect();
                LocalArc::new(comps).expect("local")
            };
            let first = arc();
            let second = arc();
            out.push(ArcPair::new(first, second).expect("same ring"));
        }
        out
    }
}

/// Result of [`refute_star_membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    /// Index in the stream and the first arc pair along which the test fails.
    pub witness: Option<(usize, ArcPair)>,
    /// Number of pairs examined.
    pub tried: usize,
}

impl Refutation {
    /// No witness found: this says nothing either way.
    pub fn inconclusive(&self) -> bool {
        self.witness.is_none()
    }
}

/// Search the arc-pair stream for a pair along which `Δ(h)` fails the relative test.
///
/// A witness proves `h ∉ *I`. The witness is the earliest one in the stream.
pub fn refute_star_membership(h: &Poly, ideal: &MonomialIdeal, sampler: &ArcSampler) -> Result<Refutation> {
    if !ideal.is_finite_colength() {
        return Err(Error::Unsupported(format!("{ideal} is not of finite colength")));
    }
    if h.nvars() != ideal.nvars() {
        return Err(Error::DimensionMismatch {
            expected: ideal.nvars(),
            found: h.nvars(),
        });
    }
    let pair = delta_pair_of_ideal(ideal)?;
    let pairs = sampler.pairs(ideal.nvars());
    for (idx, arcs) in pairs.iter().enumerate() {
        if !star_arc_test(h, &pair, arcs)? {
            return Ok(Refutation {
                witness: Some((idx, arcs.clone())),
                tried: idx + 1,
            });
        }
    }
    Ok(Refutation {
        witness: None,
        tried: pairs.len(),
    })
}

/// `v(h) >= v(J)` for every Rees valuation `v` of `J`.
pub fn sigma1_check(h: &Poly, j: &MonomialIdeal) -> Result<bool> {
    let vals = rees_valuations(j)?;
    Ok(vals.iter().all(|v| match v.value_of_poly(h) {
        None => true,
        Some(x) => x >= v.value_on_ideal as i128,
    }))
}

/// A probe for [`basic_facts_check`] and the behaviour it should show.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    /// `sum c_i m_i` over the generators `m_i` of `M`, given the coefficients; must pass every arc.
    Combination(Vec<Poly>),
    /// A tuple with a component that is a unit; when `N` is free and `M ⊆ mF` the first arc refutes it.
    UnitComponent(Vec<Poly>),
    /// A tuple expected to pass every arc.
    ExpectPass(Vec<Poly>),
}

/// What happened to one probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Consistent,
    /// The probe was expected to pass but failed along this arc.
    FailedAt(usize),
    /// The probe was expected to be refuted by the first arc but passed it.
    NotRefuted,
    /// The hypotheses attached to the probe do not hold for this pair.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicFactsReport {
    pub outcomes: Vec<ProbeOutcome>,
}

impl BasicFactsReport {
    /// Indices of probes that contradict their expectation.
    pub fn violations(&self) -> Vec<usize> {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, ProbeOutcome::FailedAt(_) | ProbeOutcome::NotRefuted))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Check `M ⊆ closure of M in N` and the unit-component refutation on sampled arcs.
///
/// Each arc is tested at its least truncation for the pair (see [`minimal_truncation`]).
pub fn basic_facts_check(pair: &SubmodulePair, probes: &[Probe], arcs: &[LocalArc]) -> Result<BasicFactsReport> {
    let test = |v: &[Poly], arc: &LocalArc| -> Result<bool> {
        relative_membership(v, pair, arc, minimal_truncation(pair, arc))
    };
    let mut outcomes = Vec::new();
    for probe in probes {
        let outcome = match probe {
            Probe::Combination(cs) => {
                if cs.len() != pair.inner.len() {
                    return Err(Error::DimensionMismatch {
                        expected: pair.inner.len(),
                        found: cs.len(),
                    });
                }
                let mut v = vec![Poly::zero(pair.nvars); pair.rank];
                for (c, m) in cs.iter().zip(&pair.inner) {
                    for (slot, e) in v.iter_mut().zip(m) {
                        *slot = &*slot + &(c * e);
                    }
                }
                first_failure(&v, arcs, &test)?
            }
            Probe::ExpectPass(v) => first_failure(v, arcs, &test)?,
            Probe::UnitComponent(v) => {
                let has_unit = v.iter().any(|p| !p.constant_term().is_zero());
                if !(has_unit && pair.outer_is_free() && pair.inner_in_maximal_times_free()) || arcs.is_empty() {
                    ProbeOutcome::NotApplicable
                } else if test(v, &arcs[0])? {
                    ProbeOutcome::NotRefuted
                } else {
                    ProbeOutcome::Consistent
                }
            }
        };
        outcomes.push(outcome);
    }
    Ok(BasicFactsReport { outcomes })
}

fn first_failure(v: &[Poly], arcs: &[LocalArc], test: &impl Fn(&[Poly], &LocalArc) -> Result<bool>) -> Result<ProbeOutcome> {
    for (i, arc) in arcs.iter().enumerate() {
        if !test(v, arc)? {
            return Ok(ProbeOutcome::FailedAt(i));
        }
    }
    Ok(ProbeOutcome::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::ExponentVector;

    fn ideal(rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(rows[0].len(), rows).unwrap()
    }

    fn mono(e: &[u32]) -> Poly {
        Poly::monomial(ExponentVector::from(e), rational(1))
    }

    fn arc(terms: &[(i64, u32)]) -> LocalArc {
        LocalArc::monomial(&terms.iter().map(|&(c, w)| (rational(c), w)).collect::<Vec<_>>()).unwrap()
    }

    fn tt(a: &[i64]) -> LocalArc {
        LocalArc::new(a.iter().map(|&c| UniPoly::new(vec![BigRational::zero(), rational(c)])).collect()).unwrap()
    }

    #[test]
    fn series_arithmetic() {
        let s = TruncatedSeries::new(vec![rational(1), rational(1)], 5);
        let inv = s.inverse().unwrap();
        assert_eq!(s.mul(&inv), TruncatedSeries::one(5));
        assert_eq!(s.shift(2).order(), Some(2));
        assert!(s.shift(5).is_zero());
    }

    #[test]
    fn pullback_orders() {
        assert_eq!(pullback_order(&mono(&[2, 0]), &tt(&[1, 1])), Some(2));
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = &x.pow(2) - &y.pow(2);
        let a = LocalArc::new(vec![
            UniPoly::new(vec![rational(0), rational(1)]),
            UniPoly::new(vec![rational(0), rational(1), rational(1)]),
        ])
        .unwrap();
        assert_eq!(pullback_order(&f, &a), Some(3));
        assert_eq!(pullback_order(&mono(&[1, 1]), &arc(&[(1, 2), (1, 3)])), Some(5));
        assert_eq!(pullback_order(&Poly::zero(2), &a), None);
    }

    #[test]
    fn local_arcs_reject_constants() {
        let bad = LocalArc::new(vec![UniPoly::new(vec![rational(1), rational(1)])]);
        assert_eq!(bad.unwrap_err().code(), "E_PRECONDITION");
    }

    #[test]
    fn delta_pair_sizes() {
        let p = delta_pair_of_ideal(&ideal(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!((p.inner().len(), p.outer().len()), (2, 4));
        let p = delta_pair_of_ideal(&ideal(&[&[2, 0], &[1, 1], &[0, 2]])).unwrap();
        assert_eq!((p.inner().len(), p.outer().len()), (3, 6));
        let p = delta_pair_of_ideal(&MonomialIdeal::zero(2)).unwrap();
        assert!(p.inner().is_empty() && p.outer().is_empty());
    }

    #[test]
    fn relative_membership_examples() {
        let i = ideal(&[&[2, 0], &[0, 2]]);
        let pair = delta_pair_of_ideal(&i).unwrap();
        let arcs = ArcPair::new(tt(&[1, 1]), tt(&[1, -1])).unwrap();
        assert!(!star_arc_test(&mono(&[1, 1]), &pair, &arcs).unwrap());
        assert!(star_arc_test(&mono(&[2, 0]), &pair, &arcs).unwrap());
        let h = &mono(&[3, 0]) + &mono(&[0, 2]).scale(&rational(5));
        assert!(star_arc_test(&h, &pair, &arcs).unwrap());

        let j = ideal(&[&[2, 0], &[0, 3]]);
        let pair = delta_pair_of_ideal(&j).unwrap();
        let arcs = ArcPair::new(tt(&[1, 1]), tt(&[2, 3])).unwrap();
        assert!(star_arc_test(&mono(&[1, 2]), &pair, &arcs).unwrap());
    }

    #[test]
    fn guard_rejects_short_truncation() {
        let i = ideal(&[&[2, 0], &[0, 2]]);
        let pair = delta_pair_of_ideal(&i).unwrap();
        let arcs = ArcPair::new(tt(&[1, 1]), tt(&[1, -1])).unwrap().joined();
        let err = relative_membership(&delta(&mono(&[1, 1])), &pair, &arcs, 2).unwrap_err();
        assert_eq!(err.code(), "E_GUARD");
        for k in [3, 6, 12] {
            assert!(!relative_membership(&delta(&mono(&[1, 1])), &pair, &arcs, k).unwrap());
        }
    }

    #[test]
    fn refuter_examples() {
        let i = ideal(&[&[2, 0], &[0, 2]]);
        let s = ArcSampler::default();
        let r = refute_star_membership(&mono(&[1, 1]), &i, &s).unwrap();
        let (idx, pair) = r.witness.unwrap();
        assert_eq!(idx, 0);
        assert_eq!(pair, ArcPair::new(tt(&[1, 1]), tt(&[1, -1])).unwrap());

        let small = ArcSampler { count: 60, ..ArcSampler::default() };
        let r = refute_star_membership(&mono(&[2, 1]), &i, &small).unwrap();
        assert!(r.inconclusive());
        assert_eq!(r.tried, 60);

        let unit = &Poly::one(2) + &Poly::var(2, 0);
        let r = refute_star_membership(&unit, &i, &s).unwrap();
        assert_eq!(r.witness.unwrap().0, 0);
    }

    #[test]
    fn sigma1_examples() {
        let j = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
        assert!(!sigma1_check(&mono(&[1, 1]), &j).unwrap());
        assert!(sigma1_check(&mono(&[2, 0]), &j).unwrap());
        assert!(sigma1_check(&mono(&[0, 3]), &j).unwrap());
    }

    #[test]
    fn basic_facts() {
        let i = ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
        let pair = delta_pair_of_ideal(&i).unwrap();
        let arcs: Vec<LocalArc> = ArcSampler { count: 20, ..ArcSampler::default() }
            .pairs(2)
            .iter()
            .map(|p| p.joined())
            .collect();
        let c = vec![Poly::var(4, 0), Poly::one(4), Poly::var(4, 3)];
        let probes = vec![Probe::Combination(c), Probe::ExpectPass(delta(&mono(&[2, 1])))];
        let report = basic_facts_check(&pair, &probes, &arcs).unwrap();
        assert!(report.violations().is_empty());

        // N free of rank 2 over k[x], M = x F
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        let zero = Poly::zero(1);
        let free = SubmodulePair::new(
            1,
            2,
            vec![vec![x.clone(), zero.clone()], vec![zero.clone(), x.clone()]],
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
        )
        .unwrap();
        let arcs = vec![tt(&[1])];
        let report = basic_facts_check(&free, &[Probe::UnitComponent(vec![one, zero])], &arcs).unwrap();
        assert_eq!(report.outcomes, vec![ProbeOutcome::Consistent]);
    }
}

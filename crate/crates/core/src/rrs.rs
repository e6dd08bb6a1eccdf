//! Equation systems certifying weak subintegrality over an ideal.
//!
//! An element `h` is weakly subintegral over `I` when for some `q >= 0` there are
//! `a_i ∈ I^i`, `1 <= i <= 2q+1`, with
//!
//! ```text
//! h^n + sum_{i=1}^{n} C(n,i) a_i h^{n-i} = 0      for every n in [q+1, 2q+1].
//! ```
//!
//! The sign `(-1)^i` is absorbed into `a_i`. With `F_n(T) = T^n + sum C(n,i) a_i T^{n-i}`,
//! consecutive equations satisfy `dF_n/dT = n F_{n-1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::closure::in_i_greater;
use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::monomial::{for_each_in_box, ExponentVector, MonomialIdeal};
use crate::poly::{binomial, rational, Poly};

/// A window of equations: `q` and the coefficients `a_1, ..., a_{2q+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrsSystem {
    q: u32,
    coeffs: Vec<Poly>,
}

impl RrsSystem {
    /// Requires exactly `2q+1` coefficients in a common ring.
    pub fn new(q: u32, coeffs: Vec<Poly>) -> Result<Self> {
        let expected = 2 * q as usize + 1;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        let n = coeffs[0].nvars();
        if let Some(bad) = coeffs.iter().find(|a| a.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(RrsSystem { q, coeffs })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    /// `a_1, ..., a_{2q+1}`.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// `a_i` for `1 <= i <= 2q+1`.
    pub fn coeff(&self, i: u32) -> &Poly {
        &self.coeffs[i as usize - 1]
    }

    /// The indices `n` of the equations in the window.
    pub fn window(&self) -> std::ops::RangeInclusive<u32> {
        self.q + 1..=2 * self.q + 1
    }

    /// Replace `a_i`, e.g. to build a deliberately broken system.
    pub fn with_coeff(&self, i: u32, a: Poly) -> RrsSystem {
        let mut out = self.clone();
        out.coeffs[i as usize - 1] = a;
        out
    }

    /// `h^n + sum_{i=1}^{n} C(n,i) a_i h^{n-i}`.
    pub fn residual(&self, h: &Poly, n: u32) -> Poly {
        let mut acc = h.pow(n);
        for i in 1..=n {
            let term = self.coeff(i) * &h.pow(n - i);
            acc = &acc + &term.scale(&binomial(n, i));
        }
        acc
    }
}

/// Why [`verify_report`] rejected a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    /// The element and the coefficients live in different rings.
    RingMismatch,
    /// The equation with this index does not vanish.
    Identity { n: u32, residual: Poly },
    /// `a_i` is not in `I^i`.
    Membership { i: u32 },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::RingMismatch => write!(f, "element and coefficients use different variable counts"),
            VerifyFailure::Identity { n, residual } => write!(f, "equation n={n} leaves residual {residual}"),
            VerifyFailure::Membership { i } => write!(f, "a_{i} is not in I^{i}"),
        }
    }
}

/// Check every equation of the window and every membership `a_i ∈ I^i`.
///
/// Returns the first failure: equations in increasing `n`, then memberships in increasing `i`.
pub fn verify_report(h: &Poly, sys: &RrsSystem, ideal: &MonomialIdeal) -> std::result::Result<(), VerifyFailure> {
    if h.nvars() != sys.nvars() || ideal.nvars() != sys.nvars() {
        return Err(VerifyFailure::RingMismatch);
    }
    for n in sys.window() {
        let r = sys.residual(h, n);
        if !r.is_zero() {
            return Err(VerifyFailure::Identity { n, residual: r });
        }
    }
    for (idx, a) in sys.coeffs.iter().enumerate() {
        let i = idx as u32 + 1;
        if !ideal.power(i).contains_poly(a) {
            return Err(VerifyFailure::Membership { i });
        }
    }
    Ok(())
}

pub fn verify(h: &Poly, sys: &RrsSystem, ideal: &MonomialIdeal) -> bool {
    verify_report(h, sys, ideal).is_ok()
}

/// Build a system for `a ∈ I_>` by the recursion
/// `a_{q+i} = -(a^{q+i} + sum_{j<i} C(q+i, q+j) a_{q+j} a^{i-j})` with `a_1 = ... = a_q = 0`.
///
/// `q` is the least value with `ord_I(a^n) >= n+1` for every `n` in `[q+1, 2q+1]`.
pub fn construct_from_igt(a: &Poly, ideal: &MonomialIdeal, q_max: u32) -> Result<RrsSystem> {
    ideal.check_same_ring(&MonomialIdeal::zero(a.nvars()))?;
    if !in_i_greater(a, ideal)? {
        return Err(Error::Precondition(format!("{a} is not in I_>")));
    }
    let q = (0..=q_max)
        .find(|&q| (q + 1..=2 * q + 1).all(|n| ideal.ord(&a.pow(n), n + 1).at_least(n + 1)))
        .ok_or_else(|| Error::Budget(format!("no window with q <= {q_max}")))?;
    let nv = a.nvars();
    let mut coeffs = vec![Poly::zero(nv); q as usize];
    for i in 1..=q + 1 {
        let mut acc = a.pow(q + i);
        for j in 1..i {
            let term = &coeffs[(q + j) as usize - 1] * &a.pow(i - j);
            acc = &acc + &term.scale(&binomial(q + i, q + j));
        }
        coeffs.push(-acc);
    }
    RrsSystem::new(q, coeffs)
}

/// Outcome of [`bounded_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        system: RrsSystem,
        /// `degree_bounds[i-1]` is the degree cutoff used for `a_i`.
        degree_bounds: Vec<u64>,
    },
    /// No system within the budget. This does not show that `h` is outside the closure.
    NotFound { q_max: u32, slack: u64 },
}

impl SearchOutcome {
    pub fn system(&self) -> Option<&RrsSystem> {
        match self {
            SearchOutcome::Found { system, .. } => Some(system),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Default degree slack: `2 deg(h)`.
pub fn default_slack(h: &Poly) -> u64 {
    2 * h.total_degree().unwrap_or(0)
}

/// Try `q = 0, 1, ..., q_max` in turn and return the first system found.
///
/// `slack` defaults to [`default_slack`]. The unknowns are the coefficients of `a_i` on the
/// monomials of `I^i` of degree at most `i deg(h) + slack`.
pub fn bounded_search(h: &Poly, ideal: &MonomialIdeal, q_max: u32, slack: Option<u64>) -> Result<SearchOutcome> {
    let slack = slack.unwrap_or_else(|| default_slack(h));
    for q in 0..=q_max {
        if let Some(found) = search_at(h, ideal, q, Some(slack))? {
            return Ok(found);
        }
    }
    Ok(SearchOutcome::NotFound { q_max, slack })
}

/// Upper limit on unknowns in one linear system.
pub const SEARCH_UNKNOWN_LIMIT: usize = 60_000;

/// Search at exactly this `q`; `None` when the truncated linear system has no solution.
pub fn search_at(h: &Poly, ideal: &MonomialIdeal, q: u32, slack: Option<u64>) -> Result<Option<SearchOutcome>> {
    let nv = ideal.nvars();
    if h.nvars() != nv {
        return Err(Error::DimensionMismatch {
            expected: nv,
            found: h.nvars(),
        });
    }
    let slack = slack.unwrap_or_else(|| default_slack(h));
    let d = h.total_degree().unwrap_or(0);
    let top = 2 * q + 1;

    // unknown columns: (i, monomial of I^i with bounded degree)
    let mut columns: Vec<(u32, ExponentVector)> = Vec::new();
    let mut degree_bounds = Vec::new();
    for i in 1..=top {
        let bound = i as u64 * d + slack;
        degree_bounds.push(bound);
        let power = ideal.power(i);
        let b = u32::try_from(bound).map_err(|_| Error::Budget("degree bound overflow".into()))?;
        for_each_in_box(&vec![b; nv], |e| {
            if e.degree() <= bound && power.contains(e) {
                columns.push((i, e.clone()));
            }
        });
        if columns.len() > SEARCH_UNKNOWN_LIMIT {
            return Err(Error::Budget(format!(
                "more than {SEARCH_UNKNOWN_LIMIT} unknowns at q={q}"
            )));
        }
    }

    let powers: Vec<Poly> = (0..=top).map(|k| h.pow(k)).collect();
    // equation rows keyed by (n, monomial)
    let mut rows: BTreeMap<(u32, ExponentVector), SparseVec> = BTreeMap::new();
    for (col, (i, e)) in columns.iter().enumerate() {
        for n in (q + 1).max(*i)..=top {
            let c = binomial(n, *i);
            for (m, coef) in powers[(n - i) as usize].terms() {
                let entry = rows.entry((n, m.add(e))).or_default();
                let v = entry.entry(col).or_insert_with(BigRational::zero);
                *v += &c * coef;
            }
        }
    }
    let mut rhs: BTreeMap<(u32, ExponentVector), BigRational> = BTreeMap::new();
    for n in q + 1..=top {
        for (m, coef) in powers[n as usize].terms() {
            rhs.insert((n, m.clone()), -coef.clone());
            rows.entry((n, m.clone())).or_default();
        }
    }
    let equations = rows.into_iter().map(|(key, mut row)| {
        row.retain(|_, v| !v.is_zero());
        let b = rhs.get(&key).cloned().unwrap_or_else(BigRational::zero);
        (row, b)
    });
    let Some(sol) = linalg::solve(columns.len(), equations) else {
        return Ok(None);
    };
    let mut coeffs = vec![Poly::zero(nv); top as usize];
    for ((i, e), c) in columns.into_iter().zip(sol) {
        if !c.is_zero() {
            coeffs[i as usize - 1] = &coeffs[i as usize - 1] + &Poly::monomial(e, c);
        }
    }
    let system = RrsSystem::new(q, coeffs)?;
    Ok(Some(SearchOutcome::Found { system, degree_bounds }))
}

/// The polynomials `F_n(X, T)`, `n` in the window, in `nvars + 1` variables with `T` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationWindow {
    q: u32,
    nvars: usize,
    equations: Vec<Poly>,
}

fn t_power(total: usize, k: u32) -> ExponentVector {
    let mut v = vec![0; total];
    v[total - 1] = k;
    ExponentVector::new(v)
}

/// `T^n + sum_{i=1}^{n} C(n,i) a_i T^{n-i}` in `nvars + 1` variables.
pub(crate) fn monic_in_t(coeffs: &[Poly], nvars: usize, n: u32) -> Poly {
    let total = nvars + 1;
    let mut f = Poly::monomial(t_power(total, n), rational(1));
    for i in 1..=n {
        let a = coeffs[i as usize - 1].embed(0, total);
        f = &f + &a.mul_term(&t_power(total, n - i), &binomial(n, i));
    }
    f
}

impl EquationWindow {
    pub fn from_system(sys: &RrsSystem) -> Self {
        let nvars = sys.nvars();
        let equations = sys.window().map(|n| monic_in_t(sys.coeffs(), nvars, n)).collect();
        EquationWindow {
            q: sys.q,
            nvars,
            equations,
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `F_n` for `n` in the window.
    pub fn equation(&self, n: u32) -> &Poly {
        &self.equations[(n - self.q - 1) as usize]
    }

    /// Rebuild `F_n` with `a_i` replaced by `a`, leaving the other equations alone.
    pub fn replace_in_equation(&self, n: u32, i: u32, a: &Poly) -> Self {
        let total = self.nvars + 1;
        let old = self.equation(n).clone();
        let mono = t_power(total, n - i);
        let c = binomial(n, i);
        // coefficient of T^{n-i} as a polynomial in X
        let mut old_a = Poly::zero(total);
        for (e, coef) in old.terms() {
            if e.entries()[total - 1] == n - i {
                let mut v = e.entries().to_vec();
                v[total - 1] = 0;
                old_a = &old_a + &Poly::monomial(ExponentVector::new(v), coef.clone());
            }
        }
        let new_part = a.embed(0, total).mul_term(&mono, &c);
        let updated = &(&old - &old_a.mul_term(&mono, &rational(1))) + &new_part;
        let mut out = self.clone();
        out.equations[(n - self.q - 1) as usize] = updated;
        out
    }
}

/// `dF_n/dT = n F_{n-1}` for every `n` in `(q+1, 2q+1]`.
pub fn derivative_chain_check(window: &EquationWindow) -> bool {
    let t = window.nvars;
    (window.q + 2..=2 * window.q + 1).all(|n| {
        window.equation(n).derivative(t) == window.equation(n - 1).scale(&rational(n as i64))
    })
}

//! Exponent vectors and monomial ideals.
//!
//! A [`MonomialIdeal`] is stored by its minimal generators, so two ideals are
//! equal exactly when their generator lists are equal.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{default_names, Poly};

/// Exponent vector of a monomial `x_1^{a_1} ... x_n^{a_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    /// The exponent of the single variable `x_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `max(self - other, 0)`; the exponent of the monomial colon `x^self : x^other`.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    /// Componentwise maximum (the least common multiple of the two monomials).
    pub fn lcm(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn scale(&self, k: u32) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    /// `self <= other` componentwise, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Weighted degree `<w, self>`.
    pub fn dot(&self, weight: &[i64]) -> i128 {
        self.0
            .iter()
            .zip(weight)
            .map(|(&a, &w)| a as i128 * w as i128)
            .sum()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Result of an `ord_I` computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealOrder {
    /// `f ∈ I^n \ I^{n+1}` with `n` below the cap.
    Finite(u32),
    /// `f ∈ I^cap`; the true order is at least the cap.
    AtLeast(u32),
    /// `f = 0`.
    Infinite,
}

impl IdealOrder {
    /// `true` if the element is known to lie in `I^n`.
    pub fn at_least(&self, n: u32) -> bool {
        match *self {
            IdealOrder::Finite(k) | IdealOrder::AtLeast(k) => k >= n,
            IdealOrder::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<u32> {
        match *self {
            IdealOrder::Finite(k) => Some(k),
            _ => None,
        }
    }
}

/// A monomial ideal in `n` variables, kept as its antichain of minimal generators.
///
/// The empty generator list is the zero ideal; the zero exponent alone is the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<ExponentVector>,
}

/// Reduce a list of exponent vectors to the minimal generators of the ideal they generate.
pub fn minimal_generators(nvars: usize, vs: Vec<ExponentVector>) -> Result<MonomialIdeal> {
    MonomialIdeal::new(nvars, vs)
}

fn minimalize(mut vs: Vec<ExponentVector>) -> Vec<ExponentVector> {
    vs.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    vs.dedup();
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(vs.len());
    for v in vs {
        if !kept.iter().any(|u| u.divides(&v)) {
            kept.push(v);
        }
    }
    kept.sort();
    kept
}

impl MonomialIdeal {
    pub fn new(nvars: usize, vs: Vec<ExponentVector>) -> Result<Self> {
        if let Some(bad) = vs.iter().find(|v| v.len() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.len(),
            });
        }
        Ok(MonomialIdeal {
            nvars,
            gens: minimalize(vs),
        })
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_exponents(nvars: usize, rows: &[&[u32]]) -> Result<Self> {
        Self::new(nvars, rows.iter().map(|r| ExponentVector::from(*r)).collect())
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![] }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![ExponentVector::zeros(nvars)],
        }
    }

    /// The maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: (0..nvars).rev().map(|i| ExponentVector::unit(nvars, i)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.is_zero())
    }

    pub fn check_same_ring(&self, other: &MonomialIdeal) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.gens.iter().any(|g| g.divides(e))
    }

    /// Membership of a polynomial: every term must lie in the ideal.
    pub fn contains_poly(&self, f: &Poly) -> bool {
        f.terms().all(|(e, _)| self.contains(e))
    }

    /// `true` if every generator of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let vs = self.gens.iter().chain(&other.gens).cloned().collect();
        MonomialIdeal::new(self.nvars, vs)
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let mut vs = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                vs.push(a.add(b));
            }
        }
        MonomialIdeal::new(self.nvars, vs)
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let mut vs = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                vs.push(a.lcm(b));
            }
        }
        MonomialIdeal::new(self.nvars, vs)
    }

    /// `I^k` via repeated Minkowski sums of generator exponents.
    pub fn power(&self, k: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.nvars);
        // square-and-multiply keeps the number of minimalizations logarithmic
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.product(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.product(&base).expect("same ring");
            }
        }
        acc
    }

    /// `I : x^e`.
    pub fn colon_monomial(&self, e: &ExponentVector) -> MonomialIdeal {
        let vs = self.gens.iter().map(|g| g.saturating_sub(e)).collect();
        MonomialIdeal::new(self.nvars, vs).expect("same ring")
    }

    /// `I : J = { a : aJ ⊆ I }`, the intersection of the colons by each generator of `J`.
    pub fn colon(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let mut acc = MonomialIdeal::unit(self.nvars);
        for g in &other.gens {
            acc = acc.intersection(&self.colon_monomial(g))?;
        }
        Ok(acc)
    }

    /// For each variable, the least `d` with `x_i^d ∈ I`, if every variable has one.
    pub fn pure_power_bounds(&self) -> Option<Vec<u32>> {
        let mut bounds = vec![None::<u32>; self.nvars];
        for g in &self.gens {
            let nonzero: Vec<usize> = (0..self.nvars).filter(|&i| g.entries()[i] > 0).collect();
            match nonzero.len() {
                0 => return Some(vec![0; self.nvars]),
                1 => {
                    let i = nonzero[0];
                    let d = g.entries()[i];
                    bounds[i] = Some(bounds[i].map_or(d, |b| b.min(d)));
                }
                _ => {}
            }
        }
        bounds.into_iter().collect()
    }

    /// Finite colength: the ideal contains a power of every variable.
    pub fn is_finite_colength(&self) -> bool {
        self.pure_power_bounds().is_some()
    }

    /// The standard monomials (exponents outside the ideal), or `None` if there are infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<ExponentVector>> {
        let bounds = self.pure_power_bounds()?;
        let mut out = Vec::new();
        for_each_in_box(&bounds.iter().map(|&b| b.saturating_sub(1)).collect::<Vec<_>>(), |e| {
            if bounds.iter().all(|&b| b > 0) && !self.contains(e) {
                out.push(e.clone());
            }
        });
        Some(out)
    }

    /// Number of standard monomials; `None` stands for infinite colength.
    pub fn colength(&self) -> Option<u64> {
        self.standard_monomials().map(|s| s.len() as u64)
    }

    /// `ord_I` of a monomial: the largest `n <= cap` with `x^e ∈ I^n`.
    pub fn order_of_monomial(&self, e: &ExponentVector, cap: u32) -> IdealOrder {
        if self.is_unit() {
            return IdealOrder::AtLeast(cap);
        }
        let n = OrderTable::new(self, e, cap).get(e);
        if n >= cap {
            IdealOrder::AtLeast(cap)
        } else {
            IdealOrder::Finite(n)
        }
    }

    /// `ord_I(f)` capped at `cap`: the largest `n <= cap` with `f ∈ I^n`.
    ///
    /// `I^n` is monomial, so this is the minimum of the monomial orders of the terms of `f`.
    pub fn ord(&self, f: &Poly, cap: u32) -> IdealOrder {
        if f.is_zero() {
            return IdealOrder::Infinite;
        }
        if self.is_unit() {
            return IdealOrder::AtLeast(cap);
        }
        let mut bound = ExponentVector::zeros(self.nvars);
        for (e, _) in f.terms() {
            bound = bound.lcm(e);
        }
        let table = OrderTable::new(self, &bound, cap);
        let n = f.terms().map(|(e, _)| table.get(e)).min().unwrap_or(cap);
        if n >= cap {
            IdealOrder::AtLeast(cap)
        } else {
            IdealOrder::Finite(n)
        }
    }

    /// Human-readable generator list, e.g. `(x^2, x*y^2, y^3)`.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.gens.is_empty() {
            return "(0)".to_string();
        }
        let parts: Vec<String> = self
            .gens
            .iter()
            .rev()
            .map(|g| Poly::monomial(g.clone(), crate::poly::rational(1)).display_with(names))
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_names(self.nvars)))
    }
}

/// Visit every exponent vector `e` with `0 <= e <= upper` componentwise.
pub(crate) fn for_each_in_box(upper: &[u32], mut visit: impl FnMut(&ExponentVector)) {
    let n = upper.len();
    let mut cur = ExponentVector::zeros(n);
    loop {
        visit(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur.0[i] < upper[i] {
                cur.0[i] += 1;
                break;
            }
            cur.0[i] = 0;
        }
    }
}

const DENSE_TABLE_LIMIT: u128 = 40_000_000;

/// Maximal number of generators of `I` fitting under each exponent of a box (capped).
///
/// `x^e ∈ I^n` exactly when `e` dominates a sum of `n` generators, so the table value
/// at `e` is `ord_I(x^e)`.
struct OrderTable {
    cap: u32,
    gens: Vec<ExponentVector>,
    storage: TableStorage,
}

enum TableStorage {
    Dense { upper: Vec<u32>, strides: Vec<usize>, values: Vec<u32> },
    Memo(std::cell::RefCell<HashMap<ExponentVector, u32>>),
}

impl OrderTable {
    fn new(ideal: &MonomialIdeal, upper: &ExponentVector, cap: u32) -> Self {
        let gens: Vec<ExponentVector> = ideal
            .gens
            .iter()
            .filter(|g| !g.is_zero() && g.divides(upper))
            .cloned()
            .collect();
        let cells: u128 = upper.entries().iter().map(|&u| u as u128 + 1).product();
        if cells > DENSE_TABLE_LIMIT {
            return OrderTable {
                cap,
                gens,
                storage: TableStorage::Memo(Default::default()),
            };
        }
        let n = upper.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (upper.entries()[i + 1] as usize + 1);
        }
        let offsets: Vec<usize> = gens
            .iter()
            .map(|g| g.entries().iter().zip(&strides).map(|(&a, &s)| a as usize * s).sum())
            .collect();
        let mut values = vec![0u32; cells as usize];
        let mut idx = 0usize;
        for_each_in_box(upper.entries(), |e| {
            let mut best = 0u32;
            for (g, &off) in gens.iter().zip(&offsets) {
                if g.divides(e) {
                    best = best.max(values[idx - off] + 1);
                }
            }
            values[idx] = best.min(cap);
            idx += 1;
        });
        OrderTable {
            cap,
            gens,
            storage: TableStorage::Dense {
                upper: upper.entries().to_vec(),
                strides,
                values,
            },
        }
    }

    fn get(&self, e: &ExponentVector) -> u32 {
        match &self.storage {
            TableStorage::Dense { upper, strides, values } => {
                debug_assert!(e.entries().iter().zip(upper).all(|(a, u)| a <= u));
                let idx: usize = e.entries().iter().zip(strides).map(|(&a, &s)| a as usize * s).sum();
                values[idx]
            }
            TableStorage::Memo(memo) => self.memo_get(memo, e),
        }
    }

    fn memo_get(&self, memo: &std::cell::RefCell<HashMap<ExponentVector, u32>>, e: &ExponentVector) -> u32 {
        if let Some(&v) = memo.borrow().get(e) {
            return v;
        }
        let mut best = 0u32;
        for g in &self.gens {
            if best >= self.cap {
                break;
            }
            if g.divides(e) {
                let rest = e.saturating_sub(g);
                best = best.max(self.memo_get(memo, &rest) + 1);
            }
        }
        let best = best.min(self.cap);
        memo.borrow_mut().insert(e.clone(), best);
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(rows: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(rows[0].len(), rows).unwrap()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::from(v)
    }

    #[test]
    fn minimal_generators_drops_multiples() {
        let i = ideal(&[&[2, 0], &[1, 2], &[0, 3], &[2, 1]]);
        assert_eq!(i, ideal(&[&[2, 0], &[1, 2], &[0, 3]]));
        assert_eq!(i.generators().len(), 3);
        assert_eq!(ideal(&[&[1, 0]]).generators(), &[ev(&[1, 0])]);
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 2]]).generators().len(), 3);
    }

    #[test]
    fn mixed_lengths_are_rejected() {
        let err = MonomialIdeal::new(2, vec![ev(&[1, 0]), ev(&[1, 0, 0])]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn powers() {
        let m = MonomialIdeal::maximal(2);
        assert_eq!(m.power(2), ideal(&[&[2, 0], &[1, 1], &[0, 2]]));
        let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
        assert_eq!(
            i.power(2),
            ideal(&[&[4, 0], &[3, 2], &[2, 3], &[1, 5], &[0, 6]])
        );
        assert_eq!(i.power(0), MonomialIdeal::unit(2));
    }

    #[test]
    fn colons_from_the_worked_examples() {
        let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
        let j2 = ideal(&[&[4, 0], &[2, 3], &[0, 6]]);
        assert_eq!(j2.colon(&i).unwrap(), ideal(&[&[3, 0], &[2, 1], &[1, 3], &[0, 4]]));

        let i = ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
        let j2 = ideal(&[&[4, 0], &[2, 2], &[0, 4]]);
        assert_eq!(j2.colon(&i).unwrap(), MonomialIdeal::maximal(2).power(3));

        assert_eq!(i.colon(&MonomialIdeal::unit(2)).unwrap(), i);
    }

    #[test]
    fn colength_counts_staircase() {
        assert_eq!(ideal(&[&[2, 0], &[0, 2]]).colength(), Some(4));
        assert_eq!(MonomialIdeal::maximal(2).colength(), Some(1));
        assert_eq!(ideal(&[&[2, 0], &[1, 2], &[0, 3]]).colength(), Some(5));
        assert_eq!(ideal(&[&[1, 1]]).colength(), None);
        assert_eq!(MonomialIdeal::unit(2).colength(), Some(0));
    }

    #[test]
    fn ord_examples() {
        let m = MonomialIdeal::maximal(2);
        let xy = Poly::monomial(ev(&[1, 1]), crate::poly::rational(1));
        assert_eq!(m.ord(&xy, 64), IdealOrder::Finite(2));

        let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
        let x2y = Poly::monomial(ev(&[2, 1]), crate::poly::rational(1));
        assert_eq!(i.ord(&x2y, 64), IdealOrder::Finite(1));
        assert!(i.contains(&ev(&[2, 1])));
        assert!(!i.power(2).contains(&ev(&[2, 1])));

        assert_eq!(i.ord(&Poly::zero(2), 64), IdealOrder::Infinite);
        assert_eq!(m.ord(&Poly::monomial(ev(&[40, 40]), crate::poly::rational(1)), 64), IdealOrder::AtLeast(64));
    }

    #[test]
    fn memo_path_agrees_with_dense_path() {
        let i = ideal(&[&[2, 0], &[1, 2], &[0, 3]]);
        let target = ev(&[13, 11]);
        let dense = OrderTable::new(&i, &target, 100).get(&target);
        let memo = OrderTable {
            cap: 100,
            gens: i.generators().to_vec(),
            storage: TableStorage::Memo(Default::default()),
        };
        assert_eq!(memo.get(&target), dense);
    }
}

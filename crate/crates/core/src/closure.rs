//! The asymptotic Samuel function, integral closure and `I_>` of monomial ideals.
//!
//! For a finite-colength monomial ideal with Rees valuations `v_j`,
//! `vbar_I(f) = min_j v_j(f) / v_j(I)`. The integral closure is `{vbar >= 1}` and
//! `I_>` is `{vbar > 1}`; both are monomial and are read off the bounded facets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::monomial::{for_each_in_box, ExponentVector, MonomialIdeal};
use crate::newton::{rees_valuations, ReesValuation};
use crate::poly::Poly;

/// Value of the asymptotic Samuel function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vbar {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for Vbar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vbar::Finite(v) => write!(f, "{v}"),
            Vbar::Infinite => write!(f, "inf"),
        }
    }
}

fn require_finite_colength(ideal: &MonomialIdeal) -> Result<Vec<ReesValuation>> {
    if ideal.is_unit() {
        return Err(Error::Unsupported("the unit ideal has no Rees valuations".into()));
    }
    rees_valuations(ideal)
}

/// `vbar_I(f) = min_j v_j(f)/v_j(I)`, with `v_j(f)` the minimum over the terms of `f`.
pub fn vbar(f: &Poly, ideal: &MonomialIdeal) -> Result<Vbar> {
    let vals = require_finite_colength(ideal)?;
    if f.is_zero() {
        return Ok(Vbar::Infinite);
    }
    let best = vals
        .iter()
        .map(|v| {
            let num = v.value_of_poly(f).expect("nonzero polynomial");
            BigRational::new(BigInt::from(num), BigInt::from(v.value_on_ideal))
        })
        .min()
        .expect("finite-colength proper ideal has a bounded facet");
    Ok(Vbar::Finite(best))
}

fn closure_by(ideal: &MonomialIdeal, strict: bool) -> Result<MonomialIdeal> {
    let vals = require_finite_colength(ideal)?;
    let bounds = ideal.pure_power_bounds().expect("finite colength");
    let upper: Vec<u32> = bounds.iter().map(|b| b + 1).collect();
    let mut members = Vec::new();
    for_each_in_box(&upper, |e| {
        if passes(&vals, e, strict) {
            members.push(e.clone());
        }
    });
    MonomialIdeal::new(ideal.nvars(), members)
}

fn passes(vals: &[ReesValuation], e: &ExponentVector, strict: bool) -> bool {
    vals.iter().all(|v| {
        let lhs = v.value_of_monomial(e);
        let rhs = v.value_on_ideal as i128;
        if strict {
            lhs > rhs
        } else {
            lhs >= rhs
        }
    })
}

/// Integral closure: the monomials lying in the Newton polyhedron.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    closure_by(ideal, false)
}

/// `I_>`: the monomials strictly above every bounded facet.
pub fn i_greater(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    closure_by(ideal, true)
}

/// `f ∈ Ī`, decided termwise.
pub fn in_integral_closure(f: &Poly, ideal: &MonomialIdeal) -> Result<bool> {
    let vals = require_finite_colength(ideal)?;
    Ok(f.terms().all(|(e, _)| passes(&vals, e, false)))
}

/// `f ∈ I_>`, decided termwise.
pub fn in_i_greater(f: &Poly, ideal: &MonomialIdeal) -> Result<bool> {
    let vals = require_finite_colength(ideal)?;
    Ok(f.terms().all(|(e, _)| passes(&vals, e, true)))
}

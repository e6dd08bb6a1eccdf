//! Reductions, multiplicity, cores and weak subintegral closures of minimal reductions.
//!
//! Polynomial ideals are handled without Gröbner bases: every membership question is
//! asked in `A/m^N` for an `N` with `m^N` inside the ideal, where it is finite linear algebra.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::closure::{i_greater, integral_closure};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis, SparseVec};
use crate::monomial::{for_each_in_box, ExponentVector, MonomialIdeal};
use crate::newton::{newton_polyhedron, rees_valuations};
use crate::poly::{rational, Poly};

/// An ideal given by polynomial generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdeal {
    nvars: usize,
    gens: Vec<Poly>,
}

impl PolyIdeal {
    /// Requires at least one generator, all in the same ring.
    pub fn new(gens: Vec<Poly>) -> Result<Self> {
        let Some(first) = gens.first() else {
            return Err(Error::Precondition("a polynomial ideal needs at least one generator".into()));
        };
        let nvars = first.nvars();
        if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        Ok(PolyIdeal { nvars, gens })
    }

    pub fn from_monomial(ideal: &MonomialIdeal) -> Result<Self> {
        let gens = ideal
            .generators()
            .iter()
            .map(|g| Poly::monomial(g.clone(), rational(1)))
            .collect();
        PolyIdeal::new(gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    /// `true` if every term of every generator lies in the monomial ideal.
    pub fn is_termwise_in(&self, ideal: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| ideal.contains_poly(g))
    }
}

impl fmt::Display for PolyIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The image of an ideal in `A/m^N`, as a subspace of the span of monomials of degree `< N`.
///
/// Columns are ordered from the largest monomial (degree, then lexicographic) down, so each
/// row of the reduced echelon form reads as a polynomial led by its largest term.
#[derive(Clone, Debug)]
pub struct TruncatedQuotient {
    nvars: usize,
    order: u32,
    monomials: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
    span: EchelonBasis,
}

fn monomials_below(nvars: usize, order: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    if order == 0 {
        return out;
    }
    for_each_in_box(&vec![order - 1; nvars], |e| {
        if e.degree() < order as u64 {
            out.push(e.clone());
        }
    });
    out.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
    out
}

impl TruncatedQuotient {
    /// The image of the ideal generated by `gens` in `A/m^order`.
    pub fn new(nvars: usize, order: u32, gens: &[Poly]) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("truncation order must be at least 1".into()));
        }
        if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        let monomials = monomials_below(nvars, order);
        let index = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut q = TruncatedQuotient {
            nvars,
            order,
            monomials,
            index,
            span: EchelonBasis::new(),
        };
        let one = rational(1);
        for g in gens {
            let low = g.terms().map(|(e, _)| e.degree()).min().unwrap_or(order as u64);
            for u in q.monomials.clone() {
                if u.degree() + low < order as u64 {
                    let v = q.vector(&g.mul_term(&u, &one));
                    q.span.insert(v);
                }
            }
        }
        Ok(q)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coordinates of `f mod m^N`.
    fn vector(&self, f: &Poly) -> SparseVec {
        f.terms()
            .filter_map(|(e, c)| self.index.get(e).map(|&i| (i, c.clone())))
            .collect()
    }

    fn poly_of(&self, v: &SparseVec) -> Poly {
        Poly::from_terms(self.nvars, v.iter().map(|(&i, c)| (self.monomials[i].clone(), c.clone())))
    }

    /// Membership of `f` in the ideal plus `m^N`.
    pub fn contains(&self, f: &Poly) -> bool {
        self.span.contains(&self.vector(f))
    }

    /// Dimension of the image of the ideal in `A/m^N`.
    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    /// `dim A/(K + m^N)`.
    pub fn codim(&self) -> usize {
        self.monomials.len() - self.span.rank()
    }

    fn check_compatible(&self, other: &TruncatedQuotient) -> Result<()> {
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::Precondition("quotients must share variables and truncation order".into()));
        }
        Ok(())
    }

    fn with_span(&self, span: EchelonBasis) -> TruncatedQuotient {
        TruncatedQuotient {
            nvars: self.nvars,
            order: self.order,
            monomials: self.monomials.clone(),
            index: self.index.clone(),
            span,
        }
    }

    /// Intersection of the two images.
    pub fn intersection(&self, other: &TruncatedQuotient) -> Result<TruncatedQuotient> {
        self.check_compatible(other)?;
        let u = self.span.rref_rows();
        let w = other.span.rref_rows();
        Ok(self.with_span(linalg::intersect(self.monomials.len(), &u, &w)))
    }

    /// Both images are the same subspace.
    pub fn same_space(&self, other: &TruncatedQuotient) -> bool {
        self.nvars == other.nvars
            && self.order == other.order
            && self.span.rank() == other.span.rank()
            && other.span.rref_rows().iter().all(|r| self.span.contains(r))
    }

    /// The reduced echelon basis as polynomials, largest leading term first.
    pub fn basis_polys(&self) -> Vec<Poly> {
        self.span.rref_rows().iter().map(|r| self.poly_of(r)).collect()
    }

    /// Basis elements that are not single monomials.
    pub fn non_monomial_basis(&self) -> Vec<Poly> {
        self.basis_polys().into_iter().filter(|p| p.num_terms() > 1).collect()
    }
}

/// `J` is a reduction of `I`: `J ⊆ I` and `v(J) = v(I)` for every Rees valuation `v` of `J`.
///
/// Equivalently the two Newton polyhedra coincide. A `J` that is not of finite colength is
/// never a reduction of a finite-colength `I`.
pub fn is_reduction_monomial(j: &MonomialIdeal, ideal: &MonomialIdeal) -> Result<bool> {
    j.check_same_ring(ideal)?;
    if !j.is_subset_of(ideal) {
        return Err(Error::Precondition(format!("{j} is not contained in {ideal}")));
    }
    if !ideal.is_finite_colength() {
        return Err(Error::Unsupported(format!("{ideal} is not of finite colength")));
    }
    if !j.is_finite_colength() {
        return Ok(false);
    }
    let vals = rees_valuations(j)?;
    Ok(vals
        .iter()
        .all(|v| v.value_of_ideal(ideal) == Some(v.value_on_ideal as i128)))
}

/// Same question answered by comparing the facet lists of the two Newton polyhedra.
pub fn is_reduction_by_polyhedra(j: &MonomialIdeal, ideal: &MonomialIdeal) -> Result<bool> {
    j.check_same_ring(ideal)?;
    if !j.is_subset_of(ideal) {
        return Err(Error::Precondition(format!("{j} is not contained in {ideal}")));
    }
    if !j.is_finite_colength() {
        return Ok(false);
    }
    Ok(newton_polyhedron(j)?.facets() == newton_polyhedron(ideal)?.facets())
}

/// Hilbert-Samuel multiplicity `n! covol(NP(I))`, for `n <= 3`.
///
/// The region below the polyhedron is the union of the cones from the origin over the
/// bounded facets; each cone is measured through the projection dropping the last coordinate.
pub fn multiplicity(ideal: &MonomialIdeal) -> Result<u64> {
    let n = ideal.nvars();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("multiplicity is computed for 1 to 3 variables, not {n}")));
    }
    if !ideal.is_finite_colength() {
        return Err(Error::Unsupported(format!("{ideal} is not of finite colength")));
    }
    if ideal.is_unit() {
        return Ok(0);
    }
    let np = newton_polyhedron(ideal)?;
    let mut total = BigRational::zero();
    for f in np.bounded_facets() {
        let verts = np.facet_vertices(f);
        // (n-1)! times the (n-1)-volume of the projection
        let scaled_area: i128 = match n {
            1 => 1,
            2 => {
                let xs: Vec<i128> = verts.iter().map(|v| v.entries()[0] as i128).collect();
                xs.iter().max().unwrap() - xs.iter().min().unwrap()
            }
            _ => {
                let pts: Vec<(i128, i128)> = verts
                    .iter()
                    .map(|v| (v.entries()[0] as i128, v.entries()[1] as i128))
                    .collect();
                twice_hull_area(pts)
            }
        };
        let num = BigInt::from(f.value) * BigInt::from(scaled_area);
        let den = BigInt::from(*f.normal.last().unwrap());
        total += BigRational::new(num, den);
    }
    if !total.is_integer() {
        return Err(Error::Unsupported(format!("non-integral multiplicity {total}")));
    }
    use num_traits::ToPrimitive;
    total
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Unsupported("multiplicity exceeds 64 bits".into()))
}

/// Twice the area of the convex hull of lattice points (monotone chain, shoelace).
fn twice_hull_area(mut pts: Vec<(i128, i128)>) -> i128 {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return 0;
    }
    let cross = |o: (i128, i128), a: (i128, i128), b: (i128, i128)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i128, i128)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i128, i128)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let m = hull.len();
    let s: i128 = (0..m)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % m]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum();
    s.abs()
}

/// Default cap on the truncation order when waiting for `dim A/(J + m^N)` to stabilize.
pub const DEFAULT_COLENGTH_ORDER_LIMIT: u32 = 64;

/// Colength of `J` at the origin: `dim A/(J + m^N)` once it stops changing in `N`.
///
/// Equal values at `N` and `N+1` give `m^N ⊆ J + m^{N+1}`, hence `m^N ⊆ J` locally.
pub fn local_colength(j: &PolyIdeal, order_limit: u32) -> Result<u64> {
    let mut prev: Option<usize> = None;
    for order in 1..=order_limit {
        let d = TruncatedQuotient::new(j.nvars, order, &j.gens)?.codim();
        if prev == Some(d) {
            return Ok(d as u64);
        }
        prev = Some(d);
    }
    Err(Error::Budget(format!(
        "dim A/(J + m^N) did not stabilize by N = {order_limit}; J may not be primary to the maximal ideal"
    )))
}

/// A parameter ideal `J ⊆ I` is a reduction exactly when its colength equals `e(I)`.
pub fn is_reduction_parameter(j: &PolyIdeal, ideal: &MonomialIdeal) -> Result<bool> {
    is_reduction_parameter_with_limit(j, ideal, DEFAULT_COLENGTH_ORDER_LIMIT)
}

pub fn is_reduction_parameter_with_limit(j: &PolyIdeal, ideal: &MonomialIdeal, order_limit: u32) -> Result<bool> {
    check_parameter_ideal(j, ideal)?;
    let e = multiplicity(ideal)?;
    Ok(local_colength(j, order_limit)? == e)
}

fn check_parameter_ideal(j: &PolyIdeal, ideal: &MonomialIdeal) -> Result<()> {
    if j.nvars != ideal.nvars() {
        return Err(Error::DimensionMismatch {
            expected: ideal.nvars(),
            found: j.nvars,
        });
    }
    if j.gens.len() != ideal.nvars() {
        return Err(Error::Precondition(format!(
            "a parameter ideal needs {} generators, got {}",
            ideal.nvars(),
            j.gens.len()
        )));
    }
    if !j.is_termwise_in(ideal) {
        return Err(Error::Precondition(format!("{j} is not contained termwise in {ideal}")));
    }
    Ok(())
}

/// `J^2 : I`, the core of `I` for a two-generated minimal reduction `J` in two variables.
pub fn core_via_colon(ideal: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    if ideal.nvars() != 2 {
        return Err(Error::Unsupported("the colon formula is used in two variables only".into()));
    }
    if j.generators().len() != 2 {
        return Err(Error::Precondition(format!("{j} must have exactly two generators")));
    }
    if !is_reduction_monomial(j, ideal)? {
        return Err(Error::Precondition(format!("{j} is not a reduction of {ideal}")));
    }
    j.power(2).colon(ideal)
}

/// Least `N` with every monomial of degree `N` in the ideal (so `m^N` lies inside it).
pub fn order_containing_power_of_maximal(ideal: &MonomialIdeal) -> Result<u32> {
    let bounds = ideal
        .pure_power_bounds()
        .ok_or_else(|| Error::Unsupported(format!("{ideal} is not of finite colength")))?;
    let ceiling: u32 = bounds.iter().map(|b| b.saturating_sub(1)).sum::<u32>() + 1;
    for order in 0..=ceiling {
        let mut all = true;
        for_each_in_box(&vec![order; ideal.nvars()], |e| {
            if all && e.degree() == order as u64 && !ideal.contains(e) {
                all = false;
            }
        });
        if all {
            return Ok(order.max(1));
        }
    }
    Ok(ceiling)
}

/// `*J = J + I_>` for a minimal reduction `J` of `I`, with exact membership.
#[derive(Clone, Debug)]
pub struct StarIdeal {
    reduction: PolyIdeal,
    igt: MonomialIdeal,
    quotient: TruncatedQuotient,
}

impl StarIdeal {
    pub fn reduction(&self) -> &PolyIdeal {
        &self.reduction
    }

    /// `I_>`.
    pub fn igt(&self) -> &MonomialIdeal {
        &self.igt
    }

    /// The image of `J + I_>` in `A/m^N`, where `m^N ⊆ I_>`.
    pub fn quotient(&self) -> &TruncatedQuotient {
        &self.quotient
    }

    pub fn contains(&self, h: &Poly) -> bool {
        self.quotient.contains(h)
    }
}

/// Build `*J = J + I_>` after checking that `J` is a minimal reduction of `I`.
pub fn star_of_min_reduction(j: &PolyIdeal, ideal: &MonomialIdeal) -> Result<StarIdeal> {
    if !is_reduction_parameter(j, ideal)? {
        return Err(Error::Precondition(format!("{j} is not a reduction of {ideal}")));
    }
    let igt = i_greater(ideal)?;
    let order = order_containing_power_of_maximal(&igt)?;
    let mut gens = j.gens.clone();
    gens.extend(PolyIdeal::from_monomial(&igt)?.gens);
    let quotient = TruncatedQuotient::new(ideal.nvars(), order, &gens)?;
    Ok(StarIdeal {
        reduction: j.clone(),
        igt,
        quotient,
    })
}

/// `*J ∩ *J'` for two minimal reductions, as a subspace of `A/m^N` with `m^N ⊆ I_>`.
pub fn intersect_star_two(j1: &PolyIdeal, j2: &PolyIdeal, ideal: &MonomialIdeal) -> Result<TruncatedQuotient> {
    let s1 = star_of_min_reduction(j1, ideal)?;
    let s2 = star_of_min_reduction(j2, ideal)?;
    s1.quotient.intersection(&s2.quotient)
}

/// `J_a = (x^2 + a xy, y^2)` and `J_b = (x^2, y^2 + b xy)`: minimal reductions of `(x, y)^2`.
pub fn square_reduction_pair(a: &BigRational, b: &BigRational) -> (PolyIdeal, PolyIdeal) {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let xy = &x * &y;
    let ja = PolyIdeal::new(vec![&x.pow(2) + &xy.scale(a), y.pow(2)]).expect("nonempty");
    let jb = PolyIdeal::new(vec![x.pow(2), &y.pow(2) + &xy.scale(b)]).expect("nonempty");
    (ja, jb)
}

/// `dim_k(I / (I ∩ I_>))`: the number of monomials of `I` lying on a bounded facet.
pub fn dim_i_mod_igt(ideal: &MonomialIdeal) -> Result<u64> {
    let vals = rees_valuations(ideal)?;
    let bounds = ideal.pure_power_bounds().expect("finite colength");
    let mut count = 0u64;
    for_each_in_box(&bounds, |e| {
        if ideal.contains(e) && vals.iter().any(|v| v.value_of_monomial(e) == v.value_on_ideal as i128) {
            count += 1;
        }
    });
    Ok(count)
}

/// How the weak subintegral closures of the reductions of an integrally closed `I` behave.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionClass {
    /// `dim_k(I/I_>) = n`: `*J = I` for every reduction `J`.
    EveryReductionStarEqualsI,
    /// `dim_k(I/I_>) > n`: the closures `*J` of the minimal reductions intersect in `I_>`.
    IntersectionIsIGreater,
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionClass::EveryReductionStarEqualsI => write!(f, "EveryReductionStarEqualsI"),
            ReductionClass::IntersectionIsIGreater => write!(f, "IntersectionIsIGreater"),
        }
    }
}

pub fn classify_reductions(ideal: &MonomialIdeal) -> Result<ReductionClass> {
    let n = ideal.nvars();
    if n > 3 {
        return Err(Error::Unsupported(format!("classification is for at most 3 variables, not {n}")));
    }
    if integral_closure(ideal)? != *ideal {
        return Err(Error::Precondition(format!("{ideal} is not integrally closed")));
    }
    Ok(if dim_i_mod_igt(ideal)? == n as u64 {
        ReductionClass::EveryReductionStarEqualsI
    } else {
        ReductionClass::IntersectionIsIGreater
    })
}

/// Both sides of "`J + (I_> ∩ I)` is a reduction iff `J` is".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionAgreement {
    /// `J + (I_> ∩ I)` is a reduction of `I`.
    pub via_igt: bool,
    /// `J` is a reduction of `I`.
    pub direct: bool,
}

impl ReductionAgreement {
    pub fn agree(&self) -> bool {
        self.via_igt == self.direct
    }
}

pub fn reduction_from_igt(j: &MonomialIdeal, ideal: &MonomialIdeal) -> Result<ReductionAgreement> {
    let igt = i_greater(ideal)?;
    let enlarged = j.sum(&igt.intersection(ideal)?)?;
    Ok(ReductionAgreement {
        via_igt: is_reduction_monomial(&enlarged, ideal)?,
        direct: is_reduction_monomial(j, ideal)?,
    })
}

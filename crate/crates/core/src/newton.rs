//! Newton polyhedra of monomial ideals and their Rees valuations.
//!
//! The facet description is computed by double description on the cone of valid
//! inequalities `{(w, s) : w >= 0, <w, g> + s >= 0 for every generator g}`. Each
//! extreme ray `(w, s)` with `w != 0` is a facet `<w, q> >= -s` of
//! `conv(generators) + R^n_{>=0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::monomial::{ExponentVector, MonomialIdeal};
use crate::poly::Poly;

/// A facet `<normal, q> >= value` of a Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub value: i64,
    /// All normal entries strictly positive.
    pub bounded: bool,
}

impl Facet {
    pub fn evaluate(&self, e: &ExponentVector) -> i128 {
        e.dot(&self.normal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    nvars: usize,
    vertices: Vec<ExponentVector>,
    facets: Vec<Facet>,
}

impl NewtonPolyhedron {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// All facets, sorted lexicographically by `(normal, value)`.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn bounded_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.bounded)
    }

    pub fn contains_exponent(&self, e: &ExponentVector) -> bool {
        self.facets.iter().all(|f| f.evaluate(e) >= f.value as i128)
    }

    /// Membership of a rational point: nonnegative and on the correct side of every facet.
    pub fn contains(&self, q: &[BigRational]) -> bool {
        np_membership(q, self)
    }

    /// Vertices lying on the given facet.
    pub fn facet_vertices(&self, facet: &Facet) -> Vec<ExponentVector> {
        self.vertices
            .iter()
            .filter(|v| facet.evaluate(v) == facet.value as i128)
            .cloned()
            .collect()
    }
}

/// A monomial valuation `v(x^a) = <weight, a>` attached to a bounded facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReesValuation {
    pub weight: Vec<i64>,
    pub value_on_ideal: i64,
}

impl ReesValuation {
    pub fn value_of_monomial(&self, e: &ExponentVector) -> i128 {
        e.dot(&self.weight)
    }

    /// `v(f)`: the minimum over the terms of `f`; `None` for `f = 0`.
    pub fn value_of_poly(&self, f: &Poly) -> Option<i128> {
        f.terms().map(|(e, _)| self.value_of_monomial(e)).min()
    }

    /// `v(J)`: the minimum over the generators of a monomial ideal.
    pub fn value_of_ideal(&self, ideal: &MonomialIdeal) -> Option<i128> {
        ideal.generators().iter().map(|g| self.value_of_monomial(g)).min()
    }
}

impl fmt::Display for ReesValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weight.iter().map(|x| x.to_string()).collect();
        write!(f, "w=({}), v(I)={}", w.join(","), self.value_on_ideal)
    }
}

/// `q ∈ NP`: `q >= 0` and `<w, q> >= value` for every facet. Negative entries give `false`.
pub fn np_membership(q: &[BigRational], np: &NewtonPolyhedron) -> bool {
    if q.len() != np.nvars || q.iter().any(|x| x.is_negative()) {
        return false;
    }
    np.facets.iter().all(|f| {
        let lhs: BigRational = q
            .iter()
            .zip(&f.normal)
            .map(|(x, &w)| x * BigRational::from_integer(BigInt::from(w)))
            .sum();
        lhs >= BigRational::from_integer(BigInt::from(f.value))
    })
}

/// Exact facet description of `conv(generators) + R^n_{>=0}`.
pub fn newton_polyhedron(ideal: &MonomialIdeal) -> Result<NewtonPolyhedron> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let n = ideal.nvars();
    if n == 0 {
        return Err(Error::Unsupported("Newton polyhedron in zero variables".into()));
    }
    let gens = ideal.generators();
    let rays = double_description(n, gens);

    let mut facets = Vec::new();
    for ray in rays {
        if ray[..n].iter().all(|c| c.is_zero()) {
            continue;
        }
        let g = ray[..n].iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let normal = ray[..n]
            .iter()
            .map(|c| to_i64(&(c / &g)))
            .collect::<Result<Vec<_>>>()?;
        let value = to_i64(&(-&ray[n] / &g))?;
        let bounded = normal.iter().all(|&w| w > 0);
        facets.push(Facet { normal, value, bounded });
    }
    facets.sort();
    facets.dedup();

    let vertices = gens
        .iter()
        .filter(|g| {
            let tight: Vec<Vec<BigRational>> = facets
                .iter()
                .filter(|f| f.evaluate(g) == f.value as i128)
                .map(|f| f.normal.iter().map(|&w| BigRational::from_integer(w.into())).collect())
                .collect();
            linalg::rank(&tight) == n
        })
        .cloned()
        .collect();

    Ok(NewtonPolyhedron {
        nvars: n,
        vertices,
        facets,
    })
}

/// One valuation per bounded facet, sorted by weight. Requires finite colength.
pub fn rees_valuations(ideal: &MonomialIdeal) -> Result<Vec<ReesValuation>> {
    if !ideal.is_finite_colength() {
        return Err(Error::Unsupported(format!(
            "Rees valuations are extracted only for finite-colength ideals; {ideal} is not"
        )));
    }
    if ideal.is_unit() {
        return Ok(vec![]);
    }
    let np = newton_polyhedron(ideal)?;
    let mut vals: Vec<ReesValuation> = np
        .bounded_facets()
        .map(|f| ReesValuation {
            weight: f.normal.clone(),
            value_on_ideal: f.value,
        })
        .collect();
    vals.sort();
    Ok(vals)
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Unsupported(format!("facet coefficient {x} exceeds 64 bits")))
}

// ---- double description -------------------------------------------------

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_superset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    coords: Vec<BigInt>,
    tight: Bits,
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && g != BigInt::from(1) {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Extreme rays of `{y ∈ Q^{n+1} : y_i >= 0 (i < n), <g, y[..n]> + y_n >= 0 for each g}`.
fn double_description(n: usize, gens: &[ExponentVector]) -> Vec<Vec<BigInt>> {
    let nrows = n + gens.len();
    let row = |idx: usize| -> Vec<BigInt> {
        if idx < n {
            let mut r = vec![BigInt::zero(); n + 1];
            r[idx] = BigInt::from(1);
            r
        } else {
            let g = &gens[idx - n];
            let mut r: Vec<BigInt> = g.entries().iter().map(|&a| BigInt::from(a)).collect();
            r.push(BigInt::from(1));
            r
        }
    };
    let dot = |a: &[BigInt], b: &[BigInt]| -> BigInt { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    // Initial system: the n coordinate rows and the first generator row; its rays
    // are the columns of the inverse matrix.
    let g0 = &gens[0];
    let mut rays: Vec<Ray> = Vec::new();
    for i in 0..=n {
        let mut coords = vec![BigInt::zero(); n + 1];
        if i < n {
            coords[i] = BigInt::from(1);
            coords[n] = -BigInt::from(g0.entries()[i]);
        } else {
            coords[n] = BigInt::from(1);
        }
        let mut tight = Bits::new(nrows);
        for r in 0..=n {
            if dot(&row(r), &coords).is_zero() {
                tight.set(r);
            }
        }
        rays.push(Ray { coords, tight });
    }

    let d = n + 1;
    for r in (n + 1)..nrows {
        let a = row(r);
        let values: Vec<BigInt> = rays.iter().map(|ray| dot(&a, &ray.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, ray) in rays.iter_mut().enumerate() {
                if values[i].is_zero() {
                    ray.tight.set(r);
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &m in &neg {
                let common = rays[p].tight.and(&rays[m].tight);
                if common.count() + 2 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, ray)| k != p && k != m && ray.tight.is_superset_of(&common));
                if blocked {
                    continue;
                }
                let coords: Vec<BigInt> = rays[m]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(cm, cp)| &values[p] * cm - &values[m] * cp)
                    .collect();
                let mut tight = common;
                tight.set(r);
                next.push(Ray {
                    coords: primitive(coords),
                    tight,
                });
            }
        }
        for (i, mut ray) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                ray.tight.set(r);
            }
            next.push(ray);
        }
        rays = next;
    }
    rays.into_iter().map(|r| r.coords).collect()
}

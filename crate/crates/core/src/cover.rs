//! Monic hypersurfaces `F(X, T) = 0` viewed as branched covers of `X`-space.
//!
//! With `N = deg_T F` and `l = floor(N/2)`, the locus `ZZ(F)` is where `F` and its first
//! `l` derivatives in `T` vanish together, i.e. where `F(x, T)` has a root of multiplicity
//! at least `l + 1`. Such a root is unique over each `x`, so `ZZ(F)` is the graph of a
//! function on its image.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rrs::{monic_in_t, RrsSystem};
use crate::univariate::UniPoly;

/// A polynomial in `nvars + 1` variables, monic in the last one (`T`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicHypersurface {
    nvars: usize,
    degree: u32,
    f: Poly,
}

impl MonicHypersurface {
    /// `f` must have `nvars + 1` variables, positive degree in `T`, and leading `T`-coefficient `1`.
    pub fn new(f: Poly, nvars: usize) -> Result<Self> {
        if f.nvars() != nvars + 1 {
            return Err(Error::DimensionMismatch {
                expected: nvars + 1,
                found: f.nvars(),
            });
        }
        let degree = f.terms().map(|(e, _)| e.entries()[nvars]).max().unwrap_or(0);
        if degree == 0 {
            return Err(Error::Precondition("F must have positive degree in T".into()));
        }
        let lead: Vec<_> = f.terms().filter(|(e, _)| e.entries()[nvars] == degree).collect();
        let monic = lead.len() == 1 && lead[0].0.degree() == degree as u64 && lead[0].1.is_one();
        if !monic {
            return Err(Error::Precondition("F must be monic in T".into()));
        }
        Ok(MonicHypersurface { nvars, degree, f })
    }

    /// `F = T^{2q+1} + sum C(2q+1, i) f_i T^{2q+1-i}`, with `f_i` the lifts of `a_i`.
    ///
    /// Over a polynomial ring each `a_i` is its own lift, which is what `None` selects.
    pub fn from_rrs(sys: &RrsSystem, lifts: Option<&[Poly]>) -> Result<Self> {
        let coeffs = lifts.unwrap_or(sys.coeffs());
        if coeffs.len() != sys.coeffs().len() {
            return Err(Error::DimensionMismatch {
                expected: sys.coeffs().len(),
                found: coeffs.len(),
            });
        }
        let f = monic_in_t(coeffs, sys.nvars(), 2 * sys.q() + 1);
        MonicHypersurface::new(f, sys.nvars())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `N`, the degree in `T`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `l = floor(N/2)`.
    pub fn ell(&self) -> u32 {
        self.degree / 2
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    /// The univariate polynomial `F(x, T)`.
    pub fn specialize(&self, x: &[BigRational]) -> UniPoly {
        assert_eq!(x.len(), self.nvars, "sample point dimension");
        let mut coeffs = vec![BigRational::zero(); self.degree as usize + 1];
        for (e, c) in self.f.terms() {
            let mut v = c.clone();
            for (xi, &k) in x.iter().zip(e.entries()) {
                if k > 0 {
                    v *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            coeffs[e.entries()[self.nvars] as usize] += v;
        }
        UniPoly::new(coeffs)
    }

    /// Rational roots of `F(x, T)` with multiplicity at least `l + 1`.
    pub fn deep_roots(&self, x: &[BigRational]) -> Vec<BigRational> {
        let mut p = self.specialize(x);
        let mut g = p.clone();
        for _ in 0..self.ell() {
            p = p.derivative();
            g = g.gcd(&p);
        }
        let s = g.squarefree_part();
        match s.degree() {
            None | Some(0) => vec![],
            Some(1) => vec![-&s.coeffs()[0]],
            Some(_) => s.rational_roots(),
        }
    }
}

/// `(x, t) ∈ ZZ(F)`: `F` and its first `l` derivatives in `T` vanish at the point.
pub fn zz_membership(f: &MonicHypersurface, x: &[BigRational], t: &BigRational) -> bool {
    let mut p = f.specialize(x);
    for _ in 0..=f.ell() {
        if !p.eval(t).is_zero() {
            return false;
        }
        p = p.derivative();
    }
    true
}

/// Largest `m` with `(T - t)^m` dividing `F(x, T)`.
pub fn root_multiplicity(f: &MonicHypersurface, x: &[BigRational], t: &BigRational) -> u32 {
    f.specialize(x).root_multiplicity(t).expect("a monic polynomial is nonzero") as u32
}

/// Every sample point has at most one rational root of multiplicity at least `l + 1`.
pub fn unique_deep_root_check(f: &MonicHypersurface, samples: &[Vec<BigRational>]) -> bool {
    samples.iter().all(|x| f.deep_roots(x).len() <= 1)
}

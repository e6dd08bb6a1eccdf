//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Sparse vector: column index to nonzero entry.
pub type SparseVec = BTreeMap<usize, BigRational>;

fn axpy(target: &mut SparseVec, c: &BigRational, row: &SparseVec) {
    for (&k, v) in row {
        let prod = c * v;
        match target.get_mut(&k) {
            Some(t) => {
                *t += prod;
                if t.is_zero() {
                    target.remove(&k);
                }
            }
            None => {
                target.insert(k, prod);
            }
        }
    }
}

/// A row-echelon basis of a subspace. Every stored row has leading entry 1 at its pivot.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Eliminate every pivot column from `v`.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            axpy(&mut v, &-c, &self.rows[&k]);
            cursor = k + 1;
        }
        v
    }

    /// Add `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = BigRational::one() / lead;
        let row: SparseVec = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Rows of the reduced row-echelon form, sorted by pivot.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let mut rows: BTreeMap<usize, SparseVec> = self.rows.clone();
        let pivots: Vec<usize> = rows.keys().rev().copied().collect();
        for &p in &pivots {
            let prow = rows[&p].clone();
            for (&q, row) in rows.iter_mut() {
                if q < p {
                    if let Some(c) = row.get(&p).cloned() {
                        axpy(row, &-c, &prow);
                    }
                }
            }
        }
        rows.into_values().collect()
    }
}

/// Solve `A x = b` for sparse rows given as `(row, rhs)` pairs.
///
/// Returns one solution (free variables set to zero) over `ncols` unknowns, or `None`
/// when the system is inconsistent.
pub fn solve(ncols: usize, equations: impl IntoIterator<Item = (SparseVec, BigRational)>) -> Option<Vec<BigRational>> {
    let rhs_col = ncols;
    let mut basis = EchelonBasis::new();
    for (mut row, b) in equations {
        if !b.is_zero() {
            row.insert(rhs_col, b);
        }
        let reduced = basis.reduce(row);
        match reduced.keys().next() {
            None => {}
            Some(&k) if k == rhs_col => return None,
            Some(_) => {
                basis.insert(reduced);
            }
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    let rows: Vec<(usize, SparseVec)> = basis.rows.into_iter().rev().collect();
    for (p, row) in rows {
        let mut val = row.get(&rhs_col).cloned().unwrap_or_else(BigRational::zero);
        for (&k, c) in row.range(p + 1..rhs_col) {
            val -= c * &x[k];
        }
        x[p] = val;
    }
    Some(x)
}

/// Basis of `U ∩ W` by the Zassenhaus construction on `U ⊕ W` rows of width `dim`.
pub fn intersect(dim: usize, u: &[SparseVec], w: &[SparseVec]) -> EchelonBasis {
    let mut big = EchelonBasis::new();
    for row in u {
        let mut r = row.clone();
        for (&k, c) in row {
            r.insert(k + dim, c.clone());
        }
        big.insert(r);
    }
    for row in w {
        big.insert(row.clone());
    }
    let mut out = EchelonBasis::new();
    for (p, row) in &big.rows {
        if *p >= dim {
            out.insert(row.iter().map(|(&k, c)| (k - dim, c.clone())).collect());
        }
    }
    out
}

/// Rank of a dense rational matrix given by rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut b = EchelonBasis::new();
    for r in rows {
        let v: SparseVec = r
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        b.insert(v);
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, c)| (k, rational(c))).collect()
    }

    #[test]
    fn solve_small_system() {
        // x + y = 3, x - y = 1
        let x = solve(2, vec![(sv(&[(0, 1), (1, 1)]), rational(3)), (sv(&[(0, 1), (1, -1)]), rational(1))]).unwrap();
        assert_eq!(x, vec![rational(2), rational(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let x = solve(1, vec![(sv(&[(0, 1)]), rational(1)), (sv(&[(0, 2)]), rational(3))]);
        assert!(x.is_none());
    }

    #[test]
    fn zassenhaus_intersection() {
        // U = span{e0+e1, e2}, W = span{e0, e1+e2}; U ∩ W = span{e0+e1+e2}
        let u = vec![sv(&[(0, 1), (1, 1)]), sv(&[(2, 1)])];
        let w = vec![sv(&[(0, 1)]), sv(&[(1, 1), (2, 1)])];
        let i = intersect(3, &u, &w);
        assert_eq!(i.rank(), 1);
        assert_eq!(i.rref_rows()[0], sv(&[(0, 1), (1, 1), (2, 1)]));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![rational(1), rational(2)],
            vec![rational(2), rational(4)],
        ];
        assert_eq!(rank(&rows), 1);
    }
}

use std::collections::BTreeMap;

use num_traits::Zero;

use super::basis::enumerate_homology_basis;
use super::psi::{by_degree, psi};
use crate::error::{Error, Result};
use crate::exact::{scalar_to_i64, FormalSum};
use crate::expr::BracketExpr;
use crate::forest::{enumerate_cohomology_basis, ForestVector, KForest};
use crate::linalg::{sparse_from_ints, SpanSolver};

/// Homology and cohomology bases for one `(n, k, d)` together with the
/// pairing between them, used to express classes in coordinates.
pub struct HomologyContext {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    basis: Vec<BracketExpr>,
    forests: Vec<(KForest, i64)>,
    degrees: BTreeMap<usize, Vec<usize>>,
    solvers: BTreeMap<usize, SpanSolver>,
    identity: bool,
}

impl HomologyContext {
    pub fn new(n: usize, k: usize, d: usize) -> Result<Self> {
        let basis = enumerate_homology_basis(n, k, d)?;
        let forests = enumerate_cohomology_basis(n, k, d)?
            .iter()
            .map(|f| f.canonical_form())
            .collect::<Result<Vec<_>>>()?;
        let degrees = by_degree(&basis, |e| e.degree(d));
        let mut solvers = BTreeMap::new();
        let mut identity = true;
        for (&deg, ids) in &degrees {
            let mut solver = SpanSolver::new(Vec::new());
            for &i in ids {
                let p = psi(&basis[i], k, d)?;
                let col: Vec<(usize, i64)> = ids
                    .iter()
                    .enumerate()
                    .map(|(row, &j)| (row, forests[j].1 * p.coeff(&forests[j].0)))
                    .filter(|&(_, c)| c != 0)
                    .collect();
                if col != [(ids.iter().position(|&j| j == i).expect("own index"), 1)] {
                    identity = false;
                }
                if !solver.push_generator(sparse_from_ints(col)) {
                    return Err(Error::Inconsistent(format!(
                        "pairing matrix is singular in degree {deg}"
                    )));
                }
            }
            solvers.insert(deg, solver);
        }
        Ok(HomologyContext {
            n,
            k,
            d,
            basis,
            forests,
            degrees,
            solvers,
            identity,
        })
    }

    pub fn basis(&self) -> &[BracketExpr] {
        &self.basis
    }

    /// Canonical cohomology basis forests with the sign relating each to the
    /// oriented basis forest.
    pub fn cobasis(&self) -> &[(KForest, i64)] {
        &self.forests
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.basis[i].degree(self.d)
    }

    pub fn indices_in_degree(&self, degree: usize) -> &[usize] {
        self.degrees.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    /// True if the pairing matrix is the identity in every degree.
    pub fn pairing_is_identity(&self) -> bool {
        self.identity
    }

    /// Coordinates of the class whose image under `Ψ` is `v`.
    pub fn coordinates_of_psi(&self, v: &ForestVector) -> Result<FormalSum<usize>> {
        let mut out = FormalSum::new();
        let by_deg = by_degree(&v.support().collect::<Vec<_>>(), |f| f.degree());
        for (deg, _) in by_deg {
            let Some(ids) = self.degrees.get(&deg) else {
                return Err(Error::Inconsistent(format!("no homology in degree {deg}")));
            };
            let target: Vec<(usize, i64)> = ids
                .iter()
                .enumerate()
                .map(|(row, &j)| (row, self.forests[j].1 * v.coeff(&self.forests[j].0)))
                .filter(|&(_, c)| c != 0)
                .collect();
            let sol = self.solvers[&deg]
                .solve(sparse_from_ints(target))
                .ok_or_else(|| Error::Inconsistent("pairing system has no solution".into()))?;
            for (g, x) in sol {
                if x.is_zero() {
                    continue;
                }
                let c = scalar_to_i64(&x)
                    .ok_or_else(|| Error::Inconsistent(format!("non-integral coordinate {x}")))?;
                out.add_term(ids[g], c);
            }
        }
        Ok(out)
    }

    pub fn coordinates(&self, e: &BracketExpr) -> Result<FormalSum<usize>> {
        self.check(e)?;
        self.coordinates_of_psi(&psi(e, self.k, self.d)?)
    }

    pub fn coordinates_of_sum(&self, s: &FormalSum<BracketExpr>) -> Result<FormalSum<usize>> {
        let mut out = FormalSum::new();
        for (e, c) in s.iter() {
            out.add_assign_scaled(&self.coordinates(e)?, c);
        }
        Ok(out)
    }

    fn check(&self, e: &BracketExpr) -> Result<()> {
        let n = e.check_linear()?;
        if n != self.n {
            return Err(Error::ContextMismatch(format!(
                "expression on {n} letters in a context with n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identity() {
        for (n, k, d) in [(3, 3, 2), (4, 3, 2), (4, 3, 3), (5, 3, 2), (5, 4, 3)] {
            let ctx = HomologyContext::new(n, k, d).unwrap();
            assert!(ctx.pairing_is_identity(), "({n},{k},{d})");
        }
    }

    #[test]
    fn basis_elements_are_unit_vectors() {
        let ctx = HomologyContext::new(5, 3, 3).unwrap();
        for (i, b) in ctx.basis().iter().enumerate() {
            assert_eq!(ctx.coordinates(b).unwrap(), FormalSum::from_term(i, 1));
        }
    }
}

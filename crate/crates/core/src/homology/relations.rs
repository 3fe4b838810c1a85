//! The defining relations of the bimodule, checked through `Ψ`, and the
//! rank of the hook module in the group algebra.

use std::collections::HashMap;

use itertools::Itertools;

use super::actions::right_action_normalize;
use super::psi::psi;
use crate::coaction::psi_via_right_coaction;
use crate::error::{Error, Result};
use crate::exact::{sign_pow, sort_parity, FormalSum};
use crate::expr::{br, long, var, BracketExpr};
use crate::forest::ForestVector;
use crate::linalg::{sparse_from_ints, Echelon};

/// One relation family and the number of instances checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub instances: usize,
}

fn psi_sum(terms: &[(BracketExpr, i64)], k: usize, d: usize) -> Result<ForestVector> {
    let mut out = FormalSum::new();
    for (e, c) in terms {
        out.add_assign_scaled(&psi(e, k, d)?, *c);
    }
    Ok(out)
}

fn expect_equal(name: &str, lhs: &ForestVector, rhs: &ForestVector) -> Result<()> {
    if lhs != rhs {
        return Err(Error::Verification(format!("{name} fails: {} terms differ", lhs.sub(rhs).len())));
    }
    Ok(())
}

/// Sphere generator on the given letters.
fn sphere(vars: &[usize]) -> BracketExpr {
    long(vars)
}

/// The right-action side `{x1, …, x_{k−1}, q}` evaluated through the right
/// coaction, without rewriting.
fn right_composite(q: &str, k: usize, d: usize) -> Result<ForestVector> {
    let mut args = vec![var(1); k - 1];
    args.push(BracketExpr::parse(q)?);
    psi_via_right_coaction(&sphere(&(1..=k).collect::<Vec<_>>()), &args, k, d)
}

/// Checks symmetry, generalized Jacobi, triviality of the Lie bracket on
/// points, and both Leibniz rules. Leibniz left sides are evaluated through
/// the right coaction and compared with `Ψ` of the right sides; the rewriting
/// done by `right_action_normalize` is checked against the same values.
pub fn verify_bimodule_relations(k: usize, d: usize) -> Result<Vec<RelationCheck>> {
    if k < 3 || d < 2 {
        return Err(Error::Unsupported(format!("relations are checked for k >= 3, d >= 2; got k = {k}, d = {d}")));
    }
    let mut report = Vec::new();
    let letters: Vec<usize> = (1..=k).collect();

    let base = psi(&sphere(&letters), k, d)?;
    let mut count = 0;
    for perm in letters.iter().copied().permutations(k) {
        let lhs = psi(&sphere(&perm), k, d)?;
        expect_equal("symmetry", &lhs, &base.scale(sign_pow(sort_parity(&perm) * d)))?;
        count += 1;
    }
    report.push(RelationCheck { name: "symmetry", instances: count });

    let terms: Vec<(BracketExpr, i64)> = (1..=k + 1)
        .map(|i| {
            let rest: Vec<usize> = (1..=k + 1).filter(|&j| j != i).collect();
            (br(var(i), sphere(&rest)), sign_pow((i - 1) * d))
        })
        .collect();
    if terms.iter().any(|(e, _)| psi(e, k, d).map_or(true, |v| v.is_zero())) {
        return Err(Error::Verification("generalized Jacobi has a vanishing summand".into()));
    }
    expect_equal("generalized Jacobi", &psi_sum(&terms, k, d)?, &FormalSum::new())?;
    report.push(RelationCheck { name: "generalized Jacobi", instances: 1 });

    expect_equal("Lie triviality", &psi(&br(var(1), var(2)), k, d)?, &FormalSum::new())?;
    report.push(RelationCheck { name: "Lie triviality", instances: 1 });

    let head: Vec<usize> = (1..k).collect();
    let with = |last: usize| {
        let mut v = head.clone();
        v.push(last);
        sphere(&v)
    };
    let prod_rhs = psi_sum(
        &[
            (BracketExpr::Prod(vec![var(k), with(k + 1)]), 1),
            (BracketExpr::Prod(vec![with(k), var(k + 1)]), 1),
        ],
        k,
        d,
    )?;
    let bracket_rhs = psi_sum(
        &[(br(with(k + 1), var(k)), sign_pow(d)), (br(with(k), var(k + 1)), 1)],
        k,
        d,
    )?;
    for (name, arg, rhs) in [
        ("Leibniz product", "x1*x2", prod_rhs),
        ("Leibniz bracket", "[x1,x2]", bracket_rhs),
    ] {
        let lhs = right_composite(arg, k, d)?;
        expect_equal(name, &lhs, &rhs)?;
        let mut args: Vec<BracketExpr> = head.iter().map(|&i| var(i)).collect();
        let q = BracketExpr::parse(arg)?.map_vars(&|v| v + k - 1);
        args.push(q);
        let rewritten = right_action_normalize(&BracketExpr::Long(args), k, d)?;
        let rewritten: Vec<(BracketExpr, i64)> = rewritten.iter().map(|(e, c)| (e.clone(), c)).collect();
        expect_equal(name, &psi_sum(&rewritten, k, d)?, &rhs)?;
        report.push(RelationCheck { name, instances: 2 });
    }
    Ok(report)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// Rank over `Q` of the left ideal `Q[Σn]·a·b`, where `a` antisymmetrizes
/// the first `k` letters and `b` symmetrizes the letters `1, k+1, …, n`.
pub fn hook_module_rank(n: usize, k: usize) -> Result<usize> {
    if k < 2 || n < k {
        return Err(Error::Unsupported(format!("hook module needs n >= k >= 2; got n = {n}, k = {k}")));
    }
    if n > 6 {
        return Err(Error::ResourceLimit(format!("hook module rank is limited to n <= 6; got {n}")));
    }
    let all: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let index: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let identity: Vec<usize> = (0..n).collect();

    let mut a = Vec::new();
    for p in (0..k).permutations(k) {
        let mut g = identity.clone();
        g[..k].copy_from_slice(&p);
        a.push((g, sign_pow(sort_parity(&p))));
    }
    let moved: Vec<usize> = std::iter::once(0).chain(k..n).collect();
    let mut b = Vec::new();
    for p in moved.iter().copied().permutations(moved.len()) {
        let mut g = identity.clone();
        for (&from, &to) in moved.iter().zip(&p) {
            g[from] = to;
        }
        b.push(g);
    }
    let mut ab: HashMap<Vec<usize>, i64> = HashMap::new();
    for (x, s) in &a {
        for y in &b {
            *ab.entry(compose(x, y)).or_default() += s;
        }
    }
    ab.retain(|_, c| *c != 0);

    let mut echelon = Echelon::new();
    for pi in &all {
        let row = sparse_from_ints(ab.iter().map(|(g, &c)| (index[compose(pi, g).as_slice()], c)));
        echelon.insert(row);
    }
    Ok(echelon.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold() {
        for d in [2, 3] {
            let r = verify_bimodule_relations(3, d).unwrap();
            assert_eq!(r.len(), 5);
        }
        assert!(verify_bimodule_relations(3, 1).is_err());
    }

    #[test]
    fn small_hooks() {
        assert_eq!(hook_module_rank(3, 3).unwrap(), 1);
        assert_eq!(hook_module_rank(4, 3).unwrap(), 3);
        assert!(hook_module_rank(2, 3).is_err());
    }
}

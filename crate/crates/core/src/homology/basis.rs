//! Homology bases: products of iterated brackets for `d >= 2`, and the
//! interval-sequence basis for `d = 1`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::expr::{br, long, prod, BracketExpr};
use crate::forest::{enumerate_skeletons, check_params, PathPiece, Skeleton, SkeletonComponent};

fn piece_expr(pc: &PathPiece) -> BracketExpr {
    let mut idx = pc.square.clone();
    idx.push(pc.top);
    idx.sort_unstable();
    pc.extra
        .iter()
        .fold(long(&idx), |acc, &x| br(acc, BracketExpr::Var(x)))
}

/// The homology class dual to the cohomology forest of the same skeleton.
pub fn skeleton_expr(s: &Skeleton) -> BracketExpr {
    let factors = s
        .components
        .iter()
        .map(|c| match c {
            SkeletonComponent::Point(e) => BracketExpr::Var(*e),
            SkeletonComponent::Path(pieces) => {
                let mut it = pieces.iter().map(piece_expr);
                let first = it.next().expect("nonempty path");
                it.fold(first, br)
            }
        })
        .collect();
    prod(factors)
}

/// Basis of `H_*` for `d >= 2`, sorted by degree; index `i` is dual to the
/// `i`-th cohomology basis forest.
pub fn enumerate_homology_basis(n: usize, k: usize, d: usize) -> Result<Vec<BracketExpr>> {
    check_params(k, d)?;
    Ok(enumerate_skeletons(n, k, d).iter().map(skeleton_expr).collect())
}

/// A `d = 1` basis element: `I0, J1, I1, ..., Jl, Il`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct D1BasisElement {
    pub free: Vec<Vec<usize>>,
    pub longs: Vec<Vec<usize>>,
}

impl D1BasisElement {
    pub fn degree(&self, k: usize) -> usize {
        self.longs.len() * (k - 2)
    }

    /// True if `max(I_s ∪ J_{s+1})` lies in `J_{s+1}` for every `s`.
    pub fn satisfies_max_condition(&self) -> bool {
        self.longs.iter().enumerate().all(|(s, j)| {
            let jmax = j.iter().max();
            let imax = self.free[s].iter().max();
            match (imax, jmax) {
                (_, None) => false,
                (None, Some(_)) => true,
                (Some(i), Some(j)) => j > i,
            }
        })
    }

    /// `A_{I0}·B_{J1}·A_{I1}···` as a (noncommutative) product.
    pub fn expr(&self) -> BracketExpr {
        let mut factors: Vec<BracketExpr> = Vec::new();
        for (s, i) in self.free.iter().enumerate() {
            factors.extend(i.iter().map(|&x| BracketExpr::Var(x)));
            if let Some(j) = self.longs.get(s) {
                factors.push(long(j));
            }
        }
        prod(factors)
    }
}

fn d1_rec(remaining: &[usize], k: usize, free: &mut Vec<Vec<usize>>, longs: &mut Vec<Vec<usize>>, out: &mut Vec<D1BasisElement>) {
    free.push(remaining.to_vec());
    out.push(D1BasisElement {
        free: free.clone(),
        longs: longs.clone(),
    });
    free.pop();
    if remaining.len() < k {
        return;
    }
    for j in remaining.iter().copied().combinations(k) {
        let jmax = *j.last().expect("k >= 1");
        let rest: Vec<usize> = remaining.iter().copied().filter(|e| !j.contains(e)).collect();
        let below: Vec<usize> = rest.iter().copied().filter(|&e| e < jmax).collect();
        for size in 0..=below.len() {
            for i in below.iter().copied().combinations(size) {
                let next: Vec<usize> = rest.iter().copied().filter(|e| !i.contains(e)).collect();
                free.push(i);
                longs.push(j.clone());
                d1_rec(&next, k, free, longs, out);
                longs.pop();
                free.pop();
            }
        }
    }
}

/// All `d = 1` basis elements on `{1..n}`, sorted by degree.
pub fn enumerate_homology_basis_d1(n: usize, k: usize) -> Result<Vec<D1BasisElement>> {
    if k < 3 {
        return Err(Error::Unsupported(format!("k = {k}; need k >= 3")));
    }
    let elems: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    d1_rec(&elems, k, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort_by_cached_key(|b| (b.longs.len(), b.clone()));
    Ok(out)
}

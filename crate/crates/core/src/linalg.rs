//! Sparse exact row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exact::{scalar, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn sparse_from_ints<I: IntoIterator<Item = (usize, i64)>>(entries: I) -> SparseVec {
    let mut v = SparseVec::new();
    for (c, x) in entries {
        if x != 0 {
            let e = v.entry(c).or_insert_with(Scalar::zero);
            *e += scalar(x);
            if e.is_zero() {
                v.remove(&c);
            }
        }
    }
    v
}

/// `a -= f * b`
fn axpy(a: &mut SparseVec, f: &Scalar, b: &SparseVec) {
    for (c, x) in b {
        let e = a.entry(*c).or_insert_with(Scalar::zero);
        *e -= f * x;
        if e.is_zero() {
            a.remove(c);
        }
    }
}

struct PivotRow {
    row: SparseVec,
    track: SparseVec,
}

/// Incremental echelon form. Rows are normalised so the pivot (the leftmost
/// nonzero column) is 1.
#[derive(Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, PivotRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: SparseVec, mut track: SparseVec) -> (SparseVec, SparseVec) {
        let mut from = 0usize;
        loop {
            let next = row.range(from..).find(|(c, _)| self.pivots.contains_key(c));
            let Some((&c, f)) = next else { break };
            let f = f.clone();
            let p = &self.pivots[&c];
            axpy(&mut row, &f, &p.row);
            axpy(&mut track, &f, &p.track);
            from = c + 1;
        }
        (row, track)
    }

    fn insert_tracked(&mut self, row: SparseVec, track: SparseVec) -> bool {
        let (mut row, mut track) = self.reduce(row, track);
        let Some((&c, lead)) = row.iter().next() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for x in row.values_mut() {
                *x *= &inv;
            }
            for x in track.values_mut() {
                *x *= &inv;
            }
        }
        self.pivots.insert(c, PivotRow { row, track });
        true
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        self.insert_tracked(row, SparseVec::new())
    }

    pub fn contains(&self, row: SparseVec) -> bool {
        self.reduce(row, SparseVec::new()).0.is_empty()
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Expresses targets as combinations of generators modulo a fixed subspace.
///
/// Relators span the subspace that is quotiented out; generators are tracked
/// so a reduced target can be rewritten in terms of them.
pub struct SpanSolver {
    ech: Echelon,
    generators: usize,
}

impl SpanSolver {
    pub fn new(relators: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut ech = Echelon::new();
        for r in relators {
            ech.insert(r);
        }
        SpanSolver { ech, generators: 0 }
    }

    /// Adds the next generator; returns false if it was already in the span.
    pub fn push_generator(&mut self, g: SparseVec) -> bool {
        let mut track = SparseVec::new();
        track.insert(self.generators, Scalar::one());
        self.generators += 1;
        self.ech.insert_tracked(g, track)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Coefficients `c` with `target - sum c_i g_i` in the relator span, or
    /// `None` if the target is not in the combined span.
    pub fn solve(&self, target: SparseVec) -> Option<SparseVec> {
        let (rest, track) = self.ech.reduce(target, SparseVec::new());
        if !rest.is_empty() {
            return None;
        }
        Some(track.into_iter().map(|(c, x)| (c, -x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(e: &[(usize, i64)]) -> SparseVec {
        sparse_from_ints(e.iter().copied())
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])];
        assert_eq!(rank(rows), 2);
    }

    #[test]
    fn solve_modulo_relators() {
        // relator e0 - e1; generator e1; target 3 e0 = 3 g0 mod relator
        let mut s = SpanSolver::new(vec![v(&[(0, 1), (1, -1)])]);
        s.push_generator(v(&[(1, 1)]));
        let c = s.solve(v(&[(0, 3)])).unwrap();
        assert_eq!(c, v(&[(0, 3)]));
        assert!(s.solve(v(&[(2, 1)])).is_none());
    }

    #[test]
    fn solve_with_fractional_pivots() {
        let mut s = SpanSolver::new(Vec::new());
        s.push_generator(v(&[(0, 2), (1, 1)]));
        s.push_generator(v(&[(0, 1), (1, 1)]));
        let c = s.solve(v(&[(0, 1)])).unwrap();
        assert_eq!(c, v(&[(0, 1), (1, -1)]));
    }
}

//! Generators of the relation subspace: 3-term relations among square
//! vertices and the relations dual to the generalized Jacobi identity.

use std::collections::BTreeSet;

use super::{enumerate_admissible, ForestVector, Item, KForest, Vertex};
use crate::error::Result;
use crate::exact::{sign_pow, FormalSum};

/// Fixes the overall sign so that the first coefficient is positive.
fn normalize_sign(v: ForestVector) -> ForestVector {
    let negative = v.iter().next().is_some_and(|(_, c)| c < 0);
    if negative {
        v.scale(-1)
    } else {
        v
    }
}

fn accumulate(out: &mut ForestVector, f: &KForest, coeff: i64) {
    let (c, s) = f.canonicalize_raw();
    out.add_term(c, coeff * s);
}

/// `T` with its orientation cut down to `rest` and the given edges appended.
fn with_edges(base: &KForest, rest: &[Item], kept: &[(Vertex, Vertex)], extra: &[(Vertex, Vertex)]) -> KForest {
    let mut f = base.clone();
    f.edges = kept.to_vec();
    let mut orientation = rest.to_vec();
    for &e in extra {
        orientation.push(Item::Edge(f.edges.len()));
        f.edges.push(e);
    }
    f.orientation = orientation;
    f
}

/// The 3-term relators centred at square `x` of `t` with square neighbours `y`, `z`.
pub(crate) fn three_term_at(t: &KForest, x: usize, y: usize, z: usize) -> ForestVector {
    let (sx, sy, sz) = (Vertex::Square(x), Vertex::Square(y), Vertex::Square(z));
    let touches = |e: &(Vertex, Vertex), a: Vertex, b: Vertex| {
        (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a)
    };
    // drop the two edges x-y and x-z; renumber the remaining ones
    let mut kept = Vec::new();
    let mut renumber = vec![None; t.edges.len()];
    for (i, e) in t.edges.iter().enumerate() {
        if !touches(e, sx, sy) && !touches(e, sx, sz) {
            renumber[i] = Some(kept.len());
            kept.push(*e);
        }
    }
    let rest: Vec<Item> = t
        .orientation
        .iter()
        .filter_map(|it| match *it {
            Item::Edge(i) => renumber[i].map(Item::Edge),
            sq => Some(sq),
        })
        .collect();
    let f1 = with_edges(t, &rest, &kept, &[(sx, sy), (sx, sz)]);
    let f2 = with_edges(t, &rest, &kept, &[(sx, sy), (sy, sz)]);
    let f3 = with_edges(t, &rest, &kept, &[(sx, sz), (sz, sy)]);
    let mut v = FormalSum::new();
    accumulate(&mut v, &f1, 1);
    accumulate(&mut v, &f2, -1);
    accumulate(&mut v, &f3, -sign_pow(t.d - 1));
    v
}

fn three_term_from(t: &KForest, out: &mut BTreeSet<ForestVector>) {
    for x in 0..t.squares.len() {
        let nbrs: Vec<usize> = t
            .neighbours(Vertex::Square(x))
            .into_iter()
            .filter_map(|v| match v {
                Vertex::Square(i) => Some(i),
                _ => None,
            })
            .collect();
        for (a, &y) in nbrs.iter().enumerate() {
            for &z in &nbrs[a + 1..] {
                let v = three_term_at(t, x, y, z);
                if !v.is_zero() {
                    out.insert(normalize_sign(v));
                }
            }
        }
    }
}

/// The dual Jacobi relator obtained by pulling element `j` out of square `a`
/// of `t` and treating it as one more round of the shrunken square.
pub(crate) fn dual_jacobi_at(t: &KForest, a: usize, j: usize) -> ForestVector {
    let sa = Vertex::Square(a);
    let shrunk: Vec<usize> = {
        let mut s: Vec<usize> = t.squares[a].iter().copied().filter(|&e| e != j).collect();
        s.sort_unstable();
        s
    };
    let mut js = t.square_rounds(a);
    js.push(j);
    js.sort_unstable();

    let is_round_edge = |e: &(Vertex, Vertex)| {
        (e.0 == sa && matches!(e.1, Vertex::Round(_))) || (e.1 == sa && matches!(e.0, Vertex::Round(_)))
    };
    let mut kept = Vec::new();
    let mut renumber = vec![None; t.edges.len()];
    for (i, e) in t.edges.iter().enumerate() {
        if !is_round_edge(e) {
            renumber[i] = Some(kept.len());
            kept.push(*e);
        }
    }
    let rest: Vec<Item> = t
        .orientation
        .iter()
        .filter_map(|it| match *it {
            Item::Edge(i) => renumber[i].map(Item::Edge),
            Item::Square(i) if i == a => None,
            sq => Some(sq),
        })
        .collect();

    let mut v = FormalSum::new();
    for (l, &jl) in js.iter().enumerate() {
        let mut f = t.clone();
        let mut sq = shrunk.clone();
        sq.push(jl);
        f.squares[a] = sq;
        f.rounds = t.rounds.iter().copied().chain([j]).filter(|&r| r != jl).collect();
        f.rounds.sort_unstable();
        f.edges = kept.clone();
        let mut orientation = vec![Item::Square(a)];
        for &jm in &js {
            if jm != jl {
                orientation.push(Item::Edge(f.edges.len()));
                f.edges.push((sa, Vertex::Round(jm)));
            }
        }
        orientation.extend(rest.iter().copied());
        f.orientation = orientation;
        accumulate(&mut v, &f, sign_pow((l + 1) * (t.d - 1)));
    }
    v
}

fn dual_jacobi_from(t: &KForest, out: &mut BTreeSet<ForestVector>) {
    for a in 0..t.squares.len() {
        for &j in &t.squares[a] {
            let v = dual_jacobi_at(t, a, j);
            if !v.is_zero() {
                out.insert(normalize_sign(v));
            }
        }
    }
}

pub(crate) fn relators_of(forests: &[KForest]) -> Vec<ForestVector> {
    let mut out = BTreeSet::new();
    for t in forests {
        three_term_from(t, &mut out);
        dual_jacobi_from(t, &mut out);
    }
    out.into_iter().collect()
}

/// The 3-term relators centred at the squares of `t`.
pub fn three_term_relators_at(t: &KForest) -> Vec<ForestVector> {
    let mut out = BTreeSet::new();
    three_term_from(t, &mut out);
    out.into_iter().collect()
}

/// The dual Jacobi relators obtained from the squares of `t`.
pub fn dual_jacobi_relators_at(t: &KForest) -> Vec<ForestVector> {
    let mut out = BTreeSet::new();
    dual_jacobi_from(t, &mut out);
    out.into_iter().collect()
}

/// All 3-term relators, deduplicated up to sign.
pub fn three_term_relators(n: usize, k: usize, d: usize) -> Result<Vec<ForestVector>> {
    let mut out = BTreeSet::new();
    for t in enumerate_admissible(n, k, d, None)? {
        three_term_from(&t, &mut out);
    }
    Ok(out.into_iter().collect())
}

/// All relators dual to the generalized Jacobi identity, deduplicated up to sign.
pub fn dual_jacobi_relators(n: usize, k: usize, d: usize) -> Result<Vec<ForestVector>> {
    let mut out = BTreeSet::new();
    for t in enumerate_admissible(n, k, d, None)? {
        dual_jacobi_from(&t, &mut out);
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_of_three(d: usize) -> KForest {
        use Vertex::{Round as R, Square as S};
        KForest {
            n: 9,
            k: 3,
            d,
            squares: vec![vec![1, 2], vec![4, 5], vec![7, 8]],
            rounds: vec![3, 6, 9],
            edges: vec![(S(0), R(3)), (S(1), R(6)), (S(2), R(9)), (S(0), S(1)), (S(1), S(2))],
            orientation: vec![
                Item::Square(0),
                Item::Square(1),
                Item::Square(2),
                Item::Edge(0),
                Item::Edge(1),
                Item::Edge(2),
                Item::Edge(3),
                Item::Edge(4),
            ],
        }
    }

    #[test]
    fn no_three_term_without_three_squares() {
        assert!(three_term_relators(6, 3, 2).unwrap().is_empty());
    }

    #[test]
    fn three_term_has_three_unit_terms() {
        for d in [2, 3] {
            let t = path_of_three(d);
            t.validate().unwrap();
            let r = three_term_at(&t, 1, 0, 2);
            assert_eq!(r.len(), 3);
            assert!(r.iter().all(|(f, c)| c.abs() == 1 && f.is_valid()));
        }
    }

    #[test]
    fn dual_jacobi_summands_share_degree() {
        let rs = dual_jacobi_relators(4, 3, 2).unwrap();
        assert!(!rs.is_empty());
        for r in &rs {
            assert!(r.len() >= 2);
            let degs: BTreeSet<usize> = r.support().map(|f| f.degree()).collect();
            assert_eq!(degs.len(), 1);
        }
    }
}

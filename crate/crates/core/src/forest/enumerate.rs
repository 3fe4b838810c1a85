use std::collections::BTreeSet;

use itertools::Itertools;

use super::basis::enumerate_skeletons;
use super::{check_params, Item, KForest, UnionFind, Vertex};
use crate::error::{Error, Result};

/// Default bound on the number of forests produced by one enumeration.
pub const DEFAULT_FOREST_CAP: usize = 2_000_000;

/// Sets of disjoint `(k-1)`-subsets of `elems`, each set ordered by minimum.
fn square_sets(elems: &[usize], size: usize) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = elems.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = square_sets(rest, size);
    if rest.len() + 1 >= size {
        for others in rest.iter().copied().combinations(size - 1) {
            let remaining: Vec<usize> = rest.iter().copied().filter(|e| !others.contains(e)).collect();
            let mut sq = vec![first];
            sq.extend(others);
            for mut tail in square_sets(&remaining, size) {
                tail.insert(0, sq.clone());
                out.push(tail);
            }
        }
    }
    out
}

fn acyclic_edge_sets(s: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..s).tuple_combinations().collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let chosen: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let mut uf = UnionFind::new(s);
        if chosen.iter().all(|&(a, b)| uf.union(a, b)) {
            out.push(chosen);
        }
    }
    out
}

/// All canonical admissible forests on `{1..n}`, optionally of one degree.
pub fn enumerate_admissible(n: usize, k: usize, d: usize, degree: Option<usize>) -> Result<Vec<KForest>> {
    enumerate_admissible_capped(n, k, d, degree, DEFAULT_FOREST_CAP)
}

pub fn enumerate_admissible_capped(
    n: usize,
    k: usize,
    d: usize,
    degree: Option<usize>,
    cap: usize,
) -> Result<Vec<KForest>> {
    check_params(k, d)?;
    let elems: Vec<usize> = (1..=n).collect();
    let mut out = BTreeSet::new();
    for squares in square_sets(&elems, k - 1) {
        let s = squares.len();
        let used: BTreeSet<usize> = squares.iter().flatten().copied().collect();
        let rounds: Vec<usize> = elems.iter().copied().filter(|e| !used.contains(e)).collect();
        let sq_edges = acyclic_edge_sets(s);
        // each round is isolated (None) or hangs off one square
        let choices = std::iter::repeat((0..=s).collect::<Vec<_>>())
            .take(rounds.len())
            .multi_cartesian_product();
        let assignments: Vec<Vec<usize>> = if rounds.is_empty() {
            vec![Vec::new()]
        } else {
            choices.collect()
        };
        for assign in assignments {
            if (0..s).any(|i| !assign.contains(&(i + 1))) {
                continue;
            }
            for sq_e in &sq_edges {
                let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
                for (&r, &a) in rounds.iter().zip(&assign) {
                    if a > 0 {
                        let sq = Vertex::Square(a - 1);
                        if squares[a - 1][0] < r {
                            edges.push((sq, Vertex::Round(r)));
                        } else {
                            edges.push((Vertex::Round(r), sq));
                        }
                    }
                }
                edges.extend(sq_e.iter().map(|&(a, b)| (Vertex::Square(a), Vertex::Square(b))));
                let mut orientation: Vec<Item> = (0..s).map(Item::Square).collect();
                orientation.extend((0..edges.len()).map(Item::Edge));
                let f = KForest {
                    n,
                    k,
                    d,
                    squares: squares.clone(),
                    rounds: rounds.clone(),
                    edges,
                    orientation,
                };
                if degree.is_some_and(|g| f.degree() != g) {
                    continue;
                }
                let (c, _) = f.canonicalize_raw();
                out.insert(c);
                if out.len() > cap {
                    return Err(Error::ResourceLimit(format!(
                        "more than {cap} forests for n = {n}, k = {k}"
                    )));
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The distinguished cohomology basis, aligned index by index with the
/// homology basis and sorted by degree.
pub fn enumerate_cohomology_basis(n: usize, k: usize, d: usize) -> Result<Vec<KForest>> {
    check_params(k, d)?;
    Ok(enumerate_skeletons(n, k, d)
        .iter()
        .map(|s| s.forest(n, k, d))
        .collect())
}

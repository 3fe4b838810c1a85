//! Cup products of forest cocycles.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exact::{koszul_sign, sign_pow, FormalSum};
use crate::forest::{enumerate_admissible, ForestSpace, ForestVector, Item, KForest, Vertex};
use crate::homology::{coproduct_of_basis, psi, HomologyContext};

/// How the superposition of two forests looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Superposition {
    /// Two squares share an element.
    Overlap,
    /// The union has a cycle (possibly two parallel edges).
    Cycle,
    /// Some square has no round neighbour.
    SquareWithoutRound,
    /// Some round vertex has two neighbours.
    Bivalent,
    Admissible,
}

/// The union of `t1` and `t2` with concatenated orientation, or the reason it
/// is zero.
pub fn superpose(t1: &KForest, t2: &KForest) -> Result<(Superposition, Option<KForest>)> {
    if (t1.n, t1.k, t1.d) != (t2.n, t2.k, t2.d) {
        return Err(Error::ContextMismatch(format!(
            "product of forests on (n,k,d)=({},{},{}) and ({},{},{})",
            t1.n, t1.k, t1.d, t2.n, t2.k, t2.d
        )));
    }
    t1.validate()?;
    t2.validate()?;
    let in1: BTreeSet<usize> = t1.squares.iter().flatten().copied().collect();
    if t2.squares.iter().flatten().any(|e| in1.contains(e)) {
        return Ok((Superposition::Overlap, None));
    }
    let s1 = t1.squares.len();
    let mut owner: BTreeMap<usize, Vertex> = BTreeMap::new();
    for (i, sq) in t1.squares.iter().chain(&t2.squares).enumerate() {
        for &e in sq {
            owner.insert(e, Vertex::Square(i));
        }
    }
    let at = |v: Vertex, shift: usize| match v {
        Vertex::Square(i) => Vertex::Square(i + shift),
        Vertex::Round(e) => owner.get(&e).copied().unwrap_or(Vertex::Round(e)),
    };
    let mut edges: Vec<(Vertex, Vertex)> = t1.edges.iter().map(|&(a, b)| (at(a, 0), at(b, 0))).collect();
    edges.extend(t2.edges.iter().map(|&(a, b)| (at(a, s1), at(b, s1))));
    let e1 = t1.edges.len();
    let mut orientation = t1.orientation.clone();
    orientation.extend(t2.orientation.iter().map(|it| match *it {
        Item::Square(i) => Item::Square(i + s1),
        Item::Edge(i) => Item::Edge(i + e1),
    }));
    let f = KForest {
        n: t1.n,
        k: t1.k,
        d: t1.d,
        squares: t1.squares.iter().chain(&t2.squares).cloned().collect(),
        rounds: (1..=t1.n).filter(|e| !owner.contains_key(e)).collect(),
        edges,
        orientation,
    };
    let kind = if f.has_cycle() {
        Superposition::Cycle
    } else if (0..f.squares.len()).any(|i| f.square_rounds(i).is_empty()) {
        Superposition::SquareWithoutRound
    } else if f.rounds.iter().any(|&r| f.valence(Vertex::Round(r)) > 1) {
        Superposition::Bivalent
    } else {
        Superposition::Admissible
    };
    Ok((kind, Some(f)))
}

fn other_end(e: (Vertex, Vertex), v: Vertex) -> Vertex {
    if e.0 == v {
        e.1
    } else {
        e.0
    }
}

/// Rewrites a forest whose rounds may have several square neighbours as a
/// sum of admissible forests, using the 3-term relation around each such
/// round.
pub fn reduce_bivalent(f: &KForest) -> Result<ForestVector> {
    let mut out = FormalSum::new();
    let mut stack = vec![(f.clone(), 1i64)];
    while let Some((t, c)) = stack.pop() {
        if (0..t.squares.len()).any(|i| t.square_rounds(i).is_empty()) {
            continue;
        }
        let Some(&r) = t.rounds.iter().find(|&&r| t.valence(Vertex::Round(r)) > 1) else {
            let (canon, s) = t.canonical_form()?;
            out.add_term(canon, c * s);
            continue;
        };
        let rv = Vertex::Round(r);
        let touching: Vec<usize> = t
            .orientation
            .iter()
            .filter_map(|it| match *it {
                Item::Edge(i) if t.edges[i].0 == rv || t.edges[i].1 == rv => Some(i),
                _ => None,
            })
            .collect();
        // with more than two neighbours, each step lowers the valence by one
        let (ea, eb) = (touching[0], touching[1]);
        let a = other_end(t.edges[ea], rv);
        let b = other_end(t.edges[eb], rv);
        // move both edges to the end and orient them away from r
        let degrees: Vec<usize> = t.orientation.iter().map(|&it| t.item_degree(it)).collect();
        let mut order: Vec<usize> = (0..t.orientation.len())
            .filter(|&p| !matches!(t.orientation[p], Item::Edge(i) if i == ea || i == eb))
            .collect();
        let pa = t.orientation.iter().position(|&it| it == Item::Edge(ea)).expect("edge listed");
        let pb = t.orientation.iter().position(|&it| it == Item::Edge(eb)).expect("edge listed");
        order.push(pa);
        order.push(pb);
        let mut sign = koszul_sign(&degrees, &order);
        for e in [ea, eb] {
            if t.edges[e].0 != rv {
                sign *= sign_pow(t.d);
            }
        }
        let base: Vec<Item> = order[..order.len() - 2].iter().map(|&p| t.orientation[p]).collect();
        let build = |first: (Vertex, Vertex), second: (Vertex, Vertex)| {
            let mut g = t.clone();
            g.edges[ea] = first;
            g.edges[eb] = second;
            g.orientation = base.clone();
            g.orientation.push(Item::Edge(ea));
            g.orientation.push(Item::Edge(eb));
            g
        };
        stack.push((build((rv, a), (a, b)), c * sign));
        stack.push((build((rv, b), (b, a)), c * sign * sign_pow(t.d - 1)));
    }
    Ok(out)
}

/// `T1 · T2`.
pub fn product(t1: &KForest, t2: &KForest) -> Result<ForestVector> {
    match superpose(t1, t2)? {
        (Superposition::Admissible | Superposition::Bivalent, Some(f)) => reduce_bivalent(&f),
        _ => Ok(FormalSum::new()),
    }
}

pub fn product_vectors(a: &ForestVector, b: &ForestVector) -> Result<ForestVector> {
    let mut out = FormalSum::new();
    for (x, cx) in a.iter() {
        for (y, cy) in b.iter() {
            out.add_assign_scaled(&product(x, y)?, cx * cy);
        }
    }
    Ok(out)
}

/// Checks `⟨T1·T2, B⟩ = Σ ⟨T1, B′⟩⟨T2, B″⟩` over `ΔB` for all basis
/// forests `T1`, `T2` and basis classes `B` of matching degree. Returns the
/// number of triples checked and how many were nonzero.
pub fn verify_duality(n: usize, k: usize, d: usize) -> Result<(usize, usize)> {
    let ctx = HomologyContext::new(n, k, d)?;
    let m = ctx.basis().len();
    let psis = ctx
        .basis()
        .iter()
        .map(|b| psi(b, k, d))
        .collect::<Result<Vec<_>>>()?;
    let deltas = (0..m)
        .map(|i| coproduct_of_basis(&ctx, i))
        .collect::<Result<Vec<_>>>()?;
    let (mut checked, mut nonzero) = (0, 0);
    for a in 0..m {
        let (fa, sa) = &ctx.cobasis()[a];
        for b in 0..m {
            let (fb, sb) = &ctx.cobasis()[b];
            let prod = product(fa, fb)?.scale(sa * sb);
            for &c in ctx.indices_in_degree(ctx.degree_of(a) + ctx.degree_of(b)) {
                let lhs = prod.dot(&psis[c]);
                let rhs = deltas[c].coeff(&(a, b));
                if lhs != rhs {
                    return Err(fail(format!(
                        "duality fails for forests {a}, {b} against {}: {lhs} vs {rhs}",
                        ctx.basis()[c]
                    )));
                }
                checked += 1;
                if lhs != 0 {
                    nonzero += 1;
                }
            }
        }
    }
    Ok((checked, nonzero))
}

/// `T1·T2 = (−1)^{|T1||T2|} T2·T1` in cohomology.
pub fn commutes(space: &ForestSpace, t1: &KForest, t2: &KForest) -> Result<bool> {
    let lhs = space.reduce(&product(t1, t2)?)?;
    let rhs = space.reduce(&product(t2, t1)?)?;
    Ok(lhs == rhs.scale(sign_pow(t1.degree() * t2.degree())))
}

/// `(T1·T2)·T3 = T1·(T2·T3)` in cohomology.
pub fn associates(space: &ForestSpace, t1: &KForest, t2: &KForest, t3: &KForest) -> Result<bool> {
    let v1 = t1.to_vector()?;
    let v3 = t3.to_vector()?;
    let lhs = product_vectors(&product(t1, t2)?, &v3)?;
    let rhs = product_vectors(&v1, &product(t2, t3)?)?;
    Ok(space.reduce(&lhs)? == space.reduce(&rhs)?)
}

/// Counts of the checks made by [`verify_quadratic_presentation`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticReport {
    pub generators: usize,
    pub overlapping_pairs: usize,
    pub cyclic_pairs: usize,
    pub roundless_pairs: usize,
    pub edge_transfers: usize,
    pub bivalent_pairs: usize,
    pub factored_basis_forests: usize,
}

fn fail(msg: String) -> Error {
    Error::Verification(msg)
}

/// `t` with edge `e` moved to the end of the orientation, and the sign.
fn edge_last(t: &KForest, e: usize) -> (KForest, i64) {
    let degrees: Vec<usize> = t.orientation.iter().map(|&it| t.item_degree(it)).collect();
    let p = t.orientation.iter().position(|&it| it == Item::Edge(e)).expect("edge listed");
    let mut order: Vec<usize> = (0..t.orientation.len()).filter(|&q| q != p).collect();
    order.push(p);
    let mut g = t.clone();
    g.orientation = order.iter().map(|&q| t.orientation[q]).collect();
    (g, koszul_sign(&degrees, &order))
}

fn remove_edge(t: &KForest, e: usize) -> KForest {
    let mut g = t.clone();
    g.edges.remove(e);
    g.orientation = t
        .orientation
        .iter()
        .filter(|&&it| it != Item::Edge(e))
        .map(|&it| match it {
            Item::Edge(i) if i > e => Item::Edge(i - 1),
            other => other,
        })
        .collect();
    g
}

fn add_edge_first(t: &KForest, edge: (Vertex, Vertex)) -> KForest {
    let mut g = t.clone();
    g.orientation.insert(0, Item::Edge(g.edges.len()));
    g.edges.push(edge);
    g
}

/// One-square generators whose product is the given basis forest, in order.
/// A square-square edge `A -> B` becomes the edge from `A` to the round
/// `min B` in the generator of `A`.
pub fn factor_into_generators(t: &KForest) -> Vec<KForest> {
    (0..t.squares.len())
        .map(|i| {
            let mut g = KForest {
                n: t.n,
                k: t.k,
                d: t.d,
                squares: vec![t.squares[i].clone()],
                rounds: (1..=t.n).filter(|e| !t.squares[i].contains(e)).collect(),
                edges: Vec::new(),
                orientation: vec![Item::Square(0)],
            };
            for it in &t.orientation {
                let Item::Edge(e) = *it else { continue };
                let (a, b) = t.edges[e];
                let to_gen = |v: Vertex| match v {
                    Vertex::Square(j) if j == i => Vertex::Square(0),
                    Vertex::Square(j) => Vertex::Round(t.squares[j][0]),
                    r => r,
                };
                let owned = match (a, b) {
                    (Vertex::Square(x), Vertex::Square(_)) => x == i,
                    (Vertex::Square(x), _) | (_, Vertex::Square(x)) => x == i,
                    _ => false,
                };
                if owned {
                    g.orientation.push(Item::Edge(g.edges.len()));
                    g.edges.push((to_gen(a), to_gen(b)));
                }
            }
            g
        })
        .collect()
}

/// Checks relations (2)-(6) of the quadratic presentation on every pair of
/// one-square generators, and that every basis forest is a product of
/// generators.
pub fn verify_quadratic_presentation(n: usize, k: usize, d: usize) -> Result<QuadraticReport> {
    let space = ForestSpace::new(n, k, d)?;
    let gens: Vec<KForest> = enumerate_admissible(n, k, d, None)?
        .into_iter()
        .filter(|f| f.squares.len() == 1)
        .collect();
    let mut rep = QuadraticReport {
        generators: gens.len(),
        ..Default::default()
    };
    for t1 in &gens {
        for t2 in &gens {
            let (kind, sup) = superpose(t1, t2)?;
            let p = product(t1, t2)?;
            match kind {
                Superposition::Overlap | Superposition::Cycle | Superposition::SquareWithoutRound => {
                    if !p.is_zero() {
                        return Err(fail(format!("{t1} * {t2} should vanish ({kind:?})")));
                    }
                    match kind {
                        Superposition::Overlap => rep.overlapping_pairs += 1,
                        Superposition::Cycle => rep.cyclic_pairs += 1,
                        _ => rep.roundless_pairs += 1,
                    }
                }
                Superposition::Admissible => {
                    let (u, s) = sup.expect("superposition").canonical_form()?;
                    if p != FormalSum::from_term(u, s) {
                        return Err(fail(format!("{t1} * {t2} is not the superposition")));
                    }
                }
                Superposition::Bivalent => {
                    let q = product(t2, t1)?;
                    let lhs = space.reduce(&p)?;
                    let rhs = space.reduce(&q)?.scale(sign_pow(t1.degree() * t2.degree()));
                    if lhs != rhs {
                        return Err(fail(format!("{t1} * {t2} is not graded commutative")));
                    }
                    rep.bivalent_pairs += 1;
                }
            }
            if kind == Superposition::Overlap {
                continue;
            }
            // edge transfer: an edge of t1 from its square to an element of t2's square
            let b_elems = &t2.squares[0];
            for (ei, &(x, y)) in t1.edges.iter().enumerate() {
                let (j, towards) = match (x, y) {
                    (Vertex::Square(0), Vertex::Round(j)) => (j, true),
                    (Vertex::Round(j), Vertex::Square(0)) => (j, false),
                    _ => continue,
                };
                if !b_elems.contains(&j) {
                    continue;
                }
                for &i in &t1.squares[0] {
                    let (t1_last, s) = edge_last(t1, ei);
                    let stripped = remove_edge(&t1_last, ei);
                    let e = if towards {
                        (Vertex::Round(i), Vertex::Square(0))
                    } else {
                        (Vertex::Square(0), Vertex::Round(i))
                    };
                    let grown = add_edge_first(t2, e);
                    if !stripped.is_valid() || !grown.is_valid() {
                        continue;
                    }
                    let lhs = product(t1, t2)?;
                    let rhs = product(&stripped, &grown)?.scale(s);
                    if space.reduce(&lhs)? != space.reduce(&rhs)? {
                        return Err(fail(format!("edge transfer fails for {t1} * {t2}")));
                    }
                    rep.edge_transfers += 1;
                }
            }
        }
    }
    for (i, b) in space.basis().iter().enumerate() {
        if b.squares.is_empty() {
            continue;
        }
        let gens = factor_into_generators(b);
        let mut acc = gens[0].to_vector()?;
        for g in &gens[1..] {
            acc = product_vectors(&acc, &g.to_vector()?)?;
        }
        let coords = space.reduce(&acc)?;
        if coords.len() != 1 || coords.coeff(&i).abs() != 1 {
            return Err(fail(format!("basis forest {b} is not a product of its generators")));
        }
        rep.factored_basis_forests += 1;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::enumerate_cohomology_basis;

    fn generator(n: usize, sq: &[usize], round: usize, d: usize) -> KForest {
        KForest {
            n,
            k: 3,
            d,
            squares: vec![sq.to_vec()],
            rounds: (1..=n).filter(|e| !sq.contains(e)).collect(),
            edges: vec![(Vertex::Square(0), Vertex::Round(round))],
            orientation: vec![Item::Square(0), Item::Edge(0)],
        }
    }

    #[test]
    fn overlapping_squares_vanish() {
        let a = generator(4, &[1, 2], 4, 2);
        let b = generator(4, &[1, 3], 4, 2);
        assert!(product(&a, &b).unwrap().is_zero());
        assert!(product(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn disjoint_generators_superpose() {
        let a = generator(6, &[1, 2], 3, 2);
        let b = generator(6, &[4, 5], 6, 2);
        let p = product(&a, &b).unwrap();
        assert_eq!(p.len(), 1);
        let (f, c) = p.iter().next().unwrap();
        assert_eq!(c, 1);
        assert_eq!(f.squares, vec![vec![1, 2], vec![4, 5]]);
    }

    fn star(n: usize, sq: &[usize], rounds: &[usize], d: usize) -> KForest {
        let mut t = generator(n, sq, rounds[0], d);
        for &r in &rounds[1..] {
            t.orientation.push(Item::Edge(t.edges.len()));
            t.edges.push((Vertex::Square(0), Vertex::Round(r)));
        }
        t
    }

    #[test]
    fn bivalent_round_reduction() {
        // each square keeps a private round, so both terms survive
        let a = star(7, &[1, 2], &[5, 6], 2);
        let b = star(7, &[3, 4], &[5, 7], 2);
        assert_eq!(product(&a, &b).unwrap().len(), 2);
        // here the second square loses its only round in both terms
        let a = generator(5, &[1, 2], 5, 2);
        let b = generator(5, &[3, 4], 5, 2);
        assert!(product(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn basis_forests_factor() {
        let basis = enumerate_cohomology_basis(6, 3, 3).unwrap();
        let two = basis.iter().find(|b| b.squares.len() == 2 && b.edges.len() == 3).unwrap();
        let g = factor_into_generators(two);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|x| x.is_valid()));
    }

    #[test]
    fn duality_small() {
        let (checked, nonzero) = verify_duality(4, 3, 2).unwrap();
        assert!(nonzero > 0 && checked >= nonzero);
    }

    #[test]
    fn presentation_small() {
        let r = verify_quadratic_presentation(5, 3, 2).unwrap();
        assert!(r.generators > 0 && r.bivalent_pairs > 0);
    }
}

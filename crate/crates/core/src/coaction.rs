//! Left and right coactions of the cohomology of configuration spaces on
//! forest cohomology. Blocks are consecutive: block `s` holds the next
//! `sizes[s]` elements.

use crate::error::{Error, Result};
use crate::exact::{koszul_sign, FormalSum};
use crate::expr::BracketExpr;
use crate::forest::{enumerate_admissible, ForestVector, Item, KForest, Vertex};
use crate::homology::psi;
use crate::plain::{plain_psi, PlainForest};
use crate::ring::reduce_bivalent;

pub type LeftTerm = (PlainForest, Vec<KForest>);
pub type RightTerm = (KForest, Vec<PlainForest>);

struct Blocks {
    of: Vec<usize>,
    offset: Vec<usize>,
}

impl Blocks {
    fn new(n: usize, sizes: &[usize]) -> Result<Blocks> {
        if sizes.iter().sum::<usize>() != n {
            return Err(Error::Malformed(format!(
                "block sizes {sizes:?} do not add up to n = {n}"
            )));
        }
        let mut of = vec![usize::MAX; n + 1];
        let mut offset = Vec::with_capacity(sizes.len());
        let mut next = 1;
        for (s, &m) in sizes.iter().enumerate() {
            offset.push(next - 1);
            for e in next..next + m {
                of[e] = s;
            }
            next += m;
        }
        Ok(Blocks { of, offset })
    }

    fn local(&self, e: usize) -> usize {
        e - self.offset[self.of[e]]
    }
}

/// Koszul sign of regrouping the orientation of `t` by `group[position]`,
/// keeping the inherited order inside each group.
fn regroup_sign(t: &KForest, group: &[usize]) -> i64 {
    let degrees: Vec<usize> = t.orientation.iter().map(|&it| t.item_degree(it)).collect();
    let mut order: Vec<usize> = (0..group.len()).collect();
    order.sort_by_key(|&p| group[p]);
    koszul_sign(&degrees, &order)
}

/// `T ↦ ±(T/∼) ⊗ T_1 ⊗ … ⊗ T_n` into plain forests on the blocks and
/// forests on each block. Zero if a square straddles two blocks, if the
/// quotient has a cycle, or if some `T_s` has a square without a round.
pub fn left_coaction(t: &KForest, sizes: &[usize]) -> Result<FormalSum<LeftTerm>> {
    t.validate()?;
    let bl = Blocks::new(t.n, sizes)?;
    let mut out = FormalSum::new();
    let vblock = |v: Vertex| match v {
        Vertex::Square(i) => bl.of[t.squares[i][0]],
        Vertex::Round(e) => bl.of[e],
    };
    if t
        .squares
        .iter()
        .any(|sq| sq.iter().any(|&e| bl.of[e] != bl.of[sq[0]]))
    {
        return Ok(out);
    }
    let nb = sizes.len();
    let mut quotient = PlainForest::empty(nb, t.d);
    let mut parts: Vec<KForest> = (0..nb)
        .map(|s| KForest {
            n: sizes[s],
            k: t.k,
            d: t.d,
            squares: Vec::new(),
            rounds: Vec::new(),
            edges: Vec::new(),
            orientation: Vec::new(),
        })
        .collect();
    let mut sq_local = vec![0; t.squares.len()];
    for (i, sq) in t.squares.iter().enumerate() {
        let s = bl.of[sq[0]];
        sq_local[i] = parts[s].squares.len();
        parts[s].squares.push(sq.iter().map(|&e| bl.local(e)).collect());
    }
    for &r in &t.rounds {
        parts[bl.of[r]].rounds.push(bl.local(r));
    }
    let lv = |v: Vertex| match v {
        Vertex::Square(i) => Vertex::Square(sq_local[i]),
        Vertex::Round(e) => Vertex::Round(bl.local(e)),
    };
    let mut group = Vec::with_capacity(t.orientation.len());
    for it in &t.orientation {
        match *it {
            Item::Square(i) => {
                let s = vblock(Vertex::Square(i));
                parts[s].orientation.push(Item::Square(sq_local[i]));
                group.push(s + 1);
            }
            Item::Edge(j) => {
                let (a, b) = t.edges[j];
                let (sa, sb) = (vblock(a), vblock(b));
                if sa == sb {
                    let p = &mut parts[sa];
                    p.orientation.push(Item::Edge(p.edges.len()));
                    p.edges.push((lv(a), lv(b)));
                    group.push(sa + 1);
                } else {
                    quotient.edges.push((sa + 1, sb + 1));
                    group.push(0);
                }
            }
        }
    }
    if quotient.has_cycle() {
        return Ok(out);
    }
    let mut sign = regroup_sign(t, &group);
    let (q, sq) = quotient.canonical_form();
    sign *= sq;
    let mut factors = Vec::with_capacity(nb);
    for p in parts {
        if (0..p.squares.len()).any(|i| p.square_rounds(i).is_empty()) {
            return Ok(out);
        }
        let (c, s) = p.canonical_form()?;
        sign *= s;
        factors.push(c);
    }
    out.add_term((q, factors), sign);
    Ok(out)
}

/// `T ↦ ±(T/∼) ⊗ T_1 ⊗ … ⊗ T_n` into a forest on the blocks and plain
/// forests on each block. Zero unless every square meets every block in at
/// most one element and no two squares meet the same block.
pub fn right_coaction(t: &KForest, sizes: &[usize]) -> Result<FormalSum<RightTerm>> {
    t.validate()?;
    let bl = Blocks::new(t.n, sizes)?;
    let mut out = FormalSum::new();
    let nb = sizes.len();
    // square hitting each block, and the element it uses there
    let mut hit: Vec<Option<(usize, usize)>> = vec![None; nb];
    for (i, sq) in t.squares.iter().enumerate() {
        for &e in sq {
            let s = bl.of[e];
            if hit[s].is_some() {
                return Ok(out);
            }
            hit[s] = Some((i, e));
        }
    }
    let qv = |e: usize| match hit[bl.of[e]] {
        Some((i, _)) => Vertex::Square(i),
        None => Vertex::Round(bl.of[e] + 1),
    };
    let mut quotient = KForest {
        n: nb,
        k: t.k,
        d: t.d,
        squares: t
            .squares
            .iter()
            .map(|sq| sq.iter().map(|&e| bl.of[e] + 1).collect())
            .collect(),
        rounds: (0..nb).filter(|&s| hit[s].is_none()).map(|s| s + 1).collect(),
        edges: Vec::new(),
        orientation: Vec::new(),
    };
    let mut parts: Vec<PlainForest> = sizes.iter().map(|&m| PlainForest::empty(m, t.d)).collect();
    let mut group = Vec::with_capacity(t.orientation.len());
    for it in &t.orientation {
        match *it {
            Item::Square(i) => {
                quotient.orientation.push(Item::Square(i));
                group.push(0);
            }
            Item::Edge(j) => {
                let (a, b) = t.edges[j];
                let internal = match (a, b) {
                    (Vertex::Square(i), Vertex::Round(r)) | (Vertex::Round(r), Vertex::Square(i)) => {
                        match hit[bl.of[r]] {
                            Some((owner, e)) if owner == i => Some((r, e)),
                            _ => None,
                        }
                    }
                    _ => None,
                };
                if let Some((r, e)) = internal {
                    let s = bl.of[r];
                    let edge = if matches!(a, Vertex::Square(_)) {
                        (bl.local(e), bl.local(r))
                    } else {
                        (bl.local(r), bl.local(e))
                    };
                    parts[s].edges.push(edge);
                    group.push(s + 1);
                } else {
                    let map = |v: Vertex| match v {
                        Vertex::Square(i) => Vertex::Square(i),
                        Vertex::Round(r) => qv(r),
                    };
                    quotient.orientation.push(Item::Edge(quotient.edges.len()));
                    quotient.edges.push((map(a), map(b)));
                    group.push(0);
                }
            }
        }
    }
    if quotient.has_cycle() || quotient.edges.iter().any(|(a, b)| a == b) {
        return Ok(out);
    }
    let mut sign = regroup_sign(t, &group);
    let mut factors = Vec::with_capacity(nb);
    for p in parts {
        let (c, s) = p.canonical_form();
        sign *= s;
        factors.push(c);
    }
    for (q, c) in reduce_bivalent(&quotient)?.iter() {
        out.add_term((q.clone(), factors.clone()), c * sign);
    }
    Ok(out)
}

/// Items of `outer` in `Ψ` order labeled 0, with slot `i` standing for the
/// items of the `i`-th argument.
fn composite_word(e: &BracketExpr, degs: &[usize], k: usize, d: usize, out: &mut Vec<(usize, usize)>) {
    match e {
        BracketExpr::Unit => {}
        BracketExpr::Var(i) => out.push((degs[i - 1], *i)),
        BracketExpr::Prod(fs) => fs.iter().for_each(|f| composite_word(f, degs, k, d, out)),
        BracketExpr::Br(a, b) => {
            composite_word(a, degs, k, d, out);
            out.push((d - 1, 0));
            composite_word(b, degs, k, d, out);
        }
        BracketExpr::Long(args) => {
            out.push(((k - 1) * d - 1, 0));
            args.iter().for_each(|a| composite_word(a, degs, k, d, out));
        }
    }
}

/// Sign relating `Ψ` of a composite to the product of the pairings of its
/// pieces: the slot-order sign of the substitution times the sign of
/// regrouping the composite's items into outer, first argument, second, ...
fn composite_sign(outer: &BracketExpr, degs: &[usize], k: usize, d: usize) -> i64 {
    let slots: Vec<usize> = outer.vars().iter().map(|&i| i - 1).collect();
    let mut word = Vec::new();
    composite_word(outer, degs, k, d, &mut word);
    let wdegs: Vec<usize> = word.iter().map(|w| w.0).collect();
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&p| word[p].1);
    koszul_sign(degs, &slots) * koszul_sign(&wdegs, &order)
}

/// `Ψ(B ∘ (p_1, …, p_n))` computed from the right coaction, for a class `B`
/// on `n` letters and Lie-type expressions `p_s` on `1..m_s`.
pub fn psi_via_right_coaction(outer: &BracketExpr, args: &[BracketExpr], k: usize, d: usize) -> Result<ForestVector> {
    let n = outer.check_linear()?;
    if n != args.len() {
        return Err(Error::Malformed(format!("{n} inputs but {} arguments", args.len())));
    }
    let sizes: Vec<usize> = args.iter().map(|a| a.check_linear()).collect::<Result<_>>()?;
    let total: usize = sizes.iter().sum();
    let psi_outer = psi(outer, k, d)?;
    let psi_args: Vec<_> = args.iter().map(|a| plain_psi(a, d)).collect::<Result<_>>()?;
    let arg_degs: Vec<usize> = args.iter().map(|a| a.degree(d)).collect();
    let outer_deg = outer.degree(d);
    let sign = composite_sign(outer, &arg_degs, k, d);
    let degree = outer_deg + arg_degs.iter().sum::<usize>();
    let mut out = FormalSum::new();
    for t in enumerate_admissible(total, k, d, Some(degree))? {
        let mut value = 0;
        for ((q, ps), c) in right_coaction(&t, &sizes)?.iter() {
            let mut v = c * psi_outer.coeff(q);
            for (p, pa) in ps.iter().zip(&psi_args) {
                if v == 0 {
                    break;
                }
                v *= pa.coeff(p);
            }
            value += v;
        }
        out.add_term(t, value * sign);
    }
    Ok(out)
}

/// `Ψ(p ∘ (B_1, …, B_n))` computed from the left coaction, for a Lie-type
/// operation `p` and classes `B_s` on `1..m_s`.
pub fn psi_via_left_coaction(outer: &BracketExpr, args: &[BracketExpr], k: usize, d: usize) -> Result<ForestVector> {
    let n = outer.check_linear()?;
    if n != args.len() {
        return Err(Error::Malformed(format!("{n} inputs but {} arguments", args.len())));
    }
    let sizes: Vec<usize> = args.iter().map(|a| a.check_linear()).collect::<Result<_>>()?;
    let total: usize = sizes.iter().sum();
    let psi_outer = plain_psi(outer, d)?;
    let psi_args: Vec<_> = args.iter().map(|a| psi(a, k, d)).collect::<Result<_>>()?;
    let arg_degs: Vec<usize> = args.iter().map(|a| a.degree(d)).collect();
    let outer_deg = outer.degree(d);
    let sign = composite_sign(outer, &arg_degs, k, d);
    let degree = outer_deg + arg_degs.iter().sum::<usize>();
    let mut out = FormalSum::new();
    for t in enumerate_admissible(total, k, d, Some(degree))? {
        let mut value = 0;
        for ((q, ts), c) in left_coaction(&t, &sizes)?.iter() {
            let mut v = c * psi_outer.coeff(q);
            for (f, pa) in ts.iter().zip(&psi_args) {
                if v == 0 {
                    break;
                }
                v *= pa.coeff(f);
            }
            value += v;
        }
        out.add_term(t, value * sign);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: usize, d: usize) -> KForest {
        KForest {
            n,
            k: 3,
            d,
            squares: vec![vec![1, 2]],
            rounds: (3..=n).collect(),
            edges: vec![(Vertex::Square(0), Vertex::Round(3))],
            orientation: vec![Item::Square(0), Item::Edge(0)],
        }
    }

    #[test]
    fn singleton_blocks_are_trivial() {
        let t = tree(4, 2);
        let l = left_coaction(&t, &[4]).unwrap();
        assert_eq!(l.len(), 1);
        let r = right_coaction(&t, &[1, 1, 1, 1]).unwrap();
        let ((q, ps), c) = r.iter().next().unwrap();
        assert_eq!((q, c), (&t, 1));
        assert!(ps.iter().all(|p| p.edges.is_empty()));
    }

    #[test]
    fn straddling_square_vanishes_on_the_left() {
        assert!(left_coaction(&tree(4, 2), &[1, 3]).unwrap().is_zero());
    }

    #[test]
    fn two_square_elements_in_a_block_vanish_on_the_right() {
        assert!(right_coaction(&tree(4, 2), &[2, 1, 1]).unwrap().is_zero());
    }

    #[test]
    fn bad_sizes() {
        assert!(left_coaction(&tree(4, 2), &[1, 1]).is_err());
    }
}

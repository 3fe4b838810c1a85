//! The map sending a homology class to the formal sum of forests it pairs
//! with. Built recursively from the values on generators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{sign_pow, FormalSum};
use crate::expr::BracketExpr;
use crate::forest::{check_params, ForestVector, Item, KForest, Vertex};

/// A forest under construction: squares, rounds, edges, orientation, with
/// square and edge indices local to the term.
#[derive(Clone, Debug, Default)]
pub(crate) struct Raw {
    pub squares: Vec<Vec<usize>>,
    pub rounds: Vec<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub orientation: Vec<Item>,
}

impl Raw {
    fn round(i: usize) -> Raw {
        Raw {
            rounds: vec![i],
            ..Raw::default()
        }
    }

    fn shift(&self, sq: usize, ed: usize) -> Raw {
        let mv = |v: Vertex| match v {
            Vertex::Square(i) => Vertex::Square(i + sq),
            r => r,
        };
        Raw {
            squares: self.squares.clone(),
            rounds: self.rounds.clone(),
            edges: self.edges.iter().map(|&(a, b)| (mv(a), mv(b))).collect(),
            orientation: self
                .orientation
                .iter()
                .map(|it| match *it {
                    Item::Square(i) => Item::Square(i + sq),
                    Item::Edge(i) => Item::Edge(i + ed),
                })
                .collect(),
        }
    }

    /// Disjoint union; `middle` edges (already in joined indexing) go between
    /// the two orientations.
    fn join(a: &Raw, b: &Raw, middle: &[(Vertex, Vertex)]) -> Raw {
        let mid_start = a.edges.len();
        let b = b.shift(a.squares.len(), mid_start + middle.len());
        let mut out = a.clone();
        out.squares.extend(b.squares);
        out.rounds.extend(b.rounds);
        for (i, &(x, y)) in middle.iter().enumerate() {
            out.edges.push((x, y));
            out.orientation.push(Item::Edge(mid_start + i));
        }
        out.edges.extend(b.edges);
        out.orientation.extend(b.orientation);
        out
    }

    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.squares.len())
            .map(Vertex::Square)
            .chain(self.rounds.iter().map(|&r| Vertex::Round(r)))
    }

    fn round_is_free(&self, r: usize) -> bool {
        !self
            .edges
            .iter()
            .any(|&(a, b)| a == Vertex::Round(r) || b == Vertex::Round(r))
    }

    pub(crate) fn into_forest(self, n: usize, k: usize, d: usize) -> KForest {
        KForest {
            n,
            k,
            d,
            squares: self.squares,
            rounds: self.rounds,
            edges: self.edges,
            orientation: self.orientation,
        }
    }
}

type Terms = Vec<(Raw, i64)>;

fn psi_terms(e: &BracketExpr, k: usize, d: usize) -> Result<Terms> {
    Ok(match e {
        BracketExpr::Unit => vec![(Raw::default(), 1)],
        BracketExpr::Var(i) => vec![(Raw::round(*i), 1)],
        BracketExpr::Long(args) => {
            if args.len() != k {
                return Err(Error::Malformed(format!(
                    "long bracket of arity {} with k = {k}",
                    args.len()
                )));
            }
            let mut idx = Vec::with_capacity(k);
            for a in args {
                match a {
                    BracketExpr::Var(i) => idx.push(*i),
                    other => {
                        return Err(Error::Unsupported(format!(
                            "long bracket argument {other} is not a variable; normalize first"
                        )))
                    }
                }
            }
            (0..k)
                .map(|l| {
                    let raw = Raw {
                        squares: vec![idx.iter().enumerate().filter(|&(m, _)| m != l).map(|(_, &x)| x).collect()],
                        rounds: vec![idx[l]],
                        edges: vec![(Vertex::Square(0), Vertex::Round(idx[l]))],
                        orientation: vec![Item::Square(0), Item::Edge(0)],
                    };
                    (raw, sign_pow(l * d))
                })
                .collect()
        }
        BracketExpr::Prod(fs) => {
            let mut acc: Terms = vec![(Raw::default(), 1)];
            for f in fs {
                let rhs = psi_terms(f, k, d)?;
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for (a, ca) in &acc {
                    for (b, cb) in &rhs {
                        next.push((Raw::join(a, b, &[]), ca * cb));
                    }
                }
                acc = next;
            }
            acc
        }
        BracketExpr::Br(l, r) => {
            let left = psi_terms(l, k, d)?;
            let right = psi_terms(r, k, d)?;
            let mut out = Vec::new();
            for (a, ca) in &left {
                for (b, cb) in &right {
                    for v1 in a.vertices() {
                        if let Vertex::Round(x) = v1 {
                            if !a.round_is_free(x) {
                                continue;
                            }
                        }
                        for v2 in b.vertices() {
                            let bv2 = match v2 {
                                Vertex::Round(y) => {
                                    if matches!(v1, Vertex::Round(_)) || !b.round_is_free(y) {
                                        continue;
                                    }
                                    v2
                                }
                                Vertex::Square(j) => Vertex::Square(j + a.squares.len()),
                            };
                            out.push((Raw::join(a, b, &[(v1, bv2)]), ca * cb));
                        }
                    }
                }
            }
            out
        }
    })
}

/// `Ψ(e)` for a linear expression on `x1..xn`, as canonical forests.
pub fn psi(e: &BracketExpr, k: usize, d: usize) -> Result<ForestVector> {
    check_params(k, d)?;
    let n = e.check_linear()?;
    let mut out = FormalSum::new();
    for (raw, c) in psi_terms(e, k, d)? {
        let (f, s) = raw.into_forest(n, k, d).canonicalize_raw();
        out.add_term(f, c * s);
    }
    Ok(out)
}

/// `⟨T, e⟩`. Zero when the degrees differ.
pub fn pair(t: &KForest, e: &BracketExpr) -> Result<i64> {
    let (canon, s) = t.canonical_form()?;
    let n = e.check_linear()?;
    if n != t.n {
        return Err(Error::ContextMismatch(format!(
            "forest on {} letters paired with expression on {n}",
            t.n
        )));
    }
    if t.degree() != e.degree(t.d) {
        return Ok(0);
    }
    Ok(s * psi(e, t.k, t.d)?.coeff(&canon))
}

/// `⟨v, e⟩` for a vector given `Ψ(e)`.
pub fn pair_with_psi(v: &ForestVector, psi_e: &ForestVector) -> i64 {
    v.dot(psi_e)
}

/// Pairing matrix between cohomology forests (rows) and homology classes.
pub fn pairing_matrix(forests: &[KForest], classes: &[BracketExpr]) -> Result<Vec<Vec<i64>>> {
    let Some(first) = forests.first() else {
        return Ok(Vec::new());
    };
    let (k, d) = (first.k, first.d);
    let psis: Vec<ForestVector> = classes.iter().map(|c| psi(c, k, d)).collect::<Result<_>>()?;
    let rows: Vec<ForestVector> = forests.iter().map(|f| f.to_vector()).collect::<Result<_>>()?;
    Ok(rows
        .iter()
        .map(|r| psis.iter().map(|p| r.dot(p)).collect())
        .collect())
}

/// Groups a list of items by degree, keeping positions.
pub(crate) fn by_degree<T>(items: &[T], deg: impl Fn(&T) -> usize) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, x) in items.iter().enumerate() {
        out.entry(deg(x)).or_default().push(i);
    }
    out
}

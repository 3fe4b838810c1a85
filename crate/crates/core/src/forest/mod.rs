//! Oriented admissible k-forests.
//!
//! A forest lives on the index set `{1..n}`. Square vertices hold `k-1`
//! elements in a chosen order, round vertices hold one element. The
//! orientation lists every square and every edge once; squares have degree
//! `(k-2)d` and edges have degree `d-1`.

mod basis;
mod enumerate;
mod json;
mod relators;
mod space;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub use basis::{enumerate_skeletons, PathPiece, Skeleton, SkeletonComponent};
pub use enumerate::{
    enumerate_admissible, enumerate_admissible_capped, enumerate_cohomology_basis,
    DEFAULT_FOREST_CAP,
};
pub use relators::{
    dual_jacobi_relators, dual_jacobi_relators_at, three_term_relators, three_term_relators_at,
};
pub use space::{cohomology_rank, reduce_to_basis, ForestSpace};

use crate::error::{Error, Result};
use crate::exact::{koszul_sign, sort_parity, FormalSum};

pub type ForestVector = FormalSum<KForest>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    /// Index into `squares`.
    Square(usize),
    /// The element held by the round vertex.
    Round(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Square(usize),
    Edge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KForest {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub squares: Vec<Vec<usize>>,
    pub rounds: Vec<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub orientation: Vec<Item>,
}

impl Ord for KForest {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.squares.len())
            .cmp(&(other.degree(), other.squares.len()))
            .then_with(|| self.squares.cmp(&other.squares))
            .then_with(|| self.rounds.cmp(&other.rounds))
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.orientation.cmp(&other.orientation))
            .then_with(|| (self.n, self.k, self.d).cmp(&(other.n, other.k, other.d)))
    }
}

impl PartialOrd for KForest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

pub(crate) fn check_params(k: usize, d: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::Unsupported(format!("k = {k}; forests need k >= 3")));
    }
    if d < 2 {
        return Err(Error::Unsupported(format!("d = {d}; forests need d >= 2")));
    }
    Ok(())
}

impl KForest {
    /// The forest of `n` isolated round vertices.
    pub fn discrete(n: usize, k: usize, d: usize) -> KForest {
        KForest {
            n,
            k,
            d,
            squares: Vec::new(),
            rounds: (1..=n).collect(),
            edges: Vec::new(),
            orientation: Vec::new(),
        }
    }

    pub fn square_degree(&self) -> usize {
        (self.k - 2) * self.d
    }

    pub fn edge_degree(&self) -> usize {
        self.d - 1
    }

    pub fn degree(&self) -> usize {
        self.edges.len() * self.edge_degree() + self.squares.len() * self.square_degree()
    }

    pub fn item_degree(&self, item: Item) -> usize {
        match item {
            Item::Square(_) => self.square_degree(),
            Item::Edge(_) => self.edge_degree(),
        }
    }

    pub fn vertex_min(&self, v: Vertex) -> usize {
        match v {
            Vertex::Square(i) => *self.squares[i].iter().min().expect("empty square"),
            Vertex::Round(e) => e,
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = (0..self.squares.len()).map(Vertex::Square).collect();
        v.extend(self.rounds.iter().map(|&r| Vertex::Round(r)));
        v
    }

    /// Elements held by a vertex.
    pub fn vertex_elements(&self, v: Vertex) -> Vec<usize> {
        match v {
            Vertex::Square(i) => self.squares[i].clone(),
            Vertex::Round(e) => vec![e],
        }
    }

    /// Maps each element to the vertex holding it.
    pub fn element_map(&self) -> BTreeMap<usize, Vertex> {
        let mut m = BTreeMap::new();
        for (i, sq) in self.squares.iter().enumerate() {
            for &e in sq {
                m.insert(e, Vertex::Square(i));
            }
        }
        for &r in &self.rounds {
            m.insert(r, Vertex::Round(r));
        }
        m
    }

    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn valence(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Round vertices adjacent to square `i`, ascending.
    pub fn square_rounds(&self, i: usize) -> Vec<usize> {
        let mut r: Vec<usize> = self
            .neighbours(Vertex::Square(i))
            .into_iter()
            .filter_map(|v| match v {
                Vertex::Round(e) => Some(e),
                _ => None,
            })
            .collect();
        r.sort_unstable();
        r
    }

    /// True if the underlying multigraph has a cycle (a repeated edge counts).
    pub fn has_cycle(&self) -> bool {
        let verts = self.vertices();
        let index: BTreeMap<Vertex, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(verts.len());
        for (a, b) in &self.edges {
            let (Some(&ia), Some(&ib)) = (index.get(a), index.get(b)) else {
                return true;
            };
            if !uf.union(ia, ib) {
                return true;
            }
        }
        false
    }

    /// Element sets of the connected components, each sorted, ordered by minimum.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n + 1);
        for sq in &self.squares {
            for w in sq.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for &(a, b) in &self.edges {
            uf.union(self.vertex_min(a), self.vertex_min(b));
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in 1..=self.n {
            groups.entry(uf.find(e)).or_default().push(e);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Checks every admissibility rule and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidForest(s.to_string()));
        check_params(self.k, self.d)?;
        if self.squares.iter().any(|s| s.len() != self.k - 1) {
            return bad("square size");
        }
        let mut seen = vec![false; self.n + 1];
        for &e in self.squares.iter().flatten().chain(self.rounds.iter()) {
            if e == 0 || e > self.n {
                return bad("element out of range");
            }
            if seen[e] {
                return bad("element multiplicity");
            }
            seen[e] = true;
        }
        if seen.iter().skip(1).any(|s| !s) {
            return bad("missing element");
        }
        for &(a, b) in &self.edges {
            for v in [a, b] {
                let ok = match v {
                    Vertex::Square(i) => i < self.squares.len(),
                    Vertex::Round(e) => self.rounds.contains(&e),
                };
                if !ok {
                    return bad("dangling edge");
                }
            }
            if a == b {
                return bad("cycle");
            }
            if matches!((a, b), (Vertex::Round(_), Vertex::Round(_))) {
                return bad("round-round edge");
            }
        }
        for &r in &self.rounds {
            if self.valence(Vertex::Round(r)) > 1 {
                return bad("round valence");
            }
        }
        if self.has_cycle() {
            return bad("cycle");
        }
        for i in 0..self.squares.len() {
            if self.square_rounds(i).is_empty() {
                return bad("square without round");
            }
        }
        let mut items = self.orientation.clone();
        items.sort();
        let mut expected: Vec<Item> = (0..self.squares.len()).map(Item::Square).collect();
        expected.extend((0..self.edges.len()).map(Item::Edge));
        if items != expected {
            return bad("orientation set");
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Canonical representative and the sign relating it to `self`.
    pub fn canonical_form(&self) -> Result<(KForest, i64)> {
        self.validate()?;
        Ok(self.canonicalize_raw())
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.canonical_form(), Ok((ref c, 1)) if c == self)
    }

    /// Canonicalisation without admissibility checks. Needs the vertices to
    /// partition `{1..n}` and the orientation to list every item once.
    pub(crate) fn canonicalize_raw(&self) -> (KForest, i64) {
        let odd_d = self.d % 2 == 1;
        let mut sign = 1i64;

        let mut squares = self.squares.clone();
        for sq in squares.iter_mut() {
            if odd_d && sort_parity(sq) == 1 {
                sign = -sign;
            }
            sq.sort_unstable();
        }
        let mut sq_order: Vec<usize> = (0..squares.len()).collect();
        sq_order.sort_by_key(|&i| squares[i][0]);
        let mut sq_new = vec![0; squares.len()];
        for (pos, &old) in sq_order.iter().enumerate() {
            sq_new[old] = pos;
        }
        let squares: Vec<Vec<usize>> = sq_order.iter().map(|&i| squares[i].clone()).collect();
        let remap = |v: Vertex| match v {
            Vertex::Square(i) => Vertex::Square(sq_new[i]),
            r => r,
        };
        let vmin = |v: Vertex| match v {
            Vertex::Square(i) => squares[i][0],
            Vertex::Round(e) => e,
        };

        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let (a, b) = (remap(a), remap(b));
            if vmin(a) > vmin(b) {
                if odd_d {
                    sign = -sign;
                }
                edges.push((b, a));
            } else {
                edges.push((a, b));
            }
        }
        let mut e_order: Vec<usize> = (0..edges.len()).collect();
        e_order.sort_by_key(|&i| (vmin(edges[i].0), vmin(edges[i].1)));
        let mut e_new = vec![0; edges.len()];
        for (pos, &old) in e_order.iter().enumerate() {
            e_new[old] = pos;
        }
        let edges: Vec<(Vertex, Vertex)> = e_order.iter().map(|&i| edges[i]).collect();

        let s = squares.len();
        let current: Vec<usize> = self
            .orientation
            .iter()
            .map(|it| match *it {
                Item::Square(i) => sq_new[i],
                Item::Edge(j) => s + e_new[j],
            })
            .collect();
        let degrees: Vec<usize> = self.orientation.iter().map(|&it| self.item_degree(it)).collect();
        let mut order = vec![0; current.len()];
        for (pos, &t) in current.iter().enumerate() {
            order[t] = pos;
        }
        sign *= koszul_sign(&degrees, &order);

        let mut rounds = self.rounds.clone();
        rounds.sort_unstable();
        let mut orientation: Vec<Item> = (0..s).map(Item::Square).collect();
        orientation.extend((0..edges.len()).map(Item::Edge));
        (
            KForest {
                n: self.n,
                k: self.k,
                d: self.d,
                squares,
                rounds,
                edges,
                orientation,
            },
            sign,
        )
    }

    /// The forest as a one-term vector in canonical form.
    pub fn to_vector(&self) -> Result<ForestVector> {
        let (c, s) = self.canonical_form()?;
        Ok(FormalSum::from_term(c, s))
    }

    /// Same forest with the edge `i` reversed; the class changes by `(-1)^d`.
    pub fn flip_edge(&self, i: usize) -> KForest {
        let mut f = self.clone();
        let (a, b) = f.edges[i];
        f.edges[i] = (b, a);
        f
    }

    /// Relabels elements through `perm` (`perm[e]` is the new label of `e`,
    /// index 0 unused). Square order inside each square is kept.
    pub fn relabel(&self, perm: &[usize]) -> KForest {
        let mut f = self.clone();
        for sq in f.squares.iter_mut() {
            for e in sq.iter_mut() {
                *e = perm[*e];
            }
        }
        for r in f.rounds.iter_mut() {
            *r = perm[*r];
        }
        f.rounds.sort_unstable();
        for (a, b) in f.edges.iter_mut() {
            for v in [a, b] {
                if let Vertex::Round(e) = v {
                    *e = perm[*e];
                }
            }
        }
        f
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

//! Forests with only round vertices: cohomology classes of the ordinary
//! configuration spaces, which appear as factors of the coactions.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{koszul_sort_sign, FormalSum};
use crate::expr::BracketExpr;
use crate::forest::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlainForest {
    pub n: usize,
    pub d: usize,
    /// Oriented edges between elements; the list order is the orientation.
    pub edges: Vec<(usize, usize)>,
}

pub type PlainVector = FormalSum<PlainForest>;

impl PlainForest {
    pub fn empty(n: usize, d: usize) -> Self {
        PlainForest { n, d, edges: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.edges.len() * (self.d - 1)
    }

    pub fn has_cycle(&self) -> bool {
        let mut uf = UnionFind::new(self.n + 1);
        !self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }

    pub fn validate(&self) -> Result<()> {
        for &(a, b) in &self.edges {
            if a == 0 || b == 0 || a > self.n || b > self.n {
                return Err(Error::InvalidForest("element out of range".into()));
            }
        }
        if self.has_cycle() {
            return Err(Error::InvalidForest("cycle".into()));
        }
        Ok(())
    }

    /// Edges oriented from the smaller element and sorted.
    pub fn canonical_form(&self) -> (PlainForest, i64) {
        let mut sign = 1;
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            if a > b {
                if self.d % 2 == 1 {
                    sign = -sign;
                }
                edges.push((b, a));
            } else {
                edges.push((a, b));
            }
        }
        sign *= koszul_sort_sign(&edges, &vec![self.d - 1; edges.len()]);
        edges.sort_unstable();
        (
            PlainForest {
                n: self.n,
                d: self.d,
                edges,
            },
            sign,
        )
    }
}

impl fmt::Display for PlainForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
        write!(f, "{{\"n\":{},\"d\":{},\"edges\":[{}]}}", self.n, self.d, edges.join(","))
    }
}

fn terms(e: &BracketExpr) -> Result<Vec<(Vec<(usize, usize)>, i64)>> {
    Ok(match e {
        BracketExpr::Unit | BracketExpr::Var(_) => vec![(Vec::new(), 1)],
        BracketExpr::Long(_) => {
            return Err(Error::Unsupported(
                "long brackets do not live in the homology of configuration spaces".into(),
            ))
        }
        BracketExpr::Prod(fs) => {
            let mut acc = vec![(Vec::new(), 1)];
            for f in fs {
                let rhs = terms(f)?;
                let mut next = Vec::new();
                for (a, ca) in &acc {
                    for (b, cb) in &rhs {
                        let mut g: Vec<(usize, usize)> = a.clone();
                        g.extend(b);
                        next.push((g, ca * cb));
                    }
                }
                acc = next;
            }
            acc
        }
        BracketExpr::Br(a, b) => {
            let (va, vb) = (a.vars(), b.vars());
            let mut out = Vec::new();
            for (ea, ca) in terms(a)? {
                for (eb, cb) in terms(b)? {
                    for &x in &va {
                        for &y in &vb {
                            let mut g = ea.clone();
                            g.push((x, y));
                            g.extend(&eb);
                            out.push((g, ca * cb));
                        }
                    }
                }
            }
            out
        }
    })
}

/// `Ψ` for products of Lie brackets on `x1..xn`.
pub fn plain_psi(e: &BracketExpr, d: usize) -> Result<PlainVector> {
    if d < 2 {
        return Err(Error::Unsupported(format!("d = {d}; forest cocycles need d >= 2")));
    }
    let n = e.check_linear()?;
    let mut out = FormalSum::new();
    for (edges, c) in terms(e)? {
        let (f, s) = PlainForest { n, d, edges }.canonical_form();
        out.add_term(f, c * s);
    }
    Ok(out)
}

pub fn plain_pair(f: &PlainForest, e: &BracketExpr) -> Result<i64> {
    f.validate()?;
    let (c, s) = f.canonical_form();
    Ok(s * plain_psi(e, f.d)?.coeff(&c))
}

/// Cocomposition for consecutive blocks: edges inside block `s` go to the
/// `s`-th factor, the others to the quotient on the blocks. Zero if the
/// quotient has a cycle or a double edge.
pub fn plain_cocompose(f: &PlainForest, sizes: &[usize]) -> Result<FormalSum<(PlainForest, Vec<PlainForest>)>> {
    f.validate()?;
    if sizes.iter().sum::<usize>() != f.n {
        return Err(Error::Malformed(format!("block sizes {sizes:?} do not add up to n = {}", f.n)));
    }
    let mut block = vec![0; f.n + 1];
    let mut offset = vec![0; sizes.len()];
    let mut next = 1;
    for (s, &m) in sizes.iter().enumerate() {
        offset[s] = next - 1;
        block[next..next + m].fill(s);
        next += m;
    }
    let mut quotient = PlainForest::empty(sizes.len(), f.d);
    let mut parts: Vec<PlainForest> = sizes.iter().map(|&m| PlainForest::empty(m, f.d)).collect();
    let mut group = Vec::with_capacity(f.edges.len());
    for &(a, b) in &f.edges {
        let (sa, sb) = (block[a], block[b]);
        if sa == sb {
            parts[sa].edges.push((a - offset[sa], b - offset[sa]));
            group.push(sa + 1);
        } else {
            quotient.edges.push((sa + 1, sb + 1));
            group.push(0);
        }
    }
    let mut out = FormalSum::new();
    if quotient.has_cycle() {
        return Ok(out);
    }
    let mut sign = koszul_sort_sign(&group, &vec![f.d - 1; group.len()]);
    let (q, sq) = quotient.canonical_form();
    sign *= sq;
    let parts = parts
        .into_iter()
        .map(|p| {
            let (c, s) = p.canonical_form();
            sign *= s;
            c
        })
        .collect();
    out.add_term((q, parts), sign);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_pairs_with_its_edge() {
        let e = BracketExpr::parse("[x1,x2]").unwrap();
        for d in [2, 3] {
            let f = PlainForest { n: 2, d, edges: vec![(1, 2)] };
            assert_eq!(plain_pair(&f, &e).unwrap(), 1);
            let g = PlainForest { n: 2, d, edges: vec![(2, 1)] };
            assert_eq!(plain_pair(&g, &e).unwrap(), if d == 2 { 1 } else { -1 });
        }
    }

    #[test]
    fn nested_bracket_terms() {
        for d in [2, 3] {
            let a = plain_psi(&BracketExpr::parse("[[x1,x2],x3]").unwrap(), d).unwrap();
            assert_eq!(a.len(), 2);
            assert!(a.support().all(|f| f.edges.len() == 2 && !f.has_cycle()));
            let b = plain_psi(&BracketExpr::parse("[x1,x2]*x3").unwrap(), d).unwrap();
            assert_eq!(b.len(), 1);
        }
    }
}

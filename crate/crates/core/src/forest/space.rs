//! The quotient of the free forest module by the relators, computed block by
//! block. Both relator families keep the element sets of the connected
//! components fixed, so the relation matrix splits along (degree, components).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::relators::relators_of;
use super::{enumerate_admissible, enumerate_cohomology_basis, ForestVector, KForest};
use crate::error::{Error, Result};
use crate::exact::{scalar_to_i64, FormalSum};
use crate::linalg::{sparse_from_ints, Echelon, SparseVec, SpanSolver};

pub(crate) type BlockKey = (usize, Vec<Vec<usize>>);

pub(crate) fn block_key(f: &KForest) -> BlockKey {
    (f.degree(), f.components())
}

fn group_blocks(forests: &[KForest]) -> BTreeMap<BlockKey, Vec<usize>> {
    let mut blocks: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    for (i, f) in forests.iter().enumerate() {
        blocks.entry(block_key(f)).or_default().push(i);
    }
    blocks
}

fn block_rank(forests: &[KForest], members: &[usize]) -> usize {
    let local: Vec<KForest> = members.iter().map(|&i| forests[i].clone()).collect();
    let col: HashMap<&KForest, usize> = local.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut ech = Echelon::new();
    for r in relators_of(&local) {
        ech.insert(sparse_from_ints(r.iter().map(|(f, c)| (col[f], c))));
    }
    local.len() - ech.rank()
}

/// `dim F - rank R` in one degree.
pub fn cohomology_rank(n: usize, k: usize, d: usize, degree: usize) -> Result<usize> {
    let forests = enumerate_admissible(n, k, d, Some(degree))?;
    Ok(group_blocks(&forests)
        .values()
        .map(|m| block_rank(&forests, m))
        .sum())
}

struct BlockSolver {
    col: HashMap<KForest, usize>,
    solver: SpanSolver,
    basis_ids: Vec<usize>,
}

/// Admissible forests, relators and the cohomology basis for one `(n, k, d)`,
/// with lazily built per-block solvers.
pub struct ForestSpace {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    forests: Vec<KForest>,
    blocks: BTreeMap<BlockKey, Vec<usize>>,
    basis: Vec<KForest>,
    basis_canonical: Vec<(KForest, i64)>,
    solvers: Mutex<HashMap<BlockKey, Arc<BlockSolver>>>,
}

impl ForestSpace {
    pub fn new(n: usize, k: usize, d: usize) -> Result<Self> {
        let forests = enumerate_admissible(n, k, d, None)?;
        let blocks = group_blocks(&forests);
        let basis = enumerate_cohomology_basis(n, k, d)?;
        let basis_canonical = basis
            .iter()
            .map(|b| b.canonical_form())
            .collect::<Result<Vec<_>>>()?;
        Ok(ForestSpace {
            n,
            k,
            d,
            forests,
            blocks,
            basis,
            basis_canonical,
            solvers: Mutex::new(HashMap::new()),
        })
    }

    pub fn admissible(&self) -> &[KForest] {
        &self.forests
    }

    pub fn basis(&self) -> &[KForest] {
        &self.basis
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.blocks
            .iter()
            .filter(|(key, _)| key.0 == degree)
            .map(|(_, m)| block_rank(&self.forests, m))
            .sum()
    }

    /// Relators of both families whose summands have the given degree.
    pub fn relators(&self, degree: Option<usize>) -> Vec<ForestVector> {
        let mut out = Vec::new();
        for (key, members) in &self.blocks {
            if degree.is_some_and(|g| g != key.0) {
                continue;
            }
            let local: Vec<KForest> = members.iter().map(|&i| self.forests[i].clone()).collect();
            out.extend(relators_of(&local));
        }
        out
    }

    fn solver(&self, key: &BlockKey) -> Arc<BlockSolver> {
        if let Some(s) = self.solvers.lock().expect("solver cache").get(key) {
            return s.clone();
        }
        let members = self.blocks.get(key).cloned().unwrap_or_default();
        let local: Vec<KForest> = members.iter().map(|&i| self.forests[i].clone()).collect();
        let col: HashMap<KForest, usize> =
            local.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let relators: Vec<SparseVec> = relators_of(&local)
            .iter()
            .map(|r| sparse_from_ints(r.iter().map(|(f, c)| (col[f], c))))
            .collect();
        let mut solver = SpanSolver::new(relators);
        let mut basis_ids = Vec::new();
        for (bi, (f, s)) in self.basis_canonical.iter().enumerate() {
            if let Some(&c) = col.get(f) {
                solver.push_generator(sparse_from_ints([(c, *s)]));
                basis_ids.push(bi);
            }
        }
        let built = Arc::new(BlockSolver {
            col,
            solver,
            basis_ids,
        });
        self.solvers
            .lock()
            .expect("solver cache")
            .insert(key.clone(), built.clone());
        built
    }

    /// Coordinates of `v` over [`ForestSpace::basis`].
    pub fn reduce(&self, v: &ForestVector) -> Result<FormalSum<usize>> {
        let mut by_block: BTreeMap<BlockKey, Vec<(&KForest, i64)>> = BTreeMap::new();
        for (f, c) in v.iter() {
            if (f.n, f.k, f.d) != (self.n, self.k, self.d) {
                return Err(Error::ContextMismatch(format!(
                    "forest on (n,k,d)=({},{},{}) in space ({},{},{})",
                    f.n, f.k, f.d, self.n, self.k, self.d
                )));
            }
            by_block.entry(block_key(f)).or_default().push((f, c));
        }
        let mut out = FormalSum::new();
        for (key, terms) in by_block {
            let bs = self.solver(&key);
            let mut target = Vec::new();
            for (f, c) in terms {
                let (canon, s) = f.canonical_form()?;
                let col = *bs
                    .col
                    .get(&canon)
                    .ok_or_else(|| Error::InvalidForest(format!("not admissible: {canon}")))?;
                target.push((col, c * s));
            }
            let sol = bs
                .solver
                .solve(sparse_from_ints(target))
                .ok_or_else(|| Error::Inconsistent("vector outside the span of the basis".into()))?;
            for (g, x) in sol {
                if x.is_zero() {
                    continue;
                }
                let c = scalar_to_i64(&x)
                    .ok_or_else(|| Error::Inconsistent(format!("non-integral coordinate {x}")))?;
                out.add_term(bs.basis_ids[g], c);
            }
        }
        Ok(out)
    }

    /// True if `v` lies in the span of the relators.
    pub fn is_zero_class(&self, v: &ForestVector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }
}

/// One-shot reduction; builds a [`ForestSpace`] for the context of `v`.
pub fn reduce_to_basis(v: &ForestVector) -> Result<FormalSum<usize>> {
    let Some(f) = v.support().next() else {
        return Ok(FormalSum::new());
    };
    ForestSpace::new(f.n, f.k, f.d)?.reduce(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_rank() {
        assert_eq!(cohomology_rank(3, 3, 2, 3).unwrap(), 1);
        assert_eq!(cohomology_rank(3, 3, 2, 0).unwrap(), 1);
        assert_eq!(cohomology_rank(3, 3, 2, 2).unwrap(), 0);
    }

    #[test]
    fn four_points() {
        assert_eq!(cohomology_rank(4, 3, 2, 3).unwrap(), 4);
        assert_eq!(cohomology_rank(4, 3, 2, 4).unwrap(), 3);
    }

    #[test]
    fn basis_reduces_to_unit_vectors() {
        let sp = ForestSpace::new(5, 3, 3).unwrap();
        for (i, b) in sp.basis().iter().enumerate() {
            let v = b.to_vector().unwrap();
            assert_eq!(sp.reduce(&v).unwrap(), FormalSum::from_term(i, 1));
        }
    }

    #[test]
    fn relators_reduce_to_zero() {
        let sp = ForestSpace::new(5, 3, 2).unwrap();
        for r in sp.relators(None) {
            assert!(sp.is_zero_class(&r).unwrap());
        }
    }
}

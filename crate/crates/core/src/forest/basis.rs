//! Combinatorial skeletons shared by the homology and cohomology bases.
//!
//! A skeleton splits `{1..n}` into points and paths. A path is a sequence of
//! pieces; each piece is a square of `k-1` elements, a top element larger
//! than everything in the square, and extra elements below the top. On the
//! cohomology side the top and the extras are rounds hanging off the square
//! and consecutive squares are joined by edges. On the homology side a piece
//! is the long bracket on square+top followed by brackets with the extras.

use itertools::Itertools;

use super::{Item, KForest, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPiece {
    pub square: Vec<usize>,
    pub top: usize,
    pub extra: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SkeletonComponent {
    Point(usize),
    Path(Vec<PathPiece>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Skeleton {
    pub components: Vec<SkeletonComponent>,
}

impl SkeletonComponent {
    pub fn min_element(&self) -> usize {
        match self {
            SkeletonComponent::Point(e) => *e,
            SkeletonComponent::Path(p) => p
                .iter()
                .flat_map(|pc| pc.square.iter().chain(pc.extra.iter()))
                .copied()
                .min()
                .expect("empty path"),
        }
    }
}

impl Skeleton {
    pub fn num_squares(&self) -> usize {
        self.paths().map(|p| p.len()).sum()
    }

    pub fn num_edges(&self) -> usize {
        self.paths()
            .map(|p| p.iter().map(|pc| 1 + pc.extra.len()).sum::<usize>() + p.len() - 1)
            .sum()
    }

    pub fn degree(&self, k: usize, d: usize) -> usize {
        self.num_squares() * (k - 2) * d + self.num_edges() * (d - 1)
    }

    fn paths(&self) -> impl Iterator<Item = &Vec<PathPiece>> {
        self.components.iter().filter_map(|c| match c {
            SkeletonComponent::Path(p) => Some(p),
            SkeletonComponent::Point(_) => None,
        })
    }

    /// The dual basis forest. Pieces contribute `[square, top edge, extra
    /// edges, link to next square]` to the orientation, in path order.
    pub fn forest(&self, n: usize, k: usize, d: usize) -> KForest {
        let mut squares = Vec::new();
        let mut edges = Vec::new();
        let mut orientation = Vec::new();
        let mut rounds = Vec::new();
        for c in &self.components {
            match c {
                SkeletonComponent::Point(e) => rounds.push(*e),
                SkeletonComponent::Path(pieces) => {
                    for (s, pc) in pieces.iter().enumerate() {
                        let sq = squares.len();
                        squares.push(pc.square.clone());
                        orientation.push(Item::Square(sq));
                        for &r in std::iter::once(&pc.top).chain(pc.extra.iter()) {
                            rounds.push(r);
                            orientation.push(Item::Edge(edges.len()));
                            edges.push((Vertex::Square(sq), Vertex::Round(r)));
                        }
                        if s + 1 < pieces.len() {
                            orientation.push(Item::Edge(edges.len()));
                            edges.push((Vertex::Square(sq), Vertex::Square(sq + 1)));
                        }
                    }
                }
            }
        }
        // each long bracket pairs with its top-round tree with sign (-1)^{(k-1)d};
        // swapping two square elements absorbs the total when it is odd
        if d % 2 == 1 && (squares.len() * (k - 1)) % 2 == 1 {
            squares[0].swap(0, 1);
        }
        rounds.sort_unstable();
        KForest {
            n,
            k,
            d,
            squares,
            rounds,
            edges,
            orientation,
        }
    }
}

/// Partitions of `elems` into blocks that are singletons (if allowed) or have
/// at least `min` elements. Blocks are listed by minimum.
fn partitions(elems: &[usize], min: usize, singletons: bool) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = elems.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for size in 0..=rest.len() {
        let block_len = size + 1;
        if !(block_len >= min || (block_len == 1 && singletons)) {
            continue;
        }
        for chosen in rest.iter().copied().combinations(size) {
            let mut block = vec![first];
            block.extend(&chosen);
            let remaining: Vec<usize> = rest.iter().copied().filter(|e| !chosen.contains(e)).collect();
            for mut tail in partitions(&remaining, min, singletons) {
                tail.insert(0, block.clone());
                out.push(tail);
            }
        }
    }
    out
}

fn pieces_of(sub: &[usize], k: usize) -> Vec<PathPiece> {
    let top = *sub.last().expect("empty sub-block");
    let below = &sub[..sub.len() - 1];
    below
        .iter()
        .copied()
        .combinations(k - 1)
        .map(|square| PathPiece {
            extra: below.iter().copied().filter(|e| !square.contains(e)).collect(),
            square,
            top,
        })
        .collect()
}

fn paths_of(block: &[usize], k: usize) -> Vec<Vec<PathPiece>> {
    let mut out = Vec::new();
    for parts in partitions(block, k, false) {
        let (head, tail) = parts.split_first().expect("nonempty block");
        for order in tail.iter().permutations(tail.len()) {
            let mut seq: Vec<&Vec<usize>> = vec![head];
            seq.extend(order);
            let choices: Vec<Vec<PathPiece>> = seq.iter().map(|u| pieces_of(u, k)).collect();
            for combo in choices.into_iter().multi_cartesian_product() {
                out.push(combo);
            }
        }
    }
    out
}

/// All skeletons on `{1..n}`, sorted by degree and then structurally.
pub fn enumerate_skeletons(n: usize, k: usize, d: usize) -> Vec<Skeleton> {
    let elems: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for blocks in partitions(&elems, k, true) {
        let options: Vec<Vec<SkeletonComponent>> = blocks
            .iter()
            .map(|b| {
                if b.len() == 1 {
                    vec![SkeletonComponent::Point(b[0])]
                } else {
                    paths_of(b, k).into_iter().map(SkeletonComponent::Path).collect()
                }
            })
            .collect();
        if options.is_empty() {
            out.push(Skeleton {
                components: Vec::new(),
            });
            continue;
        }
        for components in options.into_iter().multi_cartesian_product() {
            out.push(Skeleton { components });
        }
    }
    out.sort_by_cached_key(|s| (s.degree(k, d), s.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        // Bell number B4 = 15
        assert_eq!(partitions(&[1, 2, 3, 4], 2, true).len(), 15);
        // blocks of size 1 or >= 3 on 4 elements: 1 + 4 + 1 = 6
        assert_eq!(partitions(&[1, 2, 3, 4], 3, true).len(), 6);
    }

    #[test]
    fn four_three_counts() {
        let sk = enumerate_skeletons(4, 3, 2);
        let by_deg = sk.iter().map(|s| s.degree(3, 2)).counts();
        assert_eq!(by_deg[&0], 1);
        assert_eq!(by_deg[&3], 4);
        assert_eq!(by_deg[&4], 3);
    }

    #[test]
    fn six_three_two_square_skeletons() {
        let sk = enumerate_skeletons(6, 3, 2);
        // {1..6} into two triples: 10 ways, either as one path (1 in the
        // first triple) or as two separate components
        let two: Vec<_> = sk.iter().filter(|s| s.num_squares() == 2).collect();
        assert_eq!(two.len(), 20);
        assert_eq!(two.iter().filter(|s| s.num_edges() == 3).count(), 10);
    }

    #[test]
    fn basis_forests_are_valid() {
        for s in enumerate_skeletons(6, 3, 3) {
            s.forest(6, 3, 3).validate().unwrap();
        }
    }
}

use overlapk::forest::{enumerate_cohomology_basis, ForestSpace, Item, KForest, Vertex};
use overlapk::ring::{
    commutes, product, reduce_bivalent, superpose, verify_duality, verify_quadratic_presentation, Superposition,
};

fn forest(n: usize, d: usize, squares: Vec<Vec<usize>>, edges: Vec<(Vertex, Vertex)>) -> KForest {
    let used: Vec<usize> = squares.iter().flatten().copied().collect();
    let orientation = (0..squares.len())
        .map(Item::Square)
        .chain((0..edges.len()).map(Item::Edge))
        .collect();
    KForest {
        n,
        k: 3,
        d,
        squares,
        rounds: (1..=n).filter(|e| !used.contains(e)).collect(),
        edges,
        orientation,
    }
}

#[test]
fn duality_beyond_five_points() {
    for d in [2, 3] {
        let (checked, nonzero) = verify_duality(6, 3, d).unwrap();
        assert!(checked > 30_000 && nonzero > 400, "{checked} {nonzero}");
    }
}

#[test]
fn graded_commutativity_on_all_pairs() {
    for (n, d) in [(5, 2), (5, 3), (6, 2)] {
        let space = ForestSpace::new(n, 3, d).unwrap();
        let basis = enumerate_cohomology_basis(n, 3, d).unwrap();
        for a in &basis {
            for b in &basis {
                assert!(commutes(&space, a, b).unwrap(), "{a} {b}");
            }
        }
    }
}

#[test]
fn quadratic_presentation() {
    for n in 3..=6 {
        for d in [2, 3] {
            let r = verify_quadratic_presentation(n, 3, d).unwrap();
            // everything but the unit
            let basis = enumerate_cohomology_basis(n, 3, d).unwrap();
            assert_eq!(r.factored_basis_forests, basis.len() - 1);
        }
    }
    let r = verify_quadratic_presentation(6, 4, 2).unwrap();
    assert!(r.generators > 0);
}

#[test]
fn products_of_generators() {
    use Vertex::{Round as R, Square as S};
    for d in [2, 3] {
        let a = forest(6, d, vec![vec![1, 2]], vec![(S(0), R(3))]);
        let b = forest(6, d, vec![vec![4, 5]], vec![(S(0), R(6))]);
        let c = forest(6, d, vec![vec![1, 4]], vec![(S(0), R(6))]);
        assert_eq!(superpose(&a, &c).unwrap().0, Superposition::Overlap);
        assert!(product(&a, &c).unwrap().is_zero());
        assert!(product(&a, &a).unwrap().is_zero());
        let ab = product(&a, &b).unwrap();
        let joined = forest(6, d, vec![vec![1, 2], vec![4, 5]], vec![(S(0), R(3)), (S(1), R(6))]);
        let (canon, s) = joined.canonical_form().unwrap();
        assert_eq!(ab.len(), 1);
        assert_eq!(ab.coeff(&canon), s);
    }
}

#[test]
fn cycle_in_the_union_vanishes() {
    use Vertex::{Round as R, Square as S};
    let a = forest(6, 2, vec![vec![1, 2]], vec![(S(0), R(4))]);
    let b = forest(6, 2, vec![vec![4, 5]], vec![(S(0), R(1)), (S(0), R(6))]);
    assert_eq!(superpose(&a, &b).unwrap().0, Superposition::Cycle);
    assert!(product(&a, &b).unwrap().is_zero());
}

#[test]
fn admissible_input_is_kept() {
    for t in enumerate_cohomology_basis(5, 3, 2).unwrap() {
        let v = reduce_bivalent(&t).unwrap();
        let (canon, s) = t.canonical_form().unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v.coeff(&canon), s);
    }
}

#[test]
fn two_bivalent_rounds() {
    use Vertex::{Round as R, Square as S};
    for d in [2, 3] {
        // A - 7 - B - 8 - C, each square with a private round
        let t = forest(
            11,
            d,
            vec![vec![1, 2], vec![3, 4], vec![5, 6]],
            vec![
                (S(0), R(7)),
                (S(1), R(7)),
                (S(1), R(8)),
                (S(2), R(8)),
                (S(0), R(9)),
                (S(1), R(10)),
                (S(2), R(11)),
            ],
        );
        let v = reduce_bivalent(&t).unwrap();
        assert!(!v.is_zero() && v.len() <= 4);
        assert!(v.support().all(|f| f.is_valid()));
    }
}

use overlapk::exact::sign_pow;
use overlapk::homology::{
    enumerate_homology_basis, enumerate_homology_basis_d1, hook_module_rank, pair, HomologyContext,
};
use overlapk::{BracketExpr, FormalSum};

fn p(s: &str) -> BracketExpr {
    BracketExpr::parse(s).unwrap()
}

#[test]
fn jacobi_sum_has_zero_coordinates() {
    for d in [2, 3] {
        let ctx = HomologyContext::new(4, 3, d).unwrap();
        let mut sum = FormalSum::new();
        for (i, e) in ["[x1,{x2,x3,x4}]", "[x2,{x1,x3,x4}]", "[x3,{x1,x2,x4}]", "[x4,{x1,x2,x3}]"]
            .iter()
            .enumerate()
        {
            sum.add_term(p(e), sign_pow(i * d));
        }
        assert!(ctx.coordinates_of_sum(&sum).unwrap().is_zero());
    }
}

#[test]
fn swapping_two_letters() {
    for d in [2, 3] {
        let ctx = HomologyContext::new(3, 3, d).unwrap();
        let a = ctx.coordinates(&p("{x2,x1,x3}")).unwrap();
        let b = ctx.coordinates(&p("{x1,x2,x3}")).unwrap();
        assert_eq!(a, b.scale(sign_pow(d)));
    }
}

#[test]
fn cobasis_pairs_to_one() {
    for d in [2, 3] {
        let ctx = HomologyContext::new(5, 3, d).unwrap();
        assert!(ctx.pairing_is_identity());
        for (i, (f, s)) in ctx.cobasis().iter().enumerate() {
            assert_eq!(s * pair(f, &ctx.basis()[i]).unwrap(), 1);
            assert_eq!(ctx.coordinates(&ctx.basis()[i]).unwrap(), FormalSum::from_term(i, 1));
        }
    }
}

#[test]
fn top_classes_on_k_letters() {
    for k in [3, 4] {
        for d in [2, 3] {
            let b = enumerate_homology_basis(k, k, d).unwrap();
            assert_eq!(b.len(), 2);
            assert_eq!(b[1].degree(d), (k - 1) * d - 1);
        }
    }
}

#[test]
fn products_with_points_are_not_brackets() {
    let ctx = HomologyContext::new(4, 3, 2).unwrap();
    assert!(ctx.coordinates(&p("[x1,x2]*x3*x4")).unwrap().is_zero());
    assert!(ctx.coordinates(&p("{x1,x2,x3}*x4")).unwrap().len() == 1);
    assert!(ctx.coordinates(&p("{x1,x2}")).is_err());
}

#[test]
fn d1_elements_satisfy_the_max_condition() {
    let basis = enumerate_homology_basis_d1(6, 3).unwrap();
    assert!(basis.iter().all(|b| b.satisfies_max_condition()));
    assert!(enumerate_homology_basis_d1(4, 2).is_err());
}

#[test]
fn hook_rank_for_k_equal_n() {
    for n in 3..=6 {
        assert_eq!(hook_module_rank(n, n).unwrap(), 1);
    }
    assert!(hook_module_rank(7, 3).is_err());
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use overlapk::expr::{br, long, prod, var};
use overlapk::forest::{
    cohomology_rank, dual_jacobi_relators, enumerate_cohomology_basis, enumerate_skeletons, three_term_relators,
};
use overlapk::homology::{
    canonical_expr, check_coassociativity, coproduct, coproduct_terms, drop_vanishing, enumerate_homology_basis,
    enumerate_homology_basis_d1, hook_module_rank, pairing_matrix, psi, skeleton_expr, verify_bimodule_relations,
    HomologyContext,
};
use overlapk::ring::{product, product_vectors, verify_duality};
use overlapk::series::{
    betti_numbers, betti_series, betti_series_exponential_form, betti_series_structural, reutenauer_check,
};
use overlapk::{BracketExpr, ForestVector, FormalSum, KForest};

type Outcome = Result<String, String>;

const SPHERE_LIMIT: Duration = Duration::from_secs(1);
const DIMENSION_LIMIT: Duration = Duration::from_secs(300);
const HOOK_LIMIT: Duration = Duration::from_secs(120);
const RANDOM_TRIPLES: usize = 200;
const RANDOM_N: usize = 9;
const TRIPLE_RETRIES: usize = 30;
const POOL_EDGES: usize = 2;
const TRIPLE_SEED: u64 = 0x6b_666f_7265_7374;
const SERIES_ORDER: usize = 10;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sphere_cases() -> Outcome {
    for d in 1..=3 {
        for k in [3, 4] {
            let got = betti_numbers(d, k, k).map_err(err)?;
            let want = BTreeMap::from([(0, 1), ((k - 1) * d - 1, 1)]);
            ensure(got == want, || format!("d={d} k={k}: {got:?}"))?;
        }
    }
    Ok("6 cases".into())
}

fn counts<T>(items: &[T], degree: impl Fn(&T) -> usize) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for x in items {
        *out.entry(degree(x)).or_insert(0) += 1;
    }
    out
}

fn dimensions() -> Outcome {
    let mut tables = 0;
    for k in [3, 4] {
        for d in [2, 3] {
            for n in 0..=7 {
                let series = betti_numbers(d, k, n).map_err(err)?;
                let basis = enumerate_homology_basis(n, k, d).map_err(err)?;
                let homology = counts(&basis, |e| e.degree(d));
                ensure(homology == series, || {
                    format!("n={n} k={k} d={d}: basis {homology:?} vs series {series:?}")
                })?;
                let top = series.keys().max().copied().unwrap_or(0);
                for deg in 0..=top {
                    let rank = cohomology_rank(n, k, d, deg).map_err(err)? as u64;
                    let want = series.get(&deg).copied().unwrap_or(0);
                    ensure(rank == want, || format!("n={n} k={k} d={d} degree {deg}: rank {rank} vs {want}"))?;
                }
                tables += 1;
            }
        }
    }
    for n in 0..=8 {
        let series = betti_numbers(1, 3, n).map_err(err)?;
        let basis = enumerate_homology_basis_d1(n, 3).map_err(err)?;
        let homology = counts(&basis, |b| b.degree(3));
        ensure(homology == series, || format!("d=1 n={n}: {homology:?} vs {series:?}"))?;
        tables += 1;
    }
    Ok(format!("{tables} tables"))
}

fn identity_pairing() -> Outcome {
    let mut classes = 0;
    for k in [3, 4] {
        for d in [2, 3] {
            for n in 0..=6 {
                let forests = enumerate_cohomology_basis(n, k, d).map_err(err)?;
                let basis = enumerate_homology_basis(n, k, d).map_err(err)?;
                ensure(forests.len() == basis.len(), || format!("n={n} k={k} d={d}: sizes differ"))?;
                let m = pairing_matrix(&forests, &basis).map_err(err)?;
                for (i, row) in m.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        ensure(v == i64::from(i == j), || {
                            format!("n={n} k={k} d={d}: entry ({i},{j}) is {v}")
                        })?;
                    }
                }
                classes += basis.len();
            }
        }
    }
    Ok(format!("{classes} basis classes"))
}

fn relation_suite() -> Outcome {
    let mut relations = 0;
    for k in [3, 4] {
        for d in [2, 3] {
            relations += verify_bimodule_relations(k, d).map_err(err)?.len();
        }
    }
    let mut relators = 0;
    for k in [3, 4] {
        for d in [2, 3] {
            for n in k..=6 {
                let psis = enumerate_homology_basis(n, k, d)
                    .map_err(err)?
                    .iter()
                    .map(|e| psi(e, k, d))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                let rels = three_term_relators(n, k, d)
                    .map_err(err)?
                    .into_iter()
                    .chain(dual_jacobi_relators(n, k, d).map_err(err)?);
                for r in rels {
                    ensure(psis.iter().all(|p| r.dot(p) == 0), || {
                        format!("n={n} k={k} d={d}: relator pairs nontrivially")
                    })?;
                    relators += 1;
                }
            }
        }
    }
    Ok(format!("{relations} relation families, {relators} relators"))
}

fn ring_structure() -> Outcome {
    let mut triples = 0;
    for d in [2, 3] {
        for n in 0..=5 {
            triples += verify_duality(n, 3, d).map_err(err)?.0;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(TRIPLE_SEED);
    let (mut nonzero_pairs, mut nonzero_triples) = (0, 0);
    for d in [2, 3] {
        let skeletons = enumerate_skeletons(RANDOM_N, 3, d);
        // products of sparse generators are rarely killed by cycles
        let pool: Vec<KForest> = skeletons
            .iter()
            .filter(|s| s.num_squares() == 1 && s.num_edges() <= POOL_EDGES)
            .map(|s| s.forest(RANDOM_N, 3, d))
            .collect();
        // a class is determined by its pairing with the homology basis
        let mut classes: BTreeMap<usize, Vec<ForestVector>> = BTreeMap::new();
        let mut pairing = |v: &ForestVector, degree: usize| -> Result<Vec<i64>, String> {
            if !classes.contains_key(&degree) {
                let psis = skeletons
                    .iter()
                    .filter(|s| s.degree(3, d) == degree)
                    .map(|s| psi(&skeleton_expr(s), 3, d))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                classes.insert(degree, psis);
            }
            Ok(classes[&degree].iter().map(|p| v.dot(p)).collect())
        };
        let disjoint = |x: &KForest, others: &[&KForest]| {
            others.iter().all(|o| o.squares.iter().flatten().all(|e| !x.squares[0].contains(e)))
        };
        let pick = |rng: &mut ChaCha8Rng, others: &[&KForest]| {
            let mut x = pool.choose(rng).expect("nonempty pool");
            for _ in 0..TRIPLE_RETRIES {
                if disjoint(x, others) {
                    break;
                }
                x = pool.choose(rng).expect("nonempty pool");
            }
            x
        };
        for _ in 0..RANDOM_TRIPLES / 2 {
            let a = pick(&mut rng, &[]);
            let b = pick(&mut rng, &[a]);
            let ab_forests = product(a, b).map_err(err)?;
            let mut c = pick(&mut rng, &[a, b]);
            for _ in 0..TRIPLE_RETRIES {
                if ab_forests.is_zero()
                    || !product_vectors(&ab_forests, &c.to_vector().map_err(err)?).map_err(err)?.is_zero()
                {
                    break;
                }
                c = pick(&mut rng, &[a, b]);
            }
            let (da, db) = (a.degree(), b.degree());
            let ab = pairing(&product(a, b).map_err(err)?, da + db)?;
            let ba = pairing(&product(b, a).map_err(err)?, da + db)?;
            let sign = if da * db % 2 == 0 { 1 } else { -1 };
            ensure(ab.iter().zip(&ba).all(|(x, y)| *x == sign * y), || {
                format!("commutativity fails for {a} and {b}")
            })?;
            let total = da + db + c.degree();
            let left = product_vectors(&ab_forests, &c.to_vector().map_err(err)?).map_err(err)?;
            let right = product_vectors(&a.to_vector().map_err(err)?, &product(b, c).map_err(err)?).map_err(err)?;
            let (left, right) = (pairing(&left, total)?, pairing(&right, total)?);
            ensure(left == right, || format!("associativity fails for {a}, {b}, {c}"))?;
            if ab.iter().any(|&x| x != 0) {
                nonzero_pairs += 1;
            }
            if left.iter().any(|&x| x != 0) {
                nonzero_triples += 1;
            }
        }
    }
    Ok(format!(
        "{triples} duality triples; {RANDOM_TRIPLES} random triples at n = {RANDOM_N}, \
         {nonzero_pairs} with T1·T2 ≠ 0, {nonzero_triples} with T1·T2·T3 ≠ 0"
    ))
}

fn expected_terms(terms: Vec<(i64, BracketExpr, BracketExpr)>, d: usize) -> FormalSum<(BracketExpr, BracketExpr)> {
    let mut out = FormalSum::new();
    for (c, l, r) in terms {
        let (l, sl) = canonical_expr(&l.simplified(), d);
        let (r, sr) = canonical_expr(&r.simplified(), d);
        out.add_term((l, r), c * sl * sr);
    }
    out
}

fn coproduct_displays() -> Outcome {
    let pm = |e: usize| if e % 2 == 0 { 1 } else { -1 };
    for d in [2, 3] {
        let x13 = br(var(1), var(3));
        let e = br(x13.clone(), var(2));
        let want = expected_terms(
            vec![
                (1, e.clone(), prod(vec![var(1), var(2), var(3)])),
                (1, prod(vec![x13.clone(), var(2)]), br(prod(vec![var(1), var(3)]), var(2))),
                (pm(d - 1), br(prod(vec![var(1), var(3)]), var(2)), prod(vec![x13, var(2)])),
                (1, prod(vec![var(1), var(2), var(3)]), e.clone()),
            ],
            d,
        );
        let got = expected_terms(coproduct_terms(&e, d), d);
        ensure(got == want, || format!("d={d}: coproduct of {e} is {got:?}"))?;

        let (a, b) = (long(&[1, 2, 3]), long(&[4, 5, 6]));
        let (pa, pb) = (prod(vec![var(1), var(2), var(3)]), prod(vec![var(4), var(5), var(6)]));
        let all = prod((1..=6).map(var).collect());
        let e = br(a.clone(), b.clone());
        let s = pm(3 * d);
        let displayed = vec![
            (1, e.clone(), all.clone()),
            (1, br(a.clone(), pb.clone()), prod(vec![pa.clone(), b.clone()])),
            (s, br(pa.clone(), b.clone()), prod(vec![a.clone(), pb.clone()])),
            (1, prod(vec![a.clone(), pb.clone()]), br(pa.clone(), b.clone())),
            (s, prod(vec![pa.clone(), b.clone()]), br(a.clone(), pb.clone())),
            (1, all.clone(), e.clone()),
        ];
        let got = expected_terms(drop_vanishing(coproduct_terms(&e, d)), d);
        ensure(got == expected_terms(displayed.clone(), d), || format!("d={d}: coproduct of {e} is {got:?}"))?;

        let ctx = HomologyContext::new(6, 3, d).map_err(err)?;
        let mut want = FormalSum::new();
        for (c, l, r) in displayed {
            let cl = ctx.coordinates(&l).map_err(err)?;
            let cr = ctx.coordinates(&r).map_err(err)?;
            for (i, x) in cl.iter() {
                for (j, y) in cr.iter() {
                    want.add_term((*i, *j), c * x * y);
                }
            }
        }
        let got = coproduct(&ctx, &e).map_err(err)?;
        ensure(got == want, || format!("d={d}: coordinates of the coproduct differ ({} vs {} terms)", got.len(), want.len()))?;
    }
    let mut classes = 0;
    for d in [2, 3] {
        for n in 0..=5 {
            let ctx = HomologyContext::new(n, 3, d).map_err(err)?;
            check_coassociativity(&ctx).map_err(err)?;
            classes += ctx.basis().len();
        }
    }
    Ok(format!("both displays, coassociativity on {classes} classes"))
}

fn hooks() -> Outcome {
    for (n, k) in [(3, 3), (4, 3), (5, 3), (5, 4), (6, 4)] {
        let rank = hook_module_rank(n, k).map_err(err)? as u64;
        let want = overlapk::exact::binomial(n - 1, k - 1);
        ensure(rank == want, || format!("n={n} k={k}: rank {rank}, expected {want}"))?;
    }
    Ok("5 cases".into())
}

fn series_identities() -> Outcome {
    for d in 1..=3 {
        for k in [3, 4] {
            let a = betti_series(d, k, SERIES_ORDER).map_err(err)?;
            let b = betti_series_exponential_form(d, k, SERIES_ORDER).map_err(err)?;
            let c = betti_series_structural(d, k, SERIES_ORDER).map_err(err)?;
            ensure(a == b && b == c, || format!("d={d} k={k}: closed forms disagree"))?;
        }
    }
    ensure(reutenauer_check(8), || "Reutenauer identity fails at order 8".into())?;
    Ok(format!("order {SERIES_ORDER}, 6 (d,k) pairs"))
}

fn spot_values() -> Outcome {
    let d1 = BTreeMap::from([(0, 1), (1, 7)]);
    let got = betti_numbers(1, 3, 4).map_err(err)?;
    ensure(got == d1, || format!("betti(1,3,4) = {got:?}"))?;
    let by_basis = counts(&enumerate_homology_basis_d1(4, 3).map_err(err)?, |b| b.degree(3));
    ensure(by_basis == d1, || format!("d=1 basis counts {by_basis:?}"))?;

    let d2 = BTreeMap::from([(0, 1), (3, 4), (4, 3)]);
    let got = betti_numbers(2, 3, 4).map_err(err)?;
    ensure(got == d2, || format!("betti(2,3,4) = {got:?}"))?;
    let mut ranks = BTreeMap::new();
    for deg in 0..=4 {
        let r = cohomology_rank(4, 3, 2, deg).map_err(err)? as u64;
        if r > 0 {
            ranks.insert(deg, r);
        }
    }
    ensure(ranks == d2, || format!("forest ranks {ranks:?}"))?;
    Ok("2 fixtures, each from two code paths".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 9] = [
        ("1 sphere cases", sphere_cases, Some(SPHERE_LIMIT)),
        ("2 three-way dimension agreement", dimensions, Some(DIMENSION_LIMIT)),
        ("3 identity pairing", identity_pairing, None),
        ("4 relation suite", relation_suite, None),
        ("5 product-coproduct duality", ring_structure, None),
        ("6 coproduct displays", coproduct_displays, None),
        ("7 hook ranks", hooks, Some(HOOK_LIMIT)),
        ("8 series identities", series_identities, None),
        ("9 spot values", spot_values, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

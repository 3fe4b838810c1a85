//! Operadic actions on bracket expressions: substitution on the left, and
//! the Leibniz rewriting that pushes products and brackets out of long
//! bracket arguments on the right.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::{koszul_sign, sign_pow, FormalSum};
use crate::expr::{br, BracketExpr};

type Sum = FormalSum<BracketExpr>;

/// Sorts the factors of every product by their smallest variable, with the
/// Koszul sign. Brackets keep their argument order.
pub fn canonical_expr(e: &BracketExpr, d: usize) -> (BracketExpr, i64) {
    match e.simplified() {
        BracketExpr::Long(args) => {
            let mut sign = 1;
            let args = args
                .iter()
                .map(|a| {
                    let (c, s) = canonical_expr(a, d);
                    sign *= s;
                    c
                })
                .collect();
            (BracketExpr::Long(args), sign)
        }
        BracketExpr::Br(a, b) => {
            let (a, sa) = canonical_expr(&a, d);
            let (b, sb) = canonical_expr(&b, d);
            (br(a, b), sa * sb)
        }
        BracketExpr::Prod(fs) => {
            let mut sign = 1;
            let fs: Vec<BracketExpr> = fs
                .iter()
                .map(|f| {
                    let (c, s) = canonical_expr(f, d);
                    sign *= s;
                    c
                })
                .collect();
            let degrees: Vec<usize> = fs.iter().map(|f| f.degree(d)).collect();
            let mut order: Vec<usize> = (0..fs.len()).collect();
            order.sort_by_key(|&i| fs[i].min_var());
            sign *= koszul_sign(&degrees, &order);
            (BracketExpr::Prod(order.iter().map(|&i| fs[i].clone()).collect()), sign)
        }
        other => (other, 1),
    }
}

/// A sum with every term in canonical form.
pub fn canonical_sum(s: &Sum, d: usize) -> Sum {
    let mut out = FormalSum::new();
    for (e, c) in s.iter() {
        let (e, sg) = canonical_expr(e, d);
        out.add_term(e, c * sg);
    }
    out
}

fn product_of_sums(sums: &[Sum]) -> Sum {
    let mut acc: Vec<(Vec<BracketExpr>, i64)> = vec![(Vec::new(), 1)];
    for s in sums {
        let mut next = Vec::new();
        for (fs, c) in &acc {
            for (e, ce) in s.iter() {
                let mut g = fs.clone();
                g.push(e.clone());
                next.push((g, c * ce));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(fs, c)| (BracketExpr::Prod(fs).simplified(), c))
        .collect()
}

/// Rewrites `e` so that every long bracket argument is a variable, using
/// the Leibniz rules of the right action and `{.., 1} = 0`.
pub fn right_action_normalize(e: &BracketExpr, k: usize, d: usize) -> Result<Sum> {
    match e {
        BracketExpr::Unit | BracketExpr::Var(_) => Ok(FormalSum::from_term(e.clone(), 1)),
        BracketExpr::Prod(fs) => {
            let parts = fs
                .iter()
                .map(|f| right_action_normalize(f, k, d))
                .collect::<Result<Vec<_>>>()?;
            Ok(product_of_sums(&parts))
        }
        BracketExpr::Br(a, b) => {
            let a = right_action_normalize(a, k, d)?;
            let b = right_action_normalize(b, k, d)?;
            let mut out = FormalSum::new();
            for (x, cx) in a.iter() {
                for (y, cy) in b.iter() {
                    out.add_term(br(x.clone(), y.clone()), cx * cy);
                }
            }
            Ok(out)
        }
        BracketExpr::Long(args) => {
            if args.len() != k {
                return Err(Error::Malformed(format!(
                    "long bracket of arity {} with k = {k}",
                    args.len()
                )));
            }
            if args.iter().any(|a| a.contains_long()) {
                return Err(Error::Unsupported(
                    "long bracket nested inside a long bracket".into(),
                ));
            }
            expand_long(&args.iter().map(|a| a.simplified()).collect::<Vec<_>>(), k, d)
        }
    }
}

fn expand_long(args: &[BracketExpr], k: usize, d: usize) -> Result<Sum> {
    let Some(p) = args.iter().position(|a| !matches!(a, BracketExpr::Var(_))) else {
        return Ok(FormalSum::from_term(BracketExpr::Long(args.to_vec()), 1));
    };
    // move the argument to the last slot
    let degs: Vec<usize> = args.iter().map(|a| a.degree(d)).collect();
    let mut order: Vec<usize> = (0..args.len()).filter(|&i| i != p).collect();
    order.push(p);
    let sign = sign_pow((args.len() - 1 - p) * d) * koszul_sign(&degs, &order);
    let y: Vec<BracketExpr> = order[..k - 1].iter().map(|&i| args[i].clone()).collect();
    let y_deg: usize = y.iter().map(|a| a.degree(d)).sum();
    let l_deg = (k - 1) * d - 1;
    let with_last = |a: BracketExpr| {
        let mut v = y.clone();
        v.push(a);
        BracketExpr::Long(v)
    };

    let mut out = FormalSum::new();
    match &args[p] {
        BracketExpr::Unit => {}
        BracketExpr::Prod(fs) => {
            let a = fs[0].clone();
            let rest = BracketExpr::Prod(fs[1..].to_vec()).simplified();
            let s1 = sign_pow(a.degree(d) * (l_deg + y_deg));
            out.add_term(BracketExpr::Prod(vec![a.clone(), with_last(rest.clone())]), s1);
            out.add_term(BracketExpr::Prod(vec![with_last(a), rest]), 1);
        }
        BracketExpr::Br(a, b) => {
            let dd = l_deg + y_deg;
            let s2 = sign_pow(dd * (a.degree(d) + d - 1));
            out.add_term(br(with_last((**a).clone()), (**b).clone()), 1);
            out.add_term(br((**a).clone(), with_last((**b).clone())), s2);
        }
        BracketExpr::Long(_) => {
            return Err(Error::Unsupported("long bracket nested inside a long bracket".into()))
        }
        BracketExpr::Var(_) => unreachable!("position picks a non-variable"),
    }
    let mut total = FormalSum::new();
    for (t, c) in out.iter() {
        total.add_assign_scaled(&right_action_normalize(&t.simplified(), k, d)?, c * sign);
    }
    Ok(total)
}

/// Substitutes `args[i-1]` for `x_i` in `p`. Arguments on disjoint variable
/// sets covering `1..N` are used as they are; otherwise each argument must
/// use `1..m_s` and is shifted into consecutive blocks. The sign is the
/// Koszul sign of bringing the arguments into the order `p` uses them.
pub fn left_action(p: &BracketExpr, args: &[BracketExpr], d: usize) -> Result<(BracketExpr, i64)> {
    if p.contains_long() {
        return Err(Error::Malformed("left action needs an operation without long brackets".into()));
    }
    let n = p.check_linear()?;
    if n != args.len() {
        return Err(Error::Malformed(format!(
            "operation has {n} inputs but {} arguments were given",
            args.len()
        )));
    }
    let all: Vec<usize> = args.iter().flat_map(|a| a.vars()).collect();
    let distinct: BTreeSet<usize> = all.iter().copied().collect();
    let disjoint_cover = distinct.len() == all.len() && all.iter().all(|&v| v >= 1 && v <= all.len());
    let args: Vec<BracketExpr> = if disjoint_cover {
        args.to_vec()
    } else {
        let mut offset = 0;
        let mut out = Vec::new();
        for a in args {
            let m = a.check_linear()?;
            out.push(a.map_vars(&|v| v + offset));
            offset += m;
        }
        out
    };
    let slots = p.vars();
    let degrees: Vec<usize> = args.iter().map(|a| a.degree(d)).collect();
    let order: Vec<usize> = slots.iter().map(|&i| i - 1).collect();
    let sign = koszul_sign(&degrees, &order);
    let e = substitute(p, &args).simplified();
    Ok((e, sign))
}

/// `b ∘ (p_1, …, p_n)` for a class `b` on `n` letters and Lie-type
/// expressions `p_s` on `1..m_s`, shifted into consecutive blocks and
/// normalized.
pub fn right_action(b: &BracketExpr, args: &[BracketExpr], k: usize, d: usize) -> Result<Sum> {
    let n = b.check_linear()?;
    if n != args.len() {
        return Err(Error::Malformed(format!(
            "class has {n} inputs but {} arguments were given",
            args.len()
        )));
    }
    let mut offset = 0;
    let mut shifted = Vec::with_capacity(n);
    for a in args {
        if a.contains_long() {
            return Err(Error::Malformed("right action needs arguments without long brackets".into()));
        }
        let m = a.check_linear()?;
        shifted.push(a.map_vars(&|v| v + offset));
        offset += m;
    }
    let degrees: Vec<usize> = shifted.iter().map(|a| a.degree(d)).collect();
    let order: Vec<usize> = b.vars().iter().map(|&i| i - 1).collect();
    let sign = koszul_sign(&degrees, &order);
    Ok(right_action_normalize(&substitute(b, &shifted).simplified(), k, d)?.scale(sign))
}

fn substitute(p: &BracketExpr, args: &[BracketExpr]) -> BracketExpr {
    match p {
        BracketExpr::Var(i) => args[i - 1].clone(),
        BracketExpr::Unit => BracketExpr::Unit,
        BracketExpr::Prod(fs) => BracketExpr::Prod(fs.iter().map(|f| substitute(f, args)).collect()),
        BracketExpr::Br(a, b) => br(substitute(a, args), substitute(b, args)),
        BracketExpr::Long(xs) => BracketExpr::Long(xs.iter().map(|f| substitute(f, args)).collect()),
    }
}

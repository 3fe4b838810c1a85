//! The coproduct of a product of iterated brackets. Each bracket node is a
//! sphere factor; a summand chooses which spheres stay on the left, the
//! others stay on the right, and a bracket that is not kept degrades to the
//! product of its arguments.

use super::actions::canonical_expr;
use super::context::HomologyContext;
use crate::error::{Error, Result};
use crate::exact::{sign_pow, FormalSum};
use crate::expr::{br, BracketExpr};

/// Coordinates of `Δe` on pairs of homology basis indices.
pub type TensorPair = FormalSum<(usize, usize)>;

fn node_degrees(e: &BracketExpr, d: usize, out: &mut Vec<usize>) {
    match e {
        BracketExpr::Unit | BracketExpr::Var(_) => {}
        BracketExpr::Prod(fs) => fs.iter().for_each(|f| node_degrees(f, d, out)),
        BracketExpr::Br(a, b) => {
            node_degrees(a, d, out);
            out.push(d - 1);
            node_degrees(b, d, out);
        }
        BracketExpr::Long(args) => {
            args.iter().for_each(|a| node_degrees(a, d, out));
            out.push((args.len() - 1) * d - 1);
        }
    }
}

/// Keeps the bracket nodes whose in-order position is marked in `keep`.
fn degrade(e: &BracketExpr, keep: &[bool], next: &mut usize) -> BracketExpr {
    match e {
        BracketExpr::Unit | BracketExpr::Var(_) => e.clone(),
        BracketExpr::Prod(fs) => BracketExpr::Prod(fs.iter().map(|f| degrade(f, keep, next)).collect()),
        BracketExpr::Br(a, b) => {
            let a = degrade(a, keep, next);
            let here = keep[*next];
            *next += 1;
            let b = degrade(b, keep, next);
            if here {
                br(a, b)
            } else {
                BracketExpr::Prod(vec![a, b])
            }
        }
        BracketExpr::Long(args) => {
            let args: Vec<BracketExpr> = args.iter().map(|a| degrade(a, keep, next)).collect();
            let here = keep[*next];
            *next += 1;
            if here {
                BracketExpr::Long(args)
            } else {
                BracketExpr::Prod(args)
            }
        }
    }
}

/// All summands `(sign, left, right)` of `Δe`, one per subset of bracket
/// nodes, with products sorted by smallest variable.
pub fn coproduct_terms(e: &BracketExpr, d: usize) -> Vec<(i64, BracketExpr, BracketExpr)> {
    let mut degs = Vec::new();
    node_degrees(e, d, &mut degs);
    let m = degs.len();
    let mut out = Vec::with_capacity(1 << m);
    for mask in (0..1u64 << m).rev() {
        let left_keep: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        let right_keep: Vec<bool> = left_keep.iter().map(|b| !b).collect();
        let mut exp = 0;
        for i in 0..m {
            for j in i + 1..m {
                if right_keep[i] && left_keep[j] {
                    exp += degs[i] * degs[j];
                }
            }
        }
        let (l, sl) = canonical_expr(&degrade(e, &left_keep, &mut 0).simplified(), d);
        let (r, sr) = canonical_expr(&degrade(e, &right_keep, &mut 0).simplified(), d);
        out.push((sign_pow(exp) * sl * sr, l, r));
    }
    out
}

fn has_plain_bracket(e: &BracketExpr) -> bool {
    match e {
        BracketExpr::Unit | BracketExpr::Var(_) => false,
        BracketExpr::Prod(fs) | BracketExpr::Long(fs) => fs.iter().any(has_plain_bracket),
        BracketExpr::Br(a, b) => {
            (!a.contains_long() && !b.contains_long()) || has_plain_bracket(a) || has_plain_bracket(b)
        }
    }
}

/// Drops the summands that vanish for `k >= 3` because one side contains a
/// bracket with no long bracket below it.
pub fn drop_vanishing(terms: Vec<(i64, BracketExpr, BracketExpr)>) -> Vec<(i64, BracketExpr, BracketExpr)> {
    terms
        .into_iter()
        .filter(|(_, l, r)| !has_plain_bracket(l) && !has_plain_bracket(r))
        .collect()
}

/// `Δe` in coordinates.
pub fn coproduct(ctx: &HomologyContext, e: &BracketExpr) -> Result<TensorPair> {
    if !e.is_normalized() {
        return Err(Error::Unsupported(format!("{e} is not normalized")));
    }
    let mut out = FormalSum::new();
    for (s, l, r) in drop_vanishing(coproduct_terms(e, ctx.d)) {
        let cl = ctx.coordinates(&l)?;
        if cl.is_zero() {
            continue;
        }
        let cr = ctx.coordinates(&r)?;
        for (i, a) in cl.iter() {
            for (j, b) in cr.iter() {
                out.add_term((*i, *j), s * a * b);
            }
        }
    }
    Ok(out)
}

/// `Δ` of the `i`-th basis class.
pub fn coproduct_of_basis(ctx: &HomologyContext, i: usize) -> Result<TensorPair> {
    coproduct(ctx, &ctx.basis()[i])
}

/// Checks `(Δ⊗1)Δ = (1⊗Δ)Δ` and counitality on every basis class.
pub fn check_coassociativity(ctx: &HomologyContext) -> Result<()> {
    let deltas = (0..ctx.basis().len())
        .map(|i| coproduct_of_basis(ctx, i))
        .collect::<Result<Vec<_>>>()?;
    for (i, delta) in deltas.iter().enumerate() {
        let mut lhs: FormalSum<(usize, usize, usize)> = FormalSum::new();
        let mut rhs: FormalSum<(usize, usize, usize)> = FormalSum::new();
        let mut left_counit = FormalSum::new();
        let mut right_counit = FormalSum::new();
        for (&(a, b), c) in delta.iter() {
            for (&(x, y), c2) in deltas[a].iter() {
                lhs.add_term((x, y, b), c * c2);
            }
            for (&(x, y), c2) in deltas[b].iter() {
                rhs.add_term((a, x, y), c * c2);
            }
            if ctx.degree_of(a) == 0 {
                right_counit.add_term(b, c);
            }
            if ctx.degree_of(b) == 0 {
                left_counit.add_term(a, c);
            }
        }
        if lhs != rhs {
            return Err(Error::Verification(format!(
                "coassociativity fails on {}",
                ctx.basis()[i]
            )));
        }
        let unit = FormalSum::from_term(i, 1);
        if left_counit != unit || right_counit != unit {
            return Err(Error::Verification(format!("counit fails on {}", ctx.basis()[i])));
        }
    }
    Ok(())
}

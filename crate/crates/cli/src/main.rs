use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use overlapk::coaction::{left_coaction, right_coaction};
use overlapk::forest::{cohomology_rank, enumerate_cohomology_basis};
use overlapk::homology::{
    enumerate_homology_basis, enumerate_homology_basis_d1, pair, right_action_normalize, verify_bimodule_relations,
};
use overlapk::ring::{product, verify_duality, verify_quadratic_presentation};
use overlapk::series::{
    betti_numbers, betti_series, betti_series_exponential_form, betti_series_structural, reutenauer_check,
};
use overlapk::{BracketExpr, Error, ForestVector, KForest};

const MAX_N_VAR: &str = "OVERLAPK_MAX_N";
const DEFAULT_MAX_N: usize = 8;

#[derive(Parser)]
#[command(name = "overlapk", version, about = "Homology of spaces of points in R^d with no k equal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Homology,
    Cohomology,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Relations,
    Presentation,
    Duality,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers by degree.
    Betti {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        /// Also count the homology basis and the forest cohomology ranks.
        #[arg(long)]
        verify: bool,
    },
    /// List a homology or cohomology basis.
    Basis {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Pair a forest (JSON, or @file) with a bracket expression.
    Pair { forest: String, expr: String },
    /// Cup product of two forests.
    Multiply { left: String, right: String },
    /// Rewrite long brackets so that all their arguments are letters.
    Normalize {
        expr: String,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
    },
    /// Left or right coaction for consecutive blocks of the given sizes.
    Coact {
        #[arg(value_enum)]
        side: Side,
        forest: String,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
    },
    /// Run one of the built-in consistency checks.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
    },
    /// Betti numbers for all n up to the given order.
    Series {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Compare the three closed forms and the Lie series identity.
        #[arg(long)]
        check: bool,
    },
}

fn max_n() -> Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v.trim().parse().with_context(|| format!("{MAX_N_VAR}={v:?} is not a number")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_cap(n: usize) -> Result<()> {
    let cap = max_n()?;
    if n > cap {
        return Err(Error::ResourceLimit(format!("n = {n} exceeds {MAX_N_VAR} = {cap}")).into());
    }
    Ok(())
}

fn read_forest(arg: &str) -> Result<KForest> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    Ok(KForest::from_json(text.trim())?)
}

fn forest_value(f: &KForest) -> Value {
    serde_json::from_str(&f.to_json()).expect("forest json is valid")
}

fn vector_value(v: &ForestVector) -> Value {
    Value::Array(
        v.iter()
            .map(|(f, c)| json!({"coeff": c, "forest": forest_value(f)}))
            .collect(),
    )
}

fn counts<T>(items: &[T], degree: impl Fn(&T) -> usize) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for x in items {
        *out.entry(degree(x)).or_insert(0) += 1;
    }
    out
}

fn betti(d: usize, k: usize, n: usize, verify: bool) -> Result<Value> {
    let series = betti_numbers(d, k, n)?;
    if !verify {
        return Ok(json!(series));
    }
    check_cap(n)?;
    let (homology, cohomology) = if d == 1 {
        let basis = enumerate_homology_basis_d1(n, k)?;
        (counts(&basis, |b| b.degree(k)), None)
    } else {
        let basis = enumerate_homology_basis(n, k, d)?;
        let homology = counts(&basis, |e| e.degree(d));
        let top = series.keys().chain(homology.keys()).max().copied().unwrap_or(0);
        let mut ranks = BTreeMap::new();
        for deg in 0..=top {
            let r = cohomology_rank(n, k, d, deg)? as u64;
            if r > 0 {
                ranks.insert(deg, r);
            }
        }
        (homology, Some(ranks))
    };
    let report = json!({"series": series, "homology_basis": homology, "cohomology_rank": cohomology});
    let agree = homology == series && cohomology.as_ref().map_or(true, |c| *c == series);
    println!("{report}");
    if !agree {
        return Err(Error::Verification("the counts disagree".into()).into());
    }
    eprintln!("counts agree");
    Ok(Value::Null)
}

fn basis(kind: Kind, d: usize, k: usize, n: usize, degree: Option<usize>) -> Result<Value> {
    check_cap(n)?;
    let keep = |deg: usize| degree.map_or(true, |want| want == deg);
    Ok(match kind {
        Kind::Homology if d == 1 => Value::Array(
            enumerate_homology_basis_d1(n, k)?
                .iter()
                .filter(|b| keep(b.degree(k)))
                .map(|b| json!(b.expr().to_string()))
                .collect(),
        ),
        Kind::Homology => Value::Array(
            enumerate_homology_basis(n, k, d)?
                .iter()
                .filter(|e| keep(e.degree(d)))
                .map(|e| json!(e.to_string()))
                .collect(),
        ),
        Kind::Cohomology => Value::Array(
            enumerate_cohomology_basis(n, k, d)?
                .iter()
                .filter(|f| keep(f.degree()))
                .map(forest_value)
                .collect(),
        ),
    })
}

fn coact(side: Side, forest: &KForest, blocks: &[usize]) -> Result<Value> {
    let plain = |p: &overlapk::plain::PlainForest| -> Value {
        serde_json::from_str(&p.to_string()).expect("plain forest json is valid")
    };
    let terms: Vec<Value> = match side {
        Side::Left => left_coaction(forest, blocks)?
            .iter()
            .map(|((q, parts), c)| {
                json!({"coeff": c, "quotient": plain(q), "factors": parts.iter().map(forest_value).collect::<Vec<_>>()})
            })
            .collect(),
        Side::Right => right_coaction(forest, blocks)?
            .iter()
            .map(|((q, parts), c)| {
                json!({"coeff": c, "quotient": forest_value(q), "factors": parts.iter().map(plain).collect::<Vec<_>>()})
            })
            .collect(),
    };
    Ok(Value::Array(terms))
}

fn verify(check: Check, n: Option<usize>, k: usize, d: usize) -> Result<Value> {
    let need_n = || n.ok_or_else(|| anyhow!("this check needs -n"));
    match check {
        Check::Relations => {
            let report = verify_bimodule_relations(k, d)?;
            eprintln!("all {} relation families hold", report.len());
            Ok(Value::Array(
                report
                    .iter()
                    .map(|r| json!({"relation": r.name, "instances": r.instances}))
                    .collect(),
            ))
        }
        Check::Presentation => {
            let n = need_n()?;
            check_cap(n)?;
            let r = verify_quadratic_presentation(n, k, d)?;
            eprintln!("quadratic presentation holds for n = {n}");
            Ok(json!({
                "generators": r.generators,
                "overlapping_pairs": r.overlapping_pairs,
                "cyclic_pairs": r.cyclic_pairs,
                "roundless_pairs": r.roundless_pairs,
                "edge_transfers": r.edge_transfers,
                "bivalent_pairs": r.bivalent_pairs,
                "factored_basis_forests": r.factored_basis_forests,
            }))
        }
        Check::Duality => {
            let n = need_n()?;
            check_cap(n)?;
            let (checked, nonzero) = verify_duality(n, k, d)?;
            eprintln!("product and coproduct are dual on {checked} triples");
            Ok(json!({"checked": checked, "nonzero": nonzero}))
        }
    }
}

fn series(d: usize, k: usize, order: usize, check: bool) -> Result<Value> {
    let mut table = BTreeMap::new();
    for n in 0..=order {
        table.insert(n, betti_numbers(d, k, n)?);
    }
    if check {
        let a = betti_series(d, k, order)?;
        let same = a == betti_series_exponential_form(d, k, order)? && a == betti_series_structural(d, k, order)?;
        if !same {
            bail!(Error::Verification("the closed forms disagree".into()));
        }
        if !reutenauer_check(order) {
            bail!(Error::Verification("the Lie series identity fails".into()));
        }
        eprintln!("closed forms agree to order {order}");
    }
    Ok(json!(table))
}

fn run(cli: Cli) -> Result<Value> {
    match cli.command {
        Command::Betti { d, k, n, verify } => betti(d, k, n, verify),
        Command::Basis { kind, d, k, n, degree } => basis(kind, d, k, n, degree),
        Command::Pair { forest, expr } => {
            let f = read_forest(&forest)?;
            Ok(json!(pair(&f, &BracketExpr::parse(&expr)?)?))
        }
        Command::Multiply { left, right } => {
            let v = product(&read_forest(&left)?, &read_forest(&right)?)?;
            Ok(if v.is_zero() { json!(0) } else { vector_value(&v) })
        }
        Command::Normalize { expr, k, d } => {
            let s = right_action_normalize(&BracketExpr::parse(&expr)?, k, d)?;
            Ok(Value::Array(
                s.iter().map(|(e, c)| json!({"coeff": c, "expr": e.to_string()})).collect(),
            ))
        }
        Command::Coact { side, forest, blocks } => coact(side, &read_forest(&forest)?, &blocks),
        Command::Verify { check, n, k, d } => verify(check, n, k, d),
        Command::Series { d, k, order, check } => series(d, k, order, check),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Verification(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

//! Bracket expressions for homology classes.
//!
//! Grammar: `1`, `x3`, `{e1,...,ek}`, `[e1,e2]`, `e1*e2`, parentheses.
//! Whitespace is ignored. Printing is canonical: no spaces, products flattened.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketExpr {
    Unit,
    Var(usize),
    /// The long bracket; arguments are usually variables.
    Long(Vec<BracketExpr>),
    /// Binary bracket of degree `d-1`.
    Br(Box<BracketExpr>, Box<BracketExpr>),
    /// Graded commutative product.
    Prod(Vec<BracketExpr>),
}

use BracketExpr::*;

pub fn var(i: usize) -> BracketExpr {
    Var(i)
}

pub fn br(a: BracketExpr, b: BracketExpr) -> BracketExpr {
    Br(Box::new(a), Box::new(b))
}

pub fn long(idx: &[usize]) -> BracketExpr {
    Long(idx.iter().map(|&i| Var(i)).collect())
}

pub fn prod(factors: Vec<BracketExpr>) -> BracketExpr {
    Prod(factors).simplified()
}

impl BracketExpr {
    /// Homological degree: long brackets contribute `(k-1)d-1`, binary
    /// brackets `d-1`.
    pub fn degree(&self, d: usize) -> usize {
        match self {
            Unit | Var(_) => 0,
            Long(args) => {
                (args.len() - 1) * d - 1 + args.iter().map(|a| a.degree(d)).sum::<usize>()
            }
            Br(a, b) => a.degree(d) + b.degree(d) + d - 1,
            Prod(fs) => fs.iter().map(|f| f.degree(d)).sum(),
        }
    }

    /// Variable indices in order of appearance.
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Unit => {}
            Var(i) => out.push(*i),
            Long(args) | Prod(args) => args.iter().for_each(|a| a.collect_vars(out)),
            Br(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn min_var(&self) -> Option<usize> {
        self.vars().into_iter().min()
    }

    pub fn contains_long(&self) -> bool {
        match self {
            Unit | Var(_) => false,
            Long(_) => true,
            Prod(fs) => fs.iter().any(|f| f.contains_long()),
            Br(a, b) => a.contains_long() || b.contains_long(),
        }
    }

    /// Long-bracket arity, if all long brackets agree.
    pub fn long_arity(&self) -> Option<usize> {
        match self {
            Unit | Var(_) => None,
            Long(args) => Some(args.len()),
            Prod(fs) => fs.iter().find_map(|f| f.long_arity()),
            Br(a, b) => a.long_arity().or_else(|| b.long_arity()),
        }
    }

    /// True if every long bracket argument is a variable.
    pub fn is_normalized(&self) -> bool {
        match self {
            Unit | Var(_) => true,
            Long(args) => args.iter().all(|a| matches!(a, Var(_))),
            Prod(fs) => fs.iter().all(|f| f.is_normalized()),
            Br(a, b) => a.is_normalized() && b.is_normalized(),
        }
    }

    /// Checks the variables are exactly `1..=n`, each once; returns `n`.
    pub fn check_linear(&self) -> Result<usize> {
        let mut v = self.vars();
        v.sort_unstable();
        for (i, &x) in v.iter().enumerate() {
            if x != i + 1 {
                return Err(Error::Malformed(format!(
                    "variables must be x1..xn each used once, got {:?}",
                    self.vars()
                )));
            }
        }
        Ok(v.len())
    }

    /// Flattens nested products, drops unit factors and collapses trivial
    /// products. Does not reorder anything, so no signs arise.
    pub fn simplified(&self) -> BracketExpr {
        match self {
            Unit | Var(_) => self.clone(),
            Long(args) => Long(args.iter().map(|a| a.simplified()).collect()),
            Br(a, b) => br(a.simplified(), b.simplified()),
            Prod(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.simplified() {
                        Unit => {}
                        Prod(inner) => flat.extend(inner),
                        g => flat.push(g),
                    }
                }
                match flat.len() {
                    0 => Unit,
                    1 => flat.pop().expect("one factor"),
                    _ => Prod(flat),
                }
            }
        }
    }

    /// Renames variables through `f`.
    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> BracketExpr {
        match self {
            Unit => Unit,
            Var(i) => Var(f(*i)),
            Long(args) => Long(args.iter().map(|a| a.map_vars(f)).collect()),
            Prod(fs) => Prod(fs.iter().map(|a| a.map_vars(f)).collect()),
            Br(a, b) => br(a.map_vars(f), b.map_vars(f)),
        }
    }

    pub fn parse(s: &str) -> Result<BracketExpr> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { toks, pos: 0 };
        let e = p.product()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e.simplified())
    }
}

impl std::str::FromStr for BracketExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BracketExpr::parse(s)
    }
}

struct Parser {
    toks: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn product(&mut self) -> Result<BracketExpr> {
        let mut fs = vec![self.atom()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            fs.push(self.atom()?);
        }
        Ok(if fs.len() == 1 { fs.pop().expect("one") } else { Prod(fs) })
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an index"));
        }
        let s: String = self.toks[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("index too large"))
    }

    fn atom(&mut self) -> Result<BracketExpr> {
        match self.peek() {
            Some('1') => {
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.err("bare number"));
                }
                Ok(Unit)
            }
            Some('x') => {
                self.pos += 1;
                let i = self.number()?;
                if i == 0 {
                    return Err(self.err("indices start at 1"));
                }
                Ok(Var(i))
            }
            Some('{') => {
                self.pos += 1;
                let mut args = vec![self.product()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    args.push(self.product()?);
                }
                self.expect('}')?;
                Ok(Long(args))
            }
            Some('[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(',')?;
                let b = self.product()?;
                self.expect(']')?;
                Ok(br(a, b))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.product()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit => f.write_str("1"),
            Var(i) => write!(f, "x{i}"),
            Long(args) => {
                f.write_str("{")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
            Br(a, b) => write!(f, "[{a},{b}]"),
            Prod(fs) => {
                for (i, a) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    if matches!(a, Prod(_)) {
                        write!(f, "({a})")?;
                    } else {
                        write!(f, "{a}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["1", "x3", "{x1,x2,x5}", "[{x1,x2,x3},x4]", "x1*[x2,x3]*{x4,x5,x6}", "{x1,x2,x3*x4}"] {
            assert_eq!(BracketExpr::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn whitespace_and_parentheses() {
        let e = BracketExpr::parse(" ( x1 * x2 ) * [ x3 , x4 ] ").unwrap();
        assert_eq!(e.to_string(), "x1*x2*[x3,x4]");
    }

    #[test]
    fn degrees() {
        assert_eq!(var(1).degree(2), 0);
        assert_eq!(long(&[1, 2, 3]).degree(2), 3);
        assert_eq!(br(long(&[1, 2, 3]), var(4)).degree(2), 4);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x0", "[x1]", "{x1,}", "x1**x2", "2", "x1)"] {
            assert!(BracketExpr::parse(s).is_err(), "{s}");
        }
    }
}

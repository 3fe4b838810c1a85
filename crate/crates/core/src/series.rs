//! Truncated exponential generating series in `x` whose coefficients are
//! Laurent polynomials in `q`, and the Betti-number series built from them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, scalar, scalar_ratio, Scalar};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn add_term(&mut self, exp: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*q"),
                _ => format!("{c}*q^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `sum_{j=0}^{N} c_j x^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSeries {
    order: usize,
    coeffs: Vec<LaurentPoly>,
}

impl GenSeries {
    pub fn zero(order: usize) -> Self {
        GenSeries {
            order,
            coeffs: vec![LaurentPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = LaurentPoly::constant(Scalar::one());
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = LaurentPoly::constant(Scalar::one());
        }
        s
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> LaurentPoly) -> Self {
        GenSeries {
            order,
            coeffs: (0..=order).map(&mut f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize) -> &LaurentPoly {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, p: LaurentPoly) {
        self.coeffs[j] = p;
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "series truncation mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        Self::from_fn(self.order, |j| self.coeffs[j].add(&other.coeffs[j]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&scalar(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_fn(self.order, |j| self.coeffs[j].scale(c))
    }

    pub fn scale_poly(&self, p: &LaurentPoly) -> Self {
        Self::from_fn(self.order, |j| self.coeffs[j].mul(p))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let mut out = Self::zero(self.order);
        for i in 0..=self.order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=self.order - i {
                if !other.coeffs[j].is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
                }
            }
        }
        out
    }

    fn require_no_constant(&self, what: &str) -> Result<()> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(Error::Series(format!("{what}: inner series has a nonzero constant term")))
        }
    }

    /// `F(G(x))`; `G` must have no constant term.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_order(g);
        g.require_no_constant("compose")?;
        let mut out = Self::zero(self.order);
        for j in (0..=self.order).rev() {
            out = out.mul(g);
            out.coeffs[0] = out.coeffs[0].add(&self.coeffs[j]);
        }
        Ok(out)
    }

    /// `exp(G)` for `G` without constant term.
    pub fn exp(&self) -> Result<Self> {
        exp_series(self.order).compose(self)
    }

    /// `ln(1 + G)` for `G` without constant term.
    pub fn ln_1p(&self) -> Result<Self> {
        let log = Self::from_fn(self.order, |j| {
            if j == 0 {
                LaurentPoly::zero()
            } else {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                LaurentPoly::constant(scalar_ratio(sign, j as i64))
            }
        });
        log.compose(self)
    }

    /// `q^{-d} F(q^d x)`: the `x^j` coefficient gains `q^{d(j-1)}`.
    pub fn suspend(&self, d: i64) -> Self {
        Self::from_fn(self.order, |j| self.coeffs[j].shift(d * (j as i64 - 1)))
    }

    pub fn derivative(&self) -> Self {
        Self::from_fn(self.order, |j| {
            if j < self.order {
                self.coeffs[j + 1].scale(&scalar((j + 1) as i64))
            } else {
                LaurentPoly::zero()
            }
        })
    }

    /// Substitutes `c x` for `x`.
    pub fn rescale_x(&self, c: &LaurentPoly) -> Self {
        let mut power = LaurentPoly::constant(Scalar::one());
        let mut out = Self::zero(self.order);
        for j in 0..=self.order {
            out.coeffs[j] = self.coeffs[j].mul(&power);
            power = power.mul(c);
        }
        out
    }
}

/// `e^x`, the series of the commutative operad.
pub fn exp_series(order: usize) -> GenSeries {
    GenSeries::from_fn(order, |j| {
        LaurentPoly::constant(Scalar::new(BigInt::one(), factorial(j)))
    })
}

/// `-ln(1 - x)`, the series of the Lie operad.
pub fn lie_series(order: usize) -> GenSeries {
    GenSeries::from_fn(order, |j| {
        if j == 0 {
            LaurentPoly::zero()
        } else {
            LaurentPoly::constant(scalar_ratio(1, j as i64))
        }
    })
}

/// `q^{k-2} x^k/(k-1)! * sum_j x^j/((j+k) j!)`.
pub fn h1k_series(k: usize, order: usize) -> GenSeries {
    assert!(k >= 2, "k must be at least 2");
    GenSeries::from_fn(order, |n| {
        if n < k {
            return LaurentPoly::zero();
        }
        let j = n - k;
        let den = factorial(k - 1) * BigInt::from(n) * factorial(j);
        LaurentPoly::monomial(k as i64 - 2, Scalar::new(BigInt::one(), den))
    })
}

fn check_dk(d: usize, k: usize) -> Result<()> {
    if d < 1 || k < 2 {
        return Err(Error::Unsupported(format!("series need d >= 1 and k >= 2, got d = {d}, k = {k}")));
    }
    Ok(())
}

fn check_nonnegative(s: &GenSeries) -> Result<()> {
    for j in 0..=s.order() {
        if let Some(e) = s.coeff(j).min_exponent() {
            if e < 0 {
                return Err(Error::Series(format!("negative power q^{e} at x^{j}")));
            }
        }
    }
    Ok(())
}

/// `e^x * exp(-q^{1-d} ln(1 - B))` with
/// `B = q^{kd-2} x^k/(k-1)! * sum_j (q^{d-1} x)^j/((j+k) j!)`.
pub fn betti_series(d: usize, k: usize, order: usize) -> Result<GenSeries> {
    check_dk(d, k)?;
    let b = GenSeries::from_fn(order, |n| {
        if n < k {
            return LaurentPoly::zero();
        }
        let j = n - k;
        let den = factorial(k - 1) * BigInt::from(n) * factorial(j);
        let exp = (k * d) as i64 - 2 + (d as i64 - 1) * j as i64;
        LaurentPoly::monomial(exp, Scalar::new(BigInt::one(), den))
    });
    let log = b.scale(&scalar(-1)).ln_1p()?;
    let power = log
        .scale_poly(&LaurentPoly::monomial(1 - d as i64, scalar(-1)))
        .exp()?;
    let out = exp_series(order).mul(&power);
    check_nonnegative(&out)?;
    Ok(out)
}

/// The first closed form: the base of the power is written through `e^{q^{d-1}x}`
/// and a truncated exponential.
pub fn betti_series_exponential_form(d: usize, k: usize, order: usize) -> Result<GenSeries> {
    check_dk(d, k)?;
    let qd1 = LaurentPoly::monomial(d as i64 - 1, Scalar::one());
    let mq = LaurentPoly::monomial(k as i64 - 2, scalar(if k % 2 == 0 { 1 } else { -1 }));
    // sum_{j<k} (-y)^j/j! with y = q^{d-1} x
    let trunc = GenSeries::from_fn(order, |j| {
        if j >= k {
            return LaurentPoly::zero();
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        LaurentPoly::constant(Scalar::new(BigInt::from(sign), factorial(j)))
    })
    .rescale_x(&qd1);
    let e_y = exp_series(order).rescale_x(&qd1);
    // inner - 1 = -(-q)^{k-2} + (-q)^{k-2} trunc * e^y
    let inner_minus_one = trunc
        .mul(&e_y)
        .sub(&GenSeries::one(order))
        .scale_poly(&mq);
    let power = inner_minus_one
        .ln_1p()?
        .scale_poly(&LaurentPoly::monomial(1 - d as i64, scalar(-1)))
        .exp()?;
    let out = exp_series(order).mul(&power);
    check_nonnegative(&out)?;
    Ok(out)
}

/// `Com o (x + (Lie o H_1^(k)){d-1})` assembled from the operations.
pub fn betti_series_structural(d: usize, k: usize, order: usize) -> Result<GenSeries> {
    check_dk(d, k)?;
    let lie_h = lie_series(order).compose(&h1k_series(k, order))?;
    let inner = GenSeries::x(order).add(&lie_h.suspend(d as i64 - 1));
    exp_series(order).compose(&inner)
}

/// Betti numbers of the `n`-point space, keyed by degree; zero entries omitted.
pub fn betti_numbers(d: usize, k: usize, n: usize) -> Result<BTreeMap<usize, u64>> {
    let s = betti_series(d, k, n.max(1))?;
    let nf = Scalar::from_integer(factorial(n));
    let mut out = BTreeMap::new();
    for (e, c) in s.coeff(n).terms() {
        let v = c * &nf;
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Series(format!("coefficient {v} of q^{e} is not a count")));
        }
        let v = v
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Series("Betti number overflow".into()))?;
        out.insert(e as usize, v);
    }
    Ok(out)
}

/// True if `x + F_Lie(h) = F_Lie` to the given order.
pub fn reutenauer_identity_holds(h: &GenSeries) -> Result<bool> {
    let order = h.order();
    let lie = lie_series(order);
    let lhs = GenSeries::x(order).add(&lie.compose(h)?);
    Ok(lhs == lie)
}

pub fn reutenauer_check(order: usize) -> bool {
    reutenauer_identity_holds(&h1k_series(2, order)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64, num: i64, den: i64) -> LaurentPoly {
        LaurentPoly::monomial(e, scalar_ratio(num, den))
    }

    #[test]
    fn compose_with_identity() {
        let f = exp_series(6);
        assert_eq!(f.compose(&GenSeries::x(6)).unwrap(), f);
    }

    #[test]
    fn compose_rejects_constant() {
        assert!(exp_series(4).compose(&GenSeries::one(4)).is_err());
    }

    #[test]
    fn compose_lie_with_geometric() {
        // -ln(1 - x/(1-x)) = ln(1-x) - ln(1-2x) = sum (2^j - 1) x^j / j
        let geo = GenSeries::from_fn(4, |j| {
            if j == 0 {
                LaurentPoly::zero()
            } else {
                q(0, 1, 1)
            }
        });
        let c = lie_series(4).compose(&geo).unwrap();
        for j in 1..=4i64 {
            assert_eq!(*c.coeff(j as usize), q(0, (1 << j) - 1, j));
        }
    }

    #[test]
    fn suspension() {
        let f = lie_series(5);
        assert_eq!(f.suspend(0), f);
        assert_eq!(*f.suspend(2).coeff(4), q(6, 1, 4));
    }

    #[test]
    fn h1k_coefficients() {
        let h = h1k_series(3, 8);
        assert_eq!(*h.coeff(3), q(1, 1, 6));
        assert_eq!(*h.coeff(4), q(1, 1, 8));
        // derivative is q^{k-2} x^{k-1} e^x/(k-1)!
        let lhs = h.derivative();
        let mut rhs = exp_series(8).mul(&GenSeries::from_fn(8, |j| if j == 2 { q(1, 1, 2) } else { LaurentPoly::zero() }));
        rhs.set_coeff(8, LaurentPoly::zero());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn small_betti() {
        let m = |v: &[(usize, u64)]| v.iter().copied().collect::<BTreeMap<_, _>>();
        assert_eq!(betti_numbers(1, 3, 4).unwrap(), m(&[(0, 1), (1, 7)]));
        assert_eq!(betti_numbers(2, 3, 4).unwrap(), m(&[(0, 1), (3, 4), (4, 3)]));
        assert_eq!(betti_numbers(3, 3, 3).unwrap(), m(&[(0, 1), (5, 1)]));
        assert_eq!(betti_numbers(2, 3, 0).unwrap(), m(&[(0, 1)]));
        assert_eq!(betti_numbers(2, 4, 1).unwrap(), m(&[(0, 1)]));
    }

    #[test]
    fn three_forms_agree() {
        for d in 1..=3 {
            for k in 2..=4 {
                let a = betti_series(d, k, 10).unwrap();
                assert_eq!(a, betti_series_exponential_form(d, k, 10).unwrap());
                assert_eq!(a, betti_series_structural(d, k, 10).unwrap());
            }
        }
    }

    #[test]
    fn reutenauer() {
        assert!(reutenauer_check(3));
        assert!(reutenauer_check(8));
        let mut h = h1k_series(2, 8);
        h.set_coeff(5, q(0, 1, 7));
        assert!(!reutenauer_identity_holds(&h).unwrap());
    }
}

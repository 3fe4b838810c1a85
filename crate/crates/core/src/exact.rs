//! Exact scalars, signed formal sums and Koszul signs.
//!
//! Everything in this crate is computed over the integers or the rationals.
//! Forest vectors and pairing values are integral and use checked `i64`
//! arithmetic so that an overflow aborts loudly instead of wrapping; rank
//! computations and generating series use arbitrary-precision rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Exact rational number in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn scalar_ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an integral scalar to `i64`, or `None` if it is fractional or too large.
pub fn scalar_to_i64(s: &Scalar) -> Option<i64> {
    if s.is_integer() {
        s.to_integer().to_i64()
    } else {
        None
    }
}

/// `(-1)^e`.
#[inline]
pub fn sign_pow(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

#[inline]
pub(crate) fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer coefficient overflow")
}

#[inline]
pub(crate) fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer coefficient overflow")
}

/// A finite formal integer-linear combination of keys.
///
/// Zero coefficients are never stored, so two sums are equal exactly when
/// their coefficient maps agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_term(key: K, coeff: i64) -> Self {
        let mut s = Self::new();
        s.add_term(key, coeff);
        s
    }

    pub fn add_term(&mut self, key: K, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let c = checked_add(*o.get(), coeff);
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &FormalSum<K>, factor: i64) {
        if factor == 0 {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), checked_mul(*c, factor));
        }
    }

    pub fn add(&self, other: &FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_assign_scaled(other, 1);
        out
    }

    pub fn sub(&self, other: &FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_assign_scaled(other, -1);
        out
    }

    pub fn scale(&self, factor: i64) -> FormalSum<K> {
        let mut out = Self::new();
        out.add_assign_scaled(self, factor);
        out
    }

    pub fn coeff(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient-wise dot product, treating keys as an orthonormal basis.
    pub fn dot(&self, other: &FormalSum<K>) -> i64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .fold(0, |acc, (k, c)| checked_add(acc, checked_mul(c, large.coeff(k))))
    }

    /// Applies a signed relabeling to every key.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> (L, i64)) -> FormalSum<L> {
        let mut out = FormalSum::new();
        for (k, c) in self.iter() {
            let (l, s) = f(k);
            out.add_term(l, checked_mul(c, s));
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// An element of an orientation set: an edge or a square vertex, with its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement<L> {
    pub label: L,
    pub degree: usize,
}

/// Sign of reordering graded elements.
///
/// `order[i]` is the original position of the element placed at position `i`.
/// Each pair of odd-degree elements whose relative order flips contributes a
/// factor of −1.
pub fn koszul_sign(degrees: &[usize], order: &[usize]) -> i64 {
    debug_assert_eq!(degrees.len(), order.len());
    let odd: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&o| degrees[o] % 2 == 1)
        .collect();
    sign_pow(inversions(&odd))
}

/// [`koszul_sign`] over labelled elements.
pub fn koszul_sign_of<L>(elements: &[GradedElement<L>], order: &[usize]) -> i64 {
    let degrees: Vec<usize> = elements.iter().map(|e| e.degree).collect();
    koszul_sign(&degrees, order)
}

/// Sign of sorting `keys` ascending while carrying the given degrees along.
pub fn koszul_sort_sign<T: Ord>(keys: &[T], degrees: &[usize]) -> i64 {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    koszul_sign(degrees, &order)
}

/// Parity of the permutation sorting `values` (which must be distinct).
pub fn sort_parity<T: Ord>(values: &[T]) -> usize {
    inversions(values) % 2
}

fn inversions<T: Ord>(values: &[T]) -> usize {
    let mut inv = 0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] > values[j] {
                inv += 1;
            }
        }
    }
    inv
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_permutation_has_positive_sign() {
        assert_eq!(koszul_sign(&[1, 2, 3, 1], &[0, 1, 2, 3]), 1);
    }

    #[test]
    fn two_odd_elements_anticommute() {
        // d = 2 edges have degree 1
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]), -1);
    }

    #[test]
    fn edge_past_square_in_d3_k3() {
        // edge degree 2, square degree (k-2)d = 3: (-1)^{2*3} = +1
        assert_eq!(koszul_sign(&[2, 3], &[1, 0]), 1);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let v = FormalSum::from_term("a", 3);
        assert!(v.add(&v.scale(-1)).is_zero());
    }

    #[test]
    fn scaling_distributes() {
        let v = FormalSum::from_term("v", 1);
        let w = FormalSum::from_term("w", 1);
        let lhs = v.add(&w).scale(2);
        let mut rhs = FormalSum::new();
        rhs.add_term("v", 2);
        rhs.add_term("w", 2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cancelled_terms_leave_support() {
        let mut s = FormalSum::new();
        s.add_term("T1", 3);
        s.add_term("T1", -3);
        s.add_term("T2", 1);
        assert_eq!(s.support().copied().collect::<Vec<_>>(), vec!["T2"]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_detected() {
        let mut s = FormalSum::from_term(0u8, i64::MAX);
        s.add_term(0u8, 1);
    }
}

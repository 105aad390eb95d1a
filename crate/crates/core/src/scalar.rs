//! Scalar and ring abstractions shared by every algebraic layer.
//!
//! [`Scalar`] is the exact coefficient field (rationals). [`CommutativeRing`]
//! is the weaker interface the Pfaffian needs, implemented by scalars,
//! integers, polynomials and truncated series alike.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Zero};

/// An exact field of characteristic zero used for polynomial coefficients.
pub trait Scalar:
    Num + Clone + Neg<Output = Self> + Debug + Display + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Parses `"p"` or `"p/q"`.
    fn parse_exact(s: &str) -> Option<Self>;

    fn from_bigint(n: &BigInt) -> Self {
        Self::parse_exact(&n.to_string()).expect("integer out of scalar range")
    }

    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

fn split_fraction(s: &str) -> (&str, Option<&str>) {
    match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.trim(), None),
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let (n, d) = split_fraction(s);
        let num: BigInt = n.parse().ok()?;
        let den: BigInt = match d {
            Some(d) => d.parse().ok()?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let (n, d) = split_fraction(s);
        let num: i128 = n.parse().ok()?;
        let den: i128 = match d {
            Some(d) => d.parse().ok()?,
            None => 1,
        };
        if den == 0 {
            return None;
        }
        Some(Ratio::new(num, den))
    }
}

/// Generalized binomial coefficient `binom(n, k)` for any integer `n`.
pub fn binomial<C: Scalar>(n: i64, k: u32) -> C {
    let mut num = C::one();
    let mut den = C::one();
    for j in 0..k as i64 {
        num = num * C::from_i64(n - j);
        den = den * C::from_i64(j + 1);
    }
    num / den
}

/// Commutative ring with unit, as needed by Pfaffian expansion.
///
/// Elements of polynomial and series rings carry a context (variable roster,
/// truncation windows), so the unit is obtained from an existing element.
pub trait CommutativeRing: Clone + PartialEq {
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_zero_like(&self) -> Self;
    fn ring_one_like(&self) -> Self;
    fn ring_is_zero(&self) -> bool;
}

macro_rules! numeric_ring {
    ($($t:ty),*) => {$(
        impl CommutativeRing for $t {
            fn ring_add(&self, other: &Self) -> Self { self.clone() + other.clone() }
            fn ring_sub(&self, other: &Self) -> Self { self.clone() - other.clone() }
            fn ring_mul(&self, other: &Self) -> Self { self.clone() * other.clone() }
            fn ring_neg(&self) -> Self { -self.clone() }
            fn ring_zero_like(&self) -> Self { <$t>::zero() }
            fn ring_one_like(&self) -> Self { <$t>::one() }
            fn ring_is_zero(&self) -> bool { Zero::is_zero(self) }
        }
    )*};
}

numeric_ring!(i64, i128, BigInt, BigRational, Ratio<i128>);

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial::<Q>(5, 2), Q::from_i64(10));
        assert_eq!(binomial::<Q>(-1, 3), Q::from_i64(-1));
        assert_eq!(binomial::<Q>(-2, 1), Q::from_i64(-2));
        assert_eq!(binomial::<Q>(-3, 2), Q::from_i64(6));
        assert_eq!(binomial::<Q>(2, 3), Q::from_i64(0));
        assert_eq!(binomial::<Q>(7, 0), Q::from_i64(1));
    }

    #[test]
    fn parse_fractions() {
        assert_eq!(Q::parse_exact("-3/4"), Some(Q::from_frac(-3, 4)));
        assert_eq!(Q::parse_exact("12"), Some(Q::from_i64(12)));
        assert_eq!(Q::parse_exact("1/0"), None);
        assert_eq!(
            Ratio::<i128>::parse_exact("6/4"),
            Some(Ratio::new(3, 2))
        );
    }
}

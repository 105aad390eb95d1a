//! The multiplicative formal group law `a (+) b = a + b + beta a b`, its
//! difference and the bar involution.

use std::sync::Arc;

use crate::error::Result;
use crate::poly::{Polynomial, Truncation};
use crate::scalar::{CommutativeRing, Scalar};
use crate::series::{expand_ratio, LaurentPolynomial, NestedLaurentSeries, SeriesContext};

/// Rings that contain the deformation parameter `beta`.
pub trait BetaRing: CommutativeRing {
    fn beta_like(&self) -> Self;
}

impl<C: Scalar> BetaRing for Polynomial<C> {
    fn beta_like(&self) -> Self {
        Polynomial::beta(self.roster())
    }
}

impl<C: Scalar> BetaRing for LaurentPolynomial<C> {
    fn beta_like(&self) -> Self {
        self.ring_one_like().mul_poly(&Polynomial::beta(self.roster()))
    }
}

/// A quotient kept unevaluated until it is expanded in a series context.
#[derive(Clone, Debug, PartialEq)]
pub struct Fraction<T> {
    pub num: T,
    pub den: T,
}

impl<T: BetaRing> Fraction<T> {
    pub fn mul(&self, other: &Self) -> Self {
        Fraction { num: self.num.ring_mul(&other.num), den: self.den.ring_mul(&other.den) }
    }

    /// `self / other`.
    pub fn div(&self, other: &Self) -> Self {
        Fraction { num: self.num.ring_mul(&other.den), den: self.den.ring_mul(&other.num) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.ring_is_zero()
    }
}

impl<C: Scalar> Fraction<LaurentPolynomial<C>> {
    pub fn expand(&self, ctx: &Arc<SeriesContext>) -> Result<NestedLaurentSeries<C>> {
        expand_ratio(&self.num, &self.den, ctx)
    }
}

impl<C: Scalar> Fraction<Polynomial<C>> {
    /// Power-series expansion truncated by `trunc`.
    pub fn expand_truncated(&self, trunc: &Truncation) -> Result<Polynomial<C>> {
        let inv = self.den.inverse_truncated(trunc)?;
        self.num.try_mul_truncated(&inv, trunc)
    }
}

pub fn oplus<T: BetaRing>(a: &T, b: &T) -> T {
    let beta = a.beta_like();
    a.ring_add(b).ring_add(&beta.ring_mul(a).ring_mul(b))
}

/// `a (-) b = (a - b) / (1 + beta b)`.
pub fn ominus<T: BetaRing>(a: &T, b: &T) -> Fraction<T> {
    let beta = a.beta_like();
    Fraction { num: a.ring_sub(b), den: a.ring_one_like().ring_add(&beta.ring_mul(b)) }
}

/// `bar(t) = 0 (-) t = -t / (1 + beta t)`.
pub fn bar<T: BetaRing>(t: &T) -> Fraction<T> {
    ominus(&t.ring_zero_like(), t)
}

/// `(a (-) b) / (a (+) b)`, the pair factor shared by all generating functions.
pub fn pair_ratio<T: BetaRing>(a: &T, b: &T) -> Fraction<T> {
    let d = ominus(a, b);
    Fraction { num: d.num, den: d.den.ring_mul(&oplus(a, b)) }
}

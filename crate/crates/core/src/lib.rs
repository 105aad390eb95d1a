//! Exact computation of K-theoretic Schur P/Q functions and their duals.
//!
//! Two independent routes are provided: coefficient extraction from
//! generating functions ([`genfun`]) and vacuum expectation values in a
//! beta-deformed neutral-fermion Fock space ([`fock`]). Both are generic over
//! an exact [`Scalar`]; the aliases below fix arbitrary-precision rationals.

pub mod error;
pub mod fock;
pub mod formal_group;
pub mod genfun;
pub mod partition;
pub mod pfaffian;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod symfun;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Roster, Truncation};
pub use scalar::{binomial, CommutativeRing, Scalar};
pub use series::{AuxVar, LaurentPolynomial, LinearCap, NestedLaurentSeries, SeriesContext};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Sparse polynomial in beta and an alphabet, with rational coefficients.
pub type ExactPolynomial = Polynomial<Rational>;

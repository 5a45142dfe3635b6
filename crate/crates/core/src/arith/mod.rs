//! Exact arithmetic: rationals, sparse multivariate polynomials and normalized rational
//! functions.

mod gcd;
mod heugcd;
mod monomial;
mod poly;
mod ratfunc;

pub use gcd::{poly_gcd, poly_lcm};
pub use monomial::{Monomial, Var};
pub use poly::Poly;
pub use ratfunc::RatFunc;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substituted denominator vanishes identically")]
    SubstitutedDenominatorVanishes,
}

/// Rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

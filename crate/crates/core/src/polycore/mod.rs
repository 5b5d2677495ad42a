//! Exact multivariate polynomial arithmetic over the rationals and over
//! rational-function coefficient fields, with monomial orders and basic calculus.

mod factor;
mod field;
mod gcd;
mod monomial;
mod order;
pub mod parse;
mod poly;
mod ratfn;
mod varset;

pub use factor::factor_univariate;
pub use field::{Field, Rationals};
pub use gcd::{exact_div, mv_gcd, perfect_power_root, squarefree_part};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use poly::{jacobian, Polynomial, QPoly};
pub use ratfn::{RatFn, RatFnField};
pub use varset::VarSet;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand for a rational number from an integer.
pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational number from a numerator/denominator pair.
pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

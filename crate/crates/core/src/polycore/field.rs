use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field presented as a context object; elements are plain data.
///
/// Equality of elements must go through [`Field::eq_el`] because some fields
/// (quotient-field coefficients) have non-structural equality.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    type El: Clone + std::fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn eq_el(&self, a: &Self::El, b: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::El) -> Self::El;
    fn from_i64(&self, n: i64) -> Self::El;
    fn fmt_el(&self, a: &Self::El) -> String;

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b))
    }
    fn is_one(&self, a: &Self::El) -> bool {
        self.eq_el(a, &self.one())
    }
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn eq_el(&self, a: &BigRational, b: &BigRational) -> bool {
        a == b
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn fmt_el(&self, a: &BigRational) -> String {
        fmt_rational(a)
    }
}

/// Canonical `num/den` or `num` rendering with a leading minus sign.
pub fn fmt_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        format!("{}", a.numer())
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// True when the rational is negative (used for sign-aware term rendering).
pub fn rational_is_negative(a: &BigRational) -> bool {
    a.is_negative()
}

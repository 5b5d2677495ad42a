use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::field::{Field, Rationals};
use super::gcd::{exact_div, mv_gcd};
use super::order::MonomialOrder;
use super::poly::{Polynomial, QPoly};
use super::varset::VarSet;

/// A rational function num/den in canonical form: gcd(num, den) = 1 and den
/// has leading coefficient 1 under grevlex.
#[derive(Clone, Debug)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
}

impl RatFn {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFn { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(num: QPoly) -> Self {
        let den = QPoly::one(Rationals, num.vars().clone(), num.order().clone());
        RatFn { num, den }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one(Rationals, self.den.vars().clone(), self.den.order().clone());
            return;
        }
        let g = mv_gcd(&self.num, &self.den);
        if !g.is_constant() {
            self.num = exact_div(&self.num, &g).expect("gcd divides numerator");
            self.den = exact_div(&self.den, &g).expect("gcd divides denominator");
        }
        let lc = self.den.leading_coef().expect("nonzero denominator");
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Field of rational functions over the rationals in a fixed parameter set.
#[derive(Clone, Debug)]
pub struct RatFnField {
    params: Arc<VarSet>,
    order: MonomialOrder,
}

impl RatFnField {
    pub fn new(params: Arc<VarSet>) -> Self {
        RatFnField { params, order: MonomialOrder::GrevLex }
    }

    pub fn params(&self) -> &Arc<VarSet> {
        &self.params
    }

    pub fn from_poly(&self, p: QPoly) -> RatFn {
        RatFn::from_poly(p.with_order(self.order.clone()))
    }

    fn poly_zero(&self) -> QPoly {
        Polynomial::zero(Rationals, self.params.clone(), self.order.clone())
    }

    fn poly_one(&self) -> QPoly {
        QPoly::one(Rationals, self.params.clone(), self.order.clone())
    }
}

impl PartialEq for RatFnField {
    fn eq(&self, other: &Self) -> bool {
        self.params.names() == other.params.names()
    }
}

impl Field for RatFnField {
    type El = RatFn;

    fn zero(&self) -> RatFn {
        RatFn { num: self.poly_zero(), den: self.poly_one() }
    }

    fn one(&self) -> RatFn {
        RatFn { num: self.poly_one(), den: self.poly_one() }
    }

    fn is_zero(&self, a: &RatFn) -> bool {
        a.num.is_zero()
    }

    fn eq_el(&self, a: &RatFn, b: &RatFn) -> bool {
        // cross multiply; canonical form would also allow structural equality
        a.num.checked_mul(&b.den).unwrap() == b.num.checked_mul(&a.den).unwrap()
    }

    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let num = a
            .num
            .checked_mul(&b.den)
            .unwrap()
            .checked_add(&b.num.checked_mul(&a.den).unwrap())
            .unwrap();
        let den = a.den.checked_mul(&b.den).unwrap();
        RatFn::new(num, den)
    }

    fn sub(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let num = a
            .num
            .checked_mul(&b.den)
            .unwrap()
            .checked_sub(&b.num.checked_mul(&a.den).unwrap())
            .unwrap();
        let den = a.den.checked_mul(&b.den).unwrap();
        RatFn::new(num, den)
    }

    fn neg(&self, a: &RatFn) -> RatFn {
        RatFn { num: a.num.neg(), den: a.den.clone() }
    }

    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        RatFn::new(
            a.num.checked_mul(&b.num).unwrap(),
            a.den.checked_mul(&b.den).unwrap(),
        )
    }

    fn inv(&self, a: &RatFn) -> RatFn {
        assert!(!a.num.is_zero(), "inverse of zero");
        RatFn::new(a.den.clone(), a.num.clone())
    }

    fn from_i64(&self, n: i64) -> RatFn {
        RatFn {
            num: Polynomial::constant(
                Rationals,
                self.params.clone(),
                self.order.clone(),
                BigRational::from_integer(n.into()),
            ),
            den: self.poly_one(),
        }
    }

    fn fmt_el(&self, a: &RatFn) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::*;

    fn setup() -> (RatFnField, QPoly, QPoly) {
        let params = VarSet::new(vec!["t", "u"]);
        let k = RatFnField::new(params.clone());
        let t = parse("t", &params, &MonomialOrder::GrevLex).unwrap();
        let u = parse("u", &params, &MonomialOrder::GrevLex).unwrap();
        (k, t, u)
    }

    #[test]
    fn canonical_form_reduces() {
        let (k, t, u) = setup();
        let f = RatFn::new(
            t.checked_mul(&u).unwrap(),
            t.checked_mul(&t).unwrap(),
        );
        assert_eq!(f.num(), &u);
        assert_eq!(f.den(), &t);
        assert!(k.eq_el(&f, &RatFn::new(u.clone(), t.clone())));
    }

    #[test]
    fn field_arithmetic() {
        let (k, t, u) = setup();
        let a = RatFn::new(k.one().num().clone(), t.clone()); // 1/t
        let b = RatFn::new(k.one().num().clone(), u.clone()); // 1/u
        let s = k.add(&a, &b); // (t+u)/(tu)
        let expect = RatFn::new(
            t.checked_add(&u).unwrap(),
            t.checked_mul(&u).unwrap(),
        );
        assert!(k.eq_el(&s, &expect));
        let p = k.mul(&s, &k.inv(&expect));
        assert!(k.eq_el(&p, &k.one()));
        let d = k.sub(&s, &expect);
        assert!(k.is_zero(&d));
        assert!(k.eq_el(&k.from_i64(-3), &k.neg(&k.from_i64(3))));
    }

    #[test]
    fn monic_denominator_normalization() {
        let (_, t, _) = setup();
        let two_t = t.scale(&num_rational::BigRational::from_integer(2.into()));
        let f = RatFn::new(t.clone(), two_t); // t/(2t) = (1/2)/1
        assert!(f.is_poly());
        assert_eq!(f.to_string(), "1/2");
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use super::{Monomial, MonomialOrder};

/// Exact division `a / b`, or `None` when `b` does not divide `a`.
pub fn exact_div(a: &QPoly, b: &QPoly) -> Option<QPoly> {
    assert!(a.same_ambient(b), "exact_div: ambient mismatch");
    assert!(!b.is_zero(), "exact_div by zero");
    let order = MonomialOrder::GrevLex;
    let mut rem = a.with_order(order.clone());
    let b = b.with_order(order.clone());
    let mut q = QPoly::zero(*a.field(), a.vars().clone(), order);
    let (bm, bc) = (b.leading_monomial().unwrap().clone(), b.leading_coef().unwrap().clone());
    while !rem.is_zero() {
        let (rm, rc) = {
            let t = rem.terms().first().unwrap();
            (t.0.clone(), t.1.clone())
        };
        if !bm.divides(&rm) {
            return None;
        }
        let m = bm.div_into(&rm);
        let c = &rc / &bc;
        let t = QPoly::from_terms(
            *a.field(),
            a.vars().clone(),
            q.order().clone(),
            vec![(m.clone(), c.clone())],
        );
        q = q.checked_add(&t).unwrap();
        rem = rem.checked_sub(&b.mul_term(&m, &c)).unwrap();
    }
    Some(q)
}

/// Greatest common divisor over the rationals, normalized monic.
///
/// Recursive content/primitive-part reduction with a primitive polynomial
/// remainder sequence in the main variable.
pub fn mv_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    assert!(a.same_ambient(b), "mv_gcd: ambient mismatch");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let mut sup: Vec<usize> = a.support_vars();
    for v in b.support_vars() {
        if !sup.contains(&v) {
            sup.push(v);
        }
    }
    if sup.is_empty() {
        return QPoly::one(*a.field(), a.vars().clone(), a.order().clone());
    }
    // variables in only one argument cannot appear in the gcd of primitive parts,
    // but do appear via contents; recursion handles this uniformly
    let v = *sup.last().unwrap();
    let da = a.deg_in(v);
    let db = b.deg_in(v);
    if da == 0 || db == 0 {
        // main variable missing on one side: gcd divides its coefficients' gcd
        let (uni, multi) = if da == 0 { (a, b) } else { (b, a) };
        let cont = poly_coeff_gcd(multi, v);
        return mv_gcd(uni, &cont);
    }
    let ca = poly_coeff_gcd(a, v);
    let cb = poly_coeff_gcd(b, v);
    let pa = exact_div(a, &ca).expect("content divides");
    let pb = exact_div(b, &cb).expect("content divides");
    let cg = mv_gcd(&ca, &cb);
    let pg = primitive_prs_gcd(&pa, &pb, v);
    cg.checked_mul(&pg).unwrap().monic()
}

/// gcd of the coefficients of `p` viewed as univariate in `v`.
fn poly_coeff_gcd(p: &QPoly, v: usize) -> QPoly {
    let coeffs = p.coeffs_in_var(v);
    let mut g = QPoly::zero(*p.field(), p.vars().clone(), p.order().clone());
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = mv_gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    if g.is_zero() {
        QPoly::one(*p.field(), p.vars().clone(), p.order().clone())
    } else {
        g
    }
}

fn primitive_prs_gcd(a: &QPoly, b: &QPoly, v: usize) -> QPoly {
    let (mut f, mut g) = if a.deg_in(v) >= b.deg_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if g.is_zero() {
            let cont = poly_coeff_gcd(&f, v);
            return exact_div(&f, &cont).expect("content divides");
        }
        if g.deg_in(v) == 0 {
            return QPoly::one(*a.field(), a.vars().clone(), a.order().clone());
        }
        let r = pseudo_rem(&f, &g, v);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let cont = poly_coeff_gcd(&r, v);
            exact_div(&r, &cont).expect("content divides")
        };
    }
}

/// Pseudo-remainder of `a` by `b` in variable `v`: rem of `lc(b)^k * a`.
fn pseudo_rem(a: &QPoly, b: &QPoly, v: usize) -> QPoly {
    let db = b.deg_in(v);
    let bc = b.coeffs_in_var(v)[db as usize].clone();
    let mut rem = a.clone();
    loop {
        let dr = rem.deg_in(v);
        if rem.is_zero() || dr < db {
            return rem;
        }
        let rc = rem.coeffs_in_var(v)[dr as usize].clone();
        // rem <- lc(b) * rem - rc * x^(dr-db) * b
        let shift = QPoly::from_terms(
            *a.field(),
            a.vars().clone(),
            a.order().clone(),
            vec![(Monomial::var(a.vars().len(), v, dr - db), BigRational::one())],
        );
        let lhs = rem.checked_mul(&bc).unwrap();
        let rhs = rc.checked_mul(&shift).unwrap().checked_mul(b).unwrap();
        rem = lhs.checked_sub(&rhs).unwrap();
    }
}

/// Squarefree part of `f`: the product of its distinct irreducible factors.
pub fn squarefree_part(f: &QPoly) -> QPoly {
    if f.is_zero() || f.is_constant() {
        return f.monic();
    }
    let mut g = f.clone();
    for v in f.support_vars() {
        g = mv_gcd(&g, &f.derivative(v));
        if g.is_constant() {
            break;
        }
    }
    exact_div(f, &g).expect("gcd divides").monic()
}

fn rational_nth_root(c: &BigRational, k: u32) -> Option<BigRational> {
    if c.is_zero() {
        return Some(BigRational::zero());
    }
    if c.is_negative() && k % 2 == 0 {
        return None;
    }
    let (num, den) = (c.numer().clone(), c.denom().clone());
    let sign = if num.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };
    let num_abs = num.abs();
    let rn = num_abs.nth_root(k);
    let rd = den.nth_root(k);
    if num_abs == rn.pow(k) && den == rd.pow(k) {
        Some(BigRational::new(sign * rn, rd))
    } else {
        None
    }
}

/// `g` with `g^k = f`, when `f` is an exact k-th power.
pub fn perfect_power_root(f: &QPoly, k: u32) -> Option<QPoly> {
    assert!(k >= 1);
    if k == 1 {
        return Some(f.clone());
    }
    if f.is_zero() {
        return Some(f.clone());
    }
    if let Some(c) = f.constant_value() {
        let r = rational_nth_root(&c, k)?;
        return Some(QPoly::constant(*f.field(), f.vars().clone(), f.order().clone(), r));
    }
    let h = squarefree_part(f);
    let hk = h.pow(k);
    let rest = exact_div(f, &hk)?;
    let root_rest = perfect_power_root(&rest, k)?;
    let cand = h.checked_mul(&root_rest).unwrap();
    if &cand.pow(k) == f {
        Some(cand)
    } else {
        None
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use crate::error::CasError;

use super::field::{rational_is_negative, Field, Rationals};
use super::{Monomial, MonomialOrder, VarSet};

/// Exact multivariate polynomial over a coefficient field.
///
/// Terms are kept strictly descending under the stored order with no zero
/// coefficients; all arithmetic restores this canonical form.
#[derive(Debug, Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    vars: Arc<VarSet>,
    order: MonomialOrder,
    terms: Vec<(Monomial, F::El)>,
}

/// Polynomial over the rationals, the workhorse type of the crate.
pub type QPoly = Polynomial<Rationals>;

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, vars: Arc<VarSet>, order: MonomialOrder) -> Self {
        Polynomial { field, vars, order, terms: Vec::new() }
    }

    pub fn constant(field: F, vars: Arc<VarSet>, order: MonomialOrder, c: F::El) -> Self {
        let mut p = Self::zero(field, vars, order);
        if !p.field.is_zero(&c) {
            p.terms.push((Monomial::one(p.vars.len()), c));
        }
        p
    }

    pub fn one(field: F, vars: Arc<VarSet>, order: MonomialOrder) -> Self {
        let c = field.one();
        Self::constant(field, vars, order, c)
    }

    pub fn var(field: F, vars: Arc<VarSet>, order: MonomialOrder, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let c = field.one();
        let m = Monomial::var(vars.len(), i, 1);
        Polynomial { field, vars, order, terms: vec![(m, c)] }
    }

    pub fn from_terms(
        field: F,
        vars: Arc<VarSet>,
        order: MonomialOrder,
        terms: Vec<(Monomial, F::El)>,
    ) -> Self {
        let mut p = Polynomial { field, vars, order, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let mut map: BTreeMap<Monomial, F::El> = BTreeMap::new();
        for (m, c) in self.terms.drain(..) {
            debug_assert_eq!(m.len(), self.vars.len());
            match map.remove(&m) {
                Some(prev) => {
                    let s = self.field.add(&prev, &c);
                    if !self.field.is_zero(&s) {
                        map.insert(m, s);
                    }
                }
                None => {
                    if !self.field.is_zero(&c) {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, F::El)> = map.into_iter().collect();
        let order = self.order.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        self.terms = terms;
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn terms(&self) -> &[(Monomial, F::El)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant coefficient when the polynomial is constant.
    pub fn constant_value(&self) -> Option<F::El> {
        if self.terms.is_empty() {
            Some(self.field.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coef(&self) -> Option<&F::El> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn deg_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vars.len()];
        for (m, _) in &self.terms {
            for i in m.support() {
                seen[i] = true;
            }
        }
        seen.iter().enumerate().filter_map(|(i, &s)| s.then_some(i)).collect()
    }

    pub fn same_ambient(&self, other: &Self) -> bool {
        self.vars == other.vars && self.field == other.field
    }

    fn ambient_check(&self, other: &Self, op: &str) -> Result<(), CasError> {
        if !self.same_ambient(other) {
            return Err(CasError::AmbientMismatch(format!(
                "{op}: {} vs {}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CasError> {
        self.ambient_check(other, "add")?;
        let mut terms = self.terms.clone();
        terms.extend(other.reordered_terms(&self.order));
        Ok(Self::from_terms(
            self.field.clone(),
            self.vars.clone(),
            self.order.clone(),
            terms,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CasError> {
        self.ambient_check(other, "sub")?;
        let mut terms = self.terms.clone();
        terms.extend(
            other
                .reordered_terms(&self.order)
                .into_iter()
                .map(|(m, c)| (m, self.field.neg(&c))),
        );
        Ok(Self::from_terms(
            self.field.clone(),
            self.vars.clone(),
            self.order.clone(),
            terms,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CasError> {
        self.ambient_check(other, "mul")?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                terms.push((m1.mul(m2), self.field.mul(c1, c2)));
            }
        }
        Ok(Self::from_terms(
            self.field.clone(),
            self.vars.clone(),
            self.order.clone(),
            terms,
        ))
    }

    fn reordered_terms(&self, _order: &MonomialOrder) -> Vec<(Monomial, F::El)> {
        self.terms.clone()
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order: self.order.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &F::El) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.vars.clone(), self.order.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), self.field.mul(k, c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order: self.order.clone(),
            terms,
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &F::El) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.vars.clone(), self.order.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(mm, k)| (mm.mul(m), self.field.mul(k, c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order: self.order.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone(), self.vars.clone(), self.order.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same ambient");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("same ambient");
            }
        }
        acc
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> Self {
        match self.leading_coef() {
            None => self.clone(),
            Some(c) => {
                if self.field.is_one(c) {
                    self.clone()
                } else {
                    let inv = self.field.inv(c);
                    self.scale(&inv)
                }
            }
        }
    }

    /// Same polynomial re-sorted under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        if self.order == order {
            return self.clone();
        }
        Self::from_terms(self.field.clone(), self.vars.clone(), order, self.terms.clone())
    }

    /// Image under a full variable assignment; `images[i]` replaces variable `i`.
    /// All images must share one target ambient.
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Result<Polynomial<F>, CasError> {
        if images.len() != self.vars.len() {
            return Err(CasError::AmbientMismatch(format!(
                "substitute: expected {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p,
            None => {
                // no variables: constant polynomial maps to itself
                return Ok(self.clone());
            }
        };
        for img in images {
            if !img.same_ambient(target) {
                return Err(CasError::AmbientMismatch(
                    "substitute: images in different ambients".into(),
                ));
            }
        }
        let mut pow_cache: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(p.field.clone(), p.vars.clone(), p.order.clone()), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(target.field.clone(), target.vars.clone(), target.order.clone());
        for (m, c) in &self.terms {
            let mut term =
                Polynomial::constant(target.field.clone(), target.vars.clone(), target.order.clone(), c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().checked_mul(&images[i])?;
                    cache.push(next);
                }
                term = term.checked_mul(&cache[e as usize])?;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Map terms into a larger ambient; `var_map[i]` is the new index of old variable `i`.
    pub fn remap_vars(&self, new_vars: &Arc<VarSet>, var_map: &[usize], order: MonomialOrder) -> Polynomial<F> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; new_vars.len()];
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        exps[var_map[i]] += e;
                    }
                }
                (Monomial::new(exps), c.clone())
            })
            .collect();
        Polynomial::from_terms(self.field.clone(), new_vars.clone(), order, terms)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial<F> {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] = e - 1;
            let k = self.field.from_i64(e as i64);
            terms.push((Monomial::new(exps), self.field.mul(c, &k)));
        }
        Polynomial::from_terms(self.field.clone(), self.vars.clone(), self.order.clone(), terms)
    }

    pub fn evaluate(&self, point: &[F::El]) -> Result<F::El, CasError> {
        if point.len() != self.vars.len() {
            return Err(CasError::DimensionMismatch(format!(
                "evaluate: point has {} coordinates, ambient has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v = self.field.mul(&v, &point[i]);
                }
            }
            acc = self.field.add(&acc, &v);
        }
        Ok(acc)
    }

    /// Coefficients of the polynomial viewed as univariate in variable `i`;
    /// entry `d` is the coefficient of `x_i^d` (a polynomial not involving `x_i`).
    pub fn coeffs_in_var(&self, i: usize) -> Vec<Polynomial<F>> {
        let deg = self.deg_in(i) as usize;
        let mut out =
            vec![Self::zero(self.field.clone(), self.vars.clone(), self.order.clone()); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            let mut exps = m.exps().to_vec();
            exps[i] = 0;
            let term = Self::from_terms(
                self.field.clone(),
                self.vars.clone(),
                self.order.clone(),
                vec![(Monomial::new(exps), c.clone())],
            );
            out[e] = out[e].checked_add(&term).expect("same ambient");
        }
        out
    }

    /// Rebuild from univariate coefficients in variable `i`.
    pub fn from_coeffs_in_var(
        field: F,
        vars: Arc<VarSet>,
        order: MonomialOrder,
        i: usize,
        coeffs: &[Polynomial<F>],
    ) -> Polynomial<F> {
        let mut terms = Vec::new();
        for (d, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                let mut exps = m.exps().to_vec();
                exps[i] += d as u32;
                terms.push((Monomial::new(exps), k.clone()));
            }
        }
        Polynomial::from_terms(field, vars, order, terms)
    }
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        if !self.same_ambient(other) || self.terms.len() != other.terms.len() {
            return false;
        }
        let a: BTreeMap<&Monomial, &F::El> = self.terms.iter().map(|(m, c)| (m, c)).collect();
        let b: BTreeMap<&Monomial, &F::El> = other.terms.iter().map(|(m, c)| (m, c)).collect();
        a.len() == b.len()
            && a.iter().all(|(m, c)| match b.get(*m) {
                Some(d) => self.field.eq_el(c, d),
                None => false,
            })
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<'a, F: Field> std::ops::Add for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_add(rhs).expect("ambient mismatch in +")
    }
}

impl<'a, F: Field> std::ops::Sub for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_sub(rhs).expect("ambient mismatch in -")
    }
}

impl<'a, F: Field> std::ops::Mul for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_mul(rhs).expect("ambient mismatch in *")
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        let mut first = true;
        for (m, c) in &self.terms {
            let cs = self.field.fmt_el(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let needs_coef = mag != "1" || m.is_one();
            let wrapped = if mag.contains(' ') || mag.contains('+') {
                format!("({mag})")
            } else {
                mag
            };
            if needs_coef {
                write!(f, "{}", wrapped)?;
                if !m.is_one() {
                    write!(f, "*{}", m.fmt_with(names))?;
                }
            } else {
                write!(f, "{}", m.fmt_with(names))?;
            }
        }
        Ok(())
    }
}

impl QPoly {
    /// Content: positive rational c with p/c primitive with integer coefficients.
    pub fn content(&self) -> BigRational {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::Zero;
        if self.terms.is_empty() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::from(0);
        let mut den_lcm = BigInt::from(1);
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// p divided by its content; leading coefficient made positive.
    pub fn primitive_part(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let mut p = self.scale(&c.recip());
        if rational_is_negative(p.leading_coef().unwrap()) {
            p = p.neg();
        }
        p
    }
}

/// Exact Jacobian matrix of `polys` evaluated at `point`; row i holds the
/// partials of `polys[i]`.
pub fn jacobian(polys: &[QPoly], point: &[BigRational]) -> Result<Vec<Vec<BigRational>>, CasError> {
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        if point.len() != p.vars().len() {
            return Err(CasError::DimensionMismatch(format!(
                "jacobian: point has {} coordinates, ambient has {} variables",
                point.len(),
                p.vars().len()
            )));
        }
        let mut row = Vec::with_capacity(point.len());
        for i in 0..point.len() {
            row.push(p.derivative(i).evaluate(point)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

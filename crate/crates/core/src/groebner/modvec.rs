use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::polycore::{Field, Monomial, MonomialOrder, Polynomial, VarSet};

/// Order on terms (component, monomial) of a free module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModOrder {
    /// Monomial first, then lower component wins.
    Top(MonomialOrder),
    /// Lower component wins outright, then monomial.
    Pot(MonomialOrder),
    /// Components below `split` dominate all others; TOP inside each block.
    BlockTop { split: usize, inner: MonomialOrder },
}

impl ModOrder {
    pub fn inner(&self) -> &MonomialOrder {
        match self {
            ModOrder::Top(o) | ModOrder::Pot(o) => o,
            ModOrder::BlockTop { inner, .. } => inner,
        }
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        match self {
            ModOrder::Top(o) => o
                .cmp(a.1, b.1)
                .then_with(|| b.0.cmp(&a.0)),
            ModOrder::Pot(o) => b.0.cmp(&a.0).then_with(|| o.cmp(a.1, b.1)),
            ModOrder::BlockTop { split, inner } => {
                let class = |c: usize| usize::from(c >= *split);
                class(b.0)
                    .cmp(&class(a.0))
                    .then_with(|| inner.cmp(a.1, b.1))
                    .then_with(|| b.0.cmp(&a.0))
            }
        }
    }
}

/// Element of a free module over a polynomial ring, stored per component.
#[derive(Debug, Clone)]
pub struct ModVec<F: Field> {
    comps: Vec<Polynomial<F>>,
}

impl<F: Field> ModVec<F> {
    pub fn zero(field: F, vars: Arc<VarSet>, order: MonomialOrder, rank: usize) -> Self {
        let comps = (0..rank)
            .map(|_| Polynomial::zero(field.clone(), vars.clone(), order.clone()))
            .collect();
        ModVec { comps }
    }

    pub fn from_comps(comps: Vec<Polynomial<F>>) -> Self {
        assert!(!comps.is_empty(), "module vector needs rank >= 1");
        for c in &comps[1..] {
            assert!(comps[0].same_ambient(c), "mixed ambients in module vector");
            assert_eq!(comps[0].order(), c.order(), "mixed orders in module vector");
        }
        ModVec { comps }
    }

    /// The vector p * e_pos.
    pub fn from_poly(p: Polynomial<F>, rank: usize, pos: usize) -> Self {
        assert!(pos < rank);
        let mut comps = Vec::with_capacity(rank);
        for i in 0..rank {
            if i == pos {
                comps.push(p.clone());
            } else {
                comps.push(Polynomial::zero(p.field().clone(), p.vars().clone(), p.order().clone()));
            }
        }
        ModVec { comps }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &Polynomial<F> {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[Polynomial<F>] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<Polynomial<F>> {
        self.comps
    }

    pub fn field(&self) -> &F {
        self.comps[0].field()
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.comps[0].vars()
    }

    pub fn mono_order(&self) -> &MonomialOrder {
        self.comps[0].order()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Leading term (component, monomial, coefficient) under the module order.
    ///
    /// Valid only when the component polynomials are sorted by `order.inner()`.
    pub fn leading(&self, order: &ModOrder) -> Option<(usize, Monomial, F::El)> {
        debug_assert_eq!(self.mono_order(), order.inner(), "module order mismatch");
        let mut best: Option<(usize, &Monomial, &F::El)> = None;
        for (i, p) in self.comps.iter().enumerate() {
            let Some(m) = p.leading_monomial() else { continue };
            let c = p.leading_coef().unwrap();
            best = match best {
                None => Some((i, m, c)),
                Some(cur) => {
                    if order.cmp((i, m), (cur.0, cur.1)) == Ordering::Greater {
                        Some((i, m, c))
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        best.map(|(i, m, c)| (i, m.clone(), c.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.checked_add(b).expect("ambient mismatch"))
            .collect();
        ModVec { comps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.checked_sub(b).expect("ambient mismatch"))
            .collect();
        ModVec { comps }
    }

    pub fn neg(&self) -> Self {
        ModVec { comps: self.comps.iter().map(|c| c.neg()).collect() }
    }

    /// Multiply by the term c * m.
    pub fn mul_term(&self, m: &Monomial, c: &F::El) -> Self {
        ModVec { comps: self.comps.iter().map(|p| p.mul_term(m, c)).collect() }
    }

    pub fn scale_poly(&self, p: &Polynomial<F>) -> Self {
        ModVec {
            comps: self
                .comps
                .iter()
                .map(|q| q.checked_mul(p).expect("ambient mismatch"))
                .collect(),
        }
    }

    /// Normalize so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &ModOrder) -> Self {
        match self.leading(order) {
            None => self.clone(),
            Some((_, _, c)) => {
                let field = self.field().clone();
                let inv = field.inv(&c);
                ModVec { comps: self.comps.iter().map(|p| p.scale(&inv)).collect() }
            }
        }
    }

    /// A single-term vector coef * m * e_comp in the same ambient.
    pub fn term_vec(&self, comp: usize, m: &Monomial, coef: &F::El) -> Self {
        let field = self.field().clone();
        let one = Polynomial::constant(
            field.clone(),
            self.vars().clone(),
            self.mono_order().clone(),
            field.one(),
        );
        let t = one.mul_term(m, coef);
        ModVec::from_poly(t, self.rank(), comp)
    }

    /// All variables appearing in any component.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for p in &self.comps {
            for v in p.support_vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Apply a polynomial map to every component.
    pub fn map<G: Field>(&self, f: impl Fn(&Polynomial<F>) -> Polynomial<G>) -> ModVec<G> {
        ModVec { comps: self.comps.iter().map(f).collect() }
    }
}

impl<F: Field> PartialEq for ModVec<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank()
            && self.comps.iter().zip(&other.comps).all(|(a, b)| a == b)
    }
}

impl<F: Field> fmt::Display for ModVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

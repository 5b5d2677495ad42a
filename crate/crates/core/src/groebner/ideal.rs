use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;

use crate::error::CasError;
use crate::polycore::{Monomial, MonomialOrder, QPoly, Rationals, VarSet};

use super::engine::{groebner, normal_form};
use super::modvec::{ModOrder, ModVec};

/// Ideal of a polynomial ring over the rationals, with cached Groebner bases.
#[derive(Debug)]
pub struct Ideal {
    vars: Arc<VarSet>,
    gens: Vec<QPoly>,
    cache: Mutex<Vec<(MonomialOrder, Arc<Vec<QPoly>>)>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if self.gens.is_empty() {
            write!(f, "0")?;
        }
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    pub fn new(vars: Arc<VarSet>, gens: Vec<QPoly>) -> Self {
        let gens: Vec<QPoly> = gens
            .into_iter()
            .filter(|g| {
                assert_eq!(g.vars().names(), vars.names(), "generator outside ambient");
                !g.is_zero()
            })
            .collect();
        Ideal { vars, gens, cache: Mutex::new(Vec::new()) }
    }

    pub fn zero(vars: Arc<VarSet>) -> Self {
        Ideal::new(vars, Vec::new())
    }

    pub fn unit(vars: Arc<VarSet>) -> Self {
        let one = QPoly::one(Rationals, vars.clone(), MonomialOrder::GrevLex);
        Ideal::new(vars, vec![one])
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn gens(&self) -> &[QPoly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Groebner basis under `order`, computed once and cached.
    pub fn gb(&self, order: &MonomialOrder) -> Arc<Vec<QPoly>> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, basis)) = cache.iter().find(|(o, _)| o == order) {
                return basis.clone();
            }
        }
        let vecs: Vec<ModVec<Rationals>> = self
            .gens
            .iter()
            .map(|g| ModVec::from_poly(g.with_order(order.clone()), 1, 0))
            .collect();
        let basis = groebner(&vecs, &ModOrder::Top(order.clone()));
        let polys: Vec<QPoly> = basis.into_iter().map(|v| v.into_comps().remove(0)).collect();
        let arc = Arc::new(polys);
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, existing)) = cache.iter().find(|(o, _)| o == order) {
            return existing.clone();
        }
        cache.push((order.clone(), arc.clone()));
        arc
    }

    pub fn default_gb(&self) -> Arc<Vec<QPoly>> {
        self.gb(&MonomialOrder::GrevLex)
    }

    /// Normal form of `f` against the grevlex basis.
    pub fn normal_form(&self, f: &QPoly) -> QPoly {
        self.normal_form_under(f, &MonomialOrder::GrevLex)
    }

    pub fn normal_form_under(&self, f: &QPoly, order: &MonomialOrder) -> QPoly {
        let basis = self.gb(order);
        let vecs: Vec<ModVec<Rationals>> = basis
            .iter()
            .map(|g| ModVec::from_poly(g.clone(), 1, 0))
            .collect();
        let v = ModVec::from_poly(f.with_order(order.clone()), 1, 0);
        normal_form(&v, &vecs, &ModOrder::Top(order.clone()))
            .into_comps()
            .remove(0)
            .with_order(f.order().clone())
    }

    pub fn contains(&self, f: &QPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.default_gb();
        gb.len() == 1 && gb[0].is_constant()
    }

    /// Membership in the radical via the trick with an inverted variable.
    pub fn radical_contains(&self, f: &QPoly) -> bool {
        let (ext_vars, map) = extend_front(&self.vars, &["t"]);
        let order = MonomialOrder::GrevLex;
        let mut gens: Vec<QPoly> = self
            .gens
            .iter()
            .map(|g| g.remap_vars(&ext_vars, &map, order.clone()))
            .collect();
        let t = QPoly::var(Rationals, ext_vars.clone(), order.clone(), 0);
        let one = QPoly::one(Rationals, ext_vars.clone(), order.clone());
        let fe = f.remap_vars(&ext_vars, &map, order.clone());
        gens.push(&one - &(&t * &fe));
        Ideal::new(ext_vars, gens).is_unit()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.vars.names(), other.vars.names(), "ambient mismatch");
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.vars.clone(), gens)
    }

    pub fn add_gen(&self, f: &QPoly) -> Ideal {
        let mut gens = self.gens.clone();
        gens.push(f.clone());
        Ideal::new(self.vars.clone(), gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.vars.names(), other.vars.names(), "ambient mismatch");
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.checked_mul(b).unwrap());
            }
        }
        Ideal::new(self.vars.clone(), gens)
    }

    /// Intersection via a tag variable: eliminate t from t*I + (1-t)*J.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal, CasError> {
        if self.vars.names() != other.vars.names() {
            return Err(CasError::AmbientMismatch(format!(
                "intersect: {} vs {}",
                self.vars, other.vars
            )));
        }
        let (ext_vars, map) = extend_front(&self.vars, &["t"]);
        let order = MonomialOrder::elim(1);
        let t = QPoly::var(Rationals, ext_vars.clone(), order.clone(), 0);
        let one = QPoly::one(Rationals, ext_vars.clone(), order.clone());
        let omt = &one - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.remap_vars(&ext_vars, &map, order.clone()));
        }
        for g in &other.gens {
            gens.push(&omt * &g.remap_vars(&ext_vars, &map, order.clone()));
        }
        let ext = Ideal::new(ext_vars, gens);
        Ok(ext.extract_block(&map, &self.vars, &order))
    }

    /// Generators of I ∩ ℚ[keep] inside the same ambient.
    pub fn eliminate(&self, keep: &[usize]) -> Ideal {
        let drop: Vec<usize> = (0..self.vars.len()).filter(|i| !keep.contains(i)).collect();
        if drop.is_empty() {
            return self.clone();
        }
        // permute so dropped variables form the leading block
        let mut perm: Vec<usize> = drop.clone();
        perm.extend(keep.iter().copied());
        let names: Vec<String> = perm.iter().map(|&i| self.vars.name(i).to_string()).collect();
        let perm_vars = VarSet::new(names);
        let mut var_map = vec![0usize; self.vars.len()];
        for (new_idx, &old_idx) in perm.iter().enumerate() {
            var_map[old_idx] = new_idx;
        }
        let order = MonomialOrder::elim(drop.len());
        let gens: Vec<QPoly> = self
            .gens
            .iter()
            .map(|g| g.remap_vars(&perm_vars, &var_map, order.clone()))
            .collect();
        let permuted = Ideal::new(perm_vars, gens);
        let basis = permuted.gb(&order);
        let mut back_map = vec![0usize; self.vars.len()];
        for (new_idx, &old_idx) in perm.iter().enumerate() {
            back_map[new_idx] = old_idx;
        }
        let kept: Vec<QPoly> = basis
            .iter()
            .filter(|g| g.support_vars().iter().all(|v| *v >= drop.len()))
            .map(|g| g.remap_vars(&self.vars, &back_map, MonomialOrder::GrevLex))
            .collect();
        Ideal::new(self.vars.clone(), kept)
    }

    /// (I : f), the quotient by a single polynomial.
    pub fn quotient_by(&self, f: &QPoly) -> Ideal {
        if f.is_zero() {
            return Ideal::unit(self.vars.clone());
        }
        let principal = Ideal::new(self.vars.clone(), vec![f.clone()]);
        let inter = self.intersect(&principal).expect("same ambient");
        let gens: Vec<QPoly> = inter
            .gens
            .iter()
            .map(|g| {
                crate::polycore::exact_div(g, f).expect("intersection divisible by f")
            })
            .collect();
        Ideal::new(self.vars.clone(), gens)
    }

    /// (I : J) = { f : f·J ⊆ I }.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        if other.gens.is_empty() {
            return Ideal::unit(self.vars.clone());
        }
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let q = self.quotient_by(g);
            acc = Some(match acc {
                None => q,
                Some(prev) => prev.intersect(&q).expect("same ambient"),
            });
        }
        acc.unwrap()
    }

    /// Saturation (I : f^∞) via elimination of an inverted variable.
    pub fn saturate(&self, f: &QPoly) -> Ideal {
        assert!(!f.is_zero(), "saturation by zero");
        let (ext_vars, map) = extend_front(&self.vars, &["t"]);
        let order = MonomialOrder::elim(1);
        let t = QPoly::var(Rationals, ext_vars.clone(), order.clone(), 0);
        let one = QPoly::one(Rationals, ext_vars.clone(), order.clone());
        let fe = f.remap_vars(&ext_vars, &map, order.clone());
        let mut gens: Vec<QPoly> = self
            .gens
            .iter()
            .map(|g| g.remap_vars(&ext_vars, &map, order.clone()))
            .collect();
        gens.push(&one - &(&t * &fe));
        let ext = Ideal::new(ext_vars, gens);
        ext.extract_block(&map, &self.vars, &order)
    }

    /// Pull the generators not involving the tag block back into `target_vars`;
    /// `map[i]` is the extended index of target variable `i`.
    fn extract_block(
        &self,
        map: &[usize],
        target_vars: &Arc<VarSet>,
        order: &MonomialOrder,
    ) -> Ideal {
        let basis = self.gb(order);
        let tag_count = self.vars.len() - map.len();
        let mut back = vec![0usize; self.vars.len()];
        for (orig, &ext) in map.iter().enumerate() {
            back[ext] = orig;
        }
        let kept: Vec<QPoly> = basis
            .iter()
            .filter(|g| g.support_vars().iter().all(|v| *v >= tag_count))
            .map(|g| g.remap_vars(target_vars, &back, MonomialOrder::GrevLex))
            .collect();
        Ideal::new(target_vars.clone(), kept)
    }

    /// Remap into another ambient; `var_map[i]` is the new index of variable `i`.
    pub fn remap(&self, new_vars: &Arc<VarSet>, var_map: &[usize]) -> Ideal {
        let gens = self
            .gens
            .iter()
            .map(|g| g.remap_vars(new_vars, var_map, MonomialOrder::GrevLex))
            .collect();
        Ideal::new(new_vars.clone(), gens)
    }

    /// Leading monomials of the grevlex basis.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.default_gb()
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }
}

/// Extend a variable set by fresh tag names placed in front; returns the new
/// set and the map old index -> extended index.
pub fn extend_front(vars: &Arc<VarSet>, tags: &[&str]) -> (Arc<VarSet>, Vec<usize>) {
    let mut names: Vec<String> = Vec::with_capacity(vars.len() + tags.len());
    for tag in tags {
        names.push(fresh_against(vars, tag));
    }
    names.extend(vars.names().iter().cloned());
    let ext = VarSet::new(names);
    let map: Vec<usize> = (0..vars.len()).map(|i| i + tags.len()).collect();
    (ext, map)
}

fn fresh_against(vars: &Arc<VarSet>, base: &str) -> String {
    if vars.index_of(base).is_none() {
        return base.to_string();
    }
    let mut k = 0u32;
    loop {
        let cand = format!("{base}_{k}");
        if vars.index_of(&cand).is_none() {
            return cand;
        }
        k += 1;
    }
}

/// Kernel of the ring map source -> target sending source variable i to
/// `images[i]`, an ideal of the source polynomial ring.
pub fn kernel_of_ring_map(
    source_vars: &Arc<VarSet>,
    target: &Ideal,
    images: &[QPoly],
) -> Ideal {
    assert_eq!(images.len(), source_vars.len(), "one image per source variable");
    for img in images {
        assert_eq!(img.vars().names(), target.vars().names(), "image outside target");
    }
    let nt = target.vars().len();
    let ns = source_vars.len();
    // combined ring [target vars | source vars], eliminating the target block
    let mut names: Vec<String> = target.vars().names().to_vec();
    for n in source_vars.names() {
        let mut cand = n.clone();
        let mut k = 0u32;
        while names.contains(&cand) {
            cand = format!("{n}_{k}");
            k += 1;
        }
        names.push(cand);
    }
    let comb = VarSet::new(names);
    let order = MonomialOrder::elim(nt);
    let tmap: Vec<usize> = (0..nt).collect();
    let mut gens: Vec<QPoly> = target
        .gens()
        .iter()
        .map(|g| g.remap_vars(&comb, &tmap, order.clone()))
        .collect();
    for (i, img) in images.iter().enumerate() {
        let xi = QPoly::var(Rationals, comb.clone(), order.clone(), nt + i);
        let ie = img.remap_vars(&comb, &tmap, order.clone());
        gens.push(&xi - &ie);
    }
    let ext = Ideal::new(comb, gens);
    let basis = ext.gb(&order);
    let back: Vec<usize> = {
        let mut b = vec![0usize; nt + ns];
        for (k, item) in b.iter_mut().enumerate().skip(nt) {
            *item = k - nt;
        }
        b
    };
    let kept: Vec<QPoly> = basis
        .iter()
        .filter(|g| g.support_vars().iter().all(|v| *v >= nt))
        .map(|g| g.remap_vars(source_vars, &back, MonomialOrder::GrevLex))
        .collect();
    Ideal::new(source_vars.clone(), kept)
}

/// Expression of `f` as a polynomial in `gens` modulo `target`, if one exists;
/// the result lives in `result_vars` (one variable per generator).
pub fn subalgebra_membership(
    f: &QPoly,
    gens: &[QPoly],
    target: &Ideal,
    result_vars: &Arc<VarSet>,
) -> Option<QPoly> {
    assert_eq!(result_vars.len(), gens.len(), "one tag per generator");
    let nt = target.vars().len();
    let ns = gens.len();
    let mut names: Vec<String> = target.vars().names().to_vec();
    for n in result_vars.names() {
        let mut cand = n.clone();
        let mut k = 0u32;
        while names.contains(&cand) {
            cand = format!("{n}_{k}");
            k += 1;
        }
        names.push(cand);
    }
    let comb = VarSet::new(names);
    let order = MonomialOrder::elim(nt);
    let tmap: Vec<usize> = (0..nt).collect();
    let mut ext_gens: Vec<QPoly> = target
        .gens()
        .iter()
        .map(|g| g.remap_vars(&comb, &tmap, order.clone()))
        .collect();
    for (i, g) in gens.iter().enumerate() {
        let wi = QPoly::var(Rationals, comb.clone(), order.clone(), nt + i);
        let ge = g.remap_vars(&comb, &tmap, order.clone());
        ext_gens.push(&wi - &ge);
    }
    let ext = Ideal::new(comb, ext_gens);
    let fe = f.remap_vars(ext.vars(), &tmap, order.clone());
    let nf = ext.normal_form_under(&fe, &order);
    if nf.support_vars().iter().all(|v| *v >= nt) {
        let mut back = vec![0usize; nt + ns];
        for (k, item) in back.iter_mut().enumerate().skip(nt) {
            *item = k - nt;
        }
        Some(nf.remap_vars(result_vars, &back, MonomialOrder::GrevLex))
    } else {
        None
    }
}

/// Write `f` as an explicit combination sum c_i * gens_i, when f lies in the
/// ideal generated by `gens`; returns the coefficients.
pub fn lift_ideal_membership(f: &QPoly, gens: &[QPoly], vars: &Arc<VarSet>) -> Option<Vec<QPoly>> {
    if gens.is_empty() {
        return if f.is_zero() { Some(Vec::new()) } else { None };
    }
    let order = MonomialOrder::GrevLex;
    let rank = 1 + gens.len();
    let tagged: Vec<ModVec<Rationals>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut comps = vec![g.with_order(order.clone())];
            for j in 0..gens.len() {
                let e = if i == j {
                    QPoly::one(Rationals, vars.clone(), order.clone())
                } else {
                    QPoly::zero(Rationals, vars.clone(), order.clone())
                };
                comps.push(e);
            }
            ModVec::from_comps(comps)
        })
        .collect();
    let mod_order = ModOrder::BlockTop { split: 1, inner: order.clone() };
    let basis = groebner(&tagged, &mod_order);
    let mut w = vec![f.with_order(order.clone())];
    for _ in 0..gens.len() {
        w.push(QPoly::zero(Rationals, vars.clone(), order.clone()));
    }
    let reduced = normal_form(&ModVec::from_comps(w), &basis, &mod_order);
    if !reduced.comp(0).is_zero() {
        return None;
    }
    let coeffs: Vec<QPoly> = (1..rank).map(|i| reduced.comp(i).neg()).collect();
    // verify the combination exactly
    let mut acc = QPoly::zero(Rationals, vars.clone(), order.clone());
    for (c, g) in coeffs.iter().zip(gens) {
        acc = acc.checked_add(&c.checked_mul(&g.with_order(order.clone())).unwrap()).unwrap();
    }
    debug_assert!(acc == f.with_order(order.clone()), "lift failed to reconstruct");
    if acc == f.with_order(order.clone()) {
        Some(coeffs)
    } else {
        None
    }
}

/// Constant helpers shared by the ideal consumers.
pub fn poly_one(vars: &Arc<VarSet>) -> QPoly {
    QPoly::one(Rationals, vars.clone(), MonomialOrder::GrevLex)
}

pub fn poly_const(vars: &Arc<VarSet>, c: BigRational) -> QPoly {
    QPoly::constant(Rationals, vars.clone(), MonomialOrder::GrevLex, c)
}

pub fn poly_int(vars: &Arc<VarSet>, n: i64) -> QPoly {
    poly_const(vars, BigRational::from_integer(n.into()))
}

pub fn poly_var(vars: &Arc<VarSet>, i: usize) -> QPoly {
    QPoly::var(Rationals, vars.clone(), MonomialOrder::GrevLex, i)
}

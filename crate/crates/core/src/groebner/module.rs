use std::sync::Arc;

use crate::polycore::{exact_div, MonomialOrder, QPoly, Rationals, VarSet};

use super::engine::{groebner, normal_form};
use super::ideal::{extend_front, Ideal};
use super::modvec::{ModOrder, ModVec};

/// Finitely generated submodule of a free module over the polynomial ring.
#[derive(Debug, Clone)]
pub struct Submodule {
    vars: Arc<VarSet>,
    rank: usize,
    gens: Vec<ModVec<Rationals>>,
}

impl Submodule {
    pub fn new(vars: Arc<VarSet>, rank: usize, gens: Vec<ModVec<Rationals>>) -> Self {
        let gens: Vec<ModVec<Rationals>> = gens
            .into_iter()
            .filter(|g| {
                assert_eq!(g.rank(), rank, "rank mismatch in submodule generator");
                assert_eq!(g.vars().names(), vars.names(), "generator outside ambient");
                !g.is_zero()
            })
            .collect();
        Submodule { vars, rank, gens }
    }

    pub fn zero(vars: Arc<VarSet>, rank: usize) -> Self {
        Submodule { vars, rank, gens: Vec::new() }
    }

    /// The full free module, generated by the basis vectors.
    pub fn full(vars: Arc<VarSet>, rank: usize) -> Self {
        let order = MonomialOrder::GrevLex;
        let gens = (0..rank)
            .map(|i| {
                ModVec::from_poly(QPoly::one(Rationals, vars.clone(), order.clone()), rank, i)
            })
            .collect();
        Submodule { vars, rank, gens }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[ModVec<Rationals>] {
        &self.gens
    }

    pub fn gb(&self, order: &ModOrder) -> Vec<ModVec<Rationals>> {
        let vecs: Vec<ModVec<Rationals>> = self
            .gens
            .iter()
            .map(|g| g.map(|p| p.with_order(order.inner().clone())))
            .collect();
        groebner(&vecs, order)
    }

    fn default_order(&self) -> ModOrder {
        ModOrder::Top(MonomialOrder::GrevLex)
    }

    pub fn contains(&self, v: &ModVec<Rationals>) -> bool {
        assert_eq!(v.rank(), self.rank, "rank mismatch");
        let order = self.default_order();
        let basis = self.gb(&order);
        let w = v.map(|p| p.with_order(order.inner().clone()));
        normal_form(&w, &basis, &order).is_zero()
    }

    pub fn contains_module(&self, other: &Submodule) -> bool {
        let order = self.default_order();
        let basis = self.gb(&order);
        other.gens.iter().all(|g| {
            let w = g.map(|p| p.with_order(order.inner().clone()));
            normal_form(&w, &basis, &order).is_zero()
        })
    }

    pub fn equals(&self, other: &Submodule) -> bool {
        self.contains_module(other) && other.contains_module(self)
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(self.vars.clone(), self.rank, gens)
    }

    pub fn add_gen(&self, v: ModVec<Rationals>) -> Submodule {
        let mut gens = self.gens.clone();
        gens.push(v);
        Submodule::new(self.vars.clone(), self.rank, gens)
    }

    /// Intersection via a tag variable: eliminate t from t*M + (1-t)*N.
    pub fn intersect(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        assert_eq!(self.vars.names(), other.vars.names(), "ambient mismatch");
        let (ext_vars, map) = extend_front(&self.vars, &["t"]);
        let order = MonomialOrder::elim(1);
        let t = QPoly::var(Rationals, ext_vars.clone(), order.clone(), 0);
        let one = QPoly::one(Rationals, ext_vars.clone(), order.clone());
        let omt = &one - &t;
        let mut gens: Vec<ModVec<Rationals>> = Vec::new();
        for g in &self.gens {
            gens.push(
                g.map(|p| p.remap_vars(&ext_vars, &map, order.clone())).scale_poly(&t),
            );
        }
        for g in &other.gens {
            gens.push(
                g.map(|p| p.remap_vars(&ext_vars, &map, order.clone())).scale_poly(&omt),
            );
        }
        let basis = groebner(&gens, &ModOrder::Top(order.clone()));
        let mut back = vec![0usize; ext_vars.len()];
        for (orig, &ext) in map.iter().enumerate() {
            back[ext] = orig;
        }
        let kept: Vec<ModVec<Rationals>> = basis
            .iter()
            .filter(|g| g.support_vars().iter().all(|v| *v >= 1))
            .map(|g| g.map(|p| p.remap_vars(&self.vars, &back, MonomialOrder::GrevLex)))
            .collect();
        Submodule::new(self.vars.clone(), self.rank, kept)
    }

    /// The ideal (M : v) = { f in the ring : f·v ∈ M }.
    pub fn quotient_by_vector(&self, v: &ModVec<Rationals>) -> Ideal {
        assert_eq!(v.rank(), self.rank, "rank mismatch");
        if v.is_zero() {
            return Ideal::unit(self.vars.clone());
        }
        let mut vectors = vec![v.clone()];
        vectors.extend(self.gens.iter().cloned());
        let syz = syzygies(&self.vars, &vectors, &MonomialOrder::GrevLex);
        let gens: Vec<QPoly> = syz
            .gens()
            .iter()
            .map(|s| s.comp(0).clone().with_order(MonomialOrder::GrevLex))
            .filter(|p| !p.is_zero())
            .collect();
        Ideal::new(self.vars.clone(), gens)
    }

    /// (M : f) as a module: { w : f·w ∈ M } = (M ∩ f·F)/f.
    pub fn quotient_by_scalar(&self, f: &QPoly) -> Submodule {
        assert!(!f.is_zero(), "module quotient by zero scalar");
        if f.is_constant() {
            return self.clone();
        }
        let scaled = Submodule::new(
            self.vars.clone(),
            self.rank,
            (0..self.rank)
                .map(|i| ModVec::from_poly(f.clone(), self.rank, i))
                .collect(),
        );
        let inter = self.intersect(&scaled);
        let gens: Vec<ModVec<Rationals>> = inter
            .gens
            .iter()
            .map(|g| g.map(|p| exact_div(p, f).expect("intersection divisible")))
            .collect();
        Submodule::new(self.vars.clone(), self.rank, gens)
    }

    /// Saturation (M : f^∞) together with the stabilizing exponent e, so that
    /// f^e · (result) ⊆ M.
    pub fn saturate_by_scalar(&self, f: &QPoly) -> (Submodule, u32) {
        assert!(!f.is_zero(), "saturation by zero");
        let mut current = self.clone();
        let mut e = 0u32;
        loop {
            let next = current.quotient_by_scalar(f);
            if next.contains_module(&current) && current.contains_module(&next) {
                return (current, e);
            }
            current = next;
            e += 1;
        }
    }
}

/// Syzygy module of a list of vectors: all (h_1..h_s) with sum h_i v_i = 0.
pub fn syzygies(
    vars: &Arc<VarSet>,
    vectors: &[ModVec<Rationals>],
    inner: &MonomialOrder,
) -> Submodule {
    let s = vectors.len();
    if s == 0 {
        return Submodule::zero(vars.clone(), 0);
    }
    let r = vectors[0].rank();
    let order = ModOrder::BlockTop { split: r, inner: inner.clone() };
    let tagged: Vec<ModVec<Rationals>> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut comps: Vec<QPoly> = v
                .comps()
                .iter()
                .map(|p| p.with_order(inner.clone()))
                .collect();
            for j in 0..s {
                comps.push(if i == j {
                    QPoly::one(Rationals, vars.clone(), inner.clone())
                } else {
                    QPoly::zero(Rationals, vars.clone(), inner.clone())
                });
            }
            ModVec::from_comps(comps)
        })
        .collect();
    let basis = groebner(&tagged, &order);
    let gens: Vec<ModVec<Rationals>> = basis
        .iter()
        .filter(|g| (0..r).all(|c| g.comp(c).is_zero()))
        .map(|g| {
            ModVec::from_comps(
                (r..r + s)
                    .map(|c| g.comp(c).clone().with_order(MonomialOrder::GrevLex))
                    .collect(),
            )
        })
        .collect();
    Submodule::new(vars.clone(), s, gens)
}

/// Express `w` as sum c_i * gens_i when it lies in the module; verified lift.
pub fn lift_module_membership(
    w: &ModVec<Rationals>,
    gens: &[ModVec<Rationals>],
    vars: &Arc<VarSet>,
) -> Option<Vec<QPoly>> {
    if gens.is_empty() {
        return if w.is_zero() { Some(Vec::new()) } else { None };
    }
    let r = w.rank();
    let s = gens.len();
    let inner = MonomialOrder::GrevLex;
    let order = ModOrder::BlockTop { split: r, inner: inner.clone() };
    let tagged: Vec<ModVec<Rationals>> = gens
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut comps: Vec<QPoly> =
                v.comps().iter().map(|p| p.with_order(inner.clone())).collect();
            for j in 0..s {
                comps.push(if i == j {
                    QPoly::one(Rationals, vars.clone(), inner.clone())
                } else {
                    QPoly::zero(Rationals, vars.clone(), inner.clone())
                });
            }
            ModVec::from_comps(comps)
        })
        .collect();
    let basis = groebner(&tagged, &order);
    let mut comps: Vec<QPoly> =
        w.comps().iter().map(|p| p.with_order(inner.clone())).collect();
    for _ in 0..s {
        comps.push(QPoly::zero(Rationals, vars.clone(), inner.clone()));
    }
    let reduced = normal_form(&ModVec::from_comps(comps), &basis, &order);
    if (0..r).any(|c| !reduced.comp(c).is_zero()) {
        return None;
    }
    let coeffs: Vec<QPoly> = (r..r + s)
        .map(|c| reduced.comp(c).neg().with_order(MonomialOrder::GrevLex))
        .collect();
    // verify
    let mut acc = ModVec::zero(Rationals, vars.clone(), MonomialOrder::GrevLex, r);
    for (c, g) in coeffs.iter().zip(gens) {
        let gg = g.map(|p| p.with_order(MonomialOrder::GrevLex));
        acc = acc.add(&gg.scale_poly(c));
    }
    let wn = w.map(|p| p.with_order(MonomialOrder::GrevLex));
    if acc == wn {
        Some(coeffs)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::parse;
    use crate::polycore::MonomialOrder;

    fn vs(names: &[&str]) -> Arc<VarSet> {
        VarSet::new(names.to_vec())
    }

    fn q(vars: &Arc<VarSet>, t: &str) -> QPoly {
        parse(t, vars, &MonomialOrder::GrevLex).unwrap()
    }

    fn vec2(vars: &Arc<VarSet>, a: &str, b: &str) -> ModVec<Rationals> {
        ModVec::from_comps(vec![q(vars, a), q(vars, b)])
    }

    #[test]
    fn syzygies_of_two_variables() {
        let vars = vs(&["x", "y"]);
        let vecs = vec![
            ModVec::from_poly(q(&vars, "x"), 1, 0),
            ModVec::from_poly(q(&vars, "y"), 1, 0),
        ];
        let s = syzygies(&vars, &vecs, &MonomialOrder::GrevLex);
        let expected = Submodule::new(vars.clone(), 2, vec![vec2(&vars, "y", "-x")]);
        assert!(s.equals(&expected));
    }

    #[test]
    fn syzygy_vectors_annihilate_the_input() {
        let vars = vs(&["x", "y"]);
        let f = q(&vars, "x^2 - y");
        let g = q(&vars, "x y + 1");
        let h = q(&vars, "y^3");
        let vecs = vec![
            ModVec::from_poly(f.clone(), 1, 0),
            ModVec::from_poly(g.clone(), 1, 0),
            ModVec::from_poly(h.clone(), 1, 0),
        ];
        let s = syzygies(&vars, &vecs, &MonomialOrder::GrevLex);
        assert!(!s.gens().is_empty());
        for syz in s.gens() {
            let mut acc = QPoly::zero(Rationals, vars.clone(), MonomialOrder::GrevLex);
            for (c, p) in syz.comps().iter().zip([&f, &g, &h]) {
                acc = acc.checked_add(&c.checked_mul(p).unwrap()).unwrap();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn scalar_saturation_of_scaled_free_module() {
        let vars = vs(&["x", "y"]);
        let x = q(&vars, "x");
        let m = Submodule::new(
            vars.clone(),
            2,
            vec![
                ModVec::from_poly(x.clone(), 2, 0),
                ModVec::from_poly(x.clone(), 2, 1),
            ],
        );
        let (sat, e) = m.saturate_by_scalar(&x);
        assert!(sat.equals(&Submodule::full(vars.clone(), 2)));
        assert_eq!(e, 1);
    }

    #[test]
    fn scalar_quotient_of_coordinate_line() {
        let vars = vs(&["x", "y"]);
        let m = Submodule::new(vars.clone(), 2, vec![vec2(&vars, "x", "0")]);
        let quo = m.quotient_by_scalar(&q(&vars, "x"));
        let expected = Submodule::new(vars.clone(), 2, vec![vec2(&vars, "1", "0")]);
        assert!(quo.equals(&expected));
    }

    #[test]
    fn vector_quotient_gives_annihilator_style_ideal() {
        let vars = vs(&["x", "y"]);
        // (M : v) for v = (1, x), M generated by (y, xy) = y v: expect (y)
        let m = Submodule::new(vars.clone(), 2, vec![vec2(&vars, "y", "x y")]);
        let v = vec2(&vars, "1", "x");
        let quo = m.quotient_by_vector(&v);
        let expected = Ideal::new(vars.clone(), vec![q(&vars, "y")]);
        assert!(quo.equals(&expected));
    }

    #[test]
    fn module_intersection_of_coordinate_lines() {
        let vars = vs(&["x", "y"]);
        let a = Submodule::new(
            vars.clone(),
            2,
            vec![vec2(&vars, "x", "0"), vec2(&vars, "0", "1")],
        );
        let b = Submodule::new(
            vars.clone(),
            2,
            vec![vec2(&vars, "1", "0"), vec2(&vars, "0", "y")],
        );
        let i = a.intersect(&b);
        let expected = Submodule::new(
            vars.clone(),
            2,
            vec![vec2(&vars, "x", "0"), vec2(&vars, "0", "y")],
        );
        assert!(i.equals(&expected));
    }

    #[test]
    fn module_membership_lift_reconstructs() {
        let vars = vs(&["x", "y"]);
        let g1 = vec2(&vars, "x", "y");
        let g2 = vec2(&vars, "y", "x");
        let w = g1.scale_poly(&q(&vars, "x + 1")).add(&g2.scale_poly(&q(&vars, "y^2")));
        let lam = lift_module_membership(&w, &[g1.clone(), g2.clone()], &vars).unwrap();
        let mut acc = ModVec::zero(Rationals, vars.clone(), MonomialOrder::GrevLex, 2);
        for (c, g) in lam.iter().zip([&g1, &g2]) {
            acc = acc.add(&g.scale_poly(c));
        }
        assert_eq!(acc, w);
        let outside = vec2(&vars, "1", "0");
        assert!(lift_module_membership(&outside, &[g1, g2], &vars).is_none());
    }
}

//! Finitely presented domains over the rationals, algebra morphisms between them,
//! and finite extensions carrying explicit module generators.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::CasError;
use crate::groebner::{
    groebner as module_basis, kernel_of_ring_map, lift_ideal_membership, normal_form as module_nf,
    poly_one, subalgebra_membership, syzygies, Ideal, ModOrder, ModVec,
};
use crate::polycore::{factor_univariate, mv_gcd, perfect_power_root, qi, MonomialOrder,
    QPoly, Rationals, VarSet};

/// How a structural claim such as primality or module finiteness is justified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Established by an exact check; the payload names the method.
    Proven(String),
    /// Supplied by the caller without verification; the payload records the assumption.
    Assumed(String),
}

impl Evidence {
    pub fn is_proven(&self) -> bool {
        matches!(self, Evidence::Proven(_))
    }

    pub fn note(&self) -> &str {
        match self {
            Evidence::Proven(s) | Evidence::Assumed(s) => s,
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Proven(s) => write!(f, "proven ({s})"),
            Evidence::Assumed(s) => write!(f, "assumed ({s})"),
        }
    }
}

/// Evidence label used when a single defining relation passed the irreducibility check.
pub const IRREDUCIBLE_HYPERSURFACE: &str = "irreducible-hypersurface";

/// A finitely presented commutative domain Q[vars]/relations.
#[derive(Clone, Debug)]
pub struct AffineDomain {
    vars: Arc<VarSet>,
    relations: Ideal,
    primality: Evidence,
}

impl AffineDomain {
    /// Wraps a presentation with the given primality evidence.
    pub fn new(relations: Ideal, primality: Evidence) -> Result<Self, CasError> {
        if relations.is_unit() {
            return Err(CasError::Unsupported(
                "relations generate the unit ideal, the quotient is the zero ring".into(),
            ));
        }
        if let Evidence::Proven(method) = &primality {
            if method == IRREDUCIBLE_HYPERSURFACE {
                let gens = relations.gens();
                if gens.len() != 1 || !hypersurface_irreducible(&gens[0]) {
                    return Err(CasError::MalformedCertificate(
                        "irreducible-hypersurface evidence fails the factor check".into(),
                    ));
                }
            }
        }
        Ok(AffineDomain {
            vars: relations.vars().clone(),
            relations,
            primality,
        })
    }

    /// The polynomial ring on the given variables.
    pub fn polynomial_ring(vars: Arc<VarSet>) -> Self {
        AffineDomain {
            relations: Ideal::zero(vars.clone()),
            vars,
            primality: Evidence::Proven("zero ideal".into()),
        }
    }

    /// Quotient by a single relation, proving irreducibility when the check applies.
    pub fn hypersurface(f: QPoly) -> Result<Self, CasError> {
        if f.is_zero() || f.total_degree() == 0 {
            return Err(CasError::Unsupported(
                "hypersurface relation must be nonconstant".into(),
            ));
        }
        let primality = if hypersurface_irreducible(&f) {
            Evidence::Proven(IRREDUCIBLE_HYPERSURFACE.into())
        } else {
            Evidence::Assumed("hypersurface irreducibility not established".into())
        };
        let vars = f.vars().clone();
        AffineDomain::new(Ideal::new(vars, vec![f]), primality)
    }

    /// Quotient by relations the caller asserts to be prime.
    pub fn assumed(relations: Ideal, note: &str) -> Result<Self, CasError> {
        AffineDomain::new(relations, Evidence::Assumed(note.into()))
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn primality(&self) -> &Evidence {
        &self.primality
    }

    /// True when the element's representative lies in the relations.
    pub fn is_zero_elem(&self, f: &QPoly) -> bool {
        self.relations.contains(f)
    }

    pub fn eq_elems(&self, f: &QPoly, g: &QPoly) -> bool {
        self.is_zero_elem(&(f - g))
    }

    /// Canonical representative of an element.
    pub fn normal_form(&self, f: &QPoly) -> QPoly {
        self.relations.normal_form(f)
    }
}

impl fmt::Display for AffineDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.names().join(", "))?;
        if !self.relations.is_zero_ideal() {
            write!(f, "/{}", self.relations)?;
        }
        Ok(())
    }
}

/// Exact irreducibility check covering the hypersurface shapes the tool can decide.
pub(crate) fn hypersurface_irreducible(f: &QPoly) -> bool {
    if f.is_zero() || f.total_degree() == 0 {
        return false;
    }
    let support = f.support_vars();
    if support.len() == 1 {
        if let Ok((_, factors)) = factor_univariate(f) {
            return factors.len() == 1 && factors[0].1 == 1;
        }
        return false;
    }
    for &v in &support {
        let coeffs = f.coeffs_in_var(v);
        let d = coeffs.len() - 1;
        let mut content = coeffs[0].clone();
        for c in &coeffs[1..] {
            content = mv_gcd(&content, c);
        }
        if content.total_degree() > 0 {
            return false;
        }
        match d {
            1 => return true,
            2 => {
                let a = &coeffs[2];
                let b = &coeffs[1];
                let c = &coeffs[0];
                let disc = &(b * b) - &(a * c).scale(&qi(4));
                if disc.is_zero() {
                    return false;
                }
                return perfect_power_root(&disc, 2).is_none();
            }
            3 => {
                if coeffs[1].is_zero() && coeffs[2].is_zero() && coeffs[3].total_degree() == 0 {
                    let lead = coeffs[3].constant_value().unwrap();
                    let g = coeffs[0].scale(&(-lead.recip()));
                    if g.is_zero() {
                        return false;
                    }
                    return perfect_power_root(&g, 3).is_none();
                }
            }
            _ => {}
        }
    }
    false
}

/// A Q-algebra map between presented domains, given by one image per source variable.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: AffineDomain,
    target: AffineDomain,
    images: Vec<QPoly>,
}

impl AlgebraMorphism {
    pub fn new(
        source: AffineDomain,
        target: AffineDomain,
        images: Vec<QPoly>,
    ) -> Result<Self, CasError> {
        if images.len() != source.vars().len() {
            return Err(CasError::DimensionMismatch(format!(
                "expected {} images, got {}",
                source.vars().len(),
                images.len()
            )));
        }
        for img in &images {
            if img.vars().names() != target.vars().names() {
                return Err(CasError::AmbientMismatch(
                    "image lies outside the target ring".into(),
                ));
            }
        }
        Ok(AlgebraMorphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(d: &AffineDomain) -> Self {
        let images = (0..d.vars().len())
            .map(|i| QPoly::var(Rationals, d.vars().clone(), MonomialOrder::GrevLex, i))
            .collect();
        AlgebraMorphism {
            source: d.clone(),
            target: d.clone(),
            images,
        }
    }

    pub fn source(&self) -> &AffineDomain {
        &self.source
    }

    pub fn target(&self) -> &AffineDomain {
        &self.target
    }

    pub fn images(&self) -> &[QPoly] {
        &self.images
    }

    /// True iff every source relation maps into the target relations.
    pub fn is_well_defined(&self) -> bool {
        self.source
            .relations()
            .gens()
            .iter()
            .all(|g| self.target.is_zero_elem(&g.substitute(&self.images).unwrap()))
    }

    /// Image of an element, reduced to its canonical representative in the target.
    pub fn apply(&self, f: &QPoly) -> QPoly {
        self.target
            .normal_form(&f.substitute(&self.images).unwrap())
    }
}

/// Combined presentation of a morphism: target variables followed by fresh copies
/// of the source variables, with the target relations and the graph of the map.
#[derive(Clone, Debug)]
pub struct GraphRing {
    vars: Arc<VarSet>,
    nt: usize,
    source_vars: Arc<VarSet>,
    ideal: Ideal,
}

impl GraphRing {
    pub fn new(m: &AlgebraMorphism) -> Self {
        let nt = m.target.vars().len();
        let ns = m.source.vars().len();
        let mut names: Vec<String> = m.target.vars().names().to_vec();
        for n in m.source.vars().names() {
            let mut cand = n.clone();
            let mut k = 0u32;
            while names.contains(&cand) {
                cand = format!("{n}_{k}");
                k += 1;
            }
            names.push(cand);
        }
        let comb = VarSet::new(names);
        let tmap: Vec<usize> = (0..nt).collect();
        let order = MonomialOrder::GrevLex;
        let mut gens: Vec<QPoly> = m
            .target
            .relations()
            .gens()
            .iter()
            .map(|g| g.remap_vars(&comb, &tmap, order.clone()))
            .collect();
        for (i, img) in m.images.iter().enumerate() {
            let xi = QPoly::var(Rationals, comb.clone(), order.clone(), nt + i);
            let ie = img.remap_vars(&comb, &tmap, order.clone());
            gens.push(&xi - &ie);
        }
        let _ = ns;
        GraphRing {
            vars: comb.clone(),
            nt,
            source_vars: m.source.vars().clone(),
            ideal: Ideal::new(comb, gens),
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// Number of leading variables belonging to the target block.
    pub fn target_block(&self) -> usize {
        self.nt
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn embed_target(&self, f: &QPoly) -> QPoly {
        let map: Vec<usize> = (0..self.nt).collect();
        f.remap_vars(&self.vars, &map, MonomialOrder::GrevLex)
    }

    pub fn embed_source(&self, f: &QPoly) -> QPoly {
        let map: Vec<usize> = (0..self.source_vars.len()).map(|i| self.nt + i).collect();
        f.remap_vars(&self.vars, &map, MonomialOrder::GrevLex)
    }

    /// Reads a polynomial supported on the source block back into the source ring.
    pub fn to_source(&self, f: &QPoly) -> QPoly {
        debug_assert!(f.support_vars().iter().all(|&i| i >= self.nt));
        let map: Vec<usize> = (0..self.vars.len()).map(|i| i.saturating_sub(self.nt)).collect();
        f.remap_vars(&self.source_vars, &map, MonomialOrder::GrevLex)
    }

    /// Kernel of Q[source vars] -> target, as an ideal in the source ring.
    pub fn source_kernel(&self) -> Ideal {
        let keep: Vec<usize> = (self.nt..self.vars.len()).collect();
        self.ideal.eliminate(&keep).remap(
            &self.source_vars,
            &(0..self.vars.len())
                .map(|i| i.saturating_sub(self.nt))
                .collect::<Vec<_>>(),
        )
    }
}

/// Generators of the module of source-coefficient linear relations among the given
/// target elements: all (a_0..a_{n-1}) over the source ring with sum a_i e_i = 0 in the target.
pub(crate) fn base_linear_relations(graph: &GraphRing, elems: &[QPoly]) -> Vec<Vec<QPoly>> {
    let n = elems.len();
    let mut vectors: Vec<ModVec<Rationals>> = elems
        .iter()
        .map(|e| ModVec::from_poly(e.clone(), 1, 0))
        .collect();
    for g in graph.ideal().gens() {
        vectors.push(ModVec::from_poly(g.clone(), 1, 0));
    }
    let syz = syzygies(graph.vars(), &vectors, &MonomialOrder::GrevLex);
    let elim = MonomialOrder::elim(graph.target_block());
    let projected: Vec<ModVec<Rationals>> = syz
        .gens()
        .iter()
        .filter_map(|v| {
            let comps: Vec<QPoly> = (0..n)
                .map(|i| v.comp(i).remap_vars(graph.vars(), &identity_map(graph.vars().len()), elim.clone()))
                .collect();
            if comps.iter().all(|c| c.is_zero()) {
                None
            } else {
                Some(ModVec::from_comps(comps))
            }
        })
        .collect();
    if projected.is_empty() {
        return Vec::new();
    }
    let nt = graph.target_block();
    let basis = module_basis(&projected, &ModOrder::Top(elim));
    basis
        .into_iter()
        .filter(|v| v.support_vars().iter().all(|&i| i >= nt))
        .map(|v| v.comps().iter().map(|c| graph.to_source(c)).collect())
        .collect()
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Source-ring coordinates of a target element on the given spanning list, if any.
fn coordinates_over(
    graph: &GraphRing,
    source: &AffineDomain,
    c: &QPoly,
    gens: &[QPoly],
) -> Option<Vec<QPoly>> {
    let mut elems = vec![graph.embed_target(c)];
    for g in gens {
        elems.push(graph.embed_target(g));
    }
    let rels = base_linear_relations(graph, &elems);
    let candidates: Vec<&Vec<QPoly>> = rels.iter().filter(|r| !r[0].is_zero()).collect();
    let firsts: Vec<QPoly> = candidates.iter().map(|r| r[0].clone()).collect();
    if firsts.is_empty() {
        return None;
    }
    let one = poly_one(source.vars());
    let lifted = lift_ideal_membership(&one, &firsts, source.vars())?;
    let mut coords = Vec::with_capacity(gens.len());
    for j in 1..=gens.len() {
        let mut acc = QPoly::zero(Rationals, source.vars().clone(), MonomialOrder::GrevLex);
        for (u, rel) in lifted.iter().zip(&candidates) {
            acc = &acc + &(u * &rel[j]);
        }
        coords.push(source.normal_form(&acc.neg()));
    }
    Some(coords)
}

/// A module-finite extension of domains with explicit module generators, b_1 = 1.
#[derive(Clone, Debug)]
pub struct FiniteExtension {
    morphism: AlgebraMorphism,
    module_gens: Vec<QPoly>,
    finiteness: Evidence,
    graph: GraphRing,
}

/// Minimal monic polynomial with base-ring coefficients satisfied by a target element.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalPolynomial {
    /// Degree of the dependence; coefficient list has degree + 1 entries.
    pub degree: u32,
    /// Coefficients c_0..c_degree in the source ring, with c_degree = 1.
    pub coeffs: Vec<QPoly>,
}

impl MinimalPolynomial {
    /// Evaluates the polynomial at the given target element, reduced in the target.
    pub fn evaluate_at(&self, ext: &FiniteExtension, b: &QPoly) -> QPoly {
        let target = ext.morphism.target();
        let mut acc = QPoly::zero(Rationals, target.vars().clone(), MonomialOrder::GrevLex);
        let mut power = poly_one(target.vars());
        for c in &self.coeffs {
            let img = ext.morphism.apply(c);
            acc = &acc + &(&img * &power);
            power = &power * b;
        }
        target.normal_form(&acc)
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({c})")?;
            } else if c.constant_value().map_or(false, |v| v.is_one()) {
                if i == 1 {
                    write!(f, "T")?;
                } else {
                    write!(f, "T^{i}")?;
                }
            } else if i == 1 {
                write!(f, "({c})*T")?;
            } else {
                write!(f, "({c})*T^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FiniteExtension {
    /// Builds the extension and verifies the module span exactly.
    pub fn new_proven(
        morphism: AlgebraMorphism,
        module_gens: Vec<QPoly>,
    ) -> Result<Self, CasError> {
        let ext = FiniteExtension::build(morphism, module_gens, Evidence::Proven("module span".into()))?;
        ext.verify_span()?;
        Ok(ext)
    }

    /// Builds the extension trusting the caller's finiteness claim.
    pub fn new_assumed(
        morphism: AlgebraMorphism,
        module_gens: Vec<QPoly>,
        note: &str,
    ) -> Result<Self, CasError> {
        FiniteExtension::build(morphism, module_gens, Evidence::Assumed(note.into()))
    }

    fn build(
        morphism: AlgebraMorphism,
        module_gens: Vec<QPoly>,
        finiteness: Evidence,
    ) -> Result<Self, CasError> {
        if module_gens.is_empty() {
            return Err(CasError::NotFinite("no module generators given".into()));
        }
        for g in &module_gens {
            if g.vars().names() != morphism.target().vars().names() {
                return Err(CasError::AmbientMismatch(
                    "module generator lies outside the target ring".into(),
                ));
            }
        }
        let one = poly_one(morphism.target().vars());
        if !morphism.target().eq_elems(&module_gens[0], &one) {
            return Err(CasError::NotFinite(
                "first module generator must be 1".into(),
            ));
        }
        let graph = GraphRing::new(&morphism);
        Ok(FiniteExtension {
            morphism,
            module_gens,
            finiteness,
            graph,
        })
    }

    pub fn morphism(&self) -> &AlgebraMorphism {
        &self.morphism
    }

    pub fn source(&self) -> &AffineDomain {
        self.morphism.source()
    }

    pub fn target(&self) -> &AffineDomain {
        self.morphism.target()
    }

    pub fn module_gens(&self) -> &[QPoly] {
        &self.module_gens
    }

    pub fn finiteness(&self) -> &Evidence {
        &self.finiteness
    }

    pub fn graph(&self) -> &GraphRing {
        &self.graph
    }

    /// Source-ring coordinates of a target element on the module generators, if any.
    pub fn span_coordinates(&self, c: &QPoly) -> Option<Vec<QPoly>> {
        let coords = coordinates_over(&self.graph, self.source(), c, &self.module_gens)?;
        let mut acc = QPoly::zero(
            Rationals,
            self.target().vars().clone(),
            MonomialOrder::GrevLex,
        );
        for (a, b) in coords.iter().zip(&self.module_gens) {
            acc = &acc + &(&self.morphism.apply(a) * b);
        }
        assert!(
            self.target().eq_elems(&acc, c),
            "span coordinates failed exact verification"
        );
        Some(coords)
    }

    /// Checks that the module generators span the target over the source: every
    /// target variable and every product of two generators must have coordinates.
    pub fn verify_span(&self) -> Result<(), CasError> {
        let tv = self.target().vars();
        for i in 0..tv.len() {
            let v = QPoly::var(Rationals, tv.clone(), MonomialOrder::GrevLex, i);
            if self.span_coordinates(&v).is_none() {
                return Err(CasError::NotFinite(format!(
                    "target variable {} is not in the module span",
                    tv.name(i)
                )));
            }
        }
        for i in 1..self.module_gens.len() {
            for j in i..self.module_gens.len() {
                let prod = &self.module_gens[i] * &self.module_gens[j];
                if self.span_coordinates(&prod).is_none() {
                    return Err(CasError::NotFinite(format!(
                        "generator product ({})*({}) is not in the module span",
                        self.module_gens[i], self.module_gens[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Minimal monic polynomial with source-ring coefficients annihilating b,
    /// canonicalized by reducing the coefficient vector modulo the relation module.
    pub fn minimal_polynomial_over_base(&self, b: &QPoly) -> Result<MinimalPolynomial, CasError> {
        let r = self.module_gens.len();
        let mut powers = vec![poly_one(self.target().vars())];
        for k in 1..=r {
            let next = self.target().normal_form(&(powers.last().unwrap() * b));
            powers.push(next);
            let lower = &powers[..k];
            if let Some(coords) = coordinates_over(&self.graph, self.source(), &powers[k], lower) {
                let mut coeffs: Vec<QPoly> = coords.iter().map(|c| c.neg()).collect();
                coeffs = self.reduce_coefficient_vector(coeffs, lower);
                coeffs.push(poly_one(self.source().vars()));
                return Ok(MinimalPolynomial {
                    degree: k as u32,
                    coeffs,
                });
            }
        }
        Err(CasError::NotAlgebraic(format!(
            "no monic dependence of degree at most {r}; module generators do not span"
        )))
    }

    /// Canonical representative of the coefficient vector modulo the relations
    /// among the given powers.
    fn reduce_coefficient_vector(&self, coeffs: Vec<QPoly>, powers: &[QPoly]) -> Vec<QPoly> {
        let embedded: Vec<QPoly> = powers.iter().map(|p| self.graph.embed_target(p)).collect();
        let rels = base_linear_relations(&self.graph, &embedded);
        let gens: Vec<ModVec<Rationals>> = rels
            .into_iter()
            .map(ModVec::from_comps)
            .filter(|v| !v.is_zero())
            .collect();
        let vec = ModVec::from_comps(coeffs);
        if gens.is_empty() {
            return vec.into_comps();
        }
        let order = ModOrder::Top(MonomialOrder::GrevLex);
        let basis = module_basis(&gens, &order);
        module_nf(&vec, &basis, &order).into_comps()
    }

    /// Writes b as a fraction a/s over the source, if b lies in the base fraction field.
    /// Returns (a, s) with s nonzero in the source and phi(s) * b = phi(a).
    pub fn is_in_base_fraction_field(&self, b: &QPoly) -> Option<(QPoly, QPoly)> {
        let sv = self.source().vars();
        let tag = {
            let mut base = "u".to_string();
            let mut k = 0u32;
            while sv.index_of(&base).is_some() {
                base = format!("u_{k}");
                k += 1;
            }
            base
        };
        let mut names = vec![tag];
        names.extend(sv.names().to_vec());
        let tagged = VarSet::new(names);
        let mut images = vec![self.target().normal_form(b)];
        images.extend(self.morphism.images().iter().cloned());
        let e = kernel_of_ring_map(&tagged, self.target().relations(), &images);
        let basis = e.gb(&MonomialOrder::elim(1));
        let back: Vec<usize> = (0..tagged.len()).map(|i| i.saturating_sub(1)).collect();
        for g in basis.iter() {
            let coeffs = g.coeffs_in_var(0);
            if coeffs.len() == 2 {
                let s = coeffs[1].remap_vars(sv, &back, MonomialOrder::GrevLex);
                let a = coeffs[0]
                    .neg()
                    .remap_vars(sv, &back, MonomialOrder::GrevLex);
                if self.source().is_zero_elem(&s) {
                    continue;
                }
                let lhs = &self.morphism.apply(&s) * b;
                let rhs = self.morphism.apply(&a);
                assert!(
                    self.target().eq_elems(&lhs, &rhs),
                    "fraction certificate failed exact verification"
                );
                return Some((a, s));
            }
        }
        None
    }

    /// Certifies that every module generator lies in the base fraction field.
    /// Returns one (a_j, s_j) pair per generator with phi(s_j) * b_j = phi(a_j).
    pub fn is_birational(&self) -> Option<Vec<(QPoly, QPoly)>> {
        let mut certs = Vec::with_capacity(self.module_gens.len());
        for b in &self.module_gens {
            certs.push(self.is_in_base_fraction_field(b)?);
        }
        Some(certs)
    }
}

/// An element of the fraction field of a presented domain.
#[derive(Clone, Debug)]
pub struct FractionElement {
    num: QPoly,
    den: QPoly,
}

impl FractionElement {
    pub fn new(domain: &AffineDomain, num: QPoly, den: QPoly) -> Result<Self, CasError> {
        if domain.is_zero_elem(&den) {
            return Err(CasError::Unsupported(
                "fraction denominator is zero in the domain".into(),
            ));
        }
        Ok(FractionElement { num, den })
    }

    pub fn from_element(domain: &AffineDomain, num: QPoly) -> Self {
        FractionElement {
            num,
            den: poly_one(domain.vars()),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    /// Equality by cross multiplication in the domain.
    pub fn eq_in(&self, domain: &AffineDomain, other: &FractionElement) -> bool {
        domain.is_zero_elem(&(&(&self.num * &other.den) - &(&other.num * &self.den)))
    }

    pub fn is_zero_in(&self, domain: &AffineDomain) -> bool {
        domain.is_zero_elem(&self.num)
    }
}

impl fmt::Display for FractionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().map_or(false, |v| v.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Presents the subalgebra generated by the given elements of a domain, returning
/// the new presentation and the inclusion morphism into the ambient domain.
pub fn present_subalgebra(
    ambient: &AffineDomain,
    gens: &[QPoly],
    names: &[String],
) -> Result<(AffineDomain, AlgebraMorphism), CasError> {
    if gens.is_empty() {
        return Err(CasError::DimensionMismatch(
            "subalgebra requires at least one generator".into(),
        ));
    }
    if names.len() != gens.len() {
        return Err(CasError::DimensionMismatch(format!(
            "expected {} names, got {}",
            gens.len(),
            names.len()
        )));
    }
    let new_vars = VarSet::new(names.to_vec());
    let relations = kernel_of_ring_map(&new_vars, ambient.relations(), gens);
    let primality = if ambient.primality().is_proven() {
        Evidence::Proven("kernel of a map onto a domain".into())
    } else {
        Evidence::Assumed(format!(
            "subring of a ring assumed to be a domain: {}",
            ambient.primality().note()
        ))
    };
    let sub = AffineDomain::new(relations, primality)?;
    let inclusion = AlgebraMorphism::new(sub.clone(), ambient.clone(), gens.to_vec())?;
    assert!(inclusion.is_well_defined(), "kernel presentation must make the inclusion well defined");
    Ok((sub, inclusion))
}

/// True when two generating lists produce the same subalgebra of a common domain.
pub fn subring_equal(ambient: &AffineDomain, gens1: &[QPoly], gens2: &[QPoly]) -> bool {
    let w1 = VarSet::new((0..gens2.len()).map(|i| format!("w{i}")).collect::<Vec<_>>());
    let w2 = VarSet::new((0..gens1.len()).map(|i| format!("w{i}")).collect::<Vec<_>>());
    gens1
        .iter()
        .all(|g| subalgebra_membership(g, gens2, ambient.relations(), &w1).is_some())
        && gens2
            .iter()
            .all(|g| subalgebra_membership(g, gens1, ambient.relations(), &w2).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse::parse;

    fn q(vars: &Arc<VarSet>, t: &str) -> QPoly {
        parse(t, vars, &MonomialOrder::GrevLex).unwrap()
    }

    /// A = Q[x,y,z]/(y^2 - z x^2) -> B = Q[x,Y,z]/(Y^2 - z), x -> x, y -> Yx, z -> z,
    /// with module generators {1, Y}.
    fn umbrella_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y", "z"]);
        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - z x^2")).unwrap();
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - z")).unwrap();
        let m = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")])
            .unwrap();
        FiniteExtension::new_proven(m, vec![q(&bv, "1"), q(&bv, "Y")]).unwrap()
    }

    /// A = Q[x,y]/(y^2 - x^3) -> B = Q[t], x -> t^2, y -> t^3, generators {1, t}.
    fn cusp_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y"]);
        let tv = VarSet::new(vec!["t"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let b = AffineDomain::polynomial_ring(tv.clone());
        let m = AlgebraMorphism::new(a, b, vec![q(&tv, "t^2"), q(&tv, "t^3")]).unwrap();
        FiniteExtension::new_proven(m, vec![q(&tv, "1"), q(&tv, "t")]).unwrap()
    }

    /// A = Q[x] -> B = Q[x,y]/(y^2 - x), generators {1, y}: not birational.
    fn square_root_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 - x")).unwrap();
        let m = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x")]).unwrap();
        FiniteExtension::new_proven(m, vec![q(&bv, "1"), q(&bv, "y")]).unwrap()
    }

    #[test]
    fn hypersurface_primality_evidence() {
        let av = VarSet::new(vec!["x", "y", "z"]);
        assert!(AffineDomain::hypersurface(q(&av, "y^2 - z x^2"))
            .unwrap()
            .primality()
            .is_proven());
        let pv = VarSet::new(vec!["x", "y"]);
        assert!(AffineDomain::hypersurface(q(&pv, "1 + x^2 + y^2"))
            .unwrap()
            .primality()
            .is_proven());
        assert!(AffineDomain::hypersurface(q(&pv, "y^3 - x"))
            .unwrap()
            .primality()
            .is_proven());
        // reducible relation is only accepted with an assumption
        let red = AffineDomain::hypersurface(q(&pv, "x^2 - y^2")).unwrap();
        assert!(!red.primality().is_proven());
        let claimed = AffineDomain::new(
            Ideal::new(pv.clone(), vec![q(&pv, "x^2 - y^2")]),
            Evidence::Proven(IRREDUCIBLE_HYPERSURFACE.into()),
        );
        assert!(matches!(claimed, Err(CasError::MalformedCertificate(_))));
    }

    #[test]
    fn morphism_well_definedness() {
        let ext = umbrella_extension();
        assert!(ext.morphism().is_well_defined());
        assert!(cusp_extension().morphism().is_well_defined());

        let av = VarSet::new(vec!["x", "y"]);
        let tv = VarSet::new(vec!["t"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let b = AffineDomain::polynomial_ring(tv.clone());
        let bad = AlgebraMorphism::new(a, b, vec![q(&tv, "t"), q(&tv, "t")]).unwrap();
        assert!(!bad.is_well_defined());
    }

    #[test]
    fn fraction_field_membership_certificates() {
        let ext = umbrella_extension();
        let bv = ext.target().vars().clone();
        let sv = ext.source().vars().clone();
        let (a, s) = ext.is_in_base_fraction_field(&q(&bv, "Y")).unwrap();
        assert!(ext.source().eq_elems(&a, &q(&sv, "y")));
        assert!(ext.source().eq_elems(&s, &q(&sv, "x")));

        let sqrt = square_root_extension();
        let sb = sqrt.target().vars().clone();
        assert!(sqrt.is_in_base_fraction_field(&q(&sb, "y")).is_none());

        // image elements come back with denominator 1
        let (a, s) = ext.is_in_base_fraction_field(&q(&bv, "Y x")).unwrap();
        assert!(ext.source().eq_elems(&s, &q(&sv, "1")));
        assert!(ext.source().eq_elems(&a, &q(&sv, "y")));
    }

    #[test]
    fn birationality_verdicts() {
        let certs = umbrella_extension().is_birational().unwrap();
        assert_eq!(certs.len(), 2);
        assert!(square_root_extension().is_birational().is_none());

        let av = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let id = AlgebraMorphism::identity(&a);
        let ident = FiniteExtension::new_proven(id, vec![q(&av, "1")]).unwrap();
        assert!(ident.is_birational().is_some());
    }

    #[test]
    fn span_verification_detects_missing_generators() {
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 - x")).unwrap();
        let m = AlgebraMorphism::new(a, b, vec![q(&bv, "x")]).unwrap();
        let thin = FiniteExtension::new_proven(m, vec![q(&bv, "1")]);
        assert!(matches!(thin, Err(CasError::NotFinite(_))));
    }

    #[test]
    fn span_coordinates_reconstruct_elements() {
        let ext = umbrella_extension();
        let bv = ext.target().vars().clone();
        let c = q(&bv, "Y x + z");
        let coords = ext.span_coordinates(&c).unwrap();
        let mut acc = QPoly::zero(Rationals, bv.clone(), MonomialOrder::GrevLex);
        for (a, b) in coords.iter().zip(ext.module_gens()) {
            acc = &acc + &(&ext.morphism().apply(a) * b);
        }
        assert!(ext.target().eq_elems(&acc, &c));
        assert!(ext.span_coordinates(&q(&bv, "Y^3")).is_some());
        // coordinates respect the generators: Y itself picks out the second slot
        let yc = ext.span_coordinates(&q(&bv, "Y")).unwrap();
        assert!(ext
            .target()
            .eq_elems(&(&ext.morphism().apply(&yc[0]) + &(&ext.morphism().apply(&yc[1]) * &q(&bv, "Y"))), &q(&bv, "Y")));
    }

    #[test]
    fn minimal_polynomials_over_the_base() {
        let ext = umbrella_extension();
        let bv = ext.target().vars().clone();
        let sv = ext.source().vars().clone();
        let mp = ext.minimal_polynomial_over_base(&q(&bv, "Y")).unwrap();
        assert_eq!(mp.degree, 2);
        assert!(ext.source().eq_elems(&mp.coeffs[0], &q(&sv, "-z")));
        assert!(mp.coeffs[1].is_zero());
        assert!(mp.evaluate_at(&ext, &q(&bv, "Y")).is_zero());

        let cusp = cusp_extension();
        let tv = cusp.target().vars().clone();
        let cv = cusp.source().vars().clone();
        let mp = cusp.minimal_polynomial_over_base(&q(&tv, "t")).unwrap();
        assert_eq!(mp.degree, 2);
        assert!(cusp.source().eq_elems(&mp.coeffs[0], &q(&cv, "-x")));
        assert!(mp.evaluate_at(&cusp, &q(&tv, "t")).is_zero());

        // an image element has a linear dependence
        let mp = ext.minimal_polynomial_over_base(&q(&bv, "z")).unwrap();
        assert_eq!(mp.degree, 1);
        assert!(ext.source().eq_elems(&mp.coeffs[0], &q(&sv, "-z")));

        // broken evidence is reported rather than looping
        let av = VarSet::new(vec!["x"]);
        let bv2 = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv2, "y^2 - x")).unwrap();
        let m = AlgebraMorphism::new(a, b, vec![q(&bv2, "x")]).unwrap();
        let thin = FiniteExtension::new_assumed(m, vec![q(&bv2, "1")], "claimed").unwrap();
        assert!(matches!(
            thin.minimal_polynomial_over_base(&q(&bv2, "y")),
            Err(CasError::NotAlgebraic(_))
        ));
    }

    #[test]
    fn subalgebra_presentations() {
        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - z")).unwrap();
        let gens = vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")];
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let (sub, incl) = present_subalgebra(&b, &gens, &names).unwrap();
        let sv = sub.vars().clone();
        assert!(sub
            .relations()
            .equals(&Ideal::new(sv.clone(), vec![q(&sv, "y^2 - z x^2")])));
        assert!(incl.is_well_defined());
        assert!(sub.primality().is_proven());

        // re-presentation on all variables keeps the relations
        let all = vec![q(&bv, "x"), q(&bv, "Y"), q(&bv, "z")];
        let names2: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let (re, _) = present_subalgebra(&b, &all, &names2).unwrap();
        let rv = re.vars().clone();
        assert!(re
            .relations()
            .equals(&Ideal::new(rv.clone(), vec![q(&rv, "b^2 - c")])));
    }

    #[test]
    fn subring_equality_checks() {
        let pv = VarSet::new(vec!["x", "y", "z"]);
        let free = AffineDomain::polynomial_ring(pv.clone());
        let g1 = vec![q(&pv, "x"), q(&pv, "y"), q(&pv, "z")];
        let g2 = vec![q(&pv, "x"), q(&pv, "y"), q(&pv, "z"), q(&pv, "x y")];
        assert!(subring_equal(&free, &g1, &g2));

        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - z")).unwrap();
        let small = vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")];
        let big = vec![q(&bv, "x"), q(&bv, "Y"), q(&bv, "z")];
        assert!(!subring_equal(&b, &small, &big));

        let xv = VarSet::new(vec!["x"]);
        let line = AffineDomain::polynomial_ring(xv.clone());
        assert!(!subring_equal(&line, &[q(&xv, "x")], &[q(&xv, "x^2")]));
    }

    #[test]
    fn fraction_elements_compare_by_cross_multiplication() {
        let av = VarSet::new(vec!["x", "y", "z"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - z x^2")).unwrap();
        // y/x = zx/y on the umbrella since y^2 = zx^2
        let f1 = FractionElement::new(&a, q(&av, "y"), q(&av, "x")).unwrap();
        let f2 = FractionElement::new(&a, q(&av, "z x"), q(&av, "y")).unwrap();
        assert!(f1.eq_in(&a, &f2));
        let f3 = FractionElement::new(&a, q(&av, "z"), q(&av, "1")).unwrap();
        assert!(!f1.eq_in(&a, &f3));
        assert!(FractionElement::new(&a, q(&av, "1"), q(&av, "y^2 - z x^2")).is_err());
    }
}

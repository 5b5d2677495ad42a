//! Conductors, birational closures, and elementary central gluings of
//! module-finite extensions of affine domains. Subrings of the target are
//! carried as base-coordinate modules over the extension's module generators,
//! so colon ideals and saturations run on the module engine and every output
//! ships with exact membership witnesses.

use crate::algebra::{
    base_linear_relations, present_subalgebra, subring_equal, AffineDomain, AlgebraMorphism,
    FiniteExtension,
};
use crate::error::CasError;
use crate::groebner::{
    lift_module_membership, poly_const, poly_int, poly_one, poly_var, subalgebra_membership,
    Ideal, ModVec, Submodule,
};
use crate::polycore::{Field, QPoly, Rationals};
use crate::reality::{CentralOracle, CentralityStatus, OracleMode};
use crate::spectrum::{contract_prime, lying_over_primes, residue_extension_degree, PrimeIdeal};

/// Preimage in the base of a target element lying in the image subalgebra.
fn image_preimage(ext: &FiniteExtension, elem: &QPoly) -> Option<QPoly> {
    subalgebra_membership(
        elem,
        ext.morphism().images(),
        ext.target().relations(),
        ext.source().vars(),
    )
}

/// The target element with the given base coordinates over the module generators.
fn element_of_coords(ext: &FiniteExtension, coords: &[QPoly]) -> QPoly {
    let target = ext.target();
    let mut acc = poly_int(target.vars(), 0);
    for (c, b) in coords.iter().zip(ext.module_gens()) {
        acc = &acc + &(&ext.morphism().apply(c) * b);
    }
    target.normal_form(&acc)
}

/// Base coordinates of a target element as a module vector.
fn coords_vector(ext: &FiniteExtension, elem: &QPoly) -> Result<ModVec<Rationals>, CasError> {
    let coords = ext.span_coordinates(elem).ok_or_else(|| {
        CasError::NotFinite(format!(
            "{elem} has no base coordinates over the module generators"
        ))
    })?;
    Ok(ModVec::from_comps(coords))
}

/// The j-th unit coordinate vector over the base.
fn unit_vector(ext: &FiniteExtension, pos: usize) -> ModVec<Rationals> {
    ModVec::from_poly(poly_one(ext.source().vars()), ext.module_gens().len(), pos)
}

/// Generators of the full module of base-coefficient relations among the
/// module generators, with the base relations acting on every coordinate.
fn relation_vectors(ext: &FiniteExtension) -> Vec<ModVec<Rationals>> {
    let r = ext.module_gens().len();
    let embedded: Vec<QPoly> = ext
        .module_gens()
        .iter()
        .map(|b| ext.graph().embed_target(b))
        .collect();
    let mut out: Vec<ModVec<Rationals>> = base_linear_relations(ext.graph(), &embedded)
        .into_iter()
        .map(ModVec::from_comps)
        .collect();
    for g in ext.source().relations().gens() {
        for j in 0..r {
            out.push(ModVec::from_poly(g.clone(), r, j));
        }
    }
    out
}

/// Names stem0, stem1, ... avoiding the taken list.
fn fresh_names(taken: &[String], count: usize, stem: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    let mut used: Vec<String> = taken.to_vec();
    let mut k = 0usize;
    while out.len() < count {
        let cand = format!("{stem}{k}");
        k += 1;
        if used.contains(&cand) {
            continue;
        }
        used.push(cand.clone());
        out.push(cand);
    }
    out
}

/// The base mapped onto the leading presentation variables of a subring whose
/// presentation starts with the images of the base variables.
fn base_into_subring(
    source: &AffineDomain,
    subring: &AffineDomain,
) -> Result<AlgebraMorphism, CasError> {
    let images: Vec<QPoly> = (0..source.vars().len())
        .map(|i| poly_var(subring.vars(), i))
        .collect();
    let morphism = AlgebraMorphism::new(source.clone(), subring.clone(), images)?;
    if !morphism.is_well_defined() {
        return Err(CasError::AmbientMismatch(
            "base relations do not vanish in the subring presentation".into(),
        ));
    }
    Ok(morphism)
}

/// The prime must live in the base of the extension.
fn check_base_prime(ext: &FiniteExtension, p: &PrimeIdeal) -> Result<(), CasError> {
    let source = ext.source();
    if p.ambient().vars().names() != source.vars().names()
        || !p.ambient().relations().equals(source.relations())
    {
        return Err(CasError::AmbientMismatch(
            "prime does not live in the base of the extension".into(),
        ));
    }
    Ok(())
}

/// Exact witness that a conductor generator multiplies a module generator into the image.
#[derive(Clone, Debug)]
pub struct ConductorCertificate {
    /// Generator of the conductor in the base.
    pub factor: QPoly,
    /// Module generator it is tested against.
    pub module_gen: QPoly,
    /// Base element whose image is factor times the module generator.
    pub preimage: QPoly,
}

impl ConductorCertificate {
    /// Re-checks the product identity in the target.
    pub fn verify(&self, ext: &FiniteExtension) -> Result<(), CasError> {
        let lhs = &ext.morphism().apply(&self.factor) * &self.module_gen;
        let rhs = ext.morphism().apply(&self.preimage);
        if ext.target().eq_elems(&lhs, &rhs) {
            Ok(())
        } else {
            Err(CasError::MalformedCertificate(format!(
                "({}) * ({}) is not the image of {}",
                self.factor, self.module_gen, self.preimage
            )))
        }
    }
}

/// The conductor of a module-finite extension, as an ideal on both sides.
#[derive(Clone, Debug)]
pub struct ConductorResult {
    /// The conductor as an ideal of the base.
    pub in_base: Ideal,
    /// Its extension to the target, which equals the conductor as a target ideal.
    pub in_target: Ideal,
    /// One membership witness per conductor generator and module generator.
    pub certificates: Vec<ConductorCertificate>,
}

impl ConductorResult {
    /// Re-checks every certificate and the two-way generator memberships.
    pub fn verify(&self, ext: &FiniteExtension) -> Result<(), CasError> {
        for cert in &self.certificates {
            cert.verify(ext)?;
        }
        let source = ext.source();
        let target = ext.target();
        for a in self.in_base.gens() {
            if !self.in_target.contains(&ext.morphism().apply(a)) {
                return Err(CasError::MalformedCertificate(format!(
                    "conductor generator {a} is missing from the target side"
                )));
            }
            for b in ext.module_gens() {
                let witnessed = self.certificates.iter().any(|c| {
                    source.eq_elems(&c.factor, a) && target.eq_elems(&c.module_gen, b)
                });
                if !witnessed {
                    return Err(CasError::MalformedCertificate(format!(
                        "no witness that ({a}) * ({b}) lands in the image"
                    )));
                }
            }
        }
        for g in self.in_target.gens() {
            if !target.is_zero_elem(g) && !self.in_target.contains(g) {
                return Err(CasError::MalformedCertificate(format!(
                    "target generator {g} escaped its own ideal"
                )));
            }
        }
        Ok(())
    }
}

/// The conductor: all base elements multiplying the whole target into the image.
pub fn conductor(ext: &FiniteExtension) -> Result<ConductorResult, CasError> {
    ext.verify_span()?;
    let source = ext.source();
    let target = ext.target();
    let one_t = ext.graph().embed_target(&poly_one(target.vars()));
    let mut in_base: Option<Ideal> = None;
    for b in ext.module_gens() {
        let embedded = ext.graph().embed_target(b);
        let firsts: Vec<QPoly> = base_linear_relations(ext.graph(), &[embedded, one_t.clone()])
            .into_iter()
            .map(|rel| source.normal_form(&rel[0]))
            .filter(|c| !c.is_zero())
            .collect();
        let factor = Ideal::new(source.vars().clone(), firsts).sum(source.relations());
        in_base = Some(match in_base {
            None => factor,
            Some(acc) => acc.intersect(&factor)?,
        });
    }
    let in_base = in_base.expect("extensions carry at least one module generator");
    let mut certificates = Vec::new();
    for a in in_base.gens() {
        for b in ext.module_gens() {
            let prod = target.normal_form(&(&ext.morphism().apply(a) * b));
            let preimage = image_preimage(ext, &prod).ok_or_else(|| {
                CasError::MalformedCertificate(format!(
                    "conductor generator {a} fails to multiply {b} into the image"
                ))
            })?;
            certificates.push(ConductorCertificate {
                factor: a.clone(),
                module_gen: b.clone(),
                preimage,
            });
        }
    }
    let extended: Vec<QPoly> = in_base
        .gens()
        .iter()
        .map(|a| ext.morphism().apply(a))
        .collect();
    let in_target = Ideal::new(target.vars().clone(), extended).sum(target.relations());
    let result = ConductorResult {
        in_base,
        in_target,
        certificates,
    };
    result.verify(ext)?;
    Ok(result)
}

/// Witness that a closure element is a base fraction: the image of the
/// denominator times the element equals the image of the numerator.
#[derive(Clone, Debug)]
pub struct TorsionCertificate {
    /// Adjoined element of the target.
    pub element: QPoly,
    /// Numerator in the base.
    pub numerator: QPoly,
    /// Denominator in the base, nonzero.
    pub denominator: QPoly,
}

impl TorsionCertificate {
    /// Re-checks the fraction identity in the target.
    pub fn verify(&self, ext: &FiniteExtension) -> Result<(), CasError> {
        if ext.source().is_zero_elem(&self.denominator) {
            return Err(CasError::MalformedCertificate(
                "fraction witness has a zero denominator".into(),
            ));
        }
        let lhs = &ext.morphism().apply(&self.denominator) * &self.element;
        let rhs = ext.morphism().apply(&self.numerator);
        if ext.target().eq_elems(&lhs, &rhs) {
            Ok(())
        } else {
            Err(CasError::MalformedCertificate(format!(
                "({}) * ({}) is not the image of {}",
                self.denominator, self.element, self.numerator
            )))
        }
    }
}

/// The largest intermediate ring sharing the base's fraction field.
#[derive(Clone, Debug)]
pub struct BirationalClosure {
    /// Presentation of the closure.
    pub domain: AffineDomain,
    /// The base mapped into the closure.
    pub from_base: AlgebraMorphism,
    /// The closure included into the target.
    pub into_target: AlgebraMorphism,
    /// Fraction witnesses for the adjoined module generators.
    pub adjoined: Vec<TorsionCertificate>,
    /// True when nothing was adjoined.
    pub equals_base: bool,
    /// True when the closure already fills the target.
    pub equals_target: bool,
}

/// A single nonzero base element whose inversion makes the presented quotient
/// free, so one scalar saturation computes the whole torsion preimage: the
/// product of the pivots of a fraction-free column elimination.
fn freeing_multiplier(source: &AffineDomain, presentation: &Submodule) -> QPoly {
    let rank = presentation.rank();
    let mut cols: Vec<Vec<QPoly>> = presentation
        .gens()
        .iter()
        .map(|g| (0..rank).map(|i| source.normal_form(g.comp(i))).collect())
        .collect();
    let mut row_used = vec![false; rank];
    let mut col_used = vec![false; cols.len()];
    let mut f = poly_one(source.vars());
    loop {
        let mut pivot = None;
        'search: for (j, col) in cols.iter().enumerate() {
            if col_used[j] {
                continue;
            }
            for (i, entry) in col.iter().enumerate() {
                if !row_used[i] && !entry.is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            return source.normal_form(&f);
        };
        let p = cols[pj][pi].clone();
        f = source.normal_form(&(&f * &p));
        for j in 0..cols.len() {
            if j == pj || col_used[j] || cols[j][pi].is_zero() {
                continue;
            }
            let e = cols[j][pi].clone();
            for i in 0..rank {
                let next = &(&p * &cols[j][i]) - &(&e * &cols[pj][i]);
                cols[j][i] = source.normal_form(&next);
            }
        }
        row_used[pi] = true;
        col_used[pj] = true;
    }
}

/// Fraction witness for a saturated coordinate vector, preferring the kernel
/// search and falling back to the saturation multiplier. The base module's
/// first generator must be the leading unit vector.
fn torsion_certificate(
    ext: &FiniteExtension,
    base_module: &Submodule,
    vector: &ModVec<Rationals>,
    element: &QPoly,
    multiplier: &QPoly,
    exponent: u32,
) -> Result<TorsionCertificate, CasError> {
    if let Some((numerator, denominator)) = ext.is_in_base_fraction_field(element) {
        return Ok(TorsionCertificate {
            element: element.clone(),
            numerator,
            denominator,
        });
    }
    let source = ext.source();
    let s = source.normal_form(&multiplier.pow(exponent));
    let scaled = vector.scale_poly(&s);
    let coeffs = lift_module_membership(&scaled, base_module.gens(), source.vars()).ok_or_else(
        || {
            CasError::MalformedCertificate(
                "saturated vector has no base multiple inside the module".into(),
            )
        },
    )?;
    Ok(TorsionCertificate {
        element: element.clone(),
        numerator: source.normal_form(&coeffs[0]),
        denominator: s,
    })
}

/// The torsion preimage of the image: all target elements with a nonzero base
/// multiple inside the image subring.
pub fn birational_closure(ext: &FiniteExtension) -> Result<BirationalClosure, CasError> {
    ext.verify_span()?;
    let source = ext.source();
    let target = ext.target();
    let r = ext.module_gens().len();
    let mut base_gens = vec![unit_vector(ext, 0)];
    base_gens.extend(relation_vectors(ext));
    let base_module = Submodule::new(source.vars().clone(), r, base_gens);
    let f = freeing_multiplier(source, &base_module);
    let (saturated, exponent) = base_module.saturate_by_scalar(&f);
    let mut adjoined: Vec<TorsionCertificate> = Vec::new();
    for v in saturated.gens() {
        if base_module.contains(v) {
            continue;
        }
        let raw = element_of_coords(ext, v.comps());
        if target.is_zero_elem(&raw) {
            continue;
        }
        let element = raw.monic();
        if adjoined.iter().any(|c| target.eq_elems(&c.element, &element)) {
            continue;
        }
        let lead = raw.leading_coef().expect("nonzero element").clone();
        let scaled = v.scale_poly(&poly_const(source.vars(), Rationals.inv(&lead)));
        let cert = torsion_certificate(ext, &base_module, &scaled, &element, &f, exponent)?;
        cert.verify(ext)?;
        adjoined.push(cert);
    }
    let mut gens: Vec<QPoly> = ext.morphism().images().to_vec();
    gens.extend(adjoined.iter().map(|c| c.element.clone()));
    let mut names: Vec<String> = source.vars().names().to_vec();
    names.extend(fresh_names(&names, adjoined.len(), "w"));
    let (domain, into_target) = present_subalgebra(target, &gens, &names)?;
    let from_base = base_into_subring(source, &domain)?;
    let target_gens: Vec<QPoly> = (0..target.vars().len())
        .map(|i| poly_var(target.vars(), i))
        .collect();
    let equals_base = adjoined.is_empty();
    let equals_target = subring_equal(target, &gens, &target_gens);
    Ok(BirationalClosure {
        domain,
        from_base,
        into_target,
        adjoined,
        equals_base,
        equals_target,
    })
}

/// An intermediate ring between the image and the target, carried as a base
/// module: ring elements together with their coordinate span.
#[derive(Clone, Debug)]
pub struct SubringModule {
    /// Elements of the target spanning the module over the base, first entry 1.
    pub gens: Vec<QPoly>,
    /// Their base-coordinate span over the module generators, relations included.
    pub coords: Submodule,
    /// Saturation multipliers applied so far, with stabilizing exponents.
    pub multipliers: Vec<(QPoly, u32)>,
    /// False when the saturation fixed point failed its stability pass.
    pub certified: bool,
}

impl SubringModule {
    /// The module spanned by the image of the base and the given elements.
    pub fn from_elements(ext: &FiniteExtension, elements: &[QPoly]) -> Result<Self, CasError> {
        let target = ext.target();
        let r = ext.module_gens().len();
        let mut gens = vec![poly_one(target.vars())];
        let mut vectors = vec![unit_vector(ext, 0)];
        for e in elements {
            let nf = target.normal_form(e);
            if nf.is_zero() || gens.iter().any(|g| target.eq_elems(g, &nf)) {
                continue;
            }
            vectors.push(coords_vector(ext, &nf)?);
            gens.push(nf);
        }
        vectors.extend(relation_vectors(ext));
        Ok(SubringModule {
            gens,
            coords: Submodule::new(ext.source().vars().clone(), r, vectors),
            multipliers: Vec::new(),
            certified: true,
        })
    }

    /// Rebuilds the element list of a coordinate module.
    fn from_coords(
        ext: &FiniteExtension,
        coords: Submodule,
        multipliers: Vec<(QPoly, u32)>,
        certified: bool,
    ) -> Self {
        let target = ext.target();
        let mut gens = vec![poly_one(target.vars())];
        for v in coords.gens() {
            let element = element_of_coords(ext, v.comps()).monic();
            if element.is_zero() || gens.iter().any(|g| target.eq_elems(g, &element)) {
                continue;
            }
            gens.push(element);
        }
        SubringModule {
            gens,
            coords,
            multipliers,
            certified,
        }
    }

    /// Checks that 1 lies in the span and the span is closed under multiplication.
    pub fn verify(&self, ext: &FiniteExtension) -> Result<(), CasError> {
        if !self.coords.contains(&unit_vector(ext, 0)) {
            return Err(CasError::MalformedCertificate(
                "module span does not contain 1".into(),
            ));
        }
        let target = ext.target();
        for (i, g) in self.gens.iter().enumerate() {
            for h in &self.gens[i..] {
                let prod = target.normal_form(&(g * h));
                if !self.coords.contains(&coords_vector(ext, &prod)?) {
                    return Err(CasError::MalformedCertificate(format!(
                        "product ({g}) * ({h}) escapes the module span"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership of a target element in the module span.
    pub fn contains_element(
        &self,
        ext: &FiniteExtension,
        element: &QPoly,
    ) -> Result<bool, CasError> {
        Ok(self.coords.contains(&coords_vector(ext, element)?))
    }
}

/// Multiplier candidates outside p: generators of the colon of the module into
/// the full coordinate module.
fn saturation_candidates(
    ext: &FiniteExtension,
    coords: &Submodule,
    p: &PrimeIdeal,
) -> Result<Vec<QPoly>, CasError> {
    let source = ext.source();
    let r = ext.module_gens().len();
    let mut colon: Option<Ideal> = None;
    for j in 0..r {
        let factor = coords.quotient_by_vector(&unit_vector(ext, j));
        colon = Some(match colon {
            None => factor,
            Some(acc) => acc.intersect(&factor)?,
        });
    }
    let colon = colon.expect("extensions carry at least one module generator");
    let mut out: Vec<QPoly> = Vec::new();
    for c in colon.gens() {
        let nf = source.normal_form(c);
        if nf.is_zero() || nf.is_constant() || p.contains(&nf) {
            continue;
        }
        if out.iter().any(|s| source.eq_elems(s, &nf)) {
            continue;
        }
        out.push(nf);
    }
    Ok(out)
}

/// Deterministic stability probes outside p: one plus combinations of the
/// prime's generators and the base variables.
fn stability_multipliers(ext: &FiniteExtension, p: &PrimeIdeal) -> Vec<QPoly> {
    let source = ext.source();
    let one = poly_one(source.vars());
    let mut candidates: Vec<QPoly> = Vec::new();
    for g in p.ideal().gens() {
        let nf = source.normal_form(g);
        if !nf.is_zero() {
            candidates.push(&one + &nf);
        }
    }
    for i in 0..source.vars().len() {
        let v = poly_var(source.vars(), i);
        candidates.push(&one + &v);
        candidates.push(&one + &(&v * &v));
    }
    let mut out: Vec<QPoly> = Vec::new();
    for c in candidates {
        let nf = source.normal_form(&c);
        if nf.is_constant() || p.contains(&nf) {
            continue;
        }
        if out.iter().any(|s| source.eq_elems(s, &nf)) {
            continue;
        }
        out.push(nf);
        if out.len() == 4 {
            break;
        }
    }
    out
}

/// Saturates the module at the prime: all target elements sent into the module
/// by some base element outside p. Multipliers come from colon ideals of the
/// module, iterated to a fixed point; the fixed point is then probed with
/// extra multipliers and the result is flagged when a probe still grows it.
pub fn saturate_module_at_prime(
    ext: &FiniteExtension,
    module: &SubringModule,
    p: &PrimeIdeal,
) -> Result<SubringModule, CasError> {
    check_base_prime(ext, p)?;
    let mut current = module.coords.clone();
    let mut multipliers = module.multipliers.clone();
    loop {
        let mut grew = false;
        for s in saturation_candidates(ext, &current, p)? {
            let (next, exponent) = current.saturate_by_scalar(&s);
            if !current.contains_module(&next) {
                current = next;
                multipliers.push((s, exponent));
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let mut certified = true;
    for s in stability_multipliers(ext, p) {
        let (next, exponent) = current.saturate_by_scalar(&s);
        if !current.contains_module(&next) {
            current = next;
            multipliers.push((s, exponent));
            certified = false;
        }
    }
    Ok(SubringModule::from_coords(
        ext,
        current,
        multipliers,
        certified && module.certified,
    ))
}

/// An elementary central gluing: the largest intermediate ring collapsing the
/// central fiber over the glued prime to a single prime with a trivial
/// residue extension.
#[derive(Clone, Debug)]
pub struct GluingResult {
    /// Presentation of the glued subring.
    pub subring: AffineDomain,
    /// The subring included into the target.
    pub inclusion: AlgebraMorphism,
    /// The base mapped into the subring.
    pub base_to_subring: AlgebraMorphism,
    /// The prime of the base being glued.
    pub glued_prime: PrimeIdeal,
    /// Central primes of the target lying over the glued prime.
    pub fiber: Vec<PrimeIdeal>,
    /// True when the central fiber is empty and the subring is the whole target.
    pub trivial: bool,
    /// Module presentation of the subring over the base.
    pub module: SubringModule,
    /// The base mapped into the subring as a verified module-finite extension.
    pub base_extension: FiniteExtension,
    /// Oracle verdicts and saturation notes this result depends on.
    pub assumptions: Vec<String>,
    /// Every oracle status the result depends on, glued prime first.
    pub verdicts: Vec<CentralityStatus>,
}

pub(crate) fn status_line(status: &CentralityStatus) -> &'static str {
    match status {
        CentralityStatus::ProvenCentral(_) => "proven central",
        CentralityStatus::ProvenNotCentral(_) => "proven not central",
        CentralityStatus::HeuristicCentral(_) => "heuristically central",
        CentralityStatus::HeuristicNotCentral(_) => "heuristically not central",
        CentralityStatus::AssumedByUser => "assumed central by the user",
        CentralityStatus::Unknown => "undecided",
    }
}

/// Glues the target over a central prime of the base. The fiber is the set of
/// central primes lying over it; an empty fiber returns the target unchanged.
pub fn elementary_central_gluing(
    ext: &FiniteExtension,
    p: &PrimeIdeal,
    oracle: &CentralOracle,
    hints: Option<&[PrimeIdeal]>,
) -> Result<GluingResult, CasError> {
    glue(ext, p, oracle, hints, true, false)
}

/// Gluing variant that excludes undecided fiber primes instead of failing,
/// for drivers whose policy treats unknown verdicts as not central.
pub(crate) fn elementary_gluing_drop_undecided(
    ext: &FiniteExtension,
    p: &PrimeIdeal,
    oracle: &CentralOracle,
    hints: Option<&[PrimeIdeal]>,
) -> Result<GluingResult, CasError> {
    glue(ext, p, oracle, hints, true, true)
}

fn glue(
    ext: &FiniteExtension,
    p: &PrimeIdeal,
    oracle: &CentralOracle,
    hints: Option<&[PrimeIdeal]>,
    check_fixed_point: bool,
    drop_undecided: bool,
) -> Result<GluingResult, CasError> {
    ext.verify_span()?;
    check_base_prime(ext, p)?;
    let source = ext.source();
    let target = ext.target();
    let mut assumptions = Vec::new();
    let mut verdicts = Vec::new();

    let p_verdict = oracle.is_central_prime(p);
    verdicts.push(p_verdict.status.clone());
    match p_verdict.decided_central() {
        Some(true) => assumptions.push(format!(
            "glued prime {}: {}",
            p.ideal(),
            status_line(&p_verdict.status)
        )),
        Some(false) => {
            return Err(CasError::Unsupported(format!(
                "the glued prime {} is not central",
                p.ideal()
            )));
        }
        None => {
            return Err(CasError::OracleInconclusive(format!(
                "centrality of the glued prime {} is undecided",
                p.ideal()
            )));
        }
    }

    if hints.is_some() {
        assumptions.push("fiber primes taken from a supplied decomposition".into());
    }
    let mut fiber = Vec::new();
    for q in lying_over_primes(ext, p, hints)? {
        let verdict = oracle.is_central_prime(&q);
        verdicts.push(verdict.status.clone());
        match verdict.decided_central() {
            Some(true) => {
                assumptions.push(format!(
                    "fiber prime {}: {}",
                    q.ideal(),
                    status_line(&verdict.status)
                ));
                fiber.push(q);
            }
            Some(false) => {
                assumptions.push(format!(
                    "fiber prime {} excluded: {}",
                    q.ideal(),
                    status_line(&verdict.status)
                ));
            }
            None => {
                if drop_undecided {
                    assumptions.push(format!(
                        "fiber prime {} excluded: undecided, treated as not central",
                        q.ideal()
                    ));
                } else if matches!(oracle.mode, OracleMode::Permissive) {
                    assumptions.push(format!(
                        "fiber prime {} kept without a verdict",
                        q.ideal()
                    ));
                    fiber.push(q);
                } else {
                    return Err(CasError::OracleInconclusive(format!(
                        "centrality of the fiber prime {} is undecided",
                        q.ideal()
                    )));
                }
            }
        }
    }

    if fiber.is_empty() {
        assumptions.push("no central primes over the glued prime: trivial gluing".into());
        let module = SubringModule::from_elements(ext, ext.module_gens())?;
        return Ok(GluingResult {
            subring: target.clone(),
            inclusion: AlgebraMorphism::identity(target),
            base_to_subring: ext.morphism().clone(),
            glued_prime: p.clone(),
            fiber,
            trivial: true,
            module,
            base_extension: ext.clone(),
            assumptions,
            verdicts,
        });
    }

    // the module spanned by the image of the base and the fiber intersection
    let mut fiber_ideal = fiber[0].ideal().clone();
    for q in &fiber[1..] {
        fiber_ideal = fiber_ideal.intersect(q.ideal())?;
    }
    let mut elements = Vec::new();
    for g in fiber_ideal.gens() {
        let nf = target.normal_form(g);
        if nf.is_zero() {
            continue;
        }
        for b in ext.module_gens() {
            elements.push(target.normal_form(&(&nf * b)));
        }
    }
    let pre = SubringModule::from_elements(ext, &elements)?;
    let module = saturate_module_at_prime(ext, &pre, p)?;
    if !module.certified {
        assumptions.push("saturation fixed point was not certified by the stability pass".into());
    }
    for (s, e) in &module.multipliers {
        assumptions.push(format!("saturated at the multiplier {s} (exponent {e})"));
    }
    module.verify(ext)?;

    // the fiber intersection stays inside the glued module
    for g in fiber_ideal.gens() {
        let nf = target.normal_form(g);
        if !nf.is_zero() && !module.contains_element(ext, &nf)? {
            return Err(CasError::Unsupported(format!(
                "gluing invariant failed: {nf} left the module span"
            )));
        }
    }

    // present the subring: base images plus the module elements outside the image
    let mut adjoined: Vec<QPoly> = Vec::new();
    for d in &module.gens {
        if image_preimage(ext, d).is_none() && !adjoined.iter().any(|a| target.eq_elems(a, d)) {
            adjoined.push(d.clone());
        }
    }
    let mut sub_gens: Vec<QPoly> = ext.morphism().images().to_vec();
    sub_gens.extend(adjoined.iter().cloned());
    let mut names: Vec<String> = source.vars().names().to_vec();
    names.extend(fresh_names(&names, adjoined.len(), "w"));
    let (subring, inclusion) = present_subalgebra(target, &sub_gens, &names)?;
    let base_to_subring = base_into_subring(source, &subring)?;

    // all fiber primes contract to the same prime of the subring
    let contractions: Vec<PrimeIdeal> = fiber
        .iter()
        .map(|q| contract_prime(q, &inclusion))
        .collect::<Result<_, _>>()?;
    for c in &contractions[1..] {
        if !c.ideal().equals(contractions[0].ideal()) {
            return Err(CasError::Unsupported(
                "gluing invariant failed: fiber contractions disagree".into(),
            ));
        }
    }

    // the contracted prime has a trivial residue extension over the glued prime
    let mut sub_module_gens = vec![poly_one(subring.vars())];
    for i in 0..adjoined.len() {
        sub_module_gens.push(poly_var(subring.vars(), source.vars().len() + i));
    }
    let base_to_sub_ext = FiniteExtension::new_proven(base_to_subring.clone(), sub_module_gens)?;
    for c in &contractions {
        let degree = residue_extension_degree(p, c, &base_to_sub_ext)?;
        if degree != 1 {
            return Err(CasError::Unsupported(format!(
                "gluing invariant failed: residue extension degree {degree} at {}",
                c.ideal()
            )));
        }
    }

    if check_fixed_point {
        let re_ext = FiniteExtension::new_proven(inclusion.clone(), ext.module_gens().to_vec())?;
        let mut re_oracle = oracle.clone();
        re_oracle.assume_central(contractions[0].clone());
        for q in &fiber {
            re_oracle.assume_central(q.clone());
        }
        let again = glue(&re_ext, &contractions[0], &re_oracle, None, false, false)?;
        if !subring_equal(target, inclusion.images(), again.inclusion.images()) {
            return Err(CasError::Unsupported(
                "gluing invariant failed: re-gluing moved the subring".into(),
            ));
        }
        assumptions.push("fixed point verified by re-gluing over the contracted prime".into());
    }

    Ok(GluingResult {
        subring,
        inclusion,
        base_to_subring,
        glued_prime: p.clone(),
        fiber,
        trivial: false,
        module,
        base_extension: base_to_sub_ext,
        assumptions,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Evidence;
    use crate::polycore::parse::parse;
    use crate::polycore::{MonomialOrder, VarSet};
    use crate::reality::SamplingConfig;

    fn q(vars: &Arc<VarSet>, text: &str) -> QPoly {
        parse(text, vars, &MonomialOrder::GrevLex).unwrap()
    }

    fn prime(domain: &AffineDomain, gens: &[&str]) -> PrimeIdeal {
        let polys: Vec<QPoly> = gens.iter().map(|g| q(domain.vars(), g)).collect();
        PrimeIdeal::new(
            domain.clone(),
            Ideal::new(domain.vars().clone(), polys),
            Evidence::Assumed("test input".into()),
        )
        .unwrap()
    }

    fn sampling_oracle() -> CentralOracle {
        CentralOracle::new(OracleMode::Sampling, SamplingConfig::default())
    }

    fn exact_oracle() -> CentralOracle {
        CentralOracle::new(OracleMode::ExactOnly, SamplingConfig::default())
    }

    /// Q[x,y,z]/(y^2 - z x^2) -> Q[x,Y,z]/(Y^2 - z): x -> x, y -> Yx, z -> z.
    fn pinch_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y", "z"]);
        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - z x^2")).unwrap();
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - z")).unwrap();
        let phi = AlgebraMorphism::new(
            a,
            b.clone(),
            vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")],
        )
        .unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "Y")]).unwrap()
    }

    /// Q[x,y,z]/(y^3 - (1+z^2) x^3) -> Q[x,Y,z]/(Y^3 - (1+z^2)): x -> x, y -> Yx, z -> z.
    fn triple_pinch_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y", "z"]);
        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let a = AffineDomain::hypersurface(q(&av, "y^3 - x^3 - z^2 x^3")).unwrap();
        let b = AffineDomain::hypersurface(q(&bv, "Y^3 - 1 - z^2")).unwrap();
        let phi = AlgebraMorphism::new(
            a,
            b.clone(),
            vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")],
        )
        .unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "Y"), q(&bv, "Y^2")]).unwrap()
    }

    /// Q[x,y]/(y^2 - x^3) -> Q[t]: x -> t^2, y -> t^3.
    fn cusp_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y"]);
        let tv = VarSet::new(vec!["t"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let b = AffineDomain::polynomial_ring(tv.clone());
        let phi = AlgebraMorphism::new(a, b.clone(), vec![q(&tv, "t^2"), q(&tv, "t^3")]).unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&tv), q(&tv, "t")]).unwrap()
    }

    /// Q[x] -> Q[x,y]/(y^2 - x): x -> x.
    fn square_root_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 - x")).unwrap();
        let phi = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x")]).unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "y")]).unwrap()
    }

    /// Q[x] -> Q[x,y]/(y^2 + x^2): x -> x. The target is not real.
    fn imaginary_square_root_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 + x^2")).unwrap();
        let phi = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x")]).unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "y")]).unwrap()
    }

    /// Q[x,y]/(y^2 - x (x-1)^2) -> Q[x,Y]/(Y^2 - x): x -> x, y -> Y(x-1).
    fn nodal_curve_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y"]);
        let bv = VarSet::new(vec!["x", "Y"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3 + 2 x^2 - x")).unwrap();
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - x")).unwrap();
        let phi =
            AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x"), q(&bv, "Y x - Y")]).unwrap();
        FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "Y")]).unwrap()
    }

    fn identity_extension(domain: &AffineDomain) -> FiniteExtension {
        FiniteExtension::new_proven(
            AlgebraMorphism::identity(domain),
            vec![poly_one(domain.vars())],
        )
        .unwrap()
    }

    #[test]
    fn conductor_of_the_pinch_extension_is_the_pinch_locus() {
        let ext = pinch_extension();
        let result = conductor(&ext).unwrap();
        let a = ext.source();
        let b = ext.target();
        let expected_base = Ideal::new(a.vars().clone(), vec![q(a.vars(), "x"), q(a.vars(), "y")])
            .sum(a.relations());
        assert!(result.in_base.equals(&expected_base));
        let expected_target =
            Ideal::new(b.vars().clone(), vec![q(b.vars(), "x")]).sum(b.relations());
        assert!(result.in_target.equals(&expected_target));
        result.verify(&ext).unwrap();
    }

    #[test]
    fn conductor_of_the_triple_pinch_extension_is_the_squared_fold() {
        let ext = triple_pinch_extension();
        let result = conductor(&ext).unwrap();
        let a = ext.source();
        let b = ext.target();
        let expected_base = Ideal::new(
            a.vars().clone(),
            vec![
                q(a.vars(), "x^2"),
                q(a.vars(), "x y"),
                q(a.vars(), "y^2"),
            ],
        )
        .sum(a.relations());
        assert!(result.in_base.equals(&expected_base));
        let expected_target =
            Ideal::new(b.vars().clone(), vec![q(b.vars(), "x^2")]).sum(b.relations());
        assert!(result.in_target.equals(&expected_target));
    }

    #[test]
    fn conductor_of_an_identity_extension_is_everything() {
        let av = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let result = conductor(&identity_extension(&a)).unwrap();
        assert!(result.in_base.is_unit());
        assert!(result.in_target.is_unit());
    }

    #[test]
    fn birational_closure_of_a_square_root_is_the_base() {
        let ext = square_root_extension();
        let closure = birational_closure(&ext).unwrap();
        assert!(closure.equals_base);
        assert!(!closure.equals_target);
        assert!(closure.adjoined.is_empty());
        assert!(closure.domain.relations().is_zero_ideal());
    }

    #[test]
    fn birational_closure_of_an_imaginary_square_root_is_the_base() {
        let ext = imaginary_square_root_extension();
        let closure = birational_closure(&ext).unwrap();
        assert!(closure.equals_base);
        assert!(closure.adjoined.is_empty());
    }

    #[test]
    fn birational_closure_of_the_cusp_fills_the_target() {
        let ext = cusp_extension();
        let closure = birational_closure(&ext).unwrap();
        assert!(!closure.equals_base);
        assert!(closure.equals_target);
        let b = ext.target();
        assert!(closure
            .adjoined
            .iter()
            .any(|c| b.eq_elems(&c.element, &q(b.vars(), "t"))));
        for cert in &closure.adjoined {
            cert.verify(&ext).unwrap();
        }
    }

    #[test]
    fn birational_closure_of_a_birational_extension_fills_the_target() {
        let ext = pinch_extension();
        let closure = birational_closure(&ext).unwrap();
        assert!(closure.equals_target);
        assert!(ext.is_birational().is_some());
    }

    #[test]
    fn subring_modules_check_multiplicative_closure() {
        let ext = triple_pinch_extension();
        let b = ext.target();
        let open = SubringModule::from_elements(&ext, &[q(b.vars(), "Y")]).unwrap();
        assert!(open.verify(&ext).is_err());
        let closed =
            SubringModule::from_elements(&ext, &[q(b.vars(), "Y"), q(b.vars(), "Y^2")]).unwrap();
        closed.verify(&ext).unwrap();
    }

    #[test]
    fn saturation_fixes_an_already_saturated_module() {
        let ext = pinch_extension();
        let b = ext.target();
        let pre =
            SubringModule::from_elements(&ext, &[q(b.vars(), "x"), q(b.vars(), "x Y")]).unwrap();
        let p = prime(ext.source(), &["x", "y"]);
        let result = saturate_module_at_prime(&ext, &pre, &p).unwrap();
        assert!(result.certified);
        assert!(result.multipliers.is_empty());
        assert!(result.coords.equals(&pre.coords));
    }

    #[test]
    fn saturation_adjoins_module_generators_away_from_the_conductor() {
        let ext = cusp_extension();
        let base_only = SubringModule::from_elements(&ext, &[]).unwrap();
        let p = prime(ext.source(), &["x - 1", "y - 1"]);
        let result = saturate_module_at_prime(&ext, &base_only, &p).unwrap();
        assert!(result.certified);
        assert!(!result.multipliers.is_empty());
        assert!(result.coords.contains(&unit_vector(&ext, 1)));
    }

    #[test]
    fn gluing_of_the_pinch_collapses_the_double_line() {
        let ext = pinch_extension();
        let p = prime(ext.source(), &["x", "y"]);
        let result = elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap();
        assert!(!result.trivial);
        assert_eq!(result.fiber.len(), 1);
        let b = ext.target();
        let expected = [q(b.vars(), "x"), q(b.vars(), "Y x"), q(b.vars(), "z")];
        assert!(subring_equal(b, result.inclusion.images(), &expected));
        assert!(result.module.certified);
        assert!(result
            .assumptions
            .iter()
            .any(|a| a.contains("fixed point")));
    }

    #[test]
    fn gluing_of_the_triple_pinch_adjoins_the_fold_square() {
        let ext = triple_pinch_extension();
        let p = prime(ext.source(), &["x", "y"]);
        let result = elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap();
        assert!(!result.trivial);
        let b = ext.target();
        let expected = [
            q(b.vars(), "x"),
            q(b.vars(), "Y x"),
            q(b.vars(), "z"),
            q(b.vars(), "Y^2 x"),
        ];
        assert!(subring_equal(b, result.inclusion.images(), &expected));
        let proper = [q(b.vars(), "x"), q(b.vars(), "Y x"), q(b.vars(), "z")];
        assert!(!subring_equal(b, result.inclusion.images(), &proper));
    }

    #[test]
    fn gluing_contains_every_admissible_intermediate_module() {
        let ext = triple_pinch_extension();
        let p = prime(ext.source(), &["x", "y"]);
        let result = elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap();
        let b = ext.target();
        let pre = SubringModule::from_elements(
            &ext,
            &[q(b.vars(), "x"), q(b.vars(), "x Y"), q(b.vars(), "x Y^2")],
        )
        .unwrap();
        for g in &pre.gens {
            assert!(result.module.contains_element(&ext, g).unwrap());
        }
    }

    #[test]
    fn gluing_at_a_nodal_point_returns_the_base() {
        let ext = nodal_curve_extension();
        let p = prime(ext.source(), &["x - 1", "y"]);
        let mut oracle = exact_oracle();
        oracle.assume_central(p.clone());
        let result = elementary_central_gluing(&ext, &p, &oracle, None).unwrap();
        assert_eq!(result.fiber.len(), 2);
        let b = ext.target();
        let expected = [q(b.vars(), "x"), q(b.vars(), "Y x - Y")];
        assert!(subring_equal(b, result.inclusion.images(), &expected));
        assert!(
            result
                .assumptions
                .iter()
                .filter(|a| a.contains("proven central"))
                .count()
                >= 2
        );
    }

    #[test]
    fn gluing_with_an_empty_central_fiber_is_trivial() {
        let ext = imaginary_square_root_extension();
        let p = prime(ext.source(), &["x"]);
        let result = elementary_central_gluing(&ext, &p, &exact_oracle(), None).unwrap();
        assert!(result.trivial);
        assert!(result.fiber.is_empty());
        assert_eq!(
            result.subring.vars().names(),
            ext.target().vars().names()
        );
        assert!(result.assumptions.iter().any(|a| a.contains("trivial")));
    }

    #[test]
    fn gluing_rejects_a_prime_that_is_not_central() {
        let bv = VarSet::new(vec!["x", "y"]);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 + x^2")).unwrap();
        let ext = identity_extension(&b);
        let p = prime(&b, &["x", "y"]);
        let err = elementary_central_gluing(&ext, &p, &exact_oracle(), None).unwrap_err();
        assert!(matches!(err, CasError::Unsupported(_)));
    }

    #[test]
    fn gluing_requires_a_verdict_on_the_glued_prime() {
        let ext = pinch_extension();
        let p = prime(ext.source(), &["x", "y"]);
        let err = elementary_central_gluing(&ext, &p, &exact_oracle(), None).unwrap_err();
        assert!(matches!(err, CasError::OracleInconclusive(_)));
    }

    #[test]
    fn permissive_mode_glues_through_missing_fiber_verdicts() {
        // over x = 1 the fiber of Y^2 + x is cut out by Y^2 + 1, whose locus
        // has no real points for the sampler to find
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "Y"]);
        let a = AffineDomain::polynomial_ring(av.clone());
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 + x")).unwrap();
        let phi = AlgebraMorphism::new(a.clone(), b.clone(), vec![q(&bv, "x")]).unwrap();
        let ext =
            FiniteExtension::new_proven(phi, vec![poly_one(&bv), q(&bv, "Y")]).unwrap();
        let p = prime(&a, &["x - 1"]);
        let exact_err = elementary_central_gluing(&ext, &p, &exact_oracle(), None).unwrap_err();
        assert!(matches!(exact_err, CasError::OracleInconclusive(_)));
        let sampling_err =
            elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap_err();
        assert!(matches!(sampling_err, CasError::OracleInconclusive(_)));
        let permissive = CentralOracle::new(OracleMode::Permissive, SamplingConfig::default());
        let result = elementary_central_gluing(&ext, &p, &permissive, None).unwrap();
        assert!(!result.trivial);
        let expected = [q(&bv, "x"), q(&bv, "Y x - Y")];
        assert!(subring_equal(&b, result.inclusion.images(), &expected));
        assert!(result
            .assumptions
            .iter()
            .any(|a| a.contains("kept without a verdict")));
    }

    #[test]
    fn localization_commutes_with_gluing() {
        let ext = pinch_extension();
        let a = ext.source();
        let b = ext.target();
        let p = prime(a, &["x", "y"]);
        let pre =
            SubringModule::from_elements(&ext, &[q(b.vars(), "x"), q(b.vars(), "x Y")]).unwrap();
        let glued = saturate_module_at_prime(&ext, &pre, &p).unwrap();
        for f in ["z", "z + 1", "z - 2"] {
            let multiplier = q(a.vars(), f);
            let after = glued.coords.saturate_by_scalar(&multiplier).0;
            let localized = SubringModule::from_coords(
                &ext,
                pre.coords.saturate_by_scalar(&multiplier).0,
                Vec::new(),
                true,
            );
            let other = saturate_module_at_prime(&ext, &localized, &p).unwrap();
            assert!(after.equals(&other.coords));
        }
    }

    #[test]
    fn gluing_preserves_primes_away_from_the_glued_prime() {
        let ext = triple_pinch_extension();
        let a = ext.source();
        let p = prime(a, &["x", "y"]);
        let result = elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap();
        let sub_vars = result.subring.vars();
        let module_gens = vec![poly_one(sub_vars), poly_var(sub_vars, 3)];
        let to_subring =
            FiniteExtension::new_proven(result.base_to_subring.clone(), module_gens).unwrap();
        let through = FiniteExtension::new_proven(
            result.inclusion.clone(),
            ext.module_gens().to_vec(),
        )
        .unwrap();
        for p_gens in [vec!["x - 2", "y - 2", "z"], Vec::new()] {
            let away = if p_gens.is_empty() {
                PrimeIdeal::zero(a)
            } else {
                prime(a, &p_gens)
            };
            let direct = lying_over_primes(&ext, &away, None).unwrap();
            let middle = lying_over_primes(&to_subring, &away, None).unwrap();
            assert_eq!(direct.len(), 1);
            assert_eq!(middle.len(), 1);
            assert_eq!(
                residue_extension_degree(&away, &middle[0], &to_subring).unwrap(),
                1
            );
            let upstairs = lying_over_primes(&through, &middle[0], None).unwrap();
            assert_eq!(upstairs.len(), 1);
            assert_eq!(
                residue_extension_degree(&away, &direct[0], &ext).unwrap(),
                residue_extension_degree(&middle[0], &upstairs[0], &through).unwrap()
            );
        }
    }

    #[test]
    fn the_fiber_lands_in_the_conductor_of_the_glued_subring() {
        let ext = pinch_extension();
        let p = prime(ext.source(), &["x", "y"]);
        let result = elementary_central_gluing(&ext, &p, &sampling_oracle(), None).unwrap();
        let through = FiniteExtension::new_proven(
            result.inclusion.clone(),
            ext.module_gens().to_vec(),
        )
        .unwrap();
        let cond = conductor(&through).unwrap();
        for q_prime in &result.fiber {
            for g in q_prime.ideal().gens() {
                assert!(cond.in_target.contains(g));
            }
        }
    }
}

//! Prime ideals of presented domains: contraction, fibers, minimal primes,
//! and residue-field presentations over rational-function coefficients.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::algebra::{hypersurface_irreducible, AffineDomain, AlgebraMorphism, Evidence,
    FiniteExtension, GraphRing};
use crate::error::CasError;
use crate::groebner::{groebner as module_basis, Ideal, ModOrder, ModVec};
use crate::polycore::{factor_univariate, Monomial, MonomialOrder, Polynomial, QPoly, RatFn,
    RatFnField, Rationals, VarSet};

/// A prime of a presented domain, stored as its full preimage in the ambient
/// polynomial ring (so it always contains the domain relations).
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    ambient: AffineDomain,
    ideal: Ideal,
    evidence: Evidence,
}

impl PrimeIdeal {
    /// Wraps generators of a prime of the domain; relations are absorbed into the preimage.
    pub fn new(ambient: AffineDomain, gens: Ideal, evidence: Evidence) -> Result<Self, CasError> {
        let ideal = gens.sum(ambient.relations());
        if ideal.is_unit() {
            return Err(CasError::NotProper);
        }
        Ok(PrimeIdeal {
            ambient,
            ideal,
            evidence,
        })
    }

    /// The zero prime of the domain itself.
    pub fn zero(ambient: &AffineDomain) -> Self {
        let evidence = match ambient.primality() {
            Evidence::Proven(m) => Evidence::Proven(format!("domain relations: {m}")),
            Evidence::Assumed(m) => Evidence::Assumed(format!("domain relations: {m}")),
        };
        PrimeIdeal {
            ideal: ambient.relations().clone(),
            ambient: ambient.clone(),
            evidence,
        }
    }

    /// Maximal ideal of a rational point lying on the variety.
    pub fn from_rational_point(
        ambient: &AffineDomain,
        point: &[BigRational],
    ) -> Result<Self, CasError> {
        let vars = ambient.vars();
        if point.len() != vars.len() {
            return Err(CasError::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                vars.len(),
                point.len()
            )));
        }
        for g in ambient.relations().gens() {
            let v = g.evaluate(point)?;
            if !v.eq(&BigRational::from_integer(0.into())) {
                return Err(CasError::NotProper);
            }
        }
        let gens: Vec<QPoly> = (0..vars.len())
            .map(|i| {
                let xi = QPoly::var(Rationals, vars.clone(), MonomialOrder::GrevLex, i);
                let c = QPoly::constant(Rationals, vars.clone(), MonomialOrder::GrevLex, point[i].clone());
                &xi - &c
            })
            .collect();
        PrimeIdeal::new(
            ambient.clone(),
            Ideal::new(vars.clone(), gens),
            Evidence::Proven("maximal ideal of a rational point".into()),
        )
    }

    pub fn ambient(&self) -> &AffineDomain {
        &self.ambient
    }

    /// Full preimage ideal in the ambient polynomial ring.
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn evidence(&self) -> &Evidence {
        &self.evidence
    }

    pub fn contains(&self, f: &QPoly) -> bool {
        self.ideal.contains(f)
    }

    pub fn equals(&self, other: &PrimeIdeal) -> bool {
        self.ideal.equals(&other.ideal)
    }

    /// True when this is the zero prime of its domain.
    pub fn is_zero_prime(&self) -> bool {
        self.ideal.equals(self.ambient.relations())
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ideal)
    }
}

/// Whether a decomposition was established exactly or supplied by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Verified,
    UserSupplied,
}

/// The minimal primes over an ideal.
#[derive(Clone, Debug)]
pub struct PrimeDecomposition {
    pub primes: Vec<PrimeIdeal>,
    pub completeness: Completeness,
}

/// Attempts an exact primality proof for a full preimage ideal in Q[vars].
/// Returns the method name on success.
pub(crate) fn try_prove_prime(vars: &Arc<VarSet>, ideal: &Ideal) -> Option<String> {
    if ideal.is_unit() {
        return None;
    }
    let mut gens: Vec<QPoly> = ideal.default_gb().iter().cloned().collect();
    let mut substitutions = 0u32;
    loop {
        gens.retain(|g| !g.is_zero());
        if gens.is_empty() {
            return Some(if substitutions == 0 {
                "zero ideal".into()
            } else {
                "linear substitution to a coordinate subring".into()
            });
        }
        if gens.len() == 1 {
            let g = &gens[0];
            if g.total_degree() == 0 {
                return None;
            }
            if g.total_degree() == 1 {
                return Some("linear".into());
            }
            if hypersurface_irreducible(g) {
                return Some("irreducible hypersurface after substitution".into());
            }
            return None;
        }
        // replace a variable that occurs linearly with constant coefficient
        let mut applied = false;
        'scan: for (gi, g) in gens.iter().enumerate() {
            for &v in &g.support_vars() {
                let coeffs = g.coeffs_in_var(v);
                if coeffs.len() == 2 && coeffs[1].total_degree() == 0 {
                    let c = coeffs[1].constant_value().unwrap();
                    let sol = coeffs[0].scale(&(-c.recip()));
                    if sol.support_vars().contains(&v) {
                        continue;
                    }
                    let mut images: Vec<QPoly> = (0..vars.len())
                        .map(|i| QPoly::var(Rationals, vars.clone(), MonomialOrder::GrevLex, i))
                        .collect();
                    images[v] = sol;
                    let gi_copy = gi;
                    gens = gens
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != gi_copy)
                        .map(|(_, h)| h.substitute(&images).unwrap())
                        .collect();
                    substitutions += 1;
                    applied = true;
                    break 'scan;
                }
            }
        }
        if !applied {
            return None;
        }
    }
}

/// Minimal primes over `extra` + the domain relations, by factor splitting.
/// Hints are verified and used when the ideal is outside the supported class.
pub fn minimal_primes(
    ambient: &AffineDomain,
    extra: &Ideal,
    hints: Option<&[PrimeIdeal]>,
) -> Result<PrimeDecomposition, CasError> {
    let total = extra.sum(ambient.relations());
    if total.is_unit() {
        return Ok(PrimeDecomposition {
            primes: Vec::new(),
            completeness: Completeness::Verified,
        });
    }
    if ambient.relations().contains_ideal(&total) {
        return Ok(PrimeDecomposition {
            primes: vec![PrimeIdeal::zero(ambient)],
            completeness: Completeness::Verified,
        });
    }
    match split_into_primes(ambient.vars(), &total) {
        Ok(found) => {
            let primes = minimalize(found, ambient);
            Ok(PrimeDecomposition {
                primes,
                completeness: Completeness::Verified,
            })
        }
        Err(err) => match hints {
            Some(hs) => verify_hinted_decomposition(ambient, &total, hs),
            None => Err(err),
        },
    }
}

fn minimalize(found: Vec<(Ideal, String)>, ambient: &AffineDomain) -> Vec<PrimeIdeal> {
    let mut kept: Vec<(Ideal, String)> = Vec::new();
    for (p, method) in found {
        if kept.iter().any(|(q, _)| p.contains_ideal(q)) {
            continue;
        }
        kept.retain(|(q, _)| !q.contains_ideal(&p));
        if !kept.iter().any(|(q, _)| q.equals(&p)) {
            kept.push((p, method));
        }
    }
    kept.into_iter()
        .map(|(ideal, method)| PrimeIdeal {
            ambient: ambient.clone(),
            ideal,
            evidence: Evidence::Proven(method),
        })
        .collect()
}

/// Recursively splits an ideal into provably prime components.
fn split_into_primes(vars: &Arc<VarSet>, ideal: &Ideal) -> Result<Vec<(Ideal, String)>, CasError> {
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    if let Some(method) = try_prove_prime(vars, ideal) {
        return Ok(vec![(ideal.clone(), method)]);
    }
    let gens: Vec<QPoly> = ideal.default_gb().iter().cloned().collect();
    // a generator with univariate support that splits into distinct factors
    for g in &gens {
        if g.support_vars().len() == 1 && g.total_degree() > 0 {
            if let Ok((_, factors)) = factor_univariate(g) {
                if factors.len() > 1 || factors.iter().any(|(_, m)| *m > 1) {
                    let mut out = Vec::new();
                    for (f, _) in &factors {
                        let branch = ideal.sum(&Ideal::new(vars.clone(), vec![f.clone()]));
                        out.extend(split_into_primes(vars, &branch)?);
                    }
                    return Ok(out);
                }
            }
        }
    }
    // a generator with monomial content splits off coordinate hyperplanes
    for g in &gens {
        if g.total_degree() == 0 {
            continue;
        }
        let content = monomial_content(g);
        if content.total_degree() > 0 {
            let mut out = Vec::new();
            for &v in &content.support() {
                let xv = QPoly::var(Rationals, vars.clone(), MonomialOrder::GrevLex, v);
                let branch = ideal.sum(&Ideal::new(vars.clone(), vec![xv]));
                out.extend(split_into_primes(vars, &branch)?);
            }
            let primitive = strip_monomial_content(g, &content);
            if primitive.total_degree() > 0 {
                let branch = ideal.sum(&Ideal::new(vars.clone(), vec![primitive]));
                out.extend(split_into_primes(vars, &branch)?);
            }
            return Ok(out);
        }
    }
    Err(CasError::DecompositionUnsupported(format!(
        "no factorable generator in {ideal}"
    )))
}

/// Greatest monomial dividing every term.
fn monomial_content(g: &QPoly) -> Monomial {
    let mut it = g.terms().iter();
    let mut acc = it.next().map(|(m, _)| m.clone()).unwrap();
    for (m, _) in it {
        acc = acc.gcd(m);
    }
    acc
}

fn strip_monomial_content(g: &QPoly, content: &Monomial) -> QPoly {
    let terms = g
        .terms()
        .iter()
        .map(|(m, c)| (content.div_into(m), c.clone()))
        .collect();
    QPoly::from_terms(Rationals, g.vars().clone(), g.order().clone(), terms)
}

fn verify_hinted_decomposition(
    ambient: &AffineDomain,
    total: &Ideal,
    hints: &[PrimeIdeal],
) -> Result<PrimeDecomposition, CasError> {
    if hints.is_empty() {
        return Err(CasError::DecompositionUnsupported(
            "empty hint list for an ideal outside the supported class".into(),
        ));
    }
    for h in hints {
        if !h.ideal().contains_ideal(total) {
            return Err(CasError::MalformedCertificate(format!(
                "hinted prime {} does not contain the ideal",
                h.ideal()
            )));
        }
    }
    for (i, a) in hints.iter().enumerate() {
        for b in hints.iter().skip(i + 1) {
            if a.ideal().contains_ideal(b.ideal()) || b.ideal().contains_ideal(a.ideal()) {
                return Err(CasError::MalformedCertificate(
                    "hinted primes are comparable".into(),
                ));
            }
        }
    }
    // radical equality: the intersection of the hints and the ideal have the same radical
    let mut inter = hints[0].ideal().clone();
    for h in &hints[1..] {
        inter = inter.intersect(h.ideal())?;
    }
    for g in inter.gens() {
        if !total.radical_contains(g) {
            return Err(CasError::MalformedCertificate(format!(
                "hinted intersection has {g} outside the radical"
            )));
        }
    }
    let primes = hints
        .iter()
        .map(|h| {
            let evidence = match try_prove_prime(ambient.vars(), h.ideal()) {
                Some(m) => Evidence::Proven(m),
                None => match h.evidence() {
                    Evidence::Proven(m) => Evidence::Proven(m.clone()),
                    Evidence::Assumed(m) => Evidence::Assumed(m.clone()),
                },
            };
            PrimeIdeal {
                ambient: ambient.clone(),
                ideal: h.ideal().clone(),
                evidence,
            }
        })
        .collect();
    Ok(PrimeDecomposition {
        primes,
        completeness: Completeness::UserSupplied,
    })
}

/// Contraction of a prime of the target along a morphism.
pub fn contract_prime(q: &PrimeIdeal, phi: &AlgebraMorphism) -> Result<PrimeIdeal, CasError> {
    let graph = GraphRing::new(phi);
    let embedded: Vec<QPoly> = q
        .ideal()
        .gens()
        .iter()
        .map(|g| graph.embed_target(g))
        .collect();
    let combined = graph.ideal().sum(&Ideal::new(graph.vars().clone(), embedded));
    let keep: Vec<usize> = (graph.target_block()..graph.vars().len()).collect();
    let contracted = combined.eliminate(&keep).remap(
        phi.source().vars(),
        &(0..graph.vars().len())
            .map(|i| i.saturating_sub(graph.target_block()))
            .collect::<Vec<_>>(),
    );
    let evidence = match q.evidence() {
        Evidence::Proven(_) => Evidence::Proven("contraction of a prime".into()),
        Evidence::Assumed(m) => Evidence::Assumed(format!("contraction of an assumed prime: {m}")),
    };
    PrimeIdeal::new(phi.source().clone(), contracted, evidence)
}

/// Primes of the target lying over p: minimal primes of the extension ideal,
/// filtered to those contracting exactly to p.
pub fn lying_over_primes(
    ext: &FiniteExtension,
    p: &PrimeIdeal,
    hints: Option<&[PrimeIdeal]>,
) -> Result<Vec<PrimeIdeal>, CasError> {
    let target = ext.target();
    let pushed: Vec<QPoly> = p
        .ideal()
        .gens()
        .iter()
        .map(|g| ext.morphism().apply(g))
        .collect();
    let extension_ideal = Ideal::new(target.vars().clone(), pushed);
    let dec = minimal_primes(target, &extension_ideal, hints)?;
    let mut out = Vec::new();
    for q in dec.primes {
        let back = contract_prime(&q, ext.morphism())?;
        if back.ideal().equals(p.ideal()) {
            out.push(q);
        }
    }
    Ok(out)
}

/// Residue field of a prime, presented as a finite extension of a rational-function field.
#[derive(Clone, Debug)]
pub struct ResidueFieldPresentation {
    /// Names of the transcendence-base variables.
    pub base_params: Vec<String>,
    /// Names of the remaining variables presenting the finite part.
    pub extension_vars: Vec<String>,
    /// Defining relations over the rational-function field in the base.
    pub extension: Vec<Polynomial<RatFnField>>,
    /// Vector-space dimension over the rational-function field.
    pub degree: u64,
}

impl fmt::Display for ResidueFieldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base_params.is_empty() {
            write!(f, "Q")?;
        } else {
            write!(f, "Q({})", self.base_params.join(", "))?;
        }
        if self.degree > 1 {
            let rels: Vec<String> = self.extension.iter().map(|p| p.to_string()).collect();
            write!(f, "[{}]/({})", self.extension_vars.join(", "), rels.join(", "))?;
        }
        Ok(())
    }
}

/// Greedy transcendence base: variables in declaration order whose span avoids
/// every leading-term support of the ideal.
fn transcendence_base(vars: &Arc<VarSet>, ideal: &Ideal) -> Vec<usize> {
    let leads = ideal.leading_monomials();
    let supports: Vec<Vec<usize>> = leads.iter().map(|m| m.support()).collect();
    let mut base: Vec<usize> = Vec::new();
    for v in 0..vars.len() {
        let mut cand = base.clone();
        cand.push(v);
        let independent = supports
            .iter()
            .all(|s| !s.iter().all(|i| cand.contains(i)));
        if independent {
            base.push(v);
        }
    }
    base
}

/// Transcendence degree of the domain's fraction field over Q.
pub fn transcendence_dimension(domain: &AffineDomain) -> usize {
    transcendence_base(domain.vars(), domain.relations()).len()
}

/// Presents k(p) over the rational-function field in a greedy transcendence base.
pub fn residue_field(p: &PrimeIdeal) -> Result<ResidueFieldPresentation, CasError> {
    let vars = p.ambient().vars();
    let base = transcendence_base(vars, p.ideal());
    let rest: Vec<usize> = (0..vars.len()).filter(|i| !base.contains(i)).collect();
    let base_names: Vec<String> = base.iter().map(|&i| vars.name(i).to_string()).collect();
    let ext_names: Vec<String> = rest.iter().map(|&i| vars.name(i).to_string()).collect();
    if rest.is_empty() {
        return Ok(ResidueFieldPresentation {
            base_params: base_names,
            extension_vars: ext_names,
            extension: Vec::new(),
            degree: 1,
        });
    }
    let converted: Vec<Polynomial<RatFnField>> = p
        .ideal()
        .gens()
        .iter()
        .map(|g| to_rational_coefficients(g, &base, &rest))
        .collect();
    let vectors: Vec<ModVec<RatFnField>> = converted
        .into_iter()
        .filter(|g| !g.is_zero())
        .map(|g| ModVec::from_poly(g, 1, 0))
        .collect();
    let basis = module_basis(&vectors, &ModOrder::Top(MonomialOrder::GrevLex));
    let gb: Vec<Polynomial<RatFnField>> = basis
        .into_iter()
        .map(|v| v.into_comps().into_iter().next().unwrap())
        .collect();
    let leads: Vec<Monomial> = gb
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.leading_monomial().unwrap().clone())
        .collect();
    let degree = staircase_count(&leads, rest.len()).ok_or_else(|| {
        CasError::Unsupported(format!(
            "residue field of {} is not finite over the chosen base",
            p.ideal()
        ))
    })?;
    Ok(ResidueFieldPresentation {
        base_params: base_names,
        extension_vars: ext_names,
        extension: gb,
        degree,
    })
}

/// Rewrites a polynomial with the base variables moved into rational-function coefficients.
fn to_rational_coefficients(
    g: &QPoly,
    base: &[usize],
    rest: &[usize],
) -> Polynomial<RatFnField> {
    let vars = g.vars();
    let base_names: Vec<String> = base.iter().map(|&i| vars.name(i).to_string()).collect();
    let ext_names: Vec<String> = rest.iter().map(|&i| vars.name(i).to_string()).collect();
    let params = VarSet::new(base_names);
    let evars = VarSet::new(ext_names);
    let field = RatFnField::new(params.clone());
    let mut terms: Vec<(Monomial, RatFn)> = Vec::new();
    for (m, c) in g.terms() {
        let mut base_exps = vec![0u32; base.len()];
        for (slot, &v) in base.iter().enumerate() {
            base_exps[slot] = m.exp(v);
        }
        let mut ext_exps = vec![0u32; rest.len()];
        for (slot, &v) in rest.iter().enumerate() {
            ext_exps[slot] = m.exp(v);
        }
        let coeff_poly = QPoly::from_terms(
            Rationals,
            params.clone(),
            MonomialOrder::GrevLex,
            vec![(Monomial::new(base_exps), c.clone())],
        );
        terms.push((Monomial::new(ext_exps), RatFn::from_poly(coeff_poly)));
    }
    Polynomial::from_terms(field, evars, MonomialOrder::GrevLex, terms)
}

/// Number of monomials outside the staircase of the given leading monomials,
/// or None when the count is infinite.
fn staircase_count(leads: &[Monomial], nvars: usize) -> Option<u64> {
    if leads.iter().any(|m| m.support().is_empty()) {
        return Some(0);
    }
    let mut bounds = vec![0u32; nvars];
    for v in 0..nvars {
        let pure = leads
            .iter()
            .filter(|m| m.support() == [v])
            .map(|m| m.exp(v))
            .min();
        match pure {
            Some(e) => bounds[v] = e,
            None => return None,
        }
    }
    let mut count = 0u64;
    let mut exps = vec![0u32; nvars];
    loop {
        let m = Monomial::new(exps.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == nvars {
                return Some(count);
            }
            exps[i] += 1;
            if exps[i] < bounds[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Degree of k(q) over the image of k(p): the generic rank of B/q as an
/// (A/p)-module on the extension's module generators.
pub fn residue_extension_degree(
    p: &PrimeIdeal,
    q: &PrimeIdeal,
    ext: &FiniteExtension,
) -> Result<u64, CasError> {
    let back = contract_prime(q, ext.morphism())?;
    if !back.ideal().equals(p.ideal()) {
        return Err(CasError::ContractionMismatch(format!(
            "{} contracts to {}, not {}",
            q.ideal(),
            back.ideal(),
            p.ideal()
        )));
    }
    let r = ext.module_gens().len();
    let rows = fiber_relation_rows(ext, q)?;
    let rank = rank_modulo_prime(&rows, p, r);
    Ok((r as u64) - (rank as u64))
}

/// Generators of the relation module of the module generators inside B/q,
/// as coefficient rows over the source ring.
fn fiber_relation_rows(ext: &FiniteExtension, q: &PrimeIdeal) -> Result<Vec<Vec<QPoly>>, CasError> {
    // graph of A -> B/q: target relations enlarged to the prime
    let quotient_target = AffineDomain::new(
        q.ideal().clone(),
        Evidence::Proven("prime quotient".into()),
    )?;
    let m = AlgebraMorphism::new(
        ext.source().clone(),
        quotient_target,
        ext.morphism().images().to_vec(),
    )?;
    let graph = GraphRing::new(&m);
    let embedded: Vec<QPoly> = ext
        .module_gens()
        .iter()
        .map(|b| graph.embed_target(b))
        .collect();
    Ok(crate::algebra::base_linear_relations(&graph, &embedded))
}

/// Rank over Frac(A/p) of the matrix of rows, using exact elimination with
/// zero tests modulo the prime.
fn rank_modulo_prime(rows: &[Vec<QPoly>], p: &PrimeIdeal, ncols: usize) -> usize {
    let reduce = |f: &QPoly| p.ideal().normal_form(f);
    let mut mat: Vec<Vec<QPoly>> = rows
        .iter()
        .map(|r| r.iter().map(&reduce).collect())
        .filter(|r: &Vec<QPoly>| r.iter().any(|c| !c.is_zero()))
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..mat.len()).find(|&i| !mat[i][col].is_zero());
        let Some(pivot) = pivot else { continue };
        mat.swap(rank, pivot);
        let (head, tail) = mat.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail {
            if row[col].is_zero() {
                continue;
            }
            // cross-multiplication elimination keeps entries polynomial
            let a = row[col].clone();
            let b = prow[col].clone();
            for j in 0..ncols {
                let v = &(&row[j] * &b) - &(&prow[j] * &a);
                row[j] = reduce(&v);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AffineDomain;
    use crate::polycore::parse::parse;
    use crate::polycore::qi;

    fn q(vars: &Arc<VarSet>, t: &str) -> QPoly {
        parse(t, vars, &MonomialOrder::GrevLex).unwrap()
    }

    fn pid(dom: &AffineDomain, gens: &[&str]) -> PrimeIdeal {
        let vars = dom.vars().clone();
        let gens = gens.iter().map(|s| q(&vars, s)).collect();
        PrimeIdeal::new(
            dom.clone(),
            Ideal::new(vars, gens),
            Evidence::Assumed("test input".into()),
        )
        .unwrap()
    }

    /// A = Q[x,y,z]/(y^2 - z x^2) -> B = Q[x,Y,z]/(Y^2 - z), x -> x, y -> Yx, z -> z.
    fn umbrella_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y", "z"]);
        let bv = VarSet::new(vec!["x", "Y", "z"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - z x^2")).unwrap();
        let b = AffineDomain::hypersurface(q(&bv, "Y^2 - z")).unwrap();
        let m = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x"), q(&bv, "Y x"), q(&bv, "z")])
            .unwrap();
        FiniteExtension::new_proven(m, vec![q(&bv, "1"), q(&bv, "Y")]).unwrap()
    }

    /// A = Q[x,y]/(y^2 - x^3) -> B = Q[t], x -> t^2, y -> t^3.
    fn cusp_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x", "y"]);
        let tv = VarSet::new(vec!["t"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let b = AffineDomain::polynomial_ring(tv.clone());
        let m = AlgebraMorphism::new(a, b, vec![q(&tv, "t^2"), q(&tv, "t^3")]).unwrap();
        FiniteExtension::new_proven(m, vec![q(&tv, "1"), q(&tv, "t")]).unwrap()
    }

    /// A = Q[x] -> B = Q[x,y]/(y^2 - x), generators {1, y}.
    fn square_root_extension() -> FiniteExtension {
        let av = VarSet::new(vec!["x"]);
        let bv = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::polynomial_ring(av);
        let b = AffineDomain::hypersurface(q(&bv, "y^2 - x")).unwrap();
        let m = AlgebraMorphism::new(a, b.clone(), vec![q(&bv, "x")]).unwrap();
        FiniteExtension::new_proven(m, vec![q(&bv, "1"), q(&bv, "y")]).unwrap()
    }

    #[test]
    fn rational_points_and_improper_ideals() {
        let av = VarSet::new(vec!["x", "y"]);
        let a = AffineDomain::hypersurface(q(&av, "y^2 - x^3")).unwrap();
        let p = PrimeIdeal::from_rational_point(&a, &[qi(1), qi(1)]).unwrap();
        assert!(p.contains(&q(&av, "x - 1")));
        assert!(p.contains(&q(&av, "y - 1")));
        assert!(p.evidence().is_proven());
        // a point off the curve is rejected
        assert!(matches!(
            PrimeIdeal::from_rational_point(&a, &[qi(1), qi(2)]),
            Err(CasError::NotProper)
        ));
        // generators summing to the unit ideal are rejected
        assert!(matches!(
            PrimeIdeal::new(
                a.clone(),
                Ideal::new(av.clone(), vec![q(&av, "y^2 - x^3 - 1")]),
                Evidence::Assumed("bad".into()),
            ),
            Err(CasError::NotProper)
        ));
        assert!(PrimeIdeal::zero(&a).is_zero_prime());
        assert!(!p.is_zero_prime());
    }

    #[test]
    fn contraction_of_target_primes() {
        let ext = umbrella_extension();
        let a = ext.source();
        let b = ext.target();
        let back = contract_prime(&pid(b, &["x"]), ext.morphism()).unwrap();
        assert!(back.equals(&pid(a, &["x", "y"])));

        let cusp = cusp_extension();
        let back = contract_prime(&pid(cusp.target(), &["t"]), cusp.morphism()).unwrap();
        assert!(back.equals(&pid(cusp.source(), &["x", "y"])));

        // the zero prime contracts to the zero prime of an injective map
        let back = contract_prime(&PrimeIdeal::zero(cusp.target()), cusp.morphism()).unwrap();
        assert!(back.is_zero_prime());
    }

    #[test]
    fn minimal_primes_split_univariate_factors() {
        let vars = VarSet::new(vec!["x", "y"]);
        let ring = AffineDomain::polynomial_ring(vars.clone());
        let dec = minimal_primes(
            &ring,
            &Ideal::new(vars.clone(), vec![q(&vars, "x^2 - x"), q(&vars, "y")]),
            None,
        )
        .unwrap();
        assert_eq!(dec.completeness, Completeness::Verified);
        assert_eq!(dec.primes.len(), 2);
        assert!(dec.primes.iter().any(|p| p.equals(&pid(&ring, &["x", "y"]))));
        assert!(dec
            .primes
            .iter()
            .any(|p| p.equals(&pid(&ring, &["x - 1", "y"]))));
        assert!(dec.primes.iter().all(|p| p.evidence().is_proven()));

        let cubic = q(&vars, "(x - 1)(x - 2)(x - 3)");
        let dec = minimal_primes(
            &ring,
            &Ideal::new(vars.clone(), vec![cubic, q(&vars, "y")]),
            None,
        )
        .unwrap();
        assert_eq!(dec.primes.len(), 3);

        // an ideal that is already prime comes back unchanged
        let dec = minimal_primes(
            &ring,
            &Ideal::new(vars.clone(), vec![q(&vars, "x"), q(&vars, "y")]),
            None,
        )
        .unwrap();
        assert_eq!(dec.primes.len(), 1);
        assert!(dec.primes[0].equals(&pid(&ring, &["x", "y"])));

        // no extra generators: the zero prime of the domain
        let dec = minimal_primes(&ring, &Ideal::new(vars.clone(), Vec::new()), None).unwrap();
        assert_eq!(dec.primes.len(), 1);
        assert!(dec.primes[0].is_zero_prime());
    }

    #[test]
    fn minimal_primes_strip_monomial_content() {
        let vars = VarSet::new(vec!["x", "y"]);
        let ring = AffineDomain::polynomial_ring(vars.clone());
        let dec = minimal_primes(
            &ring,
            &Ideal::new(vars.clone(), vec![q(&vars, "x^2 y")]),
            None,
        )
        .unwrap();
        assert_eq!(dec.primes.len(), 2);
        assert!(dec.primes.iter().any(|p| p.equals(&pid(&ring, &["x"]))));
        assert!(dec.primes.iter().any(|p| p.equals(&pid(&ring, &["y"]))));

        let dec = minimal_primes(
            &ring,
            &Ideal::new(vars.clone(), vec![q(&vars, "x y - x")]),
            None,
        )
        .unwrap();
        assert_eq!(dec.primes.len(), 2);
        assert!(dec.primes.iter().any(|p| p.equals(&pid(&ring, &["x"]))));
        assert!(dec.primes.iter().any(|p| p.equals(&pid(&ring, &["y - 1"]))));
    }

    #[test]
    fn minimal_primes_verify_hints_outside_the_supported_class() {
        let vars = VarSet::new(vec!["x", "y"]);
        let ring = AffineDomain::polynomial_ring(vars.clone());
        let extra = Ideal::new(vars.clone(), vec![q(&vars, "x^2 - y^2")]);
        assert!(matches!(
            minimal_primes(&ring, &extra, None),
            Err(CasError::DecompositionUnsupported(_))
        ));

        let hints = vec![pid(&ring, &["x - y"]), pid(&ring, &["x + y"])];
        let dec = minimal_primes(&ring, &extra, Some(&hints)).unwrap();
        assert_eq!(dec.completeness, Completeness::UserSupplied);
        assert_eq!(dec.primes.len(), 2);
        // linear hints are re-proven on the way in
        assert!(dec.primes.iter().all(|p| p.evidence().is_proven()));

        // a hint list that misses a component fails the radical check
        let partial = vec![pid(&ring, &["x - y"])];
        assert!(matches!(
            minimal_primes(&ring, &extra, Some(&partial)),
            Err(CasError::MalformedCertificate(_))
        ));

        // a hint that does not contain the ideal is rejected
        let wrong = vec![pid(&ring, &["x - y"]), pid(&ring, &["x - 1"])];
        assert!(matches!(
            minimal_primes(&ring, &extra, Some(&wrong)),
            Err(CasError::MalformedCertificate(_))
        ));
    }

    #[test]
    fn lying_over_the_umbrella_and_cusp_origins() {
        let ext = umbrella_extension();
        let p = pid(ext.source(), &["x", "y"]);
        let fiber = lying_over_primes(&ext, &p, None).unwrap();
        assert_eq!(fiber.len(), 1);
        assert!(fiber[0].equals(&pid(ext.target(), &["x"])));

        let cusp = cusp_extension();
        let p = pid(cusp.source(), &["x", "y"]);
        let fiber = lying_over_primes(&cusp, &p, None).unwrap();
        assert_eq!(fiber.len(), 1);
        assert!(fiber[0].equals(&pid(cusp.target(), &["t"])));
    }

    #[test]
    fn lying_over_split_inert_and_ramified_fibers() {
        let ext = square_root_extension();
        let a = ext.source();
        let b = ext.target();

        // x - 1 splits: two points with residue degree 1
        let fiber = lying_over_primes(&ext, &pid(a, &["x - 1"]), None).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.iter().any(|p| p.equals(&pid(b, &["x - 1", "y - 1"]))));
        assert!(fiber.iter().any(|p| p.equals(&pid(b, &["x - 1", "y + 1"]))));

        // x - 2 is inert: one point with residue degree 2
        let fiber = lying_over_primes(&ext, &pid(a, &["x - 2"]), None).unwrap();
        assert_eq!(fiber.len(), 1);
        assert!(fiber[0].equals(&pid(b, &["x - 2", "y^2 - 2"])));

        // x ramifies: one point, reduced fiber is a single rational point
        let fiber = lying_over_primes(&ext, &pid(a, &["x"]), None).unwrap();
        assert_eq!(fiber.len(), 1);
        assert!(fiber[0].equals(&pid(b, &["x", "y"])));
    }

    #[test]
    fn residue_fields_over_greedy_transcendence_bases() {
        let ext = umbrella_extension();
        let rf = residue_field(&pid(ext.source(), &["x", "y"])).unwrap();
        assert_eq!(rf.base_params, vec!["z".to_string()]);
        assert_eq!(rf.degree, 1);
        assert_eq!(rf.to_string(), "Q(z)");

        let rf = residue_field(&pid(ext.target(), &["x"])).unwrap();
        assert_eq!(rf.base_params, vec!["z".to_string()]);
        assert_eq!(rf.degree, 2);

        // the zero prime of the cusp: the fraction field has degree 3 over Q(y)
        let cusp = cusp_extension();
        let rf = residue_field(&PrimeIdeal::zero(cusp.source())).unwrap();
        assert_eq!(rf.base_params, vec!["y".to_string()]);
        assert_eq!(rf.degree, 3);

        // a rational point has residue field Q
        let at_point =
            PrimeIdeal::from_rational_point(cusp.source(), &[qi(1), qi(1)]).unwrap();
        let rf = residue_field(&at_point).unwrap();
        assert!(rf.base_params.is_empty());
        assert_eq!(rf.degree, 1);
        assert_eq!(rf.to_string(), "Q");
    }

    #[test]
    fn residue_degrees_along_finite_extensions() {
        let ext = umbrella_extension();
        let p = pid(ext.source(), &["x", "y"]);
        let sing = pid(ext.target(), &["x"]);
        assert_eq!(residue_extension_degree(&p, &sing, &ext).unwrap(), 2);

        let sq = square_root_extension();
        let a = sq.source();
        let b = sq.target();
        let split = residue_extension_degree(
            &pid(a, &["x - 1"]),
            &pid(b, &["x - 1", "y - 1"]),
            &sq,
        )
        .unwrap();
        assert_eq!(split, 1);
        let inert = residue_extension_degree(
            &pid(a, &["x - 2"]),
            &pid(b, &["x - 2", "y^2 - 2"]),
            &sq,
        )
        .unwrap();
        assert_eq!(inert, 2);
        let ramified =
            residue_extension_degree(&pid(a, &["x"]), &pid(b, &["x", "y"]), &sq).unwrap();
        assert_eq!(ramified, 1);

        // a prime that does not lie over p is rejected
        assert!(matches!(
            residue_extension_degree(&pid(a, &["x - 2"]), &pid(b, &["x - 1", "y - 1"]), &sq),
            Err(CasError::ContractionMismatch(_))
        ));
    }

    #[test]
    fn transcendence_dimensions_of_presented_domains() {
        let ext = umbrella_extension();
        assert_eq!(transcendence_dimension(ext.source()), 2);
        assert_eq!(transcendence_dimension(ext.target()), 2);
        let cusp = cusp_extension();
        assert_eq!(transcendence_dimension(cusp.source()), 1);
        assert_eq!(transcendence_dimension(cusp.target()), 1);
    }
}

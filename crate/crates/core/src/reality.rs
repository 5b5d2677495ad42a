//! Reality and centrality oracles: exact certificates backed by rational
//! smooth points and fraction-field identities, with seeded numeric sampling
//! as a quarantined fallback. Floating point never leaves this module;
//! downstream code consumes verdicts and certificates only.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AffineDomain, FractionElement};
use crate::error::CasError;
use crate::groebner::Ideal;
use crate::polycore::{jacobian, qi, Monomial, MonomialOrder, QPoly, Rationals};
use crate::spectrum::{minimal_primes, transcendence_dimension, Completeness, PrimeIdeal};

/// Budget and seeds for the numeric sampling fallback.
#[derive(Clone, Debug)]
pub struct SamplingConfig {
    pub seed: u64,
    pub attempts: usize,
    pub ball_radius: BigRational,
    pub newton_tolerance: BigRational,
    pub max_newton_steps: usize,
}

impl SamplingConfig {
    pub fn new(
        seed: u64,
        attempts: usize,
        ball_radius: BigRational,
        newton_tolerance: BigRational,
        max_newton_steps: usize,
    ) -> Result<Self, CasError> {
        if newton_tolerance <= BigRational::zero() || ball_radius <= BigRational::zero() {
            return Err(CasError::Unsupported(
                "sampling radius and tolerance must be positive".into(),
            ));
        }
        Ok(SamplingConfig {
            seed,
            attempts,
            ball_radius,
            newton_tolerance,
            max_newton_steps,
        })
    }

    /// Same configuration with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut cfg = self.clone();
        cfg.seed = seed;
        cfg
    }
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            seed: 0,
            attempts: 24,
            ball_radius: qi(2),
            newton_tolerance: BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000i64)),
            max_newton_steps: 40,
        }
    }
}

/// How much the oracle may lean on numeric sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Only exact certificates; sampling paths report Unknown.
    ExactOnly,
    /// Sampling allowed; heuristic verdicts are marked as such.
    Sampling,
    /// Like Sampling, and undecided primes are kept with a loud flag.
    Permissive,
}

/// Exact witness that a prime is not central: an element a outside p whose
/// square plus a sum of squares of fractions equals an element of p in the
/// fraction field. Checked as N in D*p + relations for the cross-multiplied
/// numerator N and common denominator D.
#[derive(Clone, Debug)]
pub struct NonCentralityCertificate {
    pub a: QPoly,
    pub s: QPoly,
    pub squares: Vec<FractionElement>,
    pub target: PrimeIdeal,
}

impl NonCentralityCertificate {
    pub fn verify(&self) -> Result<(), CasError> {
        let ambient = self.target.ambient();
        let vars = ambient.vars();
        if self.a.vars() != vars || self.s.vars() != vars {
            return Err(CasError::MalformedCertificate(
                "witness elements live in a different ring".into(),
            ));
        }
        if self.target.contains(&self.s) {
            return Err(CasError::MalformedCertificate(
                "the multiplier s lies in the target prime".into(),
            ));
        }
        if self.target.contains(&self.a) {
            return Err(CasError::MalformedCertificate(
                "the witness a lies in the target prime".into(),
            ));
        }
        let (num, den) = fraction_sum_of_squares(&self.a, ambient, &self.squares)?;
        let mut gens: Vec<QPoly> = ambient.relations().gens().to_vec();
        for g in self.target.ideal().gens() {
            gens.push(&den * g);
        }
        let shifted = Ideal::new(vars.clone(), gens);
        if !shifted.contains(&num) {
            return Err(CasError::MalformedCertificate(
                "the cleared identity does not land in the prime".into(),
            ));
        }
        Ok(())
    }
}

/// Exact re-check of a non-centrality witness.
pub fn verify_noncentrality_certificate(cert: &NonCentralityCertificate) -> bool {
    cert.verify().is_ok()
}

/// A rational point where all relations vanish and the Jacobian has full
/// expected rank, witnessing a smooth real point.
#[derive(Clone, Debug)]
pub struct SmoothRationalPointCertificate {
    pub point: Vec<BigRational>,
    pub variety: AffineDomain,
}

impl SmoothRationalPointCertificate {
    pub fn verify(&self) -> Result<(), CasError> {
        for g in self.variety.relations().gens() {
            if !g.evaluate(&self.point)?.is_zero() {
                return Err(CasError::MalformedCertificate(format!(
                    "relation {g} does not vanish at the point"
                )));
            }
        }
        let codim = self.variety.vars().len() - transcendence_dimension(&self.variety);
        let jac = jacobian(self.variety.relations().gens(), &self.point)?;
        if exact_rank(jac) != codim {
            return Err(CasError::MalformedCertificate(
                "the Jacobian does not have full rank at the point".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SmoothRationalPointCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.point.iter().map(|c| c.to_string()).collect();
        write!(f, "smooth rational point ({})", coords.join(", "))
    }
}

/// Squares of fractions summing to -1 in the fraction field, witnessing that
/// the domain is not real.
#[derive(Clone, Debug)]
pub struct NotRealCertificate {
    pub squares: Vec<FractionElement>,
}

impl NotRealCertificate {
    pub fn verify(&self, domain: &AffineDomain) -> Result<(), CasError> {
        if self.squares.is_empty() {
            return Err(CasError::MalformedCertificate(
                "no squares were supplied".into(),
            ));
        }
        let one = QPoly::constant(
            Rationals,
            domain.vars().clone(),
            MonomialOrder::GrevLex,
            BigRational::one(),
        );
        let (num, _) = fraction_sum_of_squares(&one, domain, &self.squares)?;
        if !domain.relations().contains(&num) {
            return Err(CasError::MalformedCertificate(
                "the squares do not sum to -1 in the fraction field".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for NotRealCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.squares.iter().map(|c| format!("({c})^2")).collect();
        write!(f, "-1 = {}", parts.join(" + "))
    }
}

/// Counts and dispersion measurements from one sampling run.
#[derive(Clone, Debug)]
pub struct SampleSummary {
    pub attempts: usize,
    pub smooth_samples: usize,
    pub locus_samples: usize,
    pub central_hits: usize,
    pub hit_spread: f64,
    pub locus_spread: f64,
}

impl fmt::Display for SampleSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "attempts {}, smooth {}, on locus {}, central hits {}, spread {:.4}/{:.4}",
            self.attempts,
            self.smooth_samples,
            self.locus_samples,
            self.central_hits,
            self.hit_spread,
            self.locus_spread
        )
    }
}

/// Outcome of a reality test together with its evidence.
#[derive(Clone, Debug)]
pub enum RealityStatus {
    ProvenReal(SmoothRationalPointCertificate),
    ProvenNotReal(NotRealCertificate),
    HeuristicReal(SampleSummary),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct RealityVerdict {
    pub status: RealityStatus,
    pub log: Vec<String>,
}

impl RealityVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(
            self.status,
            RealityStatus::ProvenReal(_) | RealityStatus::ProvenNotReal(_)
        )
    }

    /// Some(true)/Some(false) when decided either way, None when unknown.
    pub fn decided_real(&self) -> Option<bool> {
        match self.status {
            RealityStatus::ProvenReal(_) | RealityStatus::HeuristicReal(_) => Some(true),
            RealityStatus::ProvenNotReal(_) => Some(false),
            RealityStatus::Unknown => None,
        }
    }
}

/// Outcome of a centrality test, with candidate larger central loci proposed
/// by sampling when the prime itself is not central.
#[derive(Clone, Debug)]
pub enum CentralityStatus {
    ProvenCentral(SmoothRationalPointCertificate),
    ProvenNotCentral(NonCentralityCertificate),
    HeuristicCentral(SampleSummary),
    HeuristicNotCentral(SampleSummary),
    AssumedByUser,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct CentralityVerdict {
    pub status: CentralityStatus,
    pub covers: Vec<PrimeIdeal>,
    pub log: Vec<String>,
}

impl CentralityVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(
            self.status,
            CentralityStatus::ProvenCentral(_) | CentralityStatus::ProvenNotCentral(_)
        )
    }

    pub fn is_heuristic(&self) -> bool {
        matches!(
            self.status,
            CentralityStatus::HeuristicCentral(_) | CentralityStatus::HeuristicNotCentral(_)
        )
    }

    /// Some(true)/Some(false) when decided either way, None when unknown.
    pub fn decided_central(&self) -> Option<bool> {
        match self.status {
            CentralityStatus::ProvenCentral(_)
            | CentralityStatus::HeuristicCentral(_)
            | CentralityStatus::AssumedByUser => Some(true),
            CentralityStatus::ProvenNotCentral(_) | CentralityStatus::HeuristicNotCentral(_) => {
                Some(false)
            }
            CentralityStatus::Unknown => None,
        }
    }

    fn from_status(status: CentralityStatus, log: Vec<String>) -> Self {
        CentralityVerdict {
            status,
            covers: Vec::new(),
            log,
        }
    }
}

/// Whether a computed ideal rests on proofs alone or on sampled verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Heuristic,
}

/// A central radical with its provenance.
#[derive(Clone, Debug)]
pub struct CentralRadical {
    pub ideal: Ideal,
    pub exactness: Exactness,
    pub log: Vec<String>,
}

/// Centrality and reality oracle: exact certificates first, numeric sampling
/// after, gated by the mode. User-supplied assumptions and certificates are
/// honored once they re-verify (assumptions are honored as stated).
#[derive(Clone, Debug)]
pub struct CentralOracle {
    pub mode: OracleMode,
    pub config: SamplingConfig,
    assumed_central: Vec<PrimeIdeal>,
    noncentrality_certificates: Vec<NonCentralityCertificate>,
    not_real_certificates: Vec<(AffineDomain, NotRealCertificate)>,
}

impl CentralOracle {
    pub fn new(mode: OracleMode, config: SamplingConfig) -> Self {
        CentralOracle {
            mode,
            config,
            assumed_central: Vec::new(),
            noncentrality_certificates: Vec::new(),
            not_real_certificates: Vec::new(),
        }
    }

    /// Records a user assertion that p is central.
    pub fn assume_central(&mut self, p: PrimeIdeal) {
        self.assumed_central.push(p);
    }

    pub fn supply_noncentrality(&mut self, cert: NonCentralityCertificate) {
        self.noncentrality_certificates.push(cert);
    }

    pub fn supply_not_real(&mut self, domain: AffineDomain, cert: NotRealCertificate) {
        self.not_real_certificates.push((domain, cert));
    }

    /// Decides whether the domain is real (its fraction field admits no
    /// representation of -1 as a sum of squares).
    pub fn is_real_domain(&self, domain: &AffineDomain) -> RealityVerdict {
        let mut log = Vec::new();
        for (dom, cert) in &self.not_real_certificates {
            if same_domain(dom, domain) && cert.verify(domain).is_ok() {
                log.push(format!("user certificate verified: {cert}"));
                return RealityVerdict {
                    status: RealityStatus::ProvenNotReal(cert.clone()),
                    log,
                };
            }
        }
        if let Some(cert) = scan_not_real(domain) {
            log.push(format!("relation yields {cert}"));
            return RealityVerdict {
                status: RealityStatus::ProvenNotReal(cert),
                log,
            };
        }
        if let Some(cert) = find_smooth_rational_point(domain) {
            log.push(format!("{cert} verified exactly"));
            return RealityVerdict {
                status: RealityStatus::ProvenReal(cert),
                log,
            };
        }
        if self.mode == OracleMode::ExactOnly {
            log.push("no exact certificate found; sampling disabled".into());
            return RealityVerdict {
                status: RealityStatus::Unknown,
                log,
            };
        }
        let numeric = NumericVariety::new(domain);
        let mut rng = derived_rng(self.config.seed, 0x5eed);
        let radius = big_to_f64(&self.config.ball_radius);
        let tol = big_to_f64(&self.config.newton_tolerance);
        let mut smooth = Vec::new();
        for _ in 0..self.config.attempts.max(1) {
            let start = random_point(&mut rng, numeric.nvars, radius);
            if let Some(x) = numeric.newton(&start, self.config.max_newton_steps, tol) {
                if numeric.is_smooth_at(&x) {
                    if let Some(pt) = rationalize_point(&x, 32, 1e-5) {
                        let cert = SmoothRationalPointCertificate {
                            point: pt,
                            variety: domain.clone(),
                        };
                        if cert.verify().is_ok() {
                            log.push(format!("sampled hit rationalized: {cert}"));
                            return RealityVerdict {
                                status: RealityStatus::ProvenReal(cert),
                                log,
                            };
                        }
                    }
                    smooth.push(x);
                }
            }
        }
        let summary = SampleSummary {
            attempts: self.config.attempts,
            smooth_samples: smooth.len(),
            locus_samples: 0,
            central_hits: smooth.len(),
            hit_spread: spread(&smooth),
            locus_spread: 0.0,
        };
        if smooth.is_empty() {
            log.push(format!("no smooth real points sampled ({summary})"));
            RealityVerdict {
                status: RealityStatus::Unknown,
                log,
            }
        } else {
            log.push(format!("smooth real points sampled ({summary})"));
            RealityVerdict {
                status: RealityStatus::HeuristicReal(summary),
                log,
            }
        }
    }

    /// Decides whether a prime is central, proposing larger central loci as
    /// candidate covers when it is not.
    pub fn is_central_prime(&self, p: &PrimeIdeal) -> CentralityVerdict {
        let ambient = p.ambient();
        let mut log = Vec::new();
        for cert in &self.noncentrality_certificates {
            if same_domain(cert.target.ambient(), ambient)
                && cert.target.equals(p)
                && cert.verify().is_ok()
            {
                log.push("user non-centrality certificate verified".into());
                let mut verdict = CentralityVerdict::from_status(
                    CentralityStatus::ProvenNotCentral(cert.clone()),
                    log,
                );
                if self.mode != OracleMode::ExactOnly && !self.is_maximal_shape(p) {
                    let (_, covers, notes) = self.sample_centrality(p);
                    verdict.covers = covers;
                    verdict.log.extend(notes);
                }
                return verdict;
            }
        }
        for hint in &self.assumed_central {
            if same_domain(hint.ambient(), ambient) && hint.equals(p) {
                log.push("user assumption: central".into());
                return CentralityVerdict::from_status(CentralityStatus::AssumedByUser, log);
            }
        }
        if let Some(cert) = self.proven_not_real(ambient) {
            log.push("ambient domain is not real, so no prime is central".into());
            let derived = derive_noncentrality(&cert, p);
            if derived.verify().is_ok() {
                return CentralityVerdict::from_status(
                    CentralityStatus::ProvenNotCentral(derived),
                    log,
                );
            }
        }
        if p.is_zero_prime() {
            let reality = self.is_real_domain(ambient);
            log.extend(reality.log);
            let status = match reality.status {
                RealityStatus::ProvenReal(cert) => CentralityStatus::ProvenCentral(cert),
                RealityStatus::HeuristicReal(s) => CentralityStatus::HeuristicCentral(s),
                RealityStatus::ProvenNotReal(cert) => {
                    let derived = derive_noncentrality(&cert, p);
                    match derived.verify() {
                        Ok(()) => CentralityStatus::ProvenNotCentral(derived),
                        Err(_) => CentralityStatus::Unknown,
                    }
                }
                RealityStatus::Unknown => CentralityStatus::Unknown,
            };
            return CentralityVerdict::from_status(status, log);
        }
        if let Some(point) = rational_point_of_maximal(p) {
            let cert = SmoothRationalPointCertificate {
                point: point.clone(),
                variety: ambient.clone(),
            };
            if cert.verify().is_ok() {
                log.push(format!("{cert} lies on the prime's locus"));
                return CentralityVerdict::from_status(CentralityStatus::ProvenCentral(cert), log);
            }
            if self.mode == OracleMode::ExactOnly {
                log.push("point is singular; sampling disabled".into());
                return CentralityVerdict::from_status(CentralityStatus::Unknown, log);
            }
            let (hit, summary) = self.limit_of_smooth_points(ambient, &point);
            log.push(format!("limit-of-smooth-points test: {summary}"));
            let status = if hit {
                CentralityStatus::HeuristicCentral(summary)
            } else {
                CentralityStatus::HeuristicNotCentral(summary)
            };
            return CentralityVerdict::from_status(status, log);
        }
        if self.mode == OracleMode::ExactOnly {
            log.push("no exact certificate found; sampling disabled".into());
            return CentralityVerdict::from_status(CentralityStatus::Unknown, log);
        }
        let (status, covers, notes) = self.sample_centrality(p);
        log.extend(notes);
        CentralityVerdict {
            status,
            covers,
            log,
        }
    }

    /// Smallest central ideal containing the input, by recursive ascent over
    /// the minimal primes. Exact only when every verdict is proven and the
    /// decompositions are verified.
    pub fn central_radical(
        &self,
        ambient: &AffineDomain,
        extra: &Ideal,
        hints: Option<&[PrimeIdeal]>,
    ) -> Result<CentralRadical, CasError> {
        let mut log = Vec::new();
        let mut exact = true;
        if let Some(cert) = self.proven_not_real(ambient) {
            log.push(format!(
                "domain is not real ({cert}); no central primes exist"
            ));
            return Ok(CentralRadical {
                ideal: unit_ideal(ambient),
                exactness: Exactness::Exact,
                log,
            });
        }
        let ideal = self.ascend(ambient, extra, hints, 0, &mut log, &mut exact)?;
        Ok(CentralRadical {
            ideal,
            exactness: if exact {
                Exactness::Exact
            } else {
                Exactness::Heuristic
            },
            log,
        })
    }

    fn ascend(
        &self,
        ambient: &AffineDomain,
        extra: &Ideal,
        hints: Option<&[PrimeIdeal]>,
        depth: usize,
        log: &mut Vec<String>,
        exact: &mut bool,
    ) -> Result<Ideal, CasError> {
        if depth > 4 {
            return Err(CasError::DecompositionUnsupported(
                "central ascent did not stabilize".into(),
            ));
        }
        let dec = minimal_primes(ambient, extra, if depth == 0 { hints } else { None })?;
        if dec.completeness == Completeness::UserSupplied {
            *exact = false;
            log.push("decomposition supplied by the user".into());
        }
        let mut parts: Vec<Ideal> = Vec::new();
        for p in &dec.primes {
            let verdict = self.is_central_prime(p);
            for line in &verdict.log {
                log.push(format!("{}: {line}", p.ideal()));
            }
            match verdict.status {
                CentralityStatus::ProvenCentral(_) => parts.push(p.ideal().clone()),
                CentralityStatus::HeuristicCentral(_) => {
                    *exact = false;
                    parts.push(p.ideal().clone());
                }
                CentralityStatus::AssumedByUser => {
                    *exact = false;
                    parts.push(p.ideal().clone());
                }
                CentralityStatus::ProvenNotCentral(_)
                | CentralityStatus::HeuristicNotCentral(_) => {
                    if verdict.covers.is_empty() {
                        log.push(format!("{}: no central locus found above", p.ideal()));
                    }
                    if !verdict.is_proven() || !verdict.covers.is_empty() {
                        *exact = false;
                    }
                    for cover in &verdict.covers {
                        log.push(format!(
                            "{}: ascending to proposed cover {}",
                            p.ideal(),
                            cover.ideal()
                        ));
                        let sub =
                            self.ascend(ambient, cover.ideal(), None, depth + 1, log, exact)?;
                        parts.push(sub);
                    }
                }
                CentralityStatus::Unknown => match self.mode {
                    OracleMode::ExactOnly => {
                        return Err(CasError::OracleInconclusive(format!(
                            "centrality of {} undecided under exact-only",
                            p.ideal()
                        )))
                    }
                    _ => {
                        *exact = false;
                        log.push(format!(
                            "{}: centrality undecided, prime kept conservatively",
                            p.ideal()
                        ));
                        parts.push(p.ideal().clone());
                    }
                },
            }
        }
        let mut result = match parts.split_first() {
            None => unit_ideal(ambient),
            Some((first, rest)) => {
                let mut acc = first.clone();
                for part in rest {
                    acc = acc.intersect(part)?;
                }
                acc
            }
        };
        result = result.sum(ambient.relations());
        Ok(result)
    }

    fn proven_not_real(&self, domain: &AffineDomain) -> Option<NotRealCertificate> {
        for (dom, cert) in &self.not_real_certificates {
            if same_domain(dom, domain) && cert.verify(domain).is_ok() {
                return Some(cert.clone());
            }
        }
        scan_not_real(domain)
    }

    fn is_maximal_shape(&self, p: &PrimeIdeal) -> bool {
        rational_point_of_maximal(p).is_some()
    }

    /// Samples the locus of p and the smooth points of the variety, descending
    /// the smooth samples toward the locus to find central limit points.
    fn sample_centrality(
        &self,
        p: &PrimeIdeal,
    ) -> (CentralityStatus, Vec<PrimeIdeal>, Vec<String>) {
        let ambient = p.ambient();
        let mut notes = Vec::new();
        let variety = NumericVariety::new(ambient);
        let locus = NumericVariety::from_ideal(ambient, p.ideal());
        let radius = big_to_f64(&self.config.ball_radius);
        let tol = big_to_f64(&self.config.newton_tolerance);
        let steps = self.config.max_newton_steps;
        let attempts = self.config.attempts.max(4);

        let mut rng = derived_rng(self.config.seed, 0x10c5);
        let mut locus_points = Vec::new();
        for _ in 0..attempts {
            let start = random_point(&mut rng, variety.nvars, radius);
            if let Some(x) = locus.newton(&start, steps, tol) {
                if max_abs(&x) <= 10.0 * radius {
                    locus_points.push(x);
                }
            }
        }

        let mut rng = derived_rng(self.config.seed, 0x5e00);
        let mut hits = Vec::new();
        let mut smooth_count = 0usize;
        let potential: Vec<QPoly> = p.ideal().gens().to_vec();
        let pot_grads: Vec<Vec<QPoly>> = potential
            .iter()
            .map(|g| {
                (0..variety.nvars)
                    .map(|v| g.derivative(v))
                    .collect()
            })
            .collect();
        for attempt in 0..attempts {
            let start = random_point(&mut rng, variety.nvars, radius);
            let Some(x) = variety.newton(&start, steps, tol) else {
                continue;
            };
            if max_abs(&x) > 10.0 * radius || !variety.is_smooth_at(&x) {
                continue;
            }
            smooth_count += 1;
            let (end, value) = descend(&variety, &potential, &pot_grads, &x, tol, steps);
            if value < 1e-10 {
                // guard against tolerance freezing: the endpoint must itself
                // be a limit of smooth points
                let (genuine, _) =
                    self.limit_of_smooth_points_at(&variety, &end, 0x9a17 + attempt as u64);
                if genuine {
                    hits.push(end);
                }
            }
        }

        let summary = SampleSummary {
            attempts,
            smooth_samples: smooth_count,
            locus_samples: locus_points.len(),
            central_hits: hits.len(),
            hit_spread: spread(&hits),
            locus_spread: spread(&locus_points),
        };
        notes.push(format!("sampling: {summary}"));
        if locus_points.is_empty() && hits.is_empty() {
            notes.push("no real points sampled on the locus".into());
            return (CentralityStatus::Unknown, Vec::new(), notes);
        }
        if hits.is_empty() {
            return (
                CentralityStatus::HeuristicNotCentral(summary),
                Vec::new(),
                notes,
            );
        }
        let locus_dim = locus_dimension(p);
        let central = if locus_dim == 0 {
            true
        } else {
            let mut threshold = 0.15 * radius;
            if summary.locus_spread > 1e-9 {
                threshold = threshold.min(0.3 * summary.locus_spread);
            }
            summary.hit_spread >= threshold
        };
        if central {
            return (CentralityStatus::HeuristicCentral(summary), Vec::new(), notes);
        }
        let covers = self.propose_covers(p, &hits, &mut notes);
        (
            CentralityStatus::HeuristicNotCentral(summary),
            covers,
            notes,
        )
    }

    /// Clusters central limit points, rationalizes the representatives, and
    /// keeps maximal ideals that verifiably contain p.
    fn propose_covers(
        &self,
        p: &PrimeIdeal,
        hits: &[Vec<f64>],
        notes: &mut Vec<String>,
    ) -> Vec<PrimeIdeal> {
        let mut covers: Vec<PrimeIdeal> = Vec::new();
        let mut reps: Vec<Vec<f64>> = Vec::new();
        for h in hits {
            if reps.iter().all(|r| distance(r, h) > 0.05) {
                reps.push(h.clone());
            }
        }
        for rep in reps {
            let Some(pt) = rationalize_point(&rep, 8, 5e-2) else {
                continue;
            };
            let Ok(candidate) = PrimeIdeal::from_rational_point(p.ambient(), &pt) else {
                continue;
            };
            if !candidate.ideal().contains_ideal(p.ideal()) || candidate.equals(p) {
                continue;
            }
            if covers.iter().any(|c| c.equals(&candidate)) {
                continue;
            }
            notes.push(format!("proposed central cover {}", candidate.ideal()));
            covers.push(candidate);
        }
        covers
    }

    /// Tests whether a (possibly singular) rational point is a limit of
    /// smooth real points, Newton-projecting perturbed starts at shrinking
    /// scales.
    fn limit_of_smooth_points(
        &self,
        ambient: &AffineDomain,
        point: &[BigRational],
    ) -> (bool, SampleSummary) {
        let variety = NumericVariety::new(ambient);
        let base: Vec<f64> = point.iter().map(big_to_f64).collect();
        self.limit_of_smooth_points_at(&variety, &base, 0x11f7)
    }

    fn limit_of_smooth_points_at(
        &self,
        variety: &NumericVariety,
        base: &[f64],
        salt: u64,
    ) -> (bool, SampleSummary) {
        let tol = big_to_f64(&self.config.newton_tolerance);
        let mut rng = derived_rng(self.config.seed, salt);
        let scales = [0.08, 0.02, 0.005];
        let mut scale_hits = 0usize;
        let mut smooth_total = 0usize;
        let mut attempts = 0usize;
        for eps in scales {
            let mut hit = false;
            for _ in 0..8 {
                attempts += 1;
                let dir = random_point(&mut rng, variety.nvars, 1.0);
                let start: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + eps * d).collect();
                let Some(x) = variety.newton(&start, self.config.max_newton_steps, tol) else {
                    continue;
                };
                if variety.is_smooth_at(&x) && distance(&x, base) <= 4.0 * eps {
                    smooth_total += 1;
                    hit = true;
                }
            }
            if hit {
                scale_hits += 1;
            }
        }
        let summary = SampleSummary {
            attempts,
            smooth_samples: smooth_total,
            locus_samples: 1,
            central_hits: scale_hits,
            hit_spread: 0.0,
            locus_spread: 0.0,
        };
        (scale_hits >= 2, summary)
    }
}

/// Derives a prime-specific non-centrality witness from a proof that -1 is a
/// sum of squares: 1 + sum c_i^2 lands in every prime.
fn derive_noncentrality(cert: &NotRealCertificate, p: &PrimeIdeal) -> NonCentralityCertificate {
    let one = QPoly::constant(
        Rationals,
        p.ambient().vars().clone(),
        MonomialOrder::GrevLex,
        BigRational::one(),
    );
    NonCentralityCertificate {
        a: one.clone(),
        s: one,
        squares: cert.squares.clone(),
        target: p.clone(),
    }
}

/// True when the two presentations are the same ring of the same variables.
fn same_domain(a: &AffineDomain, b: &AffineDomain) -> bool {
    a.vars() == b.vars() && a.relations().equals(b.relations())
}

fn unit_ideal(ambient: &AffineDomain) -> Ideal {
    let one = QPoly::constant(
        Rationals,
        ambient.vars().clone(),
        MonomialOrder::GrevLex,
        BigRational::one(),
    );
    Ideal::new(ambient.vars().clone(), vec![one])
}

/// Dimension of the vanishing locus of a prime.
fn locus_dimension(p: &PrimeIdeal) -> usize {
    match AffineDomain::assumed(p.ideal().clone(), "locus of a prime") {
        Ok(dom) => transcendence_dimension(&dom),
        Err(_) => 0,
    }
}

/// If the prime is the maximal ideal of a rational point, returns the point.
fn rational_point_of_maximal(p: &PrimeIdeal) -> Option<Vec<BigRational>> {
    let vars = p.ambient().vars();
    let mut point = Vec::with_capacity(vars.len());
    for i in 0..vars.len() {
        let xi = QPoly::var(Rationals, vars.clone(), MonomialOrder::GrevLex, i);
        let nf = p.ideal().normal_form(&xi);
        match nf.constant_value() {
            Some(c) => point.push(c),
            None => return None,
        }
    }
    Some(point)
}

/// Cross-multiplied numerator and denominator of base^2 + sum of c_i^2,
/// reduced modulo the relations at each step.
fn fraction_sum_of_squares(
    base: &QPoly,
    domain: &AffineDomain,
    squares: &[FractionElement],
) -> Result<(QPoly, QPoly), CasError> {
    let rel = domain.relations();
    let vars = domain.vars();
    let mut num = rel.normal_form(&(base * base));
    let mut den = QPoly::constant(
        Rationals,
        vars.clone(),
        MonomialOrder::GrevLex,
        BigRational::one(),
    );
    for c in squares {
        if c.num().vars() != vars {
            return Err(CasError::MalformedCertificate(
                "a square lives in a different ring".into(),
            ));
        }
        let n2 = rel.normal_form(&(c.num() * c.num()));
        let d2 = rel.normal_form(&(c.den() * c.den()));
        if d2.is_zero() {
            return Err(CasError::MalformedCertificate(
                "a denominator vanishes in the domain".into(),
            ));
        }
        num = rel.normal_form(&(&(&num * &d2) + &(&den * &n2)));
        den = rel.normal_form(&(&den * &d2));
    }
    Ok((num, den))
}

/// Finds a relation of the form c_ref m_ref + sum c_i m_i with all exponents
/// even and all coefficients of one sign, which rewrites to -1 as a sum of
/// squares of monomial fractions.
fn scan_not_real(domain: &AffineDomain) -> Option<NotRealCertificate> {
    let vars = domain.vars();
    'gens: for g in domain.relations().gens() {
        if g.is_zero() {
            continue;
        }
        let terms = g.terms();
        if terms.len() < 2 {
            continue;
        }
        let positive = terms.iter().all(|(_, c)| c.is_positive());
        let negative = terms.iter().all(|(_, c)| c.is_negative());
        if !positive && !negative {
            continue;
        }
        if terms.iter().any(|(m, _)| m.exps().iter().any(|e| e % 2 == 1)) {
            continue;
        }
        // prefer the constant term as the reference, else the leading term
        let reference = terms.iter().find(|(m, _)| m.is_one()).or_else(|| {
            let lead = g.leading_monomial()?;
            terms.iter().find(|(m, _)| m == lead)
        });
        let Some((ref_mono, ref_coef)) = reference.cloned() else {
            continue;
        };
        let mut squares = Vec::new();
        for (m, c) in terms {
            if *m == ref_mono {
                continue;
            }
            let ratio = c / &ref_coef;
            let root = rational_sqrt(&ratio)?;
            let gcd = m.gcd(&ref_mono);
            let num_mono = gcd.div_into(m);
            let den_mono = gcd.div_into(&ref_mono);
            let half = |mono: &Monomial| {
                Monomial::new(mono.exps().iter().map(|e| e / 2).collect())
            };
            let num_poly = QPoly::from_terms(
                Rationals,
                vars.clone(),
                MonomialOrder::GrevLex,
                vec![(half(&num_mono), root.clone())],
            );
            let den_poly = QPoly::from_terms(
                Rationals,
                vars.clone(),
                MonomialOrder::GrevLex,
                vec![(half(&den_mono), BigRational::one())],
            );
            match FractionElement::new(domain, num_poly, den_poly) {
                Ok(f) => squares.push(f),
                Err(_) => continue 'gens,
            }
        }
        let cert = NotRealCertificate { squares };
        if cert.verify(domain).is_ok() {
            return Some(cert);
        }
    }
    None
}

/// Exact square root of a nonnegative rational, when it exists.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Deterministic search for a smooth rational point over a small value grid.
fn find_smooth_rational_point(domain: &AffineDomain) -> Option<SmoothRationalPointCertificate> {
    let n = domain.vars().len();
    if n == 0 {
        return None;
    }
    let values: Vec<BigRational> = [
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (3, 1),
        (-3, 1),
        (1, 2),
        (-1, 2),
    ]
    .iter()
    .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
    .collect();
    let budget = 4096usize;
    let mut idx = vec![0usize; n];
    let mut tried = 0usize;
    loop {
        tried += 1;
        if tried > budget {
            return None;
        }
        let point: Vec<BigRational> = idx.iter().map(|&i| values[i].clone()).collect();
        let cert = SmoothRationalPointCertificate {
            point,
            variety: domain.clone(),
        };
        if cert.verify().is_ok() {
            return Some(cert);
        }
        // advance odometer
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Rank of a rational matrix by exact Gaussian elimination.
fn exact_rank(mut mat: Vec<Vec<BigRational>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = mat[rank][col].recip();
        for j in col..cols {
            mat[rank][j] = &mat[rank][j] * &inv;
        }
        for r in 0..rows {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for j in col..cols {
                    let v = &mat[r][j] - &(&factor * &mat[rank][j]);
                    mat[r][j] = v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Numeric layer. Everything below works in f64 and stays inside this module.
// ---------------------------------------------------------------------------

struct NumericVariety {
    nvars: usize,
    system: Vec<QPoly>,
    jac: Vec<Vec<QPoly>>,
    codim: usize,
}

impl NumericVariety {
    fn new(domain: &AffineDomain) -> Self {
        let codim = domain.vars().len() - transcendence_dimension(domain);
        NumericVariety::build(domain.vars().len(), domain.relations(), codim)
    }

    fn from_ideal(domain: &AffineDomain, ideal: &Ideal) -> Self {
        NumericVariety::build(domain.vars().len(), ideal, 0)
    }

    fn build(nvars: usize, ideal: &Ideal, codim: usize) -> Self {
        let system: Vec<QPoly> = ideal.gens().iter().filter(|g| !g.is_zero()).cloned().collect();
        let jac = system
            .iter()
            .map(|g| (0..nvars).map(|v| g.derivative(v)).collect())
            .collect();
        NumericVariety {
            nvars,
            system,
            jac,
            codim,
        }
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.system.iter().map(|g| eval_f64(g, x)).collect()
    }

    fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|g| eval_f64(g, x)).collect())
            .collect()
    }

    /// Gauss-Newton projection onto the zero set, iterated to step-size
    /// convergence so near-singular attractors collapse onto the singular
    /// locus instead of stalling in the residual-tolerance tube around it.
    fn newton(&self, start: &[f64], steps: usize, tol: f64) -> Option<Vec<f64>> {
        let mut x = start.to_vec();
        if self.system.is_empty() {
            return Some(x);
        }
        for _ in 0..steps.max(1) {
            let r = self.residual(&x);
            let jac = self.jacobian(&x);
            let delta = minimal_norm_step(&jac, &r)?;
            let dnorm = max_abs(&delta);
            if dnorm > 1e6 {
                return None;
            }
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi -= di;
            }
            if dnorm < 1e-13 * (1.0 + max_abs(&x)) {
                break;
            }
        }
        if max_abs(&self.residual(&x)) < tol {
            Some(x)
        } else {
            None
        }
    }

    fn is_smooth_at(&self, x: &[f64]) -> bool {
        if self.system.is_empty() {
            return true;
        }
        numeric_rank(&self.jacobian(x)) == self.codim
    }
}

/// Projected gradient descent of the potential sum g_i^2 along the variety,
/// returning the endpoint and its final potential value.
fn descend(
    variety: &NumericVariety,
    potential: &[QPoly],
    pot_grads: &[Vec<QPoly>],
    start: &[f64],
    tol: f64,
    newton_steps: usize,
) -> (Vec<f64>, f64) {
    let value = |x: &[f64]| -> f64 {
        potential
            .iter()
            .map(|g| {
                let v = eval_f64(g, x);
                v * v
            })
            .sum()
    };
    let mut x = start.to_vec();
    let mut u = value(&x);
    let mut eta = 0.1f64;
    for _ in 0..150 {
        if u < 1e-14 {
            break;
        }
        let mut grad = vec![0.0; variety.nvars];
        for (g, grads) in potential.iter().zip(pot_grads) {
            let gv = eval_f64(g, &x);
            for (slot, dg) in grad.iter_mut().zip(grads) {
                *slot += 2.0 * gv * eval_f64(dg, &x);
            }
        }
        let tangent = if variety.system.is_empty() {
            grad.clone()
        } else {
            let jac = variety.jacobian(&x);
            let jg: Vec<f64> = jac.iter().map(|row| dot(row, &grad)).collect();
            match minimal_norm_step(&jac, &jg) {
                Some(normal) => grad
                    .iter()
                    .zip(&normal)
                    .map(|(g, n)| g - n)
                    .collect(),
                None => grad.clone(),
            }
        };
        let norm = dot(&tangent, &tangent).sqrt();
        if norm < 1e-10 {
            break;
        }
        let mut advanced = false;
        while eta >= 1e-7 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&tangent)
                .map(|(xi, ti)| xi - eta * ti / norm)
                .collect();
            if let Some(projected) = variety.newton(&trial, newton_steps, tol) {
                let v = value(&projected);
                if v < u {
                    x = projected;
                    u = v;
                    eta = (eta * 1.5).min(0.2);
                    advanced = true;
                    break;
                }
            }
            eta /= 2.0;
        }
        if !advanced {
            break;
        }
    }
    (x, u)
}

fn eval_f64(f: &QPoly, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (m, c) in f.terms() {
        let mut term = big_to_f64(c);
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                term *= x[i];
            }
        }
        acc += term;
    }
    acc
}

fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Largest pairwise distance in a point cloud.
fn spread(points: &[Vec<f64>]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            best = best.max(distance(a, b));
        }
    }
    best
}

/// Minimal-norm solution step J^T (J J^T)^+ r, truncating near-null
/// directions so degenerate rows neither damp nor destabilize the others.
fn minimal_norm_step(jac: &[Vec<f64>], r: &[f64]) -> Option<Vec<f64>> {
    let k = jac.len();
    if k == 0 {
        return Some(vec![0.0; 0]);
    }
    let n = jac[0].len();
    let mut jjt = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            jjt[i][j] = dot(&jac[i], &jac[j]);
        }
    }
    let lambda = solve_truncated(jjt, r.to_vec());
    let mut step = vec![0.0; n];
    for (row, l) in jac.iter().zip(&lambda) {
        for (s, a) in step.iter_mut().zip(row) {
            *s += l * a;
        }
    }
    if step.iter().any(|s| !s.is_finite()) {
        return None;
    }
    Some(step)
}

/// Gauss-Jordan solve that zeroes the solution along columns whose pivot
/// falls below a relative threshold (a truncated pseudo-inverse).
fn solve_truncated(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let threshold = (scale * 1e-12).max(1e-300);
    let mut x = vec![0.0; n];
    let mut used = vec![false; n];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..n {
        let pivot_row = (0..n)
            .filter(|&row| !used[row])
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(pr) = pivot_row else { break };
        if a[pr][col].abs() <= threshold {
            continue;
        }
        used[pr] = true;
        pivots.push((col, pr));
        for row in 0..n {
            if row != pr && a[row][col] != 0.0 {
                let f = a[row][col] / a[pr][col];
                for c in 0..n {
                    a[row][c] -= f * a[pr][c];
                }
                a[row][col] = 0.0;
                b[row] -= f * b[pr];
            }
        }
    }
    for (col, row) in pivots {
        x[col] = b[row] / a[row][col];
    }
    x
}

/// Numeric rank with a relative pivot threshold.
fn numeric_rank(mat: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = mat.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let threshold = (scale * 1e-6).max(1e-9);
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(pivot) = pivot else { break };
        if m[pivot][col].abs() <= threshold {
            continue;
        }
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            let f = m[r][col] / m[rank][col];
            for c in col..cols {
                m[r][c] -= f * m[rank][c];
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn derived_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-radius..radius)).collect()
}

/// Continued-fraction rationalization of a float within a tolerance.
fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..32 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)));
        }
        if frac.abs() < 1e-12 {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        frac = next - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as i64 * q1 + q0;
        if q2 as u64 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() <= tol {
        Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
    } else {
        None
    }
}

fn rationalize_point(x: &[f64], max_den: u64, tol: f64) -> Option<Vec<BigRational>> {
    x.iter().map(|&c| rationalize(c, max_den, tol)).collect()
}

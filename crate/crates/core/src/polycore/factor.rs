use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CasError;

use super::poly::QPoly;
use super::Monomial;

/// Irreducible factorization of a nonzero univariate polynomial over the
/// rationals: returns `(unit, factors)` with
/// `p = unit * prod factor_i ^ mult_i`, each factor primitive with integer
/// coefficients, positive leading coefficient, and irreducible.
pub fn factor_univariate(p: &QPoly) -> Result<(BigRational, Vec<(QPoly, u32)>), CasError> {
    if p.is_zero() {
        return Err(CasError::NotUnivariate("factor of zero polynomial".into()));
    }
    let sup = p.support_vars();
    if sup.len() > 1 {
        return Err(CasError::NotUnivariate(format!(
            "polynomial involves {} variables",
            sup.len()
        )));
    }
    if sup.is_empty() {
        return Ok((p.constant_value().unwrap(), Vec::new()));
    }
    let v = sup[0];
    let mut factors: Vec<(QPoly, u32)> = Vec::new();

    // split off the power of the variable itself
    let val = p
        .terms()
        .iter()
        .map(|(m, _)| m.exp(v))
        .min()
        .unwrap_or(0);
    let mut f = p.clone();
    if val > 0 {
        let xv = QPoly::from_terms(
            *p.field(),
            p.vars().clone(),
            p.order().clone(),
            vec![(Monomial::var(p.vars().len(), v, val), BigRational::one())],
        );
        f = super::gcd::exact_div(p, &xv).expect("valuation divides");
        factors.push((
            QPoly::var(*p.field(), p.vars().clone(), p.order().clone(), v),
            val,
        ));
    }

    for (g, mult) in yun_squarefree(&f, v) {
        let prim = g.primitive_part();
        if prim.is_constant() {
            continue;
        }
        for irr in factor_squarefree_primitive(&prim, v) {
            factors.push((irr, mult));
        }
    }

    // unit from leading coefficients; verified by full reconstruction in tests
    let mut unit = p.coeffs_in_var(v)[p.deg_in(v) as usize]
        .constant_value()
        .expect("univariate");
    for (fac, mult) in &factors {
        let lc = fac.coeffs_in_var(v)[fac.deg_in(v) as usize]
            .constant_value()
            .expect("univariate");
        for _ in 0..*mult {
            unit = &unit / &lc;
        }
    }
    factors.sort_by(|a, b| {
        (a.0.total_degree(), a.0.to_string()).cmp(&(b.0.total_degree(), b.0.to_string()))
    });
    Ok((unit, factors))
}

/// Yun's squarefree decomposition in variable `v`: list of (squarefree part, multiplicity).
fn yun_squarefree(f: &QPoly, v: usize) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    if f.deg_in(v) == 0 {
        return out;
    }
    let fp = f.derivative(v);
    let g = univar_gcd(f, &fp, v);
    let mut w = super::gcd::exact_div(f, &g).expect("gcd divides");
    let mut y = super::gcd::exact_div(&fp, &g).expect("gcd divides");
    let mut z = y.checked_sub(&w.derivative(v)).unwrap();
    let mut i = 1u32;
    while w.deg_in(v) > 0 {
        let gi = univar_gcd(&w, &z, v);
        if gi.deg_in(v) > 0 {
            out.push((gi.clone(), i));
        }
        w = super::gcd::exact_div(&w, &gi).expect("gcd divides");
        y = super::gcd::exact_div(&z, &gi).expect("gcd divides");
        z = y.checked_sub(&w.derivative(v)).unwrap();
        i += 1;
    }
    out
}

fn univar_gcd(a: &QPoly, b: &QPoly, v: usize) -> QPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_zero() {
        let r = univar_rem(&f, &g, v);
        f = g;
        g = r;
    }
    f.monic()
}

fn univar_rem(a: &QPoly, b: &QPoly, v: usize) -> QPoly {
    let db = b.deg_in(v);
    let bc = b.coeffs_in_var(v)[db as usize].constant_value().expect("univariate");
    let mut rem = a.clone();
    loop {
        if rem.is_zero() {
            return rem;
        }
        let dr = rem.deg_in(v);
        if dr < db {
            return rem;
        }
        let rc = rem.coeffs_in_var(v)[dr as usize].constant_value().expect("univariate");
        let c = &rc / &bc;
        let t = QPoly::from_terms(
            *a.field(),
            a.vars().clone(),
            a.order().clone(),
            vec![(Monomial::var(a.vars().len(), v, dr - db), c)],
        );
        rem = rem.checked_sub(&t.checked_mul(b).unwrap()).unwrap();
    }
}

/// Integer coefficient vector (little endian in `v`) of a primitive polynomial.
fn int_coeffs(f: &QPoly, v: usize) -> Vec<BigInt> {
    let coeffs = f.coeffs_in_var(v);
    coeffs
        .iter()
        .map(|c| {
            let q = c.constant_value().expect("univariate");
            assert!(q.denom().is_one(), "expected integer coefficients");
            q.numer().clone()
        })
        .collect()
}

fn poly_from_int_coeffs(model: &QPoly, v: usize, coeffs: &[BigInt]) -> QPoly {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| {
            (
                Monomial::var(model.vars().len(), v, d as u32),
                BigRational::from_integer(c.clone()),
            )
        })
        .collect();
    QPoly::from_terms(*model.field(), model.vars().clone(), model.order().clone(), terms)
}

/// Factor a primitive squarefree integer polynomial into irreducibles
/// (primitive, positive leading coefficient).
fn factor_squarefree_primitive(f: &QPoly, v: usize) -> Vec<QPoly> {
    let deg = f.deg_in(v);
    if deg <= 1 {
        return vec![f.clone()];
    }
    let coeffs = int_coeffs(f, v);
    let lc = coeffs.last().unwrap().clone();
    if lc.is_one() {
        return zassenhaus_monic(f, v)
            .into_iter()
            .map(|c| poly_from_int_coeffs(f, v, &c).primitive_part())
            .collect();
    }
    // monicize: g(x) = lc^(n-1) f(x/lc) is monic; map factors back through x -> lc*x
    let n = deg as usize;
    let mut g_coeffs = vec![BigInt::zero(); n + 1];
    // coefficient of x^i in g is c_i * lc^(n-1-i)
    for (i, c) in coeffs.iter().enumerate() {
        g_coeffs[i] = c * lc.pow((n - 1 - i.min(n - 1)) as u32);
    }
    g_coeffs[n] = BigInt::one();
    let g = poly_from_int_coeffs(f, v, &g_coeffs);
    let mut out = Vec::new();
    for fac in zassenhaus_monic(&g, v) {
        // substitute x -> lc * x and take the primitive part
        let mapped: Vec<BigInt> = fac
            .iter()
            .enumerate()
            .map(|(i, c)| c * lc.pow(i as u32))
            .collect();
        out.push(poly_from_int_coeffs(f, v, &mapped).primitive_part());
    }
    out
}

/// Zassenhaus factorization of a monic squarefree integer polynomial:
/// returns integer coefficient vectors of the monic irreducible factors.
fn zassenhaus_monic(f: &QPoly, v: usize) -> Vec<Vec<BigInt>> {
    let coeffs = int_coeffs(f, v);
    let n = coeffs.len() - 1;

    // choose an odd prime keeping f squarefree mod p
    let primes: [u64; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    let mut chosen = None;
    for &p in &primes {
        let fp = reduce_mod(&coeffs, p);
        if fp.len() != coeffs.len() {
            continue; // lc vanished (cannot happen for monic, kept for safety)
        }
        let dfp = zp::derivative(&fp, p);
        let g = zp::gcd(fp.clone(), dfp, p);
        if zp::deg(&g) == Some(0) {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("squarefree polynomial has a good small prime");
    let fp = reduce_mod(&coeffs, p);
    let modular = factor_mod_p(&fp, p);
    if modular.len() == 1 {
        return vec![coeffs];
    }

    // Mignotte-style bound: factor coefficients bounded by 2^n * ||f||_2
    let norm2: BigInt = coeffs.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = (BigInt::one() << n) * norm2;
    let target: BigInt = &bound * 2 + 1;
    let mut pk = BigInt::from(p);
    let mut lift_steps = 0u32;
    while pk < target {
        pk *= p;
        lift_steps += 1;
    }
    let lifted = hensel_lift(&coeffs, &modular, p, lift_steps);

    // subset recombination with trial division
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut rem = coeffs;
    let mut out = Vec::new();
    'outer: loop {
        let m = pool.len();
        if m == 0 {
            break;
        }
        for size in 1..=(m / 2) {
            for subset in subsets(m, size) {
                let mut cand = vec![BigInt::one()];
                for &i in &subset {
                    cand = int_poly_mul_mod(&cand, &pool[i], &pk);
                }
                symmetric_center(&mut cand, &pk);
                if let Some(q) = int_poly_exact_div(&rem, &cand) {
                    out.push(cand);
                    rem = q;
                    let keep: Vec<Vec<BigInt>> = pool
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !subset.contains(i))
                        .map(|(_, h)| h.clone())
                        .collect();
                    pool = keep;
                    continue 'outer;
                }
            }
        }
        break;
    }
    if rem.len() > 1 {
        out.push(rem);
    }
    out
}

fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    if size == 0 || size > m {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + m - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn reduce_mod(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let pp = BigInt::from(p);
    let mut out: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let mut r = c % &pp;
            if r.sign() == Sign::Minus {
                r += &pp;
            }
            r.to_u64().unwrap()
        })
        .collect();
    while out.last().is_some_and(|c| *c == 0) {
        out.pop();
    }
    out
}

fn symmetric_center(coeffs: &mut [BigInt], pk: &BigInt) {
    let half = pk / 2;
    for c in coeffs.iter_mut() {
        let mut r = &*c % pk;
        if r.sign() == Sign::Minus {
            r += pk;
        }
        if r > half {
            r -= pk;
        }
        *c = r;
    }
}

fn int_poly_mul_mod(a: &[BigInt], b: &[BigInt], pk: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    for c in out.iter_mut() {
        let mut r = &*c % pk;
        if r.sign() == Sign::Minus {
            r += pk;
        }
        *c = r;
    }
    out
}

/// Exact division of integer polynomials (little endian), or None.
fn int_poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() > a.len() || b.is_empty() {
        return None;
    }
    let mut rem = a.to_vec();
    let bl = b.last().unwrap().clone();
    let dq = a.len() - b.len();
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let top = rem[k + b.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        if (&top % &bl) != BigInt::zero() {
            return None;
        }
        let c = &top / &bl;
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Linear Hensel lift of a monic factorization mod p through `steps` extra powers.
fn hensel_lift(f: &[BigInt], modular: &[Vec<u64>], p: u64, steps: u32) -> Vec<Vec<BigInt>> {
    // Bezout cofactors: sum sigma_i * prod_{j != i} h_j = 1 (mod p)
    let m = modular.len();
    let mut others: Vec<Vec<u64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut prod = vec![1u64];
        for (j, h) in modular.iter().enumerate() {
            if j != i {
                prod = zp::mul(&prod, h, p);
            }
        }
        others.push(prod);
    }
    let sigmas = bezout_cofactors(modular, &others, p);

    let mut lifted: Vec<Vec<BigInt>> = modular
        .iter()
        .map(|h| h.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut pk = BigInt::from(p);
    for _ in 0..steps {
        // error e = (f - prod H_i) / p^k  (reduced mod p)
        let mut prod = vec![BigInt::one()];
        for h in &lifted {
            prod = int_poly_mul(&prod, h);
        }
        let mut err = vec![BigInt::zero(); f.len().max(prod.len())];
        for (i, c) in f.iter().enumerate() {
            err[i] += c;
        }
        for (i, c) in prod.iter().enumerate() {
            err[i] -= c;
        }
        let e_over: Vec<BigInt> = err.iter().map(|c| c / &pk).collect();
        let e_mod = reduce_mod(&e_over, p);
        for i in 0..m {
            let hi = reduce_mod(&lifted[i], p);
            let di = zp::rem(&zp::mul(&sigmas[i], &e_mod, p), &hi, p);
            // H_i += p^k * d_i
            for (d, &c) in di.iter().enumerate() {
                if c != 0 {
                    lifted[i][d] += &pk * BigInt::from(c);
                }
            }
        }
        pk *= p;
    }
    lifted
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// sigma_i with sum sigma_i * others_i = 1 mod p, deg sigma_i < deg h_i.
fn bezout_cofactors(hs: &[Vec<u64>], others: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    // invert others_i modulo h_i via extended Euclid, elementwise
    hs.iter()
        .zip(others)
        .map(|(h, o)| {
            let o_red = zp::rem(o, h, p);
            zp::invmod(&o_red, h, p)
        })
        .collect()
}

/// Distinct-degree plus Cantor-Zassenhaus factorization of a squarefree monic
/// polynomial mod p; deterministic via a fixed RNG seed.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let f = zp::monic(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA5E ^ (p << 8) ^ zp::deg(&f).unwrap_or(0) as u64);
    let mut out = Vec::new();
    let mut rem = f.clone();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while let Some(dr) = zp::deg(&rem) {
        if dr == 0 {
            break;
        }
        d += 1;
        if 2 * d > dr {
            out.push(rem.clone());
            break;
        }
        h = zp::powmod_u(&h, p, &rem, p);
        let hx = zp::sub(&h, &x, p);
        let g = zp::gcd(hx, rem.clone(), p);
        if zp::deg(&g).unwrap_or(0) > 0 {
            equal_degree_split(&g, d, p, &mut rng, &mut out);
            rem = zp::divexact(&rem, &g, p);
            h = zp::rem(&h, &rem, p);
        }
    }
    out
}

fn equal_degree_split(
    g: &[u64],
    d: usize,
    p: u64,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vec<u64>>,
) {
    let dg = zp::deg(g).unwrap();
    if dg == d {
        out.push(zp::monic(g, p));
        return;
    }
    // exponent (p^d - 1)/2
    let e = (BigInt::from(p).pow(d as u32) - 1) / 2;
    loop {
        let mut a: Vec<u64> = (0..dg).map(|_| rng.gen_range(0..p)).collect();
        while a.last().is_some_and(|c| *c == 0) {
            a.pop();
        }
        if zp::deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let t = zp::powmod(&a, &e, g, p);
        let t1 = zp::sub(&t, &[1], p);
        let s = zp::gcd(t1, g.to_vec(), p);
        if let Some(ds) = zp::deg(&s) {
            if ds > 0 && ds < dg {
                let q = zp::divexact(g, &s, p);
                equal_degree_split(&s, d, p, rng, out);
                equal_degree_split(&q, d, p, rng, out);
                return;
            }
        }
    }
}

/// Dense polynomial arithmetic over F_p (little-endian coefficient vectors).
mod zp {
    use num_bigint::BigInt;
    use num_traits::Zero;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last().is_some_and(|c| *c == 0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &[u64]) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    fn addm(a: u64, b: u64, p: u64) -> u64 {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    }

    fn subm(a: u64, b: u64, p: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + p - b
        }
    }

    fn mulm(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn invm(a: u64, p: u64) -> u64 {
        // Fermat inverse
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, base, p);
            }
            base = mulm(base, base, p);
            e >>= 1;
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] = c % p;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = subm(out[i], c % p, p);
        }
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(x, y, p), p);
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let db = deg(b).expect("division by zero poly");
        let binv = invm(b[db], p);
        let mut r = trim(a.to_vec());
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let c = mulm(r[dr], binv, p);
            let shift = dr - db;
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = subm(r[shift + j], mulm(c, bc, p), p);
            }
            r = trim(r);
        }
        r
    }

    pub fn divexact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let db = deg(b).expect("division by zero poly");
        let binv = invm(b[db], p);
        let mut r = trim(a.to_vec());
        let da = deg(&r).expect("empty dividend");
        let mut q = vec![0u64; da - db + 1];
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let c = mulm(r[dr], binv, p);
            let shift = dr - db;
            q[shift] = c;
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = subm(r[shift + j], mulm(c, bc, p), p);
            }
            r = trim(r);
        }
        debug_assert!(r.is_empty(), "divexact had nonzero remainder");
        q
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        a = trim(a);
        b = trim(b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(&a, p)
        }
    }

    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        let a = trim(a.to_vec());
        match deg(&a) {
            None => a,
            Some(d) => {
                let inv = invm(a[d], p);
                a.iter().map(|&c| mulm(c, inv, p)).collect()
            }
        }
    }

    pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() - 1];
        for (i, &c) in a.iter().enumerate().skip(1) {
            out[i - 1] = mulm(c, (i as u64) % p, p);
        }
        trim(out)
    }

    /// a^e mod f for u64 exponent.
    pub fn powmod_u(a: &[u64], e: u64, f: &[u64], p: u64) -> Vec<u64> {
        powmod(a, &BigInt::from(e), f, p)
    }

    /// a^e mod f for arbitrary-precision exponent.
    pub fn powmod(a: &[u64], e: &BigInt, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, f, p);
        let (_, bits) = e.to_radix_le(2);
        if e.is_zero() {
            return acc;
        }
        for (i, bit) in bits.iter().enumerate() {
            if *bit == 1 {
                acc = rem(&mul(&acc, &base, p), f, p);
            }
            if i + 1 < bits.len() {
                base = rem(&mul(&base, &base, p), f, p);
            }
        }
        acc
    }

    /// Inverse of a modulo f (gcd(a, f) = 1) via extended Euclid.
    pub fn invmod(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        // extended Euclid tracking only the coefficient of a
        let (mut r0, mut r1) = (f.to_vec(), trim(a.to_vec()));
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            // quotient of r0 by r1
            let d1 = deg(&r1).unwrap();
            let inv = invm(r1[d1], p);
            let mut q = vec![0u64; deg(&r0).map_or(0, |d| d.saturating_sub(d1)) + 1];
            let mut r = r0.clone();
            while let Some(dr) = deg(&r) {
                if dr < d1 {
                    break;
                }
                let c = mulm(r[dr], inv, p);
                q[dr - d1] = c;
                for (j, &bc) in r1.iter().enumerate() {
                    r[dr - d1 + j] = subm(r[dr - d1 + j], mulm(c, bc, p), p);
                }
                r = trim(r);
            }
            let qt1 = mul(&q, &t1, p);
            let t2 = sub(&t0, &qt1, p);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t2;
        }
        // r0 = gcd (constant); normalize t0 by its inverse
        let d0 = deg(&r0).expect("gcd nonzero");
        assert_eq!(d0, 0, "invmod: arguments not coprime");
        let inv = invm(r0[0], p);
        rem(&t0.iter().map(|&c| mulm(c, inv, p)).collect::<Vec<_>>(), f, p)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;
    use super::super::{qi, qr, MonomialOrder, VarSet};
    use super::*;
    use std::sync::Arc;

    fn px(text: &str) -> QPoly {
        let vars = VarSet::new(vec!["x"]);
        parse(text, &vars, &MonomialOrder::GrevLex).unwrap()
    }

    fn assert_factors(input: &str, expected: &[(&str, u32)]) {
        let p = px(input);
        let (unit, facs) = factor_univariate(&p).unwrap();
        let got: Vec<(QPoly, u32)> = facs.clone();
        let want: Vec<(QPoly, u32)> = expected.iter().map(|(s, m)| (px(s), *m)).collect();
        let mut got_sorted = got.clone();
        got_sorted.sort_by_key(|(f, m)| (f.to_string(), *m));
        let mut want_sorted = want;
        want_sorted.sort_by_key(|(f, m)| (f.to_string(), *m));
        assert_eq!(got_sorted, want_sorted, "factors of {input}");
        // reconstruction: unit * prod f^m = p
        let vars = p.vars().clone();
        let mut prod = QPoly::constant(*p.field(), vars, p.order().clone(), unit);
        for (f, m) in &facs {
            prod = prod.checked_mul(&f.pow(*m)).unwrap();
        }
        assert_eq!(prod, p, "reconstruction of {input}");
    }

    #[test]
    fn difference_of_squares_splits() {
        assert_factors("x^2 - 1", &[("x - 1", 1), ("x + 1", 1)]);
    }

    #[test]
    fn sum_of_squares_is_irreducible() {
        assert_factors("x^2 + 1", &[("x^2 + 1", 1)]);
    }

    #[test]
    fn repeated_factor_multiplicity() {
        assert_factors("(x - 1)^2 (x - 2)", &[("x - 1", 2), ("x - 2", 1)]);
    }

    #[test]
    fn quadratics_needing_recombination() {
        // both factors stay irreducible over Q but split mod small primes
        assert_factors("(x^2 - 2)(x^2 - 3)", &[("x^2 - 2", 1), ("x^2 - 3", 1)]);
        assert_factors("x^4 + 1", &[("x^4 + 1", 1)]);
    }

    #[test]
    fn non_monic_and_rational_content() {
        assert_factors("6x^2 - 5x + 1", &[("2x - 1", 1), ("3x - 1", 1)]);
        let p = px("x^2/2 - 1/2");
        let (unit, facs) = factor_univariate(&p).unwrap();
        assert_eq!(unit, qr(1, 2));
        assert_eq!(facs.len(), 2);
    }

    #[test]
    fn variable_power_split_off() {
        assert_factors("x^3 - x^2", &[("x", 2), ("x - 1", 1)]);
    }

    #[test]
    fn constants_and_errors() {
        let vars = VarSet::new(vec!["x"]);
        let c = parse("7", &vars, &MonomialOrder::GrevLex).unwrap();
        let (unit, facs) = factor_univariate(&c).unwrap();
        assert_eq!(unit, qi(7));
        assert!(facs.is_empty());

        let zero = parse("0", &vars, &MonomialOrder::GrevLex).unwrap();
        assert!(factor_univariate(&zero).is_err());

        let vars2: Arc<VarSet> = VarSet::new(vec!["x", "y"]);
        let two_vars = parse("x*y", &vars2, &MonomialOrder::GrevLex).unwrap();
        assert!(factor_univariate(&two_vars).is_err());
    }

    #[test]
    fn cyclotomic_like_products() {
        assert_factors(
            "x^6 - 1",
            &[
                ("x - 1", 1),
                ("x + 1", 1),
                ("x^2 + x + 1", 1),
                ("x^2 - x + 1", 1),
            ],
        );
    }

    #[test]
    fn swinnerton_dyer_style_hard_case() {
        // minimal polynomial of sqrt(2) + sqrt(3): irreducible but splits into
        // quadratics mod every prime, forcing subset recombination
        assert_factors("x^4 - 10x^2 + 1", &[("x^4 - 10x^2 + 1", 1)]);
    }
}

//! Factorization over `F_p`: squarefree decomposition, distinct-degree
//! factorization and Cantor-Zassenhaus equal-degree splitting.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::frobenius::Frobenius;
use super::monic::MonicPoly;
use super::poly::FpPoly;
use super::prime::{factor_u64, Prime};
use crate::error::{Error, Result};

/// Equal-degree products whose factors could be found among at most this
/// many candidates are split by trial division instead of randomly.
pub const TRIAL_SPLIT_LIMIT: u64 = 256;

const DEFAULT_SPLIT_SEED: u64 = 0x5eed_f00d;

/// Irreducible factors with multiplicities, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    modulus: Prime,
    factors: Vec<(MonicPoly, u32)>,
}

impl Factorization {
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn factors(&self) -> &[(MonicPoly, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn reconstruct(&self) -> MonicPoly {
        self.factors
            .iter()
            .fold(MonicPoly::one(self.modulus), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }

    /// Multiplicity of `g` (zero if absent).
    pub fn multiplicity(&self, g: &MonicPoly) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f == g)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    /// Degrees of the irreducible factors, repeated by multiplicity.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, m) in &self.factors {
            out.extend(std::iter::repeat_n(f.degree(), *m as usize));
        }
        out
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, m)| format!("({g})^{m}"))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Squarefree decomposition: pairwise coprime squarefree monic parts with
/// their multiplicities, such that `f = prod part^mult`.
pub fn squarefree_decomposition(f: &MonicPoly) -> Vec<(MonicPoly, u32)> {
    let mut out: Vec<(MonicPoly, u32)> = sqf_rec(f.poly())
        .into_iter()
        .map(|(g, m)| (MonicPoly::from_poly_unchecked(g), m))
        .collect();
    out.sort_by_key(|(_, m)| *m);
    out
}

fn sqf_rec(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.divrem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.divrem(&y).0;
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let step = p.get() as usize;
        let root: Vec<u32> = c.coeffs().iter().step_by(step).copied().collect();
        for (g, m) in sqf_rec(&FpPoly::from_coeffs(p, root)) {
            out.push((g, m * p.get()));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// `(k, g_k)` where `g_k` is the product of all irreducible factors of
/// degree `k`.
pub fn distinct_degree(f: &MonicPoly) -> Vec<(usize, MonicPoly)> {
    let p = f.modulus();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let x = FpPoly::x(p);
    let mut rest = f.poly().clone();
    let mut frob = Frobenius::new(&rest);
    let mut h = x.rem(&rest);
    let mut i = 0usize;
    while 2 * (i + 1) <= rest.degree().unwrap() {
        i += 1;
        h = frob.apply(&h);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.divrem(&g).0;
            out.push((i, MonicPoly::from_poly_unchecked(g)));
            if rest.is_one() {
                break;
            }
            if 2 * rest.degree().unwrap() <= frob.modulus().degree().unwrap() {
                frob = Frobenius::new(&rest);
            }
            h = h.rem(&rest);
        }
    }
    if !rest.is_one() {
        out.push((rest.degree().unwrap(), MonicPoly::from_poly_unchecked(rest)));
    }
    out
}

/// Splits a squarefree product of irreducibles of common degree `k`.
pub fn equal_degree_split(g: &MonicPoly, k: usize, rng: &mut impl Rng) -> Vec<MonicPoly> {
    let mut out = Vec::new();
    edf_rec(g.poly(), k, rng, &mut out);
    let mut out: Vec<MonicPoly> = out.into_iter().map(MonicPoly::from_poly_unchecked).collect();
    out.sort();
    out
}

fn edf_rec(g: &FpPoly, k: usize, rng: &mut impl Rng, out: &mut Vec<FpPoly>) {
    let d = g.degree().unwrap();
    if d == k {
        out.push(g.clone());
        return;
    }
    let p = g.modulus();
    if small_power(p, k, TRIAL_SPLIT_LIMIT) {
        trial_split(g, k, out);
        return;
    }
    let frob = Frobenius::new(g);
    loop {
        let coeffs: Vec<u32> = (0..d).map(|_| rng.random_range(0..p.get())).collect();
        let a = FpPoly::from_coeffs(p, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p.get() == 2 {
            // absolute trace F_{2^k} -> F_2 in each residue field
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k {
                t = frob.apply(&t);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^{(p^k - 1)/2} = (a^{1 + p + ... + p^{k-1}})^{(p-1)/2}
            let mut cur = a.clone();
            let mut norm = a.clone();
            for _ in 1..k {
                cur = frob.apply(&cur);
                norm = norm.mul_mod(&cur, g);
            }
            norm.pow_mod((p.as_u64() - 1) / 2, g).sub(&FpPoly::one(p))
        };
        let split = g.gcd(&b);
        let sd = split.degree().unwrap_or(0);
        if sd > 0 && sd < d {
            let other = g.divrem(&split).0;
            edf_rec(&split, k, rng, out);
            edf_rec(&other, k, rng, out);
            return;
        }
    }
}

fn small_power(p: Prime, k: usize, limit: u64) -> bool {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.saturating_mul(p.as_u64());
        if acc > limit {
            return false;
        }
    }
    true
}

fn trial_split(g: &FpPoly, k: usize, out: &mut Vec<FpPoly>) {
    let p = g.modulus();
    let mut rest = g.clone();
    let mut low = vec![0u32; k];
    loop {
        let mut c = low.clone();
        c.push(1);
        let cand = FpPoly::from_raw(p, c);
        let (q, r) = rest.divrem(&cand);
        if r.is_zero() {
            out.push(cand);
            rest = q;
            if rest.is_one() {
                return;
            }
        }
        if !odometer_next(&mut low, p.get()) {
            break;
        }
    }
    debug_assert!(rest.is_one(), "trial split left a cofactor");
}

/// Advances a little-endian base-`p` counter; false once it wraps around.
pub(crate) fn odometer_next(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Complete factorization. The result does not depend on the seed; the seed
/// only drives the random splitting of equal-degree products.
pub fn factor_with_seed(f: &MonicPoly, seed: u64) -> Factorization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (k, g) in distinct_degree(&part) {
            for h in equal_degree_split(&g, k, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort();
    Factorization {
        modulus: f.modulus(),
        factors,
    }
}

pub fn factor(f: &MonicPoly) -> Factorization {
    factor_with_seed(f, DEFAULT_SPLIT_SEED)
}

/// Rabin's test: `X^{p^n} = X mod f` and `gcd(X^{p^{n/q}} - X, f) = 1` for
/// every prime `q | n`.
pub fn is_irreducible(f: &MonicPoly) -> Result<bool> {
    let n = f.degree();
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if n == 1 {
        return Ok(true);
    }
    let p = f.modulus();
    let fp = f.poly();
    let x = FpPoly::x(p);
    let frob = Frobenius::new(fp);
    let checkpoints: Vec<usize> = factor_u64(n as u64)
        .into_iter()
        .map(|(q, _)| n / q as usize)
        .collect();
    let mut h = x.clone();
    for k in 1..=n {
        h = frob.apply(&h);
        if checkpoints.contains(&k) && !fp.gcd(&h.sub(&x)).is_one() {
            return Ok(false);
        }
    }
    Ok(h == x)
}

/// `(degree, multiplicity)` of every distinct irreducible factor, sorted;
/// computed without equal-degree splitting.
pub fn degree_pattern(f: &MonicPoly) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (k, g) in distinct_degree(&part) {
            out.extend(std::iter::repeat_n((k, mult), g.degree() / k));
        }
    }
    out.sort();
    out
}

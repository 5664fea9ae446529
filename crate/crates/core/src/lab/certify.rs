//! Irreducibility certificates from reductions modulo several primes.
//!
//! An integer factor of degree `k` of a monic `A` reduces to a factor of
//! degree `k` modulo every prime, so `k` is a subset sum of the factor
//! degrees of each `A mod p`. A reducible monic polynomial has a factor of
//! degree at most `n/2`; if no `k` in `[1, n/2]` survives every prime, `A` is
//! irreducible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::bits::Bits;
use super::ddf::shared_degree_in_range;
use crate::error::{Error, Result};
use crate::ffpoly::{
    cyclotomic, cyclotomic_indices, degree_pattern, euler_phi, reduce_i64_monic, IntPoly,
    MonicPoly,
};
use crate::pspace::PrimeTuple;

/// Default bound on `phi(d)` for cyclotomic witnesses.
pub const DEFAULT_CYCLOTOMIC_BOUND: u64 = 16;

/// Sums of sub-multisets of the irreducible factor degrees of `f`,
/// ascending. Always contains `0` and `deg f`.
pub fn attainable_degrees(f: &MonicPoly) -> Vec<usize> {
    let mut b = Bits::singleton(f.degree() + 1, 0);
    for (k, mult) in degree_pattern(f) {
        for _ in 0..mult {
            b.or_shifted(k);
        }
    }
    b.ones()
}

/// Which exact divisor was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessKind {
    X,
    Cyclotomic(u64),
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::X => write!(f, "X"),
            WitnessKind::Cyclotomic(d) => write!(f, "Phi_{d}"),
        }
    }
}

impl Serialize for WitnessKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A proper integer divisor, checked by exact division.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    #[serde(serialize_with = "as_text")]
    pub divisor: IntPoly,
}

impl Witness {
    fn new(kind: WitnessKind) -> Self {
        let divisor = match kind {
            WitnessKind::X => IntPoly::x(),
            WitnessKind::Cyclotomic(d) => cyclotomic(d),
        };
        Witness { kind, divisor }
    }

    /// Recomputes the divisor from its kind and divides `a` by it.
    pub fn verify(&self, a: &IntPoly) -> bool {
        let fresh = Witness::new(self.kind);
        fresh.divisor == self.divisor
            && a.degree() > self.divisor.degree()
            && a
                .divrem_monic(&self.divisor)
                .is_ok_and(|(_, r)| r.is_zero())
    }
}

fn as_text<S: Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "witness")]
pub enum Verdict {
    CertifiedIrreducible,
    ReducibleWitness(Witness),
    Unknown,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedIrreducible)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::ReducibleWitness(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub primes_used: PrimeTuple,
    /// Attainable degrees of `A mod p` per prime; empty when an exact
    /// witness settled the question first.
    pub attainable_sets: Vec<Vec<usize>>,
}

fn check_input(a: &IntPoly) -> Result<usize> {
    if !a.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = a.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    Ok(n)
}

/// Indices `d` with `phi(d) <= bound` and `phi(d) < n`, ascending.
fn witness_indices(bound: u64, n: usize) -> Vec<u64> {
    cyclotomic_indices(bound)
        .into_iter()
        .filter(|&d| (euler_phi(d) as usize) < n)
        .collect()
}

/// Exact witnesses first (`X`, then `Phi_d` by increasing `d`), then the
/// multi-prime degree test with complete factor-degree patterns.
pub fn certify(a: &IntPoly, primes: &PrimeTuple, cyclotomic_bound: u64) -> Result<Certificate> {
    let n = check_input(a)?;
    let mut kinds = vec![WitnessKind::X];
    kinds.extend(witness_indices(cyclotomic_bound, n).into_iter().map(WitnessKind::Cyclotomic));
    for kind in kinds {
        let w = Witness::new(kind);
        let (_, r) = a.divrem_monic(&w.divisor)?;
        if r.is_zero() {
            return Ok(Certificate {
                verdict: Verdict::ReducibleWitness(w),
                primes_used: primes.clone(),
                attainable_sets: Vec::new(),
            });
        }
    }
    let mut sets = Vec::with_capacity(primes.r());
    let mut shared = Bits::interval(n + 1, 1, n / 2);
    for &p in primes.primes() {
        let set = attainable_degrees(&a.reduce_mod(p)?);
        let mut b = Bits::empty(n + 1);
        set.iter().for_each(|&k| b.set(k));
        shared.and_assign(&b);
        sets.push(set);
    }
    let verdict = if shared.is_empty() {
        Verdict::CertifiedIrreducible
    } else {
        Verdict::Unknown
    };
    Ok(Certificate {
        verdict,
        primes_used: primes.clone(),
        attainable_sets: sets,
    })
}

/// `Phi_d | A` for small integer coefficients: fold `A` modulo `X^d - 1`,
/// then divide by `Phi_d` in `i128`, falling back to big integers on
/// overflow.
pub(crate) fn cyclotomic_divides(coeffs: &[i64], d: usize, phi: &[i64]) -> bool {
    let mut folded = vec![0i128; d];
    for (j, &c) in coeffs.iter().enumerate() {
        folded[j % d] += c as i128;
    }
    let m = phi.len() - 1;
    let mut ok = true;
    for k in (m..d).rev() {
        let c = folded[k];
        if c == 0 {
            continue;
        }
        for (j, &f) in phi[..m].iter().enumerate() {
            match (f as i128).checked_mul(c).and_then(|v| folded[k - m + j].checked_sub(v)) {
                Some(v) => folded[k - m + j] = v,
                None => ok = false,
            }
        }
        folded[k] = 0;
        if !ok {
            break;
        }
    }
    if ok {
        return folded.iter().all(|&v| v == 0);
    }
    let a = IntPoly::from_i64(coeffs);
    let phi = IntPoly::from_i64(phi);
    a.divrem_monic(&phi).is_ok_and(|(_, r)| r.is_zero())
}

/// The certification pipeline prepared for many polynomials of one shape:
/// cyclotomic divisors are precomputed and the degree test stops as soon as
/// the outcome is decided instead of factoring completely.
#[derive(Clone, Debug)]
pub struct Certifier {
    primes: PrimeTuple,
    cyclotomics: Vec<(u64, Vec<i64>)>,
}

impl Certifier {
    pub fn new(primes: PrimeTuple, cyclotomic_bound: u64) -> Self {
        let cyclotomics = cyclotomic_indices(cyclotomic_bound)
            .into_iter()
            .map(|d| {
                let c = cyclotomic(d)
                    .to_i64_vec()
                    .expect("small cyclotomic coefficients fit i64");
                (d, c)
            })
            .collect();
        Certifier { primes, cyclotomics }
    }

    pub fn primes(&self) -> &PrimeTuple {
        &self.primes
    }

    /// The first exact witness in the order of [`certify`], if any.
    pub fn witness(&self, coeffs: &[i64]) -> Option<Witness> {
        let n = coeffs.len() - 1;
        if coeffs[0] == 0 {
            return Some(Witness::new(WitnessKind::X));
        }
        for (d, phi) in &self.cyclotomics {
            if phi.len() - 1 >= n {
                continue;
            }
            if cyclotomic_divides(coeffs, *d as usize, phi) {
                let w = Witness::new(WitnessKind::Cyclotomic(*d));
                debug_assert!(w.verify(&IntPoly::from_i64(coeffs)));
                return Some(w);
            }
        }
        None
    }

    /// Same verdict as [`certify`] for monic `coeffs` (ascending) of degree
    /// `>= 2`.
    pub fn verdict(&self, coeffs: &[i64]) -> Result<Verdict> {
        let n = coeffs.len().saturating_sub(1);
        if coeffs.last() != Some(&1) {
            return Err(Error::NotMonic);
        }
        if n < 2 {
            return Err(Error::DegreeTooSmall { min: 2, got: n });
        }
        if let Some(w) = self.witness(coeffs) {
            return Ok(Verdict::ReducibleWitness(w));
        }
        let reductions = self
            .primes
            .primes()
            .iter()
            .map(|&p| reduce_i64_monic(coeffs, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(if shared_degree_in_range(&reductions, 1, n / 2) {
            Verdict::Unknown
        } else {
            Verdict::CertifiedIrreducible
        })
    }

    /// Whether the attainable-degree sets of all reductions meet `[lo, hi]`.
    pub fn shared_degree(&self, coeffs: &[i64], lo: usize, hi: usize) -> Result<bool> {
        let reductions = self
            .primes
            .primes()
            .iter()
            .map(|&p| reduce_i64_monic(coeffs, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(shared_degree_in_range(&reductions, lo, hi))
    }
}

/// `A(x)` in big integers.
fn eval_big(coeffs: &[i64], x: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// `A(x) = 0` for ascending `coeffs`.
pub(crate) fn is_root(coeffs: &[i64], x: i64) -> bool {
    let mut acc: i128 = 0;
    let mut exact = true;
    for &c in coeffs.iter().rev() {
        match acc.checked_mul(x as i128).and_then(|v| v.checked_add(c as i128)) {
            Some(v) => acc = v,
            None => {
                exact = false;
                break;
            }
        }
    }
    if exact {
        acc == 0
    } else {
        eval_big(coeffs, x).is_zero()
    }
}

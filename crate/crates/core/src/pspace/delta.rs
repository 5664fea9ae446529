use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::enumerate::{enumerate_space, irreducibles_up_to, x_free_tuples};
use super::friable::sigma_m_exact;
use super::tuple::{PTuple, PrimeTuple};
use crate::error::{Error, Result};

/// Tolerance on the total weight of a distribution built from floats.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A finitely supported distribution on the product space with exact
/// rational weights. Repeated tuples are merged.
#[derive(Clone, Debug)]
pub struct Distribution {
    ctx: PrimeTuple,
    entries: Vec<(PTuple, BigRational)>,
}

impl Distribution {
    /// Weights must be non-negative and sum to exactly 1.
    pub fn new(ctx: PrimeTuple, entries: Vec<(PTuple, BigRational)>) -> Result<Self> {
        let d = Self::merged(ctx, entries)?;
        let total = d.total_weight();
        if !total.is_one() {
            return Err(Error::NotNormalized(total.to_string()));
        }
        Ok(d)
    }

    /// Float weights, each converted exactly; their sum must be within
    /// `1e-12` of 1.
    pub fn from_f64(ctx: PrimeTuple, entries: Vec<(PTuple, f64)>) -> Result<Self> {
        let exact = entries
            .into_iter()
            .map(|(t, w)| {
                BigRational::from_float(w)
                    .map(|q| (t, q))
                    .ok_or_else(|| Error::invalid(format!("weight {w} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        let d = Self::merged(ctx, exact)?;
        let total = d.total_weight();
        let gap = (&total - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
        if gap > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(format!("{}", total.to_f64().unwrap_or(f64::NAN))));
        }
        Ok(d)
    }

    fn merged(ctx: PrimeTuple, entries: Vec<(PTuple, BigRational)>) -> Result<Self> {
        let mut index: HashMap<PTuple, usize> = HashMap::new();
        let mut out: Vec<(PTuple, BigRational)> = Vec::new();
        for (t, w) in entries {
            if *t.ctx() != ctx {
                return Err(Error::ContextMismatch(format!("tuple {t} outside context {ctx}")));
            }
            if w.is_negative() {
                return Err(Error::invalid(format!("negative weight {w}")));
            }
            if w.is_zero() {
                continue;
            }
            match index.get(&t) {
                Some(&i) => out[i].1 += w,
                None => {
                    index.insert(t.clone(), out.len());
                    out.push((t, w));
                }
            }
        }
        if out.is_empty() {
            return Err(Error::NotNormalized("0".into()));
        }
        Ok(Distribution { ctx, entries: out })
    }

    /// Uniform over every tuple of degree vector `d`.
    pub fn uniform(ctx: &PrimeTuple, d: &[usize], budget: u64) -> Result<Self> {
        let all: Vec<PTuple> = enumerate_space(ctx, d, budget)?.collect();
        let w = BigRational::new(BigInt::one(), BigInt::from(all.len()));
        Self::new(ctx.clone(), all.into_iter().map(|t| (t, w.clone())).collect())
    }

    pub fn point_mass(a: PTuple) -> Self {
        Distribution {
            ctx: a.ctx().clone(),
            entries: vec![(a, BigRational::one())],
        }
    }

    pub fn ctx(&self) -> &PrimeTuple {
        &self.ctx
    }

    pub fn entries(&self) -> &[(PTuple, BigRational)] {
        &self.entries
    }

    pub fn total_weight(&self) -> BigRational {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// `P(B | A)`.
    pub fn prob_divides(&self, b: &PTuple) -> BigRational {
        self.entries
            .iter()
            .filter(|(a, _)| b.divides(a))
            .map(|(_, w)| w)
            .sum()
    }

    /// Weights over a common denominator: `(numerators, denominator)`.
    fn common_denominator(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
        let nums = self
            .entries
            .iter()
            .map(|(_, w)| w.numer() * (&den / w.denom()))
            .collect();
        (nums, den)
    }
}

/// `Delta_A(m)`: sum over `X_i`-free `B` with every component of degree
/// `<= m` of `|P(B | A) - 1/||B|||`, exactly.
pub fn delta_spread_exact(dist: &Distribution, m: usize, budget: u64) -> Result<BigRational> {
    let ctx = dist.ctx();
    let r = ctx.r();
    let (nums, den) = dist.common_denominator();
    let cap: BigUint = ctx.primes().iter().map(|p| BigUint::from(p.get()).pow(m as u32)).product();
    let cap = BigInt::from(cap);
    // per slot: candidate list and, per candidate, which support points it divides
    let iter = x_free_tuples(ctx, m, budget)?;
    let mut acc = BigInt::zero();
    let words = dist.entries.len().div_ceil(64);
    let mut mask_cache: Vec<HashMap<crate::ffpoly::MonicPoly, Vec<u64>>> = vec![HashMap::new(); r];
    for b in iter {
        let mut mask = vec![u64::MAX; words];
        for (slot, comp) in b.components().iter().enumerate() {
            let cached = mask_cache[slot].entry(comp.clone()).or_insert_with(|| {
                let mut bits = vec![0u64; words];
                for (k, (a, _)) in dist.entries.iter().enumerate() {
                    if comp.divides(a.component(slot)) {
                        bits[k / 64] |= 1 << (k % 64);
                    }
                }
                bits
            });
            for (m, c) in mask.iter_mut().zip(cached.iter()) {
                *m &= *c;
            }
        }
        let mut hit = BigInt::zero();
        for (k, num) in nums.iter().enumerate() {
            if mask[k / 64] >> (k % 64) & 1 == 1 {
                hit += num;
            }
        }
        let norm = BigInt::from(b.norm());
        // |hit/den - 1/norm| = |hit * norm - den| / (den * norm); scale to den * cap
        let diff = (&hit * &norm - &den).abs();
        acc += diff * (&cap / &norm);
    }
    Ok(BigRational::new(acc, den * cap))
}

pub fn delta_spread(dist: &Distribution, m: usize, budget: u64) -> Result<f64> {
    Ok(delta_spread_exact(dist, m, budget)?.to_f64().unwrap_or(f64::NAN))
}

/// Exact quantities of the truncated inclusion-exclusion sieve for a fixed
/// `D`: `P(D | A, (A/D)_{<=m} = 1)` against its alternating truncations at
/// `2 l0 - 1` and `2 l0` factors, `l0 = ceil(2 Sigma_m)`, and against the
/// bound `2 Pi_m / ||D|| + sum_{l <= 4 Sigma_m + 2} |P(DG | A) - 1/||DG|||`.
#[derive(Clone, Debug, Serialize)]
pub struct SieveReport {
    pub m: usize,
    pub d: PTuple,
    pub irreducible_count: usize,
    pub sigma_m: f64,
    pub pi_m: f64,
    pub ell0: usize,
    pub error_cutoff: usize,
    pub terms: u64,
    pub exact: f64,
    pub lower: f64,
    pub upper: f64,
    pub uniform_lower: f64,
    pub uniform_upper: f64,
    pub error_sum: f64,
    pub bound: f64,
    pub sandwich_holds: bool,
    pub uniform_sandwich_holds: bool,
    pub below_bound: bool,
    pub holds: bool,
}

fn binomial_sum(k: usize, upto: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut c = BigUint::one();
    for l in 0..=upto.min(k) {
        total += &c;
        c = c * BigUint::from(k - l) / BigUint::from(l + 1);
    }
    total
}

pub fn verify_sieve_truncation(
    dist: &Distribution,
    d: &PTuple,
    m: usize,
    budget: u64,
) -> Result<SieveReport> {
    let ctx = dist.ctx();
    if d.ctx() != ctx {
        return Err(Error::ContextMismatch("D outside the distribution's context".into()));
    }
    let irr = irreducibles_up_to(ctx, m, budget)?;
    let k = irr.len();
    let sigma = sigma_m_exact(ctx, m);
    let two = BigRational::from_integer(2.into());
    let ell0 = (&two * &sigma).ceil().to_integer().to_usize().unwrap();
    let error_cutoff = (BigRational::from_integer(4.into()) * &sigma + &two)
        .floor()
        .to_integer()
        .to_usize()
        .unwrap();
    let lmax = (2 * ell0).max(error_cutoff).min(k);
    let terms = binomial_sum(k, lmax);
    if terms > BigUint::from(budget) {
        return Err(Error::budget("sieve products", terms, budget));
    }
    if k > 64 {
        return Err(Error::budget("irreducibles in the sieve", k, 64));
    }

    // per support point dividing D: weight and the set of I in I_m dividing A/D
    let mut support: Vec<(u64, &BigRational)> = Vec::new();
    for (a, w) in dist.entries() {
        if let Ok(q) = a.quotient(d) {
            let mut mask = 0u64;
            for (j, i) in irr.iter().enumerate() {
                if i.poly.divides(q.component(i.slot)) {
                    mask |= 1 << j;
                }
            }
            support.push((mask, w));
        }
    }
    let exact: BigRational = support.iter().filter(|(s, _)| *s == 0).map(|(_, w)| *w).sum();

    let inv_norms: Vec<BigRational> = irr
        .iter()
        .map(|i| {
            let n = BigInt::from(i.poly.modulus().get()).pow(i.degree() as u32);
            BigRational::new(BigInt::one(), n)
        })
        .collect();
    let inv_d = BigRational::new(BigInt::one(), BigInt::from(d.norm()));
    let pi_exact = inv_norms
        .iter()
        .fold(BigRational::one(), |acc, x| acc * (BigRational::one() - x));

    let mut lower = BigRational::zero();
    let mut upper = BigRational::zero();
    let mut ulower = BigRational::zero();
    let mut uupper = BigRational::zero();
    let mut err = BigRational::zero();
    let mut count = 0u64;
    // depth-first over subsets in lexicographic order
    let mut stack: Vec<(usize, u64, BigRational)> = vec![(0, 0, inv_d.clone())];
    while let Some((next, set, inv)) = stack.pop() {
        let ell = set.count_ones() as usize;
        count += 1;
        let p: BigRational = support
            .iter()
            .filter(|(s, _)| s & set == set)
            .map(|(_, w)| *w)
            .sum();
        let sign_pos = ell % 2 == 0;
        let add = |acc: &mut BigRational, v: &BigRational| {
            if sign_pos {
                *acc += v;
            } else {
                *acc -= v;
            }
        };
        if ell < 2 * ell0 {
            add(&mut lower, &p);
            add(&mut ulower, &inv);
        }
        if ell <= 2 * ell0 {
            add(&mut upper, &p);
            add(&mut uupper, &inv);
        }
        if ell <= error_cutoff {
            err += (&p - &inv).abs();
        }
        if ell < lmax {
            for j in (next..k).rev() {
                stack.push((j + 1, set | 1 << j, &inv * &inv_norms[j]));
            }
        }
    }

    let bound = &two * &pi_exact * &inv_d + &err;
    let sandwich = lower <= exact && exact <= upper;
    let target = &pi_exact * &inv_d;
    let usandwich = ulower <= target && target <= uupper;
    let below = exact <= bound;
    let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    Ok(SieveReport {
        m,
        d: d.clone(),
        irreducible_count: k,
        sigma_m: f(&sigma),
        pi_m: f(&pi_exact),
        ell0,
        error_cutoff,
        terms: count,
        exact: f(&exact),
        lower: f(&lower),
        upper: f(&upper),
        uniform_lower: f(&ulower),
        uniform_upper: f(&uupper),
        error_sum: f(&err),
        bound: f(&bound),
        sandwich_holds: sandwich,
        uniform_sandwich_holds: usandwich,
        below_bound: below,
        holds: sandwich && below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::MonicPoly;

    const BUDGET: u64 = 1 << 22;

    fn ctx(v: &[u64]) -> PrimeTuple {
        PrimeTuple::from_u64(v).unwrap()
    }

    #[test]
    fn uniform_has_zero_spread() {
        let c = ctx(&[2, 3]);
        let dist = Distribution::uniform(&c, &[3, 2], BUDGET).unwrap();
        for m in 0..=2 {
            assert!(delta_spread_exact(&dist, m, BUDGET).unwrap().is_zero(), "m = {m}");
        }
        // beyond min d the law is no longer exact
        assert!(!delta_spread_exact(&dist, 3, BUDGET).unwrap().is_zero());
    }

    #[test]
    fn point_mass_matches_direct_sum() {
        let a = PTuple::parse("p=2,3|1,1,0,1;2,1,1").unwrap();
        let dist = Distribution::point_mass(a.clone());
        for m in 0..=3 {
            let mut direct = BigRational::zero();
            for b in x_free_tuples(a.ctx(), m, BUDGET).unwrap() {
                let ind = if b.divides(&a) { BigRational::one() } else { BigRational::zero() };
                direct += (ind - BigRational::new(1.into(), BigInt::from(b.norm()))).abs();
            }
            assert_eq!(delta_spread_exact(&dist, m, BUDGET).unwrap(), direct);
        }
    }

    #[test]
    fn normalization_checks() {
        let c = ctx(&[2]);
        let a = PTuple::unit(&c);
        let b = PTuple::parse("p=2|1,1").unwrap();
        assert!(Distribution::from_f64(c.clone(), vec![(a.clone(), 0.5), (b.clone(), 0.5)]).is_ok());
        assert!(matches!(
            Distribution::from_f64(c.clone(), vec![(a.clone(), 0.5), (b.clone(), 0.4)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(Distribution::from_f64(c.clone(), vec![(a.clone(), 0.5), (b, 0.5 - 1e-14)]).is_ok());
        let other = PTuple::unit(&ctx(&[3]));
        assert!(Distribution::from_f64(c, vec![(other, 1.0)]).is_err());
    }

    #[test]
    fn sieve_uniform_cubics_mod_2() {
        let c = ctx(&[2]);
        let dist = Distribution::uniform(&c, &[3], BUDGET).unwrap();
        let rep = verify_sieve_truncation(&dist, &PTuple::unit(&c), 1, BUDGET).unwrap();
        // I_1 = {X + 1}, and f(1) != 0 for exactly four of the eight cubics
        assert_eq!(rep.exact, 0.5);
        assert_eq!(rep.ell0, 1);
        assert!(rep.holds && rep.uniform_sandwich_holds);
        assert!(rep.exact <= 2.0 * rep.pi_m);
    }

    #[test]
    fn sieve_when_d_does_not_divide() {
        let a = PTuple::parse("p=2,3|1,1,1;1,0,1").unwrap();
        let d = PTuple::parse("p=2,3|0,1;1").unwrap();
        let rep = verify_sieve_truncation(&Distribution::point_mass(a), &d, 2, BUDGET).unwrap();
        assert_eq!((rep.exact, rep.lower, rep.upper), (0.0, 0.0, 0.0));
        assert!(rep.holds);
    }

    #[test]
    fn sieve_point_mass_hits() {
        let c = ctx(&[2, 3]);
        let a = PTuple::new(
            c.clone(),
            vec![
                MonicPoly::parse("1,1,0,1", c.get(0)).unwrap(),
                MonicPoly::parse("0,1", c.get(1)).unwrap(),
            ],
        )
        .unwrap();
        let rep = verify_sieve_truncation(&Distribution::point_mass(a.clone()), &a, 2, BUDGET).unwrap();
        assert_eq!(rep.exact, 1.0);
        assert!(rep.sandwich_holds);
    }
}

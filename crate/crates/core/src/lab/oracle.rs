//! Exact probability oracles for the coefficient model.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::sampler::SamplerConfig;
use crate::error::{Error, Result};
use crate::ffpoly::reduce_i64_monic;
use crate::pspace::{delta_spread_exact, Distribution, PTuple, PrimeTuple};

/// Default cap on dynamic-programming states.
pub const DEFAULT_DP_BUDGET: u64 = 10_000_000;

/// Number of ways to write each `v` as a sum of `k` values in `[0, len-1]`:
/// the coefficients of `(1 + t + ... + t^{len-1})^k`.
fn window_counts(k: usize, len: u64) -> Vec<BigUint> {
    let w = (len - 1) as usize;
    let mut cur = vec![BigUint::one()];
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); cur.len() + w];
        let mut running = BigUint::zero();
        for v in 0..next.len() {
            if v < cur.len() {
                running += &cur[v];
            }
            if v > w && v - w - 1 < cur.len() {
                running -= &cur[v - w - 1];
            }
            next[v] = running.clone();
        }
        cur = next;
    }
    cur
}

/// `A(x) = base + U - V` where `U` and `V` collect the shifted coefficients
/// `a_j - a` with `x^j = +1` and `x^j = -1` respectively.
struct SignSplit {
    base: BigInt,
    pos: Vec<BigUint>,
    neg: Vec<BigUint>,
    denominator: BigUint,
}

fn split(x: i64, cfg: &SamplerConfig, budget: u64) -> Result<SignSplit> {
    cfg.validate()?;
    if x != 1 && x != -1 {
        return Err(Error::invalid(format!("evaluation point must be +1 or -1, got {x}")));
    }
    let states = (cfg.n as u128) * (cfg.len as u128 - 1) + 1;
    if states > budget as u128 {
        return Err(Error::budget("root-probability DP states", states, budget));
    }
    let (mut n_pos, mut n_neg) = (0usize, 0usize);
    let mut base = BigInt::zero();
    for j in 0..cfg.n {
        if x == 1 || j % 2 == 0 {
            n_pos += 1;
            base += cfg.a;
        } else {
            n_neg += 1;
            base -= cfg.a;
        }
    }
    base += if x == 1 || cfg.n % 2 == 0 { 1 } else { -1 };
    Ok(SignSplit {
        base,
        pos: window_counts(n_pos, cfg.len),
        neg: window_counts(n_neg, cfg.len),
        denominator: num_traits::pow(BigUint::from(cfg.len), cfg.n),
    })
}

/// `P(A(x) = 0)` exactly, `x = +-1`.
pub fn exact_root_prob(x: i64, cfg: &SamplerConfig, budget: u64) -> Result<BigRational> {
    let s = split(x, cfg, budget)?;
    // U - V = -base, i.e. V = U + base
    let mut hits = BigUint::zero();
    for (u, cu) in s.pos.iter().enumerate() {
        let v = BigInt::from(u) + &s.base;
        if let Ok(v) = usize::try_from(v) {
            if let Some(cv) = s.neg.get(v) {
                hits += cu * cv;
            }
        }
    }
    Ok(BigRational::new(hits.into(), s.denominator.into()))
}

/// The full law of `A(x)`, `x = +-1`.
#[derive(Clone, Debug)]
pub struct RootValueLaw {
    pub x: i64,
    /// `(value, number of coefficient vectors)`, ascending by value.
    pub counts: Vec<(BigInt, BigUint)>,
    pub denominator: BigUint,
}

impl RootValueLaw {
    pub fn prob(&self, value: &BigInt) -> BigRational {
        let c = self
            .counts
            .binary_search_by(|(v, _)| v.cmp(value))
            .map(|i| self.counts[i].1.clone())
            .unwrap_or_default();
        BigRational::new(c.into(), self.denominator.clone().into())
    }

    pub fn total(&self) -> BigRational {
        let sum: BigUint = self.counts.iter().map(|(_, c)| c).sum();
        BigRational::new(sum.into(), self.denominator.clone().into())
    }
}

/// Distribution of `A(x)` by convolving the two sign classes; the budget
/// bounds the product of their supports.
pub fn root_value_law(x: i64, cfg: &SamplerConfig, budget: u64) -> Result<RootValueLaw> {
    let s = split(x, cfg, budget)?;
    let pairs = s.pos.len() as u128 * s.neg.len() as u128;
    if pairs > budget as u128 {
        return Err(Error::budget("root-value convolution pairs", pairs, budget));
    }
    let offset = s.neg.len() - 1;
    let mut acc = vec![BigUint::zero(); s.pos.len() + offset];
    for (u, cu) in s.pos.iter().enumerate() {
        for (v, cv) in s.neg.iter().enumerate() {
            acc[u + offset - v] += cu * cv;
        }
    }
    let lowest = &s.base - BigInt::from(offset);
    let counts = acc
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (&lowest + BigInt::from(i), c))
        .collect();
    Ok(RootValueLaw {
        x,
        counts,
        denominator: s.denominator,
    })
}

/// The law of `(A mod p_1, ..., A mod p_r)` over all `N^n` coefficient
/// vectors.
pub fn reduction_distribution(
    cfg: &SamplerConfig,
    primes: &PrimeTuple,
    budget: u64,
) -> Result<Distribution> {
    cfg.validate()?;
    let total = (cfg.len as u128).checked_pow(cfg.n as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::budget("coefficient vectors", total, budget));
    }
    let mut counts: HashMap<PTuple, u64> = HashMap::new();
    let mut digits = vec![0u64; cfg.n];
    let mut coeffs = vec![0i64; cfg.n + 1];
    coeffs[cfg.n] = 1;
    loop {
        for (c, &d) in coeffs.iter_mut().zip(&digits) {
            *c = cfg.a + d as i64;
        }
        let comps = primes
            .primes()
            .iter()
            .map(|&p| reduce_i64_monic(&coeffs, p))
            .collect::<Result<Vec<_>>>()?;
        *counts.entry(PTuple::new(primes.clone(), comps)?).or_default() += 1;
        let mut carried = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < cfg.len {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            break;
        }
    }
    let den = BigInt::from(total);
    let entries = counts
        .into_iter()
        .map(|(t, c)| (t, BigRational::new(BigInt::from(c), den.clone())))
        .collect();
    Distribution::new(primes.clone(), entries)
}

/// `Delta_{A_P}(m)` for the reduction of the coefficient model, exactly.
pub fn delta_a_bruteforce(
    cfg: &SamplerConfig,
    primes: &PrimeTuple,
    m: usize,
    budget: u64,
) -> Result<BigRational> {
    let dist = reduction_distribution(cfg, primes, budget)?;
    delta_spread_exact(&dist, m, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;
    use num_traits::Signed;

    fn cfg(n: usize, a: i64, len: u64) -> SamplerConfig {
        SamplerConfig::new(n, a, len, 0).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Direct enumeration of all coefficient vectors.
    fn brute(x: i64, c: &SamplerConfig) -> BigRational {
        let total = (c.len as i64).pow(c.n as u32);
        let mut hits = 0i64;
        for idx in 0..total {
            let mut rest = idx;
            let mut v = if x == 1 || c.n % 2 == 0 { 1i64 } else { -1 };
            let mut pw = 1i64;
            for _ in 0..c.n {
                v += pw * (c.a + rest % c.len as i64);
                rest /= c.len as i64;
                pw *= x;
            }
            hits += (v == 0) as i64;
        }
        q(hits, total)
    }

    #[test]
    fn hand_values() {
        assert_eq!(exact_root_prob(-1, &cfg(2, 0, 2), DEFAULT_DP_BUDGET).unwrap(), q(1, 4));
        for n in 1..12 {
            assert!(exact_root_prob(1, &cfg(n, 0, 2), DEFAULT_DP_BUDGET).unwrap().is_zero());
        }
    }

    #[test]
    fn matches_enumeration() {
        for &(a, len) in &[(0i64, 2u64), (-1, 3), (-2, 4), (1, 3), (-3, 5)] {
            for n in 1..=7 {
                let c = cfg(n, a, len);
                for x in [1, -1] {
                    assert_eq!(
                        exact_root_prob(x, &c, DEFAULT_DP_BUDGET).unwrap(),
                        brute(x, &c),
                        "x = {x}, n = {n}, a = {a}, N = {len}"
                    );
                }
            }
        }
    }

    #[test]
    fn law_sums_to_one_and_agrees() {
        for &(a, len) in &[(0i64, 2u64), (-1, 3), (2, 5)] {
            for n in [1usize, 4, 9, 16] {
                let c = cfg(n, a, len);
                for x in [1, -1] {
                    let law = root_value_law(x, &c, DEFAULT_DP_BUDGET).unwrap();
                    assert!(law.total().is_one());
                    assert_eq!(
                        law.prob(&BigInt::zero()),
                        exact_root_prob(x, &c, DEFAULT_DP_BUDGET).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn binary_case_is_a_central_binomial() {
        // N = 2, a = 0, even n: A(-1) = 1 + E - O with E ~ Bin(n/2), O ~ Bin(n/2),
        // so P(A(-1) = 0) = C(n, n/2 + 1) / 2^n
        for n in (2..=64usize).step_by(2) {
            let p = exact_root_prob(-1, &cfg(n, 0, 2), DEFAULT_DP_BUDGET).unwrap();
            let expected = BigRational::new(
                binomial(BigInt::from(n), BigInt::from(n / 2 + 1)),
                num_traits::pow(BigInt::from(2), n),
            );
            assert_eq!(p, expected, "n = {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = exact_root_prob(-1, &cfg(100, 0, 1000), 1000).unwrap_err();
        assert!(err.is_budget());
        let err = delta_a_bruteforce(&cfg(30, 0, 2), &PrimeTuple::first(1), 1, 1 << 24).unwrap_err();
        assert!(err.is_budget());
        assert!(exact_root_prob(0, &cfg(3, 0, 2), 1000).is_err());
    }

    #[test]
    fn delta_for_linear_polynomials() {
        // A = X + a_0, one prime 2, m = 1: the X-free B of degree <= 1 are 1
        // and X + 1, with P(X + 1 | A) = P(a_0 odd)
        let ctx = PrimeTuple::from_u64(&[2]).unwrap();
        for &(a, len) in &[(0i64, 2u64), (0, 3), (1, 3), (-2, 5), (0, 4)] {
            let c = cfg(1, a, len);
            let odd = (a..a + len as i64).filter(|v| v.rem_euclid(2) == 1).count() as i64;
            let expected = (q(odd, len as i64) - q(1, 2)).abs();
            assert_eq!(delta_a_bruteforce(&c, &ctx, 1, 1 << 20).unwrap(), expected);
            assert!(delta_a_bruteforce(&c, &ctx, 0, 1 << 20).unwrap().is_zero());
        }
    }

    #[test]
    fn divisible_segments_spread_less() {
        // N a multiple of 2 * 3 makes every coefficient uniform modulo both
        let ctx = PrimeTuple::from_u64(&[2, 3]).unwrap();
        for n in 1..=3 {
            let even = delta_a_bruteforce(&cfg(n, 0, 6), &ctx, 1, 1 << 20).unwrap();
            let odd = delta_a_bruteforce(&cfg(n, 0, 5), &ctx, 1, 1 << 20).unwrap();
            assert!(even < odd, "n = {n}: {even} vs {odd}");
        }
    }
}

use num_integer::binomial;
use num_traits::ToPrimitive;

use irrlab::ffpoly::{factor, is_prime, IntPoly, MonicPoly, Prime};
use irrlab::lab::{
    attainable_degrees, certify, mc_factor_in_range, Certifier, SamplerConfig, Verdict,
    DEFAULT_CYCLOTOMIC_BOUND,
};
use irrlab::pspace::PrimeTuple;

/// Exhaustive search for a monic integer factor of degree in `[1, max_deg]`:
/// factor coefficients are bounded by `C(k, j) ||A||_2`, so modulo a prime
/// above twice that bound every factor is the symmetric lift of a product
/// of a sub-multiset of the factors of `A mod p`.
fn integer_factor(a: &IntPoly, max_deg: usize) -> Option<IntPoly> {
    let norm2 = a
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap().powi(2))
        .sum::<f64>()
        .sqrt();
    let bound = (0..=max_deg as u64)
        .map(|j| binomial(max_deg as u64, j) as f64 * norm2)
        .fold(0.0, f64::max);
    let mut p = (2.0 * bound).ceil() as u64 + 1;
    while !is_prime(p) {
        p += 1;
    }
    let p = Prime::new(p).unwrap();
    let parts = factor(&a.reduce_mod(p).unwrap()).factors().to_vec();
    let mut exps = vec![0u32; parts.len()];
    loop {
        let mut i = 0;
        while i < parts.len() && exps[i] == parts[i].1 {
            exps[i] = 0;
            i += 1;
        }
        if i == parts.len() {
            return None;
        }
        exps[i] += 1;
        let deg: usize = parts
            .iter()
            .zip(&exps)
            .map(|((f, _), &e)| f.degree() * e as usize)
            .sum();
        if deg > max_deg {
            continue;
        }
        let b = parts
            .iter()
            .zip(&exps)
            .fold(MonicPoly::one(p), |acc, ((f, _), &e)| acc.mul(&f.pow(e)));
        let half = p.get() / 2;
        let lifted: Vec<i64> = b
            .coeffs()
            .iter()
            .map(|&c| if c > half { c as i64 - p.get() as i64 } else { c as i64 })
            .collect();
        let cand = IntPoly::from_i64(&lifted);
        if a.divrem_monic(&cand).is_ok_and(|(_, r)| r.is_zero()) {
            return Some(cand);
        }
    }
}

fn binary_poly(bits: u32, n: usize) -> Vec<i64> {
    let mut c: Vec<i64> = (0..n).map(|j| (bits >> j & 1) as i64).collect();
    c.push(1);
    c
}

#[test]
fn certified_binary_polynomials_are_irreducible() {
    let primes = PrimeTuple::first(4);
    let certifier = Certifier::new(primes.clone(), DEFAULT_CYCLOTOMIC_BOUND);
    for n in 2..=12usize {
        let mut certified = 0;
        for bits in 0..1u32 << n {
            let coeffs = binary_poly(bits, n);
            let a = IntPoly::from_i64(&coeffs);
            let cert = certify(&a, &primes, DEFAULT_CYCLOTOMIC_BOUND).unwrap();
            assert_eq!(
                certifier.verdict(&coeffs).unwrap(),
                cert.verdict,
                "fast path disagrees on {coeffs:?}"
            );
            match &cert.verdict {
                Verdict::CertifiedIrreducible => {
                    assert!(integer_factor(&a, n / 2).is_none(), "{coeffs:?} certified but reducible");
                    certified += 1;
                }
                Verdict::ReducibleWitness(w) => {
                    assert!(w.verify(&a));
                    let (_, r) = a.divrem_monic(&w.divisor).unwrap();
                    assert!(r.is_zero());
                }
                Verdict::Unknown => {}
            }
        }
        assert!(certified > 0, "n = {n}: nothing certified");
    }
}

#[test]
fn oracle_agrees_with_direct_factor_search_on_small_degrees() {
    // for n <= 5 a factor of degree <= 2 with coefficients in [-4, 4] is found
    // by brute force whenever the oracle finds one
    for n in 2..=5usize {
        for bits in 0..1u32 << n {
            let a = IntPoly::from_i64(&binary_poly(bits, n));
            let brute = (1..=n / 2).any(|k| {
                let total = 9u32.pow(k as u32);
                (0..total).any(|idx| {
                    let mut c: Vec<i64> = (0..k).map(|j| (idx / 9u32.pow(j as u32) % 9) as i64 - 4).collect();
                    c.push(1);
                    a.divrem_monic(&IntPoly::from_i64(&c)).is_ok_and(|(_, r)| r.is_zero())
                })
            });
            assert_eq!(integer_factor(&a, n / 2).is_some(), brute, "{a}");
        }
    }
}

/// `some k in [n1, n2]` attainable modulo every prime, by complete factoring.
fn shares_degree(coeffs: &[i64], primes: &PrimeTuple, n1: usize, n2: usize) -> bool {
    let a = IntPoly::from_i64(coeffs);
    let sets: Vec<Vec<usize>> = primes
        .primes()
        .iter()
        .map(|&p| attainable_degrees(&a.reduce_mod(p).unwrap()))
        .collect();
    (n1..=n2).any(|k| sets.iter().all(|s| s.contains(&k)))
}

#[test]
fn factor_range_estimate_matches_enumeration() {
    let primes = PrimeTuple::from_u64(&[2]).unwrap();
    let n = 12usize;
    let (n1, n2) = (3, 6);
    let hits = (0..1u32 << n)
        .filter(|&bits| shares_degree(&binary_poly(bits, n), &primes, n1, n2))
        .count();
    let exact = hits as f64 / (1u64 << n) as f64;
    let cfg = SamplerConfig::new(n, 0, 2, 99).unwrap();
    let report = mc_factor_in_range(&cfg, &primes, n1, n2, 100_000, 0).unwrap();
    assert!(report.contains_99(exact), "{exact} vs {:?}", report.wilson_ci_99);
    assert_eq!(report.details["estimate_kind"], "upper_bound");
}

#[test]
fn factor_range_is_monotone_on_a_fixed_sample() {
    let cfg = SamplerConfig::new(40, -2, 5, 3).unwrap();
    let count = |primes: &[u64], n1, n2| {
        let ctx = PrimeTuple::from_u64(primes).unwrap();
        mc_factor_in_range(&cfg, &ctx, n1, n2, 3000, 0).unwrap().successes
    };
    // same trials, so the events are nested and the counts ordered exactly
    assert!(count(&[2, 3], 1, 20) <= count(&[2], 1, 20));
    assert!(count(&[2, 3, 5], 1, 20) <= count(&[2, 3], 1, 20));
    assert!(count(&[2, 3], 5, 10) <= count(&[2, 3], 1, 20));
    assert!(count(&[2, 3], 5, 10) <= count(&[2, 3], 5, 12));
}

#[test]
fn fast_decider_matches_intersections_on_random_windows() {
    let primes = PrimeTuple::first(3);
    let certifier = Certifier::new(primes.clone(), 0);
    let cfg = SamplerConfig::new(1, -3, 7, 17).unwrap();
    for t in 0..400u64 {
        let n = 8 + (t as usize * 7) % 60;
        let coeffs = cfg.with_n(n).sample_coeffs(t);
        let n1 = 1 + (t as usize * 13) % n;
        let n2 = n1 + (t as usize * 5) % (n - n1 + 1);
        assert_eq!(
            certifier.shared_degree(&coeffs, n1, n2).unwrap(),
            shares_degree(&coeffs, &primes, n1, n2),
            "trial {t}, n = {n}, window [{n1}, {n2}]"
        );
    }
}

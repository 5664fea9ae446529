use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::{Measure, UniformSegment};
use crate::error::{Error, Result};
use crate::pspace::PrimeTuple;

/// Half-width of the band in which a floating-point comparison against an
/// exact inequality is reported as undecided.
pub const DECISION_SLACK: f64 = 1e-9;

/// Default cap on `R = P / Q` for the exhaustive `l / R` sweep.
pub const DEFAULT_R_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Indeterminate,
    Fail,
}

/// `Pass` below `bound - 1e-9`, `Fail` from `bound + 1e-9` on.
pub fn decide(value: f64, bound: f64) -> Outcome {
    if value <= bound - DECISION_SLACK {
        Outcome::Pass
    } else if value >= bound + DECISION_SLACK {
        Outcome::Fail
    } else {
        Outcome::Indeterminate
    }
}

/// One `(j, Q, l)` instance of the condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub j: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    #[serde(rename = "R")]
    pub r: u64,
    pub ell: u64,
    pub sum: f64,
    pub bound: f64,
}

impl CaseRecord {
    fn key(&self) -> (u64, u64, usize) {
        (self.q, self.ell, self.j)
    }

    /// Larger `value` wins; ties go to the smallest `(Q, l, j)`.
    fn better(a: CaseRecord, b: CaseRecord, value: impl Fn(&CaseRecord) -> f64) -> CaseRecord {
        match value(&a).total_cmp(&value(&b)) {
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Equal => {
                if a.key() <= b.key() {
                    a
                } else {
                    b
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub primes: PrimeTuple,
    #[serde(rename = "P")]
    pub p: u64,
    pub s: u32,
    pub gamma: f64,
    pub n: f64,
    pub checks: u64,
    /// Largest attained sum.
    pub worst_case: CaseRecord,
    /// Largest `sum - bound`, the case closest to failing.
    pub tightest: CaseRecord,
    pub outcome: Outcome,
    pub pass: bool,
}

/// `(1 - 1/log n) Q^{1 - gamma}`.
pub fn condition_bound(q: u64, n: f64, gamma: f64) -> f64 {
    (1.0 - 1.0 / n.ln()) * (q as f64).powf(1.0 - gamma)
}

/// `|mu^(t / P)|` for `t = 0..P`.
struct Table {
    values: Vec<f64>,
}

impl Table {
    fn new(mu: &Measure, p: u64) -> Self {
        let values = (0..p)
            .into_par_iter()
            .map(|t| mu.fourier_abs_fast(t as f64 / p as f64))
            .collect();
        Table { values }
    }
}

fn validate(p_tuple: &PrimeTuple, n: f64, gamma: f64, r_bound: u64) -> Result<(u64, Vec<u64>)> {
    if n.is_nan() || n < 3.0 {
        return Err(Error::invalid("n must be at least 3"));
    }
    if !(0.5..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma must lie in [1/2, 1]"));
    }
    let p_big: BigUint = p_tuple.product();
    let p = p_big
        .to_u64()
        .ok_or_else(|| Error::budget("l/R sweep", &p_big, r_bound))?;
    let smallest = p_tuple.get(0).as_u64();
    if p / smallest > r_bound {
        return Err(Error::budget(
            format!("l/R sweep for P = {p}"),
            p / smallest,
            r_bound,
        ));
    }
    let primes: Vec<u64> = p_tuple.primes().iter().map(|q| q.as_u64()).collect();
    let r = primes.len();
    let qs: Vec<u64> = (1u32..(1 << r))
        .map(|mask| {
            (0..r)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| primes[i])
                .product()
        })
        .collect();
    let mut qs = qs;
    qs.sort_unstable();
    Ok((p, qs))
}

fn evaluate(
    tables: &[Table],
    p: u64,
    qs: &[u64],
    s: u32,
    n: f64,
    gamma: f64,
) -> (u64, CaseRecord, CaseRecord, Outcome) {
    let per_q: Vec<(u64, CaseRecord, CaseRecord, Outcome)> = qs
        .par_iter()
        .map(|&q| {
            let r = p / q;
            let bound = condition_bound(q, n, gamma);
            let mut worst: Option<CaseRecord> = None;
            let mut tight: Option<CaseRecord> = None;
            let mut outcome = Outcome::Pass;
            let mut checks = 0u64;
            for (j, table) in tables.iter().enumerate() {
                for ell in 0..r {
                    let mut sum = 0.0;
                    for k in 0..q {
                        let t = ((k * r + ell * q) % p) as usize;
                        sum += table.values[t].powi(s as i32);
                    }
                    checks += 1;
                    let rec = CaseRecord { j, q, r, ell, sum, bound };
                    outcome = outcome.max(decide(sum, bound));
                    worst = Some(match worst {
                        None => rec,
                        Some(w) => CaseRecord::better(w, rec, |c| c.sum),
                    });
                    tight = Some(match tight {
                        None => rec,
                        Some(w) => CaseRecord::better(w, rec, |c| c.sum - c.bound),
                    });
                }
            }
            (checks, worst.unwrap(), tight.unwrap(), outcome)
        })
        .collect();
    per_q
        .into_iter()
        .reduce(|a, b| {
            (
                a.0 + b.0,
                CaseRecord::better(a.1, b.1, |c| c.sum),
                CaseRecord::better(a.2, b.2, |c| c.sum - c.bound),
                a.3.max(b.3),
            )
        })
        .unwrap()
}

/// Checks `sum_{k in Z/QZ} |mu_j^(k/Q + l/R)|^s <= (1 - 1/log n) Q^{1-gamma}`
/// for every `j`, every `QR = P` with `Q > 1` and every `l in Z/RZ`.
pub fn check_master_condition(
    mus: &[Measure],
    p_tuple: &PrimeTuple,
    s: u32,
    n: f64,
    gamma: f64,
    r_bound: u64,
) -> Result<ConditionReport> {
    if mus.is_empty() {
        return Err(Error::invalid("at least one measure is required"));
    }
    if s == 0 {
        return Err(Error::invalid("s must be positive"));
    }
    let (p, qs) = validate(p_tuple, n, gamma, r_bound)?;
    let tables: Vec<Table> = mus.iter().map(|mu| Table::new(mu, p)).collect();
    let (checks, worst, tight, outcome) = evaluate(&tables, p, &qs, s, n, gamma);
    Ok(ConditionReport {
        primes: p_tuple.clone(),
        p,
        s,
        gamma,
        n,
        checks,
        worst_case: worst,
        tightest: tight,
        outcome,
        pass: outcome == Outcome::Pass,
    })
}

/// Smallest `s <= s_max` for which the condition passes.
pub fn min_s_for_condition(
    mu: &Measure,
    p_tuple: &PrimeTuple,
    n: f64,
    gamma: f64,
    s_max: u32,
    r_bound: u64,
) -> Result<Option<u32>> {
    let (p, qs) = validate(p_tuple, n, gamma, r_bound)?;
    let tables = [Table::new(mu, p)];
    for s in 1..=s_max {
        if evaluate(&tables, p, &qs, s, n, gamma).3 == Outcome::Pass {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// The segment-length certificate `1 + Q(log(Q-1) + 2)/N <= 0.99 sqrt(Q)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UnifQCertificate {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "Q")]
    pub q: u64,
    pub bound: f64,
    pub threshold: f64,
    pub certified: bool,
}

pub fn unifq_bound(n: u64, q: u64) -> f64 {
    let qf = q as f64;
    1.0 + qf * ((qf - 1.0).ln() + 2.0) / n as f64
}

pub fn check_unifq_certificate(n: u64, q: u64) -> Result<UnifQCertificate> {
    if q < 2 {
        return Err(Error::invalid("Q must be at least 2"));
    }
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let bound = unifq_bound(n, q);
    let threshold = 0.99 * (q as f64).sqrt();
    Ok(UnifQCertificate {
        n,
        q,
        bound,
        threshold,
        certified: bound <= threshold,
    })
}

/// Worst observed gap in a grid audit of the segment bound.
#[derive(Clone, Debug, Serialize)]
pub struct UnifQAudit {
    pub n_range: (u64, u64),
    pub q_range: (u64, u64),
    pub grid: u64,
    pub evaluations: u64,
    /// Largest `sum - bound` over the grid, with its location.
    pub max_excess: f64,
    pub worst_n: u64,
    pub worst_q: u64,
    pub worst_theta0: f64,
    pub holds: bool,
}

/// For every `N` and `Q` in the ranges and `theta0 = i / grid`, evaluates
/// `sum_k |mu^(k/Q + theta0)|` for the uniform measure on `0..N` and
/// compares it with the bound `1 + Q(log(Q-1)+2)/N`.
pub fn unifq_audit(n_range: (u64, u64), q_range: (u64, u64), grid: u64, tolerance: f64) -> Result<UnifQAudit> {
    if q_range.0 < 2 || n_range.0 < 1 || n_range.0 > n_range.1 || q_range.0 > q_range.1 || grid == 0 {
        return Err(Error::invalid("empty or invalid audit ranges"));
    }
    let pairs: Vec<(u64, u64)> = (n_range.0..=n_range.1)
        .flat_map(|n| (q_range.0..=q_range.1).map(move |q| (n, q)))
        .collect();
    let results: Vec<(f64, u64, u64, f64, u64)> = pairs
        .par_iter()
        .map(|&(n, q)| {
            let seg = UniformSegment { a: 0, n };
            let bound = unifq_bound(n, q);
            let mut worst = (f64::NEG_INFINITY, n, q, 0.0, 0u64);
            for i in 0..grid {
                let theta0 = i as f64 / grid as f64;
                let sum: f64 = (0..q)
                    .map(|k| seg.fourier_abs(k as f64 / q as f64 + theta0))
                    .sum();
                if sum - bound > worst.0 {
                    worst = (sum - bound, n, q, theta0, 0);
                }
            }
            worst.4 = grid * q;
            worst
        })
        .collect();
    let evaluations = results.iter().map(|r| r.4).sum();
    let worst = results
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .unwrap();
    Ok(UnifQAudit {
        n_range,
        q_range,
        grid,
        evaluations,
        max_excess: worst.0,
        worst_n: worst.1,
        worst_q: worst.2,
        worst_theta0: worst.3,
        holds: worst.0 <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn primes(v: &[u64]) -> PrimeTuple {
        PrimeTuple::from_u64(v).unwrap()
    }

    #[test]
    fn segment_of_length_35_at_s_1() {
        // the Q = P = 210 sum for N = 35, evaluated independently at 30 digits
        const SUM_N35_Q210: f64 = 14.376970224689844;
        let p4 = primes(&[2, 3, 5, 7]);
        let rep = check_master_condition(&[Measure::uniform(0, 35).unwrap()], &p4, 1, 1e6, 0.5, DEFAULT_R_BOUND).unwrap();
        assert_eq!((rep.worst_case.q, rep.worst_case.ell), (210, 0));
        assert!((rep.worst_case.sum - SUM_N35_Q210).abs() < 1e-11);
        // one check per proper divisor R of 210: sigma(210) - 210
        assert_eq!(rep.checks, 366);
        // at n = 10^6 the bound is 13.44..., so length 35 is not enough;
        // the first passing length is 39
        assert_eq!(rep.outcome, Outcome::Fail);
        let first = (35..60)
            .find(|&n| check_master_condition(&[Measure::uniform(0, n).unwrap()], &p4, 1, 1e6, 0.5, DEFAULT_R_BOUND).unwrap().pass)
            .unwrap();
        assert_eq!(first, 39);
        // with n large enough that 1 - 1/log n exceeds SUM / sqrt(210) it passes
        let huge = check_master_condition(&[Measure::uniform(0, 35).unwrap()], &p4, 1, 1e60, 0.5, DEFAULT_R_BOUND).unwrap();
        assert!(huge.pass);
    }

    #[test]
    fn uniform_mod_p_passes_for_every_s() {
        let mu = Measure::uniform(-17, 210).unwrap();
        for s in [1, 2, 7] {
            let rep = check_master_condition(&[mu.clone()], &primes(&[2, 3, 5, 7]), s, 1e6, 0.5, DEFAULT_R_BOUND).unwrap();
            assert!(rep.pass);
            assert!(rep.worst_case.sum <= 1.0 + 1e-9);
        }
        // the bound at Q = 2 only reaches 1 once n >= 31
        let small = check_master_condition(&[mu.clone()], &primes(&[2, 3, 5, 7]), 1, 30.0, 0.5, DEFAULT_R_BOUND).unwrap();
        assert_eq!(small.outcome, Outcome::Fail);
        assert!(check_master_condition(&[mu], &primes(&[2, 3, 5, 7]), 1, 31.0, 0.5, DEFAULT_R_BOUND).unwrap().pass);
    }

    #[test]
    fn point_mass_fails() {
        let rep = check_master_condition(&[Measure::point_mass(0)], &primes(&[2]), 1, 1e6, 0.5, DEFAULT_R_BOUND).unwrap();
        assert_eq!(rep.outcome, Outcome::Fail);
        assert!((rep.worst_case.sum - 2.0).abs() < 1e-12);
        assert_eq!(min_s_for_condition(&Measure::point_mass(3), &primes(&[2, 3]), 1e6, 0.5, 50, DEFAULT_R_BOUND).unwrap(), None);
    }

    #[test]
    fn decision_band() {
        assert_eq!(decide(1.0, 1.0), Outcome::Indeterminate);
        assert_eq!(decide(1.0 - 2e-9, 1.0), Outcome::Pass);
        assert_eq!(decide(1.0 + 2e-9, 1.0), Outcome::Fail);
    }

    #[test]
    fn r_budget_enforced() {
        let mu = Measure::uniform(0, 2).unwrap();
        let err = check_master_condition(&[mu], &PrimeTuple::first(12), 1, 1e6, 0.5, DEFAULT_R_BOUND).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn unifq_examples() {
        let c = check_unifq_certificate(2, 2).unwrap();
        assert!((c.bound - 3.0).abs() < 1e-15 && !c.certified);
        assert!(check_unifq_certificate(10, 1).is_err());
    }

    #[test]
    fn worst_case_tie_break_is_smallest_key() {
        // uniform mod 6: every sum equals 1, so the first case wins
        let mu = Measure::uniform(0, 6).unwrap();
        let rep = check_master_condition(&[mu.clone(), mu], &primes(&[2, 3]), 1, 100.0, 0.5, DEFAULT_R_BOUND).unwrap();
        assert_eq!((rep.worst_case.q, rep.worst_case.ell, rep.worst_case.j), (2, 0, 0));
    }

    #[test]
    fn non_uniform_measure_uses_pairwise_path() {
        let mu = Measure::new(vec![
            (0, BigRational::new(BigInt::from(1), BigInt::from(2))),
            (1, BigRational::new(BigInt::from(1), BigInt::from(3))),
            (4, BigRational::new(BigInt::from(1), BigInt::from(6))),
        ])
        .unwrap();
        let rep = check_master_condition(&[mu.clone()], &primes(&[2, 3]), 3, 1e6, 0.5, DEFAULT_R_BOUND).unwrap();
        let direct = super::super::measure::fourier_power_sum(&mu, rep.worst_case.q, rep.worst_case.ell as f64 / rep.worst_case.r as f64, 3);
        assert!((direct - rep.worst_case.sum).abs() < 1e-12);
    }
}

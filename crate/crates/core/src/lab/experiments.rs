//! Monte Carlo experiments over the coefficient model.
//!
//! Every experiment folds per-trial integer counts; trial `t` always sees the
//! same polynomial, so the totals do not depend on the worker count or on the
//! order in which workers finish.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::certify::{cyclotomic_divides, is_root, Certifier, Verdict};
use super::oracle::{exact_root_prob, DEFAULT_DP_BUDGET};
use super::report::{wilson_interval, ExperimentReport, SCHEMA_VERSION, Z95, Z99};
use super::sampler::SamplerConfig;
use crate::error::{Error, Result};
use crate::ffpoly::{cyclotomic, euler_phi, reduce_i64_monic};
use crate::pspace::{event_em, PTuple, PrimeTuple};

trait Tally: Default + Send {
    fn merge(&mut self, other: Self);
}

fn add_hist<K: Ord>(into: &mut BTreeMap<K, u64>, from: BTreeMap<K, u64>) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

/// Runs `trial` for every index in `0..trials` on `jobs` workers (`0` picks
/// the rayon default) and merges the tallies.
fn run_trials<T, F>(trials: u64, jobs: usize, trial: F) -> Result<T>
where
    T: Tally,
    F: Fn(&mut T, u64) -> Result<()> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .try_fold(T::default, |mut acc, t| {
                trial(&mut acc, t)?;
                Ok(acc)
            })
            .try_reduce(T::default, |mut a, b| {
                a.merge(b);
                Ok(a)
            })
    })
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    Ok(())
}

fn rational_json(q: &BigRational) -> Value {
    json!({
        "value": q.to_f64().unwrap_or(f64::NAN),
        "exact": q.to_string(),
    })
}

#[derive(Default)]
struct Count(u64);

impl Tally for Count {
    fn merge(&mut self, other: Self) {
        self.0 += other.0;
    }
}

/// Frequency of `Phi_d | A` by exact division.
///
/// For `d` in `{1, 2}` the report also carries the exact probability
/// `P(A(1) = 0)` or `P(A(-1) = 0)` and whether it lies in the Wilson
/// intervals.
pub fn mc_cyclotomic(cfg: &SamplerConfig, d: u64, trials: u64, jobs: usize) -> Result<ExperimentReport> {
    cfg.validate()?;
    check_trials(trials)?;
    if d == 0 {
        return Err(Error::invalid("cyclotomic index must be >= 1"));
    }
    let start = Instant::now();
    let phi_d = euler_phi(d);
    let phi = cyclotomic(d)
        .to_i64_vec()
        .ok_or_else(|| Error::invalid(format!("coefficients of Phi_{d} exceed i64")))?;
    let possible = phi_d as usize <= cfg.n;
    let hits: Count = run_trials(trials, jobs, |acc: &mut Count, t| {
        if possible && cyclotomic_divides(&cfg.sample_coeffs(t), d as usize, &phi) {
            acc.0 += 1;
        }
        Ok(())
    })?;

    let mut params = BTreeMap::new();
    params.insert("d".into(), json!(d));
    let mut report = ExperimentReport::new("mc-cyclotomic", *cfg, params, trials, hits.0);
    report.details.insert("phi_d".into(), json!(phi_d));
    report.details.insert(
        "bound".into(),
        json!({
            "formula": "min(1, K*d/n)^(phi(d)/2)",
            "K": "unspecified",
            "d_over_n": d as f64 / cfg.n as f64,
            "exponent": phi_d as f64 / 2.0,
        }),
    );
    let exact = match d {
        1 => Some(exact_root_prob(1, cfg, DEFAULT_DP_BUDGET)),
        2 => Some(exact_root_prob(-1, cfg, DEFAULT_DP_BUDGET)),
        _ => None,
    };
    match exact {
        Some(Ok(q)) => {
            let p = q.to_f64().unwrap_or(f64::NAN);
            let mut v = rational_json(&q);
            v["within_ci_95"] = json!(report.contains_95(p));
            v["within_ci_99"] = json!(report.contains_99(p));
            report.details.insert("exact".into(), v);
        }
        Some(Err(e)) if e.is_budget() => {
            report.details.insert("exact".into(), json!({ "skipped": e.to_string() }));
        }
        Some(Err(e)) => return Err(e),
        None => {}
    }
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Frequency of the necessary condition for a factor of degree in
/// `[n1, n2]`: some degree in the window is attainable modulo every prime.
/// The estimate is an upper bound on the probability of such a factor.
pub fn mc_factor_in_range(
    cfg: &SamplerConfig,
    primes: &PrimeTuple,
    n1: usize,
    n2: usize,
    trials: u64,
    jobs: usize,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    check_trials(trials)?;
    if !(1 <= n1 && n1 <= n2 && n2 <= cfg.n) {
        return Err(Error::invalid(format!(
            "need 1 <= n1 <= n2 <= n, got n1 = {n1}, n2 = {n2}, n = {}",
            cfg.n
        )));
    }
    let start = Instant::now();
    let certifier = Certifier::new(primes.clone(), 0);
    let hits: Count = run_trials(trials, jobs, |acc: &mut Count, t| {
        if certifier.shared_degree(&cfg.sample_coeffs(t), n1, n2)? {
            acc.0 += 1;
        }
        Ok(())
    })?;
    let mut params = BTreeMap::new();
    params.insert("primes".into(), json!(primes.to_string()));
    params.insert("n1".into(), json!(n1));
    params.insert("n2".into(), json!(n2));
    let mut report = ExperimentReport::new("mc-factor-range", *cfg, params, trials, hits.0);
    report.details.insert("estimate_kind".into(), json!("upper_bound"));
    report.details.insert(
        "event".into(),
        json!("some k in [n1, n2] is a sum of factor degrees of A mod p for every p"),
    );
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn serialize_hist_big<S: Serializer>(
    h: &BTreeMap<BigUint, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(h.iter().map(|(k, v)| (k.to_string(), v)))
}

/// Empirical tail `P(X_i^nu | A_P)` of one component.
#[derive(Clone, Debug, Serialize)]
pub struct XPowerRow {
    pub nu: u32,
    pub count: u64,
    pub prob: f64,
    /// `L` with `(1 - 1/L)^nu = prob`, when `0 < prob < 1`.
    pub implied_l: Option<f64>,
}

/// Divisibility by powers of `X` in one component.
#[derive(Clone, Debug, Serialize)]
pub struct XPowerDiagnostic {
    pub prime: u64,
    pub rows: Vec<XPowerRow>,
}

/// Distributions of the friable part of `A_P`.
#[derive(Clone, Debug, Serialize)]
pub struct EmReport {
    pub schema_version: u32,
    pub version: String,
    pub experiment: String,
    pub config: SamplerConfig,
    pub primes: String,
    pub m: usize,
    pub trials: u64,
    pub sigma_m: f64,
    pub log_pi_m: f64,
    pub degree_threshold: f64,
    pub log_tau_threshold: f64,
    /// Histogram of `Deg A_{<=m}`.
    pub deg_hist: BTreeMap<usize, u64>,
    /// Histogram of `tau(A_{<=m})`.
    #[serde(serialize_with = "serialize_hist_big")]
    pub tau_hist: BTreeMap<BigUint, u64>,
    /// Histogram of `omega(A_{<=m})`.
    pub omega_hist: BTreeMap<usize, u64>,
    pub degree_fail: u64,
    pub tau_fail: u64,
    /// Trials outside `E_m`.
    pub not_em: u64,
    pub not_em_frequency: f64,
    pub not_em_ci_95: (f64, f64),
    pub median_log2_tau: f64,
    pub mean_log_tau: f64,
    pub x_power: Vec<XPowerDiagnostic>,
    pub wall_time: f64,
}

#[derive(Default)]
struct EmTally {
    deg: BTreeMap<usize, u64>,
    tau: BTreeMap<BigUint, u64>,
    omega: BTreeMap<usize, u64>,
    degree_fail: u64,
    tau_fail: u64,
    not_em: u64,
    /// Per slot, histogram of the exponent of `X`.
    x_exp: BTreeMap<(usize, u32), u64>,
}

impl Tally for EmTally {
    fn merge(&mut self, other: Self) {
        add_hist(&mut self.deg, other.deg);
        add_hist(&mut self.tau, other.tau);
        add_hist(&mut self.omega, other.omega);
        add_hist(&mut self.x_exp, other.x_exp);
        self.degree_fail += other.degree_fail;
        self.tau_fail += other.tau_fail;
        self.not_em += other.not_em;
    }
}

/// Samples `A`, reduces it modulo every prime and tallies the friable part
/// of `A_P`, the event `E_m` and the powers of `X` dividing each component.
pub fn em_statistics(
    cfg: &SamplerConfig,
    primes: &PrimeTuple,
    m: usize,
    trials: u64,
    jobs: usize,
) -> Result<EmReport> {
    cfg.validate()?;
    check_trials(trials)?;
    if m == 0 {
        return Err(Error::invalid("m must be >= 1"));
    }
    let start = Instant::now();
    let tally: EmTally = run_trials(trials, jobs, |acc: &mut EmTally, t| {
        let coeffs = cfg.sample_coeffs(t);
        let comps = primes
            .primes()
            .iter()
            .map(|&p| reduce_i64_monic(&coeffs, p))
            .collect::<Result<Vec<_>>>()?;
        for (slot, c) in comps.iter().enumerate() {
            let e = c.coeffs().iter().take_while(|&&v| v == 0).count() as u32;
            *acc.x_exp.entry((slot, e)).or_default() += 1;
        }
        let a = PTuple::new(primes.clone(), comps)?;
        let ev = event_em(&a, m);
        *acc.deg.entry(ev.profile.total_deg_friable).or_default() += 1;
        *acc.tau.entry(ev.profile.tau_friable).or_default() += 1;
        *acc.omega.entry(ev.profile.omega_friable).or_default() += 1;
        acc.degree_fail += !ev.degree_ok as u64;
        acc.tau_fail += !ev.tau_ok as u64;
        acc.not_em += !ev.holds as u64;
        Ok(())
    })?;

    let unit = PTuple::unit(primes);
    let base = event_em(&unit, m);
    let median_tau = {
        let mut seen = 0u64;
        let half = trials.div_ceil(2);
        tally
            .tau
            .iter()
            .find(|(_, &c)| {
                seen += c;
                seen >= half
            })
            .map(|(k, _)| k.bits() as f64 - 1.0 + frac_log2(k))
            .unwrap_or(0.0)
    };
    let mean_log_tau = tally
        .tau
        .iter()
        .map(|(k, &c)| (k.bits() as f64 - 1.0 + frac_log2(k)) * std::f64::consts::LN_2 * c as f64)
        .sum::<f64>()
        / trials as f64;
    let x_power = primes
        .primes()
        .iter()
        .enumerate()
        .map(|(slot, p)| {
            let max_e = tally
                .x_exp
                .keys()
                .filter(|(s, _)| *s == slot)
                .map(|&(_, e)| e)
                .max()
                .unwrap_or(0);
            let rows = (1..=max_e)
                .map(|nu| {
                    let count: u64 = tally
                        .x_exp
                        .iter()
                        .filter(|((s, e), _)| *s == slot && *e >= nu)
                        .map(|(_, c)| c)
                        .sum();
                    let prob = count as f64 / trials as f64;
                    let implied_l = (prob > 0.0 && prob < 1.0)
                        .then(|| 1.0 / (1.0 - prob.powf(1.0 / nu as f64)));
                    XPowerRow {
                        nu,
                        count,
                        prob,
                        implied_l,
                    }
                })
                .collect();
            XPowerDiagnostic {
                prime: p.as_u64(),
                rows,
            }
        })
        .collect();
    Ok(EmReport {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        experiment: "em-stats".into(),
        config: *cfg,
        primes: primes.to_string(),
        m,
        trials,
        sigma_m: base.profile.sigma_m,
        log_pi_m: base.profile.log_pi_m,
        degree_threshold: base.degree_threshold,
        log_tau_threshold: base.log_tau_threshold,
        deg_hist: tally.deg,
        tau_hist: tally.tau,
        omega_hist: tally.omega,
        degree_fail: tally.degree_fail,
        tau_fail: tally.tau_fail,
        not_em: tally.not_em,
        not_em_frequency: tally.not_em as f64 / trials as f64,
        not_em_ci_95: wilson_interval(tally.not_em, trials, Z95),
        median_log2_tau: median_tau,
        mean_log_tau,
        x_power,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// `log2(k) - floor(log2(k))` from the leading bits.
fn frac_log2(k: &BigUint) -> f64 {
    let bits = k.bits();
    if bits == 0 {
        return 0.0;
    }
    let shift = bits.saturating_sub(53);
    let top = (k >> shift).to_f64().unwrap_or(1.0);
    top.log2() - (bits - shift - 1) as f64
}

/// Exact probability next to its Monte Carlo counterpart.
#[derive(Clone, Debug, Serialize)]
pub struct ExactCheck {
    pub exact: f64,
    pub exact_rational: String,
    pub within_ci_99: bool,
}

/// One degree of an irreducibility sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub seed: u64,
    pub trials: u64,
    pub certified: u64,
    pub unknown: u64,
    /// Witness counts by kind, in the order the pipeline tries them.
    pub witnesses: BTreeMap<String, u64>,
    /// Certified fraction.
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub ci_99: (f64, f64),
    pub non_certified: f64,
    pub non_certified_ci_99: (f64, f64),
    pub p_a0_zero: f64,
    /// Non-certified fraction minus `P(a_0 = 0)`.
    pub excess: f64,
    /// `A(1) = 0` and `A(-1) = 0`, counted on every trial.
    pub phi1_divides: u64,
    pub phi2_divides: u64,
    pub phi1_exact: Option<ExactCheck>,
    pub phi2_exact: Option<ExactCheck>,
}

/// Certified fractions across degrees.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub version: String,
    pub experiment: String,
    pub config: SamplerConfig,
    pub primes: String,
    pub cyclotomic_bound: u64,
    pub rows: Vec<SweepRow>,
    pub wall_time: f64,
}

#[derive(Default)]
struct SweepTally {
    certified: u64,
    unknown: u64,
    witnesses: BTreeMap<String, u64>,
    phi1: u64,
    phi2: u64,
}

impl Tally for SweepTally {
    fn merge(&mut self, other: Self) {
        self.certified += other.certified;
        self.unknown += other.unknown;
        self.phi1 += other.phi1;
        self.phi2 += other.phi2;
        add_hist(&mut self.witnesses, other.witnesses);
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the sweep row for degree `n`.
pub fn sweep_row_seed(seed: u64, n: usize) -> u64 {
    splitmix64(seed ^ n as u64)
}

fn exact_check(x: i64, cfg: &SamplerConfig, successes: u64, trials: u64) -> Result<Option<ExactCheck>> {
    match exact_root_prob(x, cfg, DEFAULT_DP_BUDGET) {
        Ok(q) => {
            let exact = q.to_f64().unwrap_or(f64::NAN);
            let (lo, hi) = wilson_interval(successes, trials, Z99);
            Ok(Some(ExactCheck {
                exact,
                exact_rational: q.to_string(),
                within_ci_99: lo <= exact && exact <= hi,
            }))
        }
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs the certification pipeline on `trials` samples for every degree in
/// `ns`. `cfg.n` is ignored; each row uses its own seed.
pub fn sweep_irreducibility(
    cfg: &SamplerConfig,
    ns: &[usize],
    primes: &PrimeTuple,
    trials: u64,
    cyclotomic_bound: u64,
    jobs: usize,
) -> Result<SweepReport> {
    check_trials(trials)?;
    if ns.is_empty() {
        return Err(Error::invalid("no degrees given"));
    }
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::DegreeTooSmall { min: 2, got: n });
    }
    let start = Instant::now();
    let certifier = Certifier::new(primes.clone(), cyclotomic_bound);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let row_cfg = SamplerConfig::new(n, cfg.a, cfg.len, sweep_row_seed(cfg.seed, n))?;
        let tally: SweepTally = run_trials(trials, jobs, |acc: &mut SweepTally, t| {
            let coeffs = row_cfg.sample_coeffs(t);
            acc.phi1 += is_root(&coeffs, 1) as u64;
            acc.phi2 += is_root(&coeffs, -1) as u64;
            match certifier.verdict(&coeffs)? {
                Verdict::CertifiedIrreducible => acc.certified += 1,
                Verdict::Unknown => acc.unknown += 1,
                Verdict::ReducibleWitness(w) => {
                    *acc.witnesses.entry(w.kind.to_string()).or_default() += 1;
                }
            }
            Ok(())
        })?;
        let (a0_num, a0_den) = row_cfg.prob_a0_zero();
        let p_a0_zero = a0_num as f64 / a0_den as f64;
        let estimate = tally.certified as f64 / trials as f64;
        let (ci_lo, ci_hi) = wilson_interval(tally.certified, trials, Z95);
        let ci_99 = wilson_interval(tally.certified, trials, Z99);
        rows.push(SweepRow {
            n,
            seed: row_cfg.seed,
            trials,
            certified: tally.certified,
            unknown: tally.unknown,
            witnesses: tally.witnesses,
            estimate,
            ci_lo,
            ci_hi,
            ci_99,
            non_certified: 1.0 - estimate,
            non_certified_ci_99: (1.0 - ci_99.1, 1.0 - ci_99.0),
            p_a0_zero,
            excess: 1.0 - estimate - p_a0_zero,
            phi1_divides: tally.phi1,
            phi2_divides: tally.phi2,
            phi1_exact: exact_check(1, &row_cfg, tally.phi1, trials)?,
            phi2_exact: exact_check(-1, &row_cfg, tally.phi2, trials)?,
        });
    }
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        version: crate::VERSION.to_string(),
        experiment: "sweep-irreducibility".into(),
        config: *cfg,
        primes: primes.to_string(),
        cyclotomic_bound,
        rows,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_cases() {
        let cfg = SamplerConfig::new(2, 0, 2, 7).unwrap();
        let r = mc_cyclotomic(&cfg, 2, 20_000, 1).unwrap();
        assert!(r.contains_99(0.25), "{:?}", r.wilson_ci_99);
        assert_eq!(r.details["exact"]["exact"], json!("1/4"));
        assert_eq!(mc_cyclotomic(&cfg, 1, 5_000, 1).unwrap().successes, 0);
        // phi(7) = 6 > n
        assert_eq!(mc_cyclotomic(&cfg.with_n(5), 7, 5_000, 1).unwrap().successes, 0);
        assert!(mc_cyclotomic(&cfg, 2, 0, 1).is_err());
    }

    #[test]
    fn counts_ignore_worker_count() {
        let cfg = SamplerConfig::new(30, -1, 3, 11).unwrap();
        let p = PrimeTuple::first(2);
        let a = mc_factor_in_range(&cfg, &p, 1, 15, 3000, 1).unwrap();
        let b = mc_factor_in_range(&cfg, &p, 1, 15, 3000, 3).unwrap();
        assert_eq!(a.successes, b.successes);
        let a = sweep_irreducibility(&cfg, &[10, 20], &p, 2000, 16, 1).unwrap();
        let b = sweep_irreducibility(&cfg, &[10, 20], &p, 2000, 16, 4).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!((x.certified, x.unknown, &x.witnesses), (y.certified, y.unknown, &y.witnesses));
        }
        let a = em_statistics(&cfg, &p, 2, 2000, 1).unwrap();
        let b = em_statistics(&cfg, &p, 2, 2000, 2).unwrap();
        assert_eq!(a.tau_hist, b.tau_hist);
        assert_eq!(a.not_em, b.not_em);
    }

    #[test]
    fn factor_range_guards() {
        let cfg = SamplerConfig::new(8, 0, 2, 1).unwrap();
        let p = PrimeTuple::first(1);
        assert!(mc_factor_in_range(&cfg, &p, 0, 3, 10, 1).is_err());
        assert!(mc_factor_in_range(&cfg, &p, 4, 3, 10, 1).is_err());
        assert!(mc_factor_in_range(&cfg, &p, 1, 9, 10, 1).is_err());
        // degree n is always attainable
        assert_eq!(mc_factor_in_range(&cfg, &p, 8, 8, 100, 1).unwrap().successes, 100);
    }

    #[test]
    fn sweep_rows_are_consistent() {
        let cfg = SamplerConfig::new(2, 0, 2, 5).unwrap();
        let r = sweep_irreducibility(&cfg, &[12], &PrimeTuple::first(4), 4000, 16, 1).unwrap();
        let row = &r.rows[0];
        let witnessed: u64 = row.witnesses.values().sum();
        assert_eq!(row.certified + row.unknown + witnessed, row.trials);
        assert_eq!(row.p_a0_zero, 0.5);
        assert_eq!(row.phi1_divides, 0);
        assert!(row.phi2_exact.as_ref().unwrap().within_ci_99);
        assert_ne!(row.seed, sweep_irreducibility(&cfg, &[13], &PrimeTuple::first(1), 1, 0, 1).unwrap().rows[0].seed);
    }

    #[test]
    fn frac_log2_matches_float() {
        for k in [1u64, 2, 3, 5, 12, 1000, 1 << 40] {
            let b = BigUint::from(k);
            let v = b.bits() as f64 - 1.0 + frac_log2(&b);
            assert!((v - (k as f64).log2()).abs() < 1e-12, "{k}");
        }
    }
}

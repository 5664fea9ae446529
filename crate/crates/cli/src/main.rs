//! `irrlab`: command-line front end for the irreducibility experiments.
//!
//! Reports go to standard output as JSON (or CSV for Monte Carlo runs), a
//! one-line summary goes to standard error. Exit codes: 0 on success, 1 on
//! invalid input, 2 when a computation budget is exceeded.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::json;

use irrlab::constants::n0_for;
use irrlab::ffpoly::{count_irreducibles, enumerate_irreducibles, IntPoly, Prime};
use irrlab::lab::{
    certify, delta_a_bruteforce, em_statistics, mc_cyclotomic, mc_factor_in_range,
    reduction_distribution, sweep_irreducibility, ExperimentReport, SamplerConfig,
    DEFAULT_CYCLOTOMIC_BOUND,
};
use irrlab::measures::{check_master_condition, min_s_for_condition, unifq_audit, Measure, DEFAULT_R_BOUND};
use irrlab::pspace::{verify_sieve_truncation, Distribution, PTuple, PrimeTuple};
use irrlab::DEFAULT_ENUMERATION_BUDGET;
use output::{emit_csv, emit_json, round_reals, CsvRow, Format};

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: format!("output error: {e}"),
        }
    }
}

impl From<irrlab::Error> for Failure {
    fn from(e: irrlab::Error) -> Self {
        Failure {
            code: if e.is_budget() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::invalid(format!("serialization error: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "irrlab", version, about = "Irreducibility of random integer polynomials via reductions modulo several primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Model {
    /// Degree of A.
    #[arg(long)]
    n: usize,
    /// First point of the coefficient segment.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    a: i64,
    /// Length of the coefficient segment.
    #[arg(long = "N", default_value_t = 2)]
    len: u64,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Model {
    fn config(&self) -> Result<SamplerConfig, Failure> {
        Ok(SamplerConfig::new(self.n, self.a, self.len, self.seed)?)
    }
}

#[derive(Args, Debug, Clone)]
struct Run {
    /// Number of samples.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Worker threads; 0 uses every core. Counts do not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of primes, exponent and segment-length threshold for a target C.
    Constants {
        /// Target exponent.
        #[arg(long = "C")]
        c: f64,
    },
    /// Fourier near-uniformity condition for one or more coefficient measures.
    CheckMeasure {
        /// Measure as "v1:p1,v2:p2,..." (repeatable).
        #[arg(long)]
        measure: Vec<String>,
        /// Uniform measure on the segment starting at A of length N.
        #[arg(long, num_args = 2, value_names = ["A", "N"], allow_negative_numbers = true)]
        uniform: Option<Vec<i64>>,
        /// Primes, e.g. "2,3,5".
        #[arg(long)]
        primes: String,
        /// Exponent s.
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Degree n entering the bound.
        #[arg(long)]
        n: f64,
        /// Exponent gamma entering the bound.
        #[arg(long)]
        gamma: f64,
        /// Largest R enumerated explicitly.
        #[arg(long, default_value_t = DEFAULT_R_BOUND)]
        r_bound: u64,
        /// Also search the smallest passing s up to this value (first measure).
        #[arg(long)]
        min_s: Option<u32>,
    },
    /// Grid audit of the segment Fourier bound 1 + Q(log(Q-1)+2)/N.
    UnifqAudit {
        #[arg(long, default_value_t = 2)]
        n_min: u64,
        #[arg(long, default_value_t = 64)]
        n_max: u64,
        #[arg(long, default_value_t = 2)]
        q_min: u64,
        #[arg(long, default_value_t = 60)]
        q_max: u64,
        /// Number of theta0 grid points in [0, 1).
        #[arg(long, default_value_t = 1000)]
        grid: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Number of monic irreducibles of degree k over F_p.
    CountIrreducibles {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Leave out the polynomial X.
        #[arg(long)]
        exclude_x: bool,
        /// Cross-check by enumeration.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Irreducibility certificate for one integer polynomial.
    Certify {
        /// Ascending coefficients "c0,c1,...,cn" of a monic polynomial.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value = "2,3,5,7")]
        primes: String,
        /// Largest phi(d) tried for cyclotomic witnesses.
        #[arg(long, default_value_t = DEFAULT_CYCLOTOMIC_BOUND)]
        cyclotomic_bound: u64,
    },
    /// Frequency of Phi_d | A.
    McCyclotomic {
        #[command(flatten)]
        model: Model,
        /// Cyclotomic index.
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        run: Run,
    },
    /// Frequency of a shared attainable degree in [n1, n2] (upper bound).
    McFactorRange {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "2,3,5,7")]
        primes: String,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[command(flatten)]
        run: Run,
    },
    /// Friable-part statistics of the reductions.
    EmStats {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "2,3")]
        primes: String,
        /// Friability bound.
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        run: Run,
    },
    /// Exact spread of divisibility probabilities by enumeration.
    DeltaBruteforce {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "2")]
        primes: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Exact truncated-sieve sandwich for a fixed tuple D.
    SieveVerify {
        /// Tuple "p=2,3|c0,...;c0,..." (its primes fix the space).
        #[arg(long = "D")]
        d: String,
        #[arg(long)]
        m: usize,
        /// Uniform distribution over this degree vector, e.g. "2,1".
        #[arg(long, value_delimiter = ',', conflicts_with = "n")]
        degrees: Option<Vec<usize>>,
        /// Reduction of the coefficient model of degree n instead.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        a: i64,
        #[arg(long = "N", default_value_t = 2)]
        len: u64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Certified-irreducible fractions across degrees.
    SweepIrreducibility {
        /// Degrees, e.g. "50,100,200".
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        a: i64,
        #[arg(long = "N", default_value_t = 2)]
        len: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "2,3,5,7")]
        primes: String,
        #[arg(long, default_value_t = DEFAULT_CYCLOTOMIC_BOUND)]
        cyclotomic_bound: u64,
        #[command(flatten)]
        run: Run,
    },
}

fn primes(text: &str) -> Result<PrimeTuple, Failure> {
    Ok(PrimeTuple::parse(text)?)
}

fn require_json(format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::invalid("CSV output is only available for Monte Carlo estimates")),
    }
}

fn emit_experiment(report: &ExperimentReport, format: Format) -> Result<(), Failure> {
    eprintln!(
        "{}: {}/{} = {:.6}, 95% CI [{:.6}, {:.6}], {:.2}s",
        report.experiment,
        report.successes,
        report.trials,
        report.estimate,
        report.wilson_ci_95.0,
        report.wilson_ci_95.1,
        report.wall_time
    );
    let value = serde_json::to_value(report)?;
    let seed = Some(report.config.seed);
    match format {
        Format::Json => emit_json(value, seed),
        Format::Csv => {
            let row = CsvRow {
                n: report.config.n,
                estimate: report.estimate,
                ci_lo: report.wilson_ci_95.0,
                ci_hi: report.wilson_ci_95.1,
                trials: report.trials,
                seed: report.config.seed,
            };
            emit_csv(&[row], &value, seed)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Constants { c } => {
            let report = n0_for(c)?;
            eprintln!(
                "C = {c}: r = {}, exponent = {:.6}, P = {}, f(P) = {:.6e}, N0 = {}",
                report.r, report.exponent, report.p, report.f_p, report.n0
            );
            let mut value = serde_json::to_value(&report)?;
            round_reals(&mut value);
            emit_json(value, None)
        }
        Command::CheckMeasure {
            measure,
            uniform,
            primes: p,
            s,
            n,
            gamma,
            r_bound,
            min_s,
        } => {
            let ctx = primes(&p)?;
            let mut mus = measure
                .iter()
                .map(|t| Measure::parse(t))
                .collect::<irrlab::Result<Vec<_>>>()?;
            if let Some(u) = uniform {
                let len = u64::try_from(u[1]).map_err(|_| Failure::invalid("segment length must be positive"))?;
                mus.push(Measure::uniform(u[0], len)?);
            }
            if mus.is_empty() {
                return Err(Failure::invalid("give --measure or --uniform"));
            }
            let report = check_master_condition(&mus, &ctx, s, n, gamma, r_bound)?;
            eprintln!(
                "condition with s = {s}: {:?} after {} checks (worst sum {:.6} vs bound {:.6})",
                report.outcome, report.checks, report.worst_case.sum, report.worst_case.bound
            );
            let mut value = json!({ "condition": report });
            if let Some(s_max) = min_s {
                let found = min_s_for_condition(&mus[0], &ctx, n, gamma, s_max, r_bound)?;
                value["min_s"] = json!(found);
            }
            emit_json(value, None)
        }
        Command::UnifqAudit {
            n_min,
            n_max,
            q_min,
            q_max,
            grid,
            tolerance,
        } => {
            let report = unifq_audit((n_min, n_max), (q_min, q_max), grid, tolerance)?;
            eprintln!(
                "{} evaluations, max excess {:.3e} at N = {}, Q = {}: {}",
                report.evaluations,
                report.max_excess,
                report.worst_n,
                report.worst_q,
                if report.holds { "holds" } else { "VIOLATED" }
            );
            emit_json(serde_json::to_value(&report)?, None)
        }
        Command::CountIrreducibles {
            p,
            k,
            exclude_x,
            enumerate,
            budget,
        } => {
            let prime = Prime::new(p)?;
            if k == 0 {
                return Err(Failure::invalid("k must be >= 1"));
            }
            let count = count_irreducibles(prime, k, exclude_x);
            let mut value = json!({
                "p": p,
                "k": k,
                "exclude_x": exclude_x,
                "count": count.to_string(),
            });
            if enumerate {
                let listed = enumerate_irreducibles(prime, k, exclude_x, budget)?
                    .into_iter()
                    .filter(|f| f.degree() == k)
                    .count();
                value["enumerated"] = json!(listed);
                value["agree"] = json!(count.to_usize() == Some(listed));
            }
            eprintln!("irreducibles of degree {k} over F_{p}: {count}");
            emit_json(value, None)
        }
        Command::Certify {
            poly,
            primes: p,
            cyclotomic_bound,
        } => {
            let a = IntPoly::parse(&poly)?;
            let cert = certify(&a, &primes(&p)?, cyclotomic_bound)?;
            let mut value = serde_json::to_value(&cert)?;
            if let Some(w) = cert.verdict.witness() {
                value["witness_verified"] = json!(w.verify(&a));
            }
            eprintln!("{}", value["verdict"]["kind"].as_str().unwrap_or("?"));
            emit_json(value, None)
        }
        Command::McCyclotomic { model, d, run } => {
            let report = mc_cyclotomic(&model.config()?, d, run.trials, run.jobs)?;
            emit_experiment(&report, run.format)
        }
        Command::McFactorRange {
            model,
            primes: p,
            n1,
            n2,
            run,
        } => {
            let report = mc_factor_in_range(&model.config()?, &primes(&p)?, n1, n2, run.trials, run.jobs)?;
            emit_experiment(&report, run.format)
        }
        Command::EmStats {
            model,
            primes: p,
            m,
            run,
        } => {
            require_json(run.format)?;
            let cfg = model.config()?;
            let report = em_statistics(&cfg, &primes(&p)?, m, run.trials, run.jobs)?;
            eprintln!(
                "not E_m: {}/{} ({:.4}), median log2 tau {:.3} vs Sigma_m {:.3}",
                report.not_em, report.trials, report.not_em_frequency, report.median_log2_tau, report.sigma_m
            );
            emit_json(serde_json::to_value(&report)?, Some(cfg.seed))
        }
        Command::DeltaBruteforce {
            model,
            primes: p,
            m,
            budget,
        } => {
            let cfg = model.config()?;
            let ctx = primes(&p)?;
            let delta = delta_a_bruteforce(&cfg, &ctx, m, budget)?;
            let value = json!({
                "config": cfg,
                "primes": ctx.to_string(),
                "m": m,
                "delta": delta.to_string(),
                "delta_value": delta.to_f64(),
            });
            eprintln!("Delta(m = {m}) = {delta}");
            emit_json(value, None)
        }
        Command::SieveVerify {
            d,
            m,
            degrees,
            n,
            a,
            len,
            budget,
        } => {
            let d = PTuple::parse(&d)?;
            let ctx = d.ctx().clone();
            let dist = match (degrees, n) {
                (Some(deg), None) => Distribution::uniform(&ctx, &deg, budget)?,
                (None, Some(n)) => reduction_distribution(&SamplerConfig::new(n, a, len, 0)?, &ctx, budget)?,
                _ => return Err(Failure::invalid("give exactly one of --degrees or --n")),
            };
            let report = verify_sieve_truncation(&dist, &d, m, budget)?;
            eprintln!(
                "exact {:.6} in [{:.6}, {:.6}], bound {:.6}: {}",
                report.exact,
                report.lower,
                report.upper,
                report.bound,
                if report.holds { "holds" } else { "VIOLATED" }
            );
            emit_json(serde_json::to_value(&report)?, None)
        }
        Command::SweepIrreducibility {
            ns,
            a,
            len,
            seed,
            primes: p,
            cyclotomic_bound,
            run,
        } => {
            let n0 = *ns.first().ok_or_else(|| Failure::invalid("no degrees given"))?;
            let cfg = SamplerConfig::new(n0, a, len, seed)?;
            let report = sweep_irreducibility(&cfg, &ns, &primes(&p)?, run.trials, cyclotomic_bound, run.jobs)?;
            for row in &report.rows {
                eprintln!(
                    "n = {:>5}: certified {:.4} [{:.4}, {:.4}], excess {:+.4}, Phi_2 {}",
                    row.n, row.estimate, row.ci_lo, row.ci_hi, row.excess, row.phi2_divides
                );
            }
            let value = serde_json::to_value(&report)?;
            match run.format {
                Format::Json => emit_json(value, Some(seed)),
                Format::Csv => {
                    let rows: Vec<CsvRow> = report
                        .rows
                        .iter()
                        .map(|r| CsvRow {
                            n: r.n,
                            estimate: r.estimate,
                            ci_lo: r.ci_lo,
                            ci_hi: r.ci_hi,
                            trials: r.trials,
                            seed: r.seed,
                        })
                        .collect();
                    emit_csv(&rows, &value, Some(seed))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

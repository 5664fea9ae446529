//! Random-polynomial experiments: sampling, exact probability oracles,
//! multi-prime irreducibility certificates and Monte Carlo statistics.

mod bits;
mod certify;
mod ddf;
mod experiments;
mod oracle;
mod report;
mod sampler;

pub use certify::{
    attainable_degrees, certify, Certificate, Certifier, Verdict, Witness, WitnessKind,
    DEFAULT_CYCLOTOMIC_BOUND,
};
pub use report::{wilson_interval, ExperimentReport, SCHEMA_VERSION, Z95, Z99};
pub use sampler::{sample_poly, SamplerConfig};
pub use oracle::{
    delta_a_bruteforce, exact_root_prob, reduction_distribution, root_value_law, RootValueLaw,
    DEFAULT_DP_BUDGET,
};
pub use experiments::{
    em_statistics, mc_cyclotomic, mc_factor_in_range, sweep_irreducibility, sweep_row_seed,
    EmReport, ExactCheck, SweepReport, SweepRow, XPowerDiagnostic, XPowerRow,
};

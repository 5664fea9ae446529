//! Finitely supported measures on `Z`, their Fourier transforms and the
//! near-uniformity conditions modulo a product of primes.

mod condition;
mod measure;

pub use condition::{
    check_master_condition, check_unifq_certificate, condition_bound, decide, min_s_for_condition,
    unifq_audit, unifq_bound, CaseRecord, ConditionReport, Outcome, UnifQAudit, UnifQCertificate,
    DECISION_SLACK, DEFAULT_R_BOUND,
};
pub use measure::{fourier_power_sum, Measure, UniformSegment, MASS_TOLERANCE};

//! Machinery for studying the irreducibility of random monic integer
//! polynomials through their reductions modulo several small primes.
//!
//! The crate is organised bottom-up:
//!
//! - [`ffpoly`]: arithmetic, irreducibility testing and factorization over
//!   prime fields, irreducible counting, cyclotomic polynomials over `Z`.
//! - [`pspace`]: the product space `F_{p_1}[X]^u x ... x F_{p_r}[X]^u` with
//!   component-wise multiplication, its divisor anatomy (friable parts,
//!   `tau`, `omega`), the spread `Delta_A(m)` and sieve verification.
//! - [`measures`]: finitely supported measures on `Z`, their Fourier
//!   transforms and near-uniformity conditions modulo products of primes.
//! - [`constants`]: closed-form constants (rate function, prime counts,
//!   segment-length thresholds, Rankin parameters, squarefree series).
//! - [`lab`]: sampling, exact probability oracles, multi-prime
//!   irreducibility certificates and Monte Carlo experiments.

pub mod constants;
pub mod error;
pub mod ffpoly;
pub mod lab;
pub mod measures;
pub mod pspace;

pub use error::{Error, Result};

/// Version string recorded in every experiment report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default cap on brute-force enumeration sizes (tuples, coefficient vectors).
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

//! The product space `F_{p_1}[X]^u x ... x F_{p_r}[X]^u` of tuples of monic
//! polynomials, multiplied and divided component-wise.

mod delta;
mod enumerate;
mod friable;
mod tuple;

pub use delta::{delta_spread, delta_spread_exact, verify_sieve_truncation, Distribution, SieveReport};
pub use enumerate::{divisors, enumerate_space, irreducibles_up_to, x_free_tuples, ProductIter};
pub use friable::{
    event_em, friable_profile, log_pi_m, pi_m, pi_m_exact, sigma_m, sigma_m_exact, EmOutcome,
    FriableProfile,
};
pub use tuple::{PIrreducible, PTuple, PrimeTuple};

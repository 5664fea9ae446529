//! Arithmetic over prime fields and exact integer polynomial helpers.

mod count;
mod cyclotomic;
mod factor;
mod frobenius;
mod intpoly;
mod monic;
mod poly;
mod prime;

pub use count::{
    count_irreducibles, count_irreducibles_u64, count_up_to, enumerate_irreducibles,
    enumerate_monic, irreducible_density,
};
pub use cyclotomic::{cyclotomic, cyclotomic_family, cyclotomic_indices};
pub use factor::{
    degree_pattern, distinct_degree, equal_degree_split, factor, factor_with_seed,
    is_irreducible, squarefree_decomposition, Factorization, TRIAL_SPLIT_LIMIT,
};
pub use frobenius::Frobenius;
pub use intpoly::{int_poly_rem, reduce_i64_monic, IntPoly};
pub use monic::MonicPoly;
pub use poly::FpPoly;
pub use prime::{divisors_u64, euler_phi, factor_u64, first_primes, is_prime, moebius, Prime};



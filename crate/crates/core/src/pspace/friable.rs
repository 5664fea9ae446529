use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::tuple::{tau_of, PTuple, PrimeTuple};
use crate::ffpoly::{count_irreducibles, irreducible_density, MonicPoly};

/// `Sigma_m`: sum of `1/||I||` over irreducibles of degree `<= m` other
/// than the `X_i`.
pub fn sigma_m(ctx: &PrimeTuple, m: usize) -> f64 {
    let mut acc = 0.0;
    for &p in ctx.primes() {
        // smallest terms first
        for k in (1..=m).rev() {
            acc += irreducible_density(p, k, true);
        }
    }
    acc
}

/// `Sigma_m` as an exact rational.
pub fn sigma_m_exact(ctx: &PrimeTuple, m: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for &p in ctx.primes() {
        for k in 1..=m {
            let num = BigInt::from(count_irreducibles(p, k, true));
            let den = BigInt::from(p.get()).pow(k as u32);
            acc += BigRational::new(num, den);
        }
    }
    acc
}

/// `log Pi_m`, where `Pi_m = prod (1 - 1/||I||)` over the same set.
pub fn log_pi_m(ctx: &PrimeTuple, m: usize) -> f64 {
    let mut acc = 0.0;
    for &p in ctx.primes() {
        let pf = p.get() as f64;
        for k in (1..=m).rev() {
            // count * log(1 - x) = density * log(1 - x) / x with x = p^-k
            let x = pf.powi(-(k as i32));
            let per_unit = if x == 0.0 { -1.0 } else { (-x).ln_1p() / x };
            acc += irreducible_density(p, k, true) * per_unit;
        }
    }
    acc
}

pub fn pi_m(ctx: &PrimeTuple, m: usize) -> f64 {
    log_pi_m(ctx, m).exp()
}

/// `Pi_m` as an exact rational; only sensible for small `m`.
pub fn pi_m_exact(ctx: &PrimeTuple, m: usize) -> BigRational {
    let mut acc = BigRational::one();
    for &p in ctx.primes() {
        for k in 1..=m {
            let q = BigInt::from(p.get()).pow(k as u32);
            let factor = BigRational::new(&q - 1, q);
            let e = count_irreducibles(p, k, true).to_usize().expect("count fits usize");
            acc *= num_traits::pow(factor, e);
        }
    }
    acc
}

fn serialize_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The split of a tuple into its `m`-friable part and the rest.
#[derive(Clone, Debug, Serialize)]
pub struct FriableProfile {
    pub m: usize,
    pub friable_part: PTuple,
    pub nonfriable_part: PTuple,
    pub sigma_m: f64,
    pub log_pi_m: f64,
    pub pi_m: f64,
    #[serde(serialize_with = "serialize_decimal")]
    pub tau_friable: BigUint,
    pub log_tau_friable: f64,
    pub omega_friable: usize,
    pub total_deg_friable: usize,
}

/// Routes every irreducible factor of degree `<= m` other than `X` to the
/// friable part and everything else (including all powers of `X`) to the
/// non-friable part.
pub fn friable_profile(a: &PTuple, m: usize) -> FriableProfile {
    let ctx = a.ctx();
    let mut friable: Vec<MonicPoly> = ctx.primes().iter().map(|&p| MonicPoly::one(p)).collect();
    let mut rest = friable.clone();
    let factors = a.factorize();
    let mut kept = Vec::new();
    for (irr, mult) in &factors {
        let power = irr.poly.pow(*mult);
        if !irr.is_x() && irr.degree() <= m {
            friable[irr.slot] = friable[irr.slot].mul(&power);
            kept.push((irr.clone(), *mult));
        } else {
            rest[irr.slot] = rest[irr.slot].mul(&power);
        }
    }
    let tau = tau_of(&kept);
    let log_tau = kept.iter().map(|(_, e)| ((e + 1) as f64).ln()).sum();
    let friable = PTuple::from_parts_unchecked(ctx.clone(), friable);
    let lp = log_pi_m(ctx, m);
    FriableProfile {
        m,
        total_deg_friable: friable.total_deg(),
        friable_part: friable,
        nonfriable_part: PTuple::from_parts_unchecked(ctx.clone(), rest),
        sigma_m: sigma_m(ctx, m),
        log_pi_m: lp,
        pi_m: lp.exp(),
        tau_friable: tau,
        log_tau_friable: log_tau,
        omega_friable: kept.len(),
    }
}

/// Outcome of the two inequalities defining `E_m`.
#[derive(Clone, Debug, Serialize)]
pub struct EmOutcome {
    pub holds: bool,
    pub degree_ok: bool,
    pub tau_ok: bool,
    pub degree_threshold: f64,
    pub log_tau_threshold: f64,
    pub profile: FriableProfile,
}

/// `Deg A_{<=m} <= m (Sigma_m - 2)` and `tau(A_{<=m}) <= exp((1 - 1/r) Sigma_m)`,
/// both non-strict.
pub fn event_em(a: &PTuple, m: usize) -> EmOutcome {
    let profile = friable_profile(a, m);
    let r = a.ctx().r() as f64;
    let degree_threshold = m as f64 * (profile.sigma_m - 2.0);
    let log_tau_threshold = (1.0 - 1.0 / r) * profile.sigma_m;
    let degree_ok = profile.total_deg_friable as f64 <= degree_threshold;
    let tau_ok = tau_at_most_exp(&profile.tau_friable, profile.log_tau_friable, log_tau_threshold);
    EmOutcome {
        holds: degree_ok && tau_ok,
        degree_ok,
        tau_ok,
        degree_threshold,
        log_tau_threshold,
        profile,
    }
}

/// `tau <= e^x` for an integer `tau`: exact against `floor(e^x)` while that
/// is representable, otherwise compared in log space.
pub(crate) fn tau_at_most_exp(tau: &BigUint, log_tau: f64, x: f64) -> bool {
    const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53
    let bound = x.exp();
    if bound < EXACT_LIMIT {
        *tau <= BigUint::from(bound.floor() as u64)
    } else {
        log_tau <= x
    }
}

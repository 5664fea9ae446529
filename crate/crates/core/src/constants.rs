//! Closed-form constants: the rate function `Q`, the exponent
//! `r Q((1 - 1/r)/log 2)`, primorials, the segment-length threshold `f(P)`,
//! the optimal Rankin parameters and the series `S_t`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffpoly::{first_primes, irreducible_density};
use crate::pspace::PrimeTuple;

/// `Q(t) = t log t - t + 1`, the integral of `log` from 1 to `t`.
pub fn q_of(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("Q(t) needs t > 0, got {t}")));
    }
    if t == 1.0 {
        return Ok(0.0);
    }
    Ok(t * t.ln() - t + 1.0)
}

/// `r Q((1 - 1/r) / log 2)`.
pub fn exponent(r: u32) -> f64 {
    assert!(r >= 1);
    let t = (1.0 - 1.0 / r as f64) / std::f64::consts::LN_2;
    r as f64 * q_of(t).expect("argument is positive for r >= 2")
}

/// Smallest `r >= 4` with `exponent(r) > c`.
pub fn min_r(c: f64) -> Result<u32> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::invalid(format!("C must be positive and finite, got {c}")));
    }
    let mut r = 4;
    while exponent(r) <= c {
        r += 1;
    }
    Ok(r)
}

/// Product of the first `r` primes.
pub fn primorial(r: usize) -> BigUint {
    assert!(r >= 1);
    first_primes(r).iter().map(|p| BigUint::from(p.get())).product()
}

/// `f(P) = P (log(P - 1) + 2) / (0.99 sqrt(P) - 1)`.
pub fn f_of(p: &BigUint) -> Result<f64> {
    if *p < BigUint::from(2u32) {
        return Err(Error::invalid("f(P) needs P >= 2"));
    }
    let pf = p.to_f64().unwrap();
    let pm1 = (p - 1u32).to_f64().unwrap();
    Ok(pf * (pm1.ln() + 2.0) / (0.99 * pf.sqrt() - 1.0))
}

/// Admissible `N0` values quoted for particular numbers of primes.
pub fn stated_n0(r: u32) -> Option<u64> {
    match r {
        4 => Some(35),
        12 => Some(100_000_000),
        _ => None,
    }
}

fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.collect_str(v),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "C_target")]
    pub c_target: f64,
    pub r: u32,
    pub exponent: f64,
    #[serde(rename = "P", serialize_with = "serialize_biguint")]
    pub p: BigUint,
    #[serde(rename = "f_P")]
    pub f_p: f64,
    /// `ceil(f(P))`.
    #[serde(rename = "N0")]
    pub n0: u64,
    /// Quoted admissible value for this `r`, when there is one. It is not
    /// required to equal `N0`.
    pub stated_n0: Option<u64>,
    pub stated_n0_at_least_f_p: Option<bool>,
    /// `s` for which segments of length `>= N0` satisfy the Fourier
    /// condition (through the segment bound with `s = 1`).
    pub s_hint: Option<u32>,
}

pub fn n0_for(c: f64) -> Result<ConstantsReport> {
    let r = min_r(c)?;
    let p = primorial(r as usize);
    let f_p = f_of(&p)?;
    let stated = stated_n0(r);
    Ok(ConstantsReport {
        c_target: c,
        r,
        exponent: exponent(r),
        p,
        f_p,
        n0: f_p.ceil() as u64,
        stated_n0: stated,
        stated_n0_at_least_f_p: stated.map(|s| s as f64 >= f_p),
        s_hint: Some(1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankinKind {
    /// `1 - log((1 - 1/r)/log 2)/log 2`.
    TauUpper,
    /// `log((1 - 1/r)/log 2)/log 2`.
    TauLower,
    /// `log u`.
    Omega,
}

/// Optimal Rankin parameter; `param` is `r` for the two `tau` kinds and
/// `u` for `Omega`.
pub fn rankin_t(kind: RankinKind, param: f64) -> Result<f64> {
    let t = match kind {
        RankinKind::TauUpper | RankinKind::TauLower => {
            if !(param >= 4.0) || param.fract() != 0.0 {
                return Err(Error::invalid(format!("r must be an integer >= 4, got {param}")));
            }
            let lower = ((1.0 - 1.0 / param) / std::f64::consts::LN_2).ln() / std::f64::consts::LN_2;
            if kind == RankinKind::TauLower {
                lower
            } else {
                1.0 - lower
            }
        }
        RankinKind::Omega => {
            if !(param > 1.0) || !param.is_finite() {
                return Err(Error::invalid(format!("u must exceed 1, got {param}")));
            }
            param.ln()
        }
    };
    if !(t > 0.0) {
        return Err(Error::invalid(format!("parameter {param} gives non-positive t = {t}")));
    }
    Ok(t)
}

/// A partial sum with a certified enclosure `[lower, upper]` of the full
/// series.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesValue {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub max_degree: usize,
    pub max_power: u32,
}

impl SeriesValue {
    pub fn value(&self) -> f64 {
        self.lower
    }

    pub fn error_bound(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `sum_{nu >= 2} (nu + 1)^t y^{nu - 2}` for `0 < y <= 1/2`, from above.
fn power_series_bound(t: f64, y: f64) -> f64 {
    let tp = t.max(0.0);
    let mut acc: f64 = 0.0;
    let mut nu = 2u32;
    loop {
        let term = ((nu + 1) as f64).powf(t) * y.powi(nu as i32 - 2);
        let rho = (((nu + 2) as f64) / ((nu + 1) as f64)).powf(tp) * y;
        if rho < 0.75 && term < 1e-18 * acc.max(1e-300) {
            return acc + term / (1.0 - rho);
        }
        acc += term;
        nu += 1;
    }
}

/// `S_t = sum_I sum_{nu >= 2} (nu + 1)^t / ||I||^nu` over every irreducible
/// of the product space, truncated to degrees `j <= max_degree` and powers
/// `nu <= max_power`, with a bound on the omitted terms.
///
/// Per prime, the count of degree-`j` irreducibles is at most `p^j`, so a
/// term is at most `(nu + 1)^t p^{-j(nu - 1)}`; geometric majorants of
/// these give the tail in `nu` and in `j`.
pub fn s_series_truncated(t: f64, ctx: &PrimeTuple, max_degree: usize, max_power: u32) -> SeriesValue {
    assert!(max_degree >= 1 && max_power >= 2);
    let tp = t.max(0.0);
    let mut partial = 0.0;
    let mut tail = 0.0;
    for &p in ctx.primes() {
        let pf = p.get() as f64;
        for j in (1..=max_degree).rev() {
            let dens = irreducible_density(p, j, false);
            let x = pf.powi(-(j as i32));
            for nu in (2..=max_power).rev() {
                partial += dens * ((nu + 1) as f64).powf(t) * x.powi(nu as i32 - 1);
            }
        }
        // nu > V for j <= J: first omitted term over (1 - ratio), with the
        // ratio taken at its worst case j = 1
        let v = max_power;
        let rho = (((v + 3) as f64) / ((v + 2) as f64)).powf(tp) / pf;
        if rho >= 1.0 {
            tail = f64::INFINITY;
            continue;
        }
        let first: f64 = (1..=max_degree)
            .map(|j| ((v + 2) as f64).powf(t) * pf.powi(-(j as i32) * v as i32))
            .sum();
        tail += first / (1.0 - rho);
        // j > J, all nu >= 2: y = p^-j, sum_nu (nu+1)^t y^{nu-1} <= y G(y_J)
        let y0 = pf.powi(-(max_degree as i32 + 1));
        let g = power_series_bound(t, y0);
        tail += g * y0 / (1.0 - 1.0 / pf);
    }
    SeriesValue {
        t,
        lower: partial,
        upper: partial + tail,
        max_degree,
        max_power,
    }
}

/// `S_t` to within `tol`: the returned enclosure has width at most `tol`.
pub fn s_series(t: f64, ctx: &PrimeTuple, tol: f64) -> Result<SeriesValue> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    let mut degree = 8usize;
    let mut power = 8u32;
    loop {
        let v = s_series_truncated(t, ctx, degree, power);
        if v.error_bound() <= tol {
            return Ok(v);
        }
        if degree > 1100 || power > 1_000_000 {
            return Err(Error::invalid(format!("cannot reach tolerance {tol} for t = {t}")));
        }
        degree += degree / 2;
        power += power / 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_examples() {
        assert_eq!(q_of(1.0).unwrap(), 0.0);
        assert!(q_of(0.0).is_err());
        assert!(q_of(-1.0).is_err());
        let t = (1.0 - 1.0 / 12.0) / std::f64::consts::LN_2;
        assert!((q_of(t).unwrap() - exponent(12) / 12.0).abs() < 1e-15);
        for i in 1..200 {
            let t = i as f64 / 20.0;
            if t != 1.0 {
                assert!(q_of(t).unwrap() > 0.0, "t = {t}");
            }
        }
    }

    /// Composite Simpson on `[a, b]` with `n` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn q_is_integral_of_log() {
        for i in 0..=99 {
            let t = 0.1 + i as f64 * 0.1;
            let integral = simpson(f64::ln, 1.0, t, 20_000);
            assert!((q_of(t).unwrap() - integral).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn min_r_values() {
        assert_eq!(min_r(0.01).unwrap(), 4);
        assert!(exponent(4) > 0.01 && exponent(4) < 0.014);
        assert_eq!(min_r(0.5).unwrap(), 12);
        assert!((0.56..0.57).contains(&exponent(12)));
        assert!(exponent(11) <= 0.5);
        assert_eq!(min_r(1e-9).unwrap(), 4);
        let mut last = 4;
        for i in 1..400 {
            let c = i as f64 * 0.01;
            let r = min_r(c).unwrap();
            assert!(r >= last);
            assert!(exponent(r) > c);
            if r > 4 {
                assert!(exponent(r - 1) <= c);
            }
            last = r;
        }
    }

    #[test]
    fn primorials() {
        assert_eq!(primorial(1), BigUint::from(2u32));
        assert_eq!(primorial(4), BigUint::from(210u32));
        assert_eq!(primorial(12), BigUint::from(7_420_738_134_810u64));
    }

    #[test]
    fn thresholds() {
        let half = n0_for(0.5).unwrap();
        assert_eq!(half.r, 12);
        assert!(half.f_p <= 1e8 && half.f_p > 8e7);
        assert!(half.n0 as f64 >= half.f_p);
        assert_eq!(half.stated_n0_at_least_f_p, Some(true));
        let small = n0_for(0.01).unwrap();
        assert_eq!((small.r, small.p.clone()), (4, BigUint::from(210u32)));
        assert_eq!(small.stated_n0, Some(35));
        assert!(small.n0 > 35);
        // f increases along a log grid
        let mut last = 0.0;
        for i in 0..400 {
            let p = (2.0f64 * 1.1f64.powi(i)).round() as u64;
            let v = f_of(&BigUint::from(p)).unwrap();
            assert!(v >= last, "P = {p}");
            last = v;
        }
    }

    #[test]
    fn rankin_values() {
        assert!((rankin_t(RankinKind::Omega, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        let lo = rankin_t(RankinKind::TauLower, 4.0).unwrap();
        assert!((lo - 0.1137).abs() < 1e-4);
        for r in 4..60 {
            let l = rankin_t(RankinKind::TauLower, r as f64).unwrap();
            let u = rankin_t(RankinKind::TauUpper, r as f64).unwrap();
            assert!((u - (1.0 - l)).abs() < 1e-15);
        }
        assert!(rankin_t(RankinKind::TauLower, 3.0).is_err());
        assert!(rankin_t(RankinKind::Omega, 1.0).is_err());
    }

    #[test]
    fn s_series_negative_t_vanishes() {
        let v = s_series(-50.0, &PrimeTuple::from_u64(&[2]).unwrap(), 1e-9).unwrap();
        assert!(v.upper < 1e-9);
    }

    #[test]
    fn s_series_t0_against_direct_sum() {
        // sum_j count(2, j) sum_{nu >= 2} 2^{-j nu} summed term by term
        let ctx = PrimeTuple::from_u64(&[2]).unwrap();
        let mut direct = 0.0;
        let mut terms = 0u64;
        for j in 1..=50usize {
            let count = crate::ffpoly::count_irreducibles_u64(ctx.get(0), j, false).unwrap() as f64;
            for nu in 2..=20_001u32 {
                direct += count * 2f64.powi(-((j as u32 * nu) as i32));
                terms += 1;
            }
        }
        assert!(terms >= 1_000_000);
        let v = s_series(0.0, &ctx, 1e-12).unwrap();
        assert!(v.lower - 1e-12 <= direct && direct <= v.upper + 1e-12, "{v:?} vs {direct}");
    }

    #[test]
    fn s_series_monotone_in_t_and_nested() {
        let ctx = PrimeTuple::from_u64(&[2, 3, 5]).unwrap();
        let tol = 1e-8;
        let mut last = s_series(-3.0, &ctx, tol).unwrap();
        for i in -5..=12 {
            let t = i as f64 * 0.5;
            let v = s_series(t, &ctx, tol).unwrap();
            assert!(last.value() <= v.value() + 2.0 * tol);
            last = v;
        }
        let coarse = s_series_truncated(1.5, &ctx, 6, 6);
        for (j, v) in [(6usize, 12u32), (12, 6), (20, 40)] {
            let fine = s_series_truncated(1.5, &ctx, j, v);
            assert!(fine.lower >= coarse.lower - 1e-15 && fine.upper <= coarse.upper + 1e-15);
        }
    }
}

//! Dense univariate polynomials over a prime field.
//!
//! Coefficients are stored in ascending degree order as canonical residues.
//! Products are accumulated lazily in `u64` and reduced only when the
//! accumulator could overflow, which for small primes means once per
//! product.

use std::fmt;

use super::prime::Prime;

/// A polynomial over `F_p`; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: Prime,
    coeffs: Vec<u32>,
}

/// How many products `(p-1)^2` may be added to a residue before a `u64`
/// accumulator can overflow.
#[inline]
pub(crate) fn lazy_limit(p: Prime) -> u64 {
    let pm1 = (p.as_u64() - 1).max(1);
    ((u64::MAX - p.as_u64()) / (pm1 * pm1)).max(1)
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Schoolbook product with lazy reduction; entries of the result are
/// canonical residues (stored widened for the reduction that follows).
pub(crate) fn mul_raw(a: &[u32], b: &[u32], p: Prime) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let pm = p.as_u64();
    let limit = lazy_limit(p);
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    let mut rows = 0u64;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        let ai = ai as u64;
        for (dst, &bj) in acc[i..i + b.len()].iter_mut().zip(b) {
            *dst += ai * bj as u64;
        }
        rows += 1;
        if rows == limit {
            acc.iter_mut().for_each(|v| *v %= pm);
            rows = 0;
        }
    }
    acc.iter_mut().for_each(|v| *v %= pm);
    acc
}

/// Reduces `acc` (entries below `p`) modulo the monic `f`, optionally
/// recording the quotient. Returns the normalized remainder.
pub(crate) fn rem_monic_raw(
    acc: &mut [u64],
    f: &[u32],
    p: Prime,
    mut quotient: Option<&mut Vec<u32>>,
) -> Vec<u32> {
    debug_assert_eq!(f.last(), Some(&1));
    let d = f.len() - 1;
    let pm = p.as_u64();
    if acc.len() > d {
        if let Some(q) = quotient.as_deref_mut() {
            q.clear();
            q.resize(acc.len() - d, 0);
        }
        let limit = lazy_limit(p);
        let mut rows = 0u64;
        for k in (d..acc.len()).rev() {
            let c = (acc[k] % pm) as u32;
            acc[k] = 0;
            if c == 0 {
                continue;
            }
            if let Some(q) = quotient.as_deref_mut() {
                q[k - d] = c;
            }
            let m = pm - c as u64;
            for (dst, &fj) in acc[k - d..k].iter_mut().zip(&f[..d]) {
                *dst += m * fj as u64;
            }
            rows += 1;
            if rows == limit {
                acc[..k].iter_mut().for_each(|v| *v %= pm);
                rows = 0;
            }
        }
    } else if let Some(q) = quotient {
        q.clear();
    }
    let keep = acc.len().min(d);
    let mut out: Vec<u32> = acc[..keep].iter().map(|&v| (v % pm) as u32).collect();
    trim(&mut out);
    out
}

impl FpPoly {
    pub fn zero(p: Prime) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: Prime) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }

    /// The indeterminate `X`.
    pub fn x(p: Prime) -> Self {
        FpPoly {
            p,
            coeffs: vec![0, 1],
        }
    }

    /// `X^k`.
    pub fn monomial(p: Prime, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        FpPoly { p, coeffs }
    }

    /// Builds a polynomial from arbitrary `u32` values, reducing them mod `p`.
    pub fn from_coeffs(p: Prime, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p.get();
        }
        trim(&mut coeffs);
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: Prime, coeffs: &[i64]) -> Self {
        let mut c: Vec<u32> = coeffs.iter().map(|&v| p.reduce_i64(v)).collect();
        trim(&mut c);
        FpPoly { p, coeffs: c }
    }

    /// Wraps residues already known to be canonical and trimmed.
    pub(crate) fn from_raw(p: Prime, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < p.get()));
        debug_assert!(coeffs.last() != Some(&0));
        FpPoly { p, coeffs }
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.p.add(self.coeff(i), other.coeff(i)));
        }
        trim(&mut c);
        FpPoly { p: self.p, coeffs: c }
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.p.sub(self.coeff(i), other.coeff(i)));
        }
        trim(&mut c);
        FpPoly { p: self.p, coeffs: c }
    }

    pub fn scale(&self, k: u32) -> FpPoly {
        let k = k % self.p.get();
        let mut c: Vec<u32> = self.coeffs.iter().map(|&v| self.p.mul(v, k)).collect();
        trim(&mut c);
        FpPoly { p: self.p, coeffs: c }
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let raw = mul_raw(&self.coeffs, &other.coeffs, self.p);
        let mut c: Vec<u32> = raw.into_iter().map(|v| v as u32).collect();
        trim(&mut c);
        FpPoly { p: self.p, coeffs: c }
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn make_monic(&self) -> FpPoly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.p.inv(self.lead()))
    }

    /// Division with remainder by a non-zero divisor.
    pub fn divrem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let lc = divisor.lead();
        let monic = divisor.make_monic();
        let mut acc: Vec<u64> = self.coeffs.iter().map(|&v| v as u64).collect();
        let mut q = Vec::new();
        let r = rem_monic_raw(&mut acc, &monic.coeffs, self.p, Some(&mut q));
        trim(&mut q);
        let q = FpPoly {
            p: self.p,
            coeffs: q,
        };
        // a = q * monic + r, monic = divisor / lc  =>  a = (q / lc) * divisor + r
        let q = if lc == 1 { q } else { q.scale(self.p.inv(lc)) };
        (q, FpPoly { p: self.p, coeffs: r })
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if divisor.is_monic() {
            return self.rem_monic(divisor);
        }
        self.rem_monic(&divisor.make_monic())
    }

    pub(crate) fn rem_monic(&self, f: &FpPoly) -> FpPoly {
        if self.coeffs.len() < f.coeffs.len() {
            return self.clone();
        }
        let mut acc: Vec<u64> = self.coeffs.iter().map(|&v| v as u64).collect();
        let r = rem_monic_raw(&mut acc, &f.coeffs, self.p, None);
        FpPoly {
            p: self.p,
            coeffs: r,
        }
    }

    /// `self * other mod f` for monic `f`.
    pub fn mul_mod(&self, other: &FpPoly, f: &FpPoly) -> FpPoly {
        let mut raw = mul_raw(&self.coeffs, &other.coeffs, self.p);
        let r = rem_monic_raw(&mut raw, &f.coeffs, self.p, None);
        FpPoly {
            p: self.p,
            coeffs: r,
        }
    }

    /// `self^exp mod f` for monic `f`.
    pub fn pow_mod(&self, mut exp: u64, f: &FpPoly) -> FpPoly {
        let mut base = self.rem_monic(f);
        let mut acc = FpPoly::one(self.p).rem_monic(f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, f);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, f);
            }
        }
        acc
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (self.clone(), other.make_monic())
        } else {
            (other.clone(), self.make_monic())
        };
        while !b.is_zero() {
            let r = a.rem_monic(&b);
            a = b;
            b = r.make_monic();
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> FpPoly {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let mut c: Vec<u32> = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &v)| self.p.mul(v, ((i + 1) as u64 % self.p.as_u64()) as u32))
            .collect();
        trim(&mut c);
        FpPoly { p: self.p, coeffs: c }
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.p.add(self.p.mul(acc, x), c))
    }
}

impl fmt::Display for FpPoly {
    /// Ascending comma-separated coefficients; the zero polynomial prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

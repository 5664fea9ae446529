//! Polynomials over `Z` with arbitrary-precision coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monic::MonicPoly;
use super::poly::FpPoly;
use super::prime::Prime;
use crate::error::{Error, Result};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `X^d - 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut c = vec![BigInt::zero(); d + 1];
        c[0] = BigInt::from(-1);
        c[d] += 1;
        Self::new(c)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as `i64`, if they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        IntPoly::new(c)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        IntPoly::new(c)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Division by a monic divisor: `(quotient, remainder)`.
    pub fn divrem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !divisor.is_monic() {
            return Err(Error::NotMonic);
        }
        let db = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let lead = std::mem::take(&mut r[i]);
            if lead.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs[..db].iter().enumerate() {
                if !b.is_zero() {
                    r[i - db + j] -= &lead * b;
                }
            }
            q[i - db] = lead;
        }
        r.truncate(db);
        Ok((IntPoly::new(q), IntPoly::new(r)))
    }

    /// Exact quotient `self / divisor`; errors unless the remainder is zero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.divrem_monic(divisor)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(q)
    }

    /// Reduction modulo `p` of a monic polynomial.
    pub fn reduce_mod(&self, p: Prime) -> Result<MonicPoly> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let pb = BigInt::from(p.get());
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u32().unwrap())
            .collect();
        Ok(MonicPoly::from_poly_unchecked(FpPoly::from_raw(p, coeffs)))
    }
}

/// Remainder of `a` divided by the monic polynomial `b` of degree >= 1.
pub fn int_poly_rem(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    match b.degree() {
        Some(d) if d >= 1 => {}
        _ => {
            return Err(Error::DegreeTooSmall {
                min: 1,
                got: b.degree().unwrap_or(0),
            })
        }
    }
    Ok(a.divrem_monic(b)?.1)
}

impl fmt::Display for IntPoly {
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

/// Monic reduction of an `i64` coefficient vector (leading entry must be 1).
pub fn reduce_i64_monic(coeffs: &[i64], p: Prime) -> Result<MonicPoly> {
    if coeffs.last() != Some(&1) {
        return Err(Error::NotMonic);
    }
    let c = coeffs.iter().map(|&v| p.reduce_i64(v)).collect();
    Ok(MonicPoly::from_poly_unchecked(FpPoly::from_raw(p, c)))
}

impl IntPoly {
    /// Sign-aware height: the largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

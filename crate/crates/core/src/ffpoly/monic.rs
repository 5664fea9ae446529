use std::cmp::Ordering;
use std::fmt;

use super::poly::FpPoly;
use super::prime::Prime;
use crate::error::{Error, Result};

/// A monic polynomial over `F_p`. The unit polynomial `1` (degree 0) is a
/// regular value: it is the empty product and the identity of the
/// component-wise product spaces built on top of this type.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonicPoly(FpPoly);

impl MonicPoly {
    pub fn new(poly: FpPoly) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::NotMonic);
        }
        Ok(MonicPoly(poly))
    }

    /// Builds from residues; `coeffs` must end in a leading coefficient
    /// congruent to 1.
    pub fn from_coeffs(p: Prime, coeffs: Vec<u32>) -> Result<Self> {
        Self::new(FpPoly::from_coeffs(p, coeffs))
    }

    pub(crate) fn from_poly_unchecked(poly: FpPoly) -> Self {
        debug_assert!(poly.is_monic());
        MonicPoly(poly)
    }

    pub fn one(p: Prime) -> Self {
        MonicPoly(FpPoly::one(p))
    }

    pub fn x(p: Prime) -> Self {
        MonicPoly(FpPoly::x(p))
    }

    /// `X + c`.
    pub fn linear(p: Prime, c: u32) -> Self {
        MonicPoly(FpPoly::from_coeffs(p, vec![c, 1]))
    }

    /// Parses the ascending text form `c0,c1,...,cn` (values reduced mod p).
    pub fn parse(text: &str, p: Prime) -> Result<Self> {
        let coeffs = parse_i64_list(text)?;
        let poly = FpPoly::from_i64(p, &coeffs);
        if coeffs.is_empty() || !poly.is_monic() || poly.degree() != Some(coeffs.len() - 1) {
            return Err(Error::NotMonic);
        }
        Ok(MonicPoly(poly))
    }

    #[inline]
    pub fn poly(&self) -> &FpPoly {
        &self.0
    }

    pub fn into_poly(self) -> FpPoly {
        self.0
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.0.modulus()
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.coeffs().len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        self.0.coeffs()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_x(&self) -> bool {
        self.0.coeffs() == [0, 1]
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        MonicPoly(self.0.mul(&other.0))
    }

    pub fn pow(&self, e: u32) -> MonicPoly {
        let mut acc = MonicPoly::one(self.modulus());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divides(&self, other: &MonicPoly) -> bool {
        self.degree() <= other.degree() && other.0.rem_monic(&self.0).is_zero()
    }

    /// Exact quotient `other / self`, if `self` divides `other`.
    pub fn divide_into(&self, other: &MonicPoly) -> Option<MonicPoly> {
        if self.degree() > other.degree() {
            return None;
        }
        let (q, r) = other.0.divrem(&self.0);
        r.is_zero().then(|| MonicPoly(q))
    }

    pub fn gcd(&self, other: &MonicPoly) -> MonicPoly {
        MonicPoly(self.0.gcd(&other.0))
    }
}

impl Ord for MonicPoly {
    /// Canonical order: modulus, then degree, then coefficients compared from
    /// the highest non-leading one down to the constant term (so within a
    /// degree the order is numeric in base `p`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus()
            .cmp(&other.modulus())
            .then(self.degree().cmp(&other.degree()))
            .then_with(|| self.coeffs().iter().rev().cmp(other.coeffs().iter().rev()))
    }
}

impl PartialOrd for MonicPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn parse_i64_list(text: &str) -> Result<Vec<i64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty coefficient list".into()));
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("coefficient {t:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = MonicPoly::parse("1,1,1", p(2)).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "1,1,1");
        assert_eq!(MonicPoly::parse("1", p(3)).unwrap(), MonicPoly::one(p(3)));
        assert_eq!(MonicPoly::parse("-1,4", p(3)).unwrap().coeffs(), &[2, 1]);
        assert_eq!(MonicPoly::parse("1,2", p(3)), Err(Error::NotMonic));
        // leading coefficient vanishing mod p is not monic of the stated degree
        assert_eq!(MonicPoly::parse("1,1,3", p(3)), Err(Error::NotMonic));
        assert!(MonicPoly::parse("1,x", p(3)).is_err());
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![
            MonicPoly::parse("0,1,1", p(3)).unwrap(),
            MonicPoly::parse("2,0,1", p(3)).unwrap(),
            MonicPoly::parse("1,1", p(3)).unwrap(),
            MonicPoly::parse("1", p(3)).unwrap(),
        ];
        v.sort();
        let s: Vec<String> = v.iter().map(|f| f.to_string()).collect();
        assert_eq!(s, ["1", "1,1", "2,0,1", "0,1,1"]);
    }

    #[test]
    fn divisibility() {
        let a = MonicPoly::parse("0,0,1", p(2)).unwrap();
        let x = MonicPoly::x(p(2));
        assert!(x.divides(&a));
        assert_eq!(x.divide_into(&a), Some(x.clone()));
        assert!(MonicPoly::one(p(2)).divides(&a));
        assert!(!MonicPoly::linear(p(2), 1).divides(&a));
    }
}

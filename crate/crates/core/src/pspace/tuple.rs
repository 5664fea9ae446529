use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffpoly::{factor, first_primes, MonicPoly, Prime};

/// Distinct primes `p_1 < ... < p_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeTuple {
    primes: Vec<Prime>,
}

impl PrimeTuple {
    /// Sorts the primes; rejects an empty list and repeated primes.
    pub fn new(mut primes: Vec<Prime>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::invalid("prime tuple must contain at least one prime"));
        }
        primes.sort();
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("primes in a tuple must be distinct"));
        }
        Ok(PrimeTuple { primes })
    }

    pub fn from_u64(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Prime::new(v)).collect::<Result<_>>()?)
    }

    /// The `r` smallest primes.
    pub fn first(r: usize) -> Self {
        assert!(r >= 1);
        PrimeTuple {
            primes: first_primes(r),
        }
    }

    /// Parses `"2,3,5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("prime {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_u64(&values)
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.primes.len()
    }

    #[inline]
    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    #[inline]
    pub fn get(&self, i: usize) -> Prime {
        self.primes[i]
    }

    pub fn product(&self) -> BigUint {
        self.primes.iter().map(|p| BigUint::from(p.get())).product()
    }

    /// Position of `p` in the tuple.
    pub fn slot_of(&self, p: Prime) -> Option<usize> {
        self.primes.iter().position(|&q| q == p)
    }
}

impl fmt::Display for PrimeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl Serialize for PrimeTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.primes.serialize(s)
    }
}

/// An element of the product space: one monic polynomial per prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PTuple {
    ctx: PrimeTuple,
    components: Vec<MonicPoly>,
}

impl PTuple {
    pub fn new(ctx: PrimeTuple, components: Vec<MonicPoly>) -> Result<Self> {
        if components.len() != ctx.r() {
            return Err(Error::ContextMismatch(format!(
                "{} components for {} primes",
                components.len(),
                ctx.r()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.modulus() != ctx.get(i) {
                return Err(Error::ContextMismatch(format!(
                    "component {i} is over F_{} but slot prime is {}",
                    c.modulus(),
                    ctx.get(i)
                )));
            }
        }
        Ok(PTuple { ctx, components })
    }

    pub(crate) fn from_parts_unchecked(ctx: PrimeTuple, components: Vec<MonicPoly>) -> Self {
        debug_assert!(components.len() == ctx.r());
        PTuple { ctx, components }
    }

    pub fn unit(ctx: &PrimeTuple) -> Self {
        let components = ctx.primes().iter().map(|&p| MonicPoly::one(p)).collect();
        PTuple {
            ctx: ctx.clone(),
            components,
        }
    }

    /// The tuple with `poly` in `slot` and units elsewhere.
    pub fn single(ctx: &PrimeTuple, slot: usize, poly: MonicPoly) -> Result<Self> {
        let mut t = Self::unit(ctx);
        if poly.modulus() != ctx.get(slot) {
            return Err(Error::ContextMismatch(format!("slot {slot} expects F_{}", ctx.get(slot))));
        }
        t.components[slot] = poly;
        Ok(t)
    }

    /// `X_i`: `X` in slot `i`.
    pub fn x_slot(ctx: &PrimeTuple, slot: usize) -> Self {
        let mut t = Self::unit(ctx);
        t.components[slot] = MonicPoly::x(ctx.get(slot));
        t
    }

    /// Parses `"p=2,3|1,1,1;1,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let body = text
            .strip_prefix("p=")
            .ok_or_else(|| Error::Parse("tuple text must start with \"p=\"".into()))?;
        let (primes, comps) = body
            .split_once('|')
            .ok_or_else(|| Error::Parse("missing '|' after prime list".into()))?;
        let values = primes
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("prime {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let comps: Vec<&str> = comps.split(';').collect();
        if comps.len() != values.len() {
            return Err(Error::Parse(format!(
                "{} components for {} primes",
                comps.len(),
                values.len()
            )));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("primes must be strictly increasing".into()));
        }
        let ctx = PrimeTuple::from_u64(&values)?;
        let components = comps
            .iter()
            .zip(ctx.primes())
            .map(|(c, &p)| MonicPoly::parse(c, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, components)
    }

    #[inline]
    pub fn ctx(&self) -> &PrimeTuple {
        &self.ctx
    }

    #[inline]
    pub fn components(&self) -> &[MonicPoly] {
        &self.components
    }

    #[inline]
    pub fn component(&self, i: usize) -> &MonicPoly {
        &self.components[i]
    }

    pub fn is_unit(&self) -> bool {
        self.components.iter().all(|c| c.is_one())
    }

    pub fn deg_vec(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree()).collect()
    }

    pub fn total_deg(&self) -> usize {
        self.components.iter().map(|c| c.degree()).sum()
    }

    pub fn max_deg(&self) -> usize {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    /// `prod p_i^{deg A_i}`.
    pub fn norm(&self) -> BigUint {
        self.components
            .iter()
            .zip(self.ctx.primes())
            .fold(BigUint::one(), |acc, (c, p)| acc * BigUint::from(p.get()).pow(c.degree() as u32))
    }

    fn assert_same_ctx(&self, other: &PTuple) {
        assert_eq!(self.ctx, other.ctx, "tuples over different prime contexts");
    }

    /// Component-wise product.
    ///
    /// # Panics
    /// If the prime contexts differ.
    pub fn mul(&self, other: &PTuple) -> PTuple {
        self.assert_same_ctx(other);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul(b))
            .collect();
        PTuple {
            ctx: self.ctx.clone(),
            components,
        }
    }

    /// Whether `self` divides `a` component-wise.
    ///
    /// # Panics
    /// If the prime contexts differ.
    pub fn divides(&self, a: &PTuple) -> bool {
        self.assert_same_ctx(a);
        self.components
            .iter()
            .zip(&a.components)
            .all(|(d, c)| d.divides(c))
    }

    /// `self / d`.
    pub fn quotient(&self, d: &PTuple) -> Result<PTuple> {
        if self.ctx != d.ctx {
            return Err(Error::ContextMismatch("quotient across prime contexts".into()));
        }
        let components = d
            .components
            .iter()
            .zip(&self.components)
            .map(|(di, ai)| di.divide_into(ai).ok_or(Error::NotDivisible))
            .collect::<Result<Vec<_>>>()?;
        Ok(PTuple {
            ctx: self.ctx.clone(),
            components,
        })
    }

    /// Slot-tagged irreducible factors with multiplicities, ordered by slot
    /// and then canonically within each slot.
    pub fn factorize(&self) -> Vec<(PIrreducible, u32)> {
        let mut out = Vec::new();
        for (slot, c) in self.components.iter().enumerate() {
            for (poly, m) in factor(c).factors() {
                out.push((
                    PIrreducible {
                        slot,
                        poly: poly.clone(),
                    },
                    *m,
                ));
            }
        }
        out
    }

    /// Number of divisors, `prod (nu_I + 1)`.
    pub fn tau(&self) -> BigUint {
        tau_of(&self.factorize())
    }

    /// Number of distinct irreducible factors.
    pub fn omega(&self) -> usize {
        self.factorize().len()
    }

    /// Multiplicity of `irr` in `self`.
    pub fn nu(&self, irr: &PIrreducible) -> u32 {
        let mut rest = self.components[irr.slot].clone();
        let mut k = 0;
        while let Some(q) = irr.poly.divide_into(&rest) {
            rest = q;
            k += 1;
        }
        k
    }
}

pub(crate) fn tau_of(factors: &[(PIrreducible, u32)]) -> BigUint {
    factors
        .iter()
        .fold(BigUint::one(), |acc, (_, m)| acc * BigUint::from(m + 1))
}

impl fmt::Display for PTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "p={}|{}", self.ctx, comps.join(";"))
    }
}

impl Serialize for PTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An irreducible of the product space: `poly` in `slot`, units elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PIrreducible {
    pub slot: usize,
    pub poly: MonicPoly,
}

impl PIrreducible {
    pub fn is_x(&self) -> bool {
        self.poly.is_x()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn to_tuple(&self, ctx: &PrimeTuple) -> PTuple {
        PTuple::single(ctx, self.slot, self.poly.clone()).expect("irreducible matches its slot")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(text: &str) -> PTuple {
        PTuple::parse(text).unwrap()
    }

    #[test]
    fn degrees_and_norms() {
        let ctx = PrimeTuple::from_u64(&[2, 3]).unwrap();
        let u = PTuple::unit(&ctx);
        assert_eq!((u.deg_vec(), u.total_deg(), u.norm()), (vec![0, 0], 0, BigUint::one()));
        let a = t("p=2,3|1,1,1;1,1");
        assert_eq!(a.deg_vec(), vec![2, 1]);
        assert_eq!(a.total_deg(), 3);
        assert_eq!(a.norm(), BigUint::from(12u32));
        assert_eq!(a.to_string(), "p=2,3|1,1,1;1,1");
    }

    #[test]
    fn parse_errors() {
        assert!(PTuple::parse("2,3|1;1").is_err());
        assert!(PTuple::parse("p=2,3|1").is_err());
        assert!(PTuple::parse("p=3,2|1;1").is_err());
        assert!(PTuple::parse("p=2,4|1;1").is_err());
        assert!(PTuple::parse("p=2|1,2").is_err());
        assert!(PrimeTuple::from_u64(&[3, 3]).is_err());
        assert_eq!(PrimeTuple::from_u64(&[5, 2]).unwrap().to_string(), "2,5");
    }

    #[test]
    fn divisibility() {
        let ctx = PrimeTuple::from_u64(&[2, 3]).unwrap();
        let a = t("p=2,3|0,0,1;1,1");
        let d = t("p=2,3|0,1;1");
        assert!(PTuple::unit(&ctx).divides(&a));
        assert!(d.divides(&a));
        assert_eq!(a.quotient(&a).unwrap(), PTuple::unit(&ctx));
        assert_eq!(a.quotient(&d).unwrap().mul(&d), a);
        assert_eq!(d.quotient(&a), Err(Error::NotDivisible));
    }

    #[test]
    fn tau_omega_nu() {
        let ctx = PrimeTuple::from_u64(&[2, 3]).unwrap();
        let u = PTuple::unit(&ctx);
        assert_eq!((u.tau(), u.omega()), (BigUint::one(), 0));
        let a = t("p=2,3|0,1,1;1,1");
        assert_eq!((a.tau(), a.omega()), (BigUint::from(8u32), 3));
        let b = t("p=2,3|0,0,1;1");
        assert_eq!(b.tau(), BigUint::from(3u32));
        let x1 = PIrreducible {
            slot: 0,
            poly: MonicPoly::x(ctx.get(0)),
        };
        assert_eq!(b.nu(&x1), 2);
        assert_eq!(a.nu(&x1), 1);
        assert_eq!(u.nu(&x1), 0);
    }
}

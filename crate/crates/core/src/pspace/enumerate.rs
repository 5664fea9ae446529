use num_bigint::BigUint;

use super::tuple::{PIrreducible, PTuple, PrimeTuple};
use crate::error::{Error, Result};
use crate::ffpoly::{enumerate_irreducibles, enumerate_monic, MonicPoly};

/// Iterator over a Cartesian product of per-slot candidate lists. The first
/// slot varies slowest, each slot in the order of its list.
#[derive(Debug)]
pub struct ProductIter {
    ctx: PrimeTuple,
    lists: Vec<Vec<MonicPoly>>,
    index: Vec<usize>,
    done: bool,
}

impl ProductIter {
    fn new(ctx: PrimeTuple, lists: Vec<Vec<MonicPoly>>) -> Self {
        let done = lists.iter().any(|l| l.is_empty());
        let index = vec![0; lists.len()];
        ProductIter {
            ctx,
            lists,
            index,
            done,
        }
    }

    /// Number of elements not yet produced, counting from the start.
    pub fn total(&self) -> u128 {
        self.lists.iter().map(|l| l.len() as u128).product()
    }
}

impl Iterator for ProductIter {
    type Item = PTuple;

    fn next(&mut self) -> Option<PTuple> {
        if self.done {
            return None;
        }
        let comps = self
            .index
            .iter()
            .zip(&self.lists)
            .map(|(&i, l)| l[i].clone())
            .collect();
        let out = PTuple::from_parts_unchecked(self.ctx.clone(), comps);
        let mut slot = self.lists.len();
        loop {
            if slot == 0 {
                self.done = true;
                break;
            }
            slot -= 1;
            self.index[slot] += 1;
            if self.index[slot] < self.lists[slot].len() {
                break;
            }
            self.index[slot] = 0;
        }
        Some(out)
    }
}

fn check(what: &str, needed: BigUint, budget: u64) -> Result<()> {
    if needed > BigUint::from(budget) {
        return Err(Error::budget(what, needed, budget));
    }
    Ok(())
}

/// Every tuple with degree vector `d`: `prod p_i^{d_i}` elements.
pub fn enumerate_space(ctx: &PrimeTuple, d: &[usize], budget: u64) -> Result<ProductIter> {
    if d.len() != ctx.r() {
        return Err(Error::ContextMismatch(format!(
            "degree vector of length {} for {} primes",
            d.len(),
            ctx.r()
        )));
    }
    let size: BigUint = ctx
        .primes()
        .iter()
        .zip(d)
        .map(|(p, &k)| BigUint::from(p.get()).pow(k as u32))
        .product();
    check(&format!("space with degrees {d:?}"), size, budget)?;
    let lists = ctx
        .primes()
        .iter()
        .zip(d)
        .map(|(&p, &k)| enumerate_monic(p, k, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductIter::new(ctx.clone(), lists))
}

/// All divisors of `a`, each exactly once.
pub fn divisors(a: &PTuple, budget: u64) -> Result<Vec<PTuple>> {
    let factors = a.factorize();
    check("divisors", super::tuple::tau_of(&factors), budget)?;
    let ctx = a.ctx();
    let mut out = vec![PTuple::unit(ctx)];
    for (irr, mult) in &factors {
        let base = irr.to_tuple(ctx);
        let mut next = Vec::with_capacity(out.len() * (*mult as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*mult {
                cur = cur.mul(&base);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    Ok(out)
}

/// Monic polynomials over `F_p` of degree `<= m` not divisible by `X`,
/// the unit first.
pub(crate) fn x_free_up_to(p: crate::ffpoly::Prime, m: usize, budget: u64) -> Result<Vec<MonicPoly>> {
    let mut out = vec![MonicPoly::one(p)];
    for k in 1..=m {
        out.extend(enumerate_monic(p, k, budget)?.into_iter().filter(|f| f.coeffs()[0] != 0));
    }
    Ok(out)
}

/// Tuples free of every `X_i` whose components all have degree `<= m`;
/// there are `prod p_i^m` of them.
pub fn x_free_tuples(ctx: &PrimeTuple, m: usize, budget: u64) -> Result<ProductIter> {
    let size: BigUint = ctx
        .primes()
        .iter()
        .map(|p| BigUint::from(p.get()).pow(m as u32))
        .product();
    check(&format!("X-free tuples of max degree {m}"), size, budget)?;
    let lists = ctx
        .primes()
        .iter()
        .map(|&p| x_free_up_to(p, m, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductIter::new(ctx.clone(), lists))
}

/// `I_m`: irreducibles of degree `<= m` other than the `X_i`, by slot.
pub fn irreducibles_up_to(ctx: &PrimeTuple, m: usize, budget: u64) -> Result<Vec<PIrreducible>> {
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    for (slot, &p) in ctx.primes().iter().enumerate() {
        for poly in enumerate_irreducibles(p, m, true, budget)? {
            out.push(PIrreducible { slot, poly });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn space_sizes() {
        let c = PrimeTuple::from_u64(&[2]).unwrap();
        let v: Vec<String> = enumerate_space(&c, &[2], 1 << 20).unwrap().map(|t| t.to_string()).collect();
        assert_eq!(v, ["p=2|0,0,1", "p=2|1,0,1", "p=2|0,1,1", "p=2|1,1,1"]);
        let c = PrimeTuple::from_u64(&[2, 3]).unwrap();
        let all: Vec<PTuple> = enumerate_space(&c, &[3, 2], 1 << 20).unwrap().collect();
        assert_eq!(all.len(), 8 * 9);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 72);
        assert!(all.iter().all(|t| t.deg_vec() == [3, 2] && t.norm() == BigUint::from(72u32)));
        assert!(enumerate_space(&c, &[20, 20], 1 << 20).unwrap_err().is_budget());
    }

    #[test]
    fn divisors_of_unit_and_small() {
        let c = PrimeTuple::from_u64(&[2, 3]).unwrap();
        assert_eq!(divisors(&PTuple::unit(&c), 10).unwrap(), vec![PTuple::unit(&c)]);
        let a = PTuple::parse("p=2,3|0,0,1,1;2,0,1").unwrap();
        let ds = divisors(&a, 1000).unwrap();
        assert_eq!(BigUint::from(ds.len()), a.tau());
        assert!(ds.iter().all(|d| d.divides(&a)));
        assert_eq!(ds.iter().collect::<HashSet<_>>().len(), ds.len());
    }

    #[test]
    fn x_free_counts() {
        let c = PrimeTuple::from_u64(&[2, 3]).unwrap();
        let v: Vec<PTuple> = x_free_tuples(&c, 2, 1 << 20).unwrap().collect();
        assert_eq!(v.len(), 4 * 9);
        let im = irreducibles_up_to(&c, 2, 1 << 20).unwrap();
        assert_eq!(im.len(), 2 + 5);
    }
}

//! Cyclotomic polynomials over `Z`.

use std::collections::BTreeMap;

use super::intpoly::IntPoly;
use super::prime::{divisors_u64, euler_phi};

/// `Phi_d`, obtained by dividing `X^d - 1` exactly by `Phi_e` for every
/// proper divisor `e` of `d`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    cyclotomic_family(d).remove(&d).unwrap()
}

/// `Phi_e` for every divisor `e` of `d`, keyed by `e`.
pub fn cyclotomic_family(d: u64) -> BTreeMap<u64, IntPoly> {
    let mut table: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for e in divisors_u64(d) {
        let mut phi = IntPoly::x_pow_minus_one(e as usize);
        for f in divisors_u64(e) {
            if f < e {
                phi = phi
                    .div_exact(&table[&f])
                    .expect("cyclotomic factors divide X^e - 1");
            }
        }
        table.insert(e, phi);
    }
    table
}

/// All `d` with `phi(d) <= bound`, ascending.
///
/// `phi(d) >= sqrt(d / 2)`, so no index beyond `2 bound^2` qualifies.
pub fn cyclotomic_indices(bound: u64) -> Vec<u64> {
    let limit = 2 * bound * bound + 2;
    (1..=limit).filter(|&d| euler_phi(d) <= bound).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        // first index with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic(105).coeffs().iter().any(|c| *c == (-2).into()));
    }

    #[test]
    fn degrees_sum_to_index() {
        for d in 1..=200u64 {
            let fam = cyclotomic_family(d);
            let total: usize = fam.values().map(|f| f.degree().unwrap()).sum();
            assert_eq!(total, d as usize, "d = {d}");
            assert_eq!(fam[&d].degree().unwrap() as u64, euler_phi(d));
        }
    }

    #[test]
    fn divides_x_pow_minus_one() {
        for d in 1..=60u64 {
            let r = super::super::intpoly::int_poly_rem(&IntPoly::x_pow_minus_one(d as usize), &cyclotomic(d)).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn indices_by_totient() {
        assert_eq!(cyclotomic_indices(1), vec![1, 2]);
        assert_eq!(cyclotomic_indices(2), vec![1, 2, 3, 4, 6]);
        let sixteen = cyclotomic_indices(16);
        assert_eq!(*sixteen.last().unwrap(), 60);
        assert!(sixteen.iter().all(|&d| euler_phi(d) <= 16));
    }
}

use super::poly::{lazy_limit, rem_monic_raw, FpPoly};
use super::prime::Prime;

/// The map `h -> h^p mod f` for a fixed monic `f` of degree >= 1.
///
/// For small `p` relative to `deg f` the map is applied as a matrix whose
/// rows are `X^{p j} mod f`; building it costs `O(p d^2)` and each
/// application `O(d^2)`. Otherwise `h^p` is computed by square-and-multiply.
#[derive(Clone, Debug)]
pub struct Frobenius {
    modulus: FpPoly,
    rows: Option<Vec<Vec<u32>>>,
}

impl Frobenius {
    pub fn new(f: &FpPoly) -> Self {
        assert!(f.is_monic() && f.degree().unwrap_or(0) >= 1);
        let p = f.modulus();
        let d = f.degree().unwrap();
        let use_matrix = (p.get() as usize) <= 2 * d.max(16);
        let rows = use_matrix.then(|| build_rows(f, p, d));
        Frobenius {
            modulus: f.clone(),
            rows,
        }
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// `h^p mod f`; `h` must already be reduced mod `f`.
    pub fn apply(&self, h: &FpPoly) -> FpPoly {
        let p = self.modulus.modulus();
        match &self.rows {
            None => h.pow_mod(p.as_u64(), &self.modulus),
            Some(rows) => {
                let d = self.modulus.degree().unwrap();
                debug_assert!(h.coeffs().len() <= d);
                let pm = p.as_u64();
                let limit = lazy_limit(p);
                let mut acc = vec![0u64; d];
                let mut count = 0u64;
                for (&hj, row) in h.coeffs().iter().zip(rows) {
                    if hj == 0 {
                        continue;
                    }
                    let hj = hj as u64;
                    for (dst, &r) in acc.iter_mut().zip(row) {
                        *dst += hj * r as u64;
                    }
                    count += 1;
                    if count == limit {
                        acc.iter_mut().for_each(|v| *v %= pm);
                        count = 0;
                    }
                }
                let coeffs: Vec<u32> = acc.into_iter().map(|v| (v % pm) as u32).collect();
                FpPoly::from_coeffs(p, coeffs)
            }
        }
    }

    /// `X^{p^k} mod f`.
    pub fn x_power(&self, k: usize) -> FpPoly {
        let mut h = FpPoly::x(self.modulus.modulus()).rem(&self.modulus);
        for _ in 0..k {
            h = self.apply(&h);
        }
        h
    }
}

fn build_rows(f: &FpPoly, p: Prime, d: usize) -> Vec<Vec<u32>> {
    let step = p.get() as usize;
    let mut rows = Vec::with_capacity(d);
    let mut cur = FpPoly::one(p).rem(f).into_coeffs();
    for _ in 0..d {
        let mut next = vec![0u64; cur.len() + step];
        for (i, &c) in cur.iter().enumerate() {
            next[i + step] = c as u64;
        }
        let reduced = rem_monic_raw(&mut next, f.coeffs(), p, None);
        let mut padded = cur;
        padded.resize(d, 0);
        rows.push(padded);
        cur = reduced;
    }
    rows
}

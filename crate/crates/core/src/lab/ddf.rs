//! Incremental distinct-degree factorization across several primes.
//!
//! Deciding whether the attainable factor degrees of the reductions
//! `A mod p_i` share an element of `[lo, hi]` rarely needs the complete
//! factor-degree pattern. Each prime keeps a partial factorization: all
//! factors of degree `<= depth` are known, the unresolved cofactor only has
//! factors of larger degree. That gives an over- and an under-approximation
//! of the attainable set, and primes are advanced one degree at a time until
//! the intersection is decided.

use super::bits::Bits;
use crate::ffpoly::{squarefree_decomposition, FpPoly, Frobenius, MonicPoly};

/// Degrees `<= WARMUP` are explored on every prime in turn before the
/// cheapest useful prime is pushed alone.
const WARMUP: usize = 8;

trait Part: Send {
    /// Raises the depth by one, appending the degree of every factor found.
    fn advance(&mut self, found: &mut Vec<usize>);
    /// Degree of the unresolved cofactor, 0 once resolved.
    fn remaining(&self) -> usize;
}

fn trim(v: &mut Vec<u16>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Arithmetic on `u16` coefficient vectors over `F_P` for small `P`;
/// reductions by a constant modulus compile to multiply-shift sequences.
struct Small<const P: u16>;

impl<const P: u16> Small<P> {
    /// Products that may be accumulated on a reduced `u16` before overflow.
    const LAZY: u32 = (65535 - (P as u32 - 1)) / ((P as u32 - 1) * (P as u32 - 1));

    fn inv(c: u16) -> u16 {
        let mut r = 1u32;
        let mut b = c as u32;
        let mut e = P as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P as u32;
            }
            b = b * b % P as u32;
            e >>= 1;
        }
        r as u16
    }

    fn make_monic(a: &mut [u16]) {
        let lead = *a.last().unwrap();
        if lead != 1 {
            let inv = Self::inv(lead);
            for c in a.iter_mut() {
                *c = c.wrapping_mul(inv) % P;
            }
        }
    }

    /// `a <- a mod g` for `g` with canonical entries and any non-zero lead;
    /// optionally records the quotient. Entries of `a` must be canonical on
    /// entry and are accumulated lazily.
    fn rem(a: &mut Vec<u16>, g: &[u16], mut quotient: Option<&mut Vec<u16>>) {
        let d = g.len() - 1;
        if a.len() > d {
            let inv = Self::inv(g[d]) as u32;
            if let Some(q) = quotient.as_deref_mut() {
                q.clear();
                q.resize(a.len() - d, 0);
            }
            let mut pending = 0u32;
            for k in (d..a.len()).rev() {
                let c = a[k] % P;
                if c == 0 {
                    continue;
                }
                let c = (c as u32 * inv % P as u32) as u16;
                if let Some(q) = quotient.as_deref_mut() {
                    q[k - d] = c;
                }
                let m = P - c;
                for (x, &y) in a[k - d..k].iter_mut().zip(&g[..d]) {
                    *x = x.wrapping_add(m.wrapping_mul(y));
                }
                pending += 1;
                if pending == Self::LAZY {
                    a[..k].iter_mut().for_each(|x| *x %= P);
                    pending = 0;
                }
            }
            a.truncate(d);
        } else if let Some(q) = quotient {
            q.clear();
        }
        a.iter_mut().for_each(|x| *x %= P);
        trim(a);
    }

    /// Monic gcd.
    fn gcd(mut a: Vec<u16>, mut b: Vec<u16>) -> Vec<u16> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            Self::rem(&mut a, &b, None);
            std::mem::swap(&mut a, &mut b);
        }
        if !a.is_empty() {
            Self::make_monic(&mut a);
        }
        a
    }

    fn derivative(a: &[u16]) -> Vec<u16> {
        let mut out: Vec<u16> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((c as u32 * (i as u32 % P as u32)) % P as u32) as u16)
            .collect();
        trim(&mut out);
        out
    }

    /// Rows `X^{P j} mod g`, `j < deg g`, each padded to `deg g`, stored
    /// contiguously as bytes.
    fn frobenius_rows(g: &[u16]) -> Vec<u8> {
        let d = g.len() - 1;
        let mut rows = vec![0u8; d * d];
        let mut cur = vec![1u16];
        for j in 0..d {
            for (dst, &c) in rows[j * d..].iter_mut().zip(&cur) {
                *dst = c as u8;
            }
            let mut next = vec![0u16; P as usize];
            next.extend_from_slice(&cur);
            Self::rem(&mut next, g, None);
            cur = next;
        }
        rows
    }

    fn apply(rows: &[u8], h: &[u16], d: usize) -> Vec<u16> {
        let mut acc = vec![0u16; d];
        let mut pending = 0u32;
        for (&hj, row) in h.iter().zip(rows.chunks_exact(d)) {
            if hj == 0 {
                continue;
            }
            for (x, &r) in acc.iter_mut().zip(row) {
                *x = x.wrapping_add(hj.wrapping_mul(r as u16));
            }
            pending += 1;
            if pending == Self::LAZY {
                acc.iter_mut().for_each(|x| *x %= P);
                pending = 0;
            }
        }
        acc.iter_mut().for_each(|x| *x %= P);
        acc
    }
}

struct SmallPart<const P: u16> {
    modulus_deg: usize,
    rows: Vec<u8>,
    h: Vec<u16>,
    rest: Vec<u16>,
    depth: usize,
}

impl<const P: u16> SmallPart<P> {
    fn new(g: Vec<u16>, found: &mut Vec<usize>) -> Self {
        let mut part = SmallPart {
            modulus_deg: 0,
            rows: Vec::new(),
            h: Vec::new(),
            rest: g,
            depth: 0,
        };
        part.rebase(vec![0, 1]);
        part.settle(found);
        part
    }

    fn rebase(&mut self, mut h: Vec<u16>) {
        if self.rest.len() < 3 {
            return;
        }
        Small::<P>::rem(&mut h, &self.rest, None);
        self.modulus_deg = self.rest.len() - 1;
        self.rows = Small::<P>::frobenius_rows(&self.rest);
        self.h = h;
    }

    fn settle(&mut self, found: &mut Vec<usize>) {
        let r = self.rest.len().saturating_sub(1);
        if r > 0 && r < 2 * (self.depth + 1) {
            found.push(r);
            self.rest = vec![1];
        }
    }
}

impl<const P: u16> Part for SmallPart<P> {
    fn advance(&mut self, found: &mut Vec<usize>) {
        if self.remaining() == 0 {
            return;
        }
        self.depth += 1;
        self.h = Small::<P>::apply(&self.rows, &self.h, self.modulus_deg);
        let mut t = self.h.clone();
        t.resize(t.len().max(2), 0);
        t[1] = (t[1] + P - 1) % P;
        let g = Small::<P>::gcd(self.rest.clone(), t);
        if g.len() > 1 {
            let count = (g.len() - 1) / self.depth;
            found.extend(std::iter::repeat_n(self.depth, count));
            let mut q = Vec::new();
            let mut r = std::mem::take(&mut self.rest);
            Small::<P>::rem(&mut r, &g, Some(&mut q));
            debug_assert!(r.is_empty());
            self.rest = q;
            if 2 * (self.rest.len() - 1) <= self.modulus_deg {
                let h = std::mem::take(&mut self.h);
                self.rebase(h);
            }
        }
        self.settle(found);
    }

    fn remaining(&self) -> usize {
        self.rest.len() - 1
    }
}

/// Bit-packed polynomials over `F_2`, least significant bit first.
mod gf2 {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.last().map(|w| 64 * (a.len() - 1) + 63 - w.leading_zeros() as usize)
    }

    /// `dst ^= src * X^shift`; `dst` grows as needed.
    fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        let need = src.len() + ws + 1;
        if dst.len() < need {
            dst.resize(need, 0);
        }
        if bs == 0 {
            for (d, &s) in dst[ws..].iter_mut().zip(src) {
                *d ^= s;
            }
        } else {
            let mut carry = 0u64;
            for (d, &s) in dst[ws..].iter_mut().zip(src) {
                *d ^= (s << bs) | carry;
                carry = s >> (64 - bs);
            }
            dst[ws + src.len()] ^= carry;
        }
    }

    /// `a <- a mod g`, optionally recording the quotient.
    pub fn rem(a: &mut Vec<u64>, g: &[u64], mut quotient: Option<&mut Vec<u64>>) {
        let dg = degree(g).expect("non-zero divisor");
        if let Some(q) = quotient.as_deref_mut() {
            q.clear();
        }
        trim(a);
        while let Some(da) = degree(a) {
            if da < dg {
                break;
            }
            let s = da - dg;
            if let Some(q) = quotient.as_deref_mut() {
                if q.len() <= s / 64 {
                    q.resize(s / 64 + 1, 0);
                }
                q[s / 64] |= 1 << (s % 64);
            }
            xor_shifted(a, g, s);
            trim(a);
        }
    }

    pub fn gcd(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            rem(&mut a, &b, None);
            std::mem::swap(&mut a, &mut b);
        }
        a
    }

    fn spread(x: u32) -> u64 {
        let mut v = x as u64;
        v = (v | v << 16) & 0x0000_ffff_0000_ffff;
        v = (v | v << 8) & 0x00ff_00ff_00ff_00ff;
        v = (v | v << 4) & 0x0f0f_0f0f_0f0f_0f0f;
        v = (v | v << 2) & 0x3333_3333_3333_3333;
        (v | v << 1) & 0x5555_5555_5555_5555
    }

    pub fn square(a: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(2 * a.len());
        for &w in a {
            out.push(spread(w as u32));
            out.push(spread((w >> 32) as u32));
        }
        trim(&mut out);
        out
    }

    pub fn from_bits(c: &[u32]) -> Vec<u64> {
        let mut out = vec![0u64; c.len().div_ceil(64)];
        for (i, &b) in c.iter().enumerate() {
            if b & 1 == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        trim(&mut out);
        out
    }
}

struct Gf2Part {
    modulus: Vec<u64>,
    h: Vec<u64>,
    rest: Vec<u64>,
    depth: usize,
}

impl Gf2Part {
    fn new(g: Vec<u64>, found: &mut Vec<usize>) -> Self {
        let mut h = vec![2u64];
        gf2::rem(&mut h, &g, None);
        let mut part = Gf2Part {
            modulus: g.clone(),
            h,
            rest: g,
            depth: 0,
        };
        part.settle(found);
        part
    }

    fn settle(&mut self, found: &mut Vec<usize>) {
        let r = self.remaining();
        if r > 0 && r < 2 * (self.depth + 1) {
            found.push(r);
            self.rest = vec![1];
        }
    }
}

impl Part for Gf2Part {
    fn advance(&mut self, found: &mut Vec<usize>) {
        if self.remaining() == 0 {
            return;
        }
        self.depth += 1;
        let mut h = gf2::square(&self.h);
        gf2::rem(&mut h, &self.modulus, None);
        self.h = h;
        let mut t = self.h.clone();
        if t.is_empty() {
            t.push(0);
        }
        t[0] ^= 2;
        let g = gf2::gcd(self.rest.clone(), t);
        let dg = gf2::degree(&g).unwrap_or(0);
        if dg > 0 {
            found.extend(std::iter::repeat_n(self.depth, dg / self.depth));
            let mut q = Vec::new();
            let mut r = std::mem::take(&mut self.rest);
            gf2::rem(&mut r, &g, Some(&mut q));
            debug_assert!(r.is_empty());
            self.rest = q;
            if 2 * self.remaining() <= gf2::degree(&self.modulus).unwrap() && self.remaining() > 0 {
                self.modulus = self.rest.clone();
                gf2::rem(&mut self.h, &self.modulus, None);
            }
        }
        self.settle(found);
    }

    fn remaining(&self) -> usize {
        gf2::degree(&self.rest).unwrap_or(0)
    }
}

/// Fallback for larger primes, on top of the general field arithmetic.
struct GenericPart {
    frob: Frobenius,
    h: FpPoly,
    rest: FpPoly,
    depth: usize,
}

impl GenericPart {
    fn new(g: FpPoly, found: &mut Vec<usize>) -> Self {
        let x = FpPoly::x(g.modulus());
        let mut part = GenericPart {
            frob: Frobenius::new(&g),
            h: x.rem(&g),
            rest: g,
            depth: 0,
        };
        part.settle(found);
        part
    }

    fn settle(&mut self, found: &mut Vec<usize>) {
        let r = self.rest.degree().unwrap_or(0);
        if r > 0 && r < 2 * (self.depth + 1) {
            found.push(r);
            self.rest = FpPoly::one(self.rest.modulus());
        }
    }
}

impl Part for GenericPart {
    fn advance(&mut self, found: &mut Vec<usize>) {
        if self.remaining() == 0 {
            return;
        }
        self.depth += 1;
        self.h = self.frob.apply(&self.h);
        let x = FpPoly::x(self.rest.modulus());
        let g = self.rest.gcd(&self.h.sub(&x));
        if !g.is_one() {
            found.extend(std::iter::repeat_n(self.depth, g.degree().unwrap() / self.depth));
            self.rest = self.rest.divrem(&g).0;
            if !self.rest.is_one()
                && 2 * self.rest.degree().unwrap() <= self.frob.modulus().degree().unwrap()
            {
                self.frob = Frobenius::new(&self.rest);
                self.h = self.h.rem(&self.rest);
            }
        }
        self.settle(found);
    }

    fn remaining(&self) -> usize {
        self.rest.degree().unwrap_or(0)
    }
}

fn small_part(g: &FpPoly, found: &mut Vec<usize>) -> Box<dyn Part> {
    let c: Vec<u16> = g.coeffs().iter().map(|&v| v as u16).collect();
    match g.modulus().get() {
        2 => Box::new(Gf2Part::new(gf2::from_bits(g.coeffs()), found)),
        3 => Box::new(SmallPart::<3>::new(c, found)),
        5 => Box::new(SmallPart::<5>::new(c, found)),
        7 => Box::new(SmallPart::<7>::new(c, found)),
        11 => Box::new(SmallPart::<11>::new(c, found)),
        13 => Box::new(SmallPart::<13>::new(c, found)),
        _ => Box::new(GenericPart::new(g.clone(), found)),
    }
}

fn is_squarefree(f: &FpPoly) -> bool {
    let c: Vec<u16> = f.coeffs().iter().map(|&v| v as u16).collect();
    macro_rules! check {
        ($p:literal) => {{
            let d = Small::<$p>::derivative(&c);
            !d.is_empty() && Small::<$p>::gcd(c.clone(), d).len() == 1
        }};
    }
    match f.modulus().get() {
        2 => check!(2),
        3 => check!(3),
        5 => check!(5),
        7 => check!(7),
        11 => check!(11),
        13 => check!(13),
        _ => {
            let d = f.derivative();
            !d.is_zero() && f.gcd(&d).is_one()
        }
    }
}

/// Partial factorization of one reduction.
struct PrimeState {
    parts: Vec<(Box<dyn Part>, u32)>,
    known: Bits,
    depth: usize,
    over: Bits,
    under: Bits,
}

impl PrimeState {
    fn new(f: &MonicPoly) -> Self {
        let width = f.degree() + 1;
        let mut state = PrimeState {
            parts: Vec::new(),
            known: Bits::singleton(width, 0),
            depth: 0,
            over: Bits::empty(width),
            under: Bits::empty(width),
        };
        let mut found = Vec::new();
        if is_squarefree(f.poly()) {
            let part = small_part(f.poly(), &mut found);
            state.record(&found, 1);
            state.parts.push((part, 1));
        } else {
            for (g, mult) in squarefree_decomposition(f) {
                found.clear();
                let part = small_part(g.poly(), &mut found);
                state.record(&found, mult);
                state.parts.push((part, mult));
            }
        }
        state.refresh();
        state
    }

    fn record(&mut self, degrees: &[usize], mult: u32) {
        for &k in degrees {
            for _ in 0..mult {
                self.known.or_shifted(k);
            }
        }
    }

    fn done(&self) -> bool {
        self.parts.iter().all(|(p, _)| p.remaining() == 0)
    }

    fn advance(&mut self) {
        self.depth += 1;
        let mut found = Vec::new();
        for i in 0..self.parts.len() {
            found.clear();
            self.parts[i].0.advance(&mut found);
            let mult = self.parts[i].1;
            self.record(&found, mult);
        }
        self.refresh();
    }

    fn refresh(&mut self) {
        let mut under = self.known.clone();
        let mut over = self.known.clone();
        for (part, mult) in &self.parts {
            let r = part.remaining();
            if r == 0 {
                continue;
            }
            let total = r * *mult as usize;
            let lo = self.depth + 1;
            let spread = if total >= 2 * lo {
                Some(over.plus_interval(lo, total - lo))
            } else {
                None
            };
            for _ in 0..*mult {
                under.or_shifted(r);
            }
            let mut o = over.clone();
            for _ in 0..*mult {
                o.or_shifted(r);
            }
            if let Some(s) = spread {
                o.or_assign(&s);
            }
            over = o;
        }
        self.over = over;
        self.under = under;
    }
}

/// Whether the attainable factor-degree sets of all reductions share an
/// element of `[lo, hi]`. All reductions must have the same degree.
pub(crate) fn shared_degree_in_range(reductions: &[MonicPoly], lo: usize, hi: usize) -> bool {
    let n = reductions[0].degree();
    debug_assert!(reductions.iter().all(|f| f.degree() == n));
    let window = Bits::interval(n + 1, lo, hi);
    let mut states: Vec<PrimeState> = reductions.iter().map(PrimeState::new).collect();
    loop {
        let mut cand = window.clone();
        let mut sure = window.clone();
        for s in &states {
            cand.and_assign(&s.over);
            sure.and_assign(&s.under);
        }
        if cand.is_empty() {
            return false;
        }
        if !sure.is_empty() {
            return true;
        }
        // a prime can only still exclude candidates above its depth that it
        // does not already attain
        let useful = |s: &PrimeState| {
            if s.done() {
                return false;
            }
            let mut open = cand.clone();
            open.and_not_assign(&s.under);
            open.max().is_some_and(|top| top > s.depth)
        };
        let warm = states
            .iter()
            .enumerate()
            .filter(|(_, s)| useful(s) && s.depth < WARMUP)
            .min_by_key(|(_, s)| s.depth)
            .map(|(i, _)| i);
        let pick = warm.or_else(|| states.iter().position(useful));
        match pick {
            Some(i) => states[i].advance(),
            // every candidate is then attained by every prime
            None => return true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{degree_pattern, Prime};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn attainable(f: &MonicPoly) -> Bits {
        let mut b = Bits::singleton(f.degree() + 1, 0);
        for (k, m) in degree_pattern(f) {
            for _ in 0..m {
                b.or_shifted(k);
            }
        }
        b
    }

    fn exact(reds: &[MonicPoly], lo: usize, hi: usize) -> bool {
        let n = reds[0].degree();
        let mut b = Bits::interval(n + 1, lo, hi);
        for f in reds {
            b.and_assign(&attainable(f));
        }
        !b.is_empty()
    }

    #[test]
    fn complete_runs_match_degree_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for pv in [2u64, 3, 5, 7, 11, 13, 17] {
            let p = Prime::new(pv).unwrap();
            for _ in 0..40 {
                let n = rng.random_range(1..40usize);
                let mut c: Vec<u32> = (0..n).map(|_| rng.random_range(0..pv as u32)).collect();
                if rng.random_bool(0.3) {
                    c[0] = 0;
                }
                c.push(1);
                let f = MonicPoly::from_coeffs(p, c).unwrap();
                let mut s = PrimeState::new(&f);
                while !s.done() {
                    s.advance();
                }
                assert_eq!(s.known, attainable(&f), "{f} mod {pv}");
                assert_eq!(s.over, s.known);
                assert_eq!(s.under, s.known);
            }
        }
    }

    #[test]
    fn decisions_match_exact_intersections() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let primes: Vec<Prime> = [2u64, 3, 5, 7].iter().map(|&v| Prime::new(v).unwrap()).collect();
        for _ in 0..300 {
            let n = rng.random_range(2..60usize);
            let mut c: Vec<i64> = (0..n).map(|_| rng.random_range(-2..3)).collect();
            c.push(1);
            let r = rng.random_range(1..=4usize);
            let reds: Vec<MonicPoly> = primes[..r]
                .iter()
                .map(|&p| crate::ffpoly::reduce_i64_monic(&c, p).unwrap())
                .collect();
            let lo = rng.random_range(1..=n);
            let hi = rng.random_range(lo..=n);
            assert_eq!(
                shared_degree_in_range(&reds, lo, hi),
                exact(&reds, lo, hi),
                "{c:?} [{lo}, {hi}] r = {r}"
            );
        }
    }
}


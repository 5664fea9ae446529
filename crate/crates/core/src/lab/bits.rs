//! Fixed-width bitsets over `0..len`, used for sets of attainable degrees.

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn empty(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn singleton(len: usize, v: usize) -> Self {
        let mut b = Self::empty(len);
        b.set(v);
        b
    }

    /// `[lo, hi] ∩ [0, len)`.
    pub fn interval(len: usize, lo: usize, hi: usize) -> Self {
        let mut b = Self::empty(len);
        for v in lo..=hi.min(len.saturating_sub(1)) {
            b.set(v);
        }
        b
    }

    pub fn set(&mut self, v: usize) {
        if v < self.len {
            self.words[v / 64] |= 1 << (v % 64);
        }
    }

    pub fn get(&self, v: usize) -> bool {
        v < self.len && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self ∪ (self + k)`, truncated to the width.
    pub fn or_shifted(&mut self, k: usize) {
        let shifted = self.shifted(k);
        self.or_assign(&shifted);
    }

    pub fn shifted(&self, k: usize) -> Bits {
        let mut out = Bits::empty(self.len);
        let (ws, bs) = (k / 64, k % 64);
        for i in (ws..self.words.len()).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            out.words[i] = w;
        }
        out.mask_tail();
        out
    }

    /// Minkowski sum with the interval `[lo, hi]`.
    pub fn plus_interval(&self, lo: usize, hi: usize) -> Bits {
        let mut out = Bits::empty(self.len);
        if lo > hi {
            return out;
        }
        let width = hi - lo;
        // t is covered iff some element lies in [t - hi, t - lo]
        let mut last: Option<usize> = None;
        for t in lo..self.len {
            if self.get(t - lo) {
                last = Some(t - lo);
            }
            if let Some(s) = last {
                if t - lo - s <= width {
                    out.set(t);
                }
            }
        }
        out
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&v| self.get(v)).collect()
    }

    fn mask_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= u64::MAX >> extra;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_and_intervals() {
        let mut b = Bits::singleton(130, 0);
        b.or_shifted(3);
        b.or_shifted(70);
        assert_eq!(b.ones(), vec![0, 3, 70, 73]);
        assert_eq!(b.max(), Some(73));
        let s = b.plus_interval(2, 4);
        assert_eq!(s.ones(), vec![2, 3, 4, 5, 6, 7, 72, 73, 74, 75, 76, 77]);
        assert!(Bits::empty(5).plus_interval(0, 3).is_empty());
        assert_eq!(Bits::interval(10, 8, 20).ones(), vec![8, 9]);
        assert_eq!(b.shifted(128).ones(), vec![128]);
    }
}

//! Random monic integer polynomials with i.i.d. coefficients uniform on a
//! segment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::IntPoly;

/// `A = X^n + sum_{j<n} a_j X^j` with `a_j` uniform on `[a, a + N - 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub a: i64,
    #[serde(rename = "N")]
    pub len: u64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(n: usize, a: i64, len: u64, seed: u64) -> Result<Self> {
        let cfg = SamplerConfig { n, a, len, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::DegreeTooSmall { min: 1, got: self.n });
        }
        if self.len < 2 {
            return Err(Error::invalid(format!("segment length N = {} must be >= 2", self.len)));
        }
        let span = i64::try_from(self.len - 1).map_err(|_| Error::invalid("segment too long"))?;
        if self.a.checked_add(span).is_none() {
            return Err(Error::invalid("segment end overflows i64"));
        }
        Ok(())
    }

    /// Last point of the segment.
    pub fn b(&self) -> i64 {
        self.a + (self.len - 1) as i64
    }

    pub fn with_n(&self, n: usize) -> Self {
        SamplerConfig { n, ..*self }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SamplerConfig { seed, ..*self }
    }

    /// Ascending coefficients of trial `trial`, leading 1 included.
    ///
    /// The generator is ChaCha8 keyed by `seed` with stream `trial`;
    /// coefficient `j` is the `j`-th draw of that stream, so each trial is
    /// addressable on its own and trials can run in any order.
    pub fn sample_coeffs(&self, trial: u64) -> Vec<i64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        let (lo, hi) = (self.a, self.b());
        let mut c: Vec<i64> = (0..self.n).map(|_| rng.random_range(lo..=hi)).collect();
        c.push(1);
        c
    }

    /// `P(a_0 = 0)`, as `(numerator, denominator)`.
    pub fn prob_a0_zero(&self) -> (u64, u64) {
        if self.a <= 0 && 0 <= self.b() {
            (1, self.len)
        } else {
            (0, 1)
        }
    }
}

/// Deterministic function of `(cfg.seed, trial)`.
pub fn sample_poly(cfg: &SamplerConfig, trial: u64) -> IntPoly {
    IntPoly::from_i64(&cfg.sample_coeffs(trial))
}

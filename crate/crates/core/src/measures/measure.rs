use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a measure.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// The uniform measure on `a, a+1, ..., a+N-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniformSegment {
    pub a: i64,
    #[serde(rename = "N")]
    pub n: u64,
}

impl UniformSegment {
    pub fn new(a: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("segment length must be at least 1"));
        }
        if a.checked_add(n as i64 - 1).is_none() {
            return Err(Error::invalid("segment exceeds the i64 range"));
        }
        Ok(UniformSegment { a, n })
    }

    /// `|sin(pi N theta)| / (N |sin(pi theta)|)`, and 1 at integers.
    pub fn fourier_abs(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(1.0);
        let den = (PI * t).sin().abs();
        if den == 0.0 {
            return 1.0;
        }
        let nf = self.n as f64;
        // reduce N t mod 1 before the sine so large N stays accurate
        let num = (PI * (nf * t).rem_euclid(1.0)).sin().abs();
        (num / (nf * den)).min(1.0)
    }

    pub fn to_measure(&self) -> Measure {
        let w = BigRational::new(BigInt::one(), BigInt::from(self.n));
        let support = (0..self.n as i64).map(|i| (self.a + i, w.clone())).collect();
        Measure {
            support,
            segment: Some(*self),
        }
    }
}

/// A finitely supported probability measure on `Z` with exact rational
/// weights, sorted by support point.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    support: Vec<(i64, BigRational)>,
    segment: Option<UniformSegment>,
}

impl Measure {
    pub fn new(entries: Vec<(i64, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (v, w) in entries {
            if !w.is_positive() {
                return Err(Error::invalid(format!("weight {w} at {v} is not positive")));
            }
            *map.entry(v).or_insert_with(BigRational::zero) += w;
        }
        if map.is_empty() {
            return Err(Error::invalid("measure needs a non-empty support"));
        }
        let total: BigRational = map.values().sum();
        let gap = (&total - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
        if gap > MASS_TOLERANCE {
            return Err(Error::NotNormalized(total.to_string()));
        }
        let support: Vec<(i64, BigRational)> = map.into_iter().collect();
        let segment = detect_segment(&support);
        Ok(Measure { support, segment })
    }

    pub fn from_f64(entries: &[(i64, f64)]) -> Result<Self> {
        let exact = entries
            .iter()
            .map(|&(v, w)| {
                BigRational::from_float(w)
                    .map(|q| (v, q))
                    .ok_or_else(|| Error::invalid(format!("weight {w} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(exact)
    }

    pub fn uniform(a: i64, n: u64) -> Result<Self> {
        Ok(UniformSegment::new(a, n)?.to_measure())
    }

    pub fn point_mass(v: i64) -> Self {
        Measure {
            support: vec![(v, BigRational::one())],
            segment: Some(UniformSegment { a: v, n: 1 }),
        }
    }

    /// Parses `"v1:p1,v2:p2,..."` with `p` an integer or `num/den`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for item in text.split(',') {
            let (v, w) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected value:probability, got {item:?}")))?;
            let v = v
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("support point {v:?}: {e}")))?;
            let w = w
                .trim()
                .parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("probability {w:?}: {e}")))?;
            entries.push((v, w));
        }
        Self::new(entries)
    }

    pub fn support(&self) -> &[(i64, BigRational)] {
        &self.support
    }

    /// The segment this measure is uniform on, if any.
    pub fn segment(&self) -> Option<UniformSegment> {
        self.segment
    }

    pub fn translate(&self, c: i64) -> Measure {
        Measure {
            support: self.support.iter().map(|(v, w)| (v + c, w.clone())).collect(),
            segment: self.segment.map(|s| UniformSegment { a: s.a + c, n: s.n }),
        }
    }

    /// `|sum_j mu(j) e^{2 i pi theta j}|` by pairwise summation. Phases are
    /// taken relative to the smallest support point, which leaves the
    /// modulus unchanged.
    pub fn fourier_abs(&self, theta: f64) -> f64 {
        let base = self.support[0].0;
        let t = theta.rem_euclid(1.0);
        let terms: Vec<Complex64> = self
            .support
            .iter()
            .map(|(v, w)| {
                let offset = (v - base) as f64;
                let phase = (t * offset).rem_euclid(1.0);
                Complex64::from_polar(w.to_f64().unwrap(), 2.0 * PI * phase)
            })
            .collect();
        pairwise_sum(&terms).norm().min(1.0)
    }

    /// Closed form for uniform segments, pairwise summation otherwise.
    pub fn fourier_abs_fast(&self, theta: f64) -> f64 {
        match self.segment {
            Some(seg) => seg.fourier_abs(theta),
            None => self.fourier_abs(theta),
        }
    }
}

fn detect_segment(support: &[(i64, BigRational)]) -> Option<UniformSegment> {
    let n = support.len() as u64;
    let w = &support[0].1;
    let contiguous = support.windows(2).all(|p| p[1].0 == p[0].0 + 1);
    let flat = support.iter().all(|(_, x)| x == w);
    (contiguous && flat && *w == BigRational::new(BigInt::one(), BigInt::from(n)))
        .then_some(UniformSegment { a: support[0].0, n })
}

pub(crate) fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    if terms.len() <= 8 {
        return terms.iter().sum();
    }
    let (l, r) = terms.split_at(terms.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.iter().map(|(v, w)| format!("{v}:{w}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `sum_{k=0}^{Q-1} |mu^(k/Q + theta0)|^s`.
pub fn fourier_power_sum(mu: &Measure, q: u64, theta0: f64, s: u32) -> f64 {
    assert!(q >= 1);
    (0..q)
        .map(|k| {
            let theta = (k as f64 / q as f64 + theta0).rem_euclid(1.0);
            mu.fourier_abs(theta).powi(s as i32)
        })
        .sum()
}

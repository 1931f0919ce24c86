//! Rate-compatible puncturing and recovery-step classification.

use num_rational::Ratio;

use crate::construct::E2rcProfile;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Exact code rate.
pub type Rate = Ratio<usize>;

/// Slack when rounding `N(1 − R_L/R_p)` so that values such as `199.99999`
/// coming from decimal rates still round to the intended integer.
const ROUND_EPS: f64 = 1e-9;

/// Highest rate reachable by puncturing: `K / (N − nv2)`.
pub fn max_rate(profile: &E2rcProfile) -> Rate {
    Rate::new(profile.k(), profile.n() - profile.nv2())
}

/// Mother-code rate `K / N`.
pub fn mother_rate(profile: &E2rcProfile) -> Rate {
    Rate::new(profile.k(), profile.n())
}

pub fn rate_f64(r: Rate) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `round(N (1 − R_L / R_p))`, rounding halves up.
pub fn puncture_count(n: usize, mother: f64, target: f64) -> Result<usize> {
    if !(mother > 0.0 && mother <= 1.0 && target >= mother && target <= 1.0) {
        return Err(Error::RateOutOfRange {
            rate: target,
            min: mother,
            max: 1.0,
        });
    }
    let exact = n as f64 * (1.0 - mother / target);
    Ok(((exact + 0.5 + ROUND_EPS).floor() as usize).min(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctureSchedule {
    /// Codeword column indices, punctured first to last.
    pub order: Vec<usize>,
    pub n: usize,
    pub mother_rate: Rate,
    pub max_rate: Rate,
}

/// All degree-2 parity columns, block by block, left to right.
pub fn puncture_schedule(profile: &E2rcProfile) -> PunctureSchedule {
    let start = profile.k() + profile.l();
    PunctureSchedule {
        order: (start..start + profile.nv2()).collect(),
        n: profile.n(),
        mother_rate: mother_rate(profile),
        max_rate: max_rate(profile),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Punctured {
    /// Sorted codeword indices that are not transmitted.
    pub columns: Vec<usize>,
    /// `K / (N − |columns|)`.
    pub realized_rate: Rate,
}

impl Punctured {
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &c in &self.columns {
            mask[c] = true;
        }
        mask
    }
}

impl PunctureSchedule {
    /// The first `puncture_count(N, R_L, target)` schedule entries.
    pub fn apply(&self, target: f64) -> Result<Punctured> {
        let (lo, hi) = (rate_f64(self.mother_rate), rate_f64(self.max_rate));
        if target < lo - ROUND_EPS || target > hi + ROUND_EPS {
            return Err(Error::RateOutOfRange {
                rate: target,
                min: lo,
                max: hi,
            });
        }
        let count = puncture_count(self.n, lo, target.max(lo))?.min(self.order.len());
        Ok(self.take(count))
    }

    /// The first `count` schedule entries.
    pub fn take(&self, count: usize) -> Punctured {
        let mut columns = self.order[..count.min(self.order.len())].to_vec();
        columns.sort_unstable();
        let k = *self.mother_rate.numer() * self.n / *self.mother_rate.denom();
        Punctured {
            realized_rate: Rate::new(k, self.n - columns.len()),
            columns,
        }
    }
}

pub fn apply_puncturing(schedule: &PunctureSchedule, target: f64) -> Result<Punctured> {
    schedule.apply(target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SrLevel {
    /// Recovered after this many erasure-decoding iterations; 0 = unpunctured.
    Step(usize),
    Unrecoverable,
}

impl SrLevel {
    pub fn step(self) -> Option<usize> {
        match self {
            SrLevel::Step(k) => Some(k),
            SrLevel::Unrecoverable => None,
        }
    }
}

/// Recovery level of every variable node when `punctured` is erased and
/// everything else is known.
pub fn classify_sr(h: &BitMatrix, punctured: &[usize]) -> Vec<SrLevel> {
    let n = h.num_cols();
    let mut level: Vec<Option<usize>> = vec![Some(0); n];
    for &c in punctured {
        level[c] = None;
    }
    // Each round admits the punctured nodes that have a check whose other
    // neighbours were all resolved in earlier rounds.
    let mut step = 0;
    loop {
        step += 1;
        let admitted: Vec<usize> = (0..n)
            .filter(|&v| level[v].is_none())
            .filter(|&v| {
                h.col(v).iter().any(|&c| {
                    h.row(c)
                        .iter()
                        .all(|&u| u == v || level[u].is_some_and(|k| k < step))
                })
            })
            .collect();
        if admitted.is_empty() {
            break;
        }
        for v in admitted {
            level[v] = Some(step);
        }
    }
    level
        .into_iter()
        .map(|l| l.map_or(SrLevel::Unrecoverable, SrLevel::Step))
        .collect()
}

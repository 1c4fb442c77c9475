use core::ops::Range;

use crate::randomness::TrialRng;
use crate::{Result, Sign};

/// Sample mean of a `±1` observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// `sqrt((1 - mean²) / n)`.
    pub stderr: f64,
    pub n: u64,
}

impl Estimate {
    pub fn from_sum(sum: i64, n: u64) -> Estimate {
        if n == 0 {
            return Estimate {
                mean: 0.0,
                stderr: f64::INFINITY,
                n,
            };
        }
        let mean = sum as f64 / n as f64;
        Estimate {
            mean,
            stderr: libm::sqrt((1.0 - mean * mean).max(0.0) / n as f64),
            n,
        }
    }
}

/// Exact running sum of `±1` values; merging is associative and commutative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Mean {
    pub sum: i64,
    pub n: u64,
}

impl Mean {
    #[inline]
    pub fn push(&mut self, s: Sign) {
        self.sum += s.value();
        self.n += 1;
    }

    pub fn merge(self, other: Mean) -> Mean {
        Mean {
            sum: self.sum + other.sum,
            n: self.n + other.n,
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::from_sum(self.sum, self.n)
    }
}

/// One trial's outputs and how often its shared randomness was redrawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub signs: [Sign; 3],
    pub resamples: u32,
}

impl From<[Sign; 3]> for TrialOutcome {
    fn from(signs: [Sign; 3]) -> Self {
        TrialOutcome {
            signs,
            resamples: 0,
        }
    }
}

/// Correlator and marginals of three `±1` outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub n: u64,
    pub abc: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub ab: i64,
    pub ac: i64,
    pub bc: i64,
    pub resamples: u64,
}

impl Tally {
    #[inline]
    pub fn record(&mut self, outcome: TrialOutcome) {
        let [a, b, c] = outcome.signs;
        self.n += 1;
        self.abc += (a * b * c).value();
        self.a += a.value();
        self.b += b.value();
        self.c += c.value();
        self.ab += (a * b).value();
        self.ac += (a * c).value();
        self.bc += (b * c).value();
        self.resamples += outcome.resamples as u64;
    }

    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            n: self.n + o.n,
            abc: self.abc + o.abc,
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            ab: self.ab + o.ab,
            ac: self.ac + o.ac,
            bc: self.bc + o.bc,
            resamples: self.resamples + o.resamples,
        }
    }

    /// `<alpha beta gamma>`.
    pub fn correlation(&self) -> Estimate {
        Estimate::from_sum(self.abc, self.n)
    }

    /// `<alpha>, <beta>, <gamma>, <alpha beta>, <alpha gamma>, <beta gamma>`.
    pub fn marginals(&self) -> [Estimate; 6] {
        [self.a, self.b, self.c, self.ab, self.ac, self.bc].map(|s| Estimate::from_sum(s, self.n))
    }
}

/// Runs `trials` serially, trial `i` on `TrialRng::new(seed, stream, i)`.
pub fn estimate_range<F>(seed: u64, stream: u64, trials: Range<u64>, mut trial: F) -> Result<Tally>
where
    F: FnMut(&mut TrialRng) -> Result<TrialOutcome>,
{
    let mut tally = Tally::default();
    for i in trials {
        let mut rng = TrialRng::new(seed, stream, i);
        tally.record(trial(&mut rng)?);
    }
    Ok(tally)
}

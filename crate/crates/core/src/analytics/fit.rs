use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::{Error, Result};

/// A continuous reference distribution on a bounded interval.
pub trait Reference {
    fn cdf(&self, x: f64) -> f64;

    /// `(lo, hi)`; all mass lies inside.
    fn support(&self) -> (f64, f64);
}

#[derive(Clone, Copy, Debug)]
pub struct Uniform {
    pub lo: f64,
    pub hi: f64,
}

impl Reference for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }

    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Density `½ cos(φ - center)` on `[center - π/2, center + π/2]`.
#[derive(Clone, Copy, Debug)]
pub struct HalfCosineDensity {
    pub center: f64,
}

impl HalfCosineDensity {
    /// Representative of `angle` in `(center - π, center + π]`.
    pub fn unwrap(&self, angle: f64) -> f64 {
        let mut d = libm::fmod(angle - self.center, TAU);
        if d > PI {
            d -= TAU;
        } else if d <= -PI {
            d += TAU;
        }
        self.center + d
    }
}

impl Reference for HalfCosineDensity {
    fn cdf(&self, x: f64) -> f64 {
        let d = (x - self.center).clamp(-FRAC_PI_2, FRAC_PI_2);
        0.5 * (1.0 + libm::sin(d))
    }

    fn support(&self) -> (f64, f64) {
        (self.center - FRAC_PI_2, self.center + FRAC_PI_2)
    }
}

/// Density `¼ |sin 2(φ + shift)|` on `[0, 2π)`.
#[derive(Clone, Copy, Debug)]
pub struct AbsSin2Density {
    pub shift: f64,
}

/// `∫_0^u |sin s| ds` for `u >= 0`.
fn abs_sin_integral(u: f64) -> f64 {
    let periods = libm::floor(u / PI);
    2.0 * periods + 1.0 - libm::cos(u - periods * PI)
}

impl Reference for AbsSin2Density {
    fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, TAU);
        // shift reduced into [0, π) so both arguments are non-negative
        let s = libm::fmod(self.shift, PI);
        let s = if s < 0.0 { s + PI } else { s };
        (abs_sin_integral(2.0 * (x + s)) - abs_sin_integral(2.0 * s)) / 8.0
    }

    fn support(&self) -> (f64, f64) {
        (0.0, TAU)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    /// Kolmogorov–Smirnov statistic `sup |F_n - F|`.
    pub ks: f64,
    /// `Σ_bins |count/n - reference mass|`, the L1 distance between the
    /// histogram density and the bin-averaged reference density.
    pub l1: f64,
}

pub fn ks_and_l1<R: Reference + ?Sized>(samples: &[f64], reference: &R, bins: usize) -> Result<Fit> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be positive"));
    }
    let n = samples.len() as f64;
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let mut ks = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = reference.cdf(x);
        ks = ks.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }

    let (lo, hi) = reference.support();
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in &sorted {
        let k = libm::floor((x - lo) / width);
        let k = if k < 0.0 { 0 } else { (k as usize).min(bins - 1) };
        counts[k] += 1;
    }
    let l1 = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let a = lo + k as f64 * width;
            let mass = reference.cdf(a + width) - reference.cdf(a);
            (c as f64 / n - mass).abs()
        })
        .sum();
    Ok(Fit { ks, l1 })
}

/// Asymptotic two-sided KS critical value `sqrt(-ln(α/2)/2) / sqrt(n)`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    libm::sqrt(-libm::log(alpha / 2.0) / 2.0) / libm::sqrt(n as f64)
}

/// Pearson's statistic for `observed` counts against category probabilities.
pub fn chi_square_statistic(observed: &[u64], probabilities: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::{uniform01, TrialRng};

    #[test]
    fn empty_sample() {
        let r = Uniform { lo: 0.0, hi: 1.0 };
        assert_eq!(ks_and_l1(&[], &r, 10), Err(Error::EmptySample));
    }

    #[test]
    fn self_test_passes() {
        let n = 1_000_000;
        let mut rng = TrialRng::new(0, 0, 0);
        let r = Uniform { lo: -1.0, hi: 1.0 };
        let samples: Vec<f64> = (0..n).map(|_| 2.0 * uniform01(&mut rng) - 1.0).collect();
        let fit = ks_and_l1(&samples, &r, 100).unwrap();
        assert!(fit.ks < ks_critical(n, 0.01));
        assert!(fit.l1 < 0.01);
    }

    #[test]
    fn cdfs_are_normalised() {
        let half = HalfCosineDensity { center: 1.3 };
        let (lo, hi) = half.support();
        assert!(half.cdf(lo).abs() < 1e-15 && (half.cdf(hi) - 1.0).abs() < 1e-15);
        for shift in [0.0, 0.4, 2.0, -1.1, 5.0] {
            let d = AbsSin2Density { shift };
            assert!(d.cdf(0.0).abs() < 1e-14);
            assert!((d.cdf(TAU) - 1.0).abs() < 1e-14, "{shift}");
        }
    }

    #[test]
    fn abs_sin_cdf_matches_numeric_integral() {
        let d = AbsSin2Density { shift: 0.7 };
        let steps = 200_000;
        let x_end = 4.0;
        let h = x_end / steps as f64;
        let numeric: f64 = (0..steps)
            .map(|i| 0.25 * libm::sin(2.0 * ((i as f64 + 0.5) * h + 0.7)).abs() * h)
            .sum();
        assert!((d.cdf(x_end) - numeric).abs() < 1e-8);
    }

    #[test]
    fn inverse_cdf_samples_of_abs_sin_fit() {
        // Bisection inverse CDF, independent of any protocol.
        let d = AbsSin2Density { shift: 0.3 };
        let mut rng = TrialRng::new(4, 0, 0);
        let samples: Vec<f64> = (0..200_000)
            .map(|_| {
                let u = uniform01(&mut rng);
                let (mut lo, mut hi) = (0.0, TAU);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if d.cdf(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            })
            .collect();
        let fit = ks_and_l1(&samples, &d, 100).unwrap();
        assert!(fit.ks < ks_critical(samples.len(), 0.01));
    }

    #[test]
    fn chi_square_of_exact_counts_is_zero() {
        assert_eq!(chi_square_statistic(&[25, 25, 50], &[0.25, 0.25, 0.5]), 0.0);
        assert!((chi_square_statistic(&[60, 40], &[0.5, 0.5]) - 4.0).abs() < 1e-12);
    }
}

//! Mixture weights that turn the native correlation into a cosine.
//!
//! A correlation `E(φ) = Σ_n e_{2n+1} cos((2n+1)φ)` with `e_1 > 0`, all higher
//! coefficients non-positive, `E(0) = 1` and non-positive curvature at zero can
//! be mixed over odd harmonics, `cos φ = Σ_m p_{2m+1} E((2m+1)φ)`, with weights
//! `p_{2m+1} >= 0` summing to one. The weights come from a divisor recursion;
//! a closed form over odd factorisations is kept as an independent check.
//!
//! Harmonic indices are odd integers `M = 2m + 1`. Vectors are indexed by `m`,
//! so `p[m]` is the weight of harmonic `2m + 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::RngCore;

use crate::randomness::uniform01;
use crate::{Clause, Error, Result};

/// Tail target used when a table is built without an explicit target.
pub const DEFAULT_TAIL_TARGET: f64 = 1e-6;

/// Largest harmonic the certified-table search will try.
pub const SEARCH_CAP: u32 = 1 << 20;

/// Remainder bound required on the truncated `C_3/2` sum.
const C32_REMAINDER_TARGET: f64 = 1e-9;

/// `e_{2n+1} = (32/π²) / ((2n+1)² (4 - (2n+1)²))`.
pub fn e1_fourier(n: usize) -> f64 {
    let k = (2 * n + 1) as f64;
    32.0 / (PI * PI) / (k * k) / (4.0 - k * k)
}

/// A cosine series over odd harmonics.
#[derive(Clone, Debug, PartialEq)]
pub enum OddSeries {
    /// The correlation of the 3-bit protocol.
    E1,
    /// Explicit coefficients; `coefficients[n]` multiplies `cos((2n+1)φ)`,
    /// everything past the end is zero.
    Finite(Vec<f64>),
}

impl OddSeries {
    pub fn coefficient(&self, n: usize) -> f64 {
        match self {
            OddSeries::E1 => e1_fourier(n),
            OddSeries::Finite(c) => c.get(n).copied().unwrap_or(0.0),
        }
    }

    pub fn leading(&self) -> f64 {
        self.coefficient(0)
    }

    /// Coefficients for harmonics `1, 3, ..., max_harmonic`.
    pub fn take(&self, max_harmonic: u32) -> Vec<f64> {
        (0..=harmonic_to_index(max_harmonic))
            .map(|n| self.coefficient(n))
            .collect()
    }

    /// Upper bound on `Σ_{M > from} M^{3/2} (-e_M) / e_1` over odd `M`.
    fn three_halves_remainder(&self, from: u32) -> f64 {
        match self {
            // |e_M| M^{3/2} / e_1 = (32/(π² e_1)) M^{-1/2} / (M² - 4), which for
            // M >= 3 is dominated by the odd-spaced integral of x^{-5/2}.
            OddSeries::E1 => {
                let scale = 32.0 / (PI * PI * e1_fourier(0));
                scale * (2.0 / 3.0) * libm::pow(from as f64, -1.5)
            }
            OddSeries::Finite(c) => {
                if harmonic_to_index(from) + 1 >= c.len() {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Number of leading terms after which the `C_3/2` remainder is exact or
    /// below `C32_REMAINDER_TARGET`.
    fn three_halves_cutoff(&self) -> u32 {
        match self {
            OddSeries::E1 => {
                let mut from = 1001u32;
                while self.three_halves_remainder(from) >= C32_REMAINDER_TARGET {
                    from = from * 2 + 1;
                }
                from
            }
            OddSeries::Finite(c) => index_to_harmonic(c.len().max(1) - 1),
        }
    }
}

#[inline]
pub fn harmonic_to_index(harmonic: u32) -> usize {
    (harmonic as usize).saturating_sub(1) / 2
}

#[inline]
pub fn index_to_harmonic(index: usize) -> u32 {
    (2 * index + 1) as u32
}

/// Partial sums of the mixture conditions over `n = 0..=n_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureReport {
    pub ok: bool,
    pub n_max: usize,
    /// `Σ e_{2n+1}`, which should be 1.
    pub sum: f64,
    /// `Σ (2n+1)² e_{2n+1}`, which should be non-negative.
    pub curvature_sum: f64,
}

/// Checks the sign, normalisation and curvature conditions on the first
/// `n_max + 1` coefficients. Normalisation must hold within `tolerance`; the
/// curvature sum may dip to `-tolerance`.
pub fn verify_mixture_conditions(
    series: &OddSeries,
    n_max: usize,
    tolerance: f64,
) -> Result<MixtureReport> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1"));
    }
    check_signs(series, n_max)?;
    let mut sum = Kahan::default();
    let mut curvature = Kahan::default();
    for n in 0..=n_max {
        let k = (2 * n + 1) as f64;
        let e = series.coefficient(n);
        sum.add(e);
        curvature.add(k * k * e);
    }
    let (sum, curvature_sum) = (sum.value(), curvature.value());
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::ConditionViolated {
            clause: Clause::Normalization,
            index: index_to_harmonic(n_max) as usize,
            value: sum,
        });
    }
    if curvature_sum < -tolerance {
        return Err(Error::ConditionViolated {
            clause: Clause::Curvature,
            index: index_to_harmonic(n_max) as usize,
            value: curvature_sum,
        });
    }
    Ok(MixtureReport {
        ok: true,
        n_max,
        sum,
        curvature_sum,
    })
}

fn check_signs(series: &OddSeries, n_max: usize) -> Result<()> {
    let e1 = series.leading();
    if e1.is_nan() || e1 <= 0.0 {
        return Err(Error::ConditionViolated {
            clause: Clause::LeadingPositive,
            index: 1,
            value: e1,
        });
    }
    for n in 1..=n_max {
        let e = series.coefficient(n);
        if e.is_nan() || e > 0.0 {
            return Err(Error::ConditionViolated {
                clause: Clause::TrailingNonPositive,
                index: index_to_harmonic(n) as usize,
                value: e,
            });
        }
    }
    Ok(())
}

/// Mixture weights for harmonics `1, 3, ..., max_harmonic` by the divisor
/// recursion `p_1 = 1/e_1`, `p_M = -(1/e_1) Σ_{d | M, d > 1} e_d p_{M/d}`.
pub fn p_recursive(series: &OddSeries, max_harmonic: u32) -> Vec<f64> {
    let len = harmonic_to_index(max_harmonic) + 1;
    let e = series.take(max_harmonic);
    let inv_e1 = 1.0 / e[0];
    // acc[M] collects Σ e_d p_k over the factor pairs k·d = M seen so far; every
    // pair with k < M is added before M itself is finalised.
    let mut acc = vec![0.0f64; len];
    let mut p = vec![0.0f64; len];
    for k_idx in 0..len {
        p[k_idx] = if k_idx == 0 {
            inv_e1
        } else {
            -inv_e1 * acc[k_idx]
        };
        let k = index_to_harmonic(k_idx) as u64;
        let mut d = 3u64;
        while k * d <= max_harmonic as u64 {
            let target = harmonic_to_index((k * d) as u32);
            acc[target] += p[k_idx] * e[harmonic_to_index(d as u32)];
            d += 2;
        }
    }
    p
}

/// Weight of `harmonic` from the closed form over odd factorisations:
/// `(1/e_1) Σ multinomial(ℓ) Π_d (-e_d/e_1)^{ℓ_d}` over multisets of odd
/// factors `d >= 3` whose product is `harmonic`.
pub fn p_factorization(harmonic: u32, series: &OddSeries) -> f64 {
    let e1 = series.leading();
    let mut counts: Vec<(u32, u32)> = Vec::new();
    let mut total = 0.0;
    factorizations(harmonic, 3, &mut counts, &mut |parts| {
        let mut term = multinomial(parts);
        for &(d, l) in parts {
            let ratio = -series.coefficient(harmonic_to_index(d)) / e1;
            term *= libm::pow(ratio, l as f64);
        }
        total += term;
    });
    total / e1
}

/// Visits every multiset of odd factors `>= min_factor` with product `rest`,
/// as `(factor, multiplicity)` pairs in increasing factor order.
fn factorizations(
    rest: u32,
    min_factor: u32,
    parts: &mut Vec<(u32, u32)>,
    visit: &mut impl FnMut(&[(u32, u32)]),
) {
    if rest == 1 {
        visit(parts);
        return;
    }
    let mut d = min_factor;
    while d <= rest {
        if rest.is_multiple_of(d) {
            match parts.last_mut() {
                Some((last, l)) if *last == d => *l += 1,
                _ => parts.push((d, 1)),
            }
            factorizations(rest / d, d, parts, visit);
            match parts.last_mut() {
                Some((_, l)) if *l > 1 => *l -= 1,
                _ => {
                    parts.pop();
                }
            }
        }
        d += 2;
    }
}

fn multinomial(parts: &[(u32, u32)]) -> f64 {
    let mut result = 1.0;
    let mut n = 0u32;
    for &(_, l) in parts {
        for j in 1..=l {
            n += 1;
            result *= n as f64 / j as f64;
        }
    }
    result
}

/// `C_3/2 = Σ_{n>=1} (2n+1)^{3/2} (-e_{2n+1}) / e_1`, evaluated up to a cutoff
/// plus a rigorous bound on the rest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeHalves {
    pub value: f64,
    pub remainder_bound: f64,
}

impl ThreeHalves {
    pub fn upper(&self) -> f64 {
        self.value + self.remainder_bound
    }
}

pub fn c_three_halves(series: &OddSeries) -> ThreeHalves {
    let cutoff = series.three_halves_cutoff();
    let e1 = series.leading();
    let mut sum = Kahan::default();
    for n in 1..=harmonic_to_index(cutoff) {
        let k = index_to_harmonic(n) as f64;
        sum.add(k * libm::sqrt(k) * -series.coefficient(n) / e1);
    }
    ThreeHalves {
        value: sum.value(),
        remainder_bound: series.three_halves_remainder(cutoff),
    }
}

/// Certified bound on the weight beyond `max_harmonic`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    /// `min(analytic, deficit)`.
    pub epsilon: f64,
    /// `(1/e_1) (1/(1 - C_3/2)) Σ_{M > max} M^{-3/2}`, with the sum bounded by
    /// its integral.
    pub analytic: f64,
    /// `1 - Σ_{M <= max} p_M` plus a rounding allowance. Valid because the
    /// weights of a series meeting the conditions sum to exactly one.
    pub deficit: f64,
    pub c_three_halves: ThreeHalves,
}

pub fn tail_epsilon(max_harmonic: u32, series: &OddSeries) -> Result<TailBound> {
    let p = p_recursive(series, max_harmonic);
    tail_from_weights(&p, series, &c_three_halves(series))
}

fn tail_from_weights(p: &[f64], series: &OddSeries, c32: &ThreeHalves) -> Result<TailBound> {
    tail_at(kahan_sum(p.iter().copied()), p.len(), series.leading(), c32)
}

/// Tail bound for a table of `count` weights whose sum is `partial`.
fn tail_at(partial: f64, count: usize, e1: f64, c32: &ThreeHalves) -> Result<TailBound> {
    let c = c32.upper();
    if c.is_nan() || c >= 1.0 {
        return Err(Error::DivergentMixture { c_three_halves: c });
    }
    let max_harmonic = index_to_harmonic(count - 1) as f64;
    let analytic = if c == 0.0 {
        // Every factorisation has a zero factor, so only p_1 survives.
        0.0
    } else {
        // Σ over odd M > X of M^{-3/2} <= (1/2) ∫_X^∞ x^{-3/2} dx = X^{-1/2}.
        1.0 / (e1 * (1.0 - c)) / libm::sqrt(max_harmonic)
    };
    let rounding = 4.0 * f64::EPSILON * count as f64;
    let deficit = (1.0 - partial).max(0.0) + rounding;
    Ok(TailBound {
        epsilon: analytic.min(deficit),
        analytic,
        deficit,
        c_three_halves: *c32,
    })
}

/// Coefficients of the e/p mixture and the sampler for the harmonic index.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    series: OddSeries,
    e: Vec<f64>,
    p: Vec<f64>,
    cumulative: Vec<f64>,
    tail: TailBound,
}

impl CoefficientTable {
    /// Table truncated at `max_harmonic` (rounded up to odd).
    pub fn with_max_harmonic(series: OddSeries, max_harmonic: u32) -> Result<CoefficientTable> {
        if max_harmonic == 0 {
            return Err(Error::InvalidParameter("max harmonic must be at least 1"));
        }
        let max_harmonic = max_harmonic | 1;
        check_signs(&series, harmonic_to_index(max_harmonic))?;
        let c32 = c_three_halves(&series);
        let p = p_recursive(&series, max_harmonic);
        let tail = tail_from_weights(&p, &series, &c32)?;
        Ok(CoefficientTable::assemble(series, max_harmonic, p, tail))
    }

    /// Smallest table whose certified tail is below `target`.
    pub fn certified(series: OddSeries, target: f64) -> Result<CoefficientTable> {
        if target.is_nan() || target <= 0.0 {
            return Err(Error::InvalidParameter("tail target must be positive"));
        }
        let c32 = c_three_halves(&series);
        let e1 = series.leading();
        let mut cap = 127u32;
        loop {
            check_signs(&series, harmonic_to_index(cap))?;
            let p = p_recursive(&series, cap);
            let mut partial = Kahan::default();
            for (idx, &w) in p.iter().enumerate() {
                partial.add(w);
                let tail = tail_at(partial.value(), idx + 1, e1, &c32)?;
                if tail.epsilon < target {
                    let max_harmonic = index_to_harmonic(idx);
                    let p = p[..=idx].to_vec();
                    return Ok(CoefficientTable::assemble(series, max_harmonic, p, tail));
                }
            }
            if cap >= SEARCH_CAP {
                return Err(Error::TargetUnreachable {
                    target,
                    cap: SEARCH_CAP,
                });
            }
            cap = (cap * 2 + 1).min(SEARCH_CAP);
        }
    }

    fn assemble(
        series: OddSeries,
        max_harmonic: u32,
        p: Vec<f64>,
        tail: TailBound,
    ) -> CoefficientTable {
        let e = series.take(max_harmonic);
        let mut running = Kahan::default();
        let cumulative = p
            .iter()
            .map(|&w| {
                running.add(w);
                running.value()
            })
            .collect();
        CoefficientTable {
            series,
            e,
            p,
            cumulative,
            tail,
        }
    }

    pub fn series(&self) -> &OddSeries {
        &self.series
    }

    /// Largest stored (odd) harmonic.
    pub fn max_harmonic(&self) -> u32 {
        index_to_harmonic(self.p.len() - 1)
    }

    /// `e[m]` is the coefficient of harmonic `2m + 1`.
    pub fn e(&self) -> &[f64] {
        &self.e
    }

    /// `p[m]` is the weight of harmonic `2m + 1`.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn tail(&self) -> &TailBound {
        &self.tail
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail.epsilon
    }

    pub fn c_three_halves(&self) -> f64 {
        self.tail.c_three_halves.value
    }

    /// Weight of `harmonic`, zero beyond the table.
    pub fn weight(&self, harmonic: u32) -> f64 {
        if harmonic.is_multiple_of(2) {
            return 0.0;
        }
        self.p.get(harmonic_to_index(harmonic)).copied().unwrap_or(0.0)
    }

    /// Inverse-CDF draw of the harmonic index. Mass beyond the table goes to 1.
    pub fn sample_harmonic<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        let u = uniform01(rng);
        let idx = self.cumulative.partition_point(|&c| c <= u);
        if idx == self.cumulative.len() {
            1
        } else {
            index_to_harmonic(idx)
        }
    }

    /// Harmonic-`K` coefficient of `Σ_M p_M E(Mφ)` for odd `K <= max_harmonic`:
    /// `Σ_{M·N = K} p_M e_N`. It is 1 at `K = 1` and 0 elsewhere. Weights past
    /// the stored table are recomputed from the series.
    pub fn reconstruct_cos(&self, max_harmonic: u32) -> Vec<f64> {
        let extended;
        let p = if max_harmonic <= self.max_harmonic() {
            &self.p[..]
        } else {
            extended = p_recursive(&self.series, max_harmonic);
            &extended[..]
        };
        let e = self.series.take(max_harmonic);
        let len = harmonic_to_index(max_harmonic) + 1;
        let mut out = vec![0.0; len];
        for (m_idx, &weight) in p.iter().enumerate().take(len) {
            let m = index_to_harmonic(m_idx) as u64;
            let mut n = 1u64;
            while m * n <= max_harmonic as u64 {
                out[harmonic_to_index((m * n) as u32)] += weight * e[harmonic_to_index(n as u32)];
                n += 2;
            }
        }
        out
    }
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut k = Kahan::default();
    for v in values {
        k.add(v);
    }
    k.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness::TrialRng;

    const E1_LEAD: f64 = 32.0 / (3.0 * PI * PI);

    #[test]
    fn fourier_values() {
        assert!((e1_fourier(0) - 1.080_759_29).abs() < 1e-8);
        assert!((e1_fourier(0) - E1_LEAD).abs() < 1e-15);
        assert!((e1_fourier(1) + 32.0 / (45.0 * PI * PI)).abs() < 1e-15);
        assert!((e1_fourier(1) + 0.072_050_62).abs() < 1e-8);
        let s = kahan_sum((0..=10_000).map(e1_fourier));
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn e1_meets_conditions() {
        let report = verify_mixture_conditions(&OddSeries::E1, 10_000, 1e-6).unwrap();
        assert!(report.ok);
        // Σ 1/(4 - M²) telescopes to 0; the tail of the partial sum is ≈ 3/(4N).
        assert!(report.curvature_sum.abs() < 1e-4, "{}", report.curvature_sum);
        assert!(report.curvature_sum >= 0.0);
    }

    #[test]
    fn pure_cosine_is_its_own_mixture() {
        let cos = OddSeries::Finite(vec![1.0]);
        assert!(verify_mixture_conditions(&cos, 5, 1e-12).unwrap().ok);
        let table = CoefficientTable::with_max_harmonic(cos.clone(), 9).unwrap();
        assert_eq!(table.p()[0], 1.0);
        assert!(table.p()[1..].iter().all(|&p| p == 0.0));
        for max in [1, 3, 99] {
            assert_eq!(tail_epsilon(max, &cos).unwrap().epsilon, 0.0);
        }
        let mut rng = TrialRng::new(0, 0, 0);
        assert!((0..1000).all(|_| table.sample_harmonic(&mut rng) == 1));
    }

    #[test]
    fn positive_trailing_coefficient_is_rejected() {
        let bad = OddSeries::Finite(vec![0.9, 0.1]);
        match verify_mixture_conditions(&bad, 3, 1e-9) {
            Err(Error::ConditionViolated { clause, index, .. }) => {
                assert_eq!(clause, Clause::TrailingNonPositive);
                assert_eq!(index, 3);
            }
            other => panic!("{other:?}"),
        }
        assert!(CoefficientTable::with_max_harmonic(bad, 9).is_err());
    }

    #[test]
    fn normalization_and_curvature_clauses() {
        let unnormalized = OddSeries::Finite(vec![1.2, -0.1]);
        assert!(matches!(
            verify_mixture_conditions(&unnormalized, 3, 1e-6),
            Err(Error::ConditionViolated {
                clause: Clause::Normalization,
                ..
            })
        ));
        // 1.2 - 0.2 = 1 but 1.2 - 9·0.2 < 0.
        let curved = OddSeries::Finite(vec![1.2, -0.2]);
        assert!(matches!(
            verify_mixture_conditions(&curved, 3, 1e-6),
            Err(Error::ConditionViolated {
                clause: Clause::Curvature,
                ..
            })
        ));
        assert!(matches!(
            verify_mixture_conditions(&OddSeries::Finite(vec![0.0]), 3, 1e-6),
            Err(Error::ConditionViolated {
                clause: Clause::LeadingPositive,
                ..
            })
        ));
    }

    #[test]
    fn leading_weights() {
        let p = p_recursive(&OddSeries::E1, 9);
        let e = |n| e1_fourier(n);
        assert!((p[0] - 3.0 * PI * PI / 32.0).abs() < 1e-15);
        assert!((p[0] - 0.925_275_4).abs() < 1e-7);
        assert!((p[1] - 0.061_685_03).abs() < 1e-8);
        assert!((p[1] + e(1) / (e(0) * e(0))).abs() < 1e-16);
        assert!((e(2) + 32.0 / (525.0 * PI * PI)).abs() < 1e-16);
        assert!((p[2] - 0.005_287_3).abs() < 1e-7);
        // 9 = 3·3 = 9
        let nine = (e(1) / e(0)).powi(2) / e(0) - e(4) / (e(0) * e(0));
        assert!((p[4] - nine).abs() < 1e-16);
        assert!((p_factorization(9, &OddSeries::E1) - nine).abs() < 1e-16);
        assert!((p_factorization(1, &OddSeries::E1) - p[0]).abs() < 1e-16);
    }

    #[test]
    fn primes_have_single_term_weights() {
        let p = p_recursive(&OddSeries::E1, 199);
        for q in [3u32, 5, 7, 11, 13, 97, 101, 197, 199] {
            let n = harmonic_to_index(q);
            let expected = -e1_fourier(n) / (e1_fourier(0) * e1_fourier(0));
            assert!((p[n] - expected).abs() <= 1e-15 * expected, "{q}");
        }
    }

    #[test]
    fn recursion_matches_factorization() {
        let p = p_recursive(&OddSeries::E1, 999);
        for (idx, &w) in p.iter().enumerate() {
            assert!(w >= 0.0);
            let closed = p_factorization(index_to_harmonic(idx), &OddSeries::E1);
            assert!(
                (closed - w).abs() <= 1e-12 * w,
                "harmonic {}: {closed} vs {w}",
                index_to_harmonic(idx)
            );
        }
    }

    #[test]
    fn three_halves_constant() {
        let c = c_three_halves(&OddSeries::E1);
        assert!(c.upper() < 1.0);
        assert!(c.value > 0.4 && c.value < 0.5, "{}", c.value);
        assert!(c.remainder_bound < 1e-9);
    }

    #[test]
    fn certified_table() {
        let table = CoefficientTable::certified(OddSeries::E1, 1e-6).unwrap();
        assert!(table.tail_epsilon() < 1e-6);
        let total = *table.cumulative().last().unwrap();
        assert!((1.0 - 1e-6..=1.0 + 1e-9).contains(&total));
        // Minimality: one harmonic fewer does not certify.
        let smaller = table.max_harmonic() - 2;
        assert!(tail_epsilon(smaller, &OddSeries::E1).unwrap().epsilon >= 1e-6);
        assert!(table.c_three_halves() < 1.0);
    }

    #[test]
    fn reconstruction_is_a_delta() {
        let table = CoefficientTable::certified(OddSeries::E1, 1e-6).unwrap();
        let coeffs = table.reconstruct_cos(99);
        assert_eq!(coeffs[0], 1.0);
        assert!(coeffs[1].abs() < 1e-12);
        for (idx, c) in coeffs.iter().enumerate().skip(1) {
            assert!(c.abs() < 1e-10, "harmonic {}: {c}", index_to_harmonic(idx));
        }
    }

    #[test]
    fn partial_sums_are_monotone() {
        let table = CoefficientTable::with_max_harmonic(OddSeries::E1, 999).unwrap();
        assert!(table.cumulative().windows(2).all(|w| w[1] >= w[0]));
        assert!(*table.cumulative().last().unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn mixture_reconstructs_cosine_pointwise() {
        let table = CoefficientTable::certified(OddSeries::E1, 1e-6).unwrap();
        let eps = table.tail_epsilon();
        for i in 0..100 {
            let phi = 2.0 * PI * i as f64 / 100.0;
            let mix: f64 = table
                .p()
                .iter()
                .enumerate()
                .map(|(idx, &w)| w * crate::analytics::e1_closed(index_to_harmonic(idx) as f64 * phi))
                .sum();
            assert!((mix - libm::cos(phi)).abs() <= 2.0 * eps + 1e-9, "{phi}");
        }
    }

    #[test]
    fn sampler_frequencies() {
        let table = CoefficientTable::certified(OddSeries::E1, 1e-6).unwrap();
        let n = 1_000_000u64;
        let mut rng = TrialRng::new(5, 0, 0);
        let mut ones = 0u64;
        let mut threes = 0u64;
        for _ in 0..n {
            match table.sample_harmonic(&mut rng) {
                1 => ones += 1,
                3 => threes += 1,
                m => assert!(m % 2 == 1 && m <= table.max_harmonic()),
            }
        }
        let f1 = ones as f64 / n as f64;
        assert!((f1 - 3.0 * PI * PI / 32.0).abs() < 0.001, "{f1}");
        let p3 = table.p()[1];
        let sigma = libm::sqrt(p3 * (1.0 - p3) / n as f64);
        assert!((threes as f64 / n as f64 - p3).abs() < 4.0 * sigma);
    }
}

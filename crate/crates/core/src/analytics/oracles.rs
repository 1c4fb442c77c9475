use core::f64::consts::{PI, TAU};

use crate::coefficients::e1_fourier;

/// `E_1(φ) = 1 - (2φ - sin 2φ)/π` on `[0, π]`, extended as an even,
/// `2π`-periodic function.
pub fn e1_closed(phi: f64) -> f64 {
    let mut r = libm::fmod(phi + PI, TAU);
    if r < 0.0 {
        r += TAU;
    }
    let x = (r - PI).abs();
    1.0 - (2.0 * x - libm::sin(2.0 * x)) / PI
}

/// Fourier partial sum of `E_1` over `n = 0..=n_max`.
pub fn e1_series(phi: f64, n_max: usize) -> f64 {
    let mut sum = crate::coefficients::Kahan::default();
    for n in 0..=n_max {
        sum.add(e1_fourier(n) * libm::cos((2 * n + 1) as f64 * phi));
    }
    sum.value()
}

/// `(4/π) Σ_{n <= n_max} sin((2n+1)x) / (2n+1)`, which tends to `sign(sin x)`.
pub fn sign_fourier_series(x: f64, n_max: usize) -> f64 {
    let mut sum = 0.0;
    for n in 0..=n_max {
        let k = (2 * n + 1) as f64;
        sum += libm::sin(k * x) / k;
    }
    4.0 / PI * sum
}

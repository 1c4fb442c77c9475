use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Builds the `n`-point rule by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> GaussLegendre {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    GaussLegendre { nodes, weights }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl GaussLegendre {
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Bisects until the rule on an interval agrees with the rule on its two
    /// halves within `tol` (scaled by interval length).
    pub fn integrate_adaptive(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        f: &mut impl FnMut(f64) -> f64,
    ) -> f64 {
        self.adaptive(a, b, self.integrate(a, b, &mut *f), tol, 40, f)
    }

    fn adaptive(
        &self,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        f: &mut impl FnMut(f64) -> f64,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = self.integrate(a, mid, &mut *f);
        let right = self.integrate(mid, b, &mut *f);
        if depth == 0 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        self.adaptive(a, mid, left, 0.5 * tol, depth - 1, f)
            + self.adaptive(mid, b, right, 0.5 * tol, depth - 1, f)
    }
}

/// Points `base + kπ` strictly inside `(lo, hi)`, sorted.
fn lattice_points(base: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let mut k = libm::ceil((lo - base) / PI);
    loop {
        let x = base + k * PI;
        if x >= hi {
            break;
        }
        if x > lo {
            out.push(x);
        }
        k += 1.0;
    }
}

/// `E_1(φ) = (2/π) ∫_0^{π/2} dx ∫_0^{π/2} dy sin(2x) sign(sin(x + y - φ))`
/// by product Gauss–Legendre, with the inner range split on the
/// discontinuity line `x + y - φ ∈ πZ` and the outer range split where that
/// line enters or leaves the square.
pub fn e1_quadrature(phi: f64) -> f64 {
    let rule = gauss_legendre(16);
    let mut inner_cuts = Vec::new();
    let mut inner = |x: f64| {
        inner_cuts.clear();
        inner_cuts.push(0.0);
        lattice_points(phi - x, 0.0, FRAC_PI_2, &mut inner_cuts);
        inner_cuts.push(FRAC_PI_2);
        inner_cuts
            .windows(2)
            .map(|w| {
                rule.integrate(w[0], w[1], |y| {
                    if libm::sin(x + y - phi) >= 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                })
            })
            .sum::<f64>()
    };

    let mut outer_cuts = Vec::new();
    outer_cuts.push(0.0);
    lattice_points(phi, 0.0, FRAC_PI_2, &mut outer_cuts);
    lattice_points(phi - FRAC_PI_2, 0.0, FRAC_PI_2, &mut outer_cuts);
    outer_cuts.push(FRAC_PI_2);
    outer_cuts.sort_by(|a, b| a.total_cmp(b));

    let mut integrand = |x: f64| libm::sin(2.0 * x) * inner(x);
    let total: f64 = outer_cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| rule.integrate_adaptive(w[0], w[1], 1e-13, &mut integrand))
        .sum();
    2.0 / PI * total
}

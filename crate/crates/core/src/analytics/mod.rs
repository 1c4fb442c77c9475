//! Oracles for the native correlation, Monte-Carlo estimators and
//! goodness-of-fit statistics.

mod estimate;
mod fit;
mod oracles;
mod quadrature;

pub use estimate::{estimate_range, Estimate, Mean, Tally, TrialOutcome};
pub use fit::{
    chi_square_statistic, ks_and_l1, ks_critical, AbsSin2Density, Fit, HalfCosineDensity,
    Reference, Uniform,
};
pub use oracles::{e1_closed, e1_series, sign_fourier_series};
pub use quadrature::{e1_quadrature, gauss_legendre, GaussLegendre};

//! Classical simulation of equatorial measurements on the tripartite GHZ state.
//!
//! Three parties receive angles `phi_a`, `phi_b`, `phi_c` and output signs
//! `alpha`, `beta`, `gamma` whose product averages to
//! `cos(phi_a + phi_b + phi_c)` while every single- and two-party marginal
//! vanishes. This crate contains everything that does not need an operating
//! system:
//!
//! * [`randomness`]: counter-based per-trial random streams and the shared
//!   hidden variables consumed by the protocols.
//! * [`protocols`]: the 3-bit communication protocol, its harmonic (mixture)
//!   form, three re-routed variants, the 2-bit protocol and the N-party
//!   generalisation, each with an explicit message transcript.
//! * [`coefficients`]: Fourier coefficients of the native correlation, the
//!   non-negative mixture weights that turn it into a cosine, and their
//!   truncation certificates.
//! * [`boxes`]: PR boxes, the GHZ box built from three of them, and the
//!   communication-free 8-box protocol.
//! * [`detection`]: the detection-loophole form where guessed bits replace
//!   messages.
//! * [`analytics`]: closed-form, series and quadrature oracles, estimators and
//!   goodness-of-fit statistics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod boxes;
pub mod coefficients;
pub mod detection;
mod error;
pub mod protocols;
pub mod randomness;
mod sign;

pub use error::{Clause, Error};
pub use sign::Sign;

pub type Result<T, E = Error> = core::result::Result<T, E>;

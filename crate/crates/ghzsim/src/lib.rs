//! Simulator and verification suite for classical simulations of
//! three-party GHZ correlations: parallel trial driver, CSV commands and the
//! acceptance checks. The protocols themselves live in [`ghzsim_core`].

pub mod acceptance;
pub mod commands;
pub mod engine;
pub mod stats;

pub use ghzsim_core as core;

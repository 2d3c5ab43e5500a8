//! Offset-symmetric Gaussian tails (OSGT) noise for differential privacy.
//!
//! The OSGT law glues together the outer tails of `N(-m, σ²)` and `N(m, σ²)`
//! and renormalizes them. Used as additive noise it behaves like a Laplace
//! mechanism near the origin and like a Gaussian in the tails. This crate
//! provides:
//!
//! - [`special`]: Gaussian Q-function and log-domain helpers.
//! - [`dist`]: density, cdf, variance, tail comparison and exact sampling.
//! - [`mech`]: output-perturbation mechanisms (OSGT, Gaussian, Laplace).
//! - [`account`]: exact `δ(ε)`, zCDP bounds, Rényi divergence and the
//!   Rényi-to-`(ε, δ)` conversion, plus independent quadrature oracles.
//! - [`calibrate`]: inverse problems (ε or σ² for a target δ) and mechanism
//!   comparison tables.
//! - [`presets`]: the parameter sets and grids used to reproduce the figures.
//!
//! Every numerical routine is generic over [`Scalar`] (`f32` or `f64`). The
//! `*64` aliases below fix the scalar to `f64`, which is what the accuracy
//! targets are stated for.

// coefficient tables and reference values keep every published digit
#![allow(clippy::excessive_precision)]

pub mod account;
pub mod calibrate;
pub mod dist;
mod error;
pub mod mech;
pub mod presets;
pub mod quad;
mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type OsgtParams64 = dist::OsgtParams<f64>;
pub type OsgtParams32 = dist::OsgtParams<f32>;
pub type MatchedReferences64 = dist::MatchedReferences<f64>;
pub type Sensitivity64 = mech::Sensitivity<f64>;
pub type PrivacyPoint64 = account::PrivacyPoint<f64>;
pub type ZcdpBound64 = account::ZcdpBound<f64>;
pub type RenyiEvaluation64 = account::RenyiEvaluation<f64>;

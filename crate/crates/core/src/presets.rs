//! Frozen parameter sets and grids behind the reproduced figures.
//!
//! Shared by the command-line `reproduce` command and the acceptance tests so
//! both read the same numbers.

/// OSGT input parameters together with the query sensitivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub m: f64,
    pub sigma2: f64,
    /// Per-coordinate sensitivity Δ.
    pub delta: f64,
    /// Query dimension.
    pub k: usize,
}

/// Density and tail comparison at matched variance.
pub const TAILS: Preset = Preset { m: 3.0, sigma2: 40.0, delta: 1.0, k: 1 };
/// Offsets compared in the variance-gap sweep.
pub const VARIANCE_OFFSETS: [f64; 2] = [2.0, 3.0];
/// Exact δ(ε) comparisons.
pub const DELTA_M3: Preset = Preset { m: 3.0, sigma2: 40.0, delta: 1.0, k: 1 };
pub const DELTA_M2: Preset = Preset { m: 2.0, sigma2: 20.0, delta: 1.0, k: 1 };
/// Rényi divergence against the zCDP bound.
pub const ZCDP: Preset = Preset { m: 3.0, sigma2: 40.0, delta: 1.0, k: 1 };
/// Rényi-to-(ε, δ) conversion for an eight-dimensional query.
pub const CONVERSION: Preset = Preset { m: 15.0, sigma2: 630.0, delta: 1.0, k: 8 };

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `y ∈ [-60, 60]` in steps of 0.25 for the densities.
pub fn density_grid() -> Vec<f64> {
    linspace(-60.0, 60.0, 481)
}

/// `y ∈ [0.5, 60]` in steps of 0.5 for the survival functions.
pub fn tail_grid() -> Vec<f64> {
    linspace(0.5, 60.0, 120)
}

/// `σ² ∈ [1, 100]` in unit steps.
pub fn variance_grid() -> Vec<f64> {
    linspace(1.0, 100.0, 100)
}

/// `ε ∈ [0, 3]` in steps of 0.02; contains ε = 1 exactly.
pub fn delta_eps_grid() -> Vec<f64> {
    (0..=150).map(|i| i as f64 / 50.0).collect()
}

/// Orders α from 1.05 to 100, log-spaced in α - 1.
pub fn alpha_grid() -> Vec<f64> {
    linspace(0.05f64.ln(), 99f64.ln(), 60)
        .into_iter()
        .map(|t| 1.0 + t.exp())
        .collect()
}

/// `ε ∈ [0.1, 2]` in steps of 0.05; contains ε = 0.9 exactly.
pub fn conversion_eps_grid() -> Vec<f64> {
    (2..=40).map(|i| i as f64 / 20.0).collect()
}

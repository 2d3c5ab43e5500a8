#![allow(dead_code)]

use osgt_dp::dist::OsgtParams;
use osgt_dp::quad::{integrate, QuadOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Asymptotic 1% critical value of the one-sample KS statistic, times √n.
pub const KS_CRIT_1PCT: f64 = 1.627_58;

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

pub fn params(m: f64, s2: f64) -> OsgtParams<f64> {
    OsgtParams::new(m, s2).unwrap()
}

/// `sup |F_n - F|` for a sample and a continuous cdf.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

pub struct SamplerRun {
    pub samples: Vec<f64>,
    pub trials: u64,
}

pub fn draw(p: &OsgtParams<f64>, n: usize, seed: u64) -> SamplerRun {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut trials = 0;
    let samples = (0..n)
        .map(|_| {
            let (y, t) = p.sample_counted(&mut rng).unwrap();
            trials += t;
            y
        })
        .collect();
    SamplerRun { samples, trials }
}

/// `∫ g(y) f(y) dy` over `[-50σ - m, 50σ + m]` with a breakpoint at 0.
pub fn moment(p: &OsgtParams<f64>, g: impl Fn(f64) -> f64) -> f64 {
    let w = 50.0 * p.sigma() + p.m();
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_intervals: 4000 };
    integrate(|y| g(y) * p.pdf(y), &[-w, 0.0, w], &opts).unwrap().value
}

mod common;

use common::{draw, ks_statistic, moment, params, rel, KS_CRIT_1PCT};
use osgt_dp::dist::{normal_pdf, OsgtParams};
use osgt_dp::special::{inverse_q, q_function};

const RATIOS: [f64; 6] = [0.01, 0.1, 0.4743, 0.6745, 1.0, 3.0];
const SIGMA2S: [f64; 3] = [1.0, 40.0, 630.0];

fn grid() -> impl Iterator<Item = OsgtParams<f64>> {
    SIGMA2S
        .iter()
        .flat_map(|&s2| RATIOS.iter().map(move |&r| params(r * f64::sqrt(s2), s2)))
}

#[test]
fn density_integrates_to_one() {
    for p in grid() {
        let mass = moment(&p, |_| 1.0);
        assert!((mass - 1.0).abs() < 1e-9, "m={} s2={}: {mass}", p.m(), p.sigma2());
    }
}

#[test]
fn preset_density_mass_on_fixed_window() {
    let p = params(3.0, 40.0);
    let opts = osgt_dp::quad::QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_intervals: 4000 };
    let r = osgt_dp::quad::integrate(|y| p.pdf(y), &[-200.0, 0.0, 200.0], &opts).unwrap();
    assert!((r.value - 1.0).abs() < 1e-10);
}

#[test]
fn cdf_matches_integrated_density() {
    let p = params(3.0, 40.0);
    let opts = osgt_dp::quad::QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_intervals: 4000 };
    let lo = -50.0 * p.sigma() - p.m();
    let r = osgt_dp::quad::integrate(|y| p.pdf(y), &[lo, 0.0, 5.0], &opts).unwrap();
    assert!((r.value - p.cdf(5.0)).abs() < 1e-10);
}

#[test]
fn cdf_derivative_is_density() {
    for p in grid() {
        let s = p.sigma();
        for k in [-4.0, -2.0, -0.5, 0.3, 1.0, 3.0] {
            let y = k * s;
            let h = 1e-5 * s;
            // upper tail through the survival function, where cdf ≈ 1 has no digits left
            let d = if y < 0.0 {
                (p.cdf(y + h) - p.cdf(y - h)) / (2.0 * h)
            } else {
                (p.survival(y - h) - p.survival(y + h)) / (2.0 * h)
            };
            assert!(rel(d, p.pdf(y)) < 1e-6, "m={} s2={} y={y}", p.m(), p.sigma2());
        }
        let below = p.cdf(-1e-14 * s);
        let above = p.cdf(1e-14 * s);
        assert!((below - 0.5).abs() < 1e-12 && (above - 0.5).abs() < 1e-12);
    }
}

#[test]
fn second_moment_matches_variance() {
    for p in grid() {
        let v = moment(&p, |y| y * y);
        assert!(rel(v, p.variance()) < 1e-8, "m={} s2={}", p.m(), p.sigma2());
    }
}

#[test]
fn variance_is_below_input_scale() {
    for p in grid() {
        assert!(p.variance() < p.sigma2());
    }
}

#[test]
fn sub_gaussian_tail_bound() {
    let threshold = inverse_q(0.25).unwrap();
    for &s2 in &SIGMA2S {
        for r in [0.0, 0.1, 0.3, 0.5, threshold] {
            let p = params(r * f64::sqrt(s2), s2);
            assert!(p.is_sub_gaussian());
            for k in 1..=40 {
                let y = 0.25 * k as f64 * p.sigma();
                assert!(p.survival(y) <= (-y * y / (2.0 * s2)).exp());
            }
        }
    }
}

#[test]
fn gaussian_limit() {
    for &s2 in &SIGMA2S {
        let p = params(1e-8, s2);
        let s = s2.sqrt();
        for i in -400..=400 {
            let y = i as f64 * 0.02 * s;
            assert!((p.pdf(y) - normal_pdf(s2, y)).abs() <= 1e-8);
        }
    }
}

#[test]
fn sampler_law_acceptance_and_variance() {
    let p = params(3.0, 40.0);
    let n = 1_000_000;
    let mut run = draw(&p, n, 2024);

    let accept = 2.0 * q_function(p.offset_ratio());
    let observed = n as f64 / run.trials as f64;
    let se = (accept * (1.0 - accept) / run.trials as f64).sqrt();
    assert!((observed - accept).abs() < 3.0 * se, "{observed} vs {accept}");

    let mean = run.samples.iter().sum::<f64>() / n as f64;
    let var = run.samples.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!(rel(var, p.variance()) < 0.01);

    let d = ks_statistic(&mut run.samples, |y| p.cdf(y));
    assert!(d * (n as f64).sqrt() < KS_CRIT_1PCT, "KS {d}");
}

#[test]
fn empirical_density_near_origin() {
    let p = params(3.0, 40.0);
    let n = 1_000_000;
    let run = draw(&p, n, 77);
    let h = 0.25;
    let count = run.samples.iter().filter(|y| y.abs() < h).count() as f64;
    let expected = p.cdf(h) - p.cdf(-h);
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!((count / n as f64 - expected).abs() < 4.0 * se);
}

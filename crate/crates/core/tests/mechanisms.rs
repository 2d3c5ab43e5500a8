mod common;

use common::params;
use osgt_dp::mech::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const RUNS: usize = 100_000;

fn column_stats(outputs: &[Vec<f64>], j: usize) -> (f64, f64) {
    let n = outputs.len() as f64;
    let mean = outputs.iter().map(|o| o[j]).sum::<f64>() / n;
    let var = outputs.iter().map(|o| (o[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn eight_dimensional_osgt_variance() {
    let p = params(15.0, 630.0);
    let q = QueryResult::zeros(8);
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let outs: Vec<Vec<f64>> = (0..RUNS)
        .map(|_| apply_osgt(&q, &p, &mut rng).unwrap().values)
        .collect();
    for j in 0..8 {
        let (_, var) = column_stats(&outs, j);
        assert!((var / 400.0 - 1.0).abs() < 0.03, "coord {j}: {var}");
        assert!((var / p.variance() - 1.0).abs() < 0.03);
    }
}

#[test]
fn all_mechanisms_unbiased_and_variance_matched() {
    let p = params(3.0, 40.0);
    let refs = p.matched_references();
    let q = QueryResult::new(vec![5.0, -5.0, 0.25]);
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    let mut variances = Vec::new();
    for kind in [MechanismKind::Osgt, MechanismKind::Gaussian, MechanismKind::Laplace] {
        let outs: Vec<Vec<f64>> = (0..RUNS)
            .map(|_| {
                let o = match kind {
                    MechanismKind::Osgt => apply_osgt(&q, &p, &mut rng),
                    MechanismKind::Gaussian => apply_gaussian(&q, refs.sigma_g2, &mut rng),
                    MechanismKind::Laplace => apply_laplace(&q, refs.lambda, &mut rng),
                }
                .unwrap();
                assert_eq!(o.mechanism, kind);
                assert_eq!(o.values.len(), q.k());
                o.values
            })
            .collect();
        for (j, &target) in q.values.iter().enumerate() {
            let (mean, var) = column_stats(&outs, j);
            assert!((mean - target).abs() < 4.0 * (var / RUNS as f64).sqrt(), "{kind:?} coord {j}");
            variances.push(var);
        }
    }
    for a in &variances {
        for b in &variances {
            assert!((a / b - 1.0).abs() < 0.03);
        }
    }
}

#[test]
fn laplace_variance_is_two_lambda_squared() {
    let q = QueryResult::zeros(1);
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let lambda = laplace_scale(1.0, 1.0).unwrap();
    assert_eq!(lambda, 1.0);
    let outs: Vec<Vec<f64>> = (0..RUNS)
        .map(|_| apply_laplace(&q, lambda, &mut rng).unwrap().values)
        .collect();
    let (_, var) = column_stats(&outs, 0);
    assert!((var / 2.0 - 1.0).abs() < 0.03);
}

#[test]
fn output_records_noise_parameters() {
    let p = params(3.0, 40.0);
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let o = apply_osgt(&QueryResult::zeros(2), &p, &mut rng).unwrap();
    assert_eq!(o.params, NoiseParams::Osgt { m: 3.0, sigma2: 40.0 });
}

mod common;

use common::{params, rel};
use osgt_dp::account::osgt_delta;
use osgt_dp::calibrate::*;
use osgt_dp::mech::Sensitivity;

#[test]
fn epsilon_for_tiny_delta() {
    let p = params(3.0, 40.0);
    let e = epsilon_for_delta(&p, 1.0, 1e-10).unwrap();
    assert!((e - 0.94).abs() < 0.02);
    let g = gaussian_epsilon_for_delta(p.variance(), 1.0, 1e-10).unwrap();
    assert!((g - 1.12).abs() < 0.02);
    let back = osgt_delta(&p, 1.0, e).unwrap().delta;
    assert!(rel(back, 1e-10) < 1e-6);
}

#[test]
fn sigma2_recovers_preset() {
    let s2: f64 = sigma2_for_target(3.0, 1.0, 1.0, 7.8e-12).unwrap();
    assert!((s2 / 40.0 - 1.0).abs() < 0.02);
    let tighter = sigma2_for_target(3.0, 1.0, 1.0, 7.8e-13).unwrap();
    assert!(tighter > s2);
}

#[test]
fn tighter_targets_need_more_noise() {
    let mut last = 0.0;
    for k in 2..14 {
        let s2 = sigma2_for_target(2.0, 1.0, 0.5, 10f64.powi(-k)).unwrap();
        assert!(s2 > last);
        last = s2;
    }
}

#[test]
fn one_dimensional_comparison_table() {
    let p = params(3.0, 40.0);
    let eps: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
    let rows = compare_mechanisms(&p, &Sensitivity::scalar(1.0).unwrap(), &eps).unwrap();
    let at_one = rows.iter().find(|r| (r.eps - 1.0).abs() < 1e-12).unwrap();
    assert!(rel(at_one.delta_osgt, 7.8e-12) < 0.1);
    assert!(rel(at_one.delta_gaussian, 3.9e-9) < 0.1);
    assert!(rows.iter().filter(|r| r.delta_osgt < 1e-3).all(|r| r.ratio > 1.0));
}

#[test]
fn eight_dimensional_comparison_table() {
    let p = params(15.0, 630.0);
    let s = Sensitivity::identical(1.0, 8).unwrap();
    let rows = compare_mechanisms(&p, &s, &[0.5, 0.9, 1.5]).unwrap();
    let r = rows[1];
    assert!(rel(r.delta_osgt, 1.44e-14) < 0.15);
    assert!(rel(r.delta_gaussian, 2.23e-11) < 0.15);
    assert!(r.ratio > 1e3);
    assert!(rows.iter().all(|r| r.ratio > 1.0));
}

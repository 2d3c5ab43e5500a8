//! Inverse problems: the ε or σ² that meets a δ target, and side-by-side
//! δ tables for the OSGT and matched Gaussian mechanisms.

use crate::account::{
    gaussian_delta, gaussian_delta_via_renyi, osgt_delta, osgt_delta_via_renyi,
};
use crate::dist::OsgtParams;
use crate::error::{Error, Result};
use crate::mech::{MechanismKind, Sensitivity};
use crate::scalar::Scalar;

/// Largest ε the bracket search will try.
pub const EPS_CEILING: f64 = 1e6;

/// What a calibration is asked to meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTarget<T> {
    pub target_delta: T,
    pub target_eps: Option<T>,
    pub sensitivity: Sensitivity<T>,
    pub mechanism: MechanismKind,
}

impl<T: Scalar> CalibrationTarget<T> {
    pub fn new(
        target_delta: T,
        target_eps: Option<T>,
        sensitivity: Sensitivity<T>,
        mechanism: MechanismKind,
    ) -> Result<Self> {
        check_target(target_delta)?;
        if let Some(e) = target_eps {
            if !(e.is_finite() && e >= T::zero()) {
                return Err(Error::domain(format!("target eps must be finite and >= 0, got {e}")));
            }
        }
        Ok(Self { target_delta, target_eps, sensitivity, mechanism })
    }
}

fn check_target<T: Scalar>(target: T) -> Result<()> {
    if target > T::zero() && target < T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("target delta must lie in (0, 1), got {target}")))
    }
}

/// Smallest ε with `delta(ε) ≤ target`, for a δ curve nonincreasing in ε.
/// Returns 0 when the target already holds at ε = 0.
fn solve_eps<T, F>(delta: F, target: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    check_target(target)?;
    if delta(T::zero())? <= target {
        return Ok(T::zero());
    }
    let mut lo = T::zero();
    let mut hi = T::one();
    while delta(hi)? > target {
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > T::lit(EPS_CEILING) {
            return Err(Error::Unreachable(format!(
                "delta stays above {target:e} for every eps up to {EPS_CEILING:e}"
            )));
        }
    }
    let tol = T::lit(1e-12).max(T::lit(8.0) * T::epsilon());
    for _ in 0..300 {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if delta(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// ε at which the 1-D OSGT mechanism reaches `target_delta`.
pub fn epsilon_for_delta<T: Scalar>(p: &OsgtParams<T>, delta_q: T, target_delta: T) -> Result<T> {
    solve_eps(|e| osgt_delta(p, delta_q, e).map(|pt| pt.delta), target_delta)
}

/// ε at which the Gaussian mechanism reaches `target_delta`.
pub fn gaussian_epsilon_for_delta<T: Scalar>(sigma_g2: T, delta2: T, target_delta: T) -> Result<T> {
    solve_eps(|e| gaussian_delta(sigma_g2, delta2, e).map(|pt| pt.delta), target_delta)
}

const MONOTONE_SCAN: usize = 32;

/// Smallest σ² (in log scale) with `delta(σ²) ≤ target`, checking on the
/// final bracket that δ really decreases in σ².
fn solve_sigma2<T, F>(delta: F, target: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    check_target(target)?;
    let at = |log_s2: T| delta(log_s2.exp());
    let step = T::lit(4.0).ln();
    let limit = T::lit(700.0).min(T::max_value().ln() - T::lit(2.0));

    let mut lo = T::zero();
    let mut hi = T::zero();
    if at(T::zero())? > target {
        while at(hi)? > target {
            lo = hi;
            hi = hi + step;
            if hi > limit {
                return Err(Error::Unreachable(format!(
                    "delta stays above {target:e} for every sigma2 up to e^{limit}"
                )));
            }
        }
    } else {
        while at(lo)? <= target {
            hi = lo;
            lo = lo - step;
            if lo < -limit {
                return Err(Error::Unreachable(format!(
                    "delta stays below {target:e} for every sigma2 down to e^-{limit}"
                )));
            }
        }
    }

    let mut prev = at(lo)?;
    for i in 1..=MONOTONE_SCAN {
        let x = lo + (hi - lo) * T::from_count(i) / T::from_count(MONOTONE_SCAN);
        let v = at(x)?;
        if v > prev * (T::one() + T::lit(1e-9)) {
            return Err(Error::NonMonotone(format!(
                "delta rises from {prev:e} to {v:e} as sigma2 grows to {}",
                x.exp()
            )));
        }
        prev = v;
    }

    let tol = T::lit(1e-13).max(T::lit(8.0) * T::epsilon());
    for _ in 0..300 {
        if hi - lo <= tol * T::one().max(hi.abs()) {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if at(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}

/// σ² (with `m` fixed) at which the 1-D OSGT mechanism reaches
/// `target_delta` at `eps`.
pub fn sigma2_for_target<T: Scalar>(m: T, delta_q: T, eps: T, target_delta: T) -> Result<T> {
    OsgtParams::new(m, T::one())?;
    solve_sigma2(
        |s2| {
            let p = OsgtParams::new(m, s2)?;
            osgt_delta(&p, delta_q, eps).map(|pt| pt.delta)
        },
        target_delta,
    )
}

/// Gaussian σ_g² meeting `target_delta` at `eps`.
pub fn gaussian_sigma2_for_target<T: Scalar>(delta2: T, eps: T, target_delta: T) -> Result<T> {
    solve_sigma2(|s2| gaussian_delta(s2, delta2, eps).map(|pt| pt.delta), target_delta)
}

/// One row of [`compare_mechanisms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow<T> {
    pub eps: T,
    pub delta_osgt: T,
    pub delta_gaussian: T,
    /// `delta_gaussian / delta_osgt`; above 1 when OSGT is better.
    pub ratio: T,
}

/// δ of OSGT and of the variance-matched Gaussian on `eps_grid`. Exact
/// formulas for `k = 1`, the Rényi conversion otherwise.
pub fn compare_mechanisms<T: Scalar>(
    p: &OsgtParams<T>,
    s: &Sensitivity<T>,
    eps_grid: &[T],
) -> Result<Vec<ComparisonRow<T>>> {
    let sigma_g2 = p.matched_references().sigma_g2;
    eps_grid
        .iter()
        .map(|&eps| {
            let (o, g) = if s.k() == 1 {
                let delta = s.per_coord().unwrap_or(s.delta2());
                (
                    osgt_delta(p, delta, eps)?.delta,
                    gaussian_delta(sigma_g2, s.delta2(), eps)?.delta,
                )
            } else {
                (
                    osgt_delta_via_renyi(p, s, eps)?.point.delta,
                    gaussian_delta_via_renyi(sigma_g2, s.delta2(), eps)?.point.delta,
                )
            };
            Ok(ComparisonRow { eps, delta_osgt: o, delta_gaussian: g, ratio: g / o })
        })
        .collect()
}

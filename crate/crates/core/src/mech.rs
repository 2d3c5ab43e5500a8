//! Output perturbation: add i.i.d. OSGT, Gaussian or Laplace noise to a
//! k-dimensional query result.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::dist::OsgtParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Global sensitivities of a k-dimensional query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity<T> {
    delta1: T,
    delta2: T,
    per_coord: Option<T>,
    k: usize,
}

impl<T: Scalar> Sensitivity<T> {
    pub fn new(delta1: T, delta2: T, k: usize) -> Result<Self> {
        check_positive("delta1", delta1)?;
        check_positive("delta2", delta2)?;
        if k == 0 {
            return Err(Error::domain("query dimension k must be at least 1"));
        }
        Ok(Self { delta1, delta2, per_coord: None, k })
    }

    /// Every coordinate has the same sensitivity `delta`, so
    /// `Δ₁ = kΔ` and `Δ₂ = √k·Δ`.
    pub fn identical(delta: T, k: usize) -> Result<Self> {
        check_positive("delta", delta)?;
        if k == 0 {
            return Err(Error::domain("query dimension k must be at least 1"));
        }
        let kf = T::from_count(k);
        Ok(Self {
            delta1: kf * delta,
            delta2: kf.sqrt() * delta,
            per_coord: Some(delta),
            k,
        })
    }

    /// Explicit per-coordinate sensitivity together with `Δ₁`, `Δ₂`.
    pub fn with_per_coord(delta1: T, delta2: T, per_coord: T, k: usize) -> Result<Self> {
        let mut s = Self::new(delta1, delta2, k)?;
        check_positive("per-coordinate delta", per_coord)?;
        let kf = T::from_count(k);
        let slack = T::one() + T::lit(64.0) * T::epsilon();
        if delta2 * delta2 > kf * per_coord * per_coord * slack {
            return Err(Error::domain(format!(
                "delta2^2 = {} exceeds k * delta^2 = {}",
                delta2 * delta2,
                kf * per_coord * per_coord
            )));
        }
        if delta1 > kf * per_coord * slack {
            return Err(Error::domain(format!(
                "delta1 = {delta1} exceeds k * delta = {}",
                kf * per_coord
            )));
        }
        s.per_coord = Some(per_coord);
        Ok(s)
    }

    /// One-dimensional query with sensitivity `delta`.
    pub fn scalar(delta: T) -> Result<Self> {
        Self::identical(delta, 1)
    }

    pub fn delta1(&self) -> T {
        self.delta1
    }

    pub fn delta2(&self) -> T {
        self.delta2
    }

    pub fn per_coord(&self) -> Option<T> {
        self.per_coord
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

fn check_positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> QueryResult<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zeros(k: usize) -> Self {
        Self { values: vec![T::zero(); k] }
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismKind {
    Osgt,
    Gaussian,
    Laplace,
}

impl MechanismKind {
    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Osgt => "osgt",
            MechanismKind::Gaussian => "gaussian",
            MechanismKind::Laplace => "laplace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseParams<T> {
    Osgt { m: T, sigma2: T },
    Gaussian { sigma_g2: T },
    Laplace { lambda: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanismOutput<T> {
    pub values: Vec<T>,
    pub mechanism: MechanismKind,
    pub params: NoiseParams<T>,
}

pub fn apply_osgt<T, R>(q: &QueryResult<T>, p: &OsgtParams<T>, rng: &mut R) -> Result<MechanismOutput<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    let values = q
        .values
        .iter()
        .map(|&v| p.sample(rng).map(|y| v + y))
        .collect::<Result<Vec<_>>>()?;
    Ok(MechanismOutput {
        values,
        mechanism: MechanismKind::Osgt,
        params: NoiseParams::Osgt { m: p.m(), sigma2: p.sigma2() },
    })
}

pub fn apply_gaussian<T, R>(q: &QueryResult<T>, sigma_g2: T, rng: &mut R) -> Result<MechanismOutput<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    check_positive("sigma_g2", sigma_g2)?;
    let sd = sigma_g2.sqrt();
    let values = q
        .values
        .iter()
        .map(|&v| {
            let z: T = StandardNormal.sample(rng);
            v + sd * z
        })
        .collect();
    Ok(MechanismOutput {
        values,
        mechanism: MechanismKind::Gaussian,
        params: NoiseParams::Gaussian { sigma_g2 },
    })
}

pub fn apply_laplace<T, R>(q: &QueryResult<T>, lambda: T, rng: &mut R) -> Result<MechanismOutput<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
    Exp1: Distribution<T>,
{
    check_positive("lambda", lambda)?;
    let values = q
        .values
        .iter()
        .map(|&v| {
            let e: T = Exp1.sample(rng);
            if rng.random::<bool>() {
                v + lambda * e
            } else {
                v - lambda * e
            }
        })
        .collect();
    Ok(MechanismOutput {
        values,
        mechanism: MechanismKind::Laplace,
        params: NoiseParams::Laplace { lambda },
    })
}

/// Pure-DP level of the Laplace mechanism with scale `lambda`.
pub fn laplace_epsilon<T: Scalar>(delta1: T, lambda: T) -> Result<T> {
    check_positive("delta1", delta1)?;
    check_positive("lambda", lambda)?;
    Ok(delta1 / lambda)
}

/// Scale `λ = Δ₁/ε` giving `(ε, 0)`-DP.
pub fn laplace_scale<T: Scalar>(delta1: T, eps: T) -> Result<T> {
    check_positive("delta1", delta1)?;
    check_positive("eps", eps)?;
    Ok(delta1 / eps)
}

/// Privacy loss `ln f_q(y) - ln f_q'(y)` of the 1-D OSGT mechanism.
///
/// Written in differences so that swapping `q` and `q_prime` negates the
/// result exactly.
pub fn privacy_loss<T: Scalar>(p: &OsgtParams<T>, q: T, q_prime: T, y: T) -> T {
    let a = y - q_prime;
    let b = y - q;
    let quad = a * a - b * b;
    let lin = a.abs() - b.abs();
    quad / (T::lit(2.0) * p.sigma2()) + p.m() * lin / p.sigma2()
}

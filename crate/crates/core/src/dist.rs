//! The OSGT distribution: density, cdf, variance, tails and sampling.
//!
//! With input parameters `m ≥ 0` and `σ² > 0` the density is
//!
//! ```text
//! f(y) = exp(-(|y| + m)² / (2σ²)) / S,    S = 2·√(2πσ²)·Q(m/σ)
//!      = exp(-y²/(2σ²) - m|y|/σ²) / S',   S' = exp(m²/(2σ²))·S
//! ```
//!
//! `m` and `σ²` are not the location and scale of the law: the mean is zero
//! and the variance is [`OsgtParams::variance`], always below `σ²` for `m > 0`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::{inverse_q, log_normal_pdf, log_q_function, q_function};

/// Trial cap for the rejection sampler. Reaching it means the RNG is broken.
pub const MAX_SAMPLER_TRIALS: u64 = 1_000_000_000;

/// Validated `(m, σ²)` with the normalizers cached in linear and log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsgtParams<T> {
    m: T,
    sigma2: T,
    sigma: T,
    s: T,
    s_prime: T,
    log_s: T,
    log_s_prime: T,
    log_tail_mass: T,
}

impl<T: Scalar> OsgtParams<T> {
    /// `m = 0` is accepted and gives exactly `N(0, σ²)`.
    pub fn new(m: T, sigma2: T) -> Result<Self> {
        if !m.is_finite() || m < T::zero() {
            return Err(Error::domain(format!("m must be finite and >= 0, got {m}")));
        }
        if !sigma2.is_finite() || sigma2 <= T::zero() {
            return Err(Error::domain(format!("sigma2 must be finite and > 0, got {sigma2}")));
        }
        let two = T::lit(2.0);
        let sigma = sigma2.sqrt();
        // ln(2Q(m/σ))
        let log_tail_mass = T::LN_2() + log_q_function(m / sigma);
        let log_s = log_tail_mass + T::lit(0.5) * (two * T::PI() * sigma2).ln();
        let log_s_prime = m * m / (two * sigma2) + log_s;
        Ok(Self {
            m,
            sigma2,
            sigma,
            s: log_s.exp(),
            s_prime: log_s_prime.exp(),
            log_s,
            log_s_prime,
            log_tail_mass,
        })
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn sigma2(&self) -> T {
        self.sigma2
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// `S = 2·√(2πσ²)·Q(m/σ)`.
    pub fn normalizer(&self) -> T {
        self.s
    }

    /// `S' = exp(m²/(2σ²))·S`, the normalizer of the single-case form.
    pub fn single_case_normalizer(&self) -> T {
        self.s_prime
    }

    pub fn log_normalizer(&self) -> T {
        self.log_s
    }

    pub fn log_single_case_normalizer(&self) -> T {
        self.log_s_prime
    }

    /// `ln(2Q(m/σ))`, the log of the Gaussian tail mass the law renormalizes.
    pub fn log_tail_mass(&self) -> T {
        self.log_tail_mass
    }

    /// `m/σ`.
    pub fn offset_ratio(&self) -> T {
        self.m / self.sigma
    }

    pub fn log_pdf(&self, y: T) -> T {
        let shifted = y.abs() + self.m;
        -shifted * shifted / (T::lit(2.0) * self.sigma2) - self.log_s
    }

    pub fn pdf(&self, y: T) -> T {
        self.log_pdf(y).exp()
    }

    /// Log density of the law shifted to `location`.
    pub fn log_pdf_at(&self, location: T, y: T) -> T {
        self.log_pdf(y - location)
    }

    /// `ln P[Y > y]` for `y ≥ 0`; for negative `y` falls back to the linear form.
    pub fn log_survival(&self, y: T) -> T {
        if y >= T::zero() {
            log_q_function((self.m + y) / self.sigma) - self.log_tail_mass
        } else {
            self.survival(y).ln()
        }
    }

    /// `P[Y > y]`.
    pub fn survival(&self, y: T) -> T {
        if y > T::zero() {
            self.log_survival(y).exp()
        } else {
            T::one() - self.cdf(y)
        }
    }

    /// `P[Y < y]`, continuous and equal to 1/2 at the origin.
    pub fn cdf(&self, y: T) -> T {
        if y <= T::zero() {
            (log_q_function((self.m - y) / self.sigma) - self.log_tail_mass).exp()
        } else {
            T::one() - self.survival(y)
        }
    }

    /// Inverse cdf. Provided for tests and plotting; [`OsgtParams::sample`]
    /// does not use it.
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::domain(format!("quantile requires p in (0, 1), got {p}")));
        }
        let half = T::lit(0.5);
        if p == half {
            return Ok(T::zero());
        }
        let lower = p.min(T::one() - p);
        // Q((m - y)/σ) = 2Q(m/σ)·p for y ≤ 0
        let y = self.m - self.sigma * inverse_q(lower * self.log_tail_mass.exp())?;
        Ok(if p < half { y } else { -y })
    }

    /// `V(m, σ²) = σ² + m² - mσ·φ(m/σ)/Q(m/σ)`.
    pub fn variance(&self) -> T {
        if self.m == T::zero() {
            return self.sigma2;
        }
        let r = self.offset_ratio();
        // φ(r)/Q(r) in log space
        let hazard = (log_normal_pdf(r) - log_q_function(r)).exp();
        self.sigma2 + self.m * self.m - self.m * self.sigma * hazard
    }

    /// Sufficient condition for the law to be σ²-sub-Gaussian: `m/σ ≤ Q⁻¹(1/4)`.
    pub fn is_sub_gaussian(&self) -> bool {
        let threshold = inverse_q(T::lit(0.25)).expect("0.25 is inside (0, 1)");
        self.offset_ratio() <= threshold
    }

    /// Expected number of Gaussian draws per accepted sample, `1/(2Q(m/σ))`.
    pub fn expected_trials(&self) -> T {
        (-self.log_tail_mass).exp()
    }

    /// Exact draw: sample `G ~ N(0, σ²)` until `|G| ≥ m`, return
    /// `sign(G)·(|G| - m)`.
    pub fn sample<R>(&self, rng: &mut R) -> Result<T>
    where
        R: Rng + ?Sized,
        StandardNormal: Distribution<T>,
    {
        self.sample_counted(rng).map(|(y, _)| y)
    }

    /// Like [`OsgtParams::sample`], also returning the number of draws used.
    pub fn sample_counted<R>(&self, rng: &mut R) -> Result<(T, u64)>
    where
        R: Rng + ?Sized,
        StandardNormal: Distribution<T>,
    {
        for trial in 1..=MAX_SAMPLER_TRIALS {
            let z: T = StandardNormal.sample(rng);
            let g = z * self.sigma;
            let magnitude = g.abs();
            if magnitude >= self.m {
                let y = magnitude - self.m;
                return Ok((if g < T::zero() { -y } else { y }, trial));
            }
        }
        Err(Error::SamplerExhausted(MAX_SAMPLER_TRIALS))
    }

    /// Gaussian and Laplace references with the same variance as this law.
    pub fn matched_references(&self) -> MatchedReferences<T> {
        let v = self.variance();
        MatchedReferences {
            sigma_g2: v,
            lambda: (v / T::lit(2.0)).sqrt(),
        }
    }

    /// Survival-function ratios against a reference law on `grid`.
    ///
    /// The ratio is oriented heavier-over-lighter: OSGT over Gaussian, and
    /// Laplace over OSGT. Against another OSGT law it is `self / other`.
    pub fn survival_ratio_scan(
        &self,
        reference: TailReference<T>,
        grid: &[T],
    ) -> Result<TailVerdict<T>> {
        if grid.is_empty() {
            return Err(Error::domain("survival_ratio_scan needs a non-empty grid"));
        }
        if grid.iter().any(|&y| !(y > T::zero()) || !y.is_finite()) {
            return Err(Error::domain("grid points must be positive and finite"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("grid must be strictly increasing"));
        }
        let refs = self.matched_references();
        let ratio_samples: Vec<(T, T)> = grid
            .iter()
            .map(|&y| {
                let own = self.log_survival(y);
                let log_ratio = match reference {
                    TailReference::MatchedGaussian => own - gaussian_log_survival(refs.sigma_g2, y),
                    TailReference::MatchedLaplace => laplace_log_survival(refs.lambda, y) - own,
                    TailReference::Osgt(other) => own - other.log_survival(y),
                };
                (y, log_ratio.exp())
            })
            .collect();
        Ok(TailVerdict::from_samples(ratio_samples))
    }
}

/// Variance-matched Gaussian and Laplace parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedReferences<T> {
    /// Gaussian variance `σ_g² = V(m, σ²)`.
    pub sigma_g2: T,
    /// Laplace scale with `2λ² = V(m, σ²)`.
    pub lambda: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailReference<T> {
    MatchedGaussian,
    MatchedLaplace,
    Osgt(OsgtParams<T>),
}

/// Result of a survival-ratio scan.
#[derive(Debug, Clone, PartialEq)]
pub struct TailVerdict<T> {
    /// First grid point from which the ratio increases strictly through the
    /// end of the grid; `None` if the last step is not an increase.
    pub y0: Option<T>,
    pub ratio_samples: Vec<(T, T)>,
}

impl<T: Scalar> TailVerdict<T> {
    fn from_samples(ratio_samples: Vec<(T, T)>) -> Self {
        let n = ratio_samples.len();
        let rising = |i: usize| ratio_samples[i - 1].1 < ratio_samples[i].1;
        let y0 = if n >= 2 && rising(n - 1) {
            let mut start = n - 1;
            while start >= 1 && rising(start) {
                start -= 1;
            }
            Some(ratio_samples[start].0)
        } else {
            None
        };
        Self { y0, ratio_samples }
    }

    pub fn eventually_increasing(&self) -> bool {
        self.y0.is_some()
    }
}

/// `ln P[N(0, σ_g²) > y]`.
pub fn gaussian_log_survival<T: Scalar>(sigma_g2: T, y: T) -> T {
    log_q_function(y / sigma_g2.sqrt())
}

/// `ln P[Laplace(0, λ) > y]` for `y ≥ 0`.
pub fn laplace_log_survival<T: Scalar>(lambda: T, y: T) -> T {
    -T::LN_2() - y / lambda
}

pub fn normal_pdf<T: Scalar>(sigma2: T, y: T) -> T {
    let sigma = sigma2.sqrt();
    (log_normal_pdf(y / sigma) - sigma.ln()).exp()
}

pub fn laplace_pdf<T: Scalar>(lambda: T, y: T) -> T {
    (-y.abs() / lambda).exp() / (T::lit(2.0) * lambda)
}

/// `P[N(0, σ²) > y]`.
pub fn normal_survival<T: Scalar>(sigma2: T, y: T) -> T {
    q_function(y / sigma2.sqrt())
}

/// `P[Laplace(0, λ) > y]`.
pub fn laplace_survival<T: Scalar>(lambda: T, y: T) -> T {
    if y >= T::zero() {
        T::lit(0.5) * (-y / lambda).exp()
    } else {
        T::one() - T::lit(0.5) * (y / lambda).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn p(m: f64, s2: f64) -> OsgtParams<f64> {
        OsgtParams::new(m, s2).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(OsgtParams::new(-1.0, 1.0).is_err());
        assert!(OsgtParams::new(1.0, 0.0).is_err());
        assert!(OsgtParams::new(1.0, -2.0).is_err());
        assert!(OsgtParams::new(f64::NAN, 1.0).is_err());
        assert!(OsgtParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn normalizers_match_their_definitions() {
        let d = p(3.0, 40.0);
        let q = q_function(3.0 / 40f64.sqrt());
        let s = 2.0 * (2.0 * std::f64::consts::PI * 40.0).sqrt() * q;
        assert!((d.normalizer() - s).abs() < 1e-13 * s);
        let s_prime = (9.0_f64 / 80.0).exp() * s;
        assert!((d.single_case_normalizer() - s_prime).abs() < 1e-13 * s_prime);
        assert!((d.pdf(0.0) - 1.0 / s_prime).abs() < 1e-13 / s_prime);
    }

    #[test]
    fn zero_offset_is_exactly_gaussian() {
        let d = p(0.0, 2.5);
        assert_eq!(d.variance(), 2.5);
        for y in [-3.0, -0.5, 0.0, 0.7, 4.0] {
            assert!((d.pdf(y) - normal_pdf(2.5, y)).abs() < 1e-15);
        }
    }

    #[test]
    fn tiny_offset_approaches_gaussian() {
        let d = p(1e-8, 40.0);
        for i in -200..=200 {
            let y = i as f64 * 0.25;
            assert!((d.pdf(y) - normal_pdf(40.0, y)).abs() <= 1e-8);
        }
    }

    #[test]
    fn cdf_is_half_at_origin_and_saturates() {
        let d = p(3.0, 40.0);
        assert!((d.cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((d.cdf(1e-12) - 0.5).abs() < 1e-12);
        assert!(d.cdf(1e4) == 1.0);
        assert!(d.cdf(-1e4) == 0.0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let d = p(3.0, 40.0);
        for &u in &[1e-9, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let y = d.quantile(u).unwrap();
            assert!((d.cdf(y) - u).abs() < 1e-12 * u.max(1e-3), "u={u}");
        }
        assert!(d.quantile(0.0).is_err());
    }

    #[test]
    fn variance_reference_values() {
        // mpmath at 60 digits
        assert!((p(3.0, 40.0).variance() - 27.704_678_326_334_605).abs() < 1e-11);
        assert!((p(15.0, 630.0).variance() - 398.217_473_533_015_146).abs() < 1e-9);
        assert!((p(2.0, 20.0).variance() - 14.137_217_908_778_444).abs() < 1e-11);
        assert!((p(3.0, 40.0).variance() - 27.7047).abs() < 1e-3);
    }

    #[test]
    fn sub_gaussian_condition() {
        assert!(p(3.0, 40.0).is_sub_gaussian());
        assert!(p(2.0, 20.0).is_sub_gaussian());
        assert!(!p(1.0, 1.0).is_sub_gaussian());
        assert!((p(3.0, 40.0).offset_ratio() - 0.4743).abs() < 1e-4);
        assert!((p(2.0, 20.0).offset_ratio() - 0.4472).abs() < 1e-4);
    }

    #[test]
    fn matched_references() {
        let r = p(3.0, 40.0).matched_references();
        assert!((r.sigma_g2 - 27.7047).abs() < 1e-3);
        assert!((2.0 * r.lambda * r.lambda - r.sigma_g2).abs() < 1e-12);
        assert_eq!(p(0.0, 7.0).matched_references().sigma_g2, 7.0);
    }

    #[test]
    fn sampler_with_zero_offset_never_rejects() {
        let d = p(0.0, 1.0);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (_, trials) = d.sample_counted(&mut rng).unwrap();
            assert_eq!(trials, 1);
        }
    }

    #[test]
    fn sampler_matches_plain_normal_stream_when_m_is_zero() {
        let d = p(0.0, 4.0);
        let mut a = ChaCha20Rng::seed_from_u64(11);
        let mut b = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..100 {
            let z: f64 = StandardNormal.sample(&mut b);
            assert_eq!(d.sample(&mut a).unwrap(), 2.0 * z);
        }
    }

    #[test]
    fn tail_scan_against_itself_is_flat() {
        let d = p(3.0, 40.0);
        let grid: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let v = d.survival_ratio_scan(TailReference::Osgt(d), &grid).unwrap();
        assert!(v.ratio_samples.iter().all(|&(_, r)| r == 1.0));
        assert!(!v.eventually_increasing());
    }

    #[test]
    fn tail_scan_validates_grid() {
        let d = p(3.0, 40.0);
        assert!(d.survival_ratio_scan(TailReference::MatchedGaussian, &[]).is_err());
        assert!(d.survival_ratio_scan(TailReference::MatchedGaussian, &[0.0, 1.0]).is_err());
        assert!(d.survival_ratio_scan(TailReference::MatchedGaussian, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn tail_ordering_on_preset_grid() {
        let d = p(3.0, 40.0);
        let grid: Vec<f64> = (0..=100).map(|i| 10.0 + 0.5 * i as f64).collect();
        let g = d.survival_ratio_scan(TailReference::MatchedGaussian, &grid).unwrap();
        let y0 = g.y0.expect("OSGT/Gaussian ratio increases eventually");
        assert!(y0 <= 60.0);
        let l = d.survival_ratio_scan(TailReference::MatchedLaplace, &grid).unwrap();
        assert!(l.eventually_increasing());
        assert!(l.ratio_samples.iter().all(|&(_, r)| r > 1.0));
    }

    #[test]
    fn single_precision_density() {
        let d = OsgtParams::<f32>::new(3.0, 40.0).unwrap();
        assert!((d.variance() - 27.7047).abs() < 1e-2);
        assert!((d.cdf(0.0) - 0.5).abs() < 1e-6);
    }
}

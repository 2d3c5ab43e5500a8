//! Privacy accounting for the OSGT and Gaussian mechanisms.
//!
//! Exact one-dimensional `δ(ε)`, zCDP bounds, the closed-form Rényi
//! divergence, and the Rényi-to-`(ε, δ)` conversion used for `k > 1`.
//! Products such as `e^ε·Q(x)` are formed in log space throughout.
//!
//! The two quadrature oracles at the bottom integrate the densities directly
//! and share no formula with the closed forms; they exist to check them.

use crate::dist::OsgtParams;
use crate::error::{Error, Result};
use crate::mech::Sensitivity;
use crate::quad::{integrate, QuadOptions};
use crate::scalar::Scalar;
use crate::special::{log_normal_cdf, log_q_difference, log_q_function, log_sum_exp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSource {
    /// Closed-form OSGT `δ(ε)` for a one-dimensional query.
    ExactOsgt,
    GaussianAnalytic,
    RenyiConversion,
    QuadratureOracle,
}

impl DeltaSource {
    pub fn name(self) -> &'static str {
        match self {
            DeltaSource::ExactOsgt => "exact_osgt",
            DeltaSource::GaussianAnalytic => "gaussian_analytic",
            DeltaSource::RenyiConversion => "renyi_conversion",
            DeltaSource::QuadratureOracle => "quadrature_oracle",
        }
    }
}

/// An `(ε, δ)` pair and where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyPoint<T> {
    pub eps: T,
    pub delta: T,
    pub source: DeltaSource,
}

/// Rounding slack tolerated before a δ outside `[0, 1]` is an error.
pub fn clamp_tolerance<T: Scalar>() -> T {
    T::lit(1e-12).max(T::lit(16.0) * T::epsilon())
}

fn clamp_probability<T: Scalar>(raw: T, what: &str) -> Result<T> {
    let tol = clamp_tolerance::<T>();
    if raw.is_nan() {
        return Err(Error::Consistency(format!("{what} evaluated to NaN")));
    }
    if raw < T::zero() {
        if raw >= -tol {
            return Ok(T::zero());
        }
        return Err(Error::Consistency(format!("{what} = {raw:e} is negative beyond rounding")));
    }
    if raw > T::one() {
        if raw <= T::one() + tol {
            return Ok(T::one());
        }
        return Err(Error::Consistency(format!("{what} = {raw:e} exceeds 1 beyond rounding")));
    }
    Ok(raw)
}

fn check_sensitivity<T: Scalar>(name: &str, d: T) -> Result<()> {
    if d.is_finite() && d > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {d}")))
    }
}

fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if eps.is_finite() && eps >= T::zero() {
        Ok(())
    } else {
        Err(Error::domain(format!("eps must be finite and >= 0, got {eps}")))
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha.is_finite() && alpha > T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must be finite and > 1, got {alpha}")))
    }
}

/// `Q(x₁) - e^ε·Q(x₂)` as `-Q(x₁)·expm1(ε + ln Q(x₂) - ln Q(x₁))`, scaled by
/// `exp(-log_norm)`. Keeps full relative accuracy when the result is tiny.
fn q_minus_scaled_q<T: Scalar>(log_q1: T, log_q2: T, eps: T, log_norm: T) -> T {
    if log_q1 == T::neg_infinity() {
        return T::zero();
    }
    -(log_q1 - log_norm).exp() * (eps + log_q2 - log_q1).exp_m1()
}

/// The ε at which the exact OSGT δ switches formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseBoundary<T> {
    pub eps_star: T,
}

impl<T: Scalar> CaseBoundary<T> {
    /// `ε* = (Δ² + 2mΔ)/(2σ²)`.
    pub fn new(p: &OsgtParams<T>, delta_q: T) -> Result<Self> {
        check_sensitivity("Delta", delta_q)?;
        let two = T::lit(2.0);
        Ok(Self {
            eps_star: (delta_q * delta_q + two * p.m() * delta_q) / (two * p.sigma2()),
        })
    }

    /// True when ε lies in the small-ε case, `σ²ε/Δ ≤ Δ/2 + m`.
    pub fn first_case(&self, eps: T) -> bool {
        eps <= self.eps_star
    }
}

/// Both formulas of the exact OSGT δ evaluated at the same ε, unclamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaBranches<T> {
    /// `1 - [Q(1/(2b) - bε) + e^ε·Q(1/(2b) + bε)] / (2Q(m/σ))`
    pub first: T,
    /// `[Q(aε - 1/(2a)) - e^ε·Q(aε + 1/(2a))] / (2Q(m/σ))`
    pub second: T,
}

/// Evaluates both δ formulas. See [`osgt_delta_branches_with`].
pub fn osgt_delta_branches<T: Scalar>(p: &OsgtParams<T>, delta_q: T, eps: T) -> Result<DeltaBranches<T>> {
    osgt_delta_branches_with(p, delta_q, eps, log_q_function)
}

/// Like [`osgt_delta_branches`] with a caller-supplied `ln Q`.
///
/// The normalizer `2Q(m/σ)` still comes from `p`, so a faulty `log_q` shows
/// up as a jump between the branches at `ε*`. The self-test uses this for
/// fault injection.
pub fn osgt_delta_branches_with<T, F>(
    p: &OsgtParams<T>,
    delta_q: T,
    eps: T,
    log_q: F,
) -> Result<DeltaBranches<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    check_sensitivity("Delta", delta_q)?;
    check_eps(eps)?;
    let two = T::lit(2.0);
    let sigma = p.sigma();
    let a = sigma / delta_q;
    let b = sigma / (two * p.m() + delta_q);
    let log_norm = p.log_tail_mass();

    let u = T::one() / (two * b);
    let lse = log_sum_exp(&[log_q(u - b * eps), eps + log_q(u + b * eps)]);
    let first = -(lse - log_norm).exp_m1();

    let v = T::one() / (two * a);
    let second = q_minus_scaled_q(log_q(a * eps - v), log_q(a * eps + v), eps, log_norm);
    Ok(DeltaBranches { first, second })
}

/// Exact `δ(ε)` of the one-dimensional OSGT mechanism with sensitivity `Δ`.
pub fn osgt_delta<T: Scalar>(p: &OsgtParams<T>, delta_q: T, eps: T) -> Result<PrivacyPoint<T>> {
    let br = osgt_delta_branches(p, delta_q, eps)?;
    let raw = if CaseBoundary::new(p, delta_q)?.first_case(eps) {
        br.first
    } else {
        br.second
    };
    Ok(PrivacyPoint {
        eps,
        delta: clamp_probability(raw, "OSGT delta")?,
        source: DeltaSource::ExactOsgt,
    })
}

/// Exact `δ(ε)` of the Gaussian mechanism,
/// `Q(σε/Δ₂ - Δ₂/(2σ)) - e^ε·Q(σε/Δ₂ + Δ₂/(2σ))`.
pub fn gaussian_delta<T: Scalar>(sigma_g2: T, delta2: T, eps: T) -> Result<PrivacyPoint<T>> {
    check_sensitivity("sigma_g2", sigma_g2)?;
    check_sensitivity("Delta2", delta2)?;
    check_eps(eps)?;
    let sigma = sigma_g2.sqrt();
    let c = sigma * eps / delta2;
    let h = delta2 / (T::lit(2.0) * sigma);
    let raw = q_minus_scaled_q(log_q_function(c - h), log_q_function(c + h), eps, T::zero());
    Ok(PrivacyPoint {
        eps,
        delta: clamp_probability(raw, "Gaussian delta")?,
        source: DeltaSource::GaussianAnalytic,
    })
}

/// `(ζ, ρ)`-zCDP bound at a fixed Rényi order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZcdpBound<T> {
    pub zeta: T,
    pub rho: T,
    pub k: usize,
    /// Order at which `zeta` was evaluated; ζ depends on it.
    pub alpha: T,
}

impl<T: Scalar> ZcdpBound<T> {
    /// `ζ + αρ`, an upper bound on the Rényi divergence of order α.
    pub fn bound(&self) -> T {
        self.zeta + self.alpha * self.rho
    }
}

/// zCDP of the k-dimensional OSGT mechanism:
/// `ρ = Δ₂²/(2σ²)`, `ζ = k/(α-1)·ln((1 - Q(m/σ))/Q(m/σ))`.
pub fn osgt_zcdp<T: Scalar>(p: &OsgtParams<T>, delta2: T, k: usize, alpha: T) -> Result<ZcdpBound<T>> {
    check_sensitivity("Delta2", delta2)?;
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::domain("query dimension k must be at least 1"));
    }
    let r = p.offset_ratio();
    let log_odds = log_q_function(-r) - log_q_function(r);
    Ok(ZcdpBound {
        zeta: T::from_count(k) * log_odds / (alpha - T::one()),
        rho: delta2 * delta2 / (T::lit(2.0) * p.sigma2()),
        k,
        alpha,
    })
}

/// `ρ = Δ₂²/(2σ_g²)` of the Gaussian mechanism.
pub fn gaussian_rho<T: Scalar>(sigma_g2: T, delta2: T) -> Result<T> {
    check_sensitivity("sigma_g2", sigma_g2)?;
    check_sensitivity("Delta2", delta2)?;
    Ok(delta2 * delta2 / (T::lit(2.0) * sigma_g2))
}

/// Closed-form Rényi divergence with its intermediates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiEvaluation<T> {
    pub alpha: T,
    /// Divergence in nats.
    pub tau: T,
    /// Per-coordinate distance `Δ_{q,q'}` used for `b1..b4`.
    pub delta_q: T,
    pub b1: T,
    pub b2: T,
    pub b3: T,
    pub b4: T,
    /// `ln A`.
    pub log_a: T,
    /// `ln B̄`.
    pub log_b_bar: T,
}

/// `ln B̄` and the `b` intermediates for one coordinate at distance `d`.
fn renyi_b_bar<T: Scalar>(p: &OsgtParams<T>, d: T, alpha: T) -> Result<RenyiEvaluation<T>> {
    let one = T::one();
    let two = T::lit(2.0);
    let m = p.m();
    let sigma = p.sigma();
    let b1 = -m + (alpha - one) * d;
    let b2 = -m - alpha * d;
    let b3 = alpha * d - m * (one - two * alpha);
    let b4 = b3 - d;
    let log_a = alpha * (alpha - one) * (T::lit(4.0) * m * d + T::lit(4.0) * m * m) / (two * p.sigma2());
    let mut terms = vec![log_normal_cdf(b1 / sigma), log_normal_cdf(b2 / sigma)];
    if d > T::zero() {
        // A·(Φ(b3/σ) - Φ(b4/σ)); A overflows and the difference cancels,
        // so both stay in log form
        terms.push(log_a + log_q_difference(b4 / sigma, b3 / sigma)?);
    }
    Ok(RenyiEvaluation {
        alpha,
        tau: T::nan(),
        delta_q: d,
        b1,
        b2,
        b3,
        b4,
        log_a,
        log_b_bar: log_sum_exp(&terms),
    })
}

/// Exact Rényi divergence `D_α(f_q ‖ f_q')` of two OSGT laws at distance
/// `|q - q'| = delta_q`.
pub fn osgt_renyi_closed_form<T: Scalar>(p: &OsgtParams<T>, delta_q: T, alpha: T) -> Result<RenyiEvaluation<T>> {
    check_alpha(alpha)?;
    if !(delta_q.is_finite() && delta_q >= T::zero()) {
        return Err(Error::domain(format!("Delta_qq' must be finite and >= 0, got {delta_q}")));
    }
    let mut ev = renyi_b_bar(p, delta_q, alpha)?;
    ev.tau = alpha * delta_q * delta_q / (T::lit(2.0) * p.sigma2())
        + (ev.log_b_bar - p.log_tail_mass()) / (alpha - T::one());
    if !ev.tau.is_finite() {
        return Err(Error::Consistency(format!("Renyi divergence is {} at alpha {alpha}", ev.tau)));
    }
    Ok(ev)
}

/// Maximum of the closed form over a uniform grid of distances in `[0, Δ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenyiWorstCase<T> {
    pub worst: RenyiEvaluation<T>,
    /// The maximizer is the last grid point `Δ`.
    pub at_endpoint: bool,
    /// `(Δ_{q,q'}, τ)` for every grid point.
    pub scan: Vec<(T, T)>,
}

pub fn osgt_renyi_worst_case<T: Scalar>(
    p: &OsgtParams<T>,
    delta_max: T,
    alpha: T,
    grid_n: usize,
) -> Result<RenyiWorstCase<T>> {
    check_sensitivity("Delta", delta_max)?;
    if grid_n < 2 {
        return Err(Error::domain("worst-case scan needs at least 2 grid points"));
    }
    let last = T::from_count(grid_n - 1);
    let mut scan = Vec::with_capacity(grid_n);
    let mut worst: Option<RenyiEvaluation<T>> = None;
    let mut worst_idx = 0;
    for i in 0..grid_n {
        let d = if i == grid_n - 1 {
            delta_max
        } else {
            delta_max * T::from_count(i) / last
        };
        let ev = osgt_renyi_closed_form(p, d, alpha)?;
        scan.push((d, ev.tau));
        if worst.map_or(true, |w| ev.tau >= w.tau) {
            worst = Some(ev);
            worst_idx = i;
        }
    }
    Ok(RenyiWorstCase {
        worst: worst.expect("grid is non-empty"),
        at_endpoint: worst_idx == grid_n - 1,
        scan,
    })
}

/// Rényi divergence of the k-dimensional mechanism when every coordinate has
/// sensitivity `Δ`: `αΔ₂²/(2σ²) + k/(α-1)·ln(B̄/(2Q(m/σ)))`.
pub fn osgt_renyi_k_dim<T: Scalar>(p: &OsgtParams<T>, s: &Sensitivity<T>, alpha: T) -> Result<RenyiEvaluation<T>> {
    check_alpha(alpha)?;
    let per_coord = s
        .per_coord()
        .ok_or_else(|| Error::domain("k-dimensional Renyi bound needs a per-coordinate sensitivity"))?;
    let mut ev = renyi_b_bar(p, per_coord, alpha)?;
    let kf = T::from_count(s.k());
    ev.tau = alpha * s.delta2() * s.delta2() / (T::lit(2.0) * p.sigma2())
        + kf * (ev.log_b_bar - p.log_tail_mass()) / (alpha - T::one());
    if !ev.tau.is_finite() {
        return Err(Error::Consistency(format!("Renyi divergence is {} at alpha {alpha}", ev.tau)));
    }
    Ok(ev)
}

/// `ln δ` from a Rényi bound:
/// `(α-1)(τ-ε) - ln(α-1) + α·ln(1 - 1/α)`.
pub fn log_renyi_to_delta<T: Scalar>(tau: T, alpha: T, eps: T) -> Result<T> {
    check_alpha(alpha)?;
    let am1 = alpha - T::one();
    Ok(am1 * (tau - eps) - am1.ln() + alpha * (-alpha.recip()).ln_1p())
}

/// `δ` achievable from a Rényi-DP guarantee `(α, τ)`; capped at 1.
pub fn renyi_to_delta<T: Scalar>(tau: T, alpha: T, eps: T) -> Result<T> {
    let log_delta = log_renyi_to_delta(tau, alpha, eps)?;
    Ok(log_delta.exp().min(T::one()))
}

/// Best conversion over α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvertedDelta<T> {
    pub point: PrivacyPoint<T>,
    pub alpha: T,
    pub log_delta: T,
}

const ALPHA_GRID: usize = 200;

/// Minimizes `objective(α)` over `α ∈ (1 + 1e-6, 1e4]`: a log-spaced grid in
/// `α - 1`, then golden-section search around the best grid point.
fn minimize_over_alpha<T, F>(objective: F) -> Result<(T, T)>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let lo = T::lit(1e-6).ln();
    let hi = T::lit(1e4 - 1.0).ln();
    let step = (hi - lo) / T::from_count(ALPHA_GRID - 1);
    let at = |t: T| -> Result<T> {
        let v = objective(T::one() + t.exp())?;
        Ok(if v.is_nan() { T::infinity() } else { v })
    };

    let ts: Vec<T> = (0..ALPHA_GRID).map(|i| lo + step * T::from_count(i)).collect();
    let mut vals = Vec::with_capacity(ALPHA_GRID);
    for &t in &ts {
        vals.push(at(t)?);
    }
    let (best, _) = vals
        .iter()
        .enumerate()
        .fold((0, T::infinity()), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    if vals[best] == T::infinity() {
        return Err(Error::NoConvergence {
            what: "alpha search",
            detail: "objective is infinite on the whole grid".into(),
        });
    }

    let mut a = ts[best.saturating_sub(1)];
    let mut b = ts[(best + 1).min(ALPHA_GRID - 1)];
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = at(c)?;
    let mut fd = at(d)?;
    let tol = T::lit(1e-10).max(T::lit(4.0) * T::epsilon());
    for _ in 0..200 {
        if (b - a).abs() <= tol * T::one().max(a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = at(d)?;
        }
    }
    let (mut t_best, mut v_best) = if fc < fd { (c, fc) } else { (d, fd) };
    if vals[best] < v_best {
        t_best = ts[best];
        v_best = vals[best];
    }
    Ok((T::one() + t_best.exp(), v_best))
}

fn converted<T: Scalar>(eps: T, alpha: T, log_delta: T) -> ConvertedDelta<T> {
    ConvertedDelta {
        point: PrivacyPoint {
            eps,
            delta: log_delta.exp().min(T::one()),
            source: DeltaSource::RenyiConversion,
        },
        alpha,
        log_delta,
    }
}

/// `δ(ε)` of the k-dimensional OSGT mechanism through its Rényi curve, with
/// the best α found numerically.
pub fn osgt_delta_via_renyi<T: Scalar>(p: &OsgtParams<T>, s: &Sensitivity<T>, eps: T) -> Result<ConvertedDelta<T>> {
    check_eps(eps)?;
    if s.per_coord().is_none() {
        return Err(Error::domain("conversion needs a per-coordinate sensitivity"));
    }
    let (alpha, log_delta) =
        minimize_over_alpha(|a| log_renyi_to_delta(osgt_renyi_k_dim(p, s, a)?.tau, a, eps))?;
    Ok(converted(eps, alpha, log_delta))
}

/// Same conversion for the Gaussian mechanism, `τ = αΔ₂²/(2σ_g²)`.
pub fn gaussian_delta_via_renyi<T: Scalar>(sigma_g2: T, delta2: T, eps: T) -> Result<ConvertedDelta<T>> {
    let rho = gaussian_rho(sigma_g2, delta2)?;
    check_eps(eps)?;
    let (alpha, log_delta) = minimize_over_alpha(|a| log_renyi_to_delta(a * rho, a, eps))?;
    Ok(converted(eps, alpha, log_delta))
}

/// Result of the δ quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDelta<T> {
    pub value: T,
    pub error_estimate: T,
    /// Point where `f_q(y) = e^ε·f_q'(y)`; the integrand vanishes beyond it.
    pub crossover: T,
    /// Below this the oracle's rounding dominates and comparisons are moot.
    pub below_floor: bool,
}

/// Smallest δ the oracle is trusted to resolve.
pub const ORACLE_FLOOR: f64 = 1e-13;

/// `δ = ∫ max(0, f_q - e^ε f_q')` by adaptive quadrature, with `q = 0` and
/// `q' = delta_q`.
pub fn delta_quadrature<T: Scalar>(p: &OsgtParams<T>, delta_q: T, eps: T) -> Result<OracleDelta<T>> {
    check_eps(eps)?;
    if !(delta_q.is_finite() && delta_q >= T::zero()) {
        return Err(Error::domain(format!("Delta_qq' must be finite and >= 0, got {delta_q}")));
    }
    if delta_q == T::zero() {
        return Ok(OracleDelta {
            value: T::zero(),
            error_estimate: T::zero(),
            crossover: T::neg_infinity(),
            below_floor: true,
        });
    }
    let loss = |y: T| p.log_pdf(y) - p.log_pdf_at(delta_q, y);
    let crossover = find_crossover(&loss, eps, delta_q, p.sigma())?;

    let width = T::lit(50.0) * p.sigma() + p.m();
    let lo = crossover.min(T::zero()) - width;
    let mut points = vec![lo, crossover];
    for kink in [T::zero(), delta_q] {
        if kink > lo && kink < crossover {
            points.push(kink);
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));

    let integrand = |y: T| {
        let l = loss(y);
        if l <= eps {
            T::zero()
        } else {
            p.pdf(y) * -(eps - l).exp_m1()
        }
    };
    let opts = QuadOptions {
        rel_tol: T::lit(1e-11).max(T::lit(64.0) * T::epsilon()),
        abs_tol: T::zero(),
        max_intervals: 4000,
    };
    let r = integrate(integrand, &points, &opts)?;
    Ok(OracleDelta {
        value: r.value,
        error_estimate: r.abs_error,
        crossover,
        below_floor: r.value < T::lit(ORACLE_FLOOR),
    })
}

/// Root of the nonincreasing privacy loss `loss(y) = eps`.
fn find_crossover<T, F>(loss: &F, eps: T, delta_q: T, sigma: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    // loss(Δ) = -(Δ² + 2mΔ)/(2σ²) < 0 ≤ ε
    let hi0 = delta_q;
    let mut lo = -sigma;
    let mut expand = 0;
    while loss(lo) <= eps {
        lo = lo - (hi0 - lo);
        expand += 1;
        if expand > 200 || !lo.is_finite() {
            return Err(Error::NoConvergence {
                what: "crossover bracket",
                detail: format!("privacy loss never exceeds eps = {eps}"),
            });
        }
    }
    let mut hi = hi0;
    for _ in 0..400 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if loss(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(T::lit(0.5) * (lo + hi))
}

/// `D_α(f_q ‖ f_q')` by adaptive quadrature of `f_q^α·f_q'^(1-α)`, assembled
/// in log space.
pub fn renyi_quadrature<T: Scalar>(p: &OsgtParams<T>, delta_q: T, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(delta_q.is_finite() && delta_q >= T::zero()) {
        return Err(Error::domain(format!("Delta_qq' must be finite and >= 0, got {delta_q}")));
    }
    if delta_q == T::zero() {
        return Ok(T::zero());
    }
    let one = T::one();
    let log_h = |y: T| alpha * p.log_pdf(y) + (one - alpha) * p.log_pdf_at(delta_q, y);

    // the tilted density peaks near m - (α-1)Δ when that is negative
    let peak = p.m() - (alpha - one) * delta_q;
    let width = T::lit(50.0) * p.sigma() + p.m();
    let lo = peak.min(T::zero()) - width;
    let hi = delta_q + width;
    let mut points = vec![lo, T::zero(), delta_q, hi];
    if peak > lo && peak < hi {
        points.push(peak);
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.dedup();

    let n = 4000;
    let step = (hi - lo) / T::from_count(n);
    let shift = (0..=n)
        .map(|i| lo + step * T::from_count(i))
        .chain(points.iter().copied())
        .map(log_h)
        .fold(T::neg_infinity(), T::max);

    let opts = QuadOptions {
        rel_tol: T::lit(1e-12).max(T::lit(64.0) * T::epsilon()),
        abs_tol: T::zero(),
        max_intervals: 8000,
    };
    let r = integrate(|y| (log_h(y) - shift).exp(), &points, &opts)?;
    Ok((shift + r.value.ln()) / (alpha - one))
}

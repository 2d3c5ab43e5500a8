//! Gaussian special functions used throughout the crate.
//!
//! `erfc` and `log_erfc` are a generic port of the FreeBSD msun rational
//! approximations (Sun Microsystems, freely redistributable). The log path
//! never forms `exp(-x²)` and switches to the asymptotic series for large
//! arguments, so `log_q_function` stays finite far beyond the point where
//! `q_function` underflows.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// erx = (float)0.84506291151
const ERX: f64 = 8.45062911510467529297e-01;

// erf on [0, 0.84375]
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];

// erf on [0.84375, 1.25]
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];

// erfc on [1.25, 1/0.35]
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];

// erfc on [1/0.35, 28]
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

/// erfc arguments at or above this use the asymptotic series.
const ASYMPTOTIC_FROM: f64 = 26.0;

fn poly<T: Scalar>(coeffs: &[f64], x: T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * x + T::lit(c))
}

/// `ln(erfc(x) · x) + x² + 0.5625` for `x ≥ 1.25`, i.e. the exponent
/// correction of the tail form `erfc(x) = exp(-x² - 0.5625 + R/S) / x`.
fn tail_correction<T: Scalar>(x: T) -> T {
    let s = (x * x).recip();
    if x < T::lit(1.0 / 0.35) {
        poly(&RA, s) / poly(&SA, s)
    } else {
        poly(&RB, s) / poly(&SB, s)
    }
}

/// `ln(erfc(x))` for `x ≥ ASYMPTOTIC_FROM` from
/// `erfc(x) ~ exp(-x²)/(x√π) · Σ (-1)ⁿ (2n-1)!! / (2x²)ⁿ`.
fn log_erfc_asymptotic<T: Scalar>(x: T) -> T {
    let inv = (T::lit(2.0) * x * x).recip();
    let mut term = T::one();
    let mut sum = T::one();
    for n in 1..40 {
        term = -term * T::from_count(2 * n - 1) * inv;
        sum = sum + term;
        if term.abs() < T::epsilon() * T::lit(1e-2) {
            break;
        }
    }
    -x * x - (x * T::PI().sqrt()).ln() + sum.ln()
}

/// Splits `-x²` as `-z² + (z - x)(z + x)` with `z` carrying few enough bits
/// that `z²` is exact. Keeps `exp(-x²)` accurate to a few ulp.
fn split_square<T: Scalar>(x: T) -> (T, T) {
    let scale = T::lit(4096.0);
    let z = (x * scale).floor() / scale;
    (-z * z, (z - x) * (z + x))
}

/// Complementary error function.
pub fn erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x == T::infinity() {
        return T::zero();
    }
    if x == T::neg_infinity() {
        return T::lit(2.0);
    }
    let one = T::one();
    let ax = x.abs();
    let negative = x < T::zero();
    if ax < T::lit(0.84375) {
        let z = x * x;
        let y = poly(&PP, z) / poly(&QQ, z);
        if ax < T::lit(0.25) {
            return one - (x + x * y);
        }
        let half = T::lit(0.5);
        return if negative {
            one + (ax + ax * y)
        } else {
            half - (ax * y + (ax - half))
        };
    }
    if ax < T::lit(1.25) {
        let s = ax - one;
        let pq = poly(&PA, s) / poly(&QA, s);
        let erx = T::lit(ERX);
        return if negative {
            one + erx + pq
        } else {
            one - erx - pq
        };
    }
    let r = if ax < T::lit(ASYMPTOTIC_FROM) {
        let (head, tail) = split_square(ax);
        (head - T::lit(0.5625)).exp() * (tail + tail_correction(ax)).exp() / ax
    } else {
        log_erfc_asymptotic(ax).exp()
    };
    if negative {
        T::lit(2.0) - r
    } else {
        r
    }
}

/// Natural log of [`erfc`], finite for every finite argument.
pub fn log_erfc<T: Scalar>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x == T::infinity() {
        return T::neg_infinity();
    }
    if x < T::zero() {
        // ln(2 - erfc(-x)) without losing the small part
        return T::LN_2() + (-T::lit(0.5) * erfc(-x)).ln_1p();
    }
    if x < T::lit(1.25) {
        return erfc(x).ln();
    }
    if x < T::lit(ASYMPTOTIC_FROM) {
        let (head, tail) = split_square(x);
        return head - T::lit(0.5625) + (tail + tail_correction(x)) - x.ln();
    }
    log_erfc_asymptotic(x)
}

/// Gaussian Q-function, `Q(x) = P[N(0,1) > x]`. Saturates to 0 and 1.
pub fn q_function<T: Scalar>(x: T) -> T {
    T::lit(0.5) * erfc(x * T::FRAC_1_SQRT_2())
}

/// `ln Q(x)`. Does not underflow for large positive `x`.
pub fn log_q_function<T: Scalar>(x: T) -> T {
    if x < T::zero() {
        return (-q_function(-x)).ln_1p();
    }
    log_erfc(x * T::FRAC_1_SQRT_2()) - T::LN_2()
}

/// Standard normal cdf `Φ(x) = Q(-x)`.
pub fn normal_cdf<T: Scalar>(x: T) -> T {
    q_function(-x)
}

/// `ln Φ(x)`.
pub fn log_normal_cdf<T: Scalar>(x: T) -> T {
    log_q_function(-x)
}

/// `ln φ(x)` for the standard normal density.
pub fn log_normal_pdf<T: Scalar>(x: T) -> T {
    -T::lit(0.5) * x * x - T::lit(0.5) * (T::lit(2.0) * T::PI()).ln()
}

/// `ln(1 - exp(a))` for `a ≤ 0`, accurate on both sides of `-ln 2`.
pub fn log1mexp<T: Scalar>(a: T) -> T {
    if a > -T::LN_2() {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `ln Σ exp(xᵢ)`. Empty input or all `-∞` gives `-∞`.
pub fn log_sum_exp<T: Scalar>(xs: &[T]) -> T {
    let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || max == T::infinity() {
        return max;
    }
    let sum = xs
        .iter()
        .fold(T::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}

/// Inverse of the Q-function: returns `x` with `Q(x) = p`.
pub fn inverse_q<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain(format!(
            "inverse_q requires p in (0, 1), got {p}"
        )));
    }
    let half = T::lit(0.5);
    if p == half {
        return Ok(T::zero());
    }
    if p > half {
        return Ok(-upper_tail_inverse(T::one() - p));
    }
    Ok(upper_tail_inverse(p))
}

/// Solves `Q(x) = p` for `p < 1/2`. Abramowitz–Stegun 26.2.23 gives a start
/// within 5e-4; Newton on `ln Q` finishes the job.
fn upper_tail_inverse<T: Scalar>(p: T) -> T {
    let t = (-T::lit(2.0) * p.ln()).sqrt();
    let num = T::lit(2.515517) + t * (T::lit(0.802853) + t * T::lit(0.010328));
    let den = T::one() + t * (T::lit(1.432788) + t * (T::lit(0.189269) + t * T::lit(0.001308)));
    let mut x = t - num / den;
    let target = p.ln();
    for _ in 0..60 {
        let log_q = log_q_function(x);
        // d/dx ln Q(x) = -φ(x)/Q(x)
        let slope = -(log_normal_pdf(x) - log_q).exp();
        let step = (log_q - target) / slope;
        x = x - step;
        if step.abs() <= T::epsilon() * T::lit(4.0) * x.abs().max(T::one()) {
            break;
        }
    }
    x
}

/// `ln(Q(lo) - Q(hi))` for `lo < hi`, without the cancelling subtraction.
///
/// `lo` may be `-∞` and `hi` may be `+∞`.
pub fn log_q_difference<T: Scalar>(lo: T, hi: T) -> Result<T> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::domain(format!(
            "log_q_difference requires lo < hi, got lo={lo}, hi={hi}"
        )));
    }
    let zero = T::zero();
    if lo >= zero {
        let a = log_q_function(lo);
        let b = log_q_function(hi);
        return Ok(a + log1mexp(b - a));
    }
    if hi <= zero {
        // Q(lo) - Q(hi) = Q(-hi) - Q(-lo), both upper tails
        let a = log_q_function(-hi);
        let b = log_q_function(-lo);
        return Ok(a + log1mexp(b - a));
    }
    // lo < 0 < hi: 1 - Q(-lo) - Q(hi), no cancellation
    Ok((-(q_function(-lo) + q_function(hi))).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn q_at_zero_is_half() {
        assert_eq!(q_function(0.0_f64), 0.5);
        assert_eq!(log_q_function(0.0_f64), 0.5_f64.ln());
    }

    #[test]
    fn q_at_one_matches_reference() {
        // mpmath, 60 digits
        assert!(rel(q_function(1.0), 0.158_655_253_931_457_051_414_767_5) < 1e-12);
    }

    #[test]
    fn q_near_quartile() {
        assert!((q_function(0.6745_f64) - 0.25).abs() < 1e-4);
    }

    #[test]
    fn log_q_large_arguments() {
        assert!(rel(log_q_function(10.0), -53.231_285_150_512_470_578_347_03) < 1e-12);
        let at_40 = log_q_function(40.0_f64);
        assert!(at_40.is_finite());
        assert!(rel(at_40, -804.608_442_013_753_788_166_606_8) < 1e-12);
        assert!(rel(log_q_function(-5.0), -2.866_516_129_637_635_933_845_963e-7) < 1e-12);
    }

    #[test]
    fn log_erfc_is_continuous_across_branches() {
        for &x in &[1.25_f64, 1.0 / 0.35, ASYMPTOTIC_FROM] {
            let below = log_erfc(x * (1.0 - 1e-15));
            let above = log_erfc(x);
            assert!(rel(below, above) < 1e-13, "{x}: {below} vs {above}");
        }
    }

    #[test]
    fn inverse_q_known_points() {
        assert_eq!(inverse_q(0.5_f64).unwrap(), 0.0);
        assert!((inverse_q(0.25_f64).unwrap() - 0.674_489_750_196_081_7).abs() < 1e-12);
        assert!(rel(inverse_q(1e-10_f64).unwrap(), 6.361_340_902_404_056) < 1e-12);
        assert!(rel(q_function(inverse_q(1e-10_f64).unwrap()), 1e-10) < 1e-10);
    }

    #[test]
    fn inverse_q_rejects_outside_unit_interval() {
        for p in [0.0_f64, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(inverse_q(p), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn log_q_difference_saturated_lower_limit() {
        let v = log_q_difference(f64::NEG_INFINITY, 0.0).unwrap();
        assert!((v - 0.5_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_q_difference_in_far_tail() {
        let v = log_q_difference(10.0_f64, 11.0).unwrap();
        assert!(rel(v, -53.231_310_225_583_124_860_420_55) < 1e-12);
        // Written as Φ(hi) - Φ(lo), the way the Rényi closed form states it,
        // the subtraction cancels completely in double precision.
        let direct = normal_cdf(11.0_f64) - normal_cdf(10.0);
        assert_eq!(direct, 0.0);
        assert!(v.is_finite());
    }

    #[test]
    fn log_q_difference_shrinks_with_width() {
        let mut last = f64::INFINITY;
        for k in 1..12 {
            let v = log_q_difference(0.3_f64, 0.3 + 10f64.powi(-k)).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last < -20.0);
    }

    #[test]
    fn log_q_difference_rejects_reversed_limits() {
        assert!(log_q_difference(1.0_f64, 1.0).is_err());
        assert!(log_q_difference(2.0_f64, 1.0).is_err());
    }

    #[test]
    fn erfc_saturates() {
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
        assert_eq!(q_function(f64::NEG_INFINITY), 1.0);
        assert_eq!(log_q_function(f64::INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn single_precision_instantiation() {
        let q = q_function(1.0_f32);
        assert!((q - 0.158_655_25).abs() < 1e-6);
        let x = inverse_q(0.25_f32).unwrap();
        assert!((x - 0.674_489_75).abs() < 1e-5);
    }

    #[test]
    fn log_sum_exp_handles_infinities() {
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[0.0_f64, f64::NEG_INFINITY]);
        assert_eq!(v, 0.0);
        assert!((log_sum_exp(&[1000.0_f64, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}

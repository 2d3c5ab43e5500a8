//! Adaptive Gauss–Kronrod quadrature (G10/K21, globally adaptive bisection).
//!
//! Used only by the numerical oracles. Callers pass the integrand's kinks as
//! breakpoints; the OSGT density is not differentiable at its location, and
//! a kink inside a panel stalls convergence.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

// QUADPACK qk21 abscissae, Kronrod and Gauss weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-12),
            abs_tol: T::zero(),
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    splittable: bool,
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gk21<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half = half_len.abs();

    let fc = f(center);
    let mut res_gauss = T::zero();
    let mut res_kronrod = fc * T::lit(WGK[10]);
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    for j in 0..10 {
        let x = half_len * T::lit(XGK[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_kronrod = res_kronrod + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        // odd indices are the embedded Gauss nodes
        if j % 2 == 1 {
            res_gauss = res_gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_kronrod * half;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let result = res_kronrod * half_len;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_kronrod - res_gauss) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > err {
        err = floor;
    }
    (result, err)
}

/// Integrates `f` over `[points[0], points[last]]`, starting with one panel
/// between each pair of consecutive breakpoints.
pub fn integrate<T, F>(f: F, points: &[T], opts: &QuadOptions<T>) -> Result<Integral<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if points.len() < 2 {
        return Err(Error::domain("integrate needs at least two points"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if points.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("breakpoints must be nondecreasing"));
    }

    let mut panels: Vec<Panel<T>> = points
        .windows(2)
        .filter(|w| w[0] < w[1])
        .map(|w| {
            let (value, error) = gk21(&f, w[0], w[1]);
            Panel { a: w[0], b: w[1], value, error, splittable: true }
        })
        .collect();

    loop {
        let total: T = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
        let err: T = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                detail: "integrand produced a non-finite value".into(),
            });
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= target {
            return Ok(Integral { value: total, abs_error: err, intervals: panels.len() });
        }

        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).unwrap())
            .map(|(i, _)| i);
        let Some(i) = worst else {
            // every panel is at machine resolution; this is as good as it gets
            return Ok(Integral { value: total, abs_error: err, intervals: panels.len() });
        };
        if panels.len() >= opts.max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                detail: format!(
                    "{} panels, error estimate {:e} above target {:e}",
                    panels.len(),
                    err,
                    target
                ),
            });
        }

        let Panel { a, b, .. } = panels[i];
        let mid = T::lit(0.5) * (a + b);
        let resolution = T::lit(8.0) * T::epsilon() * a.abs().max(b.abs()).max(T::min_positive_value());
        if b - a <= resolution || mid <= a || mid >= b {
            panels[i].splittable = false;
            continue;
        }
        let (v1, e1) = gk21(&f, a, mid);
        let (v2, e2) = gk21(&f, mid, b);
        panels[i] = Panel { a, b: mid, value: v1, error: e1, splittable: true };
        panels.push(Panel { a: mid, b, value: v2, error: e2, splittable: true });
    }
}

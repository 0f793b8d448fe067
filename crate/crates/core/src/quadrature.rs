//! Globally adaptive 10/21-point Gauss–Kronrod quadrature for complex-valued
//! integrands on finite real intervals.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

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

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rules for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over the union of consecutive segments given by `breakpoints`
/// (at least two, increasing), refining whichever panel carries the largest
/// error estimate until the total error meets the tolerance.
pub fn integrate_segments<F>(f: F, breakpoints: &[f64], opts: AdaptiveOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "quadrature breakpoints must be strictly increasing".into(),
        ));
    }
    let mut heap: BinaryHeap<Panel> = breakpoints.windows(2).map(|w| kronrod21(&f, w[0], w[1])).collect();
    let mut evaluations = 21 * heap.len();
    let mut subdivisions = 0;
    // panels too narrow to split further
    let mut frozen: Vec<Panel> = Vec::new();

    loop {
        let value: Complex64 = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
        let error: f64 = heap.iter().chain(frozen.iter()).map(|p| p.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            return Ok(QuadResult {
                value,
                error,
                evaluations,
                subdivisions,
            });
        }
        let worst = match heap.pop() {
            Some(p) if subdivisions < opts.max_subdivisions => p,
            _ => {
                return Err(Error::QuadratureNotConverged {
                    estimate_re: value.re,
                    estimate_im: value.im,
                    error,
                    subdivisions,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            frozen.push(worst);
            continue;
        }
        heap.push(kronrod21(&f, worst.a, mid));
        heap.push(kronrod21(&f, mid, worst.b));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: AdaptiveOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_segments(f, &[a, b], opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| Complex64::new(x * x, -x), 0.0, 3.0, AdaptiveOptions::default()).unwrap();
        assert!((r.value - Complex64::new(9.0, -4.5)).norm() < 1e-13);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn complex_exponential() {
        // ∫_0^π e^{ix} dx = 2i
        let r = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, PI, AdaptiveOptions::default()).unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn sharp_lorentzian_needs_refinement() {
        // ∫_{-1}^{1} 1/(x − iε) dx = 2i·atan(1/ε)
        let eps = 1e-5;
        let opts = AdaptiveOptions {
            rel_tol: 1e-10,
            ..Default::default()
        };
        let r = integrate(|x| 1.0 / Complex64::new(x, -eps), -1.0, 1.0, opts).unwrap();
        let exact = Complex64::new(0.0, 2.0 * (1.0 / eps).atan());
        assert!((r.value - exact).norm() < 1e-9 * exact.norm());
        assert!(r.subdivisions > 0);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let opts = AdaptiveOptions {
            rel_tol: 1e-9,
            ..Default::default()
        };
        let r = integrate(|x| Complex64::from(1.0 / x.sqrt()), 0.0, 1.0, opts).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn zero_integrand_converges_immediately() {
        let r = integrate(|_| Complex64::new(0.0, 0.0), 0.0, 1.0, AdaptiveOptions::default()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn exhausted_budget_reports_estimate() {
        let opts = AdaptiveOptions {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_subdivisions: 3,
        };
        let err = integrate(|x| Complex64::from((50.0 * x).sin().abs()), 0.0, 10.0, opts).unwrap_err();
        match err {
            Error::QuadratureNotConverged {
                subdivisions, error, ..
            } => {
                assert_eq!(subdivisions, 3);
                assert!(error > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn segments_sum() {
        let opts = AdaptiveOptions::default();
        let whole = integrate(|x| Complex64::from(x.cos()), 0.0, 2.0, opts).unwrap();
        let split = integrate_segments(|x| Complex64::from(x.cos()), &[0.0, 0.5, 2.0], opts).unwrap();
        assert!((whole.value - split.value).norm() < 1e-14);
    }
}

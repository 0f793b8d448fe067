//! Complex root finding (Muller's method) and pole location for response
//! functions given through their inverse.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Relative step tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-14,
            max_iter: 200,
        }
    }
}

/// Muller's method from three starting points. `f` may fail (e.g. when a
/// trial point hits a singularity) or return non-finite values; such points
/// are nudged once.
pub fn muller<F>(f: F, start: [Complex64; 3], opts: RootOptions) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let finite = |z: Complex64| -> Result<Complex64> {
        let v = f(z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::RootNotFound(format!("non-finite function value at {z}")))
        }
    };
    let eval = |z: Complex64| -> Result<Complex64> {
        finite(z).or_else(|_| finite(z * (1.0 + 1e-11) + Complex64::new(0.0, 1e-13 * z.norm().max(1.0))))
    };
    let [mut x0, mut x1, mut x2] = start;
    let (mut f0, mut f1, mut f2) = (eval(x0)?, eval(x1)?, eval(x2)?);
    for _ in 0..opts.max_iter {
        if f2.norm() == 0.0 {
            return Ok(x2);
        }
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * f2 * a).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        let step = if den.norm() == 0.0 {
            // flat: fall back to a secant-sized nudge
            h2 * 0.5
        } else {
            -2.0 * f2 / den
        };
        let x3 = x2 + step;
        if !x3.re.is_finite() || !x3.im.is_finite() {
            break;
        }
        if step.norm() <= opts.tol * x3.norm().max(f64::MIN_POSITIVE) {
            return Ok(x3);
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1) = (f1, f2);
        f2 = eval(x2)?;
    }
    Err(Error::RootNotFound(format!(
        "Muller iteration did not converge from {:?}",
        start[1]
    )))
}

/// Locates zeros of `inverse` (i.e. poles of the response `1/inverse`) whose
/// real parts lie in `[lo, hi]`.
///
/// The real axis is scanned on `grid` points for local minima of |inverse|;
/// each one seeds a Muller refinement in the complex plane. Roots closer than
/// `1e-8·hi` to an already accepted one are merged.
pub fn poles_from_inverse<F>(inverse: F, lo: f64, hi: f64, grid: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(hi > lo) || grid < 3 {
        return Err(Error::InvalidParameter(
            "pole scan needs hi > lo and >= 3 points".into(),
        ));
    }
    let h = (hi - lo) / (grid - 1) as f64;
    let mags: Vec<f64> = (0..grid)
        .map(|i| {
            inverse(Complex64::from(lo + h * i as f64))
                .map(|v| v.norm())
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let mut roots: Vec<Complex64> = Vec::new();
    for i in 1..grid - 1 {
        if !(mags[i] < mags[i - 1] && mags[i] <= mags[i + 1]) {
            continue;
        }
        let x = lo + h * i as f64;
        let seeds = [
            Complex64::from(x - h),
            Complex64::new(x, -0.1 * h),
            Complex64::from(x + h),
        ];
        let Ok(root) = muller(&inverse, seeds, RootOptions::default()) else {
            continue;
        };
        if root.re < lo || root.re > hi {
            continue;
        }
        if roots.iter().all(|r| (r - root).norm() > 1e-8 * hi.abs()) {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let f = |z: Complex64| Ok((z - 2.0) * (z + 1.0));
        let r = muller(
            f,
            [1.5.into(), 1.8.into(), Complex64::new(2.2, 0.1)],
            RootOptions::default(),
        )
        .unwrap();
        assert!((r - 2.0).norm() < 1e-13);
    }

    #[test]
    fn complex_root() {
        let target = Complex64::new(0.7, -0.02);
        let f = move |z: Complex64| Ok((z - target) * (z + 3.0));
        let r = muller(f, [0.6.into(), 0.7.into(), 0.8.into()], RootOptions::default()).unwrap();
        assert!((r - target).norm() < 1e-13);
    }

    #[test]
    fn poles_of_two_lorentzians() {
        let p1 = Complex64::new(0.9, -0.01);
        let p2 = Complex64::new(1.2, -0.02);
        // 1/G with G = 1/(p1 − z) + 1/(p2 − z)
        let inv = move |z: Complex64| Ok(1.0 / (1.0 / (p1 - z) + 1.0 / (p2 - z)));
        let poles = poles_from_inverse(inv, 0.5, 1.5, 401).unwrap();
        assert_eq!(poles.len(), 2);
        assert!((poles[0] - p1).norm() < 1e-12);
        assert!((poles[1] - p2).norm() < 1e-12);
    }
}

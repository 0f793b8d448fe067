//! Bare Green functions for one polarization component at one point:
//! a single Lorentzian cavity mode, the free-space coincidence limit, and the
//! scattering part of a planar Fabry–Pérot cavity evaluated at its center.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::medium::Permittivity;
use crate::quadrature::{self, AdaptiveOptions};
use crate::units::SPEED_OF_LIGHT;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single cavity mode Ḡ(ω) = f1² / (ω_c − ω − iγ_c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianMode {
    omega_c: f64,
    gamma_c: f64,
    f1: f64,
}

impl LorentzianMode {
    pub fn new(omega_c: f64, gamma_c: f64, f1: f64) -> Result<Self> {
        if !(omega_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mode frequency must be > 0, got {omega_c}"
            )));
        }
        if !(gamma_c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mode decay must be >= 0, got {gamma_c}"
            )));
        }
        Ok(LorentzianMode { omega_c, gamma_c, f1 })
    }

    /// Mode with decay γ_c = ω_c / Q.
    pub fn with_quality_factor(omega_c: f64, quality: f64, f1: f64) -> Result<Self> {
        if !(quality > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quality factor must be > 0, got {quality}"
            )));
        }
        Self::new(omega_c, omega_c / quality, f1)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn quality_factor(&self) -> f64 {
        self.omega_c / self.gamma_c
    }

    pub fn lossless(&self) -> Self {
        LorentzianMode { gamma_c: 0.0, ..*self }
    }
}

pub fn single_mode_green(m: &LorentzianMode, omega: f64) -> Result<Complex64> {
    if m.gamma_c == 0.0 && omega == m.omega_c {
        return Err(Error::ResonantLossless { omega });
    }
    Ok(m.f1 * m.f1 / Complex64::new(m.omega_c - omega, -m.gamma_c))
}

/// Im G of free space at coincidence, ω/(6πc).
pub fn free_space_im_green(omega: f64) -> f64 {
    omega / (6.0 * PI * SPEED_OF_LIGHT)
}

/// Square root on the branch with non-negative imaginary part.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Fresnel coefficients (r_TE, r_TM) for a wave in the fill incident on the
/// mirror half-space. Conventions: r_TE → −1 and r_TM → +1 for a perfect
/// conductor.
pub fn fresnel_coefficients(
    k_par: f64,
    omega: f64,
    eps_fill: Complex64,
    eps_mirror: Complex64,
) -> (Complex64, Complex64) {
    let k0 = omega / SPEED_OF_LIGHT;
    let kp2 = k_par * k_par;
    let kz = sqrt_upper(eps_fill * k0 * k0 - kp2);
    let kz_m = sqrt_upper(eps_mirror * k0 * k0 - kp2);
    fresnel_from_kz(kz, kz_m, eps_fill, eps_mirror)
}

fn fresnel_from_kz(
    kz: Complex64,
    kz_m: Complex64,
    eps_fill: Complex64,
    eps_mirror: Complex64,
) -> (Complex64, Complex64) {
    let te_den = kz + kz_m;
    let tm_den = eps_mirror * kz + eps_fill * kz_m;
    let zero = Complex64::new(0.0, 0.0);
    let r_te = if te_den == zero { zero } else { (kz - kz_m) / te_den };
    let r_tm = if tm_den == zero {
        zero
    } else {
        (eps_mirror * kz - eps_fill * kz_m) / tm_den
    };
    (r_te, r_tm)
}

/// Accuracy controls for the planar-cavity wavevector integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Imaginary part added to both permittivities to keep guided-mode poles
    /// off the real k∥ axis. The fill/mirror contrast is unchanged.
    pub pole_offset: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-8,
            max_subdivisions: 4000,
            pole_offset: 1e-6,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerance must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.pole_offset >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pole offset must be >= 0, got {}",
                self.pole_offset
            )));
        }
        Ok(())
    }
}

/// Planar cavity: two mirror half-spaces a distance `length` apart with the
/// gap filled by `fill`. Green functions are evaluated at the center.
#[derive(Debug, Clone)]
pub struct PlanarCavity {
    length: f64,
    mirror: Permittivity,
    fill: Permittivity,
}

impl PlanarCavity {
    pub fn new(length: f64, mirror: Permittivity, fill: Permittivity) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cavity length must be > 0, got {length}"
            )));
        }
        Ok(PlanarCavity { length, mirror, fill })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mirror(&self) -> &Permittivity {
        &self.mirror
    }

    pub fn fill(&self) -> &Permittivity {
        &self.fill
    }

    pub fn with_fill(&self, fill: Permittivity) -> Self {
        PlanarCavity { fill, ..self.clone() }
    }
}

/// Result of one planar-cavity Green function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringGreen {
    pub value: Complex64,
    /// Quadrature error estimate (absolute).
    pub error: f64,
    /// Bound on the neglected evanescent tail beyond the last panel.
    pub tail_bound: f64,
    pub evaluations: usize,
}

/// G¹_xx(ω) at the center of `c`.
pub fn fp_scattering_green_xx(c: &PlanarCavity, omega: f64, q: &QuadratureSettings) -> Result<Complex64> {
    let eps_fill = c.fill.eval(omega)?;
    let eps_mirror = c.mirror.eval(omega)?;
    fp_scattering_green_detailed(c.length, eps_fill, eps_mirror, omega, q).map(|r| r.value)
}

/// The (k∥/k⊥)[…] integrand of the cavity-center xx scattering Green function,
/// after the azimuthal integral. Weights: 1 for TE, k⊥²/k² for TM.
fn cavity_integrand(
    k_par: f64,
    k2: Complex64,
    k2_mirror: Complex64,
    eps_fill: Complex64,
    eps_mirror: Complex64,
    length: f64,
) -> Complex64 {
    let kp2 = k_par * k_par;
    let kz = sqrt_upper(k2 - kp2);
    let kz_m = sqrt_upper(k2_mirror - kp2);
    let (r_te, r_tm) = fresnel_from_kz(kz, kz_m, eps_fill, eps_mirror);
    let one_pass = (I * kz * length).exp();
    let round_trip = one_pass * one_pass;
    let d_te = 1.0 - r_te * r_te * round_trip;
    let d_tm = 1.0 - r_tm * r_tm * round_trip;
    let w_tm = kz * kz / k2;
    let bracket =
        round_trip * (r_te * r_te / d_te + r_tm * r_tm / d_tm * w_tm) + one_pass * (r_te / d_te - r_tm / d_tm * w_tm);
    k_par / kz * bracket
}

/// G¹_xx at the cavity center for given permittivities.
///
/// G¹ = (i/4π) ∫₀^∞ dk∥ (k∥/k⊥) [ e^{2ik⊥L}(r_TE²/D_TE + r_TM²/D_TM · k⊥²/k²)
///        + e^{ik⊥L}(r_TE/D_TE − r_TM/D_TM · k⊥²/k²) ],  D_σ = 1 − r_σ² e^{2ik⊥L}.
///
/// The propagating part is integrated in θ with k∥ = s·sin θ and the
/// evanescent part in t with k∥ = s·cosh t, where s² = Re k², which removes
/// the 1/k⊥ endpoint singularity.
pub fn fp_scattering_green_detailed(
    length: f64,
    eps_fill: Complex64,
    eps_mirror: Complex64,
    omega: f64,
    q: &QuadratureSettings,
) -> Result<ScatteringGreen> {
    q.validate()?;
    if !(length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cavity length must be > 0, got {length}"
        )));
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    let offset = Complex64::new(0.0, q.pole_offset);
    let (eps_fill, eps_mirror) = (eps_fill + offset, eps_mirror + offset);
    let zero = ScatteringGreen {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        tail_bound: 0.0,
        evaluations: 0,
    };
    if eps_fill == eps_mirror {
        return Ok(zero);
    }
    let k0 = omega / SPEED_OF_LIGHT;
    let k2 = eps_fill * k0 * k0;
    let k2_mirror = eps_mirror * k0 * k0;
    let s = if k2.re > 0.0 { k2.re.sqrt() } else { k2.norm().sqrt() };
    let f = |kp: f64| cavity_integrand(kp, k2, k2_mirror, eps_fill, eps_mirror, length);
    let opts = AdaptiveOptions {
        rel_tol: q.rel_tol,
        abs_tol: 0.0,
        max_subdivisions: q.max_subdivisions,
    };

    let propagating = quadrature::integrate_segments(
        |theta: f64| f(s * theta.sin()) * (s * theta.cos()),
        &[0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0],
        opts,
    )?;

    // Evanescent decay length is L; extend until the tail is negligible.
    let mut decay_lengths = 60.0;
    let (evanescent, tail_bound) = loop {
        let kp_max = (s * s + (decay_lengths / length).powi(2)).sqrt();
        let t_max = (kp_max / s).acosh();
        let breaks: Vec<f64> = (0..=12).map(|j| t_max * j as f64 / 12.0).collect();
        let res = quadrature::integrate_segments(|t: f64| f(s * t.cosh()) * (s * t.sinh()), &breaks, opts)?;
        let tail = f(kp_max).norm() * length;
        let scale = (res.value + propagating.value).norm();
        if tail <= q.rel_tol * scale || decay_lengths >= 960.0 {
            break (res, tail);
        }
        decay_lengths *= 2.0;
    };

    let prefactor = I / (4.0 * PI);
    Ok(ScatteringGreen {
        value: prefactor * (propagating.value + evanescent.value),
        error: (propagating.error + evanescent.error) / (4.0 * PI),
        tail_bound: tail_bound / (4.0 * PI),
        evaluations: propagating.evaluations + evanescent.evaluations,
    })
}

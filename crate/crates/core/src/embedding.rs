//! Dressing of a bare Green function by an emitter ensemble.
//!
//! Two pipelines are provided. The closure pipeline solves the scalar
//! dipole-approximated Lippmann–Schwinger equation G = Ḡ + Ḡ V (ω²/c²) χ G
//! around a single mode. The macroscopic pipeline fills a planar cavity with
//! the ensemble and applies a real-cavity local-field correction around the
//! singled-out emitter.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{self, LorentzianMode, PlanarCavity, QuadratureSettings};
use crate::medium::{EnsembleSpec, Permittivity};
use crate::units::{EPSILON_0, SPEED_OF_LIGHT};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Inverse dressed response 1/Ḡ − V (ω²/c²) χ.
pub fn qerra_inverse(bare: Complex64, v_chi: Complex64, omega: f64) -> Result<Complex64> {
    if bare == Complex64::new(0.0, 0.0) {
        return Err(Error::NonInvertibleBare { omega });
    }
    let k0 = omega / SPEED_OF_LIGHT;
    Ok(1.0 / bare - v_chi * k0 * k0)
}

/// G = 1 / (1/Ḡ − V_mic (ω²/c²) χ).
pub fn qerra_dress(bare: Complex64, chi: Complex64, v_mic: f64, omega: f64) -> Result<Complex64> {
    if !(v_mic > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "micro volume must be > 0, got {v_mic}"
        )));
    }
    if chi == Complex64::new(0.0, 0.0) {
        return Ok(bare);
    }
    Ok(1.0 / qerra_inverse(bare, v_mic * chi, omega)?)
}

/// V·χ = N α / ε₀ for an ensemble; independent of how V is chosen.
pub fn ensemble_polarization(spec: &EnsembleSpec, omega: f64) -> Result<Complex64> {
    if spec.count() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(spec.count() / EPSILON_0 * spec.model().alpha(omega)?)
}

/// Wavenumber used inside the real-cavity correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LocalFieldWavenumber {
    /// k = ω/c. Reproduces the bulk real-cavity decay factor 9ε^{5/2}/(2ε+1)²
    /// for Im(G_vac + C).
    #[default]
    Vacuum,
    /// k = √ε ω/c in every term.
    Medium,
}

#[derive(Debug, Clone)]
pub struct LocalFieldParams {
    r_c: f64,
    eps_host: Permittivity,
    wavenumber: LocalFieldWavenumber,
}

impl LocalFieldParams {
    pub fn new(r_c: f64, eps_host: Permittivity) -> Result<Self> {
        if !(r_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "real-cavity radius must be > 0, got {r_c}"
            )));
        }
        Ok(LocalFieldParams {
            r_c,
            eps_host,
            wavenumber: LocalFieldWavenumber::default(),
        })
    }

    pub fn with_wavenumber(mut self, wavenumber: LocalFieldWavenumber) -> Self {
        self.wavenumber = wavenumber;
        self
    }

    pub fn r_c(&self) -> f64 {
        self.r_c
    }

    pub fn eps_host(&self) -> &Permittivity {
        &self.eps_host
    }

    pub fn wavenumber(&self) -> LocalFieldWavenumber {
        self.wavenumber
    }
}

/// The three additive pieces of the local-field-corrected Green function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFieldPieces {
    /// i·ω/(6πc); the divergent real part is excluded.
    pub vacuum: Complex64,
    pub c_term: Complex64,
    /// (3ε/(2ε+1))² G¹
    pub scattering: Complex64,
    pub eps: Complex64,
}

impl LocalFieldPieces {
    pub fn total(&self) -> Complex64 {
        self.vacuum + self.c_term + self.scattering
    }
}

/// Screening factor (3ε/(2ε+1))².
pub fn local_field_factor(eps: Complex64, omega: f64) -> Result<Complex64> {
    let den = 2.0 * eps + 1.0;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularLocalField { omega });
    }
    let f = 3.0 * eps / den;
    Ok(f * f)
}

/// Real-cavity term C(ε, R_C, ω).
pub fn real_cavity_term(eps: Complex64, r_c: f64, omega: f64, wavenumber: LocalFieldWavenumber) -> Result<Complex64> {
    let den = 2.0 * eps + 1.0;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularLocalField { omega });
    }
    let k0 = omega / SPEED_OF_LIGHT;
    let k = match wavenumber {
        LocalFieldWavenumber::Vacuum => Complex64::from(k0),
        LocalFieldWavenumber::Medium => eps.sqrt() * k0,
    };
    let kr = k * r_c;
    let static_term = 3.0 * (eps - 1.0) / den / (kr * kr * kr);
    let near_term = 9.0 * (eps - 1.0) * (4.0 * eps + 1.0) / (5.0 * den * den) / kr;
    let radiative = I * (9.0 * eps.powf(2.5) / (den * den) - 1.0);
    Ok(k / (6.0 * PI) * (static_term + near_term + radiative))
}

/// G = G_vac + C + (3ε/(2ε+1))² G¹ with the host permittivity at ω.
pub fn local_field_correct(g1: Complex64, lf: &LocalFieldParams, omega: f64) -> Result<LocalFieldPieces> {
    let eps = lf.eps_host.eval(omega)?;
    local_field_correct_with_eps(g1, eps, lf.r_c, lf.wavenumber, omega)
}

pub fn local_field_correct_with_eps(
    g1: Complex64,
    eps: Complex64,
    r_c: f64,
    wavenumber: LocalFieldWavenumber,
    omega: f64,
) -> Result<LocalFieldPieces> {
    let k_medium = (eps.sqrt() * omega / SPEED_OF_LIGHT).norm();
    if r_c * k_medium > 0.3 {
        log::warn!(
            "real-cavity radius is not small against the wavelength: R_C|k| = {:.3} at omega = {omega}",
            r_c * k_medium
        );
    }
    let factor = local_field_factor(eps, omega)?;
    Ok(LocalFieldPieces {
        vacuum: I * greens::free_space_im_green(omega),
        c_term: real_cavity_term(eps, r_c, omega, wavenumber)?,
        scattering: factor * g1,
        eps,
    })
}

/// J(ω) = ω²/(π ε₀ c²) · Im G.
pub fn spectral_density(im_g: f64, omega: f64) -> f64 {
    omega * omega / (PI * EPSILON_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT) * im_g
}

/// (J_sc, J_0) with J_sc from the screened scattering part and J_0 = J − J_sc.
pub fn split_bulk_scattering(pieces: &LocalFieldPieces, omega: f64) -> (f64, f64) {
    let j = spectral_density(pieces.total().im, omega);
    let j_sc = spectral_density(pieces.scattering.im, omega);
    (j_sc, j - j_sc)
}

/// Which dressing pipeline produced a Green function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Qerra,
    FullMqed,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Qerra => "qerra",
            Provenance::FullMqed => "full-mqed",
        })
    }
}

/// One dressed evaluation at ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedValue {
    pub omega: f64,
    pub bare: Complex64,
    pub dressed: Complex64,
    /// Screened scattering part (macroscopic pipeline only).
    pub scattering: Option<Complex64>,
    /// Scattering part of the empty cavity (macroscopic pipeline only).
    pub bare_scattering: Option<Complex64>,
    /// Host permittivity at ω (macroscopic pipeline only).
    pub eps: Option<Complex64>,
}

impl DressedValue {
    pub fn j(&self) -> f64 {
        spectral_density(self.dressed.im, self.omega)
    }

    pub fn j_bare(&self) -> f64 {
        spectral_density(self.bare.im, self.omega)
    }

    /// (J_sc, J_0); J_sc is zero for the closure pipeline.
    pub fn j_split(&self) -> (f64, f64) {
        let j = self.j();
        let j_sc = self.scattering.map_or(0.0, |s| spectral_density(s.im, self.omega));
        (j_sc, j - j_sc)
    }
}

/// A dressed Green function together with the inputs it was built from.
#[derive(Debug, Clone)]
pub enum DressedGreen {
    Qerra {
        mode: LorentzianMode,
        /// `None` for an empty cavity.
        ensemble: Option<Arc<EnsembleSpec>>,
    },
    FullMqed {
        cavity: PlanarCavity,
        r_c: f64,
        wavenumber: LocalFieldWavenumber,
        quadrature: QuadratureSettings,
    },
}

impl DressedGreen {
    pub fn qerra(mode: LorentzianMode, ensemble: Option<Arc<EnsembleSpec>>) -> Self {
        DressedGreen::Qerra { mode, ensemble }
    }

    /// Planar cavity whose fill is the local-field host medium.
    pub fn full_mqed(
        length: f64,
        mirror: Permittivity,
        lf: LocalFieldParams,
        quadrature: QuadratureSettings,
    ) -> Result<Self> {
        Ok(DressedGreen::FullMqed {
            cavity: PlanarCavity::new(length, mirror, lf.eps_host.clone())?,
            r_c: lf.r_c,
            wavenumber: lf.wavenumber,
            quadrature,
        })
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            DressedGreen::Qerra { .. } => Provenance::Qerra,
            DressedGreen::FullMqed { .. } => Provenance::FullMqed,
        }
    }

    /// Short record of the inputs for output metadata.
    pub fn describe(&self) -> String {
        match self {
            DressedGreen::Qerra { mode, ensemble } => format!(
                "qerra: single mode omega_c={} gamma_c={} f1={}; ensemble N={}",
                mode.omega_c(),
                mode.gamma_c(),
                mode.f1(),
                ensemble.as_ref().map_or(0.0, |e| e.count()),
            ),
            DressedGreen::FullMqed {
                cavity,
                r_c,
                wavenumber,
                quadrature,
            } => format!(
                "full-mqed: planar cavity L={} mirror={:?}; R_C={r_c} k={wavenumber:?}; rel_tol={} pole_offset={}",
                cavity.length(),
                cavity.mirror(),
                quadrature.rel_tol,
                quadrature.pole_offset
            ),
        }
    }

    pub fn evaluate(&self, omega: f64) -> Result<DressedValue> {
        match self {
            DressedGreen::Qerra { mode, ensemble } => {
                let bare = greens::single_mode_green(mode, omega).map_err(|e| e.at_stage("bare", omega))?;
                let v_chi = match ensemble {
                    Some(ens) => ensemble_polarization(ens, omega).map_err(|e| e.at_stage("susceptibility", omega))?,
                    None => Complex64::new(0.0, 0.0),
                };
                let dressed = if v_chi == Complex64::new(0.0, 0.0) {
                    bare
                } else {
                    1.0 / qerra_inverse(bare, v_chi, omega).map_err(|e| e.at_stage("dressing", omega))?
                };
                Ok(DressedValue {
                    omega,
                    bare,
                    dressed,
                    scattering: None,
                    bare_scattering: None,
                    eps: None,
                })
            }
            DressedGreen::FullMqed {
                cavity,
                r_c,
                wavenumber,
                quadrature,
            } => {
                let eps = cavity
                    .fill()
                    .eval(omega)
                    .map_err(|e| e.at_stage("susceptibility", omega))?;
                let eps_mirror = cavity.mirror().eval(omega).map_err(|e| e.at_stage("mirror", omega))?;
                let g1 = greens::fp_scattering_green_detailed(cavity.length(), eps, eps_mirror, omega, quadrature)
                    .map_err(|e| e.at_stage("scattering", omega))?
                    .value;
                let pieces = local_field_correct_with_eps(g1, eps, *r_c, *wavenumber, omega)
                    .map_err(|e| e.at_stage("local-field", omega))?;
                // the empty cavity for reference
                let bare_g1 = greens::fp_scattering_green_detailed(
                    cavity.length(),
                    Complex64::new(1.0, 0.0),
                    eps_mirror,
                    omega,
                    quadrature,
                )
                .map_err(|e| e.at_stage("bare", omega))?
                .value;
                Ok(DressedValue {
                    omega,
                    bare: I * greens::free_space_im_green(omega) + bare_g1,
                    dressed: pieces.total(),
                    scattering: Some(pieces.scattering),
                    bare_scattering: Some(bare_g1),
                    eps: Some(eps),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::Region;
    use crate::polarizability::{EmitterModel, TwoLevelEmitter};
    use crate::units::{ev, nm};

    fn mode() -> LorentzianMode {
        LorentzianMode::with_quality_factor(ev(5.44), 25.8, 0.02).unwrap()
    }

    #[test]
    fn zero_susceptibility_returns_bare() {
        let m = mode();
        for i in 0..50 {
            let w = ev(4.5 + 0.04 * i as f64);
            let bare = greens::single_mode_green(&m, w).unwrap();
            assert_eq!(qerra_dress(bare, Complex64::new(0.0, 0.0), 3.0, w).unwrap(), bare);
        }
    }

    #[test]
    fn zero_bare_is_rejected() {
        let err = qerra_dress(Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0), 1.0, 0.2).unwrap_err();
        assert!(matches!(err, Error::NonInvertibleBare { .. }));
    }

    #[test]
    fn born_series_converges_to_closed_form() {
        let m = mode();
        let v = 1e5;
        for i in 0..40 {
            let w = ev(4.8 + 0.03 * i as f64);
            let bare = greens::single_mode_green(&m, w).unwrap();
            let chi = Complex64::new(2e-4, 3e-5);
            let k2 = (w / SPEED_OF_LIGHT).powi(2);
            let t = bare * v * k2 * chi;
            if t.norm() >= 0.9 {
                continue;
            }
            let mut g = bare;
            for _ in 0..2000 {
                g = bare + t * g;
            }
            let closed = qerra_dress(bare, chi, v, w).unwrap();
            assert!((g - closed).norm() <= 1e-10 * closed.norm());
        }
    }

    #[test]
    fn dressed_is_passive_for_lossy_inputs() {
        let m = mode();
        let e = TwoLevelEmitter::new(0.9, ev(5.44), ev(5.44) / 200.0).unwrap();
        let spec = EnsembleSpec::new(6e6, 1.0, EmitterModel::rwa(e), Region::MicroVolume).unwrap();
        let d = DressedGreen::qerra(m, Some(Arc::new(spec)));
        for i in 0..400 {
            let w = ev(4.3 + 0.006 * i as f64);
            assert!(d.evaluate(w).unwrap().dressed.im > 0.0);
        }
    }

    #[test]
    fn unit_permittivity_has_no_correction() {
        let eps = Complex64::new(1.0, 0.0);
        let w = ev(5.44);
        assert_eq!(local_field_factor(eps, w).unwrap(), Complex64::new(1.0, 0.0));
        for k in [LocalFieldWavenumber::Vacuum, LocalFieldWavenumber::Medium] {
            assert!(real_cavity_term(eps, nm(1.0), w, k).unwrap().norm() < 1e-14);
        }
        let g1 = Complex64::new(1e-3, 2e-3);
        let p = local_field_correct_with_eps(g1, eps, nm(1.0), LocalFieldWavenumber::Vacuum, w).unwrap();
        assert!((p.total() - (I * greens::free_space_im_green(w) + g1)).norm() < 1e-16);
        let (j_sc, _) = split_bulk_scattering(&p, w);
        assert!((j_sc - spectral_density(g1.im, w)).abs() <= 1e-15 * j_sc.abs());
    }

    #[test]
    fn static_term_dominates_small_radius() {
        let eps = Complex64::new(1.8, 0.0);
        let w = ev(5.44);
        for k in [LocalFieldWavenumber::Vacuum, LocalFieldWavenumber::Medium] {
            let mut r = nm(1.0);
            let mut last = f64::INFINITY;
            for _ in 0..6 {
                let ratio =
                    real_cavity_term(eps, r / 2.0, w, k).unwrap().re / real_cavity_term(eps, r, w, k).unwrap().re;
                assert!((ratio - 8.0).abs() < last);
                last = (ratio - 8.0).abs();
                r /= 2.0;
            }
            assert!(last < 1e-3);
        }
    }

    #[test]
    fn bulk_real_cavity_decay_factor() {
        // Im(G_vac + C) / Im G_vac = 9ε^{5/2}/(2ε+1)² for a lossless host
        let w = ev(5.44);
        for e in [1.2, 1.7, 2.5] {
            let eps = Complex64::new(e, 0.0);
            let p =
                local_field_correct_with_eps(Complex64::new(0.0, 0.0), eps, nm(1.0), LocalFieldWavenumber::Vacuum, w)
                    .unwrap();
            let ratio = p.total().im / greens::free_space_im_green(w);
            let expected = 9.0 * e.powf(2.5) / (2.0 * e + 1.0).powi(2);
            assert!((ratio - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn singular_local_field_is_rejected() {
        let eps = Complex64::new(-0.5, 0.0);
        assert!(matches!(
            local_field_factor(eps, 0.2),
            Err(Error::SingularLocalField { .. })
        ));
        assert!(real_cavity_term(eps, 1.0, 0.2, LocalFieldWavenumber::Vacuum).is_err());
    }

    #[test]
    fn spectral_density_examples() {
        assert_eq!(spectral_density(0.0, 0.3), 0.0);
        let a = spectral_density(0.7, 0.2);
        assert!((spectral_density(0.7, 0.4) - 4.0 * a).abs() < 1e-15 * a);
        let m = mode();
        let g = greens::single_mode_green(&m, m.omega_c()).unwrap();
        let j = spectral_density(g.im, m.omega_c());
        let expected = m.omega_c().powi(2) * m.f1().powi(2) / (PI * EPSILON_0 * SPEED_OF_LIGHT.powi(2) * m.gamma_c());
        assert!((j - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn no_cavity_means_no_scattering_density() {
        let p = local_field_correct_with_eps(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.3, 0.01),
            nm(1.0),
            LocalFieldWavenumber::Vacuum,
            ev(5.0),
        )
        .unwrap();
        let (j_sc, j0) = split_bulk_scattering(&p, ev(5.0));
        assert_eq!(j_sc, 0.0);
        assert!((j0 - spectral_density(p.total().im, ev(5.0))).abs() < 1e-15 * j0);
    }
}

//! Configuration-driven spectral scans.
//!
//! A [`Scenario`] names a cavity, an emitter ensemble, a dressing pipeline and
//! a frequency grid. [`run_scenario`] evaluates the requested quantities on
//! the grid in parallel; results do not depend on the worker count.

mod config;
pub mod output;
pub mod presets;

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

pub use config::{
    load_scenarios, parse_scenarios, Cavity, Component, Embedding, Ensemble, Output, PlotAxis, Quantity, Scan,
    Scenario, Spacing,
};

use crate::embedding::{spectral_density, DressedGreen, DressedValue, LocalFieldParams, LocalFieldWavenumber};
use crate::error::{Error, Result};
use crate::greens::{LorentzianMode, QuadratureSettings};
use crate::medium::{EnsembleSpec, Permittivity, Region, TabulatedPermittivity};
use crate::polarizability::{self, EmitterModel, MixtureModel, SumOverStatesModel, TwoLevelEmitter};
use crate::units::{debye, ev, nm, nm3, per_nm3};

/// Values of the requested quantities on the scan grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub scenario: Scenario,
    pub omega_ev: Vec<f64>,
    pub columns: Vec<(Quantity, Vec<f64>)>,
}

impl ScanResult {
    pub fn column(&self, q: Quantity) -> Option<&[f64]> {
        self.columns.iter().find(|(c, _)| *c == q).map(|(_, v)| v.as_slice())
    }

    /// The resolved scenario as TOML lines.
    pub fn metadata(&self) -> Vec<String> {
        let echo = toml::to_string(&self.scenario).unwrap_or_else(|e| format!("unserializable scenario: {e}"));
        echo.lines().map(str::to_string).collect()
    }
}

impl Scenario {
    /// Overrides the planar-cavity quadrature tolerance; no effect on the
    /// single-mode pipeline.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        if let Embedding::FullMqed { rel_tol, .. } = &mut self.embedding {
            *rel_tol = tol;
        }
        self
    }
}

/// Resolves `builtin:<name>` or a path relative to `base`.
fn load_sos(model: &str, eta: f64, base: &Path) -> Result<SumOverStatesModel> {
    match model.strip_prefix("builtin:") {
        Some(name) => {
            let text =
                presets::builtin_roots(name).ok_or_else(|| Error::Config(format!("unknown builtin model `{name}`")))?;
            SumOverStatesModel::new(polarizability::parse_tddft_roots(text, model)?, eta)
        }
        None => polarizability::load_tddft_roots(base.join(model), eta),
    }
}

/// The per-emitter model of the ensemble; `None` when there are no components.
pub fn emitter_model(s: &Scenario) -> Result<Option<EmitterModel>> {
    let mut parts = Vec::new();
    for c in &s.ensemble.components {
        let model = match c {
            Component::Rwa {
                dipole_debye,
                omega_ev,
                gamma_ev,
                ..
            } => EmitterModel::rwa(TwoLevelEmitter::new(
                debye(*dipole_debye),
                ev(*omega_ev),
                ev(*gamma_ev),
            )?),
            Component::Full {
                dipole_debye,
                omega_ev,
                gamma_ev,
                ..
            } => EmitterModel::full(TwoLevelEmitter::new(
                debye(*dipole_debye),
                ev(*omega_ev),
                ev(*gamma_ev),
            )?),
            Component::Sos { model, eta_hartree, .. } => {
                EmitterModel::SumOverStates(load_sos(model, *eta_hartree, &s.base_dir)?)
            }
        };
        parts.push((model, c.fraction()));
    }
    Ok(match parts.len() {
        0 => None,
        1 => Some(parts.remove(0).0),
        _ => Some(EmitterModel::Mixture(MixtureModel::new(parts)?)),
    })
}

fn parse_constant(spec: &str) -> Result<Complex64> {
    let bad = || Error::Config(format!("expected `constant:<re>,<im>`, got `{spec}`"));
    let body = spec.strip_prefix("constant:").ok_or_else(bad)?;
    let (re, im) = body.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_mirror(spec: &str, base: &Path) -> Result<Permittivity> {
    if spec == "drude_gold" {
        Ok(Permittivity::gold())
    } else if let Some(path) = spec.strip_prefix("tabulated:") {
        Ok(Permittivity::Tabulated(Arc::new(TabulatedPermittivity::load(
            base.join(path),
        )?)))
    } else if spec.starts_with("constant:") {
        Ok(Permittivity::Constant(parse_constant(spec)?))
    } else {
        Err(Error::Config(format!(
            "unknown mirror `{spec}` (expected drude_gold, tabulated:<path> or constant:<re>,<im>)"
        )))
    }
}

/// Builds the dressed Green function a scenario describes, plus the emitter
/// model used for polarizability output.
pub fn build(s: &Scenario) -> Result<(DressedGreen, Option<EmitterModel>)> {
    let model = emitter_model(s)?;
    let dressed = match (&s.cavity, &s.embedding) {
        (
            Cavity::SingleMode {
                omega_c_ev,
                quality_factor,
                f1,
                ..
            },
            Embedding::Qerra,
        ) => {
            let mode = LorentzianMode::with_quality_factor(ev(*omega_c_ev), *quality_factor, *f1)?;
            let ensemble = match &model {
                Some(m) if s.ensemble.n > 0.0 => {
                    let volume = s.ensemble.volume_nm3.map_or(1.0, nm3);
                    Some(Arc::new(EnsembleSpec::new(
                        s.ensemble.n,
                        volume,
                        m.clone(),
                        Region::MicroVolume,
                    )?))
                }
                _ => None,
            };
            DressedGreen::qerra(mode, ensemble)
        }
        (
            Cavity::FabryPerot {
                length_nm,
                mirror,
                fill,
            },
            Embedding::FullMqed {
                r_c_nm,
                wavenumber,
                rel_tol,
                max_subdivisions,
                pole_offset,
            },
        ) => {
            let host = match fill.as_str() {
                "vacuum" => Permittivity::Vacuum,
                "ensemble" => match &model {
                    None => Permittivity::Vacuum,
                    Some(m) => {
                        let density = match (s.ensemble.density_per_nm3, s.ensemble.volume_nm3) {
                            (Some(d), _) => per_nm3(d),
                            (None, Some(v)) => s.ensemble.n / nm3(v),
                            (None, None) => {
                                return Err(Error::Config(
                                    "full_mqed needs `density_per_nm3` or `volume_nm3`".into(),
                                ))
                            }
                        };
                        Permittivity::Ensemble(Arc::new(EnsembleSpec::from_density(
                            density,
                            m.clone(),
                            Region::BetweenMirrors,
                        )?))
                    }
                },
                other if other.starts_with("constant:") => Permittivity::Constant(parse_constant(other)?),
                other => {
                    return Err(Error::Config(format!(
                        "unknown fill `{other}` (expected ensemble, vacuum or constant:<re>,<im>)"
                    )))
                }
            };
            let wavenumber = match wavenumber.as_str() {
                "medium" => LocalFieldWavenumber::Medium,
                _ => LocalFieldWavenumber::Vacuum,
            };
            let lf = LocalFieldParams::new(nm(*r_c_nm), host)?.with_wavenumber(wavenumber);
            let quadrature = QuadratureSettings {
                rel_tol: *rel_tol,
                max_subdivisions: *max_subdivisions,
                pole_offset: *pole_offset,
            };
            quadrature.validate()?;
            DressedGreen::full_mqed(nm(*length_nm), parse_mirror(mirror, &s.base_dir)?, lf, quadrature)?
        }
        _ => return Err(Error::Config("embedding kind does not match cavity kind".into())),
    };
    Ok((dressed, model))
}

fn quantity_value(q: Quantity, v: &DressedValue, alpha: Complex64) -> f64 {
    match q {
        Quantity::J => v.j(),
        Quantity::JBare => v.j_bare(),
        Quantity::JSc => v.j_split().0,
        Quantity::J0 => v.j_split().1,
        Quantity::JScBare => v.bare_scattering.map_or(0.0, |g| spectral_density(g.im, v.omega)),
        Quantity::ReG => v.dressed.re,
        Quantity::ImG => v.dressed.im,
        Quantity::AlphaAveRe => alpha.re,
        Quantity::AlphaAveIm => alpha.im,
        Quantity::EpsRe => v.eps.map_or(1.0, |e| e.re),
        Quantity::EpsIm => v.eps.map_or(0.0, |e| e.im),
    }
}

/// Evaluates a scenario on its grid.
pub fn run_scenario(s: &Scenario) -> Result<ScanResult> {
    let (dressed, model) = build(s)?;
    let omega_ev = s.scan.grid_ev();
    let quantities = &s.output.quantities;
    let wants_alpha = quantities
        .iter()
        .any(|q| matches!(q, Quantity::AlphaAveRe | Quantity::AlphaAveIm));
    let rows: Vec<Result<Vec<f64>>> = omega_ev
        .par_iter()
        .map(|&w_ev| {
            let w = ev(w_ev);
            let v = dressed.evaluate(w)?;
            let alpha = match (&model, wants_alpha) {
                (Some(m), true) => m.alpha(w).map_err(|e| e.at_stage("polarizability", w))?,
                _ => Complex64::new(0.0, 0.0),
            };
            Ok(quantities.iter().map(|&q| quantity_value(q, &v, alpha)).collect())
        })
        .collect();
    let mut columns: Vec<(Quantity, Vec<f64>)> = quantities
        .iter()
        .map(|&q| (q, Vec::with_capacity(omega_ev.len())))
        .collect();
    for row in rows {
        for ((_, col), value) in columns.iter_mut().zip(row?) {
            col.push(value);
        }
    }
    Ok(ScanResult {
        scenario: s.clone(),
        omega_ev,
        columns,
    })
}

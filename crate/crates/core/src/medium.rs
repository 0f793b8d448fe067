//! Effective-medium susceptibility of an emitter ensemble and the material
//! permittivities used for mirrors and cavity fill.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polarizability::EmitterModel;
use crate::units::{self, Quantity, Unit, EPSILON_0};

/// Where the ensemble susceptibility applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// A small volume around the singled-out emitter, smaller than the mode wavelength.
    MicroVolume,
    /// Homogeneously filling the space between the cavity mirrors.
    BetweenMirrors,
}

/// N emitters of one model (or mixture) occupying a volume V.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    count: f64,
    volume: f64,
    model: EmitterModel,
    region: Region,
}

impl EnsembleSpec {
    pub fn new(count: f64, volume: f64, model: EmitterModel, region: Region) -> Result<Self> {
        if !(count >= 0.0) || !count.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "emitter count must be >= 0, got {count}"
            )));
        }
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::InvalidParameter(format!("volume must be > 0, got {volume}")));
        }
        Ok(EnsembleSpec {
            count,
            volume,
            model,
            region,
        })
    }

    /// Ensemble given by a number density; the volume is set to one internal unit.
    pub fn from_density(density: f64, model: EmitterModel, region: Region) -> Result<Self> {
        Self::new(density, 1.0, model, region)
    }

    pub fn count(&self) -> f64 {
        self.count
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn density(&self) -> f64 {
        self.count / self.volume
    }

    pub fn model(&self) -> &EmitterModel {
        &self.model
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn with_count(&self, count: f64) -> Result<Self> {
        Self::new(count, self.volume, self.model.clone(), self.region)
    }
}

/// Dilute-gas Clausius–Mossotti susceptibility χ(ω) = N α(ω) / (V ε₀).
pub fn clausius_mossotti_dilute(spec: &EnsembleSpec, omega: f64) -> Result<Complex64> {
    if spec.count == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(spec.density() / EPSILON_0 * spec.model.alpha(omega)?)
}

/// ε = 1 + χ
pub fn permittivity_from_chi(chi: Complex64) -> Complex64 {
    1.0 + chi
}

/// Gold plasma frequency, 2.067 × 2π PHz.
pub fn gold_plasma_frequency() -> f64 {
    Quantity::new(2.067, Unit::TwoPiPetaHertz).internal()
}

/// Gold Drude damping, 4.4491 × 2π THz.
pub fn gold_damping() -> f64 {
    Quantity::new(4.4491, Unit::TwoPiTeraHertz).internal()
}

/// Drude permittivity 1 − ω_p² / (ω(ω + iγ)).
pub fn drude(omega: f64, omega_p: f64, gamma: f64) -> Complex64 {
    1.0 - omega_p * omega_p / (omega * Complex64::new(omega, gamma))
}

/// Drude permittivity of gold.
pub fn drude_gold(omega: f64) -> Complex64 {
    drude(omega, gold_plasma_frequency(), gold_damping())
}

/// Permittivity sampled on an energy grid, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPermittivity {
    omega: Vec<f64>,
    eps: Vec<Complex64>,
}

impl TabulatedPermittivity {
    pub fn new(omega: Vec<f64>, eps: Vec<Complex64>) -> Result<Self> {
        if omega.len() != eps.len() || omega.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated permittivity needs at least two (omega, eps) rows".into(),
            ));
        }
        if omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "tabulated permittivity frequencies must be strictly increasing".into(),
            ));
        }
        Ok(TabulatedPermittivity { omega, eps })
    }

    /// Reads `energy_eV re_eps im_eps` rows after one header line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut omega = Vec::new();
        let mut eps = Vec::new();
        for (idx, raw) in text.lines().enumerate().skip(1) {
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                message,
            };
            let cols = row
                .split_whitespace()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|e| parse_err(format!("bad number {c:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if cols.len() != 3 {
                return Err(parse_err(format!("expected 3 columns, found {}", cols.len())));
            }
            omega.push(units::ev(cols[0]));
            eps.push(Complex64::new(cols[1], cols[2]));
        }
        Self::new(omega, eps)
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        let (lo, hi) = (self.omega[0], self.omega[self.omega.len() - 1]);
        if !(lo..=hi).contains(&omega) {
            return Err(Error::InvalidParameter(format!(
                "omega = {omega} outside tabulated range [{lo}, {hi}]"
            )));
        }
        let j = self
            .omega
            .partition_point(|&w| w <= omega)
            .clamp(1, self.omega.len() - 1);
        let t = (omega - self.omega[j - 1]) / (self.omega[j] - self.omega[j - 1]);
        Ok(self.eps[j - 1] * (1.0 - t) + self.eps[j] * t)
    }
}

/// A frequency-dependent permittivity.
#[derive(Debug, Clone)]
pub enum Permittivity {
    Vacuum,
    Constant(Complex64),
    Drude {
        omega_p: f64,
        gamma: f64,
    },
    /// 1 + χ of a homogeneous ensemble.
    Ensemble(Arc<EnsembleSpec>),
    Tabulated(Arc<TabulatedPermittivity>),
}

impl Permittivity {
    pub fn gold() -> Self {
        Permittivity::Drude {
            omega_p: gold_plasma_frequency(),
            gamma: gold_damping(),
        }
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        match self {
            Permittivity::Vacuum => Ok(Complex64::new(1.0, 0.0)),
            Permittivity::Constant(e) => Ok(*e),
            Permittivity::Drude { omega_p, gamma } => Ok(drude(omega, *omega_p, *gamma)),
            Permittivity::Ensemble(spec) => Ok(permittivity_from_chi(clausius_mossotti_dilute(spec, omega)?)),
            Permittivity::Tabulated(t) => t.eval(omega),
        }
    }
}

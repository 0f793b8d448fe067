//! Emitter polarizability models α(ω) for a single polarization component.
//!
//! All frequencies are internal (Hartree, ħ = 1), dipoles in e·a₀. Returned
//! polarizabilities are in units of d²/ħω.

use std::path::Path;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{self, HBAR};

/// Two-level emitter with transition dipole `dipole`, transition frequency
/// `omega_a` and half-width damping `gamma_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelEmitter {
    dipole: f64,
    omega_a: f64,
    gamma_a: f64,
}

impl TwoLevelEmitter {
    pub fn new(dipole: f64, omega_a: f64, gamma_a: f64) -> Result<Self> {
        if !(dipole >= 0.0) || !dipole.is_finite() {
            return Err(Error::InvalidParameter(format!("dipole must be >= 0, got {dipole}")));
        }
        if !(omega_a > 0.0) || !omega_a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "transition frequency must be > 0, got {omega_a}"
            )));
        }
        if !(gamma_a >= 0.0) || !gamma_a.is_finite() {
            return Err(Error::InvalidParameter(format!("damping must be >= 0, got {gamma_a}")));
        }
        Ok(TwoLevelEmitter {
            dipole,
            omega_a,
            gamma_a,
        })
    }

    pub fn dipole(&self) -> f64 {
        self.dipole
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn gamma_a(&self) -> f64 {
        self.gamma_a
    }

    pub fn with_omega_a(self, omega_a: f64) -> Result<Self> {
        Self::new(self.dipole, omega_a, self.gamma_a)
    }

    pub fn with_gamma_a(self, gamma_a: f64) -> Result<Self> {
        Self::new(self.dipole, self.omega_a, gamma_a)
    }
}

/// Rotating-wave two-level polarizability d²/ħ · 1/(ω_A − ω − iγ_A).
pub fn alpha_rwa(e: &TwoLevelEmitter, omega: f64) -> Result<Complex64> {
    if e.gamma_a == 0.0 && omega == e.omega_a {
        return Err(Error::ResonantLossless { omega });
    }
    let d2 = e.dipole * e.dipole;
    Ok(d2 / HBAR / Complex64::new(e.omega_a - omega, -e.gamma_a))
}

/// Lorentz polarizability including the counter-rotating term,
/// 2d²ω_A/ħ · 1/(ω_A² − ω² − iωγ_A).
///
/// Passive for ω > 0, positive static limit 2d²/(ħω_A), and equal to
/// [`alpha_rwa`] up to O(γ_A/ω_A) near resonance.
pub fn alpha_full(e: &TwoLevelEmitter, omega: f64) -> Result<Complex64> {
    let denom = Complex64::new(e.omega_a * e.omega_a - omega * omega, -omega * e.gamma_a);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::ResonantLossless { omega });
    }
    let d2 = e.dipole * e.dipole;
    Ok(2.0 * d2 * e.omega_a / HBAR / denom)
}

/// One electronic transition k ← 0: energy ħω_k0 and transition dipole vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub omega: f64,
    pub dipole: [f64; 3],
}

impl Transition {
    pub fn dipole_norm_sqr(&self) -> f64 {
        self.dipole.iter().map(|d| d * d).sum()
    }
}

/// Sum-over-states polarizability from a list of excited-state transitions
/// with a common broadening `eta` (energy units).
#[derive(Debug, Clone, PartialEq)]
pub struct SumOverStatesModel {
    transitions: Vec<Transition>,
    eta: f64,
}

impl SumOverStatesModel {
    pub fn new(transitions: Vec<Transition>, eta: f64) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::EmptyTransitions);
        }
        if let Some(t) = transitions.iter().find(|t| !(t.omega > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "transition energy must be > 0, got {}",
                t.omega
            )));
        }
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter(format!("broadening must be > 0, got {eta}")));
        }
        Ok(SumOverStatesModel { transitions, eta })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The Lorentz emitter whose [`alpha_full`] reproduces transition `k`
    /// (projected on `axis`) exactly.
    ///
    /// The SOS denominator (ħω_k)² − (ħω + iη)² equals ω_A² − ω² − iωγ with
    /// γ = 2η/ħ and ω_A² = ω_k² + (η/ħ)², and the prefactor fixes
    /// d² = d_k² ω_k/ω_A. To leading order in η this is ω_A = ω_k, γ = 2η.
    pub fn equivalent_lorentz(&self, k: usize, axis: usize) -> Result<TwoLevelEmitter> {
        let t = self
            .transitions
            .get(k)
            .ok_or_else(|| Error::InvalidParameter(format!("no transition with index {k}")))?;
        let eta = self.eta / HBAR;
        let omega_a = (t.omega * t.omega + eta * eta).sqrt();
        let d2 = t.dipole[axis] * t.dipole[axis] * t.omega / omega_a;
        TwoLevelEmitter::new(d2.sqrt(), omega_a, 2.0 * eta)
    }
}

/// Full 3×3 sum-over-states polarizability tensor
/// α_ij(ω) = Σ_k 2ħω_k d_k^i d_k^j / ((ħω_k)² − (ħω + iη)²).
pub fn alpha_sos(m: &SumOverStatesModel, omega: f64) -> Matrix3<Complex64> {
    let shifted = Complex64::new(HBAR * omega, m.eta);
    let shifted2 = shifted * shifted;
    let mut alpha = Matrix3::zeros();
    for t in &m.transitions {
        let e = HBAR * t.omega;
        let weight = 2.0 * e / (e * e - shifted2);
        for i in 0..3 {
            for j in 0..3 {
                alpha[(i, j)] += weight * (t.dipole[i] * t.dipole[j]);
            }
        }
    }
    alpha
}

/// Isotropic average, trace/3.
pub fn isotropic_average(alpha: &Matrix3<Complex64>) -> Complex64 {
    alpha.trace() / 3.0
}

/// Which two-level line shape to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineShape {
    Rwa,
    Full,
}

/// Weighted mixture of emitter species. Fractions are relative number
/// densities and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    components: Vec<(EmitterModel, f64)>,
}

impl MixtureModel {
    pub fn new(components: Vec<(EmitterModel, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("mixture has no components".into()));
        }
        if let Some((_, f)) = components.iter().find(|(_, f)| !(0.0..=1.0).contains(f)) {
            return Err(Error::InvalidParameter(format!("fraction {f} outside [0, 1]")));
        }
        let total: f64 = components.iter().map(|(_, f)| f).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture fractions sum to {total}, expected 1"
            )));
        }
        Ok(MixtureModel { components })
    }

    pub fn components(&self) -> &[(EmitterModel, f64)] {
        &self.components
    }
}

/// Σ_c fraction_c · α_c(ω)
pub fn alpha_mixture(m: &MixtureModel, omega: f64) -> Result<Complex64> {
    m.components
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, (model, f)| {
            Ok(acc + *f * model.alpha(omega)?)
        })
}

/// Scalar polarizability of one emitter species (or mixture).
#[derive(Debug, Clone, PartialEq)]
pub enum EmitterModel {
    TwoLevel {
        emitter: TwoLevelEmitter,
        shape: LineShape,
    },
    /// Evaluated as the isotropic average of the tensor.
    SumOverStates(SumOverStatesModel),
    Mixture(MixtureModel),
}

impl EmitterModel {
    pub fn rwa(emitter: TwoLevelEmitter) -> Self {
        EmitterModel::TwoLevel {
            emitter,
            shape: LineShape::Rwa,
        }
    }

    pub fn full(emitter: TwoLevelEmitter) -> Self {
        EmitterModel::TwoLevel {
            emitter,
            shape: LineShape::Full,
        }
    }

    pub fn alpha(&self, omega: f64) -> Result<Complex64> {
        match self {
            EmitterModel::TwoLevel {
                emitter,
                shape: LineShape::Rwa,
            } => alpha_rwa(emitter, omega),
            EmitterModel::TwoLevel {
                emitter,
                shape: LineShape::Full,
            } => alpha_full(emitter, omega),
            EmitterModel::SumOverStates(m) => Ok(isotropic_average(&alpha_sos(m, omega))),
            EmitterModel::Mixture(m) => alpha_mixture(m, omega),
        }
    }
}

/// Parses a TDDFT roots table: one header line, then rows of
/// `energy_eV dx_au dy_au dz_au`. `origin` labels error messages.
pub fn parse_tddft_roots(text: &str, origin: &str) -> Result<Vec<Transition>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    if lines.next().is_none() {
        return Err(parse_err(1, "missing header line".into()));
    }
    let mut roots = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(parse_err(line_no, format!("expected 4 columns, found {}", cols.len())));
        }
        let mut vals = [0.0; 4];
        for (v, c) in vals.iter_mut().zip(&cols) {
            *v = c
                .parse::<f64>()
                .map_err(|e| parse_err(line_no, format!("bad number {c:?}: {e}")))?;
        }
        if !(vals[0] > 0.0) {
            return Err(parse_err(
                line_no,
                format!("transition energy must be positive, got {}", vals[0]),
            ));
        }
        roots.push(Transition {
            omega: units::ev(vals[0]),
            dipole: [vals[1], vals[2], vals[3]],
        });
    }
    if roots.is_empty() {
        return Err(Error::EmptyTransitions);
    }
    Ok(roots)
}

/// Reads a roots file and builds the sum-over-states model with broadening `eta`.
pub fn load_tddft_roots(path: impl AsRef<Path>, eta: f64) -> Result<SumOverStatesModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let roots = parse_tddft_roots(&text, &path.display().to_string())?;
    SumOverStatesModel::new(roots, eta)
}

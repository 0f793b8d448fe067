//! Physical constants and unit conversions.
//!
//! The numerical core works in Hartree atomic units: energies in Hartree,
//! lengths in Bohr, dipoles in e·a₀ and frequencies as energies (ħ = 1).
//! ħ, ε₀ and c are still carried as named constants so that every formula
//! keeps its SI shape. Values are CODATA 2018.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Reduced Planck constant (internal units).
pub const HBAR: f64 = 1.0;

/// Vacuum permittivity (internal units, 4πε₀ = 1).
pub const EPSILON_0: f64 = 1.0 / (4.0 * PI);

/// Fine-structure constant
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Speed of light in vacuum (internal units, 1/α).
pub const SPEED_OF_LIGHT: f64 = 137.035_999_084;

/// Hartree energy (eV)
pub const HARTREE_EV: f64 = 27.211_386_245_988;

/// Bohr radius (nm)
pub const BOHR_NM: f64 = 0.052_917_721_090_3;

/// Atomic unit of time ħ/E_h (s)
pub const ATOMIC_TIME_S: f64 = 2.418_884_326_585_7e-17;

/// Elementary charge (C)
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// Speed of light in vacuum (m s^-1)
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;

/// One Debye in C·m (10⁻²¹/c, exact by definition).
pub const DEBYE_CM: f64 = 1.0e-21 / SPEED_OF_LIGHT_SI;

/// ħc in internal units.
pub const HBAR_C: f64 = HBAR * SPEED_OF_LIGHT;

/// One Debye in atomic dipole units e·a₀.
pub fn debye_in_au() -> f64 {
    DEBYE_CM / (ELEMENTARY_CHARGE_C * BOHR_NM * 1.0e-9)
}

/// Physical dimension of a unit tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Energy or angular frequency (interchangeable through ħ).
    Spectral,
    Length,
    Dipole,
}

/// Unit tags understood by [`convert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    ElectronVolt,
    /// Hartree; also the internal energy/frequency unit.
    Hartree,
    RadPerSecond,
    /// `x` means ω = 2π·x·10¹² rad/s.
    TwoPiTeraHertz,
    /// `x` means ω = 2π·x·10¹⁵ rad/s.
    TwoPiPetaHertz,
    Nanometer,
    /// Bohr; also the internal length unit.
    Bohr,
    Debye,
    /// e·a₀; also the internal dipole unit.
    AtomicDipole,
}

impl Unit {
    pub const INTERNAL_ENERGY: Unit = Unit::Hartree;
    pub const INTERNAL_LENGTH: Unit = Unit::Bohr;
    pub const INTERNAL_DIPOLE: Unit = Unit::AtomicDipole;

    pub fn dimension(self) -> Dimension {
        match self {
            Unit::ElectronVolt | Unit::Hartree | Unit::RadPerSecond | Unit::TwoPiTeraHertz | Unit::TwoPiPetaHertz => {
                Dimension::Spectral
            }
            Unit::Nanometer | Unit::Bohr => Dimension::Length,
            Unit::Debye | Unit::AtomicDipole => Dimension::Dipole,
        }
    }

    /// Multiplier taking a value in this unit to the internal unit of its dimension.
    fn to_internal(self) -> f64 {
        match self {
            Unit::ElectronVolt => 1.0 / HARTREE_EV,
            Unit::Hartree | Unit::Bohr | Unit::AtomicDipole => 1.0,
            Unit::RadPerSecond => ATOMIC_TIME_S,
            Unit::TwoPiTeraHertz => 2.0 * PI * 1.0e12 * ATOMIC_TIME_S,
            Unit::TwoPiPetaHertz => 2.0 * PI * 1.0e15 * ATOMIC_TIME_S,
            Unit::Nanometer => 1.0 / BOHR_NM,
            Unit::Debye => debye_in_au(),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::ElectronVolt => "eV",
            Unit::Hartree => "Hartree",
            Unit::RadPerSecond => "rad/s",
            Unit::TwoPiTeraHertz => "2π·THz",
            Unit::TwoPiPetaHertz => "2π·PHz",
            Unit::Nanometer => "nm",
            Unit::Bohr => "Bohr",
            Unit::Debye => "D",
            Unit::AtomicDipole => "e·a0",
        };
        f.write_str(s)
    }
}

/// A scalar tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }

    pub fn convert(self, target: Unit) -> Result<Quantity> {
        convert(self, target)
    }

    /// Value in the internal unit of its dimension.
    pub fn internal(self) -> f64 {
        self.value * self.unit.to_internal()
    }
}

/// Converts `q` to `target`.
///
/// Spectral and length quantities convert into each other as photon energy and
/// vacuum wavelength, λ = 2πħc/E. Dipoles only convert among dipole units.
pub fn convert(q: Quantity, target: Unit) -> Result<Quantity> {
    if q.unit == target {
        return Ok(q);
    }
    let (from, to) = (q.unit.dimension(), target.dimension());
    let internal = q.value * q.unit.to_internal();
    let value = match (from, to) {
        (a, b) if a == b => internal / target.to_internal(),
        (Dimension::Spectral, Dimension::Length) | (Dimension::Length, Dimension::Spectral) => {
            // E·λ = 2πħc in internal units, and the map is its own inverse.
            (2.0 * PI * HBAR_C / internal) / target.to_internal()
        }
        _ => {
            return Err(Error::DimensionMismatch {
                from: q.unit.to_string(),
                to: target.to_string(),
            })
        }
    };
    Ok(Quantity::new(value, target))
}

/// Photon energy in eV to internal frequency.
pub fn ev(value: f64) -> f64 {
    value / HARTREE_EV
}

/// Internal frequency to eV.
pub fn to_ev(omega: f64) -> f64 {
    omega * HARTREE_EV
}

/// Nanometres to internal length.
pub fn nm(value: f64) -> f64 {
    value / BOHR_NM
}

/// Debye to internal dipole.
pub fn debye(value: f64) -> f64 {
    value * debye_in_au()
}

/// Volume in nm³ to internal volume.
pub fn nm3(value: f64) -> f64 {
    value / (BOHR_NM * BOHR_NM * BOHR_NM)
}

/// Number density in nm⁻³ to internal units.
pub fn per_nm3(value: f64) -> f64 {
    value * BOHR_NM * BOHR_NM * BOHR_NM
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Unit; 9] = [
        Unit::ElectronVolt,
        Unit::Hartree,
        Unit::RadPerSecond,
        Unit::TwoPiTeraHertz,
        Unit::TwoPiPetaHertz,
        Unit::Nanometer,
        Unit::Bohr,
        Unit::Debye,
        Unit::AtomicDipole,
    ];

    #[test]
    fn photon_wavelength_of_cavity_energy() {
        let lambda = convert(Quantity::new(5.44, Unit::ElectronVolt), Unit::Nanometer).unwrap();
        // 2πħc = 1239.841984 eV·nm
        assert!((lambda.value - 1_239.841_984 / 5.44).abs() < 1e-6);
        assert!((lambda.value - 227.8).abs() / 227.8 < 1e-3);
    }

    #[test]
    fn hartree_in_ev() {
        let e = convert(Quantity::new(1.0, Unit::Hartree), Unit::ElectronVolt).unwrap();
        assert!((e.value - 27.211_386_245_988).abs() < 1e-12);
    }

    #[test]
    fn identity_conversion() {
        let q = Quantity::new(3.25, Unit::Debye);
        assert_eq!(convert(q, Unit::Debye).unwrap(), q);
    }

    #[test]
    fn debye_value() {
        // 1 D = 0.393430 e·a0
        assert!((debye_in_au() - 0.393_430_3).abs() < 1e-6);
    }

    #[test]
    fn rad_per_second_matches_hbar() {
        // ħ = 6.582119569e-16 eV s
        let e = convert(Quantity::new(1.0e15, Unit::RadPerSecond), Unit::ElectronVolt).unwrap();
        assert!((e.value - 0.658_211_956_9).abs() < 1e-9);
    }

    #[test]
    fn dimension_mismatch_names_both_units() {
        let err = convert(Quantity::new(1.0, Unit::Debye), Unit::ElectronVolt).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("D") && msg.contains("eV"), "{msg}");
    }

    #[test]
    fn round_trip_every_compatible_pair() {
        for &a in &ALL {
            for &b in &ALL {
                let q = Quantity::new(2.75, a);
                let Ok(there) = convert(q, b) else {
                    assert!(
                        a.dimension() != b.dimension()
                            && (a.dimension() == Dimension::Dipole || b.dimension() == Dimension::Dipole)
                    );
                    continue;
                };
                let back = convert(there, a).unwrap();
                assert!((back.value - q.value).abs() <= 1e-12 * q.value, "{a} -> {b}");
            }
        }
    }
}

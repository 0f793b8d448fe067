//! Single-excitation quantum-optics Hamiltonians: Tavis–Cummings, its
//! Holstein–Primakoff construction, the effective two-polariton model obtained
//! from the dressed Green function, and an explicit N-emitter oracle.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::LorentzianMode;
use crate::units::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// g = f1 d ω_c / (√(ε₀ħ) c).
pub fn coupling_from_mode(m: &LorentzianMode, dipole: f64) -> f64 {
    m.f1() * dipole * m.omega_c() / ((EPSILON_0 * HBAR).sqrt() * SPEED_OF_LIGHT)
}

/// Mode amplitude f1 that yields single-emitter coupling `g`.
pub fn f1_for_coupling(omega_c: f64, g: f64, dipole: f64) -> Result<f64> {
    if !(dipole > 0.0) || !(omega_c > 0.0) {
        return Err(Error::InvalidParameter(
            "dipole and mode frequency must be > 0 to invert the coupling".into(),
        ));
    }
    Ok(g * (EPSILON_0 * HBAR).sqrt() * SPEED_OF_LIGHT / (dipole * omega_c))
}

/// Polariton frequencies and impurity couplings of the dressed single mode.
///
/// `omega_plus`/`g_plus` belong to the pole ω_c/(1 + x) and
/// `omega_minus`/`g_minus` to ω_c/(1 − x), x = Ω_R/ω_c. Since the "+" pole is
/// the lower in frequency, [`upper`](Self::upper) and [`lower`](Self::lower)
/// give the frequency-ordered view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonParams {
    pub omega_c: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub omega_r: f64,
    pub g: f64,
}

/// A polariton branch: frequency and coupling to the impurity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub omega: f64,
    pub coupling: f64,
}

impl PolaritonParams {
    pub fn x(&self) -> f64 {
        self.omega_r / self.omega_c
    }

    pub fn upper(&self) -> Branch {
        Branch {
            omega: self.omega_minus,
            coupling: self.g_minus,
        }
    }

    pub fn lower(&self) -> Branch {
        Branch {
            omega: self.omega_plus,
            coupling: self.g_plus,
        }
    }
}

/// ω± = ω_c/(1 ± x), g± = (g/√2)/√(1 ± x).
pub fn qerra_polariton_params(omega_c: f64, omega_r: f64, g: f64) -> Result<PolaritonParams> {
    if !(omega_c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mode frequency must be > 0, got {omega_c}"
        )));
    }
    let x = omega_r / omega_c;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "Rabi frequency must satisfy 0 <= Omega_R/omega_c < 1, got {x}"
        )));
    }
    let half = g / std::f64::consts::SQRT_2;
    Ok(PolaritonParams {
        omega_c,
        omega_plus: omega_c / (1.0 + x),
        omega_minus: omega_c / (1.0 - x),
        g_plus: half / (1.0 + x).sqrt(),
        g_minus: half / (1.0 - x).sqrt(),
        omega_r,
        g,
    })
}

/// A single-excitation Hamiltonian with labelled basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationHamiltonian {
    matrix: DMatrix<Complex64>,
    labels: Vec<String>,
}

impl SingleExcitationHamiltonian {
    pub fn new(matrix: DMatrix<Complex64>, labels: Vec<String>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n || labels.len() != n {
            return Err(Error::InvalidParameter(format!(
                "Hamiltonian must be square with one label per state, got {}x{} and {} labels",
                n,
                matrix.ncols(),
                labels.len()
            )));
        }
        let scale = matrix
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..n {
            for j in i..n {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(Error::InvalidParameter(format!(
                        "Hamiltonian is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SingleExcitationHamiltonian { matrix, labels })
    }

    fn from_real(matrix: DMatrix<f64>, labels: &[&str]) -> Result<Self> {
        Self::new(
            matrix.map(Complex64::from),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = if self.matrix.iter().all(|z| z.im == 0.0) {
            SymmetricEigen::new(self.matrix.map(|z| z.re))
                .eigenvalues
                .iter()
                .copied()
                .collect()
        } else {
            SymmetricEigen::new(self.matrix.clone())
                .eigenvalues
                .iter()
                .copied()
                .collect()
        };
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenvalues (ascending) with eigenvectors as columns, for real matrices.
    pub fn eigen_real(&self) -> Result<(Vec<f64>, DMatrix<f64>)> {
        if self.matrix.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidParameter("Hamiltonian has complex entries".into()));
        }
        let eig = SymmetricEigen::new(self.matrix.map(|z| z.re));
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    /// max |H_ij − K_ij|
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dims(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// max over entries of |H_ij − K_ij| / |K_ij|; entries where both are zero
    /// are skipped and a nonzero entry against a zero one counts as infinite.
    pub fn max_rel_diff(&self, reference: &Self) -> Result<f64> {
        self.check_dims(reference)?;
        Ok(self
            .matrix
            .iter()
            .zip(reference.matrix.iter())
            .map(|(a, b)| {
                let d = (a - b).norm();
                if d == 0.0 {
                    0.0
                } else if b.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    d / b.norm()
                }
            })
            .fold(0.0, f64::max))
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidParameter(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

const POLARITON_LABELS: [&str; 3] = ["(|1>+|B>)/sqrt2", "(|1>-|B>)/sqrt2", "|e_N>"];

fn check_count(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("ensemble needs N >= 1 emitters".into()));
    }
    Ok(n as f64)
}

/// Tavis–Cummings single-excitation matrix for a bath of N emitters resonant
/// with the cavity plus one impurity at ω_A, in the basis
/// ((|1⟩+|B⟩)/√2, (|1⟩−|B⟩)/√2, |e_N⟩).
pub fn tc_single_excitation(omega_c: f64, omega_a: f64, g: f64, n: u64) -> Result<SingleExcitationHamiltonian> {
    let root_n = check_count(n)?.sqrt();
    let c = g / std::f64::consts::SQRT_2;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            omega_c + g * root_n, 0.0, c,
            0.0, omega_c - g * root_n, c,
            c, c, omega_a,
        ],
    );
    SingleExcitationHamiltonian::from_real(m, &POLARITON_LABELS)
}

/// Holstein–Primakoff route to the same matrix. The collective raising
/// operator J₊ = b†√(2j − b†b), j = N/2, gives the photon–bright-boson matrix
/// element g√(2j − 0) on the one-excitation states; the photon/bright block is
/// then rotated to the polaritonic operators (a ± b)/√2.
pub fn hp_single_excitation(omega_c: f64, omega_a: f64, g: f64, n: u64) -> Result<SingleExcitationHamiltonian> {
    let spin_j = 0.5 * check_count(n)?;
    let occupied = 0.0;
    let bright_coupling = g * (2.0 * spin_j - occupied).sqrt();
    // basis (photon, bright boson, impurity); the bath sits at ω_c
    #[rustfmt::skip]
    let h = DMatrix::from_row_slice(
        3,
        3,
        &[
            omega_c, bright_coupling, g,
            bright_coupling, omega_c, 0.0,
            g, 0.0, omega_a,
        ],
    );
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = DMatrix::from_row_slice(3, 3, &[s, s, 0.0, s, -s, 0.0, 0.0, 0.0, 1.0]);
    let rotated = u.transpose() * h * u;
    SingleExcitationHamiltonian::from_real(rotated, &POLARITON_LABELS)
}

/// Effective polariton–impurity matrix in the frequency-ordered basis
/// (upper polariton, lower polariton, impurity).
pub fn qerra_single_excitation(p: &PolaritonParams, omega_a: f64) -> Result<SingleExcitationHamiltonian> {
    let (up, low) = (p.upper(), p.lower());
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            up.omega, 0.0, up.coupling,
            0.0, low.omega, low.coupling,
            up.coupling, low.coupling, omega_a,
        ],
    );
    SingleExcitationHamiltonian::from_real(m, &["UP", "LP", "|e_N>"])
}

/// Photon coupled to N explicit emitters; basis (photon, emitter 0, …).
pub fn explicit_ensemble_hamiltonian(
    omega_c: f64,
    emitter_freqs: &[f64],
    couplings: &[f64],
) -> Result<SingleExcitationHamiltonian> {
    if emitter_freqs.is_empty() || emitter_freqs.len() != couplings.len() {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 emitters with one coupling each, got {} frequencies and {} couplings",
            emitter_freqs.len(),
            couplings.len()
        )));
    }
    let n = emitter_freqs.len();
    let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
    m[(0, 0)] = omega_c;
    for (j, (&w, &g)) in emitter_freqs.iter().zip(couplings).enumerate() {
        m[(j + 1, j + 1)] = w;
        m[(0, j + 1)] = g;
        m[(j + 1, 0)] = g;
    }
    let labels = std::iter::once("photon".to_string())
        .chain((0..n).map(|j| format!("emitter {j}")))
        .collect();
    SingleExcitationHamiltonian::new(m.map(Complex64::from), labels)
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// Collective matrix elements of the symmetric one-excitation state
/// |+⟩ = N_E^{-1/2} Σ_j |1_j⟩ to the one-photon state.
///
/// Returns (⟨1|H|+⟩/⟨1|H|1_j⟩ for Tavis–Cummings, the same element in the
/// effective polariton model). `params` must describe N = N_E − 1 bath
/// emitters, i.e. Ω_R = g√(N_E − 1).
pub fn superradiance_matrix_elements(n_e: u64, g: f64, params: &PolaritonParams) -> Result<(f64, f64)> {
    if n_e == 0 {
        return Err(Error::InvalidParameter("superradiance needs N_E >= 1".into()));
    }
    let n_e_f = n_e as f64;
    let n_bath = n_e_f - 1.0;
    let expected_rabi = g * n_bath.sqrt();
    if (params.omega_r - expected_rabi).abs() > 1e-9 * expected_rabi.abs().max(params.omega_c * 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "polariton parameters describe Omega_R = {}, expected g*sqrt(N_E - 1) = {expected_rabi}",
            params.omega_r
        )));
    }
    if g == 0.0 {
        return Err(Error::InvalidParameter("coupling g must be nonzero".into()));
    }
    // photon row of the Tavis–Cummings matrix against the normalized symmetric state
    let amplitude = 1.0 / n_e_f.sqrt();
    let collective = compensated_sum((0..n_e).map(|_| g * amplitude));
    let tc_ratio = collective / g;

    let (up, low) = (params.upper(), params.lower());
    let qerra = (n_bath / (4.0 * n_e_f)).sqrt() * (up.omega - low.omega)
        + (1.0 / (2.0 * n_e_f)).sqrt() * (up.coupling + low.coupling);
    Ok((tc_ratio, qerra))
}

/// Overlap of each eigenvector with a basis state, for real Hamiltonians.
pub fn state_weights(h: &SingleExcitationHamiltonian, basis_index: usize) -> Result<Vec<f64>> {
    let (_, vectors) = h.eigen_real()?;
    if basis_index >= h.dim() {
        return Err(Error::InvalidParameter(format!(
            "basis index {basis_index} out of range"
        )));
    }
    let row: DVector<f64> = vectors.row(basis_index).transpose();
    Ok(row.iter().map(|v| v * v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{debye, ev};

    #[test]
    fn coupling_examples() {
        let m = LorentzianMode::new(ev(5.44), 0.01, 0.4).unwrap();
        assert_eq!(coupling_from_mode(&m, 0.0), 0.0);
        let m2 = LorentzianMode::new(ev(5.44), 0.01, 0.8).unwrap();
        let d = debye(2.25);
        assert!((coupling_from_mode(&m2, d) - 2.0 * coupling_from_mode(&m, d)).abs() < 1e-16);
    }

    #[test]
    fn caption_coupling_round_trip() {
        let (w, n, d) = (ev(5.44), 6e6_f64, debye(2.25));
        let g = 0.13 * w / n.sqrt();
        let f1 = f1_for_coupling(w, g, d).unwrap();
        let m = LorentzianMode::with_quality_factor(w, 25.8, f1).unwrap();
        let back = coupling_from_mode(&m, d);
        assert!((back * n.sqrt() / w - 0.13).abs() < 1e-14);
    }

    #[test]
    fn polariton_params_uncoupled() {
        let p = qerra_polariton_params(1.0, 0.0, 0.01).unwrap();
        assert_eq!(p.omega_plus, 1.0);
        assert_eq!(p.omega_minus, 1.0);
        assert!((p.g_plus - 0.01 / 2f64.sqrt()).abs() < 1e-17);
        assert_eq!(p.g_plus, p.g_minus);
    }

    #[test]
    fn polariton_params_at_013() {
        let p = qerra_polariton_params(1.0, 0.13, 1.0).unwrap();
        assert!((p.omega_plus - 0.884_955_752).abs() < 1e-9);
        assert!((p.omega_minus - 1.149_425_287).abs() < 1e-9);
        assert!((p.g_plus - 0.665_190_11).abs() < 1e-8);
        assert!((p.g_minus - 0.758_098_04).abs() < 1e-8);
        assert_eq!(p.upper().omega, p.omega_minus);
        assert_eq!(p.lower().coupling, p.g_plus);
    }

    #[test]
    fn polariton_params_small_x() {
        for x in [1e-2, 1e-3, 1e-4] {
            let p = qerra_polariton_params(1.0, x, 1.0).unwrap();
            assert!((p.omega_plus - (1.0 - x)).abs() <= 1.01 * x * x);
            assert!((p.omega_minus - (1.0 + x)).abs() <= 1.02 * x * x);
            assert!((p.g_plus - 0.5f64.sqrt()).abs() <= x);
        }
    }

    #[test]
    fn rabi_at_mode_frequency_is_rejected() {
        assert!(qerra_polariton_params(1.0, 1.0, 0.1).is_err());
        assert!(qerra_polariton_params(1.0, -0.1, 0.1).is_err());
    }

    #[test]
    fn tc_zero_coupling_is_diagonal() {
        let h = tc_single_excitation(1.0, 0.9, 0.0, 10).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(h.matrix()[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn tc_eigenvalues_resonant() {
        let h = tc_single_excitation(1.0, 1.0, 0.01, 100).unwrap();
        let ev = h.eigenvalues();
        // exact: 1, 1 ± g√(N+1)
        let s = 0.01 * 101f64.sqrt();
        assert!((ev[0] - (1.0 - s)).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
        assert!((ev[2] - (1.0 + s)).abs() < 1e-14);
        assert!((ev[2] - 1.1005).abs() < 1e-4 && (ev[0] - 0.8995).abs() < 1e-4);
    }

    #[test]
    fn tc_middle_state_has_no_photon_weight() {
        let h = tc_single_excitation(1.0, 1.0, 0.01, 100).unwrap();
        let (_, v) = h.eigen_real().unwrap();
        // photon amplitude of the middle state: (v_0 + v_1)/√2
        let photon = (v[(0, 1)] + v[(1, 1)]) / 2f64.sqrt();
        assert!(photon.abs() < 1e-14);
        assert!(v[(2, 1)].powi(2) > 0.98);
    }

    #[test]
    fn hp_equals_tc() {
        for (wc, wa, g, n) in [(1.0, 1.0, 0.01, 100), (0.2, 0.19, 1e-5, 6_000_000), (3.0, 2.0, 0.3, 1)] {
            let tc = tc_single_excitation(wc, wa, g, n).unwrap();
            let hp = hp_single_excitation(wc, wa, g, n).unwrap();
            assert!(hp.max_abs_diff(&tc).unwrap() <= 1e-14 * wc);
        }
        let h = hp_single_excitation(1.0, 1.0, 0.02, 1).unwrap();
        let ev = h.matrix();
        assert!((ev[(0, 0)].re - 1.02).abs() < 1e-15 && (ev[(1, 1)].re - 0.98).abs() < 1e-15);
    }

    #[test]
    fn qerra_uncoupled_is_degenerate() {
        let p = qerra_polariton_params(1.0, 0.0, 0.05).unwrap();
        let h = qerra_single_excitation(&p, 1.0).unwrap();
        assert_eq!(h.matrix()[(0, 0)], h.matrix()[(1, 1)]);
        assert_eq!(h.matrix()[(0, 2)], h.matrix()[(1, 2)]);
    }

    #[test]
    fn qerra_matches_tc_for_weak_coupling() {
        let (n, x) = (10_000u64, 1e-3);
        let g = x / (n as f64).sqrt();
        let p = qerra_polariton_params(1.0, x, g).unwrap();
        let q = qerra_single_excitation(&p, 1.0).unwrap();
        let tc = tc_single_excitation(1.0, 1.0, g, n).unwrap();
        assert!(q.max_rel_diff(&tc).unwrap() <= 1.5 * x);
    }

    #[test]
    fn qerra_deviates_in_ultrastrong_regime() {
        let n = 10_000u64;
        let g = 0.13 / (n as f64).sqrt();
        let p = qerra_polariton_params(1.0, 0.13, g).unwrap();
        let q = qerra_single_excitation(&p, 1.0).unwrap();
        let tc = tc_single_excitation(1.0, 1.0, g, n).unwrap();
        assert!(q.max_rel_diff(&tc).unwrap() > 0.01);
    }

    #[test]
    fn explicit_single_emitter() {
        let h = explicit_ensemble_hamiltonian(1.0, &[1.0], &[0.05]).unwrap();
        let ev = h.eigenvalues();
        assert!((ev[0] - 0.95).abs() < 1e-14 && (ev[1] - 1.05).abs() < 1e-14);
    }

    #[test]
    fn explicit_degenerate_dark_space() {
        let n = 100;
        let h = explicit_ensemble_hamiltonian(1.0, &vec![1.0; n], &vec![0.002; n]).unwrap();
        let ev = h.eigenvalues();
        assert!((ev[0] - 0.98).abs() < 1e-13 && (ev[n] - 1.02).abs() < 1e-13);
        assert_eq!(ev[1..n].iter().filter(|&&e| (e - 1.0).abs() < 1e-12).count(), n - 1);
    }

    #[test]
    fn explicit_rejects_mismatched_lists() {
        assert!(explicit_ensemble_hamiltonian(1.0, &[1.0, 1.0], &[0.1]).is_err());
        assert!(explicit_ensemble_hamiltonian(1.0, &[], &[]).is_err());
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.2, 1.0]).map(Complex64::from);
        assert!(SingleExcitationHamiltonian::new(m, vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn superradiance_examples() {
        for (n_e, expected) in [(1u64, 1.0), (100, 10.0)] {
            let g = 1e-4;
            let p = qerra_polariton_params(1.0, g * ((n_e - 1) as f64).sqrt(), g).unwrap();
            let (ratio, q) = superradiance_matrix_elements(n_e, g, &p).unwrap();
            assert!((ratio - expected).abs() < 1e-12 * expected);
            assert!((q / (g * (n_e as f64).sqrt()) - 1.0).abs() < 1e-2);
        }
        let p = qerra_polariton_params(1.0, 0.0, 1.0).unwrap();
        assert!(superradiance_matrix_elements(0, 1.0, &p).is_err());
        assert!(superradiance_matrix_elements(5, 1.0, &p).is_err());
    }
}

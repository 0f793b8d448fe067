//! C interface to `polariton-embed`.
//!
//! Every function returns a [`PeStatus`]; results are written through out
//! pointers. After a failure, [`pe_last_error`] gives a message for the calling
//! thread. Scenario lists and scan results are opaque handles released with
//! their `_free` function. Buffers follow one convention: the function writes
//! at most `capacity` elements, stores the required length in `*needed`, and
//! returns `PE_BUFFER_TOO_SMALL` when the buffer was not large enough.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_complex::Complex64;
use polariton_embed::embedding::qerra_dress;
use polariton_embed::greens::{fp_scattering_green_detailed, single_mode_green, LorentzianMode, QuadratureSettings};
use polariton_embed::polarizability::{alpha_full, alpha_rwa, TwoLevelEmitter};
use polariton_embed::qo_models::qerra_polariton_params;
use polariton_embed::scenario::{self, output, presets, ScanResult, Scenario};
use polariton_embed::Error;

/// Status codes.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeStatus {
    PE_OK = 0,
    /// A required pointer argument was null.
    PE_NULL_POINTER = 1,
    /// A string argument was not valid UTF-8.
    PE_INVALID_UTF8 = 2,
    PE_INVALID_ARGUMENT = 3,
    PE_PARSE_ERROR = 4,
    PE_CONFIG_ERROR = 5,
    PE_IO_ERROR = 6,
    /// Quadrature, root finding or a singular response.
    PE_NUMERICAL_ERROR = 7,
    PE_BUFFER_TOO_SMALL = 8,
    PE_OUT_OF_RANGE = 9,
    /// A Rust panic was caught at the boundary.
    PE_INTERNAL_ERROR = 10,
}

use PeStatus::*;

/// A list of resolved scenarios (one per variant).
pub struct PeScenarioList {
    scenarios: Vec<Scenario>,
}

/// The values of one scenario scan.
pub struct PeScanResult {
    result: ScanResult,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn status_of(e: &Error) -> PeStatus {
    match e {
        Error::Stage { source, .. } => status_of(source),
        Error::Parse { .. } => PE_PARSE_ERROR,
        Error::Config(_) => PE_CONFIG_ERROR,
        Error::Io { .. } => PE_IO_ERROR,
        Error::DimensionMismatch { .. } | Error::InvalidParameter(_) | Error::EmptyTransitions => PE_INVALID_ARGUMENT,
        _ => PE_NUMERICAL_ERROR,
    }
}

struct Failure(PeStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type FfiResult = Result<(), Failure>;

fn guard(f: impl FnOnce() -> FfiResult) -> PeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PE_OK,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PE_INTERNAL_ERROR
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(PE_NULL_POINTER, format!("`{name}` is null"))
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(PE_INVALID_UTF8, format!("`{name}` is not valid UTF-8")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> FfiResult {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `buf` must be valid for `capacity` writes when non-null; `needed` must be
/// null or valid for a write.
unsafe fn write_slice<T: Copy>(src: &[T], buf: *mut T, capacity: usize, needed: *mut usize) -> FfiResult {
    if !needed.is_null() {
        needed.write(src.len());
    }
    if src.len() > capacity {
        return Err(Failure(
            PE_BUFFER_TOO_SMALL,
            format!("buffer holds {capacity} elements, {} needed", src.len()),
        ));
    }
    if src.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Writes `s` NUL-terminated; `*needed` includes the terminator.
///
/// # Safety
/// As for [`write_slice`].
unsafe fn write_str(s: &str, buf: *mut c_char, capacity: usize, needed: *mut usize) -> FfiResult {
    let mut bytes: Vec<c_char> = s.bytes().map(|b| b as c_char).collect();
    bytes.push(0);
    write_slice(&bytes, buf, capacity, needed)
}

/// # Safety
/// `re` and `im` must be null or valid for writes.
unsafe fn complex_out(z: Complex64, re: *mut f64, im: *mut f64) -> FfiResult {
    write_out(re, z.re, "out_re")?;
    write_out(im, z.im, "out_im")
}

/// Message of the last failure on this thread, NUL-terminated.
///
/// # Safety
/// `buf` must be valid for `capacity` bytes (or null with `capacity` 0);
/// `needed` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_last_error(buf: *mut c_char, capacity: usize, needed: *mut usize) -> PeStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    match catch_unwind(AssertUnwindSafe(|| write_str(&message, buf, capacity, needed))) {
        Ok(Ok(())) => PE_OK,
        Ok(Err(Failure(status, _))) => status,
        Err(_) => PE_INTERNAL_ERROR,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses scenario TOML. Relative model and table paths resolve against
/// `base_dir` (null means the current directory).
///
/// # Safety
/// `toml` and `base_dir` must be null or NUL-terminated; `out` must be valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_scenarios_from_toml(
    toml: *const c_char,
    base_dir: *const c_char,
    out: *mut *mut PeScenarioList,
) -> PeStatus {
    guard(|| {
        let text = str_arg(toml, "toml")?;
        let base = if base_dir.is_null() {
            "."
        } else {
            str_arg(base_dir, "base_dir")?
        };
        let scenarios = scenario::parse_scenarios(text, Path::new(base), "scenario")?;
        write_out(out, Box::into_raw(Box::new(PeScenarioList { scenarios })), "out")
    })
}

/// Loads a scenario file.
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_scenarios_from_file(path: *const c_char, out: *mut *mut PeScenarioList) -> PeStatus {
    guard(|| {
        let scenarios = scenario::load_scenarios(str_arg(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(PeScenarioList { scenarios })), "out")
    })
}

/// Loads a built-in preset by name.
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_scenarios_from_preset(name: *const c_char, out: *mut *mut PeScenarioList) -> PeStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let text =
            presets::preset_toml(name).ok_or_else(|| Failure(PE_CONFIG_ERROR, format!("unknown preset `{name}`")))?;
        let scenarios = scenario::parse_scenarios(text, Path::new("."), name)?;
        write_out(out, Box::into_raw(Box::new(PeScenarioList { scenarios })), "out")
    })
}

/// Number of scenarios in the list.
///
/// # Safety
/// `list` must come from a `pe_scenarios_from_*` function; `out` must be valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_scenarios_len(list: *const PeScenarioList, out: *mut usize) -> PeStatus {
    guard(|| {
        let list = list.as_ref().ok_or_else(|| null("list"))?;
        write_out(out, list.scenarios.len(), "out")
    })
}

/// Name of scenario `index`, NUL-terminated.
///
/// # Safety
/// As for [`pe_scenarios_len`] and [`pe_last_error`].
#[no_mangle]
pub unsafe extern "C" fn pe_scenario_name(
    list: *const PeScenarioList,
    index: usize,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PeStatus {
    guard(|| {
        let s = scenario_at(list, index)?;
        write_str(&s.name, buf, capacity, needed)
    })
}

unsafe fn scenario_at<'a>(list: *const PeScenarioList, index: usize) -> Result<&'a Scenario, Failure> {
    let list = list.as_ref().ok_or_else(|| null("list"))?;
    list.scenarios.get(index).ok_or_else(|| {
        Failure(
            PE_OUT_OF_RANGE,
            format!("scenario index {index} out of range (len {})", list.scenarios.len()),
        )
    })
}

/// Releases a scenario list; null is ignored.
///
/// # Safety
/// `list` must be null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pe_scenarios_free(list: *mut PeScenarioList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Runs scenario `index`. A positive `rel_tol` overrides the planar-cavity
/// quadrature tolerance.
///
/// # Safety
/// `list` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_run(
    list: *const PeScenarioList,
    index: usize,
    rel_tol: f64,
    out: *mut *mut PeScanResult,
) -> PeStatus {
    guard(|| {
        let mut s = scenario_at(list, index)?.clone();
        if rel_tol > 0.0 {
            s = s.with_tolerance(rel_tol);
        }
        let result = scenario::run_scenario(&s)?;
        write_out(out, Box::into_raw(Box::new(PeScanResult { result })), "out")
    })
}

/// Grid length and number of quantity columns.
///
/// # Safety
/// `result` must be a live handle; out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pe_result_shape(
    result: *const PeScanResult,
    points: *mut usize,
    columns: *mut usize,
) -> PeStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.result;
        write_out(points, r.omega_ev.len(), "points")?;
        write_out(columns, r.columns.len(), "columns")
    })
}

/// Frequency grid in eV.
///
/// # Safety
/// See the buffer convention in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn pe_result_grid(
    result: *const PeScanResult,
    buf: *mut f64,
    capacity: usize,
    needed: *mut usize,
) -> PeStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.result;
        write_slice(&r.omega_ev, buf, capacity, needed)
    })
}

/// Name of column `index` (e.g. `J`, `J_sc`), NUL-terminated.
///
/// # Safety
/// See the buffer convention in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn pe_result_column_name(
    result: *const PeScanResult,
    index: usize,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PeStatus {
    guard(|| {
        let (q, _) = column_at(result, index)?;
        write_str(q.name(), buf, capacity, needed)
    })
}

/// Values of column `index`.
///
/// # Safety
/// See the buffer convention in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn pe_result_column(
    result: *const PeScanResult,
    index: usize,
    buf: *mut f64,
    capacity: usize,
    needed: *mut usize,
) -> PeStatus {
    guard(|| {
        let (_, values) = column_at(result, index)?;
        write_slice(values, buf, capacity, needed)
    })
}

unsafe fn column_at<'a>(
    result: *const PeScanResult,
    index: usize,
) -> Result<&'a (scenario::Quantity, Vec<f64>), Failure> {
    let r = &result.as_ref().ok_or_else(|| null("result"))?.result;
    r.columns.get(index).ok_or_else(|| {
        Failure(
            PE_OUT_OF_RANGE,
            format!("column index {index} out of range (len {})", r.columns.len()),
        )
    })
}

/// Writes the result as CSV.
///
/// # Safety
/// `result` must be a live handle; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pe_result_write_csv(result: *const PeScanResult, path: *const c_char) -> PeStatus {
    guard(|| {
        let r = &result.as_ref().ok_or_else(|| null("result"))?.result;
        output::emit_csv(r, str_arg(path, "path")?)?;
        Ok(())
    })
}

/// Releases a scan result; null is ignored.
///
/// # Safety
/// `result` must be null or a live handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pe_result_free(result: *mut PeScanResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Two-level polarizability in atomic units; `full` selects the form with the
/// counter-rotating term, otherwise the rotating-wave form.
///
/// # Safety
/// Out pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pe_alpha_two_level(
    dipole: f64,
    omega_a: f64,
    gamma_a: f64,
    omega: f64,
    full: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PeStatus {
    guard(|| {
        let e = TwoLevelEmitter::new(dipole, omega_a, gamma_a)?;
        let a = if full {
            alpha_full(&e, omega)?
        } else {
            alpha_rwa(&e, omega)?
        };
        complex_out(a, out_re, out_im)
    })
}

/// Lorentzian single-mode Green function at coincidence (atomic units).
///
/// # Safety
/// Out pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pe_single_mode_green(
    omega_c: f64,
    gamma_c: f64,
    f1: f64,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PeStatus {
    guard(|| {
        let g = single_mode_green(&LorentzianMode::new(omega_c, gamma_c, f1)?, omega)?;
        complex_out(g, out_re, out_im)
    })
}

/// Dressed Green function 1/(1/Ḡ − V (ω²/c²) χ).
///
/// # Safety
/// Out pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pe_qerra_dress(
    bare_re: f64,
    bare_im: f64,
    chi_re: f64,
    chi_im: f64,
    v_mic: f64,
    omega: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PeStatus {
    guard(|| {
        let g = qerra_dress(
            Complex64::new(bare_re, bare_im),
            Complex64::new(chi_re, chi_im),
            v_mic,
            omega,
        )?;
        complex_out(g, out_re, out_im)
    })
}

/// Scattering Green function G¹_xx at the center of a planar cavity of length
/// `length` (bohr). `rel_tol <= 0` selects the default tolerance.
///
/// # Safety
/// Out pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pe_fp_scattering_green(
    length: f64,
    eps_fill_re: f64,
    eps_fill_im: f64,
    eps_mirror_re: f64,
    eps_mirror_im: f64,
    omega: f64,
    rel_tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PeStatus {
    guard(|| {
        let mut q = QuadratureSettings::default();
        if rel_tol > 0.0 {
            q.rel_tol = rel_tol;
        }
        let g = fp_scattering_green_detailed(
            length,
            Complex64::new(eps_fill_re, eps_fill_im),
            Complex64::new(eps_mirror_re, eps_mirror_im),
            omega,
            &q,
        )?
        .value;
        complex_out(g, out_re, out_im)
    })
}

/// Polariton frequencies and impurity couplings of the dressed single mode,
/// frequency-ordered.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PePolaritonParams {
    pub omega_upper: f64,
    pub omega_lower: f64,
    pub g_upper: f64,
    pub g_lower: f64,
}

/// Upper and lower polariton of a single mode dressed with Rabi frequency
/// `omega_r` and single-emitter coupling `g`.
///
/// # Safety
/// `out` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pe_polariton_params(
    omega_c: f64,
    omega_r: f64,
    g: f64,
    out: *mut PePolaritonParams,
) -> PeStatus {
    guard(|| {
        let p = qerra_polariton_params(omega_c, omega_r, g)?;
        let value = PePolaritonParams {
            omega_upper: p.upper().omega,
            omega_lower: p.lower().omega,
            g_upper: p.upper().coupling,
            g_lower: p.lower().coupling,
        };
        write_out(out, value, "out")
    })
}

#ifndef POLARITON_EMBED_H
#define POLARITON_EMBED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum PeStatus {
  PE_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PE_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PE_INVALID_UTF8 = 2,
  PE_INVALID_ARGUMENT = 3,
  PE_PARSE_ERROR = 4,
  PE_CONFIG_ERROR = 5,
  PE_IO_ERROR = 6,
  /**
   * Quadrature, root finding or a singular response.
   */
  PE_NUMERICAL_ERROR = 7,
  PE_BUFFER_TOO_SMALL = 8,
  PE_OUT_OF_RANGE = 9,
  /**
   * A Rust panic was caught at the boundary.
   */
  PE_INTERNAL_ERROR = 10,
} PeStatus;

/**
 * The values of one scenario scan.
 */
typedef struct PeScanResult PeScanResult;

/**
 * A list of resolved scenarios (one per variant).
 */
typedef struct PeScenarioList PeScenarioList;

/**
 * Polariton frequencies and impurity couplings of the dressed single mode,
 * frequency-ordered.
 */
typedef struct PePolaritonParams {
  double omega_upper;
  double omega_lower;
  double g_upper;
  double g_lower;
} PePolaritonParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, NUL-terminated.
 *
 * # Safety
 * `buf` must be valid for `capacity` bytes (or null with `capacity` 0);
 * `needed` must be null or valid for a write.
 */
enum PeStatus pe_last_error(char *buf, size_t capacity, size_t *needed);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pe_version(void);

/**
 * Parses scenario TOML. Relative model and table paths resolve against
 * `base_dir` (null means the current directory).
 *
 * # Safety
 * `toml` and `base_dir` must be null or NUL-terminated; `out` must be valid
 * for a write.
 */
enum PeStatus pe_scenarios_from_toml(const char *toml,
                                     const char *base_dir,
                                     struct PeScenarioList **out);

/**
 * Loads a scenario file.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be valid for a write.
 */
enum PeStatus pe_scenarios_from_file(const char *path, struct PeScenarioList **out);

/**
 * Loads a built-in preset by name.
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be valid for a write.
 */
enum PeStatus pe_scenarios_from_preset(const char *name, struct PeScenarioList **out);

/**
 * Number of scenarios in the list.
 *
 * # Safety
 * `list` must come from a `pe_scenarios_from_*` function; `out` must be valid
 * for a write.
 */
enum PeStatus pe_scenarios_len(const struct PeScenarioList *list, size_t *out);

/**
 * Name of scenario `index`, NUL-terminated.
 *
 * # Safety
 * As for [`pe_scenarios_len`] and [`pe_last_error`].
 */
enum PeStatus pe_scenario_name(const struct PeScenarioList *list,
                               size_t index,
                               char *buf,
                               size_t capacity,
                               size_t *needed);

/**
 * Releases a scenario list; null is ignored.
 *
 * # Safety
 * `list` must be null or a live handle; it must not be used afterwards.
 */
void pe_scenarios_free(struct PeScenarioList *list);

/**
 * Runs scenario `index`. A positive `rel_tol` overrides the planar-cavity
 * quadrature tolerance.
 *
 * # Safety
 * `list` must be a live handle; `out` must be valid for a write.
 */
enum PeStatus pe_run(const struct PeScenarioList *list,
                     size_t index,
                     double rel_tol,
                     struct PeScanResult **out);

/**
 * Grid length and number of quantity columns.
 *
 * # Safety
 * `result` must be a live handle; out pointers must be valid for writes.
 */
enum PeStatus pe_result_shape(const struct PeScanResult *result, size_t *points, size_t *columns);

/**
 * Frequency grid in eV.
 *
 * # Safety
 * See the buffer convention in the crate documentation.
 */
enum PeStatus pe_result_grid(const struct PeScanResult *result,
                             double *buf,
                             size_t capacity,
                             size_t *needed);

/**
 * Name of column `index` (e.g. `J`, `J_sc`), NUL-terminated.
 *
 * # Safety
 * See the buffer convention in the crate documentation.
 */
enum PeStatus pe_result_column_name(const struct PeScanResult *result,
                                    size_t index,
                                    char *buf,
                                    size_t capacity,
                                    size_t *needed);

/**
 * Values of column `index`.
 *
 * # Safety
 * See the buffer convention in the crate documentation.
 */
enum PeStatus pe_result_column(const struct PeScanResult *result,
                               size_t index,
                               double *buf,
                               size_t capacity,
                               size_t *needed);

/**
 * Writes the result as CSV.
 *
 * # Safety
 * `result` must be a live handle; `path` must be NUL-terminated.
 */
enum PeStatus pe_result_write_csv(const struct PeScanResult *result, const char *path);

/**
 * Releases a scan result; null is ignored.
 *
 * # Safety
 * `result` must be null or a live handle; it must not be used afterwards.
 */
void pe_result_free(struct PeScanResult *result);

/**
 * Two-level polarizability in atomic units; `full` selects the form with the
 * counter-rotating term, otherwise the rotating-wave form.
 *
 * # Safety
 * Out pointers must be null or valid for writes.
 */
enum PeStatus pe_alpha_two_level(double dipole,
                                 double omega_a,
                                 double gamma_a,
                                 double omega,
                                 bool full,
                                 double *out_re,
                                 double *out_im);

/**
 * Lorentzian single-mode Green function at coincidence (atomic units).
 *
 * # Safety
 * Out pointers must be null or valid for writes.
 */
enum PeStatus pe_single_mode_green(double omega_c,
                                   double gamma_c,
                                   double f1,
                                   double omega,
                                   double *out_re,
                                   double *out_im);

/**
 * Dressed Green function 1/(1/Ḡ − V (ω²/c²) χ).
 *
 * # Safety
 * Out pointers must be null or valid for writes.
 */
enum PeStatus pe_qerra_dress(double bare_re,
                             double bare_im,
                             double chi_re,
                             double chi_im,
                             double v_mic,
                             double omega,
                             double *out_re,
                             double *out_im);

/**
 * Scattering Green function G¹_xx at the center of a planar cavity of length
 * `length` (bohr). `rel_tol <= 0` selects the default tolerance.
 *
 * # Safety
 * Out pointers must be null or valid for writes.
 */
enum PeStatus pe_fp_scattering_green(double length,
                                     double eps_fill_re,
                                     double eps_fill_im,
                                     double eps_mirror_re,
                                     double eps_mirror_im,
                                     double omega,
                                     double rel_tol,
                                     double *out_re,
                                     double *out_im);

/**
 * Upper and lower polariton of a single mode dressed with Rabi frequency
 * `omega_r` and single-emitter coupling `g`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum PeStatus pe_polariton_params(double omega_c,
                                  double omega_r,
                                  double g,
                                  struct PePolaritonParams *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLARITON_EMBED_H */

#ifndef EVASIM_H
#define EVASIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EvasimStatus {
  EVASIM_STATUS_OK = 0,
  EVASIM_STATUS_NULL_POINTER = 1,
  EVASIM_STATUS_INVALID_UTF8 = 2,
  EVASIM_STATUS_CONFIG_PARSE = 3,
  EVASIM_STATUS_CONFIG_INVALID = 4,
  EVASIM_STATUS_SUBCRITICAL_ANGLE = 5,
  EVASIM_STATUS_STEP_SIZE_UNDERFLOW = 6,
  EVASIM_STATUS_SINGULAR_SYSTEM = 7,
  EVASIM_STATUS_NON_CONVERGED_QUADRATURE = 8,
  EVASIM_STATUS_NO_DIP_FOUND = 9,
  EVASIM_STATUS_INVARIANT_VIOLATION = 10,
  EVASIM_STATUS_INVALID_INPUT = 11,
  EVASIM_STATUS_OUT_OF_RANGE = 12,
  EVASIM_STATUS_PANIC = 13,
} EvasimStatus;

typedef enum EvasimGeometry {
  EVASIM_GEOMETRY_PERPENDICULAR = 0,
  EVASIM_GEOMETRY_COPROPAGATING = 1,
} EvasimGeometry;

typedef enum EvasimPump {
  EVASIM_PUMP_OFF = 0,
  EVASIM_PUMP_ON = 1,
  EVASIM_PUMP_BOTH = 2,
} EvasimPump;

/**
 * Which absorption line [`evasim_spectrum_dip_metrics`] measures.
 */
typedef enum EvasimLine {
  /**
   * From |1⟩, at −Δ_HFS.
   */
  EVASIM_LINE_UNPUMPED = 0,
  /**
   * From |2⟩, at zero probe detuning.
   */
  EVASIM_LINE_PUMPED = 1,
} EvasimLine;

/**
 * Run configuration, as read from TOML.
 */
typedef struct EvasimConfig EvasimConfig;

typedef struct EvasimSpectrum EvasimSpectrum;

/**
 * One spectrum row; frequencies in Hz.
 */
typedef struct EvasimRecord {
  double detuning_hz;
  double r_pump_off;
  double r_pump_on;
  double chi_off_re;
  double chi_off_im;
  double chi_on_re;
  double chi_on_im;
} EvasimRecord;

typedef struct EvasimDipMetrics {
  double line_center_hz;
  double depth_off;
  double depth_on;
  double suppression_ratio;
  double fwhm_off_hz;
} EvasimDipMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *evasim_version(void);

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into the library from the same thread.
 */
const char *evasim_last_error(void);

/**
 * Allocates the built-in default configuration.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EvasimStatus evasim_config_default(struct EvasimConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` valid for one handle.
 */
enum EvasimStatus evasim_config_from_toml(const char *toml, struct EvasimConfig **out);

/**
 * # Safety
 * `config` must be NULL or a handle from this library, not yet freed.
 */
void evasim_config_free(struct EvasimConfig *config);

/**
 * Sets the number of sweep points.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_set_points(struct EvasimConfig *config, size_t points);

/**
 * Sets the probe sweep range in Hz.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_set_sweep_hz(struct EvasimConfig *config,
                                             double min_hz,
                                             double max_hz);

/**
 * Sets the velocity quadrature orders.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_set_orders(struct EvasimConfig *config,
                                           size_t order_x,
                                           size_t order_z);

/**
 * Sets the pump Rabi frequency in Hz.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_set_rabi_pump_hz(struct EvasimConfig *config, double rabi_hz);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_set_geometry(struct EvasimConfig *config,
                                             enum EvasimGeometry geometry);

/**
 * Checks the configuration without running it.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum EvasimStatus evasim_config_validate(const struct EvasimConfig *config);

/**
 * Computes the reflectivity spectrum over the configured sweep.
 * `threads` = 0 lets the pool decide.
 *
 * # Safety
 * `config` must be a live handle and `out` valid for one handle.
 */
enum EvasimStatus evasim_sweep(const struct EvasimConfig *config,
                               enum EvasimPump pump,
                               size_t threads,
                               struct EvasimSpectrum **out);

/**
 * # Safety
 * `spectrum` must be NULL or a handle from this library, not yet freed.
 */
void evasim_spectrum_free(struct EvasimSpectrum *spectrum);

/**
 * Number of rows; 0 for NULL.
 *
 * # Safety
 * `spectrum` must be NULL or a live handle.
 */
size_t evasim_spectrum_len(const struct EvasimSpectrum *spectrum);

/**
 * Copies row `index` into `out`.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` valid for one record.
 */
enum EvasimStatus evasim_spectrum_record(const struct EvasimSpectrum *spectrum,
                                         size_t index,
                                         struct EvasimRecord *out);

/**
 * Depth, suppression and width of one line of a two-sided spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` valid for one value.
 */
enum EvasimStatus evasim_spectrum_dip_metrics(const struct EvasimSpectrum *spectrum,
                                              enum EvasimLine line,
                                              struct EvasimDipMetrics *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVASIM_H */

#ifndef NZEB_H
#define NZEB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; the nonzero values match the `nzeb` command's exit codes.
 */
typedef enum NzebStatus {
  NZEB_STATUS_OK = 0,
  NZEB_STATUS_INTERNAL = 1,
  NZEB_STATUS_INVALID_INPUT = 2,
  NZEB_STATUS_INFEASIBLE = 3,
  NZEB_STATUS_NULL_ARGUMENT = 5,
} NzebStatus;

/**
 * Report stages accepted by [`nzeb_project_report`].
 */
typedef enum NzebStage {
  NZEB_STAGE_LIGHTING = 0,
  NZEB_STAGE_COOLING = 1,
  NZEB_STAGE_LOADS = 2,
  NZEB_STAGE_PV_DESIGN = 3,
  NZEB_STAGE_PV_SIMULATE = 4,
  NZEB_STAGE_FINANCE = 5,
  NZEB_STAGE_CARBON = 6,
  NZEB_STAGE_REPORT = 7,
} NzebStage;

/**
 * Opaque handle to a loaded project and its optional meteo year.
 */
typedef struct NzebProject NzebProject;

/**
 * Moist-air properties at a given state.
 */
typedef struct NzebMoistAir {
  /**
   * kg water / kg dry air
   */
  double humidity_ratio;
  /**
   * m³ / kg dry air
   */
  double specific_volume;
  /**
   * kJ / kg dry air
   */
  double enthalpy;
} NzebMoistAir;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer stays valid
 * until the next call into this library on the same thread.
 */
const char *nzeb_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nzeb_version(void);

/**
 * Loads a TOML project file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum NzebStatus nzeb_project_load(const char *path, struct NzebProject **out);

/**
 * Attaches an hourly meteo CSV to a project, replacing any earlier one.
 *
 * # Safety
 * `project` must come from [`nzeb_project_load`]; `path` must be a NUL-terminated string.
 */
enum NzebStatus nzeb_project_load_meteo(struct NzebProject *project, const char *path);

/**
 * Frees a project. Null is ignored.
 *
 * # Safety
 * `project` must be null or come from [`nzeb_project_load`] and not be used afterwards.
 */
void nzeb_project_free(struct NzebProject *project);

/**
 * Runs one stage and returns its report as a JSON string.
 *
 * # Safety
 * `project` must come from [`nzeb_project_load`]; `out_json` must be valid for writes.
 * The string is freed with [`nzeb_string_free`].
 */
enum NzebStatus nzeb_project_report(const struct NzebProject *project,
                                    enum NzebStage stage,
                                    char **out_json);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or come from this library and not be used afterwards.
 */
void nzeb_string_free(char *s);

/**
 * Saturation vapour pressure over water or ice, kPa.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NzebStatus nzeb_saturation_pressure(double dry_bulb, double *out);

/**
 * Moist-air properties from dry bulb (°C), relative humidity (0..1) and pressure (kPa).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NzebStatus nzeb_moist_air(double dry_bulb,
                               double rh,
                               double pressure,
                               struct NzebMoistAir *out);

/**
 * Cavity ratio `5 h (L + W) / (L W)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NzebStatus nzeb_cavity_ratio(double height, double length, double width, double *out);

/**
 * Air-conditioning units needed for `total_load` kW with units of `unit_capacity` kJ/hr.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NzebStatus nzeb_acu_count(double total_load, double unit_capacity, uint32_t *out);

/**
 * Internal rate of return of `len` yearly flows starting at year 0.
 *
 * # Safety
 * `flows` must point to `len` readable values; `out` must be valid for writes.
 */
enum NzebStatus nzeb_irr(const double *flows, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NZEB_H */

/*
 * micvib: vibration sensitivity models and measurement analysis for one-port
 * and two-port MEMS microphones.
 *
 * Plain C interface over the C++ core. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns an mv_status; on failure mv_last_error() describes the problem for
 * the calling thread until the next failing call on that thread.
 *
 * Units are SI unless a name says otherwise: metres, kilograms, seconds, Hz,
 * radians. Angle 0 is on-axis (port axis aligned with the wave or vibration).
 */
#ifndef MICVIB_MICVIB_H
#define MICVIB_MICVIB_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#ifdef MICVIB_BUILDING
#define MV_API __declspec(dllexport)
#else
#define MV_API __declspec(dllimport)
#endif
#else
#define MV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Residual RMS (natural log) above which a length fit is flagged poor. */
#define MV_POOR_FIT_RESIDUAL 0.05
/* Median on/off-shaker ratio below which shaker sound dominates. */
#define MV_LEAKAGE_RATIO_THRESHOLD 2.0

typedef enum mv_status {
    MV_OK = 0,
    /* validation errors */
    MV_E_INVALID_ARGUMENT = 1,
    MV_E_WRONG_VARIANT = 2,
    MV_E_MISSING_EFFECTIVE_LENGTH = 3,
    MV_E_PARSE = 4,
    MV_E_SCHEMA = 5,
    MV_E_NON_MONOTONIC = 6,
    MV_E_UNKNOWN_UNIT = 7,
    MV_E_GRID_MISMATCH = 8,
    MV_E_UNIT_MISMATCH = 9,
    MV_E_EXTRAPOLATION = 10,
    MV_E_IO = 11,
    MV_E_NOT_FOUND = 12,
    MV_E_BUFFER_TOO_SMALL = 13,
    /* numerical errors */
    MV_E_POLE = 20,
    MV_E_OFF_AXIS_NULL = 21,
    MV_E_NON_CONVERGENCE = 22,
    MV_E_DEGENERATE = 23,
    MV_E_ZERO_DENOMINATOR = 24,
    MV_E_INTERNAL = 99
} mv_status;

typedef enum mv_unit {
    MV_UNIT_UNSPECIFIED = -1,
    MV_UNIT_V_PER_G = 0,
    MV_UNIT_V_PER_PA = 1,
    MV_UNIT_PA_PER_G = 2,
    MV_UNIT_M_PER_PA = 3,
    MV_UNIT_M_PER_G = 4,
    MV_UNIT_G_ACCEL = 5,
    MV_UNIT_DIMENSIONLESS = 6,
    MV_UNIT_VOLT = 7
} mv_unit;

typedef enum mv_mode { MV_MODE_FULL = 0, MV_MODE_AIR_ONLY = 1 } mv_mode;

typedef enum mv_package_type {
    MV_PACKAGE_ONE_PORT = 0,
    MV_PACKAGE_TWO_PORT = 1,
    MV_PACKAGE_ARRAY_OF_ONE_PORTS = 2
} mv_package_type;

typedef enum mv_verdict { MV_VERDICT_VIBRATION_DOMINATED = 0, MV_VERDICT_LEAKAGE_DOMINATED = 1 } mv_verdict;

typedef struct mv_environment {
    double air_density;      /* kg/m^3 */
    double speed_of_sound;   /* m/s */
    double standard_gravity; /* m/s^2 */
} mv_environment;

typedef struct mv_element {
    double membrane_density;   /* kg/m^3 */
    double membrane_thickness; /* m */
    double area;               /* m^2 */
    double natural_frequency;  /* Hz */
    double quality_factor;
} mv_element;

typedef struct mv_plate {
    double radius;         /* m */
    double thickness;      /* m */
    double youngs_modulus; /* Pa */
    double poisson_ratio;
    double density;        /* kg/m^3 */
    double resonance_q;
} mv_plate;

typedef struct mv_shaker {
    double rolloff_corner; /* Hz */
    int rolloff_order;
    mv_plate plate;
    double accel_per_volt; /* g/V */
    double noise_fraction;
    uint64_t seed;
} mv_shaker;

typedef struct mv_interval {
    double lower;
    double upper;
} mv_interval;

typedef struct mv_intervals {
    mv_interval l1;                 /* m */
    mv_interval l2;                 /* m */
    mv_interval membrane_density;   /* kg/m^3 */
    mv_interval membrane_thickness; /* m */
} mv_intervals;

/* Strings point into the owning response and stay valid until it is freed.
 * frequency_hz, value and limit are NaN when not applicable. */
typedef struct mv_warning {
    const char* code;
    const char* message;
    const char* parameter;
    double frequency_hz;
    double value;
    double limit;
} mv_warning;

typedef struct mv_fit_result {
    double effective_length; /* m */
    double residual_rms_log;
    size_t points_used;
    int converged;
    int poor_fit; /* residual above the 1/f-shape threshold */
} mv_fit_result;

typedef struct mv_package mv_package;
typedef struct mv_response mv_response;

/* ---- status and library info ------------------------------------------ */

MV_API const char* mv_version(void);
MV_API const char* mv_last_error(void);
MV_API const char* mv_status_name(mv_status status);
/* 1 for poles, off-axis nulls and failed searches; 0 otherwise. */
MV_API int mv_status_is_numerical(mv_status status);

MV_API const char* mv_unit_name(mv_unit unit);
MV_API mv_status mv_unit_parse(const char* text, mv_unit* out);

/* ---- environment and sensing element ---------------------------------- */

MV_API mv_environment mv_environment_default(void);
MV_API mv_status mv_mechanical_response(const mv_element* element, double frequency_hz, double* out_m_per_n);
MV_API mv_status mv_pressure_difference_ratio(double port_spacing, double frequency_hz, const mv_environment* env,
                                              double incidence_angle, double* out_ratio, int* out_within_validity);

/* ---- packages ----------------------------------------------------------- */

/* effective_length <= 0 means "not set". Lengths in metres. */
MV_API mv_status mv_package_create(mv_package_type type, const char* label, double l1, double l2, double port_spacing,
                                   double effective_length, const mv_element* element, mv_package** out);
/* Loads a mic JSON document from a file path, or a bundled preset by name. */
MV_API mv_status mv_package_load(const char* path_or_preset, mv_package** out);
MV_API mv_status mv_package_parse_json(const char* json_text, mv_package** out);
/* Writes the mic JSON document (NUL-terminated) into buf. *needed receives the
 * required size including the terminator; MV_E_BUFFER_TOO_SMALL if cap is short. */
MV_API mv_status mv_package_to_json(const mv_package* pkg, char* buf, size_t cap, size_t* needed);
MV_API mv_status mv_package_clone(const mv_package* pkg, mv_package** out);
MV_API void mv_package_free(mv_package* pkg);

MV_API mv_package_type mv_package_get_type(const mv_package* pkg);
MV_API const char* mv_package_label(const mv_package* pkg);
MV_API mv_element mv_package_element(const mv_package* pkg);
MV_API double mv_package_l1(const mv_package* pkg);
MV_API double mv_package_l2(const mv_package* pkg);
/* 0 for one-port packages. */
MV_API double mv_package_port_spacing(const mv_package* pkg);
/* 0 when not set. */
MV_API double mv_package_effective_length(const mv_package* pkg);
MV_API mv_status mv_package_set_effective_length(mv_package* pkg, double effective_length);
/* Environment carried by the document (defaults if it has no override). */
MV_API mv_environment mv_package_environment(const mv_package* pkg);
MV_API int mv_package_has_environment_override(const mv_package* pkg);
/* Writes the document's 1 kHz sensitivity; MV_E_NOT_FOUND if absent. */
MV_API mv_status mv_package_acoustic_sensitivity_db(const mv_package* pkg, double* out_dbv_pa);

/* ---- point models ------------------------------------------------------- */

MV_API mv_status mv_lumped_mass_two_port(const mv_package* pkg, const mv_environment* env, mv_mode mode,
                                         double* out_kg);
MV_API mv_status mv_displacement_per_pascal(const mv_package* pkg, const mv_environment* env, double frequency_hz,
                                            double incidence_angle, double* out_m_per_pa);
MV_API mv_status mv_displacement_per_g(const mv_package* pkg, const mv_environment* env, double frequency_hz,
                                       mv_mode mode, double* out_m_per_g);
MV_API mv_status mv_s_pa_per_g_two_port(const mv_package* pkg, const mv_environment* env, double frequency_hz,
                                        double incidence_angle, mv_mode mode, double* out_pa_per_g);
MV_API mv_status mv_s_pa_per_g_one_port(const mv_package* pkg, const mv_environment* env, mv_mode mode,
                                        double* out_pa_per_g);

/* ---- frequency responses ------------------------------------------------ */

MV_API mv_status mv_response_create(mv_unit unit, const double* frequencies_hz, const double* values, size_t count,
                                    mv_response** out);
MV_API mv_status mv_response_clone(const mv_response* r, mv_response** out);
MV_API void mv_response_free(mv_response* r);
MV_API size_t mv_response_size(const mv_response* r);
MV_API mv_unit mv_response_unit(const mv_response* r);
/* Pointers into the response; valid until it is freed. */
MV_API const double* mv_response_frequencies(const mv_response* r);
MV_API const double* mv_response_values(const mv_response* r);
MV_API size_t mv_response_warning_count(const mv_response* r);
MV_API mv_status mv_response_warning(const mv_response* r, size_t index, mv_warning* out);
/* Metadata value for key, or NULL. */
MV_API const char* mv_response_metadata(const mv_response* r, const char* key);
MV_API mv_status mv_response_set_metadata(mv_response* r, const char* key, const char* value);

/* Log-spaced (spacing_log != 0) or linear grid with exact endpoints. Writes
 * `points` frequencies into out. */
MV_API mv_status mv_grid_fill(double fmin, double fmax, size_t points, int spacing_log, double* out);

MV_API mv_status mv_predict_sweep(const mv_package* pkg, const mv_environment* env, const double* frequencies_hz,
                                  size_t count, double incidence_angle, mv_mode mode, mv_response** out);

/* ---- measurement pipeline ----------------------------------------------- */

MV_API mv_status mv_db_to_linear(double db, double* out);
MV_API mv_status mv_linear_to_db(double linear, double* out);

/* unit_hint overrides the sidecar and in-file declarations; pass
 * MV_UNIT_UNSPECIFIED to use them. */
MV_API mv_status mv_sweep_load(const char* path, mv_unit unit_hint, mv_response** out);
/* For inputs whose role fixes the unit: an undeclared file is read as
 * `expected`, a file declaring another unit fails with MV_E_UNIT_MISMATCH. */
MV_API mv_status mv_sweep_load_as(const char* path, mv_unit expected, mv_response** out);
MV_API mv_status mv_sweep_parse(const char* csv_text, mv_unit unit_hint, mv_response** out);
MV_API mv_status mv_sweep_save(const mv_response* r, const char* path);
MV_API mv_status mv_sweep_to_csv(const mv_response* r, char* buf, size_t cap, size_t* needed);

MV_API mv_status mv_resample(const mv_response* r, const double* target_hz, size_t count, mv_response** out);
/* Frequencies of a that fall inside b's band; at most cap are written. */
MV_API mv_status mv_common_grid(const mv_response* a, const mv_response* b, double* out, size_t cap, size_t* count);
MV_API mv_status mv_flat_response(mv_unit unit, const double* frequencies_hz, size_t count, double value,
                                  mv_response** out);
MV_API mv_status mv_acoustically_refer(const mv_response* raw_v_per_g, const mv_response* acoustic_v_per_pa,
                                       mv_response** out);
MV_API mv_status mv_divide_per_tone(const mv_response* voltage, const mv_response* acceleration, mv_response** out);
MV_API mv_status mv_on_off_ratio(const mv_response* on_shaker, const mv_response* off_shaker, mv_response** out_ratio,
                                 double* out_median, mv_verdict* out_verdict);

/* ---- rig simulator ------------------------------------------------------ */

MV_API mv_shaker mv_shaker_default(void);
MV_API mv_status mv_shaker_load(const char* path, mv_shaker* out);
MV_API mv_status mv_plate_stiffness(const mv_plate* plate, double* out_n_m);
MV_API mv_status mv_plate_natural_frequency(const mv_plate* plate, double* out_hz);
MV_API mv_status mv_shaker_acceleration(const mv_shaker* shaker, double drive_voltage, const double* frequencies_hz,
                                        size_t count, mv_response** out);
/* out_v_per_g omits frequencies where the acceleration is zero. */
MV_API mv_status mv_synthesize_mic_sweep(const mv_response* model_pa_per_g, const mv_response* acoustic_v_per_pa,
                                         const mv_response* acceleration, double noise_fraction, uint64_t seed,
                                         double leakage_floor_pa, mv_response** out_voltage,
                                         mv_response** out_v_per_g);

/* ---- fitting and uncertainty -------------------------------------------- */

MV_API mv_status mv_fit_effective_length(const mv_response* measured_pa_per_g, const mv_package* pkg,
                                         const mv_environment* env, double incidence_angle, mv_fit_result* out);
MV_API mv_intervals mv_intervals_default(void);
MV_API mv_status mv_intervals_load(const char* path, mv_intervals* out);
MV_API mv_status mv_envelope(const mv_package* pkg, const mv_environment* env, const double* frequencies_hz,
                             size_t count, const mv_intervals* intervals, mv_mode mode, double incidence_angle,
                             mv_response** out_lower, mv_response** out_nominal, mv_response** out_upper);

/* ---- presets ------------------------------------------------------------ */

MV_API const char* mv_preset_directory(void);
MV_API size_t mv_preset_count(void);
/* Name of the i-th mic preset in sorted order, or NULL. */
MV_API const char* mv_preset_name(size_t index);
MV_API size_t mv_sensitivity_count(void);
/* Fills name/mic/condition (valid until the next call on this thread) and dB values;
 * *out_datasheet_db is NaN when there is no datasheet figure. */
MV_API mv_status mv_sensitivity_entry(size_t index, const char** out_name, const char** out_mic,
                                      const char** out_condition, double* out_datasheet_db, double* out_measured_db);
MV_API mv_status mv_sensitivity_lookup(const char* name, double* out_dbv_pa);

#ifdef __cplusplus
}
#endif

#endif /* MICVIB_MICVIB_H */

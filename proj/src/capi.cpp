#include "micvib/micvib.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "fit.hpp"
#include "measurement.hpp"
#include "model.hpp"
#include "rig.hpp"

using namespace micvib;

static_assert(MV_POOR_FIT_RESIDUAL == poor_fit_residual);
static_assert(MV_LEAKAGE_RATIO_THRESHOLD == leakage_ratio_threshold);

struct mv_package {
    MicConfig config;
};

struct mv_response {
    FrequencyResponse response;
    std::vector<Warning> warnings;
};

namespace {

thread_local std::string last_error;
thread_local std::vector<std::string> name_cache;
thread_local std::vector<SensitivityEntry> sensitivity_cache;
thread_local std::string preset_dir_cache;

mv_status record(mv_status status, const char* what)
{
    last_error = what;
    return status;
}

template <class F>
mv_status guarded(F&& body)
{
    try {
        body();
        return MV_OK;
    } catch (const Error& e) {
        return record(static_cast<mv_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return record(MV_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(MV_E_INTERNAL, e.what());
    } catch (...) {
        return record(MV_E_INTERNAL, "unknown exception");
    }
}

void require(const void* p, const char* name)
{
    if (!p) fail(ErrorCode::invalid_argument, std::string(name) + " must not be NULL");
}

Environment to_env(const mv_environment* env)
{
    if (!env) return Environment{};
    return {env->air_density, env->speed_of_sound, env->standard_gravity};
}

mv_environment from_env(const Environment& e) { return {e.air_density, e.speed_of_sound, e.standard_gravity}; }

SensingElement to_element(const mv_element& e)
{
    return {e.membrane_density, e.membrane_thickness, e.area, e.natural_frequency, e.quality_factor};
}

mv_element from_element(const SensingElement& e)
{
    return {e.membrane_density, e.membrane_thickness, e.area, e.natural_frequency, e.quality_factor};
}

ModelMode to_mode(mv_mode mode)
{
    if (mode == MV_MODE_FULL) return ModelMode::full;
    if (mode == MV_MODE_AIR_ONLY) return ModelMode::air_only;
    fail(ErrorCode::invalid_argument, "unknown model mode");
}

Unit to_unit(mv_unit unit)
{
    if (unit < MV_UNIT_V_PER_G || unit > MV_UNIT_VOLT) fail(ErrorCode::unknown_unit, "unknown unit enumerator");
    return static_cast<Unit>(unit);
}

std::optional<Unit> to_unit_hint(mv_unit unit)
{
    if (unit == MV_UNIT_UNSPECIFIED) return std::nullopt;
    return to_unit(unit);
}

PlateSpec to_plate(const mv_plate& p)
{
    return {p.radius, p.thickness, p.youngs_modulus, p.poisson_ratio, p.density, p.resonance_q};
}

mv_plate from_plate(const PlateSpec& p)
{
    return {p.radius, p.thickness, p.youngs_modulus, p.poisson_ratio, p.density, p.resonance_q};
}

ShakerSpec to_shaker(const mv_shaker& s)
{
    return {s.rolloff_corner, s.rolloff_order, to_plate(s.plate), s.accel_per_volt, s.noise_fraction, s.seed};
}

mv_shaker from_shaker(const ShakerSpec& s)
{
    return {s.rolloff_corner, s.rolloff_order, from_plate(s.plate), s.accel_per_volt, s.noise_fraction, s.seed};
}

ParameterIntervals to_intervals(const mv_intervals& i)
{
    return {{i.l1.lower, i.l1.upper},
            {i.l2.lower, i.l2.upper},
            {i.membrane_density.lower, i.membrane_density.upper},
            {i.membrane_thickness.lower, i.membrane_thickness.upper}};
}

mv_intervals from_intervals(const ParameterIntervals& i)
{
    return {{i.l1.lower, i.l1.upper},
            {i.l2.lower, i.l2.upper},
            {i.membrane_density.lower, i.membrane_density.upper},
            {i.membrane_thickness.lower, i.membrane_thickness.upper}};
}

FrequencyGrid to_grid(const double* f, std::size_t n)
{
    if (n > 0) require(f, "frequencies");
    return FrequencyGrid(std::vector<double>(f, f + n));
}

mv_response* wrap(FrequencyResponse r, std::vector<Warning> w = {})
{
    return new mv_response{std::move(r), std::move(w)};
}

void copy_out(const std::string& text, char* buf, std::size_t cap, std::size_t* needed)
{
    if (needed) *needed = text.size() + 1;
    if (!buf || cap < text.size() + 1)
        fail(ErrorCode::buffer_too_small, "buffer too small, need " + std::to_string(text.size() + 1));
    std::memcpy(buf, text.c_str(), text.size() + 1);
}

}  // namespace

extern "C" {

const char* mv_version(void) { return MICVIB_VERSION; }

const char* mv_last_error(void) { return last_error.c_str(); }

const char* mv_status_name(mv_status status)
{
    switch (status) {
    case MV_OK: return "ok";
    case MV_E_INVALID_ARGUMENT: return "invalid_argument";
    case MV_E_WRONG_VARIANT: return "wrong_variant";
    case MV_E_MISSING_EFFECTIVE_LENGTH: return "missing_effective_length";
    case MV_E_PARSE: return "parse_error";
    case MV_E_SCHEMA: return "schema_violation";
    case MV_E_NON_MONOTONIC: return "non_monotonic";
    case MV_E_UNKNOWN_UNIT: return "unknown_unit";
    case MV_E_GRID_MISMATCH: return "grid_mismatch";
    case MV_E_UNIT_MISMATCH: return "unit_mismatch";
    case MV_E_EXTRAPOLATION: return "extrapolation";
    case MV_E_IO: return "io_error";
    case MV_E_NOT_FOUND: return "not_found";
    case MV_E_BUFFER_TOO_SMALL: return "buffer_too_small";
    case MV_E_POLE: return "pole";
    case MV_E_OFF_AXIS_NULL: return "off_axis_null";
    case MV_E_NON_CONVERGENCE: return "non_convergence";
    case MV_E_DEGENERATE: return "degenerate_input";
    case MV_E_ZERO_DENOMINATOR: return "zero_denominator";
    case MV_E_INTERNAL: return "internal_error";
    }
    return "unknown_status";
}

int mv_status_is_numerical(mv_status status)
{
    return status >= MV_E_POLE && status < MV_E_INTERNAL ? 1 : 0;
}

const char* mv_unit_name(mv_unit unit)
{
    if (unit < MV_UNIT_V_PER_G || unit > MV_UNIT_VOLT) return "unspecified";
    // to_string returns views over string literals.
    return to_string(static_cast<Unit>(unit)).data();
}

mv_status mv_unit_parse(const char* text, mv_unit* out)
{
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = static_cast<mv_unit>(parse_unit(text));
    });
}

mv_environment mv_environment_default(void) { return from_env(Environment{}); }

mv_status mv_mechanical_response(const mv_element* element, double frequency_hz, double* out)
{
    return guarded([&] {
        require(element, "element");
        require(out, "out");
        *out = mechanical_response(to_element(*element), frequency_hz);
    });
}

mv_status mv_pressure_difference_ratio(double port_spacing, double frequency_hz, const mv_environment* env,
                                       double incidence_angle, double* out_ratio, int* out_within_validity)
{
    return guarded([&] {
        require(out_ratio, "out_ratio");
        const auto r = pressure_difference_ratio(port_spacing, frequency_hz, to_env(env), incidence_angle);
        *out_ratio = r.value;
        if (out_within_validity) *out_within_validity = r.within_validity ? 1 : 0;
    });
}

mv_status mv_package_create(mv_package_type type, const char* label, double l1, double l2, double port_spacing,
                            double effective_length, const mv_element* element, mv_package** out)
{
    return guarded([&] {
        require(element, "element");
        require(out, "out");
        MicConfig cfg;
        cfg.package.label = label ? label : "";
        const std::optional<double> leff =
            effective_length > 0.0 ? std::optional<double>(effective_length) : std::nullopt;
        switch (type) {
        case MV_PACKAGE_ONE_PORT: cfg.package.geometry = OnePort{l1, l2}; break;
        case MV_PACKAGE_TWO_PORT: cfg.package.geometry = TwoPort{l1, l2, port_spacing, leff}; break;
        case MV_PACKAGE_ARRAY_OF_ONE_PORTS: cfg.package.geometry = ArrayOfOnePorts{l1, l2, port_spacing, leff}; break;
        default: fail(ErrorCode::invalid_argument, "unknown package type");
        }
        cfg.package.element = to_element(*element);
        cfg.package.validate();
        *out = new mv_package{std::move(cfg)};
    });
}

mv_status mv_package_load(const char* path_or_preset, mv_package** out)
{
    return guarded([&] {
        require(path_or_preset, "path_or_preset");
        require(out, "out");
        *out = new mv_package{resolve_mic_config(path_or_preset)};
    });
}

mv_status mv_package_parse_json(const char* json_text, mv_package** out)
{
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = new mv_package{parse_mic_config(json_text)};
    });
}

mv_status mv_package_to_json(const mv_package* pkg, char* buf, size_t cap, size_t* needed)
{
    return guarded([&] {
        require(pkg, "pkg");
        copy_out(mic_config_to_json(pkg->config), buf, cap, needed);
    });
}

mv_status mv_package_clone(const mv_package* pkg, mv_package** out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = new mv_package{pkg->config};
    });
}

void mv_package_free(mv_package* pkg) { delete pkg; }

mv_package_type mv_package_get_type(const mv_package* pkg)
{
    return static_cast<mv_package_type>(pkg->config.package.type());
}

const char* mv_package_label(const mv_package* pkg) { return pkg->config.package.label.c_str(); }

mv_element mv_package_element(const mv_package* pkg) { return from_element(pkg->config.package.element); }

double mv_package_l1(const mv_package* pkg) { return pkg->config.package.l1(); }

double mv_package_l2(const mv_package* pkg) { return pkg->config.package.l2(); }

double mv_package_port_spacing(const mv_package* pkg)
{
    return pkg->config.package.is_one_port() ? 0.0 : pkg->config.package.port_spacing();
}

double mv_package_effective_length(const mv_package* pkg)
{
    return pkg->config.package.effective_length().value_or(0.0);
}

mv_status mv_package_set_effective_length(mv_package* pkg, double effective_length)
{
    return guarded([&] {
        require(pkg, "pkg");
        if (effective_length <= 0.0)
            pkg->config.package.set_effective_length(std::nullopt);
        else
            pkg->config.package.set_effective_length(effective_length);
    });
}

mv_environment mv_package_environment(const mv_package* pkg) { return from_env(pkg->config.environment); }

int mv_package_has_environment_override(const mv_package* pkg) { return pkg->config.environment_overridden ? 1 : 0; }

mv_status mv_package_acoustic_sensitivity_db(const mv_package* pkg, double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        if (!pkg->config.acoustic_sensitivity_dbv_pa)
            fail(ErrorCode::not_found, "mic document has no acoustic_sensitivity_dbv_pa");
        *out = *pkg->config.acoustic_sensitivity_dbv_pa;
    });
}

mv_status mv_lumped_mass_two_port(const mv_package* pkg, const mv_environment* env, mv_mode mode, double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = lumped_mass_two_port(pkg->config.package, to_env(env), to_mode(mode));
    });
}

mv_status mv_displacement_per_pascal(const mv_package* pkg, const mv_environment* env, double frequency_hz,
                                     double incidence_angle, double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = displacement_per_pascal(pkg->config.package, to_env(env), frequency_hz, incidence_angle);
    });
}

mv_status mv_displacement_per_g(const mv_package* pkg, const mv_environment* env, double frequency_hz, mv_mode mode,
                                double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = displacement_per_g(pkg->config.package, to_env(env), frequency_hz, to_mode(mode));
    });
}

mv_status mv_s_pa_per_g_two_port(const mv_package* pkg, const mv_environment* env, double frequency_hz,
                                 double incidence_angle, mv_mode mode, double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = s_pa_per_g_two_port(pkg->config.package, to_env(env), frequency_hz, incidence_angle, to_mode(mode));
    });
}

mv_status mv_s_pa_per_g_one_port(const mv_package* pkg, const mv_environment* env, mv_mode mode, double* out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        *out = s_pa_per_g_one_port(pkg->config.package, to_env(env), to_mode(mode));
    });
}

mv_status mv_response_create(mv_unit unit, const double* f, const double* v, size_t n, mv_response** out)
{
    return guarded([&] {
        require(out, "out");
        if (n > 0) {
            require(f, "frequencies");
            require(v, "values");
        }
        *out = wrap(FrequencyResponse(to_unit(unit), std::vector<double>(f, f + n), std::vector<double>(v, v + n)));
    });
}

mv_status mv_response_clone(const mv_response* r, mv_response** out)
{
    return guarded([&] {
        require(r, "r");
        require(out, "out");
        *out = new mv_response(*r);
    });
}

void mv_response_free(mv_response* r) { delete r; }

size_t mv_response_size(const mv_response* r) { return r->response.size(); }

mv_unit mv_response_unit(const mv_response* r) { return static_cast<mv_unit>(r->response.unit()); }

const double* mv_response_frequencies(const mv_response* r) { return r->response.frequencies().data(); }

const double* mv_response_values(const mv_response* r) { return r->response.values().data(); }

size_t mv_response_warning_count(const mv_response* r) { return r->warnings.size(); }

mv_status mv_response_warning(const mv_response* r, size_t index, mv_warning* out)
{
    return guarded([&] {
        require(r, "r");
        require(out, "out");
        if (index >= r->warnings.size()) fail(ErrorCode::invalid_argument, "warning index out of range");
        const auto& w = r->warnings[index];
        *out = {w.code.c_str(), w.message.c_str(), w.parameter.c_str(), w.frequency_hz, w.value, w.limit};
    });
}

const char* mv_response_metadata(const mv_response* r, const char* key)
{
    if (!r || !key) return nullptr;
    const auto it = r->response.metadata.find(key);
    return it == r->response.metadata.end() ? nullptr : it->second.c_str();
}

mv_status mv_response_set_metadata(mv_response* r, const char* key, const char* value)
{
    return guarded([&] {
        require(r, "r");
        require(key, "key");
        if (value)
            r->response.metadata[key] = value;
        else
            r->response.metadata.erase(key);
    });
}

mv_status mv_grid_fill(double fmin, double fmax, size_t points, int spacing_log, double* out)
{
    return guarded([&] {
        require(out, "out");
        const auto grid = spacing_log ? FrequencyGrid::logarithmic(fmin, fmax, points)
                                      : FrequencyGrid::linear(fmin, fmax, points);
        std::copy(grid.frequencies().begin(), grid.frequencies().end(), out);
    });
}

mv_status mv_predict_sweep(const mv_package* pkg, const mv_environment* env, const double* f, size_t n,
                           double incidence_angle, mv_mode mode, mv_response** out)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(out, "out");
        auto p = predict_sweep(pkg->config.package, to_env(env), to_grid(f, n), incidence_angle, to_mode(mode));
        *out = wrap(std::move(p.response), std::move(p.warnings));
    });
}

mv_status mv_db_to_linear(double db, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = db_to_linear(db);
    });
}

mv_status mv_linear_to_db(double linear, double* out)
{
    return guarded([&] {
        require(out, "out");
        *out = linear_to_db(linear);
    });
}

mv_status mv_sweep_load(const char* path, mv_unit unit_hint, mv_response** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(load_sweep(path, to_unit_hint(unit_hint)));
    });
}

mv_status mv_sweep_load_as(const char* path, mv_unit expected, mv_response** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        const auto unit = to_unit_hint(expected);
        if (!unit) fail(ErrorCode::invalid_argument, "expected unit must be specified");
        *out = wrap(load_sweep_as(path, *unit));
    });
}

mv_status mv_sweep_parse(const char* csv_text, mv_unit unit_hint, mv_response** out)
{
    return guarded([&] {
        require(csv_text, "csv_text");
        require(out, "out");
        *out = wrap(parse_sweep(csv_text, "<csv text>", to_unit_hint(unit_hint)));
    });
}

mv_status mv_sweep_save(const mv_response* r, const char* path)
{
    return guarded([&] {
        require(r, "r");
        require(path, "path");
        save_sweep(r->response, path);
    });
}

mv_status mv_sweep_to_csv(const mv_response* r, char* buf, size_t cap, size_t* needed)
{
    return guarded([&] {
        require(r, "r");
        copy_out(sweep_to_csv(r->response), buf, cap, needed);
    });
}

mv_status mv_resample(const mv_response* r, const double* target, size_t n, mv_response** out)
{
    return guarded([&] {
        require(r, "r");
        require(out, "out");
        *out = wrap(resample(r->response, to_grid(target, n)), r->warnings);
    });
}

mv_status mv_common_grid(const mv_response* a, const mv_response* b, double* out, size_t cap, size_t* count)
{
    return guarded([&] {
        require(a, "a");
        require(b, "b");
        require(count, "count");
        const auto grid = common_grid(a->response, b->response);
        *count = grid.size();
        if (!out || cap < grid.size())
            fail(ErrorCode::buffer_too_small, "frequency buffer too small");
        std::copy(grid.frequencies().begin(), grid.frequencies().end(), out);
    });
}

mv_status mv_flat_response(mv_unit unit, const double* f, size_t n, double value, mv_response** out)
{
    return guarded([&] {
        require(out, "out");
        *out = wrap(flat_response(to_unit(unit), to_grid(f, n), value));
    });
}

mv_status mv_acoustically_refer(const mv_response* raw, const mv_response* acoustic, mv_response** out)
{
    return guarded([&] {
        require(raw, "raw");
        require(acoustic, "acoustic");
        require(out, "out");
        *out = wrap(acoustically_refer(raw->response, acoustic->response));
    });
}

mv_status mv_divide_per_tone(const mv_response* voltage, const mv_response* accel, mv_response** out)
{
    return guarded([&] {
        require(voltage, "voltage");
        require(accel, "acceleration");
        require(out, "out");
        *out = wrap(divide_per_tone(voltage->response, accel->response));
    });
}

mv_status mv_on_off_ratio(const mv_response* on, const mv_response* off, mv_response** out_ratio, double* out_median,
                          mv_verdict* out_verdict)
{
    return guarded([&] {
        require(on, "on_shaker");
        require(off, "off_shaker");
        auto s = on_off_ratio(on->response, off->response);
        if (out_median) *out_median = s.median;
        if (out_verdict)
            *out_verdict = s.verdict == OnOffVerdict::leakage_dominated ? MV_VERDICT_LEAKAGE_DOMINATED
                                                                        : MV_VERDICT_VIBRATION_DOMINATED;
        if (out_ratio) *out_ratio = wrap(std::move(s.ratio));
    });
}

mv_shaker mv_shaker_default(void) { return from_shaker(ShakerSpec{}); }

mv_status mv_shaker_load(const char* path, mv_shaker* out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = from_shaker(load_rig_spec_file(path));
    });
}

mv_status mv_plate_stiffness(const mv_plate* plate, double* out)
{
    return guarded([&] {
        require(plate, "plate");
        require(out, "out");
        *out = plate_stiffness(to_plate(*plate));
    });
}

mv_status mv_plate_natural_frequency(const mv_plate* plate, double* out)
{
    return guarded([&] {
        require(plate, "plate");
        require(out, "out");
        *out = plate_natural_frequency(to_plate(*plate));
    });
}

mv_status mv_shaker_acceleration(const mv_shaker* shaker, double drive_voltage, const double* f, size_t n,
                                 mv_response** out)
{
    return guarded([&] {
        require(shaker, "shaker");
        require(out, "out");
        *out = wrap(shaker_acceleration(to_shaker(*shaker), drive_voltage, to_grid(f, n)));
    });
}

mv_status mv_synthesize_mic_sweep(const mv_response* model, const mv_response* acoustic, const mv_response* accel,
                                  double noise_fraction, uint64_t seed, double leakage_floor_pa,
                                  mv_response** out_voltage, mv_response** out_v_per_g)
{
    return guarded([&] {
        require(model, "model");
        require(acoustic, "acoustic");
        require(accel, "acceleration");
        require(out_voltage, "out_voltage");
        auto s = synthesize_mic_sweep(model->response, acoustic->response, accel->response, noise_fraction, seed,
                                      leakage_floor_pa);
        std::vector<Warning> undefined;
        for (double f : s.undefined_frequencies) {
            Warning w;
            w.code = "v_per_g_undefined";
            w.message = "acceleration is zero, V/g undefined";
            w.frequency_hz = f;
            w.parameter = "acceleration_g";
            w.value = 0.0;
            undefined.push_back(std::move(w));
        }
        auto* voltage = wrap(std::move(s.voltage), undefined);
        if (out_v_per_g) {
            try {
                *out_v_per_g = wrap(std::move(s.v_per_g), std::move(undefined));
            } catch (...) {
                delete voltage;
                throw;
            }
        }
        *out_voltage = voltage;
    });
}

mv_status mv_fit_effective_length(const mv_response* measured, const mv_package* pkg, const mv_environment* env,
                                  double incidence_angle, mv_fit_result* out)
{
    return guarded([&] {
        require(measured, "measured");
        require(pkg, "pkg");
        require(out, "out");
        const auto fit = fit_effective_length(measured->response, pkg->config.package, to_env(env), incidence_angle);
        *out = {fit.effective_length, fit.residual_rms_log, fit.points_used, fit.converged ? 1 : 0,
                fit.warnings.empty() ? 0 : 1};
    });
}

mv_intervals mv_intervals_default(void) { return from_intervals(default_parameter_intervals()); }

mv_status mv_intervals_load(const char* path, mv_intervals* out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = from_intervals(load_intervals_file(path));
    });
}

mv_status mv_envelope(const mv_package* pkg, const mv_environment* env, const double* f, size_t n,
                      const mv_intervals* intervals, mv_mode mode, double incidence_angle, mv_response** out_lower,
                      mv_response** out_nominal, mv_response** out_upper)
{
    return guarded([&] {
        require(pkg, "pkg");
        require(intervals, "intervals");
        require(out_lower, "out_lower");
        require(out_nominal, "out_nominal");
        require(out_upper, "out_upper");
        auto e = envelope(pkg->config.package, to_env(env), to_grid(f, n), to_intervals(*intervals), to_mode(mode),
                          incidence_angle);
        std::vector<mv_response*> made;
        try {
            made.push_back(wrap(std::move(e.lower)));
            made.push_back(wrap(std::move(e.nominal), std::move(e.warnings)));
            made.push_back(wrap(std::move(e.upper)));
        } catch (...) {
            for (auto* r : made) delete r;
            throw;
        }
        *out_lower = made[0];
        *out_nominal = made[1];
        *out_upper = made[2];
    });
}

const char* mv_preset_directory(void)
{
    preset_dir_cache = preset_directory().string();
    return preset_dir_cache.c_str();
}

size_t mv_preset_count(void)
{
    try {
        name_cache = list_mic_presets();
    } catch (const std::exception& e) {
        last_error = e.what();
        name_cache.clear();
    }
    return name_cache.size();
}

const char* mv_preset_name(size_t index)
{
    if (name_cache.empty()) mv_preset_count();
    return index < name_cache.size() ? name_cache[index].c_str() : nullptr;
}

size_t mv_sensitivity_count(void)
{
    try {
        sensitivity_cache = load_sensitivity_table();
    } catch (const std::exception& e) {
        last_error = e.what();
        sensitivity_cache.clear();
    }
    return sensitivity_cache.size();
}

mv_status mv_sensitivity_entry(size_t index, const char** out_name, const char** out_mic, const char** out_condition,
                               double* out_datasheet_db, double* out_measured_db)
{
    return guarded([&] {
        if (sensitivity_cache.empty()) sensitivity_cache = load_sensitivity_table();
        if (index >= sensitivity_cache.size()) fail(ErrorCode::invalid_argument, "sensitivity index out of range");
        const auto& e = sensitivity_cache[index];
        if (out_name) *out_name = e.name.c_str();
        if (out_mic) *out_mic = e.mic.c_str();
        if (out_condition) *out_condition = e.condition.c_str();
        if (out_datasheet_db) *out_datasheet_db = e.datasheet_dbv_pa.value_or(std::numeric_limits<double>::quiet_NaN());
        if (out_measured_db) *out_measured_db = e.measured_dbv_pa;
    });
}

mv_status mv_sensitivity_lookup(const char* name, double* out)
{
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        const auto db = lookup_sensitivity_db(name);
        if (!db) fail(ErrorCode::not_found, "no sensitivity entry named '" + std::string(name) + "'");
        *out = *db;
    });
}

}  // extern "C"

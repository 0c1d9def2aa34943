#include "rig.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace micvib {

namespace {

constexpr std::uint64_t accel_stream = 0x61636365;  // "acce"
constexpr std::uint64_t mic_stream = 0x6d696300;    // "mic"

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_noise_fraction(double fraction)
{
    if (!(fraction >= 0.0) || !std::isfinite(fraction))
        fail(ErrorCode::invalid_argument, "noise_fraction must be finite and >= 0");
}

}  // namespace

void PlateSpec::validate() const
{
    require_positive(radius, "plate radius");
    require_positive(thickness, "plate thickness");
    require_positive(youngs_modulus, "plate youngs_modulus");
    require_positive(density, "plate density");
    require_positive(resonance_q, "plate resonance_q");
    if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5))
        fail(ErrorCode::invalid_argument, "poisson_ratio must lie in (0, 0.5), got " + std::to_string(poisson_ratio));
}

void ShakerSpec::validate() const
{
    require_positive(rolloff_corner, "rolloff_corner");
    if (rolloff_order < 1) fail(ErrorCode::invalid_argument, "rolloff_order must be >= 1");
    require_positive(accel_per_volt, "accel_per_volt");
    require_noise_fraction(noise_fraction);
    plate.validate();
}

double plate_stiffness(const PlateSpec& spec)
{
    require_positive(spec.thickness, "plate thickness");
    require_positive(spec.youngs_modulus, "plate youngs_modulus");
    // Poisson ratio outside [0, 1) makes the rigidity meaningless.
    if (!(spec.poisson_ratio >= 0.0 && spec.poisson_ratio < 1.0))
        fail(ErrorCode::invalid_argument, "poisson_ratio must lie in [0, 1), got " + std::to_string(spec.poisson_ratio));
    const double h = spec.thickness;
    return spec.youngs_modulus * h * h * h / (12.0 * (1.0 - spec.poisson_ratio * spec.poisson_ratio));
}

double plate_natural_frequency(const PlateSpec& spec)
{
    const double d = plate_stiffness(spec);
    require_positive(spec.radius, "plate radius");
    require_positive(spec.density, "plate density");
    const double omega = 4.979 / (spec.radius * spec.radius) * std::sqrt(d / (spec.density * spec.thickness));
    return omega / (2.0 * std::numbers::pi);
}

double highpass_magnitude(double frequency_hz, double corner_hz, int order)
{
    const double x = frequency_hz / corner_hz;
    return std::pow(x / std::sqrt(1.0 + x * x), order);
}

double resonance_magnitude(double frequency_hz, double resonance_hz, double q)
{
    const double r = frequency_hz / resonance_hz;
    const double detune = 1.0 - r * r;
    const double damping = r / q;
    return 1.0 / std::sqrt(detune * detune + damping * damping);
}

double noise_factor(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, double fraction)
{
    if (fraction == 0.0) return 1.0;
    const std::uint64_t bits = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
    // 53 random mantissa bits -> [0, 1), mapped to [-1, 1).
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    return std::exp(u * std::log1p(fraction));
}

FrequencyResponse shaker_acceleration(const ShakerSpec& spec, double drive_voltage, const FrequencyGrid& grid)
{
    spec.validate();
    if (!(drive_voltage >= 0.0) || !std::isfinite(drive_voltage))
        fail(ErrorCode::invalid_argument, "drive voltage must be finite and >= 0");
    const double f_plate = plate_natural_frequency(spec.plate);
    std::vector<double> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid[i];
        a[i] = drive_voltage * spec.accel_per_volt * highpass_magnitude(f, spec.rolloff_corner, spec.rolloff_order) *
               resonance_magnitude(f, f_plate, spec.plate.resonance_q) *
               noise_factor(spec.seed, accel_stream, i, spec.noise_fraction);
    }
    return FrequencyResponse(Unit::g_accel, grid, std::move(a));
}

SynthesizedSweep synthesize_mic_sweep(const FrequencyResponse& model, const FrequencyResponse& acoustic,
                                      const FrequencyResponse& accel, double noise_fraction, std::uint64_t seed,
                                      double leakage_floor_pa)
{
    if (model.unit() != Unit::Pa_per_g) fail(ErrorCode::unit_mismatch, "model curve must be Pa_per_g");
    if (acoustic.unit() != Unit::V_per_Pa) fail(ErrorCode::unit_mismatch, "acoustic sensitivity must be V_per_Pa");
    if (accel.unit() != Unit::g_accel) fail(ErrorCode::unit_mismatch, "acceleration must be g_accel");
    if (!model.same_grid(acoustic) || !model.same_grid(accel))
        fail(ErrorCode::grid_mismatch, "model, acoustic and acceleration sweeps must share one grid");
    require_noise_fraction(noise_fraction);
    if (!(leakage_floor_pa >= 0.0) || !std::isfinite(leakage_floor_pa))
        fail(ErrorCode::invalid_argument, "leakage floor must be finite and >= 0");

    std::vector<double> volts(model.size());
    std::vector<double> vg_freqs;
    std::vector<double> vg;
    std::vector<double> undefined;
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!(model.value(i) > 0.0) || !(acoustic.value(i) > 0.0))
            fail(ErrorCode::invalid_argument,
                 "model and acoustic sensitivity must be > 0 at " + std::to_string(model.frequency(i)) + " Hz");
        const double pressure = model.value(i) * accel.value(i) + leakage_floor_pa;
        volts[i] = pressure * acoustic.value(i) * noise_factor(seed, mic_stream, i, noise_fraction);
        if (accel.value(i) > 0.0) {
            vg_freqs.push_back(model.frequency(i));
            vg.push_back(volts[i] / accel.value(i));
        } else {
            undefined.push_back(model.frequency(i));
        }
    }
    return {FrequencyResponse(Unit::volt, model.frequencies_vector(), std::move(volts)),
            FrequencyResponse(Unit::V_per_g, std::move(vg_freqs), std::move(vg)), std::move(undefined)};
}

}  // namespace micvib

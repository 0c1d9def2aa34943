#pragma once

// Synthetic shaker rig. The acceleration seen by the reference accelerometer is
//
//   a(f) = drive * accel_per_volt * |H_hp(f)| * |H_res(f)|
//
// with H_hp a cascade of `rolloff_order` first-order high-pass sections at
// `rolloff_corner` (|H_hp| = (x / sqrt(1 + x^2))^n, x = f / corner) standing in
// for the shaker travel limit, and H_res the unit-DC-gain response of a single
// damped mode at the plate's fundamental frequency
// (|H_res| = 1 / sqrt((1 - r^2)^2 + (r / Q)^2), r = f / f_plate).

#include <cstdint>
#include <vector>

#include "frequency_response.hpp"

namespace micvib {

struct PlateSpec {
    double radius = 0.05;            // m
    double thickness = 0.005;        // m
    double youngs_modulus = 69e9;    // Pa
    double poisson_ratio = 0.33;
    double density = 2700.0;         // kg/m^3
    double resonance_q = 20.0;

    void validate() const;
    bool operator==(const PlateSpec&) const = default;
};

struct ShakerSpec {
    double rolloff_corner = 40.0;  // Hz
    int rolloff_order = 2;
    PlateSpec plate;
    double accel_per_volt = 10.0;  // g/V
    double noise_fraction = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const ShakerSpec&) const = default;
};

/// Flexural rigidity E h^3 / (12 (1 - mu^2)) in N*m.
double plate_stiffness(const PlateSpec& spec);

/// Fundamental mode of a simply supported circular plate,
/// (4.979 / r^2) sqrt(D / (rho h)), returned in Hz.
double plate_natural_frequency(const PlateSpec& spec);

double highpass_magnitude(double frequency_hz, double corner_hz, int order);
double resonance_magnitude(double frequency_hz, double resonance_hz, double q);

/// Multiplicative noise factor for point `index`, uniform in log space on
/// [-ln(1 + fraction), ln(1 + fraction)]. Counter based: depends only on
/// (seed, stream, index).
double noise_factor(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, double fraction);

FrequencyResponse shaker_acceleration(const ShakerSpec& spec, double drive_voltage, const FrequencyGrid& grid);

struct SynthesizedSweep {
    FrequencyResponse voltage;    // V
    FrequencyResponse v_per_g;    // V_per_g, only where acceleration > 0
    std::vector<double> undefined_frequencies;  // where acceleration == 0
};

/// Builds the raw microphone voltage implied by a Pa/g model curve:
/// V = (S_Pa/g * a + leakage_floor_pa) * S_V/Pa * (1 + eta).
SynthesizedSweep synthesize_mic_sweep(const FrequencyResponse& model_pa_per_g,
                                      const FrequencyResponse& acoustic_v_per_pa,
                                      const FrequencyResponse& acceleration, double noise_fraction,
                                      std::uint64_t seed, double leakage_floor_pa = 0.0);

}  // namespace micvib

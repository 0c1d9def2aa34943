#pragma once

// Lumped-parameter vibration sensitivity of one-port and two-port MEMS
// microphones. All quantities are SI; frequencies are in Hz and converted to
// angular frequency internally. Angles are in radians, 0 = on-axis.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frequency_response.hpp"

namespace micvib {

struct Environment {
    double air_density = 1.204;     // kg/m^3, dry air at 20 C
    double speed_of_sound = 343.0;  // m/s
    double standard_gravity = 9.81; // m/s^2 per g

    void validate() const;
    bool operator==(const Environment&) const = default;
};

inline constexpr double default_membrane_density = 2300.0;  // kg/m^3, silicon
inline constexpr double default_membrane_thickness = 1e-6;  // m
inline constexpr double default_membrane_area = 1e-6;       // m^2, cancels in Pa/g
inline constexpr double default_quality_factor = 0.707;

struct SensingElement {
    double membrane_density = default_membrane_density;
    double membrane_thickness = default_membrane_thickness;
    double area = default_membrane_area;
    double natural_frequency = 0.0;  // Hz
    double quality_factor = default_quality_factor;

    double mass() const { return membrane_density * membrane_thickness * area; }
    double angular_natural_frequency() const;
    void validate() const;
    bool operator==(const SensingElement&) const = default;
};

struct OnePort {
    double l1 = 0.0;
    double l2 = 0.0;
    bool operator==(const OnePort&) const = default;
};

struct TwoPort {
    double l1 = 0.0;
    double l2 = 0.0;
    double port_spacing = 0.0;
    std::optional<double> effective_length;
    bool operator==(const TwoPort&) const = default;
};

// Two omnidirectional mics wired differentially. Same geometry record as
// TwoPort, but the air length has to come from a fit or an explicit value.
struct ArrayOfOnePorts {
    double l1 = 0.0;
    double l2 = 0.0;
    double port_spacing = 0.0;
    std::optional<double> effective_length;
    bool operator==(const ArrayOfOnePorts&) const = default;
};

using PackageGeometry = std::variant<OnePort, TwoPort, ArrayOfOnePorts>;

enum class PackageType { one_port, two_port, array_of_one_ports };

struct MicPackage {
    std::string label;
    PackageGeometry geometry;
    SensingElement element;

    PackageType type() const { return static_cast<PackageType>(geometry.index()); }
    bool is_one_port() const { return type() == PackageType::one_port; }
    double l1() const;
    double l2() const;
    // Throws wrong_variant for one-port packages.
    double port_spacing() const;
    std::optional<double> effective_length() const;
    void set_effective_length(std::optional<double> length);
    void validate() const;
    bool operator==(const MicPackage&) const = default;
};

enum class ModelMode { full, air_only };

std::string_view to_string(PackageType type);
std::string_view to_string(ModelMode mode);
ModelMode parse_model_mode(std::string_view text);

/// Dynamic compliance of the sensing element as a damped harmonic oscillator,
/// in m/N: 1 / (m wn^2 sqrt((1 - w^2/wn^2)^2 + (w/(Q wn))^2)).
double mechanical_response(const SensingElement& element, double frequency_hz);

/// Membrane plus both air columns. The air term uses the effective length when
/// one is set; air-only mode drops the membrane.
double lumped_mass_two_port(const MicPackage& package, const Environment& env,
                            ModelMode mode = ModelMode::full);

struct PressureRatio {
    double value = 0.0;  // signed, follows cos(angle)
    bool within_validity = true;  // port spacing <= wavelength / 10
    double wavelength = 0.0;
};

/// Pressure difference across the ports per unit acoustic pressure, using a
/// linear pressure change between ports: (d_p cos(angle)) w / c.
PressureRatio pressure_difference_ratio(double port_spacing, double frequency_hz, const Environment& env,
                                        double incidence_angle);

double displacement_per_pascal(const MicPackage& package, const Environment& env, double frequency_hz,
                               double incidence_angle);

double displacement_per_g(const MicPackage& package, const Environment& env, double frequency_hz,
                          ModelMode mode = ModelMode::full);

/// Modeled air length for a two-port or array package: the effective length
/// if present, else l1 + l2 (two-port) or d_p (array, air-only mode).
double modeled_air_length(const MicPackage& package, ModelMode mode);

/// Closed form 9.81 (rho_m t_m + rho_a L_air) c / (d_p cos(angle) w) in Pa/g.
double s_pa_per_g_two_port(const MicPackage& package, const Environment& env, double frequency_hz,
                           double incidence_angle, ModelMode mode);

/// 9.81 rho_a (L1 + L2/2) + 9.81 rho_m t_m, frequency independent.
double s_pa_per_g_one_port(const MicPackage& package, const Environment& env, ModelMode mode);

struct Prediction {
    FrequencyResponse response;
    std::vector<Warning> warnings;
};

Prediction predict_sweep(const MicPackage& package, const Environment& env, const FrequencyGrid& grid,
                         double incidence_angle, ModelMode mode);

}  // namespace micvib

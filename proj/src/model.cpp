#include "model.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace micvib {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// |cos| below this is treated as the broadside null of the figure-of-eight.
constexpr double off_axis_cos_floor = 1e-12;

double angular(double frequency_hz) { return two_pi * frequency_hz; }

void require_two_port(const MicPackage& package, const char* op)
{
    if (package.is_one_port())
        fail(ErrorCode::wrong_variant, std::string(op) + " requires a two-port or array package, '" +
                                           package.label + "' is one_port");
}

double projected_spacing(double port_spacing, double incidence_angle)
{
    const double projected = std::abs(port_spacing * std::cos(incidence_angle));
    if (projected < off_axis_cos_floor * port_spacing)
        fail(ErrorCode::off_axis_null, "port spacing projection vanishes at incidence angle " +
                                           std::to_string(incidence_angle) + " rad");
    return projected;
}

}  // namespace

void Environment::validate() const
{
    require_positive(air_density, "air_density");
    require_positive(speed_of_sound, "speed_of_sound");
    require_positive(standard_gravity, "standard_gravity");
}

double SensingElement::angular_natural_frequency() const { return two_pi * natural_frequency; }

void SensingElement::validate() const
{
    require_positive(membrane_density, "membrane_density");
    require_positive(membrane_thickness, "membrane_thickness");
    require_positive(area, "area");
    require_positive(natural_frequency, "natural_frequency");
    require_positive(quality_factor, "quality_factor");
    require_positive(mass(), "membrane mass");
}

double MicPackage::l1() const
{
    return std::visit([](const auto& g) { return g.l1; }, geometry);
}

double MicPackage::l2() const
{
    return std::visit([](const auto& g) { return g.l2; }, geometry);
}

double MicPackage::port_spacing() const
{
    if (const auto* g = std::get_if<TwoPort>(&geometry)) return g->port_spacing;
    if (const auto* g = std::get_if<ArrayOfOnePorts>(&geometry)) return g->port_spacing;
    fail(ErrorCode::wrong_variant, "one_port package '" + label + "' has no port spacing");
}

std::optional<double> MicPackage::effective_length() const
{
    if (const auto* g = std::get_if<TwoPort>(&geometry)) return g->effective_length;
    if (const auto* g = std::get_if<ArrayOfOnePorts>(&geometry)) return g->effective_length;
    return std::nullopt;
}

void MicPackage::set_effective_length(std::optional<double> length)
{
    if (auto* g = std::get_if<TwoPort>(&geometry))
        g->effective_length = length;
    else if (auto* g = std::get_if<ArrayOfOnePorts>(&geometry))
        g->effective_length = length;
    else
        fail(ErrorCode::wrong_variant, "one_port package '" + label + "' has no effective length");
}

void MicPackage::validate() const
{
    element.validate();
    require_positive(l1(), "l1");
    require_positive(l2(), "l2");
    if (!is_one_port()) {
        require_positive(port_spacing(), "port_spacing");
        if (const auto leff = effective_length()) require_positive(*leff, "effective_length");
    }
}

std::string_view to_string(PackageType type)
{
    switch (type) {
    case PackageType::one_port: return "one_port";
    case PackageType::two_port: return "two_port";
    case PackageType::array_of_one_ports: return "array_of_one_ports";
    }
    return "unknown";
}

std::string_view to_string(ModelMode mode) { return mode == ModelMode::full ? "full" : "air-only"; }

ModelMode parse_model_mode(std::string_view text)
{
    if (text == "full") return ModelMode::full;
    if (text == "air-only" || text == "air_only") return ModelMode::air_only;
    fail(ErrorCode::invalid_argument, "unknown model mode '" + std::string(text) + "'");
}

double mechanical_response(const SensingElement& element, double frequency_hz)
{
    element.validate();
    if (!(frequency_hz >= 0.0) || !std::isfinite(frequency_hz))
        fail(ErrorCode::invalid_argument, "frequency must be finite and >= 0");
    const double wn = element.angular_natural_frequency();
    const double r = angular(frequency_hz) / wn;
    const double detune = 1.0 - r * r;
    const double damping = r / element.quality_factor;
    return 1.0 / (element.mass() * wn * wn * std::sqrt(detune * detune + damping * damping));
}

double modeled_air_length(const MicPackage& package, ModelMode mode)
{
    require_two_port(package, "modeled_air_length");
    if (const auto leff = package.effective_length()) return *leff;
    if (package.type() == PackageType::two_port) return package.l1() + package.l2();
    if (mode == ModelMode::air_only) return package.port_spacing();
    fail(ErrorCode::missing_effective_length,
         "array package '" + package.label + "' needs an effective length (given or fitted) for the full model");
}

double lumped_mass_two_port(const MicPackage& package, const Environment& env, ModelMode mode)
{
    require_two_port(package, "lumped_mass_two_port");
    env.validate();
    const auto& e = package.element;
    const double air = env.air_density * e.area * modeled_air_length(package, mode);
    if (mode == ModelMode::air_only) return air;
    return air + e.membrane_density * e.membrane_thickness * e.area;
}

PressureRatio pressure_difference_ratio(double port_spacing, double frequency_hz, const Environment& env,
                                        double incidence_angle)
{
    require_positive(port_spacing, "port_spacing");
    env.validate();
    if (!(frequency_hz >= 0.0) || !std::isfinite(frequency_hz))
        fail(ErrorCode::invalid_argument, "frequency must be finite and >= 0");
    PressureRatio out;
    out.value = port_spacing * std::cos(incidence_angle) * angular(frequency_hz) / env.speed_of_sound;
    out.wavelength = frequency_hz > 0.0 ? env.speed_of_sound / frequency_hz : std::numeric_limits<double>::infinity();
    out.within_validity = port_spacing <= out.wavelength / 10.0;
    return out;
}

double displacement_per_pascal(const MicPackage& package, const Environment& env, double frequency_hz,
                               double incidence_angle)
{
    require_two_port(package, "displacement_per_pascal");
    const auto ratio = pressure_difference_ratio(package.port_spacing(), frequency_hz, env, incidence_angle);
    return std::abs(ratio.value) * package.element.area * mechanical_response(package.element, frequency_hz);
}

double displacement_per_g(const MicPackage& package, const Environment& env, double frequency_hz,
                          ModelMode mode)
{
    require_two_port(package, "displacement_per_g");
    return env.standard_gravity * lumped_mass_two_port(package, env, mode) *
           mechanical_response(package.element, frequency_hz);
}

double s_pa_per_g_two_port(const MicPackage& package, const Environment& env, double frequency_hz,
                           double incidence_angle, ModelMode mode)
{
    require_two_port(package, "s_pa_per_g_two_port");
    package.validate();
    env.validate();
    if (!std::isfinite(frequency_hz) || frequency_hz < 0.0)
        fail(ErrorCode::invalid_argument, "frequency must be finite and >= 0");
    if (frequency_hz == 0.0) fail(ErrorCode::pole, "two-port Pa/g has a pole at 0 Hz");
    const auto& e = package.element;
    double areal_mass = env.air_density * modeled_air_length(package, mode);
    if (mode == ModelMode::full) areal_mass += e.membrane_density * e.membrane_thickness;
    const double spacing = projected_spacing(package.port_spacing(), incidence_angle);
    return env.standard_gravity * areal_mass * env.speed_of_sound / (spacing * angular(frequency_hz));
}

double s_pa_per_g_one_port(const MicPackage& package, const Environment& env, ModelMode mode)
{
    if (!package.is_one_port())
        fail(ErrorCode::wrong_variant, "s_pa_per_g_one_port requires a one_port package, '" + package.label +
                                           "' is " + std::string(to_string(package.type())));
    env.validate();
    const auto& g = std::get<OnePort>(package.geometry);
    if (g.l1 < 0.0 || g.l2 < 0.0) fail(ErrorCode::invalid_argument, "air column lengths must be >= 0");
    double s = env.standard_gravity * env.air_density * (g.l1 + 0.5 * g.l2);
    if (mode == ModelMode::full)
        s += env.standard_gravity * package.element.membrane_density * package.element.membrane_thickness;
    return s;
}

Prediction predict_sweep(const MicPackage& package, const Environment& env, const FrequencyGrid& grid,
                         double incidence_angle, ModelMode mode)
{
    if (grid.empty()) fail(ErrorCode::invalid_argument, "frequency grid is empty");
    package.validate();
    env.validate();

    std::vector<double> values(grid.size());
    std::vector<Warning> warnings;

    if (package.is_one_port()) {
        const double s = s_pa_per_g_one_port(package, env, mode);
        for (auto& v : values) v = s;
        return {FrequencyResponse(Unit::Pa_per_g, grid, std::move(values)), std::move(warnings)};
    }

    if (package.type() == PackageType::array_of_one_ports && mode == ModelMode::air_only &&
        !package.effective_length()) {
        Warning w;
        w.code = "array_air_only_known_poor";
        w.message = "air-only model with L_air = d_p is a known-poor fit for differential arrays";
        w.parameter = "port_spacing_m";
        w.value = package.port_spacing();
        warnings.push_back(std::move(w));
    }

    const double dp = package.port_spacing();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid[i];
        try {
            values[i] = s_pa_per_g_two_port(package, env, f, incidence_angle, mode);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (at " + std::to_string(f) + " Hz)");
        }
        const auto ratio = pressure_difference_ratio(dp, f, env, incidence_angle);
        if (!ratio.within_validity) {
            Warning w;
            w.code = "port_spacing_exceeds_wavelength_tenth";
            w.message = "d_p > lambda/10, linear pressure-gradient approximation degraded";
            w.frequency_hz = f;
            w.parameter = "port_spacing_m";
            w.value = dp;
            w.limit = ratio.wavelength / 10.0;
            warnings.push_back(std::move(w));
        }
    }
    return {FrequencyResponse(Unit::Pa_per_g, grid, std::move(values)), std::move(warnings)};
}

}  // namespace micvib

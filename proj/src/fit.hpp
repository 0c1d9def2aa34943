#pragma once

#include <functional>
#include <vector>

#include "frequency_response.hpp"
#include "model.hpp"

namespace micvib {

struct GoldenSectionResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free minimization of a unimodal function on [lower, upper].
/// Stops once the bracket is narrower than `abs_tolerance`.
GoldenSectionResult golden_section_minimize(const std::function<double(double)>& objective, double lower,
                                            double upper, double abs_tolerance, int max_iterations = 500);

struct FitResult {
    double effective_length = 0.0;  // m
    double residual_rms_log = 0.0;
    std::size_t points_used = 0;
    bool converged = false;
    std::vector<Warning> warnings;
};

// Residual RMS (natural log) above which the fitted curve is not a 1/f shape.
inline constexpr double poor_fit_residual = 0.05;

/// Sum of squared log residuals between a measured Pa/g sweep and the full
/// two-port model with the given air length.
double effective_length_objective(const FrequencyResponse& measured, const MicPackage& package,
                                  const Environment& env, double effective_length, double incidence_angle = 0.0);

/// Least-squares fit of the air-column length in log space, searched over
/// [d_p / 100, 10 d_p] in log(L) with relative tolerance 1e-9.
FitResult fit_effective_length(const FrequencyResponse& measured, const MicPackage& package,
                               const Environment& env, double incidence_angle = 0.0);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const Interval&) const = default;
};

struct ParameterIntervals {
    Interval l1;                  // m
    Interval l2;                  // m
    Interval membrane_density;    // kg/m^3
    Interval membrane_thickness;  // m

    void validate() const;
    bool operator==(const ParameterIntervals&) const = default;
};

// Tabulated defaults: L1, L2 in 1-1.5 mm, rho_m 2000-3000 kg/m^3, t_m 0.5-1.5 um.
ParameterIntervals default_parameter_intervals();

struct Envelope {
    FrequencyResponse lower;
    FrequencyResponse nominal;
    FrequencyResponse upper;
    std::vector<Warning> warnings;
};

/// Evaluates the model at all 16 interval corners (port spacing fixed) and
/// takes the pointwise min/max. Nominal uses the package as given.
Envelope envelope(const MicPackage& package, const Environment& env, const FrequencyGrid& grid,
                  const ParameterIntervals& intervals, ModelMode mode, double incidence_angle = 0.0);

}  // namespace micvib

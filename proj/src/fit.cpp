#include "fit.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace micvib {

namespace {

constexpr double inv_phi = 0.6180339887498948482;  // 1 / golden ratio

void require_interval(const Interval& i, const char* name)
{
    require_positive(i.lower, name);
    require_positive(i.upper, name);
    if (i.lower > i.upper) fail(ErrorCode::invalid_argument, std::string(name) + " interval has lower > upper");
}

}  // namespace

GoldenSectionResult golden_section_minimize(const std::function<double(double)>& objective, double lower,
                                            double upper, double abs_tolerance, int max_iterations)
{
    if (!(upper > lower)) fail(ErrorCode::invalid_argument, "golden section bracket is empty");
    double a = lower;
    double b = upper;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    GoldenSectionResult r;
    while (r.iterations < max_iterations && (b - a) > abs_tolerance) {
        ++r.iterations;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    r.converged = (b - a) <= abs_tolerance;
    r.x = 0.5 * (a + b);
    r.value = objective(r.x);
    return r;
}

double effective_length_objective(const FrequencyResponse& measured, const MicPackage& package,
                                  const Environment& env, double effective_length, double incidence_angle)
{
    MicPackage trial = package;
    trial.set_effective_length(effective_length);
    double sum = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const double model = s_pa_per_g_two_port(trial, env, measured.frequency(i), incidence_angle, ModelMode::full);
        const double r = std::log(measured.value(i)) - std::log(model);
        sum += r * r;
    }
    return sum;
}

FitResult fit_effective_length(const FrequencyResponse& measured, const MicPackage& package, const Environment& env,
                               double incidence_angle)
{
    if (package.is_one_port())
        fail(ErrorCode::wrong_variant, "effective length fit needs a two-port or array package");
    if (measured.unit() != Unit::Pa_per_g)
        fail(ErrorCode::unit_mismatch, "measured curve must be Pa_per_g, got " + std::string(to_string(measured.unit())));
    if (measured.size() < 3) fail(ErrorCode::invalid_argument, "effective length fit needs at least 3 points");
    if (std::all_of(measured.values().begin(), measured.values().end(), [](double v) { return v == 0.0; }))
        fail(ErrorCode::degenerate, "measured curve is identically zero");
    for (std::size_t i = 0; i < measured.size(); ++i)
        if (!(measured.value(i) > 0.0))
            fail(ErrorCode::invalid_argument,
                 "measured value must be > 0 at " + std::to_string(measured.frequency(i)) + " Hz");

    const double dp = package.port_spacing();
    const double lo = std::log(dp / 100.0);
    const double hi = std::log(10.0 * dp);
    // A relative tolerance on L is an absolute one on log(L).
    constexpr double rel_tol = 1e-9;
    const auto objective = [&](double log_len) {
        return effective_length_objective(measured, package, env, std::exp(log_len), incidence_angle);
    };
    const auto gs = golden_section_minimize(objective, lo, hi, rel_tol);

    // Collapsing onto a bracket end means the optimum lies outside it.
    const double edge = 10.0 * rel_tol;
    if (!gs.converged || gs.x - lo < edge || hi - gs.x < edge)
        fail(ErrorCode::non_convergence, "effective length search exhausted the bracket [" +
                                             std::to_string(dp / 100.0) + ", " + std::to_string(10.0 * dp) + "] m");

    FitResult fit;
    fit.effective_length = std::exp(gs.x);
    fit.points_used = measured.size();
    fit.residual_rms_log = std::sqrt(gs.value / static_cast<double>(measured.size()));
    fit.converged = true;
    if (fit.residual_rms_log > poor_fit_residual) {
        Warning w;
        w.code = "fit_residual_large";
        w.message = "measured curve does not follow the 1/f two-port law; fitted length is unreliable";
        w.parameter = "residual_rms_log";
        w.value = fit.residual_rms_log;
        w.limit = poor_fit_residual;
        fit.warnings.push_back(std::move(w));
    }
    return fit;
}

void ParameterIntervals::validate() const
{
    require_interval(l1, "l1");
    require_interval(l2, "l2");
    require_interval(membrane_density, "membrane_density");
    require_interval(membrane_thickness, "membrane_thickness");
}

ParameterIntervals default_parameter_intervals()
{
    return {{1.0e-3, 1.5e-3}, {1.0e-3, 1.5e-3}, {2000.0, 3000.0}, {0.5e-6, 1.5e-6}};
}

Envelope envelope(const MicPackage& package, const Environment& env, const FrequencyGrid& grid,
                  const ParameterIntervals& intervals, ModelMode mode, double incidence_angle)
{
    intervals.validate();
    auto nominal = predict_sweep(package, env, grid, incidence_angle, mode);

    std::vector<Warning> warnings = std::move(nominal.warnings);
    const auto outside = [&](double v, const Interval& i, const char* name) {
        if (v < i.lower || v > i.upper) {
            Warning w;
            w.code = "nominal_outside_intervals";
            w.message = std::string("nominal ") + name + " lies outside its interval";
            w.parameter = name;
            w.value = v;
            w.limit = v < i.lower ? i.lower : i.upper;
            warnings.push_back(std::move(w));
        }
    };
    outside(package.l1(), intervals.l1, "l1_m");
    outside(package.l2(), intervals.l2, "l2_m");
    outside(package.element.membrane_density, intervals.membrane_density, "membrane_density_kg_m3");
    outside(package.element.membrane_thickness, intervals.membrane_thickness, "membrane_thickness_m");
    if (const auto leff = package.effective_length()) {
        Warning w;
        w.code = "effective_length_held_fixed";
        w.message = "package carries an effective air length; l1/l2 intervals do not affect the air term";
        w.parameter = "effective_length_m";
        w.value = *leff;
        warnings.push_back(std::move(w));
    }

    std::vector<double> lo(grid.size(), std::numeric_limits<double>::infinity());
    std::vector<double> hi(grid.size(), 0.0);
    for (unsigned corner = 0; corner < 16; ++corner) {
        const auto pick = [corner](const Interval& i, unsigned bit) {
            return (corner >> bit) & 1U ? i.upper : i.lower;
        };
        MicPackage p = package;
        std::visit(
            [&](auto& g) {
                g.l1 = pick(intervals.l1, 0);
                g.l2 = pick(intervals.l2, 1);
            },
            p.geometry);
        p.element.membrane_density = pick(intervals.membrane_density, 2);
        p.element.membrane_thickness = pick(intervals.membrane_thickness, 3);
        const auto curve = predict_sweep(p, env, grid, incidence_angle, mode).response;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            lo[i] = std::min(lo[i], curve.value(i));
            hi[i] = std::max(hi[i], curve.value(i));
        }
    }
    return {FrequencyResponse(Unit::Pa_per_g, grid, std::move(lo)), std::move(nominal.response),
            FrequencyResponse(Unit::Pa_per_g, grid, std::move(hi)), std::move(warnings)};
}

}  // namespace micvib

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fit.hpp"
#include "measurement.hpp"
#include "oracle/oracle.hpp"
#include "rig.hpp"
#include "support.hpp"

using namespace micvib;
using support::code_of;

namespace {

MicPackage array_package(double dp = 10e-3)
{
    SensingElement e;
    e.natural_frequency = 25000.0;
    return {"array", ArrayOfOnePorts{1.25e-3, 1.25e-3, dp, std::nullopt}, e};
}

MicPackage soundskrit()
{
    SensingElement e;
    e.natural_frequency = 4500.0;
    return {"soundskrit", TwoPort{1.25e-3, 1.25e-3, 2.5e-3, std::nullopt}, e};
}

FrequencyResponse law_curve(const FrequencyGrid& grid, double l_air, double dp, double noise = 0.0,
                            std::uint64_t seed = 1)
{
    std::vector<double> v;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * grid[i];
        v.push_back(9.81 * (2300.0 * 1e-6 + 1.204 * l_air) * 343.0 / (dp * w) * noise_factor(seed, 5, i, noise));
    }
    return FrequencyResponse(Unit::Pa_per_g, grid, v);
}

}  // namespace

TEST_CASE("golden section finds a parabola minimum")
{
    const auto r = golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-10);
    CHECK(r.converged);
    CHECK(std::abs(r.x - 0.3) < 1e-9);
    const auto capped = golden_section_minimize([](double x) { return x * x; }, -1.0, 2.0, 1e-12, 3);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 3);
    CHECK(code_of([] { golden_section_minimize([](double x) { return x; }, 1.0, 1.0, 1e-9); }) ==
          ErrorCode::invalid_argument);
}

TEST_CASE("exact recovery of a synthetic effective length")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 200);
    const auto curve = law_curve(grid, 2e-3, 10e-3);
    const auto fit = fit_effective_length(curve, array_package(), Environment{});
    CHECK(fit.converged);
    CHECK(oracle::rel_err(fit.effective_length, 2e-3) <= 1e-6);
    CHECK(fit.residual_rms_log < 1e-9);
    CHECK(fit.points_used == 200);
    CHECK(fit.warnings.empty());

    // a curve built through the library model, for a two-port
    auto pkg = soundskrit();
    pkg.set_effective_length(3.3e-3);
    const auto pred = predict_sweep(pkg, Environment{}, grid, 0.0, ModelMode::full).response;
    const auto f2 = fit_effective_length(pred, soundskrit(), Environment{});
    CHECK(oracle::rel_err(f2.effective_length, 3.3e-3) <= 1e-6);
}

TEST_CASE("noisy recovery")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 200);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto curve = law_curve(grid, 2e-3, 10e-3, 0.05, seed);
        const auto fit = fit_effective_length(curve, array_package(), Environment{});
        CHECK(oracle::rel_err(fit.effective_length, 2e-3) <= 0.10);
        CHECK(fit.residual_rms_log < poor_fit_residual);
    }
}

TEST_CASE("fit agrees with closed-form and brute-force oracles")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 120);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto curve = law_curve(grid, 1.7e-3, 10e-3, 0.08, seed);
        const auto fit = fit_effective_length(curve, array_package(), Environment{});
        const auto f = curve.frequencies_vector();
        const std::vector<double> s(curve.values().begin(), curve.values().end());
        const double closed = oracle::closed_form_effective_length(f, s, 1.204, 343.0, 10e-3, 2300.0, 1e-6);
        CHECK(oracle::rel_err(fit.effective_length, closed) <= 1e-6);
        const double brute = oracle::brute_force_effective_length(f, s, 1.204, 343.0, 10e-3, 2300.0, 1e-6, 1e-4,
                                                                  1e-1, 20000);
        CHECK(oracle::rel_err(fit.effective_length, brute) <= 1e-3);
    }
}

TEST_CASE("fit does not depend on grid density for a clean curve")
{
    for (std::size_t n : {3u, 10u, 200u, 2000u}) {
        const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, n);
        const auto fit = fit_effective_length(law_curve(grid, 2e-3, 10e-3), array_package(), Environment{});
        CHECK(oracle::rel_err(fit.effective_length, 2e-3) <= 1e-6);
    }
}

TEST_CASE("non 1/f curve is flagged")
{
    // tilted away from 1/f by sqrt(f) about the band centre
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 50);
    const auto law = law_curve(grid, 2e-3, 10e-3);
    std::vector<double> tilted;
    for (std::size_t i = 0; i < grid.size(); ++i) tilted.push_back(law.value(i) * std::sqrt(grid[i] / 200.0));
    const auto fit = fit_effective_length(FrequencyResponse(Unit::Pa_per_g, grid, tilted), array_package(), Environment{});
    REQUIRE(fit.warnings.size() == 1);
    CHECK(fit.warnings[0].code == "fit_residual_large");
    CHECK(fit.warnings[0].value > fit.warnings[0].limit);
    CHECK(fit.residual_rms_log > poor_fit_residual);
}

TEST_CASE("fit error paths")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 50);
    const auto curve = law_curve(grid, 2e-3, 10e-3);
    SensingElement e;
    e.natural_frequency = 39000.0;
    const MicPackage one{"one", OnePort{1.25e-3, 1.25e-3}, e};
    CHECK(code_of([&] { fit_effective_length(curve, one, Environment{}); }) == ErrorCode::wrong_variant);
    CHECK(code_of([&] { fit_effective_length(flat_response(Unit::V_per_g, grid, 1.0), array_package(), Environment{}); }) ==
          ErrorCode::unit_mismatch);
    CHECK(code_of([&] {
              fit_effective_length(law_curve(FrequencyGrid({20.0, 30.0}), 2e-3, 10e-3), array_package(), Environment{});
          }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { fit_effective_length(flat_response(Unit::Pa_per_g, grid, 0.0), array_package(), Environment{}); }) ==
          ErrorCode::degenerate);
    // far larger than any length inside [dp/100, 10 dp]
    CHECK(code_of([&] { fit_effective_length(law_curve(grid, 10.0, 10e-3), array_package(), Environment{}); }) ==
          ErrorCode::non_convergence);
    // and far smaller: membrane mass already exceeds the curve
    std::vector<double> tiny;
    for (double v : curve.values()) tiny.push_back(v * 1e-3);
    CHECK(code_of([&] { fit_effective_length(FrequencyResponse(Unit::Pa_per_g, grid, tiny), array_package(), Environment{}); }) ==
          ErrorCode::non_convergence);
}

TEST_CASE("envelope around the default intervals")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 40);
    const auto env = envelope(soundskrit(), Environment{}, grid, default_parameter_intervals(), ModelMode::full);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double up = env.upper.value(i) / env.nominal.value(i);
        const double lo = env.lower.value(i) / env.nominal.value(i);
        CHECK(up == doctest::Approx(1.527683615819209).epsilon(1e-12));
        CHECK(lo == doctest::Approx(0.6418079096045197).epsilon(1e-12));
        CHECK(env.lower.value(i) <= env.nominal.value(i));
        CHECK(env.nominal.value(i) <= env.upper.value(i));
    }
    CHECK(env.upper.unit() == Unit::Pa_per_g);
    CHECK(env.warnings.empty());
}

TEST_CASE("envelope bounds every sampled interior point")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 12);
    const auto iv = default_parameter_intervals();
    const auto env = envelope(soundskrit(), Environment{}, grid, iv, ModelMode::full);
    for (int j = 0; j < 81; ++j) {
        const double t[4] = {(j % 3) / 2.0, (j / 3 % 3) / 2.0, (j / 9 % 3) / 2.0, (j / 27 % 3) / 2.0};
        auto p = soundskrit();
        auto& g = std::get<TwoPort>(p.geometry);
        g.l1 = iv.l1.lower + t[0] * (iv.l1.upper - iv.l1.lower);
        g.l2 = iv.l2.lower + t[1] * (iv.l2.upper - iv.l2.lower);
        p.element.membrane_density = iv.membrane_density.lower + t[2] * (iv.membrane_density.upper - iv.membrane_density.lower);
        p.element.membrane_thickness =
            iv.membrane_thickness.lower + t[3] * (iv.membrane_thickness.upper - iv.membrane_thickness.lower);
        const auto c = predict_sweep(p, Environment{}, grid, 0.0, ModelMode::full).response;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(c.value(i) >= env.lower.value(i) * (1.0 - 1e-14));
            CHECK(c.value(i) <= env.upper.value(i) * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("degenerate and widening intervals")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 10);
    const ParameterIntervals point{{1.25e-3, 1.25e-3}, {1.25e-3, 1.25e-3}, {2300.0, 2300.0}, {1e-6, 1e-6}};
    const auto e0 = envelope(soundskrit(), Environment{}, grid, point, ModelMode::full);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(oracle::rel_err(e0.lower.value(i), e0.nominal.value(i)) <= 1e-15);
        CHECK(oracle::rel_err(e0.upper.value(i), e0.nominal.value(i)) <= 1e-15);
    }

    const auto narrow = envelope(soundskrit(), Environment{}, grid, default_parameter_intervals(), ModelMode::full);
    ParameterIntervals wide = default_parameter_intervals();
    wide.l1 = {0.8e-3, 2e-3};
    wide.membrane_thickness = {0.3e-6, 2e-6};
    const auto w = envelope(soundskrit(), Environment{}, grid, wide, ModelMode::full);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(w.lower.value(i) <= narrow.lower.value(i));
        CHECK(w.upper.value(i) >= narrow.upper.value(i));
    }

    ParameterIntervals bad = default_parameter_intervals();
    bad.l2 = {2e-3, 1e-3};
    CHECK(code_of([&] { envelope(soundskrit(), Environment{}, grid, bad, ModelMode::full); }) == ErrorCode::invalid_argument);
}

TEST_CASE("envelope warnings")
{
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 10);
    auto p = soundskrit();
    std::get<TwoPort>(p.geometry).l1 = 3e-3;
    const auto e = envelope(p, Environment{}, grid, default_parameter_intervals(), ModelMode::full);
    REQUIRE(e.warnings.size() == 1);
    CHECK(e.warnings[0].code == "nominal_outside_intervals");
    CHECK(e.warnings[0].parameter == "l1_m");
    CHECK(e.warnings[0].limit == 1.5e-3);

    auto a = array_package();
    a.set_effective_length(2e-3);
    const auto ea = envelope(a, Environment{}, grid, default_parameter_intervals(), ModelMode::full);
    bool held = false;
    for (const auto& w : ea.warnings) held = held || w.code == "effective_length_held_fixed";
    CHECK(held);
}

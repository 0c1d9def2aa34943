#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "measurement.hpp"
#include "oracle/oracle.hpp"
#include "rig.hpp"
#include "support.hpp"

using namespace micvib;
using support::code_of;

TEST_CASE("plate stiffness and natural frequency")
{
    const PlateSpec p;
    CHECK(plate_stiffness(p) == doctest::Approx(806.5873639322188).epsilon(1e-12));
    CHECK(plate_stiffness(p) == doctest::Approx(806.6).epsilon(1e-4));
    CHECK(plate_natural_frequency(p) == doctest::Approx(2450.084551780258).epsilon(1e-12));

    PlateSpec thick = p;
    thick.thickness *= 2.0;
    CHECK(oracle::rel_err(plate_stiffness(thick), 8.0 * plate_stiffness(p)) <= 1e-14);
    CHECK(oracle::rel_err(plate_natural_frequency(thick), 2.0 * plate_natural_frequency(p)) <= 1e-14);

    PlateSpec wide = p;
    wide.radius *= 2.0;
    CHECK(oracle::rel_err(plate_natural_frequency(wide), plate_natural_frequency(p) / 4.0) <= 1e-14);

    PlateSpec free = p;
    free.poisson_ratio = 0.0;
    CHECK(oracle::rel_err(plate_stiffness(free), p.youngs_modulus * std::pow(p.thickness, 3) / 12.0) <= 1e-15);

    PlateSpec bad = p;
    bad.poisson_ratio = 1.0;
    CHECK(code_of([&] { plate_stiffness(bad); }) == ErrorCode::invalid_argument);
    bad.poisson_ratio = 1.5;
    CHECK(code_of([&] { plate_stiffness(bad); }) == ErrorCode::invalid_argument);
    bad.poisson_ratio = -0.1;
    CHECK(code_of([&] { plate_stiffness(bad); }) == ErrorCode::invalid_argument);
    // physical plates must also have mu < 0.5
    bad.poisson_ratio = 0.6;
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::invalid_argument);
    bad = p;
    bad.thickness = 0.0;
    CHECK(code_of([&] { plate_natural_frequency(bad); }) == ErrorCode::invalid_argument);
}

TEST_CASE("shaker acceleration shape")
{
    const ShakerSpec s;
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 50);

    const auto zero = shaker_acceleration(s, 0.0, grid);
    for (double v : zero.values()) CHECK(v == 0.0);

    const auto one = shaker_acceleration(s, 0.1, grid);
    const auto three = shaker_acceleration(s, 0.3, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(oracle::rel_err(three.value(i), 3.0 * one.value(i)) <= 1e-14);

    const auto pair = shaker_acceleration(s, 0.1, FrequencyGrid({20.0, 400.0}));
    CHECK(pair.value(0) / pair.value(1) == doctest::Approx(0.19663594902243625).epsilon(1e-12));
    CHECK(pair.value(0) / pair.value(1) == doctest::Approx(0.196).epsilon(5e-3));

    CHECK(code_of([&] { shaker_acceleration(s, -1.0, grid); }) == ErrorCode::invalid_argument);
    ShakerSpec bad = s;
    bad.rolloff_order = 0;
    CHECK(code_of([&] { shaker_acceleration(bad, 0.1, grid); }) == ErrorCode::invalid_argument);
}

TEST_CASE("shaker peak sits at the plate resonance")
{
    const ShakerSpec s;
    const auto grid = FrequencyGrid::logarithmic(1000.0, 5000.0, 1000);
    const auto a = shaker_acceleration(s, 0.1, grid);
    const auto it = std::max_element(a.values().begin(), a.values().end());
    const auto i = static_cast<std::size_t>(it - a.values().begin());
    const double step = grid[1] / grid[0];
    const double fp = plate_natural_frequency(s.plate);
    CHECK(grid[i] >= fp / step);
    CHECK(grid[i] <= fp * step);
}

TEST_CASE("noise is deterministic and bounded")
{
    ShakerSpec s;
    s.noise_fraction = 0.05;
    s.seed = 99;
    const auto grid = FrequencyGrid::logarithmic(20.0, 2000.0, 200);
    const auto a = shaker_acceleration(s, 0.1, grid);
    const auto b = shaker_acceleration(s, 0.1, grid);
    CHECK(a == b);
    ShakerSpec clean = s;
    clean.noise_fraction = 0.0;
    const auto c = shaker_acceleration(clean, 0.1, grid);
    s.seed = 100;
    const auto d = shaker_acceleration(s, 0.1, grid);
    bool differs = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = a.value(i) / c.value(i);
        CHECK(k >= 1.0 / 1.05 - 1e-15);
        CHECK(k <= 1.05 + 1e-15);
        differs = differs || d.value(i) != a.value(i);
    }
    CHECK(differs);

    double lo = 1.0, hi = 1.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double k = noise_factor(7, 3, i, 0.05);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    CHECK(lo < 0.955);
    CHECK(hi > 1.045);
    CHECK(noise_factor(7, 3, 42, 0.0) == 1.0);
    CHECK(noise_factor(7, 3, 42, 0.05) == noise_factor(7, 3, 42, 0.05));
}

namespace {

struct Synth {
    FrequencyGrid grid = FrequencyGrid::logarithmic(20.0, 2000.0, 60);
    FrequencyResponse model;
    FrequencyResponse acoustic;
    FrequencyResponse accel;

    Synth()
        : model(Unit::Pa_per_g, grid, values([](double f) { return 1137.0 / f; })),
          acoustic(flat_response(Unit::V_per_Pa, grid, db_to_linear(-29.0))),
          accel(shaker_acceleration(ShakerSpec{}, 0.2, grid))
    {
    }

    std::vector<double> values(auto&& fn) const
    {
        std::vector<double> v;
        for (double f : grid.frequencies()) v.push_back(fn(f));
        return v;
    }
};

}  // namespace

TEST_CASE("synthesized sweep recovers the model")
{
    const Synth k;
    const auto clean = synthesize_mic_sweep(k.model, k.acoustic, k.accel, 0.0, 1);
    const auto back = acoustically_refer(clean.v_per_g, k.acoustic);
    for (std::size_t i = 0; i < k.grid.size(); ++i) CHECK(oracle::rel_err(back.value(i), k.model.value(i)) <= 1e-12);

    // route through voltage / measured acceleration too
    const auto vg = divide_per_tone(clean.voltage, k.accel);
    CHECK(vg.unit() == Unit::V_per_g);
    for (std::size_t i = 0; i < k.grid.size(); ++i) CHECK(oracle::rel_err(vg.value(i), clean.v_per_g.value(i)) <= 1e-15);

    const auto noisy = synthesize_mic_sweep(k.model, k.acoustic, k.accel, 0.05, 17);
    const auto nb = acoustically_refer(noisy.v_per_g, k.acoustic);
    for (std::size_t i = 0; i < k.grid.size(); ++i) CHECK(oracle::rel_err(nb.value(i), k.model.value(i)) <= 0.05 + 1e-12);
    CHECK(synthesize_mic_sweep(k.model, k.acoustic, k.accel, 0.05, 17).voltage == noisy.voltage);
}

TEST_CASE("zero acceleration points are flagged, not divided")
{
    const Synth k;
    auto a = k.accel.values();
    std::vector<double> accel(a.begin(), a.end());
    accel[0] = 0.0;
    accel[5] = 0.0;
    const auto r = synthesize_mic_sweep(k.model, k.acoustic, FrequencyResponse(Unit::g_accel, k.grid, accel), 0.0, 1);
    CHECK(r.undefined_frequencies.size() == 2);
    CHECK(r.undefined_frequencies[0] == k.grid[0]);
    CHECK(r.undefined_frequencies[1] == k.grid[5]);
    CHECK(r.v_per_g.size() == k.grid.size() - 2);
    CHECK(r.voltage.value(0) == 0.0);
    for (double v : r.v_per_g.values()) CHECK(std::isfinite(v));
}

TEST_CASE("leakage floor decides the on/off verdict")
{
    const Synth k;
    // off the shaker the mic sees only the airborne floor
    const FrequencyResponse still(Unit::Pa_per_g, k.grid, std::vector<double>(k.grid.size(), 1e-15));
    const auto on = synthesize_mic_sweep(k.model, k.acoustic, k.accel, 0.0, 1, 1e-3);
    const auto off = synthesize_mic_sweep(still, k.acoustic, k.accel, 0.0, 1, 1e-3);
    const auto s = on_off_ratio(on.v_per_g, off.v_per_g);
    CHECK(s.ratio.size() == k.grid.size());
    CHECK(s.verdict == OnOffVerdict::vibration_dominated);

    const auto loud_on = synthesize_mic_sweep(k.model, k.acoustic, k.accel, 0.0, 1, 1e4);
    const auto loud_off = synthesize_mic_sweep(still, k.acoustic, k.accel, 0.0, 1, 1e4);
    const auto l = on_off_ratio(loud_on.v_per_g, loud_off.v_per_g);
    CHECK(l.median < leakage_ratio_threshold);
    CHECK(l.verdict == OnOffVerdict::leakage_dominated);
}

TEST_CASE("synthesis input checks")
{
    const Synth k;
    CHECK(code_of([&] { synthesize_mic_sweep(k.acoustic, k.acoustic, k.accel, 0.0, 1); }) == ErrorCode::unit_mismatch);
    const auto other = flat_response(Unit::V_per_Pa, FrequencyGrid::logarithmic(20.0, 2000.0, 61), 0.03);
    CHECK(code_of([&] { synthesize_mic_sweep(k.model, other, k.accel, 0.0, 1); }) == ErrorCode::grid_mismatch);
    CHECK(code_of([&] { synthesize_mic_sweep(k.model, k.acoustic, k.accel, -0.1, 1); }) == ErrorCode::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "micvib/micvib.h"

namespace {

mv_element element(double fn)
{
    return {2300.0, 1e-6, 1e-6, fn, 0.707};
}

struct Pkg {
    mv_package* p = nullptr;
    ~Pkg() { mv_package_free(p); }
};

struct Resp {
    mv_response* r = nullptr;
    ~Resp() { mv_response_free(r); }
};

Pkg two_port()
{
    Pkg k;
    const auto e = element(4500.0);
    REQUIRE(mv_package_create(MV_PACKAGE_TWO_PORT, "tp", 1.25e-3, 1.25e-3, 2.5e-3, 0.0, &e, &k.p) == MV_OK);
    return k;
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    REQUIRE(mv_grid_fill(lo, hi, n, 1, g.data()) == MV_OK);
    return g;
}

std::filesystem::path scratch()
{
    auto d = std::filesystem::temp_directory_path() / "micvib_capi_tests";
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("status names and classification")
{
    CHECK(std::string(mv_status_name(MV_OK)) == "ok");
    CHECK(std::string(mv_status_name(MV_E_OFF_AXIS_NULL)) == "off_axis_null");
    CHECK(std::string(mv_status_name(MV_E_INTERNAL)) == "internal_error");
    CHECK_FALSE(mv_status_is_numerical(MV_E_SCHEMA));
    CHECK_FALSE(mv_status_is_numerical(MV_E_INTERNAL));
    for (mv_status s : {MV_E_POLE, MV_E_OFF_AXIS_NULL, MV_E_NON_CONVERGENCE, MV_E_DEGENERATE, MV_E_ZERO_DENOMINATOR})
        CHECK(mv_status_is_numerical(s));
    CHECK(std::string(mv_version()) == MICVIB_TEST_VERSION);
}

TEST_CASE("units")
{
    mv_unit u = MV_UNIT_UNSPECIFIED;
    CHECK(mv_unit_parse("Pa_per_g", &u) == MV_OK);
    CHECK(u == MV_UNIT_PA_PER_G);
    CHECK(std::string(mv_unit_name(MV_UNIT_VOLT)) == "V");
    CHECK(mv_unit_parse("parsecs", &u) == MV_E_UNKNOWN_UNIT);
    CHECK(mv_unit_parse(nullptr, &u) == MV_E_INVALID_ARGUMENT);
}

TEST_CASE("null arguments are rejected, not crashed on")
{
    double x = 0.0;
    CHECK(mv_mechanical_response(nullptr, 1.0, &x) == MV_E_INVALID_ARGUMENT);
    CHECK(std::string(mv_last_error()).find("NULL") != std::string::npos);
    CHECK(mv_s_pa_per_g_two_port(nullptr, nullptr, 1000.0, 0.0, MV_MODE_FULL, &x) == MV_E_INVALID_ARGUMENT);
    auto k = two_port();
    CHECK(mv_s_pa_per_g_two_port(k.p, nullptr, 1000.0, 0.0, MV_MODE_FULL, nullptr) == MV_E_INVALID_ARGUMENT);
    mv_package* p = nullptr;
    CHECK(mv_package_load(nullptr, &p) == MV_E_INVALID_ARGUMENT);
    CHECK(p == nullptr);
    mv_package_free(nullptr);
    mv_response_free(nullptr);
}

TEST_CASE("point models through the C boundary")
{
    auto k = two_port();
    const auto env = mv_environment_default();
    double v = 0.0;
    // a NULL environment means the defaults
    CHECK(mv_s_pa_per_g_two_port(k.p, nullptr, 1000.0, 0.0, MV_MODE_FULL, &v) == MV_OK);
    CHECK(v == doctest::Approx(1.1374642908961285).epsilon(1e-13));
    CHECK(mv_s_pa_per_g_two_port(k.p, &env, 1000.0, 0.0, MV_MODE_AIR_ONLY, &v) == MV_OK);
    CHECK(v == doctest::Approx(0.6447773099053382).epsilon(1e-13));

    double mpa = 0.0, mg = 0.0;
    CHECK(mv_displacement_per_pascal(k.p, &env, 1000.0, 0.0, &mpa) == MV_OK);
    CHECK(mv_displacement_per_g(k.p, &env, 1000.0, MV_MODE_FULL, &mg) == MV_OK);
    CHECK(mg / mpa == doctest::Approx(1.1374642908961285).epsilon(1e-13));

    double ratio = 0.0;
    int valid = -1;
    CHECK(mv_pressure_difference_ratio(2.5e-3, 1000.0, &env, 0.0, &ratio, &valid) == MV_OK);
    CHECK(ratio == doctest::Approx(0.04579581127681914).epsilon(1e-13));
    CHECK(valid == 1);
    CHECK(mv_pressure_difference_ratio(12e-3, 20000.0, &env, 0.0, &ratio, &valid) == MV_OK);
    CHECK(valid == 0);

    double kg = 0.0;
    CHECK(mv_lumped_mass_two_port(k.p, &env, MV_MODE_FULL, &kg) == MV_OK);
    CHECK(kg == doctest::Approx(5.31e-9).epsilon(1e-13));

    CHECK(mv_s_pa_per_g_two_port(k.p, &env, 0.0, 0.0, MV_MODE_FULL, &v) == MV_E_POLE);
    CHECK(mv_s_pa_per_g_two_port(k.p, &env, 1000.0, std::acos(0.0), MV_MODE_FULL, &v) == MV_E_OFF_AXIS_NULL);
    CHECK(mv_s_pa_per_g_one_port(k.p, &env, MV_MODE_FULL, &v) == MV_E_WRONG_VARIANT);
}

TEST_CASE("package lifecycle")
{
    Pkg arr;
    const auto e = element(25000.0);
    REQUIRE(mv_package_create(MV_PACKAGE_ARRAY_OF_ONE_PORTS, "arr", 1.25e-3, 1.25e-3, 10e-3, 0.0, &e, &arr.p) == MV_OK);
    CHECK(mv_package_effective_length(arr.p) == 0.0);
    double v = 0.0;
    CHECK(mv_s_pa_per_g_two_port(arr.p, nullptr, 1000.0, 0.0, MV_MODE_FULL, &v) == MV_E_MISSING_EFFECTIVE_LENGTH);
    CHECK(mv_package_set_effective_length(arr.p, 2e-3) == MV_OK);
    CHECK(mv_s_pa_per_g_two_port(arr.p, nullptr, 1000.0, 0.0, MV_MODE_FULL, &v) == MV_OK);

    Pkg copy;
    REQUIRE(mv_package_clone(arr.p, &copy.p) == MV_OK);
    CHECK(mv_package_set_effective_length(copy.p, 0.0) == MV_OK);
    CHECK(mv_package_effective_length(arr.p) == 2e-3);
    CHECK(mv_package_effective_length(copy.p) == 0.0);

    std::size_t needed = 0;
    CHECK(mv_package_to_json(arr.p, nullptr, 0, &needed) == MV_E_BUFFER_TOO_SMALL);
    std::string text(needed, '\0');
    char tiny[4];
    CHECK(mv_package_to_json(arr.p, tiny, sizeof tiny, &needed) == MV_E_BUFFER_TOO_SMALL);
    REQUIRE(mv_package_to_json(arr.p, text.data(), text.size(), &needed) == MV_OK);
    CHECK(text.back() == '\0');

    Pkg back;
    REQUIRE(mv_package_parse_json(text.c_str(), &back.p) == MV_OK);
    CHECK(mv_package_get_type(back.p) == MV_PACKAGE_ARRAY_OF_ONE_PORTS);
    CHECK(mv_package_effective_length(back.p) == 2e-3);
    CHECK(mv_package_port_spacing(back.p) == 10e-3);

    Pkg bad;
    CHECK(mv_package_create(MV_PACKAGE_TWO_PORT, "neg", -1.0, 1e-3, 1e-3, 0.0, &e, &bad.p) == MV_E_INVALID_ARGUMENT);
    CHECK(bad.p == nullptr);
    CHECK(mv_package_parse_json("{\"label\": 1}", &bad.p) == MV_E_SCHEMA);
    CHECK(mv_package_parse_json("{", &bad.p) == MV_E_PARSE);
}

TEST_CASE("presets and sensitivities")
{
    CHECK(std::string(mv_preset_directory()).size() > 0);
    REQUIRE(mv_preset_count() >= 5);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < mv_preset_count(); ++i) names.emplace_back(mv_preset_name(i));
    CHECK(mv_preset_name(mv_preset_count()) == nullptr);
    CHECK(std::find(names.begin(), names.end(), "soundskrit") != names.end());

    Pkg s;
    REQUIRE(mv_package_load("soundskrit", &s.p) == MV_OK);
    CHECK(mv_package_get_type(s.p) == MV_PACKAGE_TWO_PORT);
    CHECK(mv_package_port_spacing(s.p) == 2.5e-3);
    double db = 0.0;
    CHECK(mv_package_acoustic_sensitivity_db(s.p, &db) == MV_OK);
    CHECK(db == -29.3);
    CHECK_FALSE(mv_package_has_environment_override(s.p));

    Pkg missing;
    CHECK(mv_package_load("no_such_preset", &missing.p) == MV_E_NOT_FOUND);

    CHECK(mv_sensitivity_count() >= 6);
    const char *name = nullptr, *mic = nullptr, *cond = nullptr;
    double ds = 0.0, meas = 0.0;
    CHECK(mv_sensitivity_entry(0, &name, &mic, &cond, &ds, &meas) == MV_OK);
    CHECK(std::strlen(name) > 0);
    CHECK(mv_sensitivity_entry(9999, &name, &mic, &cond, &ds, &meas) == MV_E_INVALID_ARGUMENT);
    CHECK(mv_sensitivity_lookup("tdk", &db) == MV_OK);
    CHECK(db == -52.6);
    CHECK(mv_sensitivity_lookup("nope", &db) == MV_E_NOT_FOUND);
}

TEST_CASE("responses, warnings and metadata")
{
    auto k = two_port();
    Pkg h;
    REQUIRE(mv_package_load("harman", &h.p) == MV_OK);
    const auto g = grid(20.0, 20000.0, 60);
    Resp r;
    REQUIRE(mv_predict_sweep(h.p, nullptr, g.data(), g.size(), 0.0, MV_MODE_FULL, &r.r) == MV_OK);
    const auto n = mv_response_warning_count(r.r);
    CHECK(n > 0);
    const double c = mv_environment_default().speed_of_sound;
    for (std::size_t i = 0; i < n; ++i) {
        mv_warning w{};
        REQUIRE(mv_response_warning(r.r, i, &w) == MV_OK);
        CHECK(std::string(w.code) == "port_spacing_exceeds_wavelength_tenth");
        CHECK(w.value == 12e-3);
        CHECK(w.limit == doctest::Approx(c / (10.0 * w.frequency_hz)).epsilon(1e-14));
        CHECK(w.value > w.limit);
    }
    mv_warning w{};
    CHECK(mv_response_warning(r.r, n, &w) == MV_E_INVALID_ARGUMENT);

    CHECK(mv_response_metadata(r.r, "nothing") == nullptr);
    CHECK(mv_response_set_metadata(r.r, "mic_label", "harman") == MV_OK);
    CHECK(std::string(mv_response_metadata(r.r, "mic_label")) == "harman");

    Resp copy;
    REQUIRE(mv_response_clone(r.r, &copy.r) == MV_OK);
    CHECK(mv_response_warning_count(copy.r) == n);

    const double f[] = {1.0, 2.0, 2.0};
    const double v[] = {1.0, 1.0, 1.0};
    Resp bad;
    CHECK(mv_response_create(MV_UNIT_V_PER_G, f, v, 3, &bad.r) == MV_E_NON_MONOTONIC);
    CHECK(mv_response_create(static_cast<mv_unit>(42), f, v, 2, &bad.r) == MV_E_UNKNOWN_UNIT);
    CHECK(mv_grid_fill(100.0, 10.0, 5, 1, std::vector<double>(5).data()) == MV_E_INVALID_ARGUMENT);
}

TEST_CASE("sweep files through the C boundary")
{
    const auto dir = scratch();
    const auto g = grid(20.0, 2000.0, 30);
    Resp flat;
    REQUIRE(mv_flat_response(MV_UNIT_V_PER_PA, g.data(), g.size(), 0.0354, &flat.r) == MV_OK);
    CHECK(std::string(mv_response_metadata(flat.r, "flat_expansion")) == "true");
    const auto path = (dir / "flat.csv").string();
    REQUIRE(mv_sweep_save(flat.r, path.c_str()) == MV_OK);

    Resp back;
    REQUIRE(mv_sweep_load(path.c_str(), MV_UNIT_UNSPECIFIED, &back.r) == MV_OK);
    CHECK(mv_response_unit(back.r) == MV_UNIT_V_PER_PA);
    CHECK(std::memcmp(mv_response_values(back.r), mv_response_values(flat.r), g.size() * sizeof(double)) == 0);

    Resp as;
    CHECK(mv_sweep_load_as(path.c_str(), MV_UNIT_V_PER_G, &as.r) == MV_E_UNIT_MISMATCH);
    {
        std::ofstream plain(dir / "plain.csv");
        plain << "frequency_hz,value\n20,1\n40,2\n";
    }
    REQUIRE(mv_sweep_load_as((dir / "plain.csv").string().c_str(), MV_UNIT_V_PER_G, &as.r) == MV_OK);
    CHECK(mv_response_unit(as.r) == MV_UNIT_V_PER_G);
    Resp undeclared;
    CHECK(mv_sweep_load((dir / "plain.csv").string().c_str(), MV_UNIT_UNSPECIFIED, &undeclared.r) ==
          MV_E_UNKNOWN_UNIT);

    Resp parsed;
    CHECK(mv_sweep_parse("frequency_hz,value\n10,1\n5,1\n", MV_UNIT_V_PER_G, &parsed.r) == MV_E_NON_MONOTONIC);
    CHECK(mv_sweep_load("/nonexistent/x.csv", MV_UNIT_V_PER_G, &parsed.r) == MV_E_IO);

    std::size_t needed = 0;
    CHECK(mv_sweep_to_csv(flat.r, nullptr, 0, &needed) == MV_E_BUFFER_TOO_SMALL);
    std::string csv(needed, '\0');
    REQUIRE(mv_sweep_to_csv(flat.r, csv.data(), csv.size(), &needed) == MV_OK);
    CHECK(csv.rfind("# unit: V_per_Pa", 0) == 0);
}

TEST_CASE("measurement operations through the C boundary")
{
    const auto g = grid(20.0, 2000.0, 25);
    Resp raw, ac, spag;
    REQUIRE(mv_flat_response(MV_UNIT_V_PER_G, g.data(), g.size(), 0.1, &raw.r) == MV_OK);
    REQUIRE(mv_flat_response(MV_UNIT_V_PER_PA, g.data(), g.size(), 0.05, &ac.r) == MV_OK);
    REQUIRE(mv_acoustically_refer(raw.r, ac.r, &spag.r) == MV_OK);
    CHECK(mv_response_unit(spag.r) == MV_UNIT_PA_PER_G);
    CHECK(mv_response_values(spag.r)[7] == doctest::Approx(2.0));
    Resp wrong;
    CHECK(mv_acoustically_refer(ac.r, raw.r, &wrong.r) == MV_E_UNIT_MISMATCH);

    const double narrow[] = {100.0, 500.0};
    Resp band;
    REQUIRE(mv_flat_response(MV_UNIT_V_PER_PA, narrow, 2, 0.05, &band.r) == MV_OK);
    std::vector<double> common(g.size());
    std::size_t count = 0;
    REQUIRE(mv_common_grid(raw.r, band.r, common.data(), common.size(), &count) == MV_OK);
    CHECK(count > 0);
    CHECK(count < g.size());
    CHECK(common[0] >= 100.0);
    CHECK(mv_common_grid(raw.r, band.r, common.data(), 0, &count) == MV_E_BUFFER_TOO_SMALL);

    Resp re;
    CHECK(mv_resample(raw.r, narrow, 2, &re.r) == MV_OK);
    const double outside[] = {10.0, 100.0};
    Resp ex;
    CHECK(mv_resample(raw.r, outside, 2, &ex.r) == MV_E_EXTRAPOLATION);

    double db = 0.0, lin = 0.0;
    CHECK(mv_db_to_linear(-38.0, &lin) == MV_OK);
    CHECK(lin == doctest::Approx(0.012589254117941675).epsilon(1e-14));
    CHECK(mv_linear_to_db(lin, &db) == MV_OK);
    CHECK(db == doctest::Approx(-38.0).epsilon(1e-14));
    CHECK(mv_linear_to_db(0.0, &db) == MV_E_INVALID_ARGUMENT);

    Resp on, ratio;
    std::vector<double> five(g.size(), 0.5);
    REQUIRE(mv_response_create(MV_UNIT_V_PER_G, g.data(), five.data(), g.size(), &on.r) == MV_OK);
    double median = 0.0;
    mv_verdict verdict = MV_VERDICT_LEAKAGE_DOMINATED;
    REQUIRE(mv_on_off_ratio(on.r, raw.r, &ratio.r, &median, &verdict) == MV_OK);
    CHECK(median == doctest::Approx(5.0));
    CHECK(verdict == MV_VERDICT_VIBRATION_DOMINATED);
    CHECK(mv_response_unit(ratio.r) == MV_UNIT_DIMENSIONLESS);
}

TEST_CASE("rig, fit and envelope through the C boundary")
{
    const auto shaker = mv_shaker_default();
    double d = 0.0, fp = 0.0;
    CHECK(mv_plate_stiffness(&shaker.plate, &d) == MV_OK);
    CHECK(d == doctest::Approx(806.5873639322188).epsilon(1e-12));
    CHECK(mv_plate_natural_frequency(&shaker.plate, &fp) == MV_OK);
    CHECK(fp == doctest::Approx(2450.084551780258).epsilon(1e-12));
    mv_plate bad = shaker.plate;
    bad.poisson_ratio = 1.0;
    CHECK(mv_plate_stiffness(&bad, &d) == MV_E_INVALID_ARGUMENT);

    const auto g = grid(20.0, 2000.0, 40);
    Resp accel;
    REQUIRE(mv_shaker_acceleration(&shaker, 0.1, g.data(), g.size(), &accel.r) == MV_OK);
    CHECK(mv_response_unit(accel.r) == MV_UNIT_G_ACCEL);

    Pkg arr;
    REQUIRE(mv_package_load("winfrey_array", &arr.p) == MV_OK);
    Resp model;
    REQUIRE(mv_predict_sweep(arr.p, nullptr, g.data(), g.size(), 0.0, MV_MODE_FULL, &model.r) == MV_OK);
    Resp ac;
    REQUIRE(mv_flat_response(MV_UNIT_V_PER_PA, g.data(), g.size(), 0.02, &ac.r) == MV_OK);
    Resp volts, vg;
    REQUIRE(mv_synthesize_mic_sweep(model.r, ac.r, accel.r, 0.0, 1, 0.0, &volts.r, &vg.r) == MV_OK);
    Resp spag;
    REQUIRE(mv_acoustically_refer(vg.r, ac.r, &spag.r) == MV_OK);

    Pkg fresh;
    const auto e = element(25000.0);
    REQUIRE(mv_package_create(MV_PACKAGE_ARRAY_OF_ONE_PORTS, "a", 1.25e-3, 1.25e-3, 10e-3, 0.0, &e, &fresh.p) == MV_OK);
    mv_fit_result fit{};
    REQUIRE(mv_fit_effective_length(spag.r, fresh.p, nullptr, 0.0, &fit) == MV_OK);
    CHECK(fit.effective_length == doctest::Approx(2e-3).epsilon(1e-6));
    CHECK(fit.converged == 1);
    CHECK(fit.poor_fit == 0);
    CHECK(fit.points_used == g.size());
    CHECK(mv_fit_effective_length(accel.r, fresh.p, nullptr, 0.0, &fit) == MV_E_UNIT_MISMATCH);

    auto iv = mv_intervals_default();
    CHECK(iv.l1.lower == 1e-3);
    CHECK(iv.membrane_thickness.upper == 1.5e-6);
    Pkg s;
    REQUIRE(mv_package_load("soundskrit", &s.p) == MV_OK);
    Resp lo, nom, hi;
    REQUIRE(mv_envelope(s.p, nullptr, g.data(), g.size(), &iv, MV_MODE_FULL, 0.0, &lo.r, &nom.r, &hi.r) == MV_OK);
    CHECK(mv_response_values(hi.r)[3] / mv_response_values(nom.r)[3] == doctest::Approx(1.527683615819209).epsilon(1e-12));
    CHECK(mv_response_values(lo.r)[3] / mv_response_values(nom.r)[3] == doctest::Approx(0.6418079096045197).epsilon(1e-12));
    iv.l1 = {2e-3, 1e-3};
    Resp a, b, c;
    CHECK(mv_envelope(s.p, nullptr, g.data(), g.size(), &iv, MV_MODE_FULL, 0.0, &a.r, &b.r, &c.r) == MV_E_INVALID_ARGUMENT);
}

TEST_CASE("last error is per thread")
{
    double v = 0.0;
    CHECK(mv_linear_to_db(-1.0, &v) == MV_E_INVALID_ARGUMENT);
    const std::string mine = mv_last_error();
    std::string theirs;
    std::thread t([&] {
        auto k = two_port();
        double x = 0.0;
        mv_s_pa_per_g_two_port(k.p, nullptr, 0.0, 0.0, MV_MODE_FULL, &x);
        theirs = mv_last_error();
    });
    t.join();
    CHECK(mv_last_error() == mine);
    CHECK(theirs != mine);
}

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "api.hpp"
#include "report.hpp"

namespace micvib::cli {

using nlohmann::json;

namespace {

constexpr double deg = std::numbers::pi / 180.0;

struct GridOptions {
    double fmin = 20.0;
    double fmax = 2000.0;
    std::size_t points = 200;
    std::string spacing = "log";

    void add(CLI::App* app)
    {
        app->add_option("--fmin", fmin, "Lowest frequency in Hz")->capture_default_str();
        app->add_option("--fmax", fmax, "Highest frequency in Hz")->capture_default_str();
        app->add_option("--points", points, "Number of grid points")->capture_default_str();
        app->add_option("--spacing", spacing, "Grid spacing")
            ->check(CLI::IsMember({"log", "linear"}))
            ->capture_default_str();
    }

    std::vector<double> grid() const { return make_grid(fmin, fmax, points, spacing == "log"); }

    json to_json() const
    {
        return {{"fmin_hz", fmin}, {"fmax_hz", fmax}, {"points", points}, {"spacing", spacing}};
    }
};

struct ModelOptions {
    double angle_deg = 0.0;
    std::string model = "full";

    void add(CLI::App* app)
    {
        app->add_option("--angle", angle_deg, "Incidence angle in degrees, 0 = on-axis")->capture_default_str();
        app->add_option("--model", model, "Model variant")
            ->check(CLI::IsMember({"full", "air-only"}))
            ->capture_default_str();
    }

    double angle() const { return angle_deg * deg; }
    mv_mode mode() const { return model == "air-only" ? MV_MODE_AIR_ONLY : MV_MODE_FULL; }
};

struct ReportOptions {
    std::string report;
    bool no_timestamp = false;

    void add(CLI::App* app)
    {
        app->add_option("--report", report, "Write the JSON report here");
        app->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp so reruns are byte-identical");
    }
};

// Acoustic sensitivity from a V/Pa sweep file, or a flat dB value (number or
// sensitivity-table name).
struct AcousticOptions {
    std::string file;
    std::string db;

    void add(CLI::App* app)
    {
        auto* f = app->add_option("--acoustic", file, "Acoustic sensitivity sweep (V_per_Pa CSV)");
        auto* d = app->add_option("--acoustic-db", db,
                                  "Flat acoustic sensitivity in dBV/Pa, or a sensitivity table name");
        f->excludes(d);
        d->excludes(f);
    }

    bool given() const { return !file.empty() || !db.empty(); }
};

double parse_db(const std::string& text, json& params)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec == std::errc() && ptr == end) {
        params["acoustic_sensitivity_dbv_pa"] = value;
        return value;
    }
    double looked_up = 0.0;
    check(mv_sensitivity_lookup(text.c_str(), &looked_up));
    params["acoustic_sensitivity_dbv_pa"] = looked_up;
    params["acoustic_sensitivity_entry"] = text;
    return looked_up;
}

json flat_expansion_warning(double db)
{
    return {{"code", "flat_expansion"},
            {"message", "acoustic sensitivity given as one dB value and applied at every frequency"},
            {"parameter", "acoustic_sensitivity_dbv_pa"},
            {"predicate",
             {{"parameter", "acoustic_sensitivity_dbv_pa"},
              {"value", db},
              {"relation", "acoustic input is a single dB value, not a sweep"}}}};
}

Response flat_acoustic(double db, std::span<const double> grid, Report& report)
{
    double linear = 0.0;
    check(mv_db_to_linear(db, &linear));
    report.add_warning(flat_expansion_warning(db));
    return flat(MV_UNIT_V_PER_PA, grid, linear);
}

// Flat V/Pa response on `grid` from the --acoustic-db flag.
Response flat_acoustic(const std::string& db_text, std::span<const double> grid, Report& report)
{
    return flat_acoustic(parse_db(db_text, report.parameters()), grid, report);
}

void write_curve(const mv_response* r, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        std::size_t needed = 0;
        const mv_status probe = mv_sweep_to_csv(r, nullptr, 0, &needed);
        if (probe != MV_E_BUFFER_TOO_SMALL) check(probe);
        std::string text(needed, '\0');
        check(mv_sweep_to_csv(r, text.data(), text.size(), &needed));
        text.resize(needed - 1);
        out << text;
    } else {
        check(mv_sweep_save(r, path.c_str()));
    }
}

std::string report_path(const ReportOptions& o, const std::string& out_csv)
{
    if (!o.report.empty()) return o.report;
    if (!out_csv.empty()) return out_csv + ".report.json";
    return {};
}

void summarize_warnings(const json& warnings, std::ostream& err)
{
    struct Group {
        std::size_t count = 0;
        double fmin = INFINITY;
        double fmax = -INFINITY;
        std::string message;
    };
    std::map<std::string, Group> groups;
    for (const auto& w : warnings) {
        auto& g = groups[w.at("code").get<std::string>()];
        if (g.count++ == 0) g.message = w.at("message").get<std::string>();
        if (w.contains("frequency_hz")) {
            g.fmin = std::min(g.fmin, w["frequency_hz"].get<double>());
            g.fmax = std::max(g.fmax, w["frequency_hz"].get<double>());
        }
    }
    for (const auto& [code, g] : groups) {
        err << "warning: " << code << ": " << g.message;
        if (std::isfinite(g.fmin)) {
            if (g.count == 1)
                err << " (at " << g.fmin << " Hz)";
            else
                err << " (" << g.count << " points, " << g.fmin << " to " << g.fmax << " Hz)";
        }
        err << "\n";
    }
}

void finish(const Report& report, const std::string& path, std::ostream& err)
{
    if (!path.empty()) report.write(path);
    summarize_warnings(report.warnings(), err);
}

json package_parameters(const mv_package* p)
{
    static constexpr const char* types[] = {"one_port", "two_port", "array_of_one_ports"};
    const auto e = mv_package_element(p);
    json j = {{"label", mv_package_label(p)},
              {"type", types[mv_package_get_type(p)]},
              {"l1", quantity(mv_package_l1(p), "m")},
              {"l2", quantity(mv_package_l2(p), "m")},
              {"membrane_density", quantity(e.membrane_density, "kg/m^3")},
              {"membrane_thickness", quantity(e.membrane_thickness, "m")},
              {"membrane_area", quantity(e.area, "m^2")},
              {"natural_frequency", quantity(e.natural_frequency, "Hz")},
              {"quality_factor", quantity(e.quality_factor, "dimensionless")}};
    if (mv_package_get_type(p) != MV_PACKAGE_ONE_PORT) {
        j["port_spacing"] = quantity(mv_package_port_spacing(p), "m");
        if (const double leff = mv_package_effective_length(p); leff > 0.0)
            j["effective_length"] = quantity(leff, "m");
    }
    return j;
}

json fit_json(const mv_fit_result& fit, const mv_package* p)
{
    return {{"effective_length", quantity(fit.effective_length, "m")},
            {"effective_length_mm", quantity(fit.effective_length * 1e3, "mm")},
            {"ratio_to_port_spacing", quantity(fit.effective_length / mv_package_port_spacing(p), "dimensionless")},
            {"residual_rms_log", quantity(fit.residual_rms_log, "ln")},
            {"points_used", fit.points_used},
            {"converged", fit.converged != 0}};
}

json poor_fit_warning(const mv_fit_result& fit)
{
    return {{"code", "fit_residual_large"},
            {"message", "measured curve does not follow the 1/f two-port law; fitted length is unreliable"},
            {"parameter", "residual_rms_log"},
            {"predicate",
             {{"parameter", "residual_rms_log"},
              {"value", fit.residual_rms_log},
              {"limit", MV_POOR_FIT_RESIDUAL},
              {"relation", "value > limit"}}}};
}

Response predict(const mv_package* pkg, const mv_environment& env, std::span<const double> grid,
                 const ModelOptions& m)
{
    mv_response* r = nullptr;
    check(mv_predict_sweep(pkg, &env, grid.data(), grid.size(), m.angle(), m.mode(), &r));
    return Response(r);
}

// Brings two sweeps onto the part of a's grid covered by b.
std::pair<Response, Response> align(const mv_response* a, const mv_response* b, Report& report, const char* what)
{
    const auto grid = common_grid(a, b);
    if (grid.size() < mv_response_size(a)) {
        const auto dropped = static_cast<double>(mv_response_size(a) - grid.size());
        report.add_warning({{"code", "points_outside_common_band"},
                            {"message", std::string("dropped points of ") + what + " outside the shared band"},
                            {"parameter", "dropped_points"},
                            {"predicate",
                             {{"parameter", "dropped_points"},
                              {"value", dropped},
                              {"limit", 0},
                              {"relation", "value > limit"}}}});
    }
    return {resample(a, grid), resample(b, grid)};
}

// ---- predict ---------------------------------------------------------------

struct PredictOptions {
    std::string mic;
    GridOptions grid;
    ModelOptions model;
    ReportOptions report;
    std::string out;
    std::string fit;
    double leff_mm = 0.0;
    bool has_leff = false;
};

void run_predict(const PredictOptions& o, std::ostream& out, std::ostream& err)
{
    if (!o.fit.empty() && o.model.mode() == MV_MODE_AIR_ONLY)
        throw UsageError("--fit requires the full model; it cannot be combined with --model air-only");
    auto pkg = load_package(o.mic);
    const auto env = mv_package_environment(pkg.get());
    Report report("predict", !o.report.no_timestamp);
    report.add_input_mic("mic", o.mic, pkg.get());
    report.set_environment(env);
    if (o.has_leff) check(mv_package_set_effective_length(pkg.get(), o.leff_mm * 1e-3));

    if (!o.fit.empty()) {
        auto measured = load_sweep_as(o.fit, MV_UNIT_PA_PER_G);
        report.add_input_file("measured", o.fit);
        mv_fit_result fit{};
        check(mv_fit_effective_length(measured.get(), pkg.get(), &env, o.model.angle(), &fit));
        check(mv_package_set_effective_length(pkg.get(), fit.effective_length));
        report.payload()["fit"] = fit_json(fit, pkg.get());
        if (fit.poor_fit) report.add_warning(poor_fit_warning(fit));
    }

    const auto grid = o.grid.grid();
    auto curve = predict(pkg.get(), env, grid, o.model);
    auto& params = report.parameters();
    params = o.grid.to_json();
    params["angle_deg"] = o.model.angle_deg;
    params["model"] = o.model.model;
    params["package"] = package_parameters(pkg.get());
    report.add_warnings(curve.get());
    report.payload()["curve"] = curve_json(curve.get(), o.out);

    write_curve(curve.get(), o.out, out);
    finish(report, report_path(o.report, o.out), err);
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
    std::string raw;
    std::string voltage;
    std::string accel;
    AcousticOptions acoustic;
    std::string mic;
    ModelOptions model;
    ReportOptions report;
    std::string out;
};

void run_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err)
{
    if (o.raw.empty() == o.voltage.empty()) throw UsageError("give either --raw or --voltage with --accel");
    if (!o.voltage.empty() && o.accel.empty()) throw UsageError("--voltage needs --accel");
    if (!o.acoustic.given()) throw UsageError("give --acoustic or --acoustic-db");

    Report report("analyze", !o.report.no_timestamp);
    report.set_environment(mv_environment_default());
    Response raw;
    if (!o.raw.empty()) {
        raw = load_sweep_as(o.raw, MV_UNIT_V_PER_G);
        report.add_input_file("raw_v_per_g", o.raw);
    } else {
        auto volts = load_sweep_as(o.voltage, MV_UNIT_VOLT);
        auto accel = load_sweep_as(o.accel, MV_UNIT_G_ACCEL);
        report.add_input_file("voltage", o.voltage);
        report.add_input_file("acceleration", o.accel);
        auto [v, a] = align(volts.get(), accel.get(), report, "the voltage sweep");
        mv_response* r = nullptr;
        check(mv_divide_per_tone(v.get(), a.get(), &r));
        raw.reset(r);
    }

    Response acoustic;
    if (!o.acoustic.file.empty()) {
        auto loaded = load_sweep_as(o.acoustic.file, MV_UNIT_V_PER_PA);
        report.add_input_file("acoustic_v_per_pa", o.acoustic.file);
        auto [r, a] = align(raw.get(), loaded.get(), report, "the raw sweep");
        raw = std::move(r);
        acoustic = std::move(a);
    } else {
        acoustic = flat_acoustic(o.acoustic.db, frequencies(raw.get()), report);
    }

    mv_response* s = nullptr;
    check(mv_acoustically_refer(raw.get(), acoustic.get(), &s));
    Response spag(s);
    if (o.acoustic.file.empty()) check(mv_response_set_metadata(spag.get(), "flat_expansion", "true"));
    report.payload()["curve"] = curve_json(spag.get(), o.out);

    if (!o.mic.empty()) {
        auto pkg = load_package(o.mic);
        const auto env = mv_package_environment(pkg.get());
        report.add_input_mic("mic", o.mic, pkg.get());
        report.set_environment(env);
        report.parameters()["angle_deg"] = o.model.angle_deg;
        report.parameters()["model"] = o.model.model;
        report.parameters()["package"] = package_parameters(pkg.get());
        auto model = predict(pkg.get(), env, frequencies(spag.get()), o.model);
        report.add_warnings(model.get());
        std::vector<double> ratio;
        const auto m = values(model.get());
        const auto v = values(spag.get());
        for (std::size_t i = 0; i < m.size(); ++i) ratio.push_back(v[i] / m[i]);
        std::sort(ratio.begin(), ratio.end());
        const std::size_t n = ratio.size();
        const double median = n % 2 ? ratio[n / 2] : 0.5 * (ratio[n / 2 - 1] + ratio[n / 2]);
        report.payload()["model"] = curve_json(model.get());
        report.payload()["measured_over_model"] = {{"median", quantity(median, "dimensionless")},
                                                   {"min", quantity(ratio.front(), "dimensionless")},
                                                   {"max", quantity(ratio.back(), "dimensionless")}};
    }

    write_curve(spag.get(), o.out, out);
    finish(report, report_path(o.report, o.out), err);
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::string mic;
    std::string rig;
    AcousticOptions acoustic;
    GridOptions grid;
    ModelOptions model;
    double drive = 0.1;
    double accel_noise = 0.0;
    double mic_noise = 0.0;
    std::uint64_t seed = 1;
    double leakage_pa = 0.0;
    std::string out_dir;
    ReportOptions report;
};

void run_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err)
{
    auto pkg = load_package(o.mic);
    const auto env = mv_package_environment(pkg.get());
    Report report("simulate", !o.report.no_timestamp);
    report.add_input_mic("mic", o.mic, pkg.get());
    report.set_environment(env);

    mv_shaker shaker = mv_shaker_default();
    if (!o.rig.empty()) {
        check(mv_shaker_load(o.rig.c_str(), &shaker));
        report.add_input_file("rig", o.rig);
    }
    shaker.noise_fraction = o.accel_noise;
    shaker.seed = o.seed;

    const auto grid = o.grid.grid();
    auto model = predict(pkg.get(), env, grid, o.model);
    report.add_warnings(model.get());

    Response acoustic;
    if (!o.acoustic.file.empty()) {
        auto loaded = load_sweep_as(o.acoustic.file, MV_UNIT_V_PER_PA);
        report.add_input_file("acoustic_v_per_pa", o.acoustic.file);
        acoustic = resample(loaded.get(), grid);
    } else if (!o.acoustic.db.empty()) {
        acoustic = flat_acoustic(o.acoustic.db, grid, report);
    } else {
        double db = 0.0;
        if (mv_package_acoustic_sensitivity_db(pkg.get(), &db) != MV_OK)
            throw UsageError("the mic document has no acoustic sensitivity; give --acoustic or --acoustic-db");
        report.parameters()["acoustic_sensitivity_dbv_pa"] = db;
        acoustic = flat_acoustic(db, grid, report);
    }

    mv_response* a = nullptr;
    check(mv_shaker_acceleration(&shaker, o.drive, grid.data(), grid.size(), &a));
    Response accel(a);
    mv_response* v = nullptr;
    mv_response* vg = nullptr;
    check(mv_synthesize_mic_sweep(model.get(), acoustic.get(), accel.get(), o.mic_noise, o.seed, o.leakage_pa, &v, &vg));
    Response voltage(v);
    Response v_per_g(vg);
    report.add_warnings(v_per_g.get());

    double plate_hz = 0.0;
    double stiffness = 0.0;
    check(mv_plate_natural_frequency(&shaker.plate, &plate_hz));
    check(mv_plate_stiffness(&shaker.plate, &stiffness));

    auto& params = report.parameters();
    params.update(o.grid.to_json());
    params["angle_deg"] = o.model.angle_deg;
    params["model"] = o.model.model;
    params["package"] = package_parameters(pkg.get());
    params["drive"] = quantity(o.drive, "V");
    params["accel_noise_fraction"] = o.accel_noise;
    params["mic_noise_fraction"] = o.mic_noise;
    params["seed"] = o.seed;
    params["leakage_floor"] = quantity(o.leakage_pa, "Pa");
    params["shaker"] = {{"rolloff_corner", quantity(shaker.rolloff_corner, "Hz")},
                        {"rolloff_order", shaker.rolloff_order},
                        {"accel_per_volt", quantity(shaker.accel_per_volt, "g/V")},
                        {"plate",
                         {{"radius", quantity(shaker.plate.radius, "m")},
                          {"thickness", quantity(shaker.plate.thickness, "m")},
                          {"youngs_modulus", quantity(shaker.plate.youngs_modulus, "Pa")},
                          {"poisson_ratio", shaker.plate.poisson_ratio},
                          {"density", quantity(shaker.plate.density, "kg/m^3")},
                          {"resonance_q", shaker.plate.resonance_q}}}};

    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    const std::pair<const char*, const mv_response*> files[] = {
        {"accel.csv", accel.get()},     {"voltage.csv", voltage.get()}, {"v_per_g.csv", v_per_g.get()},
        {"v_per_pa.csv", acoustic.get()}, {"model.csv", model.get()}};
    json listed = json::object();
    for (const auto& [name, r] : files) {
        const auto path = (dir / name).string();
        check(mv_sweep_save(r, path.c_str()));
        listed[name] = {{"unit", mv_unit_name(mv_response_unit(r))}, {"points", mv_response_size(r)}};
    }
    report.payload()["files"] = listed;
    report.payload()["plate_natural_frequency"] = quantity(plate_hz, "Hz");
    report.payload()["plate_stiffness"] = quantity(stiffness, "N*m");
    report.payload()["model"] = curve_json(model.get(), (dir / "model.csv").string());

    finish(report, o.report.report.empty() ? (dir / "report.json").string() : o.report.report, err);
    out << "wrote " << std::size(files) << " sweeps to " << dir.string() << "\n";
}

// ---- fit-leff --------------------------------------------------------------

struct FitOptions {
    std::string mic;
    std::string measured;
    double angle_deg = 0.0;
    std::string out;
    ReportOptions report;
};

void run_fit(const FitOptions& o, std::ostream& out, std::ostream& err)
{
    auto pkg = load_package(o.mic);
    const auto env = mv_package_environment(pkg.get());
    Report report("fit-leff", !o.report.no_timestamp);
    report.add_input_mic("mic", o.mic, pkg.get());
    report.add_input_file("measured", o.measured);
    report.set_environment(env);
    auto measured = load_sweep_as(o.measured, MV_UNIT_PA_PER_G);

    mv_fit_result fit{};
    check(mv_fit_effective_length(measured.get(), pkg.get(), &env, o.angle_deg * deg, &fit));
    report.parameters()["angle_deg"] = o.angle_deg;
    report.parameters()["package"] = package_parameters(pkg.get());
    report.payload()["fit"] = fit_json(fit, pkg.get());
    if (fit.poor_fit) report.add_warning(poor_fit_warning(fit));

    if (!o.out.empty()) {
        check(mv_package_set_effective_length(pkg.get(), fit.effective_length));
        ModelOptions m;
        m.angle_deg = o.angle_deg;
        auto curve = predict(pkg.get(), env, frequencies(measured.get()), m);
        check(mv_sweep_save(curve.get(), o.out.c_str()));
        report.payload()["fitted_curve"] = curve_json(curve.get(), o.out);
    }

    out << "effective_length_mm " << fit.effective_length * 1e3 << "\n"
        << "ratio_to_port_spacing " << fit.effective_length / mv_package_port_spacing(pkg.get()) << "\n"
        << "residual_rms_log " << fit.residual_rms_log << "\n";
    finish(report, o.report.report, err);
}

// ---- envelope --------------------------------------------------------------

struct EnvelopeOptions {
    std::string mic;
    std::string intervals;
    GridOptions grid;
    ModelOptions model;
    std::string out_dir;
    ReportOptions report;
};

json interval_json(const mv_interval& i, const char* unit)
{
    return {{"lower", i.lower}, {"upper", i.upper}, {"unit", unit}};
}

bool same_intervals(const mv_intervals& a, const mv_intervals& b)
{
    const auto eq = [](const mv_interval& x, const mv_interval& y) { return x.lower == y.lower && x.upper == y.upper; };
    return eq(a.l1, b.l1) && eq(a.l2, b.l2) && eq(a.membrane_density, b.membrane_density) &&
           eq(a.membrane_thickness, b.membrane_thickness);
}

json ratio_summary(const mv_response* num, const mv_response* den)
{
    const auto n = values(num);
    const auto d = values(den);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < n.size(); ++i) {
        lo = std::min(lo, n[i] / d[i]);
        hi = std::max(hi, n[i] / d[i]);
    }
    return {{"min", lo}, {"max", hi}, {"unit", "dimensionless"}};
}

void run_envelope(const EnvelopeOptions& o, std::ostream& out, std::ostream& err)
{
    auto pkg = load_package(o.mic);
    const auto env = mv_package_environment(pkg.get());
    Report report("envelope", !o.report.no_timestamp);
    report.add_input_mic("mic", o.mic, pkg.get());
    report.set_environment(env);

    mv_intervals iv = mv_intervals_default();
    if (!o.intervals.empty()) {
        check(mv_intervals_load(o.intervals.c_str(), &iv));
        report.add_input_file("intervals", o.intervals);
    }

    const auto grid = o.grid.grid();
    mv_response* lo = nullptr;
    mv_response* nom = nullptr;
    mv_response* hi = nullptr;
    check(mv_envelope(pkg.get(), &env, grid.data(), grid.size(), &iv, o.model.mode(), o.model.angle(), &lo, &nom, &hi));
    Response lower(lo);
    Response nominal(nom);
    Response upper(hi);
    report.add_warnings(nominal.get());

    auto& params = report.parameters();
    params.update(o.grid.to_json());
    params["angle_deg"] = o.model.angle_deg;
    params["model"] = o.model.model;
    params["package"] = package_parameters(pkg.get());
    params["intervals"] = {{"l1", interval_json(iv.l1, "m")},
                           {"l2", interval_json(iv.l2, "m")},
                           {"membrane_density", interval_json(iv.membrane_density, "kg/m^3")},
                           {"membrane_thickness", interval_json(iv.membrane_thickness, "m")},
                           {"port_spacing", "held at the package value"}};

    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    const std::pair<const char*, const mv_response*> files[] = {
        {"lower.csv", lower.get()}, {"nominal.csv", nominal.get()}, {"upper.csv", upper.get()}};
    for (const auto& [name, r] : files) {
        const auto path = (dir / name).string();
        check(mv_sweep_save(r, path.c_str()));
        report.payload()[std::filesystem::path(name).stem().string()] = curve_json(r, path);
    }

    const auto up = ratio_summary(upper.get(), nominal.get());
    const auto down = ratio_summary(lower.get(), nominal.get());
    report.payload()["upper_over_nominal"] = up;
    report.payload()["lower_over_nominal"] = down;

    const bool default_case = same_intervals(iv, mv_intervals_default());
    const double up_pct = (up["max"].get<double>() - 1.0) * 100.0;
    const double down_pct = (down["min"].get<double>() - 1.0) * 100.0;
    report.payload()["published_comparison"] = {
        {"applies", default_case},
        {"published_upper_pct", 62.0},
        {"published_lower_pct", -28.0},
        {"computed_upper_pct", up_pct},
        {"computed_lower_pct", down_pct},
        {"explanation",
         "The published uncertainty band for these intervals is +62%/-28%. Taking the pointwise extremes over all 16 "
         "corners of the l1, l2, membrane density and membrane thickness intervals, with port spacing held at its "
         "measured value, gives the computed figures here. The parameter combination behind the published figures "
         "is not stated, so the difference is reported as a known discrepancy rather than tuned away."}};

    out << "upper/nominal " << up["max"].get<double>() << "\n"
        << "lower/nominal " << down["min"].get<double>() << "\n";
    finish(report, o.report.report.empty() ? (dir / "report.json").string() : o.report.report, err);
}

// ---- ratio -----------------------------------------------------------------

struct RatioOptions {
    std::string on;
    std::string off;
    std::string unit = "V_per_g";
    std::string out;
    ReportOptions report;
};

void run_ratio(const RatioOptions& o, std::ostream& out, std::ostream& err)
{
    mv_unit unit = MV_UNIT_UNSPECIFIED;
    check(mv_unit_parse(o.unit.c_str(), &unit));
    Report report("ratio", !o.report.no_timestamp);
    report.set_environment(mv_environment_default());
    auto on_loaded = load_sweep_as(o.on, unit);
    auto off_loaded = load_sweep_as(o.off, unit);
    report.add_input_file("on_shaker", o.on);
    report.add_input_file("off_shaker", o.off);
    auto [on, off] = align(on_loaded.get(), off_loaded.get(), report, "the on-shaker sweep");

    mv_response* r = nullptr;
    double median = 0.0;
    mv_verdict verdict = MV_VERDICT_VIBRATION_DOMINATED;
    check(mv_on_off_ratio(on.get(), off.get(), &r, &median, &verdict));
    Response ratio(r);
    const char* verdict_name = verdict == MV_VERDICT_LEAKAGE_DOMINATED ? "leakage_dominated" : "vibration_dominated";

    report.parameters()["unit"] = o.unit;
    report.parameters()["leakage_ratio_threshold"] = MV_LEAKAGE_RATIO_THRESHOLD;
    report.payload()["ratio"] = curve_json(ratio.get(), o.out);
    report.payload()["median_ratio"] = quantity(median, "dimensionless");
    report.payload()["verdict"] = verdict_name;
    if (verdict == MV_VERDICT_LEAKAGE_DOMINATED)
        report.add_warning({{"code", "leakage_dominated"},
                            {"message", "off-shaker output is comparable to on-shaker output; the mic hears the shaker"},
                            {"parameter", "median_on_off_ratio"},
                            {"predicate",
                             {{"parameter", "median_on_off_ratio"},
                              {"value", median},
                              {"limit", MV_LEAKAGE_RATIO_THRESHOLD},
                              {"relation", "value < limit"}}}});

    if (!o.out.empty()) check(mv_sweep_save(ratio.get(), o.out.c_str()));
    out << "median_ratio " << median << "\n"
        << "verdict " << verdict_name << "\n";
    finish(report, report_path(o.report, o.out), err);
}

// ---- presets ---------------------------------------------------------------

void run_presets_list(bool as_json, bool sensitivities, std::ostream& out)
{
    static constexpr const char* types[] = {"one_port", "two_port", "array_of_one_ports"};
    json doc = {{"preset_directory", mv_preset_directory()}, {"mics", json::array()}};
    for (std::size_t i = 0; i < mv_preset_count(); ++i) {
        const std::string name = mv_preset_name(i);
        auto pkg = load_package(name);
        json entry = {{"name", name}, {"document", json::parse(package_json(pkg.get()))}};
        doc["mics"].push_back(entry);
        if (!as_json) {
            const auto* p = pkg.get();
            out << name << "  " << types[mv_package_get_type(p)] << "  L1=" << mv_package_l1(p) * 1e3
                << " mm  L2=" << mv_package_l2(p) * 1e3 << " mm";
            if (mv_package_get_type(p) != MV_PACKAGE_ONE_PORT) out << "  dp=" << mv_package_port_spacing(p) * 1e3 << " mm";
            if (mv_package_effective_length(p) > 0.0) out << "  Leff=" << mv_package_effective_length(p) * 1e3 << " mm";
            out << "  fn=" << mv_package_element(p).natural_frequency / 1e3 << " kHz  (" << mv_package_label(p) << ")\n";
        }
    }
    if (sensitivities) {
        doc["sensitivities"] = json::array();
        if (!as_json) out << "\n";
        for (std::size_t i = 0; i < mv_sensitivity_count(); ++i) {
            const char* name = nullptr;
            const char* mic = nullptr;
            const char* condition = nullptr;
            double datasheet = NAN;
            double measured = NAN;
            check(mv_sensitivity_entry(i, &name, &mic, &condition, &datasheet, &measured));
            json e = {{"name", name}, {"mic", mic}, {"condition", condition}, {"measured_dbv_pa", measured}};
            if (std::isfinite(datasheet)) e["datasheet_dbv_pa"] = datasheet;
            if (!as_json) {
                out << name << "  " << measured << " dBV/Pa";
                if (std::isfinite(datasheet)) out << "  (datasheet " << datasheet << ")";
                if (*condition) out << "  " << condition;
                out << "\n";
            }
            doc["sensitivities"].push_back(std::move(e));
        }
    }
    if (as_json) out << doc.dump(2) << "\n";
}

void add_mic_option(CLI::App* app, std::string& mic)
{
    app->add_option("--mic", mic, "Mic JSON document or preset name")->required();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Vibration sensitivity of one-port and two-port MEMS microphones", "micvib"};
    app.set_version_flag("--version", std::string(mv_version()));
    app.require_subcommand(1);
    std::function<void()> action;

    PredictOptions predict_o;
    auto* predict_cmd = app.add_subcommand("predict", "Model Pa/g over a frequency grid");
    add_mic_option(predict_cmd, predict_o.mic);
    predict_o.grid.add(predict_cmd);
    predict_o.model.add(predict_cmd);
    predict_o.report.add(predict_cmd);
    predict_cmd->add_option("--out", predict_o.out, "Output Pa_per_g CSV (stdout if omitted)");
    auto* fit_flag = predict_cmd->add_option("--fit", predict_o.fit, "Fit the air length to this measured Pa_per_g CSV first");
    auto* leff_flag = predict_cmd->add_option("--leff-mm", predict_o.leff_mm, "Effective air length in mm");
    fit_flag->excludes(leff_flag);
    predict_cmd->callback([&] {
        predict_o.has_leff = leff_flag->count() > 0;
        action = [&] { run_predict(predict_o, out, err); };
    });

    AnalyzeOptions analyze_o;
    auto* analyze_cmd = app.add_subcommand("analyze", "Acoustically refer a measured V/g sweep to Pa/g");
    auto* raw_flag = analyze_cmd->add_option("--raw", analyze_o.raw, "Raw V_per_g CSV");
    auto* volt_flag = analyze_cmd->add_option("--voltage", analyze_o.voltage, "Mic output V CSV (with --accel)");
    analyze_cmd->add_option("--accel", analyze_o.accel, "Measured acceleration g_accel CSV")->needs(volt_flag);
    raw_flag->excludes(volt_flag);
    analyze_o.acoustic.add(analyze_cmd);
    analyze_cmd->add_option("--mic", analyze_o.mic, "Compare against the model of this mic");
    analyze_o.model.add(analyze_cmd);
    analyze_o.report.add(analyze_cmd);
    analyze_cmd->add_option("--out", analyze_o.out, "Output Pa_per_g CSV (stdout if omitted)");
    analyze_cmd->callback([&] { action = [&] { run_analyze(analyze_o, out, err); }; });

    SimulateOptions sim_o;
    auto* sim_cmd = app.add_subcommand("simulate", "Synthesize a shaker-rig measurement for a mic");
    add_mic_option(sim_cmd, sim_o.mic);
    sim_cmd->add_option("--rig", sim_o.rig, "Rig JSON document (built-in plate rig if omitted)");
    sim_o.acoustic.add(sim_cmd);
    sim_o.grid.add(sim_cmd);
    sim_o.model.add(sim_cmd);
    sim_cmd->add_option("--drive", sim_o.drive, "Shaker drive amplitude in V")->capture_default_str();
    sim_cmd->add_option("--accel-noise", sim_o.accel_noise, "Fractional noise on the acceleration")->capture_default_str();
    sim_cmd->add_option("--mic-noise", sim_o.mic_noise, "Fractional noise on the mic voltage")->capture_default_str();
    sim_cmd->add_option("--seed", sim_o.seed, "Noise seed")->capture_default_str();
    sim_cmd->add_option("--leakage-pa", sim_o.leakage_pa, "Airborne shaker sound at the mic in Pa")->capture_default_str();
    sim_cmd->add_option("--out-dir", sim_o.out_dir, "Directory for the sweeps and report.json")->required();
    sim_o.report.add(sim_cmd);
    sim_cmd->callback([&] { action = [&] { run_simulate(sim_o, out, err); }; });

    FitOptions fit_o;
    auto* fit_cmd = app.add_subcommand("fit-leff", "Fit the effective air-column length to a measured Pa/g sweep");
    add_mic_option(fit_cmd, fit_o.mic);
    fit_cmd->add_option("--measured", fit_o.measured, "Measured Pa_per_g CSV")->required();
    fit_cmd->add_option("--angle", fit_o.angle_deg, "Incidence angle in degrees")->capture_default_str();
    fit_cmd->add_option("--out", fit_o.out, "Write the fitted model curve here");
    fit_o.report.add(fit_cmd);
    fit_cmd->callback([&] { action = [&] { run_fit(fit_o, out, err); }; });

    EnvelopeOptions env_o;
    auto* env_cmd = app.add_subcommand("envelope", "Model bounds over parameter intervals");
    add_mic_option(env_cmd, env_o.mic);
    env_cmd->add_option("--intervals", env_o.intervals, "Intervals JSON document (built-in defaults if omitted)");
    env_o.grid.add(env_cmd);
    env_o.model.add(env_cmd);
    env_cmd->add_option("--out-dir", env_o.out_dir, "Directory for lower/nominal/upper CSVs and report.json")->required();
    env_o.report.add(env_cmd);
    env_cmd->callback([&] { action = [&] { run_envelope(env_o, out, err); }; });

    RatioOptions ratio_o;
    auto* ratio_cmd = app.add_subcommand("ratio", "On-shaker over off-shaker ratio and leakage verdict");
    ratio_cmd->add_option("--on", ratio_o.on, "On-shaker sweep")->required();
    ratio_cmd->add_option("--off", ratio_o.off, "Off-shaker sweep")->required();
    ratio_cmd->add_option("--unit", ratio_o.unit, "Unit of both sweeps")->capture_default_str();
    ratio_cmd->add_option("--out", ratio_o.out, "Write the ratio sweep here");
    ratio_o.report.add(ratio_cmd);
    ratio_cmd->callback([&] { action = [&] { run_ratio(ratio_o, out, err); }; });

    bool presets_json = false;
    bool presets_sens = false;
    auto* presets_cmd = app.add_subcommand("presets", "Bundled mic presets");
    presets_cmd->require_subcommand(1);
    auto* list_cmd = presets_cmd->add_subcommand("list", "List presets");
    list_cmd->add_flag("--json", presets_json, "Machine-readable listing");
    list_cmd->add_flag("--sensitivities", presets_sens, "Include the acoustic sensitivity table");
    list_cmd->callback([&] { action = [&] { run_presets_list(presets_json, presets_sens, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(exit_status::validation);
    }

    try {
        action();
        return static_cast<int>(exit_status::ok);
    } catch (const ApiError& e) {
        err << "error: " << mv_status_name(e.status()) << ": " << e.what() << "\n";
        return static_cast<int>(mv_status_is_numerical(e.status()) ? exit_status::numerical : exit_status::validation);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(exit_status::validation);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(exit_status::validation);
    }
}

}  // namespace micvib::cli

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "io.hpp"

#ifndef MICVIB_DEFAULT_PRESET_DIR
#define MICVIB_DEFAULT_PRESET_DIR "presets"
#endif

namespace micvib {

using nlohmann::json;

namespace {

// Wraps a JSON object with its path for error reporting and strict keys.
class Node {
public:
    Node(const json& value, std::string path, std::string source)
        : value_(value), path_(std::move(path)), source_(std::move(source))
    {
        if (!value_.is_object()) violation("expected an object");
    }

    void allow_only(std::initializer_list<std::string_view> keys) const
    {
        for (const auto& item : value_.items())
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
                violation("unknown key", item.key());
    }

    bool has(const char* key) const { return value_.contains(key) && !value_.at(key).is_null(); }

    double number(const char* key) const
    {
        if (!has(key)) violation("missing required number", key);
        const auto& v = value_.at(key);
        if (!v.is_number()) violation("expected a number", key);
        const double d = v.get<double>();
        if (!std::isfinite(d)) violation("expected a finite number", key);
        return d;
    }

    double positive(const char* key) const
    {
        const double d = number(key);
        if (!(d > 0.0)) violation("must be > 0 (negative or zero dimension)", key);
        return d;
    }

    double positive_or(const char* key, double fallback) const { return has(key) ? positive(key) : fallback; }

    std::string string(const char* key) const
    {
        if (!has(key)) violation("missing required string", key);
        const auto& v = value_.at(key);
        if (!v.is_string()) violation("expected a string", key);
        return v.get<std::string>();
    }

    std::string string_or(const char* key, std::string fallback) const { return has(key) ? string(key) : fallback; }

    std::int64_t integer(const char* key) const
    {
        if (!has(key)) violation("missing required integer", key);
        const auto& v = value_.at(key);
        if (!v.is_number_integer()) violation("expected an integer", key);
        return v.get<std::int64_t>();
    }

    Node child(const char* key) const { return Node(value_.at(key), path_ + "/" + key, source_); }

    Interval interval(const char* key, double divisor) const
    {
        if (!has(key)) violation("missing required [lower, upper] pair", key);
        const auto& v = value_.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            violation("expected [lower, upper]", key);
        Interval i{v[0].get<double>() / divisor, v[1].get<double>() / divisor};
        if (!(i.lower > 0.0) || !(i.upper > 0.0)) violation("interval bounds must be > 0", key);
        if (i.lower > i.upper) violation("interval lower bound exceeds upper bound", key);
        return i;
    }

    [[noreturn]] void violation(const std::string& what, std::string_view key = {}) const
    {
        std::string where = path_.empty() && key.empty() ? "/" : path_;
        if (!key.empty()) where += "/" + std::string(key);
        fail(ErrorCode::schema, source_ + ": schema violation at " + where + ": " + what);
    }

private:
    const json& value_;
    std::string path_;
    std::string source_;
};

json parse_json(std::string_view text, std::string_view source)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string(source) + ": " + e.what());
    }
}

// Converts an SI value back to display units such that reloading gives the
// identical double.
double to_display(double si, double scale)
{
    double shown = si * scale;
    for (int i = 0; i < 8 && shown / scale != si; ++i)
        shown = std::nextafter(shown, shown / scale < si ? INFINITY : -INFINITY);
    return shown;
}

constexpr double mm = 1e3;
constexpr double um = 1e6;
constexpr double mm2 = 1e6;

}  // namespace

MicConfig parse_mic_config(std::string_view json_text, std::string_view source_name)
{
    const auto doc = parse_json(json_text, source_name);
    const Node root(doc, "", std::string(source_name));
    root.allow_only({"label", "type", "l1_mm", "l2_mm", "dp_mm", "effective_length_mm", "membrane", "dynamics",
                     "environment", "acoustic_sensitivity_dbv_pa", "source", "notes"});

    MicConfig cfg;
    cfg.package.label = root.string("label");
    const auto type = root.string("type");
    const double l1 = root.positive("l1_mm") / mm;
    const double l2 = root.positive("l2_mm") / mm;
    std::optional<double> leff;
    if (root.has("effective_length_mm")) leff = root.positive("effective_length_mm") / mm;

    if (type == "one_port") {
        if (root.has("dp_mm")) root.violation("port spacing is not allowed on a one_port package", "dp_mm");
        if (leff) root.violation("effective length is not allowed on a one_port package", "effective_length_mm");
        cfg.package.geometry = OnePort{l1, l2};
    } else if (type == "two_port") {
        cfg.package.geometry = TwoPort{l1, l2, root.positive("dp_mm") / mm, leff};
    } else if (type == "array_of_one_ports") {
        cfg.package.geometry = ArrayOfOnePorts{l1, l2, root.positive("dp_mm") / mm, leff};
    } else {
        root.violation("must be one_port, two_port or array_of_one_ports", "type");
    }

    auto& e = cfg.package.element;
    if (root.has("membrane")) {
        const auto m = root.child("membrane");
        m.allow_only({"density_kg_m3", "thickness_um", "area_mm2"});
        e.membrane_density = m.positive_or("density_kg_m3", default_membrane_density);
        e.membrane_thickness = m.has("thickness_um") ? m.positive("thickness_um") / um : default_membrane_thickness;
        e.area = m.has("area_mm2") ? m.positive("area_mm2") / mm2 : default_membrane_area;
    }
    if (!root.has("dynamics")) root.violation("missing required object", "dynamics");
    const auto d = root.child("dynamics");
    d.allow_only({"fn_hz", "q"});
    e.natural_frequency = d.positive("fn_hz");
    e.quality_factor = d.positive_or("q", default_quality_factor);

    if (root.has("environment")) {
        const auto env = root.child("environment");
        env.allow_only({"air_density_kg_m3", "speed_of_sound_m_s", "standard_gravity_m_s2"});
        cfg.environment.air_density = env.positive_or("air_density_kg_m3", cfg.environment.air_density);
        cfg.environment.speed_of_sound = env.positive_or("speed_of_sound_m_s", cfg.environment.speed_of_sound);
        cfg.environment.standard_gravity = env.positive_or("standard_gravity_m_s2", cfg.environment.standard_gravity);
        cfg.environment_overridden = true;
    }
    if (root.has("acoustic_sensitivity_dbv_pa")) cfg.acoustic_sensitivity_dbv_pa = root.number("acoustic_sensitivity_dbv_pa");
    cfg.source = root.string_or("source", "");
    cfg.notes = root.string_or("notes", "");

    try {
        cfg.package.validate();
    } catch (const Error& err) {
        fail(ErrorCode::schema, std::string(source_name) + ": " + err.what());
    }
    return cfg;
}

MicConfig load_mic_config_file(const std::filesystem::path& path)
{
    return parse_mic_config(read_text_file(path), path.string());
}

std::string mic_config_to_json(const MicConfig& cfg)
{
    const auto& p = cfg.package;
    json doc = json::object();
    doc["label"] = p.label;
    doc["type"] = std::string(to_string(p.type()));
    doc["l1_mm"] = to_display(p.l1(), mm);
    doc["l2_mm"] = to_display(p.l2(), mm);
    if (!p.is_one_port()) {
        doc["dp_mm"] = to_display(p.port_spacing(), mm);
        if (const auto leff = p.effective_length()) doc["effective_length_mm"] = to_display(*leff, mm);
    }
    doc["membrane"] = {{"density_kg_m3", p.element.membrane_density},
                       {"thickness_um", to_display(p.element.membrane_thickness, um)},
                       {"area_mm2", to_display(p.element.area, mm2)}};
    doc["dynamics"] = {{"fn_hz", p.element.natural_frequency}, {"q", p.element.quality_factor}};
    if (cfg.environment_overridden)
        doc["environment"] = {{"air_density_kg_m3", cfg.environment.air_density},
                              {"speed_of_sound_m_s", cfg.environment.speed_of_sound},
                              {"standard_gravity_m_s2", cfg.environment.standard_gravity}};
    if (cfg.acoustic_sensitivity_dbv_pa) doc["acoustic_sensitivity_dbv_pa"] = *cfg.acoustic_sensitivity_dbv_pa;
    if (!cfg.source.empty()) doc["source"] = cfg.source;
    if (!cfg.notes.empty()) doc["notes"] = cfg.notes;
    return doc.dump(2) + "\n";
}

ShakerSpec parse_rig_spec(std::string_view json_text, std::string_view source_name)
{
    const auto doc = parse_json(json_text, source_name);
    const Node root(doc, "", std::string(source_name));
    root.allow_only({"rolloff_corner_hz", "rolloff_order", "accel_per_volt_g_per_v", "noise_fraction", "seed", "plate"});
    ShakerSpec spec;
    spec.rolloff_corner = root.positive_or("rolloff_corner_hz", spec.rolloff_corner);
    if (root.has("rolloff_order")) {
        const auto order = root.integer("rolloff_order");
        if (order < 1 || order > 16) root.violation("must be an integer in [1, 16]", "rolloff_order");
        spec.rolloff_order = static_cast<int>(order);
    }
    spec.accel_per_volt = root.positive_or("accel_per_volt_g_per_v", spec.accel_per_volt);
    if (root.has("noise_fraction")) {
        spec.noise_fraction = root.number("noise_fraction");
        if (spec.noise_fraction < 0.0) root.violation("must be >= 0", "noise_fraction");
    }
    if (root.has("seed")) {
        const auto seed = root.integer("seed");
        if (seed < 0) root.violation("must be >= 0", "seed");
        spec.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.has("plate")) {
        const auto p = root.child("plate");
        p.allow_only({"radius_m", "thickness_m", "youngs_modulus_pa", "poisson_ratio", "density_kg_m3", "resonance_q"});
        spec.plate.radius = p.positive_or("radius_m", spec.plate.radius);
        spec.plate.thickness = p.positive_or("thickness_m", spec.plate.thickness);
        spec.plate.youngs_modulus = p.positive_or("youngs_modulus_pa", spec.plate.youngs_modulus);
        spec.plate.poisson_ratio = p.positive_or("poisson_ratio", spec.plate.poisson_ratio);
        spec.plate.density = p.positive_or("density_kg_m3", spec.plate.density);
        spec.plate.resonance_q = p.positive_or("resonance_q", spec.plate.resonance_q);
    }
    try {
        spec.validate();
    } catch (const Error& err) {
        fail(ErrorCode::schema, std::string(source_name) + ": " + err.what());
    }
    return spec;
}

ShakerSpec load_rig_spec_file(const std::filesystem::path& path)
{
    return parse_rig_spec(read_text_file(path), path.string());
}

std::string rig_spec_to_json(const ShakerSpec& spec)
{
    json doc = {{"rolloff_corner_hz", spec.rolloff_corner},
                {"rolloff_order", spec.rolloff_order},
                {"accel_per_volt_g_per_v", spec.accel_per_volt},
                {"noise_fraction", spec.noise_fraction},
                {"seed", spec.seed},
                {"plate",
                 {{"radius_m", spec.plate.radius},
                  {"thickness_m", spec.plate.thickness},
                  {"youngs_modulus_pa", spec.plate.youngs_modulus},
                  {"poisson_ratio", spec.plate.poisson_ratio},
                  {"density_kg_m3", spec.plate.density},
                  {"resonance_q", spec.plate.resonance_q}}}};
    return doc.dump(2) + "\n";
}

ParameterIntervals parse_intervals(std::string_view json_text, std::string_view source_name)
{
    const auto doc = parse_json(json_text, source_name);
    const Node root(doc, "", std::string(source_name));
    root.allow_only({"l1_mm", "l2_mm", "membrane_density_kg_m3", "membrane_thickness_um", "source"});
    ParameterIntervals iv;
    iv.l1 = root.interval("l1_mm", mm);
    iv.l2 = root.interval("l2_mm", mm);
    iv.membrane_density = root.interval("membrane_density_kg_m3", 1.0);
    iv.membrane_thickness = root.interval("membrane_thickness_um", um);
    return iv;
}

ParameterIntervals load_intervals_file(const std::filesystem::path& path)
{
    return parse_intervals(read_text_file(path), path.string());
}

std::string intervals_to_json(const ParameterIntervals& iv)
{
    json doc = {{"l1_mm", {to_display(iv.l1.lower, mm), to_display(iv.l1.upper, mm)}},
                {"l2_mm", {to_display(iv.l2.lower, mm), to_display(iv.l2.upper, mm)}},
                {"membrane_density_kg_m3", {iv.membrane_density.lower, iv.membrane_density.upper}},
                {"membrane_thickness_um",
                 {to_display(iv.membrane_thickness.lower, um), to_display(iv.membrane_thickness.upper, um)}}};
    return doc.dump(2) + "\n";
}

std::filesystem::path preset_directory()
{
    if (const char* env = std::getenv("MICVIB_PRESET_DIR"); env && *env) return env;
    return MICVIB_DEFAULT_PRESET_DIR;
}

std::vector<std::string> list_mic_presets()
{
    const auto dir = preset_directory() / "mics";
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    if (ec) fail(ErrorCode::io, "cannot list presets in '" + dir.string() + "': " + ec.message());
    std::sort(names.begin(), names.end());
    return names;
}

MicConfig load_mic_preset(std::string_view name)
{
    const auto path = preset_directory() / "mics" / (std::string(name) + ".json");
    if (!std::filesystem::exists(path))
        fail(ErrorCode::not_found, "no mic preset named '" + std::string(name) + "' in " + path.parent_path().string());
    return load_mic_config_file(path);
}

MicConfig resolve_mic_config(std::string_view path_or_name)
{
    const std::filesystem::path p(path_or_name);
    if (std::filesystem::is_regular_file(p)) return load_mic_config_file(p);
    // "presets/tdk.json" from another working directory still names a preset
    if (p.extension() == ".json") {
        const auto stem = p.stem().string();
        const auto names = list_mic_presets();
        if (std::find(names.begin(), names.end(), stem) != names.end()) return load_mic_preset(stem);
        fail(ErrorCode::io, "no such file '" + p.string() + "' and no preset named '" + stem + "'");
    }
    return load_mic_preset(path_or_name);
}

std::vector<SensitivityEntry> load_sensitivity_table()
{
    const auto path = preset_directory() / "sensitivities.json";
    const auto doc = parse_json(read_text_file(path), path.string());
    const Node root(doc, "", path.string());
    root.allow_only({"unit", "entries"});
    if (!doc.contains("entries") || !doc["entries"].is_array()) root.violation("expected an array", "entries");
    std::vector<SensitivityEntry> out;
    for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
        const Node e(doc["entries"][i], "/entries/" + std::to_string(i), path.string());
        e.allow_only({"name", "mic", "condition", "datasheet_dbv_pa", "measured_dbv_pa"});
        SensitivityEntry s;
        s.name = e.string("name");
        s.mic = e.string("mic");
        s.condition = e.string_or("condition", "");
        if (e.has("datasheet_dbv_pa")) s.datasheet_dbv_pa = e.number("datasheet_dbv_pa");
        s.measured_dbv_pa = e.number("measured_dbv_pa");
        out.push_back(std::move(s));
    }
    return out;
}

std::optional<double> lookup_sensitivity_db(std::string_view name)
{
    for (const auto& e : load_sensitivity_table())
        if (e.name == name) return e.measured_dbv_pa;
    return std::nullopt;
}

}  // namespace micvib

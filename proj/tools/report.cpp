#include "report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "api.hpp"

namespace micvib::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ApiError(MV_E_IO, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view text)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ApiError(MV_E_IO, "cannot write '" + tmp.string() + "'");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out.flush()) throw ApiError(MV_E_IO, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ApiError(MV_E_IO, "cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

namespace {

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Report::Report(std::string command, bool with_timestamp)
{
    doc_["schema"] = report_schema;
    doc_["tool"] = {{"name", "micvib"}, {"version", mv_version()}};
    doc_["command"] = std::move(command);
    if (with_timestamp) doc_["timestamp"] = utc_now();
    doc_["inputs"] = json::array();
    doc_["environment"] = json::object();
    doc_["parameters"] = json::object();
    doc_["warnings"] = json::array();
    doc_["payload"] = json::object();
}

void Report::add_input_file(const std::string& role, const std::filesystem::path& path)
{
    doc_["inputs"].push_back({{"role", role}, {"path", path.string()}, {"sha256", sha256_hex(read_file(path))}});
}

void Report::add_input_mic(const std::string& role, const std::string& path_or_preset, const mv_package* package)
{
    json entry = {{"role", role}};
    std::filesystem::path file(path_or_preset);
    if (!std::filesystem::is_regular_file(file)) {
        auto stem = file.extension() == ".json" ? file.stem().string() : path_or_preset;
        entry["preset"] = stem;
        file = std::filesystem::path(mv_preset_directory()) / "mics" / (stem + ".json");
    }
    entry["path"] = file.string();
    entry["sha256"] = sha256_hex(read_file(file));
    entry["document"] = json::parse(package_json(package));
    doc_["inputs"].push_back(std::move(entry));
}

void Report::set_environment(const mv_environment& env)
{
    doc_["environment"] = {{"air_density_kg_m3", env.air_density},
                           {"speed_of_sound_m_s", env.speed_of_sound},
                           {"standard_gravity_m_s2", env.standard_gravity}};
}

void Report::add_warnings(const mv_response* response)
{
    for (const auto& w : cli::warnings(response)) {
        json entry = {{"code", w.code}, {"message", w.message}, {"predicate", predicate_for(w)}};
        if (std::isfinite(w.frequency_hz)) entry["frequency_hz"] = w.frequency_hz;
        if (*w.parameter) entry["parameter"] = w.parameter;
        add_warning(std::move(entry));
    }
}

void Report::add_warning(json warning) { doc_["warnings"].push_back(std::move(warning)); }

std::string Report::dump() const { return doc_.dump(2) + "\n"; }

void Report::write(const std::filesystem::path& path) const { write_atomic(path, dump()); }

json quantity(double value, const char* unit) { return {{"value", number_or_null(value)}, {"unit", unit}}; }

json curve_json(const mv_response* response, const std::string& file)
{
    json c = {{"unit", mv_unit_name(mv_response_unit(response))},
              {"frequency_unit", "Hz"},
              {"points", mv_response_size(response)}};
    if (!file.empty()) c["file"] = file;
    const auto f = frequencies(response);
    const auto v = values(response);
    c["frequency_hz"] = std::vector<double>(f.begin(), f.end());
    c["value"] = std::vector<double>(v.begin(), v.end());
    return c;
}

// Relations are written against names recorded in the same report, so a
// reader can re-evaluate each one.
json predicate_for(const mv_warning& w)
{
    const std::string code = w.code;
    json p = {{"parameter", w.parameter}, {"value", number_or_null(w.value)}, {"limit", number_or_null(w.limit)}};
    if (std::isfinite(w.frequency_hz)) p["frequency_hz"] = w.frequency_hz;
    if (code == "port_spacing_exceeds_wavelength_tenth") {
        p["relation"] = "value > limit";
        p["limit_definition"] = "environment.speed_of_sound_m_s / (10 * frequency_hz)";
    } else if (code == "fit_residual_large") {
        p["relation"] = "value > limit";
    } else if (code == "nominal_outside_intervals") {
        p["relation"] = "value < interval lower or value > interval upper; limit is the violated bound";
    } else if (code == "v_per_g_undefined") {
        p["relation"] = "acceleration at frequency_hz == 0";
    } else if (code == "array_air_only_known_poor") {
        p["relation"] = "package type == array_of_one_ports and model == air-only";
    } else if (code == "effective_length_held_fixed") {
        p["relation"] = "package effective_length_mm is set";
    } else {
        p["relation"] = "value > limit";
    }
    return p;
}

}  // namespace micvib::cli

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "micvib/micvib.h"

namespace micvib::cli {

inline constexpr const char* report_schema = "micvib.report/1";

std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);
void write_atomic(const std::filesystem::path& path, std::string_view text);

// Report document: provenance, parameters, warnings and a unit-tagged payload.
class Report {
public:
    Report(std::string command, bool with_timestamp);

    void add_input_file(const std::string& role, const std::filesystem::path& path);
    void add_input_mic(const std::string& role, const std::string& path_or_preset, const mv_package* package);
    void set_environment(const mv_environment& env);

    // Response warnings, each with the predicate that triggered it.
    void add_warnings(const mv_response* response);
    void add_warning(nlohmann::json warning);

    nlohmann::json& parameters() { return doc_["parameters"]; }
    nlohmann::json& payload() { return doc_["payload"]; }
    const nlohmann::json& warnings() const { return doc_["warnings"]; }

    std::string dump() const;
    void write(const std::filesystem::path& path) const;

private:
    nlohmann::json doc_;
};

nlohmann::json quantity(double value, const char* unit);
nlohmann::json curve_json(const mv_response* response, const std::string& file = {});
nlohmann::json predicate_for(const mv_warning& w);

}  // namespace micvib::cli

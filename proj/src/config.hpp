#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fit.hpp"
#include "model.hpp"
#include "rig.hpp"

namespace micvib {

struct MicConfig {
    MicPackage package;
    Environment environment;
    bool environment_overridden = false;
    std::optional<double> acoustic_sensitivity_dbv_pa;
    std::string source;
    std::string notes;

    bool operator==(const MicConfig&) const = default;
};

// Mic documents use the unit named in each key (l1_mm, thickness_um, ...).
// Unknown keys are rejected; errors name the JSON path.
MicConfig parse_mic_config(std::string_view json_text, std::string_view source_name = "<mic config>");
MicConfig load_mic_config_file(const std::filesystem::path& path);
std::string mic_config_to_json(const MicConfig& config);

ShakerSpec parse_rig_spec(std::string_view json_text, std::string_view source_name = "<rig spec>");
ShakerSpec load_rig_spec_file(const std::filesystem::path& path);
std::string rig_spec_to_json(const ShakerSpec& spec);

ParameterIntervals parse_intervals(std::string_view json_text, std::string_view source_name = "<intervals>");
ParameterIntervals load_intervals_file(const std::filesystem::path& path);
std::string intervals_to_json(const ParameterIntervals& intervals);

// Presets live under <dir>/mics/*.json and <dir>/sensitivities.json, where
// <dir> is $MICVIB_PRESET_DIR or the install default.
std::filesystem::path preset_directory();
std::vector<std::string> list_mic_presets();
MicConfig load_mic_preset(std::string_view name);
// A path to an existing file, or else a preset name. A missing *.json path
// falls back to the preset named by its stem.
MicConfig resolve_mic_config(std::string_view path_or_name);

struct SensitivityEntry {
    std::string name;
    std::string mic;
    std::string condition;
    std::optional<double> datasheet_dbv_pa;
    double measured_dbv_pa = 0.0;
};

std::vector<SensitivityEntry> load_sensitivity_table();
std::optional<double> lookup_sensitivity_db(std::string_view name);

}  // namespace micvib

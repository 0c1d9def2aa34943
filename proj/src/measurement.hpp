#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "frequency_response.hpp"

namespace micvib {

enum class DbDirection { db_to_linear, linear_to_db };

double db_convert(double value, DbDirection direction);
inline double db_to_linear(double db) { return db_convert(db, DbDirection::db_to_linear); }
inline double linear_to_db(double linear) { return db_convert(linear, DbDirection::linear_to_db); }

// CSV sweep: '#' comments anywhere, header "frequency_hz,value", one point per
// line, LF or CRLF. A comment of the form "# unit: <tag>" declares the unit.
// Unit precedence: explicit argument, then sidecar "<path>.meta.json", then the
// in-file declaration, then `fallback`.
FrequencyResponse parse_sweep(std::string_view text, std::string_view source_name,
                              std::optional<Unit> unit = std::nullopt, std::optional<Unit> fallback = std::nullopt);
FrequencyResponse load_sweep(const std::filesystem::path& path, std::optional<Unit> unit = std::nullopt,
                             std::optional<Unit> fallback = std::nullopt);
/// Loads a sweep whose role fixes its unit: an undeclared unit is taken as
/// `expected`, a different declared one is a unit_mismatch.
FrequencyResponse load_sweep_as(const std::filesystem::path& path, Unit expected);

std::string sweep_to_csv(const FrequencyResponse& response);
void save_sweep(const FrequencyResponse& response, const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Interpolates linearly in log(f)/log(value), so any a*f^b is reproduced
/// exactly. Never extrapolates. Zero values fall back to linear interpolation
/// on that segment.
FrequencyResponse resample(const FrequencyResponse& response, const FrequencyGrid& target);

/// Points of `a` inside the band shared with `b`.
FrequencyGrid common_grid(const FrequencyResponse& a, const FrequencyResponse& b);

FrequencyResponse flat_response(Unit unit, const FrequencyGrid& grid, double value);

/// Raw V/g divided by V/Pa, point by point. Grids must be identical.
FrequencyResponse acoustically_refer(const FrequencyResponse& raw_v_per_g, const FrequencyResponse& acoustic_v_per_pa);

/// Microphone voltage over measured acceleration, tone by tone.
FrequencyResponse divide_per_tone(const FrequencyResponse& voltage, const FrequencyResponse& acceleration);

enum class OnOffVerdict { vibration_dominated, leakage_dominated };
std::string_view to_string(OnOffVerdict verdict);

// A median on/off ratio below this reads as shaker sound reaching the mic.
inline constexpr double leakage_ratio_threshold = 2.0;

struct OnOffSummary {
    FrequencyResponse ratio;
    double median = 0.0;
    OnOffVerdict verdict = OnOffVerdict::vibration_dominated;
};

OnOffSummary on_off_ratio(const FrequencyResponse& on_shaker, const FrequencyResponse& off_shaker);

double median(std::span<const double> values);

}  // namespace micvib

#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace micvib {

enum class Unit {
    V_per_g,
    V_per_Pa,
    Pa_per_g,
    m_per_Pa,
    m_per_g,
    g_accel,
    dimensionless,
    volt,
};

std::string_view to_string(Unit unit);
Unit parse_unit(std::string_view text);

struct Warning {
    std::string code;
    std::string message;
    // NaN when the warning is not tied to a frequency.
    double frequency_hz = std::numeric_limits<double>::quiet_NaN();
    // Offending parameter value and the limit it crossed, so the predicate can
    // be re-evaluated from the recorded inputs.
    std::string parameter;
    double value = std::numeric_limits<double>::quiet_NaN();
    double limit = std::numeric_limits<double>::quiet_NaN();
};

/// Strictly increasing list of positive frequencies in Hz.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> frequencies);

    static FrequencyGrid logarithmic(double fmin, double fmax, std::size_t points);
    static FrequencyGrid linear(double fmin, double fmax, std::size_t points);

    std::span<const double> frequencies() const { return frequencies_; }
    std::size_t size() const { return frequencies_.size(); }
    bool empty() const { return frequencies_.empty(); }
    double front() const { return frequencies_.front(); }
    double back() const { return frequencies_.back(); }
    double operator[](std::size_t i) const { return frequencies_[i]; }

    bool operator==(const FrequencyGrid&) const = default;

private:
    std::vector<double> frequencies_;
};

/// Magnitude series over frequency with a fixed unit tag.
class FrequencyResponse {
public:
    FrequencyResponse(Unit unit, std::vector<double> frequencies, std::vector<double> values);
    FrequencyResponse(Unit unit, const FrequencyGrid& grid, std::vector<double> values);

    Unit unit() const { return unit_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> frequencies() const { return frequencies_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& frequencies_vector() const { return frequencies_; }
    double frequency(std::size_t i) const { return frequencies_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    FrequencyGrid grid() const { return FrequencyGrid(frequencies_); }
    bool same_grid(const FrequencyResponse& other) const { return frequencies_ == other.frequencies_; }

    bool operator==(const FrequencyResponse&) const = default;

    // Free-form provenance (mic label, axis, mount, flat-expansion flags).
    std::map<std::string, std::string> metadata;

private:
    Unit unit_;
    std::vector<double> frequencies_;
    std::vector<double> values_;
};

}  // namespace micvib

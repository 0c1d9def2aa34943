#include "frequency_response.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "error.hpp"

namespace micvib {

namespace {

constexpr std::array<std::pair<Unit, std::string_view>, 8> unit_names{{
    {Unit::V_per_g, "V_per_g"},
    {Unit::V_per_Pa, "V_per_Pa"},
    {Unit::Pa_per_g, "Pa_per_g"},
    {Unit::m_per_Pa, "m_per_Pa"},
    {Unit::m_per_g, "m_per_g"},
    {Unit::g_accel, "g_accel"},
    {Unit::dimensionless, "dimensionless"},
    {Unit::volt, "V"},
}};

void check_frequencies(const std::vector<double>& frequencies)
{
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        const double f = frequencies[i];
        if (!std::isfinite(f) || f <= 0.0)
            fail(ErrorCode::invalid_argument,
                 "frequency at index " + std::to_string(i) + " must be finite and > 0");
        if (i > 0 && !(f > frequencies[i - 1]))
            fail(ErrorCode::non_monotonic,
                 "frequencies must be strictly increasing (index " + std::to_string(i) + ")");
    }
}

}  // namespace

std::string_view to_string(Unit unit)
{
    for (const auto& [u, name] : unit_names)
        if (u == unit) return name;
    return "unknown";
}

Unit parse_unit(std::string_view text)
{
    for (const auto& [u, name] : unit_names)
        if (name == text) return u;
    fail(ErrorCode::unknown_unit, "unknown unit tag '" + std::string(text) + "'");
}

FrequencyGrid::FrequencyGrid(std::vector<double> frequencies) : frequencies_(std::move(frequencies))
{
    check_frequencies(frequencies_);
}

FrequencyGrid FrequencyGrid::logarithmic(double fmin, double fmax, std::size_t points)
{
    require_positive(fmin, "fmin");
    require_positive(fmax, "fmax");
    if (points == 0) fail(ErrorCode::invalid_argument, "grid needs at least one point");
    if (points == 1) return FrequencyGrid({fmin});
    if (!(fmax > fmin)) fail(ErrorCode::invalid_argument, "fmax must exceed fmin");
    std::vector<double> f(points);
    const double span = std::log(fmax / fmin);
    for (std::size_t i = 0; i < points; ++i)
        f[i] = fmin * std::exp(span * static_cast<double>(i) / static_cast<double>(points - 1));
    f.front() = fmin;
    f.back() = fmax;
    return FrequencyGrid(std::move(f));
}

FrequencyGrid FrequencyGrid::linear(double fmin, double fmax, std::size_t points)
{
    require_positive(fmin, "fmin");
    require_positive(fmax, "fmax");
    if (points == 0) fail(ErrorCode::invalid_argument, "grid needs at least one point");
    if (points == 1) return FrequencyGrid({fmin});
    if (!(fmax > fmin)) fail(ErrorCode::invalid_argument, "fmax must exceed fmin");
    std::vector<double> f(points);
    const double step = (fmax - fmin) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) f[i] = fmin + step * static_cast<double>(i);
    f.back() = fmax;
    return FrequencyGrid(std::move(f));
}

FrequencyResponse::FrequencyResponse(Unit unit, std::vector<double> frequencies, std::vector<double> values)
    : unit_(unit), frequencies_(std::move(frequencies)), values_(std::move(values))
{
    if (frequencies_.size() != values_.size())
        fail(ErrorCode::invalid_argument, "frequency and value counts differ");
    check_frequencies(frequencies_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            fail(ErrorCode::invalid_argument,
                 "value at " + std::to_string(frequencies_[i]) + " Hz must be finite and >= 0");
}

FrequencyResponse::FrequencyResponse(Unit unit, const FrequencyGrid& grid, std::vector<double> values)
    : FrequencyResponse(unit, std::vector<double>(grid.frequencies().begin(), grid.frequencies().end()),
                        std::move(values))
{
}

}  // namespace micvib

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace micvib {

// Values are shared with mv_status in the C API.
enum class ErrorCode : int {
    invalid_argument = 1,
    wrong_variant = 2,
    missing_effective_length = 3,
    parse = 4,
    schema = 5,
    non_monotonic = 6,
    unknown_unit = 7,
    grid_mismatch = 8,
    unit_mismatch = 9,
    extrapolation = 10,
    io = 11,
    not_found = 12,
    buffer_too_small = 13,
    pole = 20,
    off_axis_null = 21,
    non_convergence = 22,
    degenerate = 23,
    zero_denominator = 24,
};

// Validation errors are caller mistakes; numerical errors are poles, nulls and
// failed searches on otherwise valid input.
inline bool is_numerical(ErrorCode code) { return static_cast<int>(code) >= 20; }

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || value == std::numeric_limits<double>::infinity())
        fail(ErrorCode::invalid_argument, std::string(name) + " must be finite and > 0, got " + std::to_string(value));
}

}  // namespace micvib

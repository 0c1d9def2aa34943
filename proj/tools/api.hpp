#pragma once

// Thin RAII layer over the C API for the command-line tool.

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "micvib/micvib.h"

namespace micvib::cli {

class ApiError : public std::runtime_error {
public:
    ApiError(mv_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
    mv_status status() const { return status_; }

private:
    mv_status status_;
};

// Bad flag combinations and similar, reported with exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void check(mv_status status)
{
    if (status != MV_OK) throw ApiError(status, mv_last_error());
}

struct PackageDeleter {
    void operator()(mv_package* p) const { mv_package_free(p); }
};
struct ResponseDeleter {
    void operator()(mv_response* r) const { mv_response_free(r); }
};

using Package = std::unique_ptr<mv_package, PackageDeleter>;
using Response = std::unique_ptr<mv_response, ResponseDeleter>;

inline Package load_package(const std::string& path_or_preset)
{
    mv_package* p = nullptr;
    check(mv_package_load(path_or_preset.c_str(), &p));
    return Package(p);
}

inline std::string package_json(const mv_package* p)
{
    std::size_t needed = 0;
    const mv_status probe = mv_package_to_json(p, nullptr, 0, &needed);
    if (probe != MV_E_BUFFER_TOO_SMALL) check(probe);
    std::string text(needed, '\0');
    check(mv_package_to_json(p, text.data(), text.size(), &needed));
    text.resize(needed - 1);
    return text;
}

inline Response load_sweep_as(const std::string& path, mv_unit unit)
{
    mv_response* r = nullptr;
    check(mv_sweep_load_as(path.c_str(), unit, &r));
    return Response(r);
}

inline std::span<const double> frequencies(const mv_response* r)
{
    return {mv_response_frequencies(r), mv_response_size(r)};
}

inline std::span<const double> values(const mv_response* r) { return {mv_response_values(r), mv_response_size(r)}; }

inline std::vector<double> make_grid(double fmin, double fmax, std::size_t points, bool log_spacing)
{
    std::vector<double> grid(points);
    check(mv_grid_fill(fmin, fmax, points, log_spacing ? 1 : 0, grid.data()));
    return grid;
}

inline Response resample(const mv_response* r, std::span<const double> target)
{
    mv_response* out = nullptr;
    check(mv_resample(r, target.data(), target.size(), &out));
    return Response(out);
}

inline std::vector<double> common_grid(const mv_response* a, const mv_response* b)
{
    std::vector<double> grid(mv_response_size(a));
    std::size_t count = 0;
    check(mv_common_grid(a, b, grid.data(), grid.size(), &count));
    grid.resize(count);
    return grid;
}

inline Response flat(mv_unit unit, std::span<const double> grid, double value)
{
    mv_response* out = nullptr;
    check(mv_flat_response(unit, grid.data(), grid.size(), value, &out));
    return Response(out);
}

inline std::vector<mv_warning> warnings(const mv_response* r)
{
    std::vector<mv_warning> out(mv_response_warning_count(r));
    for (std::size_t i = 0; i < out.size(); ++i) check(mv_response_warning(r, i, &out[i]));
    return out;
}

}  // namespace micvib::cli

#include "measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "io.hpp"

namespace micvib {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out)
{
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

double interpolate(double f0, double v0, double f1, double v1, double f)
{
    if (f == f0) return v0;
    if (f == f1) return v1;
    if (v0 > 0.0 && v1 > 0.0) {
        const double t = std::log(f / f0) / std::log(f1 / f0);
        return std::exp(std::log(v0) + t * (std::log(v1) - std::log(v0)));
    }
    const double t = (f - f0) / (f1 - f0);
    return v0 + t * (v1 - v0);
}

}  // namespace

double db_convert(double value, DbDirection direction)
{
    if (!std::isfinite(value)) fail(ErrorCode::invalid_argument, "dB conversion input must be finite");
    if (direction == DbDirection::db_to_linear) return std::pow(10.0, value / 20.0);
    if (!(value > 0.0)) fail(ErrorCode::invalid_argument, "linear value must be > 0 to convert to dB");
    return 20.0 * std::log10(value);
}

FrequencyResponse parse_sweep(std::string_view text, std::string_view source_name, std::optional<Unit> unit,
                              std::optional<Unit> fallback)
{
    const std::string src(source_name);
    std::optional<Unit> declared;
    std::vector<double> freqs;
    std::vector<double> values;
    bool header_seen = false;
    std::size_t line_no = 0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        const auto content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '#') {
            auto body = trim(content.substr(1));
            if (body.starts_with("unit:")) declared = parse_unit(trim(body.substr(5)));
            continue;
        }
        if (!header_seen) {
            if (content != "frequency_hz,value")
                fail(ErrorCode::parse, src + ":" + std::to_string(line_no) +
                                           ": expected header 'frequency_hz,value'");
            header_seen = true;
            continue;
        }
        const auto comma = content.find(',');
        double f = 0.0;
        double v = 0.0;
        if (comma == std::string_view::npos || content.find(',', comma + 1) != std::string_view::npos ||
            !parse_double(content.substr(0, comma), f) || !parse_double(content.substr(comma + 1), v))
            fail(ErrorCode::parse, src + ":" + std::to_string(line_no) + ": malformed row '" +
                                       std::string(content) + "'");
        if (!(f > 0.0))
            fail(ErrorCode::parse, src + ":" + std::to_string(line_no) + ": frequency must be > 0");
        if (!(v > 0.0))
            fail(ErrorCode::invalid_argument,
                 src + ":" + std::to_string(line_no) + ": measured values must be > 0 (magnitudes only)");
        if (!freqs.empty() && !(f > freqs.back()))
            fail(ErrorCode::non_monotonic, src + ":" + std::to_string(line_no) +
                                               ": frequency " + std::string(trim(content.substr(0, comma))) +
                                               " is not strictly increasing");
        freqs.push_back(f);
        values.push_back(v);
    }
    if (!header_seen) fail(ErrorCode::parse, src + ": missing header 'frequency_hz,value'");
    if (freqs.size() < 2) fail(ErrorCode::parse, src + ": a sweep needs at least 2 rows");
    const auto resolved = unit ? unit : declared ? declared : fallback;
    if (!resolved) fail(ErrorCode::unknown_unit, src + ": no unit given (flag, sidecar or '# unit:' line)");
    return FrequencyResponse(*resolved, std::move(freqs), std::move(values));
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path)
{
    auto p = csv_path;
    p += ".meta.json";
    return p;
}

FrequencyResponse load_sweep(const std::filesystem::path& path, std::optional<Unit> unit, std::optional<Unit> fallback)
{
    const auto text = read_text_file(path);
    std::map<std::string, std::string> meta;
    const auto side = sidecar_path(path);
    if (std::filesystem::exists(side)) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_text_file(side));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, side.string() + ": " + e.what());
        }
        if (!doc.is_object()) fail(ErrorCode::schema, side.string() + ": expected a JSON object");
        for (const auto& [key, value] : doc.items()) {
            if (key != "unit" && key != "mic_label" && key != "axis" && key != "mount" && key != "drive_amplitude_v")
                fail(ErrorCode::schema, side.string() + ": unknown key '/" + key + "'");
            if (key == "axis" && value != "on_axis" && value != "off_axis")
                fail(ErrorCode::schema, side.string() + ": /axis must be on_axis or off_axis");
            if (key == "mount" && value != "on_shaker" && value != "off_shaker")
                fail(ErrorCode::schema, side.string() + ": /mount must be on_shaker or off_shaker");
            if (key == "drive_amplitude_v") {
                if (!value.is_number()) fail(ErrorCode::schema, side.string() + ": /drive_amplitude_v must be a number");
                meta[key] = format_double(value.get<double>());
            } else {
                if (!value.is_string()) fail(ErrorCode::schema, side.string() + ": /" + key + " must be a string");
                meta[key] = value.get<std::string>();
            }
        }
        if (!unit && meta.contains("unit")) unit = parse_unit(meta["unit"]);
    }
    auto response = parse_sweep(text, path.string(), unit, fallback);
    meta.erase("unit");
    response.metadata = std::move(meta);
    response.metadata["source"] = path.string();
    return response;
}

FrequencyResponse load_sweep_as(const std::filesystem::path& path, Unit expected)
{
    auto response = load_sweep(path, std::nullopt, expected);
    if (response.unit() != expected)
        fail(ErrorCode::unit_mismatch, path.string() + ": declared unit " + std::string(to_string(response.unit())) +
                                           ", expected " + std::string(to_string(expected)));
    return response;
}

std::string sweep_to_csv(const FrequencyResponse& response)
{
    std::string out = "# unit: " + std::string(to_string(response.unit())) + "\n";
    for (const auto& [key, value] : response.metadata)
        if (key != "source") out += "# " + key + "=" + value + "\n";
    out += "frequency_hz,value\n";
    for (std::size_t i = 0; i < response.size(); ++i)
        out += format_double(response.frequency(i)) + "," + format_double(response.value(i)) + "\n";
    return out;
}

void save_sweep(const FrequencyResponse& response, const std::filesystem::path& path)
{
    write_file_atomic(path, sweep_to_csv(response));
}

FrequencyResponse resample(const FrequencyResponse& response, const FrequencyGrid& target)
{
    if (target.empty()) fail(ErrorCode::invalid_argument, "resample target grid is empty");
    const auto f = response.frequencies();
    const auto v = response.values();
    std::vector<double> out(target.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double x = target[i];
        if (x < f.front() || x > f.back())
            fail(ErrorCode::extrapolation, "resample would extrapolate to " + std::to_string(x) +
                                               " Hz (source covers " + std::to_string(f.front()) + "-" +
                                               std::to_string(f.back()) + " Hz)");
        while (seg + 1 < f.size() && f[seg + 1] < x) ++seg;
        if (f.size() == 1 || x == f[seg]) {
            out[i] = v[seg];
        } else {
            out[i] = interpolate(f[seg], v[seg], f[seg + 1], v[seg + 1], x);
        }
    }
    FrequencyResponse result(response.unit(), target, std::move(out));
    result.metadata = response.metadata;
    return result;
}

FrequencyGrid common_grid(const FrequencyResponse& a, const FrequencyResponse& b)
{
    const double lo = b.frequencies().front();
    const double hi = b.frequencies().back();
    std::vector<double> f;
    for (double x : a.frequencies())
        if (x >= lo && x <= hi) f.push_back(x);
    if (f.empty()) fail(ErrorCode::grid_mismatch, "input sweeps share no frequency band");
    return FrequencyGrid(std::move(f));
}

FrequencyResponse flat_response(Unit unit, const FrequencyGrid& grid, double value)
{
    FrequencyResponse r(unit, grid, std::vector<double>(grid.size(), value));
    r.metadata["flat_expansion"] = "true";
    return r;
}

FrequencyResponse acoustically_refer(const FrequencyResponse& raw, const FrequencyResponse& acoustic)
{
    if (raw.unit() != Unit::V_per_g)
        fail(ErrorCode::unit_mismatch, "raw response must be V_per_g, got " + std::string(to_string(raw.unit())));
    if (acoustic.unit() != Unit::V_per_Pa)
        fail(ErrorCode::unit_mismatch,
             "acoustic sensitivity must be V_per_Pa, got " + std::string(to_string(acoustic.unit())));
    if (!raw.same_grid(acoustic)) fail(ErrorCode::grid_mismatch, "raw and acoustic grids differ; resample first");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(acoustic.value(i) > 0.0))
            fail(ErrorCode::zero_denominator,
                 "acoustic sensitivity is not positive at " + std::to_string(raw.frequency(i)) + " Hz");
        out[i] = raw.value(i) / acoustic.value(i);
    }
    return FrequencyResponse(Unit::Pa_per_g, raw.frequencies_vector(), std::move(out));
}

FrequencyResponse divide_per_tone(const FrequencyResponse& voltage, const FrequencyResponse& acceleration)
{
    if (voltage.unit() != Unit::volt)
        fail(ErrorCode::unit_mismatch, "voltage sweep must be V, got " + std::string(to_string(voltage.unit())));
    if (acceleration.unit() != Unit::g_accel)
        fail(ErrorCode::unit_mismatch,
             "acceleration sweep must be g_accel, got " + std::string(to_string(acceleration.unit())));
    if (!voltage.same_grid(acceleration)) fail(ErrorCode::grid_mismatch, "voltage and acceleration grids differ");
    std::vector<double> out(voltage.size());
    for (std::size_t i = 0; i < voltage.size(); ++i) {
        if (!(acceleration.value(i) > 0.0))
            fail(ErrorCode::zero_denominator,
                 "acceleration is zero at " + std::to_string(voltage.frequency(i)) + " Hz");
        out[i] = voltage.value(i) / acceleration.value(i);
    }
    return FrequencyResponse(Unit::V_per_g, voltage.frequencies_vector(), std::move(out));
}

std::string_view to_string(OnOffVerdict verdict)
{
    return verdict == OnOffVerdict::vibration_dominated ? "vibration_dominated" : "leakage_dominated";
}

double median(std::span<const double> values)
{
    if (values.empty()) fail(ErrorCode::invalid_argument, "median of an empty series");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

OnOffSummary on_off_ratio(const FrequencyResponse& on, const FrequencyResponse& off)
{
    if (on.unit() != off.unit()) fail(ErrorCode::unit_mismatch, "on/off sweeps carry different units");
    if (!on.same_grid(off)) fail(ErrorCode::grid_mismatch, "on/off grids differ; resample first");
    std::vector<double> r(on.size());
    for (std::size_t i = 0; i < on.size(); ++i) {
        if (!(off.value(i) > 0.0))
            fail(ErrorCode::zero_denominator,
                 "off-shaker response is zero at " + std::to_string(on.frequency(i)) + " Hz");
        r[i] = on.value(i) / off.value(i);
    }
    OnOffSummary s{FrequencyResponse(Unit::dimensionless, on.frequencies_vector(), std::move(r)), 0.0,
                   OnOffVerdict::vibration_dominated};
    s.median = median(s.ratio.values());
    s.verdict = s.median < leakage_ratio_threshold ? OnOffVerdict::leakage_dominated : OnOffVerdict::vibration_dominated;
    return s;
}

}  // namespace micvib

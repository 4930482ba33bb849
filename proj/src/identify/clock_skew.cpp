#include "devrisk/identify/clock_skew.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::identify {

double estimate_clock_skew(const TimestampTrace& trace) {
    const auto& s = trace.samples;
    if (s.size() < kMinTraceSamples) {
        throw Error(ErrorKind::InsufficientSamples,
                    "trace has " + std::to_string(s.size()) + " samples, need at least " +
                        std::to_string(kMinTraceSamples));
    }
    if (!(trace.tsval_frequency_hz > 0.0)) {
        throw Error(ErrorKind::Validation, "tsval frequency must be positive");
    }
    const double t0 = s.front().capture_time_s;
    if (s.back().capture_time_s == t0) throw Error(ErrorKind::DegenerateTrace, "capture time span is zero");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i].capture_time_s > s[i - 1].capture_time_s)) {
            throw Error(ErrorKind::Validation, "capture times must be strictly increasing");
        }
    }

    // Unwrap as signed 32-bit steps; ticks are relative to the first sample.
    std::vector<double> x(s.size()), y(s.size());
    std::int64_t ticks = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) ticks += static_cast<std::int32_t>(s[i].tsval - s[i - 1].tsval);
        x[i] = s[i].capture_time_s - t0;
        y[i] = static_cast<double>(ticks) / trace.tsval_frequency_hz - x[i];
    }

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(x.size());
    mean_y /= static_cast<double>(y.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateTrace, "capture times have no spread");
    return sxy / sxx * 1e6;
}

Opinion skew_to_opinion(double skew_ppm, const std::vector<SkewProfile>& profiles, const SkewOpinionConfig& config) {
    if (profiles.empty()) throw Error(ErrorKind::Validation, "skew profile database is empty");

    std::map<ModelIdentity, double> weights;
    for (const auto& p : profiles) {
        const double z = std::abs(skew_ppm - p.expected_skew_ppm) / p.tolerance_ppm;
        if (z <= config.max_z) weights[p.identity] += std::exp(-0.5 * z * z);
    }
    if (weights.empty()) return Opinion::vacuous();

    double sum = 0.0;
    for (const auto& [id, w] : weights) sum += w;
    Opinion out;
    const double rate = 1.0 / static_cast<double>(weights.size());
    for (const auto& [id, w] : weights) {
        out.hypotheses.push_back(id);
        out.belief.push_back(config.total_belief * w / sum);
        out.base_rate.push_back(rate);
    }
    out.uncertainty = 1.0 - config.total_belief;
    return out;
}

void from_json(const json& j, SkewProfile& p) {
    j.at("identity").get_to(p.identity);
    j.at("expected_skew_ppm").get_to(p.expected_skew_ppm);
    j.at("tolerance_ppm").get_to(p.tolerance_ppm);
    if (!(p.tolerance_ppm > 0.0)) {
        throw Error(ErrorKind::MalformedInput, "tolerance_ppm must be positive for " + p.identity.to_string());
    }
}

void to_json(json& j, const SkewProfile& p) {
    j = json{{"identity", p.identity}, {"expected_skew_ppm", p.expected_skew_ppm}, {"tolerance_ppm", p.tolerance_ppm}};
}

void from_json(const json& j, TimestampTrace& t) {
    t.device_id = j.value("device_id", std::string{});
    j.at("tsval_frequency_hz").get_to(t.tsval_frequency_hz);
    t.samples.clear();
    for (const auto& s : j.at("samples")) {
        t.samples.push_back({s.at("capture_time_s").get<double>(), s.at("tsval").get<std::uint32_t>()});
    }
}

void to_json(json& j, const TimestampTrace& t) {
    json samples = json::array();
    for (const auto& s : t.samples) samples.push_back({{"capture_time_s", s.capture_time_s}, {"tsval", s.tsval}});
    j = json{{"device_id", t.device_id}, {"tsval_frequency_hz", t.tsval_frequency_hz}, {"samples", samples}};
}

std::vector<SkewProfile> parse_profiles(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::MalformedInput, "skew profiles must be a JSON array");
    return io::convert<std::vector<SkewProfile>>(j, "skew profiles");
}

std::vector<SkewProfile> load_profiles(const std::filesystem::path& path) {
    return parse_profiles(io::read_json(path));
}

TimestampTrace parse_trace_csv(const std::string& csv, double tsval_frequency_hz, std::string device_id) {
    TimestampTrace trace;
    trace.device_id = std::move(device_id);
    trace.tsval_frequency_hz = tsval_frequency_hz;
    std::istringstream in(csv);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "capture_time_s,tsval") {
                throw Error(ErrorKind::MalformedInput, "trace CSV header must be 'capture_time_s,tsval'");
            }
            continue;
        }
        auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing comma");
            std::size_t used = 0;
            double t = std::stod(line.substr(0, comma));
            auto tsval_text = line.substr(comma + 1);
            unsigned long long v = std::stoull(tsval_text, &used);
            if (used != tsval_text.size() || v > 0xFFFFFFFFull) throw std::out_of_range("tsval");
            trace.samples.push_back({t, static_cast<std::uint32_t>(v)});
        } catch (const std::exception&) {
            throw Error(ErrorKind::MalformedInput, "trace CSV line " + std::to_string(lineno) + " is malformed");
        }
    }
    return trace;
}

TimestampTrace load_trace(const std::filesystem::path& path) {
    if (path.extension() == ".csv") {
        auto meta_path = path;
        meta_path.replace_extension(".meta.json");
        json meta = io::read_json(meta_path);
        return parse_trace_csv(io::read_text(path), meta.at("tsval_frequency_hz").get<double>(),
                               meta.value("device_id", std::string{}));
    }
    return io::convert<TimestampTrace>(io::read_json(path), path.string());
}

}  // namespace devrisk::identify

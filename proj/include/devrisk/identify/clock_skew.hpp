#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/identify/opinion.hpp"

namespace devrisk::identify {

struct TimestampSample {
    double capture_time_s = 0.0;  // receiver clock, strictly increasing
    std::uint32_t tsval = 0;      // TCP timestamp option value
};

struct TimestampTrace {
    std::string device_id;
    std::vector<TimestampSample> samples;
    double tsval_frequency_hz = 1000.0;
};

inline constexpr std::size_t kMinTraceSamples = 10;

/// Hardware clock skew in ppm from TCP timestamps.
///
/// tsval is unwrapped across 32-bit wraparound (at most one wrap between
/// consecutive samples), converted to seconds, and the offset
/// tsval_seconds - capture_time is fitted against capture_time by ordinary
/// least squares. The slope, in ppm, is the skew. Offsets are taken
/// relative to the first sample, so a constant added to every tsval does not
/// change the result.
double estimate_clock_skew(const TimestampTrace& trace);

struct SkewProfile {
    ModelIdentity identity;
    double expected_skew_ppm = 0.0;
    double tolerance_ppm = 1.0;
};

struct SkewOpinionConfig {
    double total_belief = 0.8;
    double max_z = 3.0;
};

/// Profiles within `max_z` tolerances become hypotheses weighted by
/// exp(-z^2/2); weights are normalized to `total_belief`.
Opinion skew_to_opinion(double skew_ppm, const std::vector<SkewProfile>& profiles,
                        const SkewOpinionConfig& config = {});

void from_json(const json& j, SkewProfile& p);
void to_json(json& j, const SkewProfile& p);
void from_json(const json& j, TimestampTrace& t);
void to_json(json& j, const TimestampTrace& t);

std::vector<SkewProfile> parse_profiles(const json& j);
std::vector<SkewProfile> load_profiles(const std::filesystem::path& path);

/// Loads either an inline JSON trace or a CSV trace (`capture_time_s,tsval`)
/// whose frequency comes from a `<name>.meta.json` sidecar.
TimestampTrace load_trace(const std::filesystem::path& path);
TimestampTrace parse_trace_csv(const std::string& csv, double tsval_frequency_hz, std::string device_id = {});

}  // namespace devrisk::identify

#pragma once

#include <filesystem>

#include "devrisk/core/model.hpp"

namespace devrisk::score {

/// CVSS cut points: Low <= low_max < Medium <= medium_max < High.
struct SeverityThresholds {
    double low_max = 3.9;
    double medium_max = 6.9;
};

/// Mean patch latency cut points in days: Fast <= fast_max < Medium <= medium_max < Slow.
struct PatchThresholds {
    double fast_max = 30.0;
    double medium_max = 180.0;
};

struct ScoringConfig {
    SeverityThresholds severity;
    PatchThresholds patch;
    int trend_window_years = 5;

    /// Throws Error{Validation} unless thresholds are strictly increasing and
    /// the window is positive.
    void validate() const;
};

void to_json(json& j, const ScoringConfig& c);
/// Missing keys keep their defaults, so partial config files are accepted.
void from_json(const json& j, ScoringConfig& c);

ScoringConfig load_scoring_config(const std::filesystem::path& path);

/// Maps a CVSS base score onto a risk level. Throws Error{OutOfRange} outside [0, 10].
RiskLevel severity_bucket(double cvss, const SeverityThresholds& thresholds = {});

}  // namespace devrisk::score

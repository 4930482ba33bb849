#include "devrisk/score/config.hpp"

#include <cmath>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::score {

void ScoringConfig::validate() const {
    if (!(0.0 <= severity.low_max && severity.low_max < severity.medium_max && severity.medium_max < 10.0)) {
        throw Error(ErrorKind::Validation, "severity thresholds must satisfy 0 <= low_max < medium_max < 10");
    }
    if (!(0.0 <= patch.fast_max && patch.fast_max < patch.medium_max)) {
        throw Error(ErrorKind::Validation, "patch thresholds must satisfy 0 <= fast_max < medium_max");
    }
    if (trend_window_years <= 0) throw Error(ErrorKind::Validation, "trend_window_years must be positive");
}

void to_json(json& j, const ScoringConfig& c) {
    j = json{{"severity_buckets", {{"low_max", c.severity.low_max}, {"medium_max", c.severity.medium_max}}},
             {"patch_trend_days", {{"fast_max", c.patch.fast_max}, {"medium_max", c.patch.medium_max}}},
             {"trend_window_years", c.trend_window_years}};
}

void from_json(const json& j, ScoringConfig& c) {
    if (auto it = j.find("severity_buckets"); it != j.end()) {
        c.severity.low_max = it->value("low_max", c.severity.low_max);
        c.severity.medium_max = it->value("medium_max", c.severity.medium_max);
    }
    if (auto it = j.find("patch_trend_days"); it != j.end()) {
        c.patch.fast_max = it->value("fast_max", c.patch.fast_max);
        c.patch.medium_max = it->value("medium_max", c.patch.medium_max);
    }
    c.trend_window_years = j.value("trend_window_years", c.trend_window_years);
    c.validate();
}

ScoringConfig load_scoring_config(const std::filesystem::path& path) {
    return io::convert<ScoringConfig>(io::read_json(path), path.string(), ErrorKind::Validation);
}

RiskLevel severity_bucket(double cvss, const SeverityThresholds& thresholds) {
    if (!(cvss >= 0.0 && cvss <= 10.0)) {
        throw Error(ErrorKind::OutOfRange, "CVSS score " + std::to_string(cvss) + " outside [0, 10]");
    }
    if (cvss <= thresholds.low_max) return RiskLevel::Low;
    if (cvss <= thresholds.medium_max) return RiskLevel::Medium;
    return RiskLevel::High;
}

}  // namespace devrisk::score

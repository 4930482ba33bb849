#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/enrich/matching.hpp"
#include "devrisk/score/config.hpp"

namespace devrisk::score {

/// Highest severity over the unpatched CVEs of the identified firmware; Low
/// when there are none. Any exceptional risk raises the result to High.
RiskLevel current_device_risk(const std::vector<AssessedVulnerability>& cve_table,
                              const std::vector<ExceptionalRisk>& exceptional);

/// Modal severity of the CVEs still unpatched on `as_of` across the model's
/// firmware history. Empty set gives Low; ties go to the higher level.
VulnTrendLevel firmware_vulnerability_trend(const std::vector<enrich::PatchEvent>& events, const Date& as_of);

struct PatchTrend {
    PatchTrendLevel level = PatchTrendLevel::Slow;
    std::optional<double> mean_days;  // empty when nothing was ever patched
};

/// Mean patch latency over patched events, bucketed by `thresholds`. A model
/// with no patched CVEs is Slow with no mean.
PatchTrend model_patch_trend(const std::vector<enrich::PatchEvent>& events, const PatchThresholds& thresholds = {});

/// Risk matrix: rows are the firmware vulnerability trend, columns the model
/// patch trend.
///
///              Fast     Medium   Slow
///   Low        Low      Low      Medium
///   Medium     Low      Medium   High
///   High       Medium   High     Critical
FutureRiskLevel future_risk(VulnTrendLevel vuln_trend, PatchTrendLevel patch_trend);

struct TrendSeries {
    std::map<int, int> patches_per_year;  // firmware releases per calendar year
    std::map<int, int> vulns_per_year;    // CVEs per publication year
};

/// Counts over the trailing window: calendar years in
/// (as_of.year - window_years, as_of.year].
TrendSeries trend_series(const std::vector<enrich::PatchEvent>& events,
                         const std::vector<enrich::FirmwareManifest>& manifests, int window_years, const Date& as_of);

/// Builds the full assessment from an enrichment result. Deterministic for a
/// fixed input and as_of apart from `generated_at`.
RiskAssessment assemble_assessment(const std::string& device_id, const ResolvedIdentity& identity,
                                   const enrich::Enrichment& enrichment, const ScoringConfig& config,
                                   const Date& as_of, Timestamp generated_at);

}  // namespace devrisk::score

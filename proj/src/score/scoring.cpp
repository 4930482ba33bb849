#include "devrisk/score/scoring.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace devrisk::score {

RiskLevel current_device_risk(const std::vector<AssessedVulnerability>& cve_table,
                              const std::vector<ExceptionalRisk>& exceptional) {
    if (!exceptional.empty()) return RiskLevel::High;
    RiskLevel level = RiskLevel::Low;
    for (const auto& v : cve_table) level = std::max(level, v.severity);
    return level;
}

VulnTrendLevel firmware_vulnerability_trend(const std::vector<enrich::PatchEvent>& events, const Date& as_of) {
    std::array<int, 3> counts{};
    for (const auto& e : events) {
        if (e.published > as_of) continue;
        const bool patched = e.patched_date && *e.patched_date <= as_of;
        if (!patched) ++counts[static_cast<std::size_t>(e.severity)];
    }
    // Scan from High down so ties resolve upward.
    int best = 2;
    for (int level = 2; level >= 0; --level) {
        if (counts[static_cast<std::size_t>(level)] > counts[static_cast<std::size_t>(best)]) best = level;
    }
    if (counts[static_cast<std::size_t>(best)] == 0) return VulnTrendLevel::Low;
    return static_cast<VulnTrendLevel>(best);
}

PatchTrend model_patch_trend(const std::vector<enrich::PatchEvent>& events, const PatchThresholds& thresholds) {
    long total = 0;
    long count = 0;
    for (const auto& e : events) {
        if (!e.patched_in || !e.latency_days) continue;
        total += *e.latency_days;
        ++count;
    }
    PatchTrend out;
    if (count == 0) return out;
    out.mean_days = static_cast<double>(total) / static_cast<double>(count);
    if (*out.mean_days <= thresholds.fast_max) {
        out.level = PatchTrendLevel::Fast;
    } else if (*out.mean_days <= thresholds.medium_max) {
        out.level = PatchTrendLevel::Medium;
    } else {
        out.level = PatchTrendLevel::Slow;
    }
    return out;
}

FutureRiskLevel future_risk(VulnTrendLevel vuln_trend, PatchTrendLevel patch_trend) {
    using F = FutureRiskLevel;
    static constexpr F kMatrix[3][3] = {
        {F::Low, F::Low, F::Medium},
        {F::Low, F::Medium, F::High},
        {F::Medium, F::High, F::Critical},
    };
    return kMatrix[static_cast<int>(vuln_trend)][static_cast<int>(patch_trend)];
}

TrendSeries trend_series(const std::vector<enrich::PatchEvent>& events,
                         const std::vector<enrich::FirmwareManifest>& manifests, int window_years, const Date& as_of) {
    const int last = as_of.year();
    const int first = last - window_years + 1;
    auto in_window = [&](const Date& d) { return d <= as_of && d.year() >= first && d.year() <= last; };

    TrendSeries out;
    for (const auto& m : manifests) {
        if (in_window(m.release_date)) ++out.patches_per_year[m.release_date.year()];
    }
    std::set<std::string> counted;
    for (const auto& e : events) {
        if (in_window(e.published) && counted.insert(e.cve_id).second) ++out.vulns_per_year[e.published.year()];
    }
    return out;
}

RiskAssessment assemble_assessment(const std::string& device_id, const ResolvedIdentity& identity,
                                   const enrich::Enrichment& enrichment, const ScoringConfig& config,
                                   const Date& as_of, Timestamp generated_at) {
    RiskAssessment a;
    a.device_id = device_id;
    a.identity = enrichment.firmware.identity;
    a.version_assumed = identity.version_assumed;
    a.as_of = as_of;

    a.cve_table = enrichment.cve_table;
    sort_cve_table(a.cve_table);
    a.exceptional_risks = enrichment.exceptional_risks;
    a.current_risk = current_device_risk(a.cve_table, a.exceptional_risks);
    for (const auto& v : a.cve_table) {
        a.current_risk_basis = std::max(a.current_risk_basis.value_or(v.cvss_score), v.cvss_score);
    }

    a.vuln_trend = firmware_vulnerability_trend(enrichment.events, as_of);
    const auto patch = model_patch_trend(enrichment.events, config.patch);
    a.patch_trend = patch.level;
    a.patch_trend_mean_days = patch.mean_days;
    a.future_risk = future_risk(a.vuln_trend, a.patch_trend);

    auto series = trend_series(enrichment.events, enrichment.history, config.trend_window_years, as_of);
    a.patches_per_year = std::move(series.patches_per_year);
    a.vulns_per_year = std::move(series.vulns_per_year);

    std::set<std::string> affected;
    for (const auto& e : enrichment.events) {
        if (e.unpatched()) affected.insert(e.affected_versions.begin(), e.affected_versions.end());
    }
    a.affected_firmware_versions = static_cast<int>(affected.size());
    a.generated_at = std::chrono::floor<std::chrono::seconds>(generated_at);
    return a;
}

}  // namespace devrisk::score

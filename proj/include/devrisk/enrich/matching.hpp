#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/enrich/feed.hpp"
#include "devrisk/enrich/manifest.hpp"
#include "devrisk/score/config.hpp"

namespace devrisk::enrich {

/// True if any affects-key hits a component of `manifest` (same name,
/// version inside the inclusive range) or names one of `model_keys` exactly.
bool entry_affects(const VulnerabilityFeedEntry& entry, const FirmwareManifest& manifest,
                   const std::vector<ModelKey>& model_keys);

/// CVEs applying to one firmware image. `model_keys` defaults to the
/// manifest's own (vendor, model). Output is sorted per sort_cve_table;
/// patch fields are left empty.
std::vector<AssessedVulnerability> match_vulnerabilities(const FirmwareManifest& manifest,
                                                         const std::vector<VulnerabilityFeedEntry>& feed,
                                                         const score::SeverityThresholds& thresholds = {},
                                                         std::vector<ModelKey> model_keys = {});

struct PatchEvent {
    std::string cve_id;
    ModelKey model;
    double cvss_score = 0.0;
    RiskLevel severity = RiskLevel::Low;
    std::string vulnerable_since;           // earliest affected firmware version
    std::optional<std::string> patched_in;  // first version from which no later release is affected
    Date published;
    std::optional<Date> patched_date;
    std::optional<long> latency_days;       // patched_date - published, clamped to >= 0
    std::vector<std::string> affected_versions;

    bool unpatched() const { return !patched_in.has_value(); }
    bool operator==(const PatchEvent&) const = default;
};

void to_json(json& j, const PatchEvent& e);

/// Patch time-spans for every CVE touching a model's firmware history.
///
/// `history` must be sorted by release date. A CVE counts as patched in the
/// first release after its earliest affected release from which no later
/// release is affected again; its latency is that release date minus the
/// publication date, never negative. Output is sorted by cve_id and does not
/// depend on feed order.
std::vector<PatchEvent> compute_patch_events(const std::vector<FirmwareManifest>& history,
                                             const std::vector<VulnerabilityFeedEntry>& feed,
                                             const score::SeverityThresholds& thresholds = {},
                                             std::vector<ModelKey> model_keys = {});

/// Everything the scoring step needs about one identified firmware image.
struct Enrichment {
    FirmwareManifest firmware;
    std::vector<FirmwareManifest> history;  // releases up to as_of, oldest first
    std::vector<AssessedVulnerability> cve_table;
    std::vector<PatchEvent> events;
    std::vector<ExceptionalRisk> exceptional_risks;
};

/// Runs matching, patch-event derivation and exceptional-risk detection for
/// `identity` using feed entries published on or before `as_of`. Throws
/// Error{IdentificationFailed} if no manifest is known for the identity.
Enrichment enrich_identity(const ModelIdentity& identity, const ManifestStore& manifests,
                           const std::vector<VulnerabilityFeedEntry>& feed, const Date& as_of,
                           const score::SeverityThresholds& thresholds = {});

}  // namespace devrisk::enrich

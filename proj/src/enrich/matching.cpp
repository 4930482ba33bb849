#include "devrisk/enrich/matching.hpp"

#include <algorithm>
#include <map>

#include "devrisk/core/error.hpp"
#include "devrisk/enrich/version.hpp"

namespace devrisk::enrich {

namespace {

std::vector<ModelKey> default_keys(std::vector<ModelKey> keys, const FirmwareManifest& m) {
    if (keys.empty()) keys.push_back(m.identity.key());
    return keys;
}

}  // namespace

bool entry_affects(const VulnerabilityFeedEntry& entry, const FirmwareManifest& manifest,
                   const std::vector<ModelKey>& model_keys) {
    for (const auto& key : entry.affects) {
        if (key.kind == AffectsKey::Kind::Model) {
            if (std::find(model_keys.begin(), model_keys.end(), key.model) != model_keys.end()) return true;
            continue;
        }
        for (const auto& c : manifest.components) {
            if (c.name == key.component && version_in_range(c.version, key.version_start, key.version_end)) {
                return true;
            }
        }
    }
    return false;
}

std::vector<AssessedVulnerability> match_vulnerabilities(const FirmwareManifest& manifest,
                                                         const std::vector<VulnerabilityFeedEntry>& feed,
                                                         const score::SeverityThresholds& thresholds,
                                                         std::vector<ModelKey> model_keys) {
    model_keys = default_keys(std::move(model_keys), manifest);
    std::vector<AssessedVulnerability> out;
    for (const auto& e : feed) {
        if (!entry_affects(e, manifest, model_keys)) continue;
        AssessedVulnerability v;
        v.cve_id = e.cve_id;
        v.cvss_score = e.cvss_score;
        v.severity = score::severity_bucket(e.cvss_score, thresholds);
        v.published = e.published;
        v.description = e.description;
        v.exploitation_probability = e.exploitation_probability;
        out.push_back(std::move(v));
    }
    sort_cve_table(out);
    return out;
}

void to_json(json& j, const PatchEvent& e) {
    j = json{{"cve_id", e.cve_id},
             {"model", e.model},
             {"cvss_score", e.cvss_score},
             {"severity", e.severity},
             {"vulnerable_since", e.vulnerable_since},
             {"patched_in", e.patched_in ? json(*e.patched_in) : json(nullptr)},
             {"published", e.published},
             {"patched_date", e.patched_date ? json(*e.patched_date) : json(nullptr)},
             {"latency_days", e.latency_days ? json(*e.latency_days) : json(nullptr)},
             {"affected_versions", e.affected_versions}};
}

std::vector<PatchEvent> compute_patch_events(const std::vector<FirmwareManifest>& history,
                                             const std::vector<VulnerabilityFeedEntry>& feed,
                                             const score::SeverityThresholds& thresholds,
                                             std::vector<ModelKey> model_keys) {
    if (history.empty()) return {};
    model_keys = default_keys(std::move(model_keys), history.front());

    std::vector<const VulnerabilityFeedEntry*> ordered;
    ordered.reserve(feed.size());
    for (const auto& e : feed) ordered.push_back(&e);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->cve_id < b->cve_id; });

    std::vector<PatchEvent> events;
    for (const auto* entry : ordered) {
        std::optional<std::size_t> first_hit, last_hit;
        std::vector<std::string> affected;
        for (std::size_t i = 0; i < history.size(); ++i) {
            if (!entry_affects(*entry, history[i], model_keys)) continue;
            if (!first_hit) first_hit = i;
            last_hit = i;
            affected.push_back(history[i].identity.firmware_version);
        }
        if (!first_hit) continue;

        PatchEvent ev;
        ev.affected_versions = std::move(affected);
        ev.cve_id = entry->cve_id;
        ev.model = history.front().identity.key();
        ev.cvss_score = entry->cvss_score;
        ev.severity = score::severity_bucket(entry->cvss_score, thresholds);
        ev.vulnerable_since = history[*first_hit].identity.firmware_version;
        ev.published = entry->published;
        const std::size_t fix = *last_hit + 1;
        if (fix < history.size()) {
            ev.patched_in = history[fix].identity.firmware_version;
            ev.patched_date = history[fix].release_date;
            ev.latency_days = std::max(0L, history[fix].release_date.days_since(entry->published));
        }
        events.push_back(std::move(ev));
    }
    return events;
}

Enrichment enrich_identity(const ModelIdentity& identity, const ManifestStore& manifests,
                           const std::vector<VulnerabilityFeedEntry>& feed, const Date& as_of,
                           const score::SeverityThresholds& thresholds) {
    const FirmwareManifest* firmware = manifests.find(identity);
    if (firmware == nullptr) {
        throw Error(ErrorKind::IdentificationFailed, "no firmware manifest known for " + identity.to_string());
    }
    if (firmware->release_date > as_of) {
        throw Error(ErrorKind::IdentificationFailed,
                    identity.to_string() + " was released after " + as_of.to_string());
    }

    std::vector<VulnerabilityFeedEntry> known;
    for (const auto& e : feed) {
        if (e.published <= as_of) known.push_back(e);
    }

    std::vector<ModelKey> keys{identity.key()};
    if (auto target = manifests.resolve(identity.key()); !(target == identity.key())) keys.push_back(target);

    Enrichment out;
    out.firmware = *firmware;
    out.history = manifests.history(identity.key(), as_of);
    out.events = compute_patch_events(out.history, known, thresholds, keys);
    out.cve_table = match_vulnerabilities(*firmware, known, thresholds, keys);
    out.exceptional_risks = detect_exceptional_risks(*firmware);

    std::map<std::string, const PatchEvent*> by_id;
    for (const auto& ev : out.events) by_id[ev.cve_id] = &ev;
    for (auto& v : out.cve_table) {
        auto it = by_id.find(v.cve_id);
        if (it == by_id.end() || !it->second->patched_in) continue;
        v.patched_in = it->second->patched_in;
        v.patch_latency_days = it->second->latency_days;
    }
    return out;
}

}  // namespace devrisk::enrich

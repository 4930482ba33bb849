#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"

namespace devrisk::enrich {

/// One affects-key of a feed entry: either a component version range
/// (inclusive bounds, empty bound = open) or an exact (vendor, model).
struct AffectsKey {
    enum class Kind { Component, Model };
    Kind kind = Kind::Component;
    std::string component;
    std::string version_start;
    std::string version_end;
    ModelKey model;

    bool operator==(const AffectsKey&) const = default;
};

struct VulnerabilityFeedEntry {
    std::string cve_id;
    Date published;
    double cvss_score = 0.0;
    std::vector<AffectsKey> affects;
    std::string description;
    std::optional<double> exploitation_probability;
    std::string source;

    bool operator==(const VulnerabilityFeedEntry&) const = default;
};

void to_json(json& j, const AffectsKey& k);
void to_json(json& j, const VulnerabilityFeedEntry& e);

/// Validates entries, keeps the highest-scoring entry per cve_id and sorts
/// by published date (then cve_id). Malformed entries raise
/// Error{MalformedFeed} naming the entry index and field; duplicate ids are
/// reported on `log` and resolved, not fatal.
std::vector<VulnerabilityFeedEntry> parse_feed(const json& j, std::ostream* log = nullptr);

std::vector<VulnerabilityFeedEntry> ingest_feed(const std::filesystem::path& path, std::ostream* log = nullptr);

/// Merges two already-validated feeds with the same dedup rule.
std::vector<VulnerabilityFeedEntry> merge_feeds(std::vector<VulnerabilityFeedEntry> base,
                                                const std::vector<VulnerabilityFeedEntry>& extra,
                                                std::ostream* log = nullptr);

json feed_to_json(const std::vector<VulnerabilityFeedEntry>& feed);

}  // namespace devrisk::enrich

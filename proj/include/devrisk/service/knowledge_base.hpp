#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/enrich/feed.hpp"
#include "devrisk/enrich/manifest.hpp"
#include "devrisk/identify/clock_skew.hpp"
#include "devrisk/identify/web_match.hpp"

namespace devrisk::service {

/// A purchasable model listed for category comparison.
struct CatalogEntry {
    std::string category;
    ModelKey model;
    std::string name;
};

/// Devices pre-registered from the data directory (the study scenario).
struct Scenario {
    std::optional<Date> as_of;
    std::vector<DeviceRecord> devices;
};

/// Immutable view of all reference data at one point in time.
struct Knowledge {
    std::vector<enrich::VulnerabilityFeedEntry> feed;
    enrich::ManifestStore manifests;
    std::vector<identify::FingerprintSignature> signatures;
    std::vector<identify::SkewProfile> profiles;
    std::vector<CatalogEntry> catalog;
    json copy_overrides = json::object();
    Scenario scenario;
};

struct IngestReport {
    std::string kind;
    std::size_t received = 0;
    std::size_t total = 0;
};

void to_json(json& j, const CatalogEntry& c);
void from_json(const json& j, CatalogEntry& c);
void to_json(json& j, const IngestReport& r);

/// Reference data rooted at a data directory:
///
///   feed.json  manifests/  signatures.json  profiles.json  catalog.json
///   corpora/<device-id or address>.json   traces/<...>.csv|.json
///   copy.json  scenario.json
///
/// Readers take a snapshot; ingestion builds a new snapshot and swaps it in,
/// so in-flight assessments keep a consistent view.
class KnowledgeBase {
public:
    KnowledgeBase(std::filesystem::path data_dir, bool persist_ingest);

    std::shared_ptr<const Knowledge> snapshot() const;
    const std::filesystem::path& data_dir() const { return data_dir_; }

    /// Web corpus / timestamp trace for a device, looked up by device id and
    /// then by network address. Absent files yield nullopt.
    std::optional<identify::WebCorpus> corpus_for(const DeviceRecord& device) const;
    std::optional<identify::TimestampTrace> trace_for(const DeviceRecord& device) const;

    IngestReport ingest_feed(const json& entries);
    IngestReport ingest_manifests(const json& manifests);
    IngestReport ingest_signatures(const json& signatures);
    IngestReport ingest_profiles(const json& profiles);

    /// File-based ingestion; a manifests path may be a file or a directory.
    IngestReport ingest_feed_file(const std::filesystem::path& path);
    IngestReport ingest_manifests_path(const std::filesystem::path& path);
    IngestReport ingest_signatures_file(const std::filesystem::path& path);
    IngestReport ingest_profiles_file(const std::filesystem::path& path);

private:
    IngestReport add_manifests(std::vector<enrich::FirmwareManifest> manifests);
    void swap_in(std::shared_ptr<const Knowledge> next);

    std::filesystem::path data_dir_;
    bool persist_;
    mutable std::mutex mutex_;
    std::mutex ingest_mutex_;
    std::shared_ptr<const Knowledge> current_;
};

}  // namespace devrisk::service

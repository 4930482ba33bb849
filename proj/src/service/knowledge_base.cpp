#include "devrisk/service/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::service {

namespace fs = std::filesystem;

namespace {

json read_optional(const fs::path& path, const json& fallback, ErrorKind kind = ErrorKind::MalformedInput) {
    if (!fs::exists(path)) return fallback;
    return io::read_json(path, kind);
}

bool safe_file_stem(const std::string& name) {
    return !name.empty() && name != "." && name != ".." && name.find('/') == std::string::npos &&
           name.find('\\') == std::string::npos;
}

std::string manifest_file_name(const ModelIdentity& id) {
    std::string name = id.vendor + "_" + id.model + "_" + id.firmware_version;
    for (char& c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
    }
    return name + ".json";
}

std::shared_ptr<Knowledge> load_knowledge(const fs::path& dir) {
    auto k = std::make_shared<Knowledge>();
    if (fs::exists(dir / "feed.json")) k->feed = enrich::ingest_feed(dir / "feed.json", &std::cerr);
    k->manifests = enrich::ManifestStore::load_directory(dir / "manifests");
    if (fs::exists(dir / "signatures.json")) k->signatures = identify::load_signatures(dir / "signatures.json");
    if (fs::exists(dir / "profiles.json")) k->profiles = identify::load_profiles(dir / "profiles.json");
    k->catalog = io::convert<std::vector<CatalogEntry>>(read_optional(dir / "catalog.json", json::array()),
                                                        "catalog.json");
    k->copy_overrides = read_optional(dir / "copy.json", json::object());
    json scenario = read_optional(dir / "scenario.json", json::object());
    if (auto it = scenario.find("as_of"); it != scenario.end()) k->scenario.as_of = it->get<Date>();
    for (const auto& d : scenario.value("devices", json::array())) {
        DeviceRecord r;
        r.device_id = d.value("device_id", std::string{});
        r.network_address = d.at("network_address").get<std::string>();
        r.category = d.at("category").get<DeviceCategory>();
        r.device_type = d.value("device_type", std::string{});
        r.owner = d.at("owner").get<std::string>();
        k->scenario.devices.push_back(std::move(r));
    }
    return k;
}

}  // namespace

void to_json(json& j, const CatalogEntry& c) {
    j = json{{"category", c.category}, {"vendor", c.model.vendor}, {"model", c.model.model}, {"name", c.name}};
}

void from_json(const json& j, CatalogEntry& c) {
    j.at("category").get_to(c.category);
    j.at("vendor").get_to(c.model.vendor);
    j.at("model").get_to(c.model.model);
    c.name = j.value("name", c.model.vendor + " " + c.model.model);
}

void to_json(json& j, const IngestReport& r) {
    j = json{{"kind", r.kind}, {"received", r.received}, {"total", r.total}};
}

KnowledgeBase::KnowledgeBase(fs::path data_dir, bool persist_ingest)
    : data_dir_(std::move(data_dir)), persist_(persist_ingest) {
    try {
        current_ = load_knowledge(data_dir_);
    } catch (const Error&) {
        throw;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedInput, data_dir_.string() + ": " + e.what());
    }
}

std::shared_ptr<const Knowledge> KnowledgeBase::snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
}

void KnowledgeBase::swap_in(std::shared_ptr<const Knowledge> next) {
    std::lock_guard lock(mutex_);
    current_ = std::move(next);
}

std::optional<identify::WebCorpus> KnowledgeBase::corpus_for(const DeviceRecord& device) const {
    for (const auto& stem : {device.device_id, device.network_address}) {
        if (!safe_file_stem(stem)) continue;
        auto path = data_dir_ / "corpora" / (stem + ".json");
        if (fs::exists(path)) {
            auto corpus = identify::load_corpus(path);
            if (corpus.device_id.empty()) corpus.device_id = device.device_id;
            return corpus;
        }
    }
    return std::nullopt;
}

std::optional<identify::TimestampTrace> KnowledgeBase::trace_for(const DeviceRecord& device) const {
    for (const auto& stem : {device.device_id, device.network_address}) {
        if (!safe_file_stem(stem)) continue;
        for (const char* ext : {".csv", ".json"}) {
            auto path = data_dir_ / "traces" / (stem + ext);
            if (fs::exists(path)) return identify::load_trace(path);
        }
    }
    return std::nullopt;
}

IngestReport KnowledgeBase::ingest_feed(const json& entries) {
    auto parsed = enrich::parse_feed(entries, &std::cerr);
    std::lock_guard lock(ingest_mutex_);
    auto next = std::make_shared<Knowledge>(*snapshot());
    next->feed = enrich::merge_feeds(std::move(next->feed), parsed, &std::cerr);
    if (persist_) io::write_atomic(data_dir_ / "feed.json", enrich::feed_to_json(next->feed).dump(2) + "\n");
    IngestReport report{"feed", parsed.size(), next->feed.size()};
    swap_in(std::move(next));
    return report;
}

IngestReport KnowledgeBase::ingest_feed_file(const fs::path& path) {
    return ingest_feed(io::read_json(path, ErrorKind::MalformedFeed));
}

IngestReport KnowledgeBase::add_manifests(std::vector<enrich::FirmwareManifest> manifests) {
    std::lock_guard lock(ingest_mutex_);
    auto next = std::make_shared<Knowledge>(*snapshot());
    std::vector<const enrich::FirmwareManifest*> added;
    for (auto& m : manifests) {
        // Markers are already recorded; the stored copy no longer needs the blob.
        m.raw_blob_path.reset();
        if (const auto* existing = next->manifests.find(m.identity); existing && *existing == m) continue;
        next->manifests.add(m);
        added.push_back(&m);
    }
    if (persist_) {
        for (const auto* m : added) {
            json j = *m;
            io::write_atomic(data_dir_ / "manifests" / manifest_file_name(m->identity), j.dump(2) + "\n");
        }
    }
    IngestReport report{"manifests", manifests.size(), next->manifests.size()};
    swap_in(std::move(next));
    return report;
}

IngestReport KnowledgeBase::ingest_manifests(const json& manifests) {
    const json list = manifests.is_array() ? manifests : json::array({manifests});
    std::vector<enrich::FirmwareManifest> parsed;
    for (std::size_t i = 0; i < list.size(); ++i) {
        auto m = io::convert<enrich::FirmwareManifest>(list[i], "manifest " + std::to_string(i),
                                                       ErrorKind::MalformedManifest);
        if (m.raw_blob_path) {
            fs::path blob = *m.raw_blob_path;
            if (blob.is_relative()) blob = data_dir_ / "manifests" / blob;
            std::string bytes = io::read_text(blob);
            m = enrich::extract_components(std::move(m), std::span<const char>(bytes.data(), bytes.size()));
        }
        parsed.push_back(std::move(m));
    }
    return add_manifests(std::move(parsed));
}

IngestReport KnowledgeBase::ingest_manifests_path(const fs::path& path) {
    std::vector<enrich::FirmwareManifest> parsed;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path)) {
            if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "aliases.json") {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) parsed.push_back(enrich::extract_components(f));
    } else {
        parsed.push_back(enrich::extract_components(path));
    }
    return add_manifests(std::move(parsed));
}

IngestReport KnowledgeBase::ingest_signatures(const json& signatures) {
    auto parsed = identify::parse_signatures(signatures);
    std::lock_guard lock(ingest_mutex_);
    auto next = std::make_shared<Knowledge>(*snapshot());
    std::map<std::string, identify::FingerprintSignature> by_id;
    for (auto& s : next->signatures) by_id[s.signature_id] = std::move(s);
    for (auto& s : parsed) by_id[s.signature_id] = s;
    next->signatures.clear();
    for (auto& [id, s] : by_id) next->signatures.push_back(std::move(s));
    if (persist_) io::write_atomic(data_dir_ / "signatures.json", json(next->signatures).dump(2) + "\n");
    IngestReport report{"signatures", parsed.size(), next->signatures.size()};
    swap_in(std::move(next));
    return report;
}

IngestReport KnowledgeBase::ingest_signatures_file(const fs::path& path) {
    return ingest_signatures(io::read_json(path));
}

IngestReport KnowledgeBase::ingest_profiles(const json& profiles) {
    auto parsed = identify::parse_profiles(profiles);
    std::lock_guard lock(ingest_mutex_);
    auto next = std::make_shared<Knowledge>(*snapshot());
    std::map<ModelIdentity, identify::SkewProfile> by_identity;
    for (auto& p : next->profiles) by_identity[p.identity] = std::move(p);
    for (auto& p : parsed) by_identity[p.identity] = p;
    next->profiles.clear();
    for (auto& [id, p] : by_identity) next->profiles.push_back(std::move(p));
    if (persist_) io::write_atomic(data_dir_ / "profiles.json", json(next->profiles).dump(2) + "\n");
    IngestReport report{"profiles", parsed.size(), next->profiles.size()};
    swap_in(std::move(next));
    return report;
}

IngestReport KnowledgeBase::ingest_profiles_file(const fs::path& path) {
    return ingest_profiles(io::read_json(path));
}

}  // namespace devrisk::service

#include "devrisk/enrich/manifest.hpp"

#include <algorithm>
#include <string>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::enrich {

namespace {

constexpr std::string_view kKeyMaterialText = "Found cryptographic key material within the identified firmware";

std::string key_kind(std::string_view marker) {
    if (marker.find("RSA") != std::string_view::npos) return "RSA private key";
    if (marker.find("EC PRIVATE") != std::string_view::npos) return "EC private key";
    return "private key";
}

void add_unique(std::vector<std::string>& out, std::string value) {
    if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(std::move(value));
}

}  // namespace

void to_json(json& j, const FirmwareManifest& m) {
    json components = json::array();
    for (const auto& c : m.components) components.push_back({{"name", c.name}, {"version", c.version}});
    j = json{{"identity", m.identity},
             {"release_date", m.release_date},
             {"components", components},
             {"secret_markers", m.secret_markers}};
    if (m.raw_blob_path) j["raw_blob_path"] = *m.raw_blob_path;
}

void from_json(const json& j, FirmwareManifest& m) {
    j.at("identity").get_to(m.identity);
    if (m.identity.has_wildcard_firmware() || m.identity.firmware_version.empty()) {
        throw Error(ErrorKind::MalformedManifest, "manifest identity needs a concrete firmware_version");
    }
    j.at("release_date").get_to(m.release_date);
    m.components.clear();
    for (const auto& c : j.value("components", json::array())) {
        Component comp{c.at("name").get<std::string>(), c.at("version").get<std::string>()};
        if (comp.name.empty() || comp.version.empty()) {
            throw Error(ErrorKind::MalformedManifest, "component name and version must be non-empty");
        }
        m.components.push_back(std::move(comp));
    }
    m.secret_markers = j.value("secret_markers", std::vector<std::string>{});
    if (auto it = j.find("raw_blob_path"); it != j.end() && !it->is_null()) {
        m.raw_blob_path = it->get<std::string>();
    } else {
        m.raw_blob_path.reset();
    }
}

std::vector<std::string> scan_blob_for_markers(std::span<const char> blob) {
    std::string_view haystack(blob.data(), blob.size());
    std::vector<std::string> found;
    for (auto marker : kPrivateKeyMarkers) {
        if (haystack.find(marker) != std::string_view::npos) found.emplace_back(marker);
    }
    return found;
}

FirmwareManifest extract_components(FirmwareManifest declared, std::span<const char> blob) {
    for (auto& marker : scan_blob_for_markers(blob)) add_unique(declared.secret_markers, std::move(marker));
    return declared;
}

FirmwareManifest extract_components(const std::filesystem::path& manifest_path) {
    auto manifest = io::convert<FirmwareManifest>(io::read_json(manifest_path, ErrorKind::MalformedManifest),
                                                  manifest_path.string(), ErrorKind::MalformedManifest);
    if (!manifest.raw_blob_path) return manifest;
    std::filesystem::path blob_path = *manifest.raw_blob_path;
    if (blob_path.is_relative()) blob_path = manifest_path.parent_path() / blob_path;
    std::string blob;
    try {
        blob = io::read_text(blob_path);
    } catch (const Error& e) {
        throw Error(ErrorKind::MalformedManifest, manifest_path.string() + ": " + e.what());
    }
    return extract_components(std::move(manifest), std::span<const char>(blob.data(), blob.size()));
}

std::vector<ExceptionalRisk> detect_exceptional_risks(const FirmwareManifest& manifest) {
    std::vector<ExceptionalRisk> risks;
    std::vector<std::string> seen;
    for (const auto& marker : manifest.secret_markers) {
        if (std::find(seen.begin(), seen.end(), marker) != seen.end()) continue;
        seen.push_back(marker);
        ExceptionalRisk r;
        if (marker.find("PRIVATE KEY") != std::string::npos) {
            r.kind = ExceptionalRiskKind::PrivateKeyMaterial;
            r.description = std::string(kKeyMaterialText) + " (" + key_kind(marker) + ").";
        } else {
            r.kind = ExceptionalRiskKind::Other;
            r.label = "secret_marker";
            r.description = "Found embedded secret material within the identified firmware.";
        }
        r.evidence = marker;
        risks.push_back(std::move(r));
    }
    return risks;
}

void ManifestStore::add(FirmwareManifest manifest) {
    auto& list = by_model_[manifest.identity.key()];
    for (const auto& existing : list) {
        if (existing.identity.firmware_version == manifest.identity.firmware_version) {
            throw Error(ErrorKind::MalformedManifest, "duplicate manifest for " + manifest.identity.to_string());
        }
        if (existing.release_date == manifest.release_date) {
            throw Error(ErrorKind::MalformedManifest,
                        manifest.identity.key().to_string() + ": two releases on " + manifest.release_date.to_string());
        }
    }
    list.push_back(std::move(manifest));
    std::sort(list.begin(), list.end(),
              [](const auto& a, const auto& b) { return a.release_date < b.release_date; });
}

void ManifestStore::add_alias(const ModelKey& alias, const ModelKey& target) {
    if (alias == target) return;
    if (resolve(target) == alias) {
        throw Error(ErrorKind::MalformedManifest, "alias cycle between " + alias.to_string() + " and " + target.to_string());
    }
    aliases_[alias] = target;
}

ModelKey ManifestStore::resolve(const ModelKey& key) const {
    ModelKey current = key;
    for (std::size_t hops = 0; hops <= aliases_.size(); ++hops) {
        auto it = aliases_.find(current);
        if (it == aliases_.end()) return current;
        current = it->second;
    }
    return current;
}

std::vector<FirmwareManifest> ManifestStore::history(const ModelKey& key, std::optional<Date> as_of) const {
    auto it = by_model_.find(resolve(key));
    if (it == by_model_.end()) return {};
    std::vector<FirmwareManifest> out;
    for (const auto& m : it->second) {
        if (!as_of || m.release_date <= *as_of) out.push_back(m);
    }
    return out;
}

const FirmwareManifest* ManifestStore::find(const ModelIdentity& identity) const {
    auto it = by_model_.find(resolve(identity.key()));
    if (it == by_model_.end()) return nullptr;
    for (const auto& m : it->second) {
        if (m.identity.firmware_version == identity.firmware_version) return &m;
    }
    return nullptr;
}

std::vector<ModelKey> ManifestStore::models() const {
    std::vector<ModelKey> out;
    for (const auto& [key, list] : by_model_) out.push_back(key);
    for (const auto& [alias, target] : aliases_) out.push_back(alias);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t ManifestStore::size() const {
    std::size_t n = 0;
    for (const auto& [key, list] : by_model_) n += list.size();
    return n;
}

ManifestStore ManifestStore::load_directory(const std::filesystem::path& dir) {
    ManifestStore store;
    if (!std::filesystem::is_directory(dir)) return store;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        if (f.filename() == "aliases.json") {
            for (const auto& a : io::read_json(f, ErrorKind::MalformedManifest)) {
                store.add_alias(a.at("alias").get<ModelKey>(), a.at("target").get<ModelKey>());
            }
            continue;
        }
        store.add(extract_components(f));
    }
    return store;
}

}  // namespace devrisk::enrich

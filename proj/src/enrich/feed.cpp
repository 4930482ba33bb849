#include "devrisk/enrich/feed.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::enrich {

namespace {

[[noreturn]] void malformed(std::size_t index, const std::string& id, const std::string& field, const std::string& why) {
    std::string where = "entry " + std::to_string(index);
    if (!id.empty()) where += " (" + id + ")";
    throw Error(ErrorKind::MalformedFeed, where + ": field '" + field + "': " + why);
}

AffectsKey parse_affects(const json& j, std::size_t index, const std::string& id) {
    AffectsKey k;
    if (!j.is_object()) malformed(index, id, "affects", "expected object");
    if (j.contains("component")) {
        k.kind = AffectsKey::Kind::Component;
        if (!j["component"].is_string() || j["component"].get<std::string>().empty()) {
            malformed(index, id, "affects.component", "expected non-empty string");
        }
        k.component = j["component"].get<std::string>();
        k.version_start = j.value("version_start", std::string{});
        k.version_end = j.value("version_end", std::string{});
    } else if (j.contains("vendor") && j.contains("model")) {
        k.kind = AffectsKey::Kind::Model;
        k.model = {j["vendor"].get<std::string>(), j["model"].get<std::string>()};
        if (k.model.vendor.empty() || k.model.model.empty()) {
            malformed(index, id, "affects.model", "vendor and model must be non-empty");
        }
    } else {
        malformed(index, id, "affects", "needs 'component' or 'vendor'+'model'");
    }
    return k;
}

VulnerabilityFeedEntry parse_entry(const json& j, std::size_t index) {
    if (!j.is_object()) malformed(index, "", "", "expected object");
    VulnerabilityFeedEntry e;
    auto id = j.find("id");
    if (id == j.end() || !id->is_string()) malformed(index, "", "id", "missing or not a string");
    e.cve_id = id->get<std::string>();
    if (!is_valid_cve_id(e.cve_id)) malformed(index, e.cve_id, "id", "not a CVE identifier");

    auto published = j.find("published");
    if (published == j.end() || !published->is_string()) malformed(index, e.cve_id, "published", "missing");
    try {
        e.published = Date::parse(published->get<std::string>());
    } catch (const Error& err) {
        malformed(index, e.cve_id, "published", err.what());
    }

    auto score = j.find("score");
    if (score == j.end() || !score->is_number()) malformed(index, e.cve_id, "score", "missing or not a number");
    e.cvss_score = score->get<double>();
    if (!(e.cvss_score >= 0.0 && e.cvss_score <= 10.0)) {
        malformed(index, e.cve_id, "score", std::to_string(e.cvss_score) + " outside [0, 10]");
    }

    auto affects = j.find("affects");
    if (affects == j.end() || !affects->is_array() || affects->empty()) {
        malformed(index, e.cve_id, "affects", "expected non-empty array");
    }
    for (const auto& a : *affects) e.affects.push_back(parse_affects(a, index, e.cve_id));

    e.description = j.value("description", std::string{});
    e.source = j.value("source", std::string{});
    if (auto p = j.find("exploitation_probability"); p != j.end() && !p->is_null()) {
        if (!p->is_number() || p->get<double>() < 0.0 || p->get<double>() > 1.0) {
            malformed(index, e.cve_id, "exploitation_probability", "expected number in [0, 1]");
        }
        e.exploitation_probability = p->get<double>();
    }
    return e;
}

std::vector<VulnerabilityFeedEntry> dedup_and_sort(std::vector<VulnerabilityFeedEntry> entries, std::ostream* log) {
    std::map<std::string, VulnerabilityFeedEntry> by_id;
    for (auto& e : entries) {
        auto [it, inserted] = by_id.try_emplace(e.cve_id, e);
        if (inserted) continue;
        if (log) {
            *log << "feed: duplicate " << e.cve_id << " (scores " << it->second.cvss_score << " and " << e.cvss_score
                 << "), keeping the higher\n";
        }
        const auto& kept = it->second;
        // Equal scores: the earlier record wins, so the result does not depend on input order.
        if (e.cvss_score > kept.cvss_score ||
            (e.cvss_score == kept.cvss_score &&
             std::tie(e.published, e.description, e.source) < std::tie(kept.published, kept.description, kept.source))) {
            it->second = std::move(e);
        }
    }
    std::vector<VulnerabilityFeedEntry> out;
    out.reserve(by_id.size());
    for (auto& [id, e] : by_id) out.push_back(std::move(e));
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.published < b.published; });
    return out;
}

}  // namespace

void to_json(json& j, const AffectsKey& k) {
    if (k.kind == AffectsKey::Kind::Component) {
        j = json{{"component", k.component}};
        if (!k.version_start.empty()) j["version_start"] = k.version_start;
        if (!k.version_end.empty()) j["version_end"] = k.version_end;
    } else {
        j = json{{"vendor", k.model.vendor}, {"model", k.model.model}};
    }
}

void to_json(json& j, const VulnerabilityFeedEntry& e) {
    j = json{{"id", e.cve_id},
             {"published", e.published},
             {"score", e.cvss_score},
             {"affects", e.affects},
             {"description", e.description}};
    if (e.exploitation_probability) j["exploitation_probability"] = *e.exploitation_probability;
    if (!e.source.empty()) j["source"] = e.source;
}

std::vector<VulnerabilityFeedEntry> parse_feed(const json& j, std::ostream* log) {
    if (!j.is_array()) throw Error(ErrorKind::MalformedFeed, "feed must be a JSON array");
    std::vector<VulnerabilityFeedEntry> entries;
    entries.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        try {
            entries.push_back(parse_entry(j[i], i));
        } catch (const json::exception& e) {
            malformed(i, "", "", e.what());
        }
    }
    return dedup_and_sort(std::move(entries), log);
}

std::vector<VulnerabilityFeedEntry> ingest_feed(const std::filesystem::path& path, std::ostream* log) {
    return parse_feed(io::read_json(path, ErrorKind::MalformedFeed), log);
}

std::vector<VulnerabilityFeedEntry> merge_feeds(std::vector<VulnerabilityFeedEntry> base,
                                                const std::vector<VulnerabilityFeedEntry>& extra, std::ostream* log) {
    base.insert(base.end(), extra.begin(), extra.end());
    return dedup_and_sort(std::move(base), log);
}

json feed_to_json(const std::vector<VulnerabilityFeedEntry>& feed) {
    json out = json::array();
    for (const auto& e : feed) out.push_back(e);
    return out;
}

}  // namespace devrisk::enrich

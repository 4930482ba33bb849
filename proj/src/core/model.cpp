#include "devrisk/core/model.hpp"

#include <algorithm>
#include <array>
#include <regex>
#include <utility>

#include "devrisk/core/error.hpp"

namespace devrisk {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "validation_error";
        case ErrorKind::OutOfRange: return "out_of_range";
        case ErrorKind::EmptyCorpus: return "empty_corpus";
        case ErrorKind::InsufficientSamples: return "insufficient_samples";
        case ErrorKind::DegenerateTrace: return "degenerate_trace";
        case ErrorKind::DomainMismatch: return "domain_mismatch";
        case ErrorKind::MalformedFeed: return "malformed_feed";
        case ErrorKind::MalformedManifest: return "malformed_manifest";
        case ErrorKind::MalformedInput: return "malformed_input";
        case ErrorKind::UnknownDevice: return "unknown_device";
        case ErrorKind::IdentificationFailed: return "identification_failed";
        case ErrorKind::NoAssessment: return "no_assessment";
        case ErrorKind::UnknownCategory: return "unknown_category";
        case ErrorKind::UnknownTarget: return "unknown_target";
        case ErrorKind::Io: return "io_error";
    }
    return "error";
}

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<RiskLevel, 3> kRiskNames{{
    {RiskLevel::Low, "low"}, {RiskLevel::Medium, "medium"}, {RiskLevel::High, "high"}}};
constexpr NameTable<FutureRiskLevel, 4> kFutureNames{{{FutureRiskLevel::Low, "low"},
                                                       {FutureRiskLevel::Medium, "medium"},
                                                       {FutureRiskLevel::High, "high"},
                                                       {FutureRiskLevel::Critical, "critical"}}};
constexpr NameTable<VulnTrendLevel, 3> kVulnNames{{
    {VulnTrendLevel::Low, "low"}, {VulnTrendLevel::Medium, "medium"}, {VulnTrendLevel::High, "high"}}};
constexpr NameTable<PatchTrendLevel, 3> kPatchNames{{
    {PatchTrendLevel::Fast, "fast"}, {PatchTrendLevel::Medium, "medium"}, {PatchTrendLevel::Slow, "slow"}}};
constexpr NameTable<Color, 3> kColorNames{{
    {Color::Green, "green"}, {Color::Yellow, "yellow"}, {Color::Red, "red"}}};
constexpr NameTable<DeviceCategory, 2> kCategoryNames{{
    {DeviceCategory::Business, "business"}, {DeviceCategory::Private, "private"}}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum v) {
    for (const auto& [e, name] : table) {
        if (e == v) return name;
    }
    return "?";
}

template <typename Enum, std::size_t N>
Enum parse_name(const NameTable<Enum, N>& table, std::string_view s, std::string_view what) {
    for (const auto& [e, name] : table) {
        if (name == s) return e;
    }
    throw Error(ErrorKind::MalformedInput, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->template get<T>();
}

json year_map_to_json(const std::map<int, int>& m) {
    json out = json::object();
    for (const auto& [year, count] : m) out[std::to_string(year)] = count;
    return out;
}

std::map<int, int> year_map_from_json(const json& j) {
    std::map<int, int> out;
    for (const auto& [key, value] : j.items()) {
        out[std::stoi(key)] = value.get<int>();
    }
    return out;
}

}  // namespace

std::string_view to_string(RiskLevel v) { return name_of(kRiskNames, v); }
std::string_view to_string(FutureRiskLevel v) { return name_of(kFutureNames, v); }
std::string_view to_string(VulnTrendLevel v) { return name_of(kVulnNames, v); }
std::string_view to_string(PatchTrendLevel v) { return name_of(kPatchNames, v); }
std::string_view to_string(Color v) { return name_of(kColorNames, v); }
std::string_view to_string(DeviceCategory v) { return name_of(kCategoryNames, v); }

RiskLevel parse_risk_level(std::string_view s) { return parse_name(kRiskNames, s, "risk level"); }
FutureRiskLevel parse_future_risk_level(std::string_view s) {
    return parse_name(kFutureNames, s, "future risk level");
}
VulnTrendLevel parse_vuln_trend_level(std::string_view s) {
    return parse_name(kVulnNames, s, "vulnerability trend");
}
PatchTrendLevel parse_patch_trend_level(std::string_view s) {
    return parse_name(kPatchNames, s, "patch trend");
}
Color parse_color(std::string_view s) { return parse_name(kColorNames, s, "color"); }
DeviceCategory parse_device_category(std::string_view s) {
    return parse_name(kCategoryNames, s, "device category");
}

bool is_valid_cve_id(std::string_view id) {
    static const std::regex pattern{R"(CVE-\d{4}-\d{4,})"};
    return std::regex_match(id.begin(), id.end(), pattern);
}

void sort_cve_table(std::vector<AssessedVulnerability>& table) {
    std::sort(table.begin(), table.end(), [](const AssessedVulnerability& a, const AssessedVulnerability& b) {
        if (a.severity != b.severity) return a.severity > b.severity;
        if (a.published != b.published) return a.published > b.published;
        return a.cve_id < b.cve_id;
    });
}

void to_json(json& j, RiskLevel v) { j = to_string(v); }
void from_json(const json& j, RiskLevel& v) { v = parse_risk_level(j.get<std::string>()); }
void to_json(json& j, FutureRiskLevel v) { j = to_string(v); }
void from_json(const json& j, FutureRiskLevel& v) { v = parse_future_risk_level(j.get<std::string>()); }
void to_json(json& j, VulnTrendLevel v) { j = to_string(v); }
void from_json(const json& j, VulnTrendLevel& v) { v = parse_vuln_trend_level(j.get<std::string>()); }
void to_json(json& j, PatchTrendLevel v) { j = to_string(v); }
void from_json(const json& j, PatchTrendLevel& v) { v = parse_patch_trend_level(j.get<std::string>()); }
void to_json(json& j, Color v) { j = to_string(v); }
void from_json(const json& j, Color& v) { v = parse_color(j.get<std::string>()); }
void to_json(json& j, DeviceCategory v) { j = to_string(v); }
void from_json(const json& j, DeviceCategory& v) { v = parse_device_category(j.get<std::string>()); }

void to_json(json& j, const Date& d) { j = d.to_string(); }
void from_json(const json& j, Date& d) { d = Date::parse(j.get<std::string>()); }

void to_json(json& j, const ModelKey& k) { j = json{{"vendor", k.vendor}, {"model", k.model}}; }
void from_json(const json& j, ModelKey& k) {
    j.at("vendor").get_to(k.vendor);
    j.at("model").get_to(k.model);
}

void to_json(json& j, const ModelIdentity& m) {
    j = json{{"vendor", m.vendor}, {"model", m.model}, {"firmware_version", m.firmware_version}};
}

void from_json(const json& j, ModelIdentity& m) {
    j.at("vendor").get_to(m.vendor);
    j.at("model").get_to(m.model);
    m.firmware_version = j.value("firmware_version", std::string(kWildcardVersion));
    if (m.vendor.empty() || m.model.empty()) {
        throw Error(ErrorKind::MalformedInput, "model identity requires non-empty vendor and model");
    }
}

void to_json(json& j, const ResolvedIdentity& r) {
    j = json{{"identity", r.identity}, {"confidence", r.confidence}, {"version_assumed", r.version_assumed}};
}

void from_json(const json& j, ResolvedIdentity& r) {
    j.at("identity").get_to(r.identity);
    j.at("confidence").get_to(r.confidence);
    r.version_assumed = j.value("version_assumed", false);
}

void to_json(json& j, const DeviceRecord& d) {
    j = json{{"device_id", d.device_id},
             {"network_address", d.network_address},
             {"category", d.category},
             {"device_type", d.device_type},
             {"owner", d.owner},
             {"identification", d.identification ? json(*d.identification) : json(nullptr)},
             {"registered_at", format_rfc3339(d.registered_at)}};
}

void from_json(const json& j, DeviceRecord& d) {
    d.device_id = j.value("device_id", std::string{});
    j.at("network_address").get_to(d.network_address);
    j.at("category").get_to(d.category);
    d.device_type = j.value("device_type", std::string{});
    j.at("owner").get_to(d.owner);
    d.identification = get_optional<ResolvedIdentity>(j, "identification");
    auto it = j.find("registered_at");
    d.registered_at = (it != j.end() && it->is_string()) ? parse_rfc3339(it->get<std::string>()) : Timestamp{};
}

void to_json(json& j, const ExceptionalRisk& e) {
    j = json{{"kind", e.kind == ExceptionalRiskKind::PrivateKeyMaterial ? "private_key_material" : "other"},
             {"description", e.description},
             {"evidence", e.evidence}};
    if (e.kind == ExceptionalRiskKind::Other) j["label"] = e.label;
}

void from_json(const json& j, ExceptionalRisk& e) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "private_key_material") {
        e.kind = ExceptionalRiskKind::PrivateKeyMaterial;
    } else if (kind == "other") {
        e.kind = ExceptionalRiskKind::Other;
        e.label = j.value("label", std::string{});
    } else {
        throw Error(ErrorKind::MalformedInput, "unknown exceptional risk kind '" + kind + "'");
    }
    j.at("description").get_to(e.description);
    j.at("evidence").get_to(e.evidence);
    if (e.kind == ExceptionalRiskKind::PrivateKeyMaterial && e.evidence.empty()) {
        throw Error(ErrorKind::MalformedInput, "private key material risk requires evidence");
    }
}

void to_json(json& j, const AssessedVulnerability& v) {
    j = json{{"cve_id", v.cve_id},
             {"cvss_score", v.cvss_score},
             {"severity", v.severity},
             {"published", v.published},
             {"description", v.description}};
    put_optional(j, "patched_in", v.patched_in);
    put_optional(j, "patch_latency_days", v.patch_latency_days);
    put_optional(j, "exploitation_probability", v.exploitation_probability);
}

void from_json(const json& j, AssessedVulnerability& v) {
    j.at("cve_id").get_to(v.cve_id);
    j.at("cvss_score").get_to(v.cvss_score);
    j.at("severity").get_to(v.severity);
    j.at("published").get_to(v.published);
    v.description = j.value("description", std::string{});
    v.patched_in = get_optional<std::string>(j, "patched_in");
    v.patch_latency_days = get_optional<long>(j, "patch_latency_days");
    v.exploitation_probability = get_optional<double>(j, "exploitation_probability");
    if (v.patched_in.has_value() != v.patch_latency_days.has_value()) {
        throw Error(ErrorKind::MalformedInput, v.cve_id + ": patch_latency_days present iff patched_in present");
    }
}

void to_json(json& j, const RiskAssessment& a) {
    j = json{{"device_id", a.device_id},
             {"identity", a.identity},
             {"version_assumed", a.version_assumed},
             {"as_of", a.as_of},
             {"current_risk", a.current_risk},
             {"current_risk_basis", a.current_risk_basis ? json(*a.current_risk_basis) : json(nullptr)},
             {"cve_table", a.cve_table},
             {"exceptional_risks", a.exceptional_risks},
             {"vuln_trend", a.vuln_trend},
             {"patch_trend", a.patch_trend},
             {"patch_trend_mean_days", a.patch_trend_mean_days ? json(*a.patch_trend_mean_days) : json(nullptr)},
             {"future_risk", a.future_risk},
             {"patches_per_year", year_map_to_json(a.patches_per_year)},
             {"vulns_per_year", year_map_to_json(a.vulns_per_year)},
             {"affected_firmware_versions", a.affected_firmware_versions},
             {"generated_at", format_rfc3339(a.generated_at)}};
}

void from_json(const json& j, RiskAssessment& a) {
    j.at("device_id").get_to(a.device_id);
    j.at("identity").get_to(a.identity);
    a.version_assumed = j.value("version_assumed", false);
    j.at("as_of").get_to(a.as_of);
    j.at("current_risk").get_to(a.current_risk);
    a.current_risk_basis = get_optional<double>(j, "current_risk_basis");
    j.at("cve_table").get_to(a.cve_table);
    j.at("exceptional_risks").get_to(a.exceptional_risks);
    j.at("vuln_trend").get_to(a.vuln_trend);
    j.at("patch_trend").get_to(a.patch_trend);
    a.patch_trend_mean_days = get_optional<double>(j, "patch_trend_mean_days");
    j.at("future_risk").get_to(a.future_risk);
    a.patches_per_year = year_map_from_json(j.at("patches_per_year"));
    a.vulns_per_year = year_map_from_json(j.at("vulns_per_year"));
    a.affected_firmware_versions = j.value("affected_firmware_versions", 0);
    a.generated_at = parse_rfc3339(j.at("generated_at").get<std::string>());
}

}  // namespace devrisk

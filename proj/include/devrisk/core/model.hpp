#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "devrisk/core/date.hpp"

namespace devrisk {

using json = nlohmann::json;

// Ordinal levels. Enumerator order is the severity order, so the defaulted
// comparisons are the domain ordering.

enum class RiskLevel { Low, Medium, High };
enum class FutureRiskLevel { Low, Medium, High, Critical };
enum class VulnTrendLevel { Low, Medium, High };
enum class PatchTrendLevel { Fast, Medium, Slow };
enum class Color { Green, Yellow, Red };
enum class DeviceCategory { Business, Private };

/// Display color of a risk level; colors are never stored alongside levels.
constexpr Color color_of(RiskLevel level) {
    switch (level) {
        case RiskLevel::Low: return Color::Green;
        case RiskLevel::Medium: return Color::Yellow;
        case RiskLevel::High: return Color::Red;
    }
    return Color::Red;
}

std::string_view to_string(RiskLevel v);
std::string_view to_string(FutureRiskLevel v);
std::string_view to_string(VulnTrendLevel v);
std::string_view to_string(PatchTrendLevel v);
std::string_view to_string(Color v);
std::string_view to_string(DeviceCategory v);

RiskLevel parse_risk_level(std::string_view s);
FutureRiskLevel parse_future_risk_level(std::string_view s);
VulnTrendLevel parse_vuln_trend_level(std::string_view s);
PatchTrendLevel parse_patch_trend_level(std::string_view s);
Color parse_color(std::string_view s);
DeviceCategory parse_device_category(std::string_view s);

inline constexpr std::string_view kWildcardVersion = "*";

/// Vendor + model, without firmware; the unit that owns a firmware history.
struct ModelKey {
    std::string vendor;
    std::string model;

    std::string to_string() const { return vendor + "/" + model; }
    auto operator<=>(const ModelKey&) const = default;
};

struct ModelIdentity {
    std::string vendor;
    std::string model;
    std::string firmware_version{kWildcardVersion};

    ModelKey key() const { return {vendor, model}; }
    bool has_wildcard_firmware() const { return firmware_version == kWildcardVersion; }
    std::string to_string() const { return vendor + "/" + model + "@" + firmware_version; }

    auto operator<=>(const ModelIdentity&) const = default;
};

/// Outcome of identification stored on a device record.
struct ResolvedIdentity {
    ModelIdentity identity;
    double confidence = 0.0;
    bool version_assumed = false;

    bool operator==(const ResolvedIdentity&) const = default;
};

struct DeviceRecord {
    std::string device_id;
    std::string network_address;
    DeviceCategory category = DeviceCategory::Private;
    std::string device_type;
    std::string owner;
    std::optional<ResolvedIdentity> identification;
    Timestamp registered_at{};

    bool operator==(const DeviceRecord&) const = default;
};

enum class ExceptionalRiskKind { PrivateKeyMaterial, Other };

struct ExceptionalRisk {
    ExceptionalRiskKind kind = ExceptionalRiskKind::Other;
    std::string label;  // only meaningful for Other
    std::string description;
    std::string evidence;

    bool operator==(const ExceptionalRisk&) const = default;
};

struct AssessedVulnerability {
    std::string cve_id;
    double cvss_score = 0.0;
    RiskLevel severity = RiskLevel::Low;
    Date published;
    std::string description;
    std::optional<std::string> patched_in;
    std::optional<long> patch_latency_days;
    std::optional<double> exploitation_probability;

    bool operator==(const AssessedVulnerability&) const = default;
};

struct RiskAssessment {
    std::string device_id;
    ModelIdentity identity;
    bool version_assumed = false;
    Date as_of;
    RiskLevel current_risk = RiskLevel::Low;
    std::optional<double> current_risk_basis;  // highest CVSS among unpatched CVEs
    std::vector<AssessedVulnerability> cve_table;
    std::vector<ExceptionalRisk> exceptional_risks;
    VulnTrendLevel vuln_trend = VulnTrendLevel::Low;
    PatchTrendLevel patch_trend = PatchTrendLevel::Slow;
    std::optional<double> patch_trend_mean_days;
    FutureRiskLevel future_risk = FutureRiskLevel::Low;
    std::map<int, int> patches_per_year;
    std::map<int, int> vulns_per_year;
    int affected_firmware_versions = 0;  // firmware images carrying a currently unpatched CVE
    Timestamp generated_at{};

    bool operator==(const RiskAssessment&) const = default;
};

/// `CVE-YYYY-NNNN...` shape check.
bool is_valid_cve_id(std::string_view id);

/// Orders CVE tables: severity descending, then published descending, then id.
void sort_cve_table(std::vector<AssessedVulnerability>& table);

// JSON (snake_case fields, ISO dates, RFC 3339 timestamps).
void to_json(json& j, const Date& d);
void from_json(const json& j, Date& d);
void to_json(json& j, const ModelKey& k);
void from_json(const json& j, ModelKey& k);
void to_json(json& j, const ModelIdentity& m);
void from_json(const json& j, ModelIdentity& m);
void to_json(json& j, const ResolvedIdentity& r);
void from_json(const json& j, ResolvedIdentity& r);
void to_json(json& j, const DeviceRecord& d);
void from_json(const json& j, DeviceRecord& d);
void to_json(json& j, const ExceptionalRisk& e);
void from_json(const json& j, ExceptionalRisk& e);
void to_json(json& j, const AssessedVulnerability& v);
void from_json(const json& j, AssessedVulnerability& v);
void to_json(json& j, const RiskAssessment& a);
void from_json(const json& j, RiskAssessment& a);

void to_json(json& j, RiskLevel v);
void from_json(const json& j, RiskLevel& v);
void to_json(json& j, FutureRiskLevel v);
void from_json(const json& j, FutureRiskLevel& v);
void to_json(json& j, VulnTrendLevel v);
void from_json(const json& j, VulnTrendLevel& v);
void to_json(json& j, PatchTrendLevel v);
void from_json(const json& j, PatchTrendLevel& v);
void to_json(json& j, Color v);
void from_json(const json& j, Color& v);
void to_json(json& j, DeviceCategory v);
void from_json(const json& j, DeviceCategory& v);

}  // namespace devrisk

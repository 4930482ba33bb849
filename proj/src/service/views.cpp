#include "devrisk/service/views.hpp"

#include <cmath>
#include <cstdio>

#include "devrisk/core/error.hpp"

namespace devrisk::service {

namespace {

constexpr const char* kDefaultCopy = R"json({
  "risk_sentence": {
    "low": "This device poses a low risk for the infrastructure.",
    "medium": "This device poses a medium risk for the infrastructure.",
    "high": "This device poses a high risk for the infrastructure."
  },
  "risk_basis": {
    "none": "No unpatched vulnerabilities are known for its firmware {firmware_version}.",
    "some": "Its firmware {firmware_version} contains unpatched third-party software vulnerabilities rated up to {basis} (CVSS)."
  },
  "action": {
    "low": "No action needed.",
    "medium": "Please update and monitor this device: install firmware updates as soon as they appear.",
    "high": "We strongly advise disconnecting this device from the network until the vendor provides a fixed firmware."
  },
  "trend_sentence": "The future risk of the {model} is {future_risk}: unpatched vulnerabilities of this model are mostly rated {vuln_trend}, and the vendor patches {patch_phrase}.",
  "patch_phrase": {
    "fast": "fast",
    "medium": "at a medium pace",
    "slow": "slowly"
  },
  "patch_mean": "{patch_phrase} (after {mean_days} days on average)",
  "patch_never": "slowly (no vulnerability of this model has been patched so far)",
  "exceptional_none": "No exceptional risks were found in the firmware.",
  "exceptional_consequence": "Attackers who extract it could impersonate the device or decrypt its connections.",
  "icons": {
    "unpatched_vulnerabilities": "Unpatched vulnerabilities were found in {versions} firmware versions of this model; most of them are rated {vuln_trend}.",
    "private_key_material": "Cryptographic key material was found within the identified firmware ({evidence}).",
    "other": "An exceptional risk was found in the firmware: {description}"
  },
  "section_tooltips": {
    "Device Risk Score": "The highest severity of unpatched vulnerabilities in the identified firmware. Exceptional findings such as embedded private keys raise it to high.",
    "Vulnerabilities": "Public CVE reports that affect third-party software in this firmware or this device model, most severe first.",
    "Exceptional Risks": "Findings outside vulnerability databases, for example private keys shipped inside the firmware image.",
    "Future Risk Estimation": "Combines the firmware vulnerability trend and the model patch trend in a risk matrix.",
    "Firmware Vulnerability Trend": "The most common severity among vulnerabilities that are still unpatched in any firmware version of this model.",
    "Model Patch Trend": "How long the vendor takes on average to ship a firmware that fixes a vulnerability once it is publicly known.",
    "Patches per Year": "Firmware releases the vendor published for this model in each of the recent years.",
    "Vulnerabilities per Year": "Vulnerabilities affecting this model, counted by the year they became public."
  }
})json";


std::string format_days(double days) {
    char buf[32];
    if (std::abs(days - std::round(days)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "%.0f", days);
    } else {
        std::snprintf(buf, sizeof buf, "%.1f", days);
    }
    return buf;
}

std::string format_score(double s) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", s);
    return buf;
}

RiskLevel level_of_color(const std::string& color) {
    auto c = parse_color(color);
    switch (c) {
        case Color::Green: return RiskLevel::Low;
        case Color::Yellow: return RiskLevel::Medium;
        case Color::Red: return RiskLevel::High;
    }
    return RiskLevel::High;
}

RiskLevel as_risk(VulnTrendLevel v) { return static_cast<RiskLevel>(static_cast<int>(v)); }

}  // namespace

ViewVersion parse_view_version(std::string_view s) {
    if (s == "guided") return ViewVersion::Guided;
    if (s == "rich") return ViewVersion::Rich;
    throw Error(ErrorKind::Validation, "view version must be 'guided' or 'rich'");
}

CopyTable::CopyTable() : table_(json::parse(kDefaultCopy)) {}

CopyTable::CopyTable(const json& overrides) : CopyTable() {
    if (!overrides.is_object()) throw Error(ErrorKind::Validation, "copy table overrides must be an object");
    table_.merge_patch(overrides);
}

const std::string& CopyTable::text(const std::string& key) const {
    const json* node = &table_;
    std::size_t start = 0;
    while (start <= key.size()) {
        auto dot = key.find('.', start);
        auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        auto it = node->find(part);
        if (it == node->end()) throw Error(ErrorKind::Validation, "copy table has no entry '" + key + "'");
        node = &*it;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!node->is_string()) throw Error(ErrorKind::Validation, "copy table entry '" + key + "' is not text");
    return node->get_ref<const std::string&>();
}

std::string render_template(const std::string& tmpl, const json& vars) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i);
            if (close != std::string::npos) {
                auto name = tmpl.substr(i + 1, close - i - 1);
                if (auto it = vars.find(name); it != vars.end()) {
                    out += it->is_string() ? it->get<std::string>() : it->dump();
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

json device_summary(const DeviceRecord* device, const RiskAssessment& a) {
    json s{{"device_id", a.device_id},
           {"network_address", device ? json(device->network_address) : json(nullptr)},
           {"category", device ? json(device->category) : json(nullptr)},
           {"device_type", device ? json(device->device_type) : json(nullptr)},
           {"owner", device ? json(device->owner) : json(nullptr)},
           {"identity", a.identity},
           {"version_assumed", a.version_assumed},
           {"confidence", device && device->identification ? json(device->identification->confidence) : json(nullptr)},
           {"as_of", a.as_of},
           {"current_risk", a.current_risk},
           {"color", color_of(a.current_risk)},
           {"future_risk", a.future_risk},
           {"cve_count", a.cve_table.size()},
           {"exceptional_risk_count", a.exceptional_risks.size()}};
    return s;
}

json guided_view(const DeviceRecord* device, const RiskAssessment& a, const CopyTable& copy) {
    const std::string risk = std::string(to_string(a.current_risk));
    json vars{{"firmware_version", a.identity.firmware_version},
              {"model", a.identity.vendor + " " + a.identity.model},
              {"future_risk", std::string(to_string(a.future_risk))},
              {"vuln_trend", std::string(to_string(a.vuln_trend))},
              {"versions", a.affected_firmware_versions}};
    if (a.current_risk_basis) vars["basis"] = format_score(*a.current_risk_basis);

    std::string p1 = copy.text("risk_sentence." + risk) + " " +
                     render_template(copy.text(a.current_risk_basis ? "risk_basis.some" : "risk_basis.none"), vars) +
                     " " + copy.text("action." + risk);

    std::string patch_phrase;
    if (a.patch_trend_mean_days) {
        json pv{{"patch_phrase", copy.text("patch_phrase." + std::string(to_string(a.patch_trend)))},
                {"mean_days", format_days(*a.patch_trend_mean_days)}};
        patch_phrase = render_template(copy.text("patch_mean"), pv);
    } else {
        patch_phrase = copy.text("patch_never");
    }
    vars["patch_phrase"] = patch_phrase;
    std::string p2 = render_template(copy.text("trend_sentence"), vars);

    std::string p3;
    if (a.exceptional_risks.empty()) {
        p3 = copy.text("exceptional_none");
    } else {
        for (const auto& r : a.exceptional_risks) {
            if (!p3.empty()) p3 += " ";
            p3 += r.description;
        }
        p3 += " " + copy.text("exceptional_consequence");
    }

    json icons = json::array();
    if (a.affected_firmware_versions > 0) {
        icons.push_back({{"kind", "unpatched_vulnerabilities"},
                         {"color", color_of(as_risk(a.vuln_trend))},
                         {"tooltip", render_template(copy.text("icons.unpatched_vulnerabilities"), vars)}});
    }
    for (const auto& r : a.exceptional_risks) {
        const bool key = r.kind == ExceptionalRiskKind::PrivateKeyMaterial;
        json rv{{"evidence", r.evidence}, {"description", r.description}};
        icons.push_back({{"kind", key ? "private_key_material" : "exceptional_risk"},
                         {"color", color_of(RiskLevel::High)},
                         {"tooltip", render_template(copy.text(key ? "icons.private_key_material" : "icons.other"), rv)}});
    }

    return json{{"version", "guided"},
                {"device", device_summary(device, a)},
                {"traffic_light", color_of(a.current_risk)},
                {"narrative", json::array({p1, p2, p3})},
                {"indicator_icons", icons}};
}

json rich_view(const DeviceRecord* device, const RiskAssessment& a, const CopyTable& copy) {
    json risk_panel{{"title", "Device Risk Score"},
                    {"current_risk", a.current_risk},
                    {"color", color_of(a.current_risk)},
                    {"current_risk_basis", a.current_risk_basis ? json(*a.current_risk_basis) : json(nullptr)},
                    {"cve_table", a.cve_table},
                    {"exceptional_risks", a.exceptional_risks},
                    {"affected_firmware_versions", a.affected_firmware_versions}};
    json full = a;
    json future_panel{{"title", "Future Risk Estimation"},
                      {"future_risk", a.future_risk},
                      {"vuln_trend", a.vuln_trend},
                      {"patch_trend", a.patch_trend},
                      {"patch_trend_mean_days", full.at("patch_trend_mean_days")},
                      {"trend_series",
                       {{"patches_per_year", full.at("patches_per_year")},
                        {"vulns_per_year", full.at("vulns_per_year")}}}};
    return json{{"version", "rich"},
                {"device", device_summary(device, a)},
                {"risk_score_panel", risk_panel},
                {"future_panel", future_panel},
                {"section_tooltips", copy.section_tooltips()}};
}

json key_information_from_guided(const json& guided) {
    std::size_t exceptional = 0;
    for (const auto& icon : guided.at("indicator_icons")) {
        if (icon.at("kind") != "unpatched_vulnerabilities") ++exceptional;
    }
    return json{{"current_risk", level_of_color(guided.at("traffic_light").get<std::string>())},
                {"future_risk", guided.at("device").at("future_risk")},
                {"exceptional_risk_count", exceptional},
                {"cve_count", guided.at("device").at("cve_count")}};
}

json key_information_from_rich(const json& rich) {
    const auto& panel = rich.at("risk_score_panel");
    return json{{"current_risk", panel.at("current_risk")},
                {"future_risk", rich.at("future_panel").at("future_risk")},
                {"exceptional_risk_count", panel.at("exceptional_risks").size()},
                {"cve_count", panel.at("cve_table").size()}};
}

}  // namespace devrisk::service

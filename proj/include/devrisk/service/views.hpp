#pragma once

#include <string>

#include "devrisk/core/model.hpp"

namespace devrisk::service {

enum class ViewVersion { Guided, Rich };

ViewVersion parse_view_version(std::string_view s);

/// Wording for both views. Defaults ship with the binary; a data directory
/// may override any key with its own copy.json.
class CopyTable {
public:
    CopyTable();
    explicit CopyTable(const json& overrides);

    /// Looks up a dotted key such as "action.high"; missing keys throw
    /// Error{Validation}.
    const std::string& text(const std::string& key) const;
    const json& section_tooltips() const { return table_.at("section_tooltips"); }

private:
    json table_;
};

/// Replaces each `{name}` in `tmpl` with vars[name].
std::string render_template(const std::string& tmpl, const json& vars);

/// Concise device + headline risk fields shared by both payloads. `device`
/// may be null for catalog cards.
json device_summary(const DeviceRecord* device, const RiskAssessment& a);

json guided_view(const DeviceRecord* device, const RiskAssessment& a, const CopyTable& copy);
json rich_view(const DeviceRecord* device, const RiskAssessment& a, const CopyTable& copy);

/// Headline facts recovered from a payload by field extraction:
/// {current_risk, future_risk, exceptional_risk_count, cve_count}.
json key_information_from_guided(const json& guided);
json key_information_from_rich(const json& rich);

}  // namespace devrisk::service

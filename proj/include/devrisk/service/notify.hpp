#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/service/store.hpp"

namespace devrisk::service {

struct AssessmentDelta {
    bool current_risk_changed = false;
    bool future_risk_changed = false;
    std::vector<std::string> added_cves;
    std::vector<std::string> removed_cves;

    bool any() const {
        return current_risk_changed || future_risk_changed || !added_cves.empty() || !removed_cves.empty();
    }
};

/// Differences that warrant a notification: either risk level, or the set of
/// CVE ids in the table. Other fields (generated_at, trend series) are ignored.
AssessmentDelta diff_assessments(const RiskAssessment& previous, const RiskAssessment& current);

json notification_payload(const Subscription& s, const RiskAssessment& previous, const RiskAssessment& current,
                          const AssessmentDelta& delta);

/// Throws Error{Validation} unless `sink` is `log:<path>` or an http:// URL.
void validate_sink(const std::string& sink);

/// Delivers notifications to `log:<path>` (one JSON object per line) or by
/// POSTing JSON to an http:// webhook. Delivery failures are reported, not
/// thrown.
class SinkDispatcher {
public:
    /// Returns false when delivery failed; `error` then holds the reason.
    bool deliver(const std::string& sink, const json& payload, std::string* error = nullptr);

private:
    std::mutex log_mutex_;
};

}  // namespace devrisk::service

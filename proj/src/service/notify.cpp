#include "devrisk/service/notify.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <httplib.h>

#include "devrisk/core/error.hpp"

namespace devrisk::service {

namespace {

constexpr std::string_view kLogPrefix = "log:";
constexpr std::string_view kHttpPrefix = "http://";

std::set<std::string> cve_ids(const RiskAssessment& a) {
    std::set<std::string> ids;
    for (const auto& v : a.cve_table) ids.insert(v.cve_id);
    return ids;
}

json levels(const RiskAssessment& a) {
    return json{{"current_risk", a.current_risk}, {"future_risk", a.future_risk}, {"cve_count", a.cve_table.size()}};
}

}  // namespace

AssessmentDelta diff_assessments(const RiskAssessment& previous, const RiskAssessment& current) {
    AssessmentDelta d;
    d.current_risk_changed = previous.current_risk != current.current_risk;
    d.future_risk_changed = previous.future_risk != current.future_risk;
    auto before = cve_ids(previous);
    auto after = cve_ids(current);
    std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(d.added_cves));
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(d.removed_cves));
    return d;
}

json notification_payload(const Subscription& s, const RiskAssessment& previous, const RiskAssessment& current,
                          const AssessmentDelta& delta) {
    return json{{"subscription_id", s.subscription_id},
                {"device_id", current.device_id},
                {"identity", current.identity},
                {"previous", levels(previous)},
                {"current", levels(current)},
                {"delta",
                 {{"current_risk_changed", delta.current_risk_changed},
                  {"future_risk_changed", delta.future_risk_changed},
                  {"added_cves", delta.added_cves},
                  {"removed_cves", delta.removed_cves}}},
                {"generated_at", format_rfc3339(current.generated_at)}};
}

void validate_sink(const std::string& sink) {
    if (sink.rfind(kLogPrefix, 0) == 0 && sink.size() > kLogPrefix.size()) return;
    if (sink.rfind(kHttpPrefix, 0) == 0 && sink.size() > kHttpPrefix.size()) return;
    throw Error(ErrorKind::Validation, "sink must be 'log:<path>' or an http:// webhook URL");
}

bool SinkDispatcher::deliver(const std::string& sink, const json& payload, std::string* error) {
    auto fail = [error](std::string why) {
        if (error) *error = std::move(why);
        return false;
    };
    if (sink.rfind(kLogPrefix, 0) == 0) {
        std::lock_guard lock(log_mutex_);
        std::ofstream out(sink.substr(kLogPrefix.size()), std::ios::app);
        if (!out) return fail("cannot open " + sink);
        out << payload.dump() << "\n";
        return static_cast<bool>(out) || fail("write failed for " + sink);
    }
    if (sink.rfind(kHttpPrefix, 0) == 0) {
        const auto rest = sink.substr(kHttpPrefix.size());
        const auto slash = rest.find('/');
        const std::string host = rest.substr(0, slash);
        const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
        httplib::Client client("http://" + host);
        client.set_connection_timeout(2);
        client.set_read_timeout(5);
        auto res = client.Post(path, payload.dump(), "application/json");
        if (!res) return fail("webhook " + sink + ": " + httplib::to_string(res.error()));
        if (res->status >= 300) return fail("webhook " + sink + " answered " + std::to_string(res->status));
        return true;
    }
    return fail("unsupported sink " + sink);
}

}  // namespace devrisk::service

#pragma once

#include <atomic>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/identify/identifier.hpp"
#include "devrisk/service/config.hpp"
#include "devrisk/service/knowledge_base.hpp"
#include "devrisk/service/notify.hpp"
#include "devrisk/service/store.hpp"
#include "devrisk/service/views.hpp"

namespace devrisk::service {

/// Device registry plus the identify -> enrich -> score pipeline.
///
/// Reads run concurrently; store writes are serialized by the Store. Two
/// requests to assess the same device with the same as_of share one run.
class DeviceRiskService {
public:
    explicit DeviceRiskService(ServiceConfig config);

    const ServiceConfig& config() const { return config_; }
    KnowledgeBase& knowledge() { return kb_; }
    Store& store() { return store_; }

    /// Query value if given, else the configured or scenario date, else today (UTC).
    Date resolve_as_of(const std::optional<Date>& requested) const;

    std::pair<std::string, bool> register_device(DeviceRecord record);
    DeviceEntry get_device(const std::string& device_id) const;

    /// Rows sorted by current risk (High first, unassessed last), then device
    /// type, then id.
    json list_devices(const std::optional<std::string>& owner, const std::optional<DeviceCategory>& category) const;

    /// Throws UnknownDevice, or IdentificationFailed after recording the
    /// device as unidentified.
    RiskAssessment run_assessment(const std::string& device_id, const std::optional<Date>& as_of = std::nullopt);

    /// Throws UnknownDevice or NoAssessment.
    json get_view(const std::string& device_id, ViewVersion version) const;

    /// Catalog models of `label` at their latest firmware, best first.
    /// Throws UnknownCategory.
    json compare_category(const std::string& label, const std::optional<Date>& as_of = std::nullopt) const;

    /// Throws UnknownTarget when the device or model is not known.
    Subscription subscribe(Subscription s);
    void unsubscribe(const std::string& subscription_id);

    identify::IdentificationResult identify(const identify::WebCorpus* corpus, const identify::TimestampTrace* trace,
                                            const std::optional<Date>& as_of = std::nullopt) const;

    json health() const;

    /// Notifications emitted so far (delivered or not), oldest first.
    std::vector<json> sent_notifications() const;

    /// Number of pipeline runs actually executed (joined requests count once).
    std::size_t pipeline_runs() const { return pipeline_runs_.load(); }

    /// Called at the start of every pipeline run; lets tests hold a run open.
    void set_run_hook(std::function<void(const std::string&)> hook) { run_hook_ = std::move(hook); }

private:
    RiskAssessment assess_now(const std::string& device_id, const Date& as_of);
    void notify(const RiskAssessment& previous, const RiskAssessment& current);
    CopyTable copy_table() const;

    ServiceConfig config_;
    KnowledgeBase kb_;
    Store store_;
    SinkDispatcher dispatcher_;

    std::mutex inflight_mutex_;
    std::map<std::string, std::pair<Date, std::shared_future<RiskAssessment>>> inflight_;
    std::atomic<std::size_t> pipeline_runs_{0};
    std::function<void(const std::string&)> run_hook_;

    mutable std::mutex notify_mutex_;
    std::vector<json> notifications_;
};

}  // namespace devrisk::service

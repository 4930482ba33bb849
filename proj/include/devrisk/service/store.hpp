#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "devrisk/core/model.hpp"

namespace devrisk::service {

enum class DeviceStatus { Registered, Assessed, Unidentified };

std::string_view to_string(DeviceStatus s);
void to_json(json& j, DeviceStatus s);
void from_json(const json& j, DeviceStatus& s);

struct DeviceEntry {
    DeviceRecord device;
    DeviceStatus status = DeviceStatus::Registered;
    std::optional<RiskAssessment> assessment;
    std::optional<std::string> last_error;  // set when identification failed
};

void to_json(json& j, const DeviceEntry& e);
void from_json(const json& j, DeviceEntry& e);

/// Change-notification target: one device, or every device of a model.
struct Subscription {
    std::string subscription_id;
    std::optional<std::string> device_id;
    std::optional<ModelKey> model;
    std::string sink;
    Timestamp created_at{};
};

void to_json(json& j, const Subscription& s);
void from_json(const json& j, Subscription& s);

/// Deterministic id for a (network address, owner) pair.
std::string derive_device_id(const std::string& network_address, const std::string& owner);

/// Device registry, latest assessments and subscriptions in one JSON file.
///
/// Every mutation rewrites the file atomically while holding the store lock,
/// so writes are serialized and a crash never leaves a torn file. An empty
/// path keeps everything in memory.
class Store {
public:
    explicit Store(std::filesystem::path path);

    /// Returns the id and whether a new device was created. Registration is
    /// idempotent on (network_address, owner). Throws Error{Validation}.
    std::pair<std::string, bool> register_device(DeviceRecord record);

    std::optional<DeviceEntry> get(const std::string& device_id) const;
    std::vector<DeviceEntry> list() const;

    void put_assessment(const std::string& device_id, const ResolvedIdentity& identity, const RiskAssessment& a);
    void mark_unidentified(const std::string& device_id, const std::string& reason);

    Subscription add_subscription(Subscription s);
    bool remove_subscription(const std::string& subscription_id);
    std::vector<Subscription> subscriptions() const;

    const std::filesystem::path& path() const { return path_; }

private:
    void load();
    void save_locked() const;

    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::map<std::string, DeviceEntry> devices_;
    std::map<std::string, Subscription> subscriptions_;
    std::uint64_t next_subscription_ = 1;
};

}  // namespace devrisk::service

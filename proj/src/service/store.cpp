#include "devrisk/service/store.hpp"

#include <cctype>
#include <cstdio>

#include "devrisk/core/error.hpp"
#include "devrisk/core/io.hpp"

namespace devrisk::service {

namespace {

constexpr int kStoreFormat = 1;

bool valid_address(const std::string& a) {
    if (a.empty() || a.size() > 253) return false;
    for (unsigned char c : a) {
        if (!(std::isalnum(c) || c == '.' || c == ':' || c == '-' || c == '_' || c == '%')) return false;
    }
    return true;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string_view to_string(DeviceStatus s) {
    switch (s) {
        case DeviceStatus::Registered: return "registered";
        case DeviceStatus::Assessed: return "assessed";
        case DeviceStatus::Unidentified: return "unidentified";
    }
    return "registered";
}

void to_json(json& j, DeviceStatus s) { j = std::string(to_string(s)); }

void from_json(const json& j, DeviceStatus& s) {
    const auto text = j.get<std::string>();
    for (auto v : {DeviceStatus::Registered, DeviceStatus::Assessed, DeviceStatus::Unidentified}) {
        if (text == to_string(v)) {
            s = v;
            return;
        }
    }
    throw Error(ErrorKind::MalformedInput, "unknown device status '" + text + "'");
}

void to_json(json& j, const DeviceEntry& e) {
    j = json{{"device", e.device},
             {"status", e.status},
             {"assessment", e.assessment ? json(*e.assessment) : json(nullptr)},
             {"last_error", e.last_error ? json(*e.last_error) : json(nullptr)}};
}

void from_json(const json& j, DeviceEntry& e) {
    j.at("device").get_to(e.device);
    j.at("status").get_to(e.status);
    if (auto it = j.find("assessment"); it != j.end() && !it->is_null()) {
        e.assessment = it->get<RiskAssessment>();
    } else {
        e.assessment.reset();
    }
    if (auto it = j.find("last_error"); it != j.end() && !it->is_null()) {
        e.last_error = it->get<std::string>();
    } else {
        e.last_error.reset();
    }
}

void to_json(json& j, const Subscription& s) {
    j = json{{"subscription_id", s.subscription_id},
             {"device_id", s.device_id ? json(*s.device_id) : json(nullptr)},
             {"model", s.model ? json(*s.model) : json(nullptr)},
             {"sink", s.sink},
             {"created_at", format_rfc3339(s.created_at)}};
}

void from_json(const json& j, Subscription& s) {
    j.at("subscription_id").get_to(s.subscription_id);
    if (auto it = j.find("device_id"); it != j.end() && !it->is_null()) s.device_id = it->get<std::string>();
    if (auto it = j.find("model"); it != j.end() && !it->is_null()) s.model = it->get<ModelKey>();
    j.at("sink").get_to(s.sink);
    s.created_at = parse_rfc3339(j.at("created_at").get<std::string>());
}

std::string derive_device_id(const std::string& network_address, const std::string& owner) {
    // FNV-1a over "address\0owner".
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (unsigned char c : network_address) mix(c);
    mix(0);
    for (unsigned char c : owner) mix(c);
    return "dev-" + hex64(h).substr(0, 12);
}

Store::Store(std::filesystem::path path) : path_(std::move(path)) {
    if (!path_.empty() && std::filesystem::exists(path_)) load();
}

void Store::load() {
    json j = io::read_json(path_);
    try {
        for (const auto& d : j.at("devices")) {
            auto e = d.get<DeviceEntry>();
            devices_[e.device.device_id] = std::move(e);
        }
        for (const auto& s : j.value("subscriptions", json::array())) {
            auto sub = s.get<Subscription>();
            subscriptions_[sub.subscription_id] = std::move(sub);
        }
        next_subscription_ = j.value("next_subscription", std::uint64_t{1});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedInput, path_.string() + ": " + e.what());
    }
}

void Store::save_locked() const {
    if (path_.empty()) return;
    json devices = json::array();
    for (const auto& [id, e] : devices_) devices.push_back(e);
    json subs = json::array();
    for (const auto& [id, s] : subscriptions_) subs.push_back(s);
    json j{{"format", kStoreFormat},
           {"devices", devices},
           {"subscriptions", subs},
           {"next_subscription", next_subscription_}};
    io::write_atomic(path_, j.dump(1) + "\n");
}

std::pair<std::string, bool> Store::register_device(DeviceRecord record) {
    if (!valid_address(record.network_address)) {
        throw Error(ErrorKind::Validation, "network_address must be an IP address or hostname");
    }
    if (record.owner.empty()) throw Error(ErrorKind::Validation, "owner must not be empty");
    if (record.identification) throw Error(ErrorKind::Validation, "identification is assigned by assessment");

    std::lock_guard lock(mutex_);
    for (const auto& [id, e] : devices_) {
        if (e.device.network_address == record.network_address && e.device.owner == record.owner) {
            return {id, false};
        }
    }
    if (record.device_id.empty()) record.device_id = derive_device_id(record.network_address, record.owner);
    if (devices_.count(record.device_id)) {
        throw Error(ErrorKind::Validation, "device_id '" + record.device_id + "' is already registered");
    }
    if (record.registered_at == Timestamp{}) {
        record.registered_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    }
    const std::string id = record.device_id;
    devices_[id] = DeviceEntry{std::move(record), DeviceStatus::Registered, std::nullopt, std::nullopt};
    save_locked();
    return {id, true};
}

std::optional<DeviceEntry> Store::get(const std::string& device_id) const {
    std::lock_guard lock(mutex_);
    auto it = devices_.find(device_id);
    if (it == devices_.end()) return std::nullopt;
    return it->second;
}

std::vector<DeviceEntry> Store::list() const {
    std::lock_guard lock(mutex_);
    std::vector<DeviceEntry> out;
    for (const auto& [id, e] : devices_) out.push_back(e);
    return out;
}

void Store::put_assessment(const std::string& device_id, const ResolvedIdentity& identity, const RiskAssessment& a) {
    std::lock_guard lock(mutex_);
    auto it = devices_.find(device_id);
    if (it == devices_.end()) throw Error(ErrorKind::UnknownDevice, "unknown device '" + device_id + "'");
    it->second.device.identification = identity;
    it->second.status = DeviceStatus::Assessed;
    it->second.assessment = a;
    it->second.last_error.reset();
    save_locked();
}

void Store::mark_unidentified(const std::string& device_id, const std::string& reason) {
    std::lock_guard lock(mutex_);
    auto it = devices_.find(device_id);
    if (it == devices_.end()) throw Error(ErrorKind::UnknownDevice, "unknown device '" + device_id + "'");
    it->second.device.identification.reset();
    it->second.status = DeviceStatus::Unidentified;
    it->second.assessment.reset();
    it->second.last_error = reason;
    save_locked();
}

Subscription Store::add_subscription(Subscription s) {
    if (s.sink.empty()) throw Error(ErrorKind::Validation, "subscription sink must not be empty");
    if (s.device_id.has_value() == s.model.has_value()) {
        throw Error(ErrorKind::Validation, "subscription needs exactly one of device_id or model");
    }
    std::lock_guard lock(mutex_);
    s.subscription_id = "sub-" + std::to_string(next_subscription_++);
    if (s.created_at == Timestamp{}) {
        s.created_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    }
    subscriptions_[s.subscription_id] = s;
    save_locked();
    return s;
}

bool Store::remove_subscription(const std::string& subscription_id) {
    std::lock_guard lock(mutex_);
    if (subscriptions_.erase(subscription_id) == 0) return false;
    save_locked();
    return true;
}

std::vector<Subscription> Store::subscriptions() const {
    std::lock_guard lock(mutex_);
    std::vector<Subscription> out;
    for (const auto& [id, s] : subscriptions_) out.push_back(s);
    return out;
}

}  // namespace devrisk::service

#include "devrisk/service/service.hpp"

#include <algorithm>
#include <iostream>

#include "devrisk/core/error.hpp"
#include "devrisk/enrich/matching.hpp"
#include "devrisk/score/scoring.hpp"

namespace devrisk::service {

namespace {

Timestamp now_seconds() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

int risk_rank(const DeviceEntry& e) {
    return e.assessment ? static_cast<int>(e.assessment->current_risk) + 1 : 0;
}

}  // namespace

DeviceRiskService::DeviceRiskService(ServiceConfig config)
    : config_(std::move(config)), kb_(config_.data_dir, config_.persist_ingest), store_(config_.store_path) {
    config_.scoring.validate();
    for (const auto& d : kb_.snapshot()->scenario.devices) store_.register_device(d);
}

Date DeviceRiskService::resolve_as_of(const std::optional<Date>& requested) const {
    if (requested) return *requested;
    if (config_.default_as_of) return *config_.default_as_of;
    if (auto scenario = kb_.snapshot()->scenario.as_of) return *scenario;
    return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

CopyTable DeviceRiskService::copy_table() const { return CopyTable(kb_.snapshot()->copy_overrides); }

std::pair<std::string, bool> DeviceRiskService::register_device(DeviceRecord record) {
    return store_.register_device(std::move(record));
}

DeviceEntry DeviceRiskService::get_device(const std::string& device_id) const {
    auto e = store_.get(device_id);
    if (!e) throw Error(ErrorKind::UnknownDevice, "unknown device '" + device_id + "'");
    return *e;
}

json DeviceRiskService::list_devices(const std::optional<std::string>& owner,
                                     const std::optional<DeviceCategory>& category) const {
    auto entries = store_.list();
    std::erase_if(entries, [&](const DeviceEntry& e) {
        return (owner && e.device.owner != *owner) || (category && e.device.category != *category);
    });
    std::sort(entries.begin(), entries.end(), [](const DeviceEntry& a, const DeviceEntry& b) {
        const int ra = risk_rank(a), rb = risk_rank(b);
        if (ra != rb) return ra > rb;
        if (a.device.device_type != b.device.device_type) return a.device.device_type < b.device.device_type;
        return a.device.device_id < b.device.device_id;
    });
    json rows = json::array();
    for (const auto& e : entries) {
        const auto* a = e.assessment ? &*e.assessment : nullptr;
        rows.push_back({{"device_id", e.device.device_id},
                        {"network_address", e.device.network_address},
                        {"category", e.device.category},
                        {"device_type", e.device.device_type},
                        {"owner", e.device.owner},
                        {"status", e.status},
                        {"identity", a ? json(a->identity) : json(nullptr)},
                        {"current_risk", a ? json(a->current_risk) : json(nullptr)},
                        {"color", a ? json(color_of(a->current_risk)) : json(nullptr)},
                        {"future_risk", a ? json(a->future_risk) : json(nullptr)},
                        {"cve_count", a ? json(a->cve_table.size()) : json(nullptr)},
                        {"exceptional_risk_count", a ? json(a->exceptional_risks.size()) : json(nullptr)}});
    }
    return rows;
}

RiskAssessment DeviceRiskService::run_assessment(const std::string& device_id, const std::optional<Date>& as_of) {
    if (!store_.get(device_id)) throw Error(ErrorKind::UnknownDevice, "unknown device '" + device_id + "'");
    const Date date = resolve_as_of(as_of);

    while (true) {
        std::promise<RiskAssessment> promise;
        std::shared_future<RiskAssessment> future;
        bool owner = false;
        bool other_date = false;
        {
            std::lock_guard lock(inflight_mutex_);
            auto it = inflight_.find(device_id);
            if (it == inflight_.end()) {
                future = promise.get_future().share();
                inflight_.emplace(device_id, std::make_pair(date, future));
                owner = true;
            } else {
                future = it->second.second;
                other_date = it->second.first != date;
            }
        }
        if (other_date) {
            // A run for another date is in flight: let it finish, then start ours.
            future.wait();
            continue;
        }
        if (!owner) return future.get();

        try {
            promise.set_value(assess_now(device_id, date));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
        {
            std::lock_guard lock(inflight_mutex_);
            inflight_.erase(device_id);
        }
        return future.get();
    }
}

RiskAssessment DeviceRiskService::assess_now(const std::string& device_id, const Date& as_of) {
    ++pipeline_runs_;
    if (run_hook_) run_hook_(device_id);

    const DeviceEntry entry = get_device(device_id);
    const auto knowledge = kb_.snapshot();
    const auto corpus = kb_.corpus_for(entry.device);
    const auto trace = kb_.trace_for(entry.device);

    auto fail = [&](const std::string& reason) -> RiskAssessment {
        store_.mark_unidentified(device_id, reason);
        throw Error(ErrorKind::IdentificationFailed, device_id + ": " + reason);
    };

    identify::IdentificationResult ident;
    try {
        ident = identify(corpus ? &*corpus : nullptr, trace ? &*trace : nullptr, as_of);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IdentificationFailed) return fail(e.what());
        throw;
    }
    if (!ident.resolved) {
        return fail("no candidate identity reached the decision threshold (best projected probability " +
                    std::to_string(ident.decision.confidence) + ")");
    }

    enrich::Enrichment enrichment;
    try {
        enrichment = enrich::enrich_identity(ident.resolved->identity, knowledge->manifests, knowledge->feed, as_of,
                                             config_.scoring.severity);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IdentificationFailed) return fail(e.what());
        throw;
    }

    auto assessment =
        score::assemble_assessment(device_id, *ident.resolved, enrichment, config_.scoring, as_of, now_seconds());
    store_.put_assessment(device_id, *ident.resolved, assessment);
    if (entry.assessment) notify(*entry.assessment, assessment);
    return assessment;
}

void DeviceRiskService::notify(const RiskAssessment& previous, const RiskAssessment& current) {
    const auto delta = diff_assessments(previous, current);
    if (!delta.any()) return;
    const auto knowledge = kb_.snapshot();
    const ModelKey model = current.identity.key();
    for (const auto& s : store_.subscriptions()) {
        const bool hit = (s.device_id && *s.device_id == current.device_id) ||
                         (s.model && (*s.model == model ||
                                      knowledge->manifests.resolve(*s.model) == knowledge->manifests.resolve(model)));
        if (!hit) continue;
        json payload = notification_payload(s, previous, current, delta);
        std::string error;
        const bool ok = dispatcher_.deliver(s.sink, payload, &error);
        if (!ok) std::cerr << "notification " << s.subscription_id << " not delivered: " << error << "\n";
        payload["delivered"] = ok;
        std::lock_guard lock(notify_mutex_);
        notifications_.push_back(std::move(payload));
    }
}

std::vector<json> DeviceRiskService::sent_notifications() const {
    std::lock_guard lock(notify_mutex_);
    return notifications_;
}

json DeviceRiskService::get_view(const std::string& device_id, ViewVersion version) const {
    const auto entry = get_device(device_id);
    if (!entry.assessment) {
        throw Error(ErrorKind::NoAssessment, "device '" + device_id + "' has no assessment (status " +
                                                 std::string(to_string(entry.status)) + ")");
    }
    const auto copy = copy_table();
    return version == ViewVersion::Guided ? guided_view(&entry.device, *entry.assessment, copy)
                                          : rich_view(&entry.device, *entry.assessment, copy);
}

json DeviceRiskService::compare_category(const std::string& label, const std::optional<Date>& as_of) const {
    const auto knowledge = kb_.snapshot();
    const Date date = resolve_as_of(as_of);
    const auto copy = copy_table();

    struct Card {
        RiskAssessment assessment;
        json body;
    };
    std::vector<Card> cards;
    bool known = false;
    for (const auto& entry : knowledge->catalog) {
        if (entry.category != label) continue;
        known = true;
        auto history = knowledge->manifests.history(entry.model, date);
        if (history.empty()) {
            std::cerr << "catalog model " << entry.model.to_string() << " has no firmware released by "
                      << date.to_string() << "\n";
            continue;
        }
        ResolvedIdentity resolved{history.back().identity, 1.0, false};
        resolved.identity.vendor = entry.model.vendor;
        resolved.identity.model = entry.model.model;
        auto enrichment = enrich::enrich_identity(resolved.identity, knowledge->manifests, knowledge->feed, date,
                                                  config_.scoring.severity);
        auto a = score::assemble_assessment("catalog:" + entry.model.to_string(), resolved, enrichment,
                                            config_.scoring, date, now_seconds());
        json body{{"name", entry.name},
                  {"model", entry.model},
                  {"firmware_version", a.identity.firmware_version},
                  {"color", color_of(a.current_risk)},
                  {"current_risk", a.current_risk},
                  {"future_risk", a.future_risk},
                  {"assessment", a},
                  {"guided", guided_view(nullptr, a, copy)},
                  {"rich", rich_view(nullptr, a, copy)}};
        cards.push_back({std::move(a), std::move(body)});
    }
    if (!known) throw Error(ErrorKind::UnknownCategory, "unknown category '" + label + "'");

    std::sort(cards.begin(), cards.end(), [](const Card& x, const Card& y) {
        if (x.assessment.current_risk != y.assessment.current_risk) {
            return x.assessment.current_risk < y.assessment.current_risk;
        }
        if (x.assessment.future_risk != y.assessment.future_risk) {
            return x.assessment.future_risk < y.assessment.future_risk;
        }
        return x.body.at("name") < y.body.at("name");
    });
    json out_cards = json::array();
    for (auto& c : cards) out_cards.push_back(std::move(c.body));
    return json{{"category", label}, {"as_of", date}, {"cards", out_cards}};
}

Subscription DeviceRiskService::subscribe(Subscription s) {
    validate_sink(s.sink);
    if (s.device_id && !store_.get(*s.device_id)) {
        throw Error(ErrorKind::UnknownTarget, "unknown device '" + *s.device_id + "'");
    }
    if (s.model) {
        const auto knowledge = kb_.snapshot();
        const auto models = knowledge->manifests.models();
        const bool in_catalog = std::any_of(knowledge->catalog.begin(), knowledge->catalog.end(),
                                            [&](const CatalogEntry& c) { return c.model == *s.model; });
        if (!in_catalog && std::find(models.begin(), models.end(), *s.model) == models.end()) {
            throw Error(ErrorKind::UnknownTarget, "unknown model '" + s.model->to_string() + "'");
        }
    }
    return store_.add_subscription(std::move(s));
}

void DeviceRiskService::unsubscribe(const std::string& subscription_id) {
    if (!store_.remove_subscription(subscription_id)) {
        throw Error(ErrorKind::UnknownTarget, "unknown subscription '" + subscription_id + "'");
    }
}

identify::IdentificationResult DeviceRiskService::identify(const identify::WebCorpus* corpus,
                                                           const identify::TimestampTrace* trace,
                                                           const std::optional<Date>& as_of) const {
    const auto knowledge = kb_.snapshot();
    identify::IdentificationKnowledge refs{&knowledge->signatures, &knowledge->profiles, &knowledge->manifests};
    return identify::identify_device(corpus, trace, refs, resolve_as_of(as_of), config_.identifier);
}

json DeviceRiskService::health() const {
    const auto knowledge = kb_.snapshot();
    return json{{"status", "ok"},
                {"devices", store_.list().size()},
                {"feed_entries", knowledge->feed.size()},
                {"manifests", knowledge->manifests.size()},
                {"signatures", knowledge->signatures.size()},
                {"profiles", knowledge->profiles.size()},
                {"catalog_models", knowledge->catalog.size()}};
}

}  // namespace devrisk::service

#include "devrisk/identify/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "devrisk/core/error.hpp"

namespace devrisk::identify {

namespace {

Opinion from_map(const std::map<ModelIdentity, std::pair<double, double>>& masses, double uncertainty) {
    Opinion out;
    out.uncertainty = uncertainty;
    for (const auto& [h, mass] : masses) {
        out.hypotheses.push_back(h);
        out.belief.push_back(mass.first);
        out.base_rate.push_back(mass.second);
    }
    return out;
}

void normalize_base_rates(std::vector<double>& rates) {
    double sum = 0.0;
    for (double r : rates) sum += r;
    if (rates.empty()) return;
    if (sum <= 0.0) {
        throw Error(ErrorKind::DomainMismatch, "reconciled base rates sum to zero");
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        for (double& r : rates) r /= sum;
    }
}

}  // namespace

Opinion Opinion::vacuous(std::vector<ModelIdentity> hypotheses) {
    std::sort(hypotheses.begin(), hypotheses.end());
    hypotheses.erase(std::unique(hypotheses.begin(), hypotheses.end()), hypotheses.end());
    Opinion o;
    o.belief.assign(hypotheses.size(), 0.0);
    o.base_rate.assign(hypotheses.size(), hypotheses.empty() ? 0.0 : 1.0 / static_cast<double>(hypotheses.size()));
    o.hypotheses = std::move(hypotheses);
    o.uncertainty = 1.0;
    return o;
}

std::optional<std::size_t> Opinion::index_of(const ModelIdentity& h) const {
    auto it = std::find(hypotheses.begin(), hypotheses.end(), h);
    if (it == hypotheses.end()) return std::nullopt;
    return static_cast<std::size_t>(it - hypotheses.begin());
}

double Opinion::belief_of(const ModelIdentity& h) const {
    auto i = index_of(h);
    return i ? belief[*i] : 0.0;
}

double Opinion::base_rate_of(const ModelIdentity& h) const {
    auto i = index_of(h);
    return i ? base_rate[*i] : 0.0;
}

double Opinion::total_belief() const {
    double sum = 0.0;
    for (double b : belief) sum += b;
    return sum;
}

void Opinion::validate(double tolerance) const {
    if (belief.size() != hypotheses.size() || base_rate.size() != hypotheses.size()) {
        throw Error(ErrorKind::Validation, "opinion vectors differ in length");
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(uncertainty)) throw Error(ErrorKind::Validation, "uncertainty outside [0,1]");
    double rates = 0.0;
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        if (!in_unit(belief[i]) || !in_unit(base_rate[i])) {
            throw Error(ErrorKind::Validation, "mass outside [0,1] for " + hypotheses[i].to_string());
        }
        rates += base_rate[i];
    }
    if (std::abs(total_belief() + uncertainty - 1.0) > tolerance) {
        throw Error(ErrorKind::Validation, "belief + uncertainty != 1");
    }
    if (!hypotheses.empty() && std::abs(rates - 1.0) > tolerance) {
        throw Error(ErrorKind::Validation, "base rates do not sum to 1");
    }
}

void to_json(json& j, const Opinion& o) {
    json hyps = json::array();
    for (std::size_t i = 0; i < o.hypotheses.size(); ++i) {
        hyps.push_back({{"identity", o.hypotheses[i]}, {"belief", o.belief[i]}, {"base_rate", o.base_rate[i]}});
    }
    j = json{{"hypotheses", hyps}, {"uncertainty", o.uncertainty}};
}

void from_json(const json& j, Opinion& o) {
    o = Opinion{};
    for (const auto& h : j.at("hypotheses")) {
        o.hypotheses.push_back(h.at("identity").get<ModelIdentity>());
        o.belief.push_back(h.at("belief").get<double>());
        o.base_rate.push_back(h.at("base_rate").get<double>());
    }
    o.uncertainty = j.at("uncertainty").get<double>();
}

Opinion fuse_opinions(const Opinion& a, const Opinion& b) {
    struct Slot {
        double belief_a = 0.0, belief_b = 0.0;
        double rate_sum = 0.0;
        int rate_count = 0;
    };
    std::map<ModelIdentity, Slot> slots;
    auto collect = [&slots](const Opinion& o, bool first) {
        std::map<ModelIdentity, double> seen_rate;
        for (std::size_t i = 0; i < o.hypotheses.size(); ++i) {
            const ModelIdentity& h = o.hypotheses[i];
            Slot& s = slots[h];
            (first ? s.belief_a : s.belief_b) += o.belief[i];
            auto [it, inserted] = seen_rate.try_emplace(h, o.base_rate[i]);
            if (!inserted) {
                if (std::abs(it->second - o.base_rate[i]) > 1e-6) {
                    throw Error(ErrorKind::DomainMismatch, "conflicting base rates for " + h.to_string());
                }
                continue;
            }
            s.rate_sum += o.base_rate[i];
            ++s.rate_count;
        }
    };
    collect(a, true);
    collect(b, false);

    const double ua = a.uncertainty;
    const double ub = b.uncertainty;
    // Written so that kappa is symmetric in (a, b) and exactly 1 when either side is vacuous.
    const double kappa = std::max(ua, ub) + (std::min(ua, ub) - ua * ub);

    std::map<ModelIdentity, std::pair<double, double>> fused;
    for (const auto& [h, s] : slots) {
        double belief = kappa > 0.0 ? (s.belief_a * ub + s.belief_b * ua) / kappa
                                    : 0.5 * (s.belief_a + s.belief_b);
        fused[h] = {belief, s.rate_sum / s.rate_count};
    }
    Opinion out = from_map(fused, kappa > 0.0 ? (ua * ub) / kappa : 0.0);
    normalize_base_rates(out.base_rate);
    return out;
}

Opinion coarsen_to_model(const Opinion& o) {
    std::map<ModelIdentity, std::pair<double, double>> merged;
    for (std::size_t i = 0; i < o.hypotheses.size(); ++i) {
        ModelIdentity model{o.hypotheses[i].vendor, o.hypotheses[i].model, std::string(kWildcardVersion)};
        auto& slot = merged[model];
        slot.first += o.belief[i];
        slot.second += o.base_rate[i];
    }
    return from_map(merged, o.uncertainty);
}

Opinion extend_domain(const Opinion& o, const std::vector<ModelIdentity>& domain) {
    std::map<ModelIdentity, std::pair<double, double>> merged;
    for (const auto& h : domain) merged[h];
    for (std::size_t i = 0; i < o.hypotheses.size(); ++i) merged[o.hypotheses[i]].first += o.belief[i];
    const double rate = merged.empty() ? 0.0 : 1.0 / static_cast<double>(merged.size());
    for (auto& [h, slot] : merged) slot.second = rate;
    return from_map(merged, o.uncertainty);
}

}  // namespace devrisk::identify

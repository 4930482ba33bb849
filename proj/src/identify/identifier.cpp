#include "devrisk/identify/identifier.hpp"

#include <algorithm>

#include "devrisk/core/error.hpp"

namespace devrisk::identify {

namespace {

ModelIdentity model_level(const ModelKey& key) { return ModelIdentity{key.vendor, key.model}; }

std::vector<ModelIdentity> known_models(const IdentificationKnowledge& k) {
    std::vector<ModelIdentity> out;
    if (k.signatures) {
        for (const auto& s : *k.signatures) out.push_back(model_level(s.identity.key()));
    }
    if (k.profiles) {
        for (const auto& p : *k.profiles) out.push_back(model_level(p.identity.key()));
    }
    if (k.manifests) {
        for (const auto& key : k.manifests->models()) out.push_back(model_level(key));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ResolvedIdentity pick_firmware(const ModelKey& model, const Opinion& web, double confidence,
                               const enrich::ManifestStore* manifests, const Date& as_of) {
    ResolvedIdentity r{ModelIdentity{model.vendor, model.model}, confidence, true};

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < web.hypotheses.size(); ++i) {
        const auto& h = web.hypotheses[i];
        if (h.key() != model || h.has_wildcard_firmware() || web.belief[i] <= 0.0) continue;
        if (!best || web.belief[i] > web.belief[*best]) best = i;
    }
    if (best && (!manifests || manifests->find(web.hypotheses[*best]))) {
        r.identity = web.hypotheses[*best];
        r.version_assumed = false;
        return r;
    }
    if (manifests) {
        auto history = manifests->history(model, as_of);
        if (!history.empty()) r.identity.firmware_version = history.back().identity.firmware_version;
    }
    return r;
}

}  // namespace

IdentificationResult identify_device(const WebCorpus* corpus, const TimestampTrace* trace,
                                     const IdentificationKnowledge& knowledge, const Date& as_of,
                                     const IdentifierConfig& config) {
    const bool has_pages = corpus && !corpus->pages.empty();
    if (!has_pages && !trace) {
        throw Error(ErrorKind::IdentificationFailed, "no web corpus and no timestamp trace available");
    }

    IdentificationResult r;
    if (has_pages && knowledge.signatures && !knowledge.signatures->empty()) {
        r.web = match_web_patterns(*corpus, *knowledge.signatures, config.web);
    }
    if (trace && knowledge.profiles && !knowledge.profiles->empty()) {
        r.skew_ppm = estimate_clock_skew(*trace);
        r.skew = skew_to_opinion(*r.skew_ppm, *knowledge.profiles, config.skew);
    }

    Opinion fused = fuse_opinions(coarsen_to_model(r.web), coarsen_to_model(r.skew));
    r.fused = extend_domain(fused, known_models(knowledge));
    r.decision = decide_identity(r.fused, config.decision);

    if (r.decision.identity) {
        r.resolved = pick_firmware(r.decision.identity->key(), r.web, r.decision.confidence, knowledge.manifests,
                                   as_of);
    }
    return r;
}

void to_json(json& j, const IdentificationResult& r) {
    j = json{{"web_opinion", r.web},
             {"skew_ppm", r.skew_ppm ? json(*r.skew_ppm) : json(nullptr)},
             {"skew_opinion", r.skew},
             {"fused_opinion", r.fused},
             {"decision", r.decision},
             {"resolved", r.resolved ? json(*r.resolved) : json(nullptr)}};
}

}  // namespace devrisk::identify

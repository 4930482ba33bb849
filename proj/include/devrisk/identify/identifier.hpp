#pragma once

#include <optional>
#include <vector>

#include "devrisk/core/model.hpp"
#include "devrisk/enrich/manifest.hpp"
#include "devrisk/identify/clock_skew.hpp"
#include "devrisk/identify/decision.hpp"
#include "devrisk/identify/opinion.hpp"
#include "devrisk/identify/web_match.hpp"

namespace devrisk::identify {

struct IdentifierConfig {
    WebMatchConfig web;
    SkewOpinionConfig skew;
    DecisionConfig decision;
};

/// Read-only reference data consulted during identification.
struct IdentificationKnowledge {
    const std::vector<FingerprintSignature>* signatures = nullptr;
    const std::vector<SkewProfile>* profiles = nullptr;
    const enrich::ManifestStore* manifests = nullptr;
};

struct IdentificationResult {
    Opinion web;                     // version-level web evidence
    std::optional<double> skew_ppm;  // absent without a trace
    Opinion skew;
    Opinion fused;                   // model-level, over every known model
    Decision decision;
    std::optional<ResolvedIdentity> resolved;
};

/// Identifies a device from its web corpus and/or timestamp trace.
///
/// Both sources are coarsened to model level and fused; the fused opinion is
/// expressed over every model known to the knowledge base before the
/// decision rule runs. The firmware version is the strongest version-specific
/// web hypothesis of the chosen model when a manifest exists for it;
/// otherwise the latest release on or before `as_of`, flagged as assumed.
///
/// Throws Error{IdentificationFailed} when neither source carries any
/// evidence (no pages and no trace). A decision below threshold is returned
/// with `resolved` empty.
IdentificationResult identify_device(const WebCorpus* corpus, const TimestampTrace* trace,
                                     const IdentificationKnowledge& knowledge, const Date& as_of,
                                     const IdentifierConfig& config = {});

void to_json(json& j, const IdentificationResult& r);

}  // namespace devrisk::identify

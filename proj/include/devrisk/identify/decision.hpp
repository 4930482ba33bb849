#pragma once

#include <optional>

#include "devrisk/identify/opinion.hpp"

namespace devrisk::identify {

struct DecisionConfig {
    double threshold = 0.6;
    double min_margin = 0.05;
};

struct Decision {
    std::optional<ModelIdentity> identity;  // empty: Unidentified
    double confidence = 0.0;                // projected probability of the best hypothesis
    double runner_up = 0.0;

    bool identified() const { return identity.has_value(); }
};

/// Picks the hypothesis with the highest projected probability
/// P(x) = b(x) + a(x) u. It is accepted only when P reaches the threshold and
/// leads the runner-up by at least the margin.
Decision decide_identity(const Opinion& o, const DecisionConfig& config = {});

void to_json(json& j, const Decision& d);

}  // namespace devrisk::identify

#include "devrisk/identify/decision.hpp"

#include <algorithm>

namespace devrisk::identify {

Decision decide_identity(const Opinion& o, const DecisionConfig& config) {
    Decision d;
    if (o.hypotheses.empty()) return d;

    std::size_t best = 0;
    double best_p = -1.0, second_p = 0.0;
    for (std::size_t i = 0; i < o.hypotheses.size(); ++i) {
        const double p = o.projected(i);
        if (p > best_p) {
            second_p = std::max(second_p, best_p);
            best_p = p;
            best = i;
        } else {
            second_p = std::max(second_p, p);
        }
    }
    d.confidence = best_p;
    d.runner_up = second_p;
    // Margin is compared with a small slack so that margins that are exact in
    // decimal (e.g. 0.55 - 0.50) are not rejected by rounding.
    if (best_p >= config.threshold && best_p - second_p >= config.min_margin - 1e-12) {
        d.identity = o.hypotheses[best];
    }
    return d;
}

void to_json(json& j, const Decision& d) {
    j = json{{"identified", d.identified()},
             {"identity", d.identity ? json(*d.identity) : json(nullptr)},
             {"confidence", d.confidence},
             {"runner_up", d.runner_up}};
}

}  // namespace devrisk::identify

#pragma once

#include <optional>
#include <vector>

#include "devrisk/core/model.hpp"

namespace devrisk::identify {

/// Multinomial subjective-logic opinion over candidate identities.
///
/// `belief[i]` and `base_rate[i]` belong to `hypotheses[i]`. Disbelief in a
/// hypothesis is the belief held by its competitors. An opinion with no
/// hypotheses is vacuous over an implicit "unknown" domain. Producers in this
/// module keep hypotheses in ascending ModelIdentity order, which makes fusion
/// results independent of argument order.
struct Opinion {
    std::vector<ModelIdentity> hypotheses;
    std::vector<double> belief;
    std::vector<double> base_rate;
    double uncertainty = 1.0;

    /// Uncertainty 1, uniform base rates over `hypotheses` (sorted).
    static Opinion vacuous(std::vector<ModelIdentity> hypotheses = {});

    std::optional<std::size_t> index_of(const ModelIdentity& h) const;
    double belief_of(const ModelIdentity& h) const;
    double base_rate_of(const ModelIdentity& h) const;
    double total_belief() const;

    /// P(x) = b(x) + a(x) * u
    double projected(std::size_t i) const { return belief[i] + base_rate[i] * uncertainty; }

    bool is_vacuous() const { return uncertainty == 1.0; }
    bool is_dogmatic() const { return uncertainty == 0.0; }

    /// Throws Error{Validation} when masses fall outside [0,1], do not sum to
    /// one within `tolerance`, or the parallel vectors disagree in size.
    void validate(double tolerance = 1e-9) const;
};

void to_json(json& j, const Opinion& o);
void from_json(const json& j, Opinion& o);

/// Cumulative fusion of two opinions from independent sources.
///
/// Hypothesis sets are unioned (missing ones carry zero belief) and base
/// rates reconciled by averaging then renormalized. When both inputs are
/// dogmatic the equal-weight averaging limit is used.
Opinion fuse_opinions(const Opinion& a, const Opinion& b);

/// Collapses hypotheses that differ only in firmware version onto their
/// wildcard model identity, summing belief and base rate.
Opinion coarsen_to_model(const Opinion& o);

/// Re-expresses `o` over `domain` (plus its own hypotheses) with uniform base
/// rates; the evidence masses are unchanged.
Opinion extend_domain(const Opinion& o, const std::vector<ModelIdentity>& domain);

}  // namespace devrisk::identify

#pragma once

// Normalised value distributions along an evaluation.
//
// At every fuel step the value distribution is divided by its mass, and the
// total-variation distance to the previous normalised distribution is
// recorded. Steps at which no value mass has appeared yet are skipped.

#include "plamb/errors.hpp"
#include "plamb/reduction.hpp"
#include "plamb/syntax.hpp"
#include "plamb/term.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace plamb {

inline const Weight& convergence_threshold() {
    static const Weight eps(1, 1024);
    return eps;
}

inline constexpr std::size_t kStableSteps = 3;

struct NormalizedStep {
    std::size_t fuel_step = 0;
    Weight mass;  // value mass before normalisation
    Dist normalized;
    std::optional<Weight> distance;  // to the previous reported step
};

struct NormalizationReport {
    std::vector<NormalizedStep> steps;
    bool converged = false;
    std::size_t converged_at = 0;  // first step of the stable run
};

/// Half the L1 distance between two distributions over their joint support.
inline Weight total_variation(const Dist& a, const Dist& b) {
    Weight sum;
    for (const auto& e : a) sum += abs(e.weight - b.weight_of(e.term));
    for (const auto& e : b)
        if (a.weight_of(e.term).is_zero()) sum += e.weight;
    return sum / Weight(2);
}

inline Dist normalize_mass(const Dist& d) {
    if (d.mass().is_zero()) return d;
    const Weight inv(mpq_class(1) / d.mass().raw());
    return dist_scale(inv, d);
}

inline NormalizationReport normalize(const Dist& m, std::size_t fuel) {
    NormalizationReport r;
    Dist state = m;
    std::size_t stable = 0;
    for (std::size_t s = 1; s <= fuel; ++s) {
        state = step(state);
        const Dist v = vals(state);
        if (v.mass().is_zero()) continue;
        NormalizedStep ns{s, v.mass(), normalize_mass(v), std::nullopt};
        if (!r.steps.empty()) {
            ns.distance = total_variation(r.steps.back().normalized, ns.normalized);
            stable = *ns.distance < convergence_threshold() ? stable + 1 : 0;
        }
        r.steps.push_back(std::move(ns));
        if (stable == kStableSteps && !r.converged) {
            r.converged = true;
            r.converged_at = r.steps[r.steps.size() - 1 - kStableSteps].fuel_step;
        }
        if (residual_mass(state).is_zero()) {
            // nothing left to reduce: every later step repeats this one
            if (!r.converged) {
                r.converged = true;
                r.converged_at = r.steps[r.steps.size() - 1 - stable].fuel_step;
            }
            break;
        }
    }
    if (r.steps.empty())
        throw DivergenceError("no value mass within " + std::to_string(fuel) + " steps: all mass divergent");
    return r;
}

}  // namespace plamb

#pragma once

// Seeded generators for property tests and the self test.

#include "plamb/lifting.hpp"
#include "plamb/reduction.hpp"
#include "plamb/syntax.hpp"
#include "plamb/term.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace plamb {

struct GenConfig {
    std::size_t max_depth = 4;
    std::vector<std::string> free_vars{"x", "y", "z"};
    long grid = 4;          // weights are multiples of 1/grid
    double p_sum = 0.25;    // chance of a proper formal sum at a distribution node
    double p_abs = 0.4;
    double p_var = 0.3;     // remaining mass goes to applications
    std::size_t max_sum = 3;
    std::vector<Term> library;  // closed terms spliced in at random
    double p_library = 0.0;
};

class TermGen {
public:
    TermGen(std::uint64_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(std::move(cfg)) {}

    std::mt19937_64& rng() { return rng_; }
    const GenConfig& config() const { return cfg_; }

    Dist dist() { return dist(cfg_.max_depth, 0); }
    Term term() { return term(cfg_.max_depth, 0); }

    /// Proper sub-distribution weights on the grid: n positive multiples of
    /// 1/grid with total at most one.
    std::vector<Weight> grid_weights(std::size_t n) {
        const long g = cfg_.grid;
        std::vector<long> units(n, 1);
        long left = g - static_cast<long>(n);
        for (std::size_t i = 0; i < n && left > 0; ++i) {
            const long extra = uniform(0, left);
            units[i] += extra;
            left -= extra;
        }
        std::vector<Weight> w;
        for (long u : units) w.emplace_back(u, g);
        return w;
    }

    Dist dist(std::size_t depth, std::uint32_t bound) {
        if (depth > 0 && chance(cfg_.p_sum)) {
            const std::size_t n = static_cast<std::size_t>(uniform(2, static_cast<long>(cfg_.max_sum)));
            if (static_cast<long>(n) <= cfg_.grid) {
                DistBuilder b;
                for (const auto& w : grid_weights(n)) b.add(term(depth - 1, bound), w);
                return std::move(b).build();
            }
        }
        return Dist::point(term(depth, bound));
    }

    Term term(std::size_t depth, std::uint32_t bound) {
        if (!cfg_.library.empty() && chance(cfg_.p_library))
            return cfg_.library[static_cast<std::size_t>(uniform(0, static_cast<long>(cfg_.library.size()) - 1))];
        const double r = real();
        if (depth == 0 || r < cfg_.p_var) return variable(bound);
        if (r < cfg_.p_var + cfg_.p_abs) return Term::abs("x", dist(depth - 1, bound + 1));
        return Term::app(dist(depth - 1, bound), dist(depth - 1, bound));
    }

    Term variable(std::uint32_t bound) {
        const std::size_t nf = cfg_.free_vars.size();
        const long pick = uniform(0, static_cast<long>(bound + nf) - 1);
        if (pick < static_cast<long>(bound)) return Term::bound(static_cast<std::uint32_t>(pick));
        return Term::free(cfg_.free_vars[static_cast<std::size_t>(pick) - bound]);
    }

    /// A distribution whose evaluation converges within `fuel`, found by
    /// rejection sampling (gives up after `tries` attempts and returns the
    /// whnf part of the last attempt).
    Dist terminating(std::size_t fuel, std::size_t tries = 64) {
        Dist last;
        for (std::size_t i = 0; i < tries; ++i) {
            last = dist();
            if (evolve(last, fuel).converged) return last;
        }
        return vals(last);
    }

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    bool chance(double p) { return real() < p; }

private:
    std::mt19937_64 rng_;
    GenConfig cfg_;
};

struct LiftInstance {
    FinSupportDist<std::size_t> source;
    FinSupportDist<std::size_t> target;
    RelMatrix relation;
};

/// Random supports of size 1..max_support with grid weights of total at most
/// one, and a relation whose cells are set with probability `density`.
inline LiftInstance random_lift_instance(std::mt19937_64& rng, std::size_t max_support, long grid,
                                         double density = 0.35) {
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    auto make = [&] {
        FinSupportDist<std::size_t> d;
        const auto n = static_cast<std::size_t>(pick(1, static_cast<long>(max_support)));
        long left = grid;
        for (std::size_t i = 0; i < n; ++i) {
            const long u = left > 0 ? pick(0, left) : 0;
            left -= u;
            d.points.push_back(i);
            d.weights.emplace_back(u, grid);
        }
        return d;
    };
    LiftInstance inst{make(), make(), {}};
    inst.relation = RelMatrix(inst.source.size(), inst.target.size());
    std::bernoulli_distribution cell(density);
    for (std::size_t i = 0; i < inst.source.size(); ++i)
        for (std::size_t j = 0; j < inst.target.size(); ++j)
            if (cell(rng)) inst.relation.set(i, j);
    return inst;
}

}  // namespace plamb

#pragma once

// Bounded open simulation.
//
// A check at depth k evolves both sides with the fuel budget and compares the
// resulting value distributions in two blocks:
//
//  * the abstraction block, compared as a whole: its convergence mass must be
//    covered, and if k > 0 the blocks are opened with a fresh symbol and
//    compared again at depth k - 1;
//  * the open applications, compared point by point through a max-flow
//    matching whose edges require equal heads and arities and, if k > 0,
//    argument-wise simulation at depth k - 1.
//
// Abstraction mass is never matched against open-application mass.
//
// Mass still on non-whnf target entries after evolution may later turn into
// values of any shape, so it is granted to the source as slack, except for
// entries whose reducts provably never reach a value. Slack is carried into
// the opened abstraction block, where the missing target mass would reappear. NoCounterexample is a bounded statement: unless `exact` is
// set, it does not claim that the simulation holds even at the given depth.

#include "plamb/lifting.hpp"
#include "plamb/lts.hpp"
#include "plamb/reduction.hpp"
#include "plamb/term.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace plamb {

struct SimParams {
    std::size_t depth = 4;
    std::size_t fuel = 64;
    bool slack_enabled = true;
};

enum class WitnessKind { ConvergeDeficit, KernelTypeMismatch, FlowDeficit };

inline const char* to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::ConvergeDeficit: return "ConvergeDeficit";
        case WitnessKind::KernelTypeMismatch: return "KernelTypeMismatch";
        case WitnessKind::FlowDeficit: return "FlowDeficit";
    }
    return "?";
}

struct Witness {
    /// Labels from the root pair to the failing observation. All but the last
    /// are `ret` steps; the last is `conv` or `call y 0/n` and names the
    /// observation whose mass could not be matched.
    std::vector<Label> path;
    WitnessKind kind = WitnessKind::ConvergeDeficit;
    std::vector<Entry> cut;  // source whnf entries that could not be covered
    Weight deficit;
};

struct Verdict {
    bool holds = true;  // NoCounterexample
    bool exact = true;  // every evolution on both sides converged
    SimParams params;
    std::optional<Witness> witness;
};

class SimChecker {
public:
    explicit SimChecker(SimParams params) : params_(params) {}

    const SimParams& params() const { return params_; }

    Verdict check(const Dist& m, const Dist& n) {
        Outcome o = run(m, n, params_.depth, 0, Weight::zero());
        return Verdict{o.holds, o.exact, params_, std::move(o.witness)};
    }

    /// Spine entries u, v are related at depth k when their heads and arities
    /// agree and their arguments are pairwise simulated at depth k.
    bool app_edge(const Term& u, const Term& v, std::size_t k) {
        bool exact = true;
        return edge(u, v, k + 1, 1, exact);
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    struct Outcome {
        bool holds = true;
        bool exact = true;
        std::optional<Witness> witness;
    };

    struct Key {
        Dist m;
        Dist n;
        std::size_t depth;
        std::size_t level;
        Weight inherited;
        bool operator==(const Key&) const = default;
    };

    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = detail::mix(k.m.hash(), k.n.hash());
            h = detail::mix(h, k.depth);
            h = detail::mix(h, k.level);
            return detail::mix(h, k.inherited.hash());
        }
    };

    struct Split {
        std::vector<Entry> abs;
        std::vector<Entry> spine;
        Weight abs_mass;
        Weight spine_mass;
    };

    static Split split(const Dist& values) {
        Split s;
        for (const auto& e : values) {
            if (e.term.is_abs()) {
                s.abs.push_back(e);
                s.abs_mass += e.weight;
            } else {
                s.spine.push_back(e);
                s.spine_mass += e.weight;
            }
        }
        return s;
    }

    static Dist open_block(const std::vector<Entry>& abs, const std::string& sym) {
        DistBuilder b;
        const Dist arg = var(sym);
        for (const auto& e : abs) b.add(e.weight, instantiate(e.term, arg));
        return std::move(b).build();
    }

    static std::string fresh_symbol(std::size_t level, const Dist& a, const Dist& b) {
        for (std::size_t n = level;; ++n) {
            std::string s = reserved_symbol(n);
            if (!occurs_free(s, a) && !occurs_free(s, b)) return s;
        }
    }

    bool edge(const Term& u, const Term& v, std::size_t k, std::size_t level, bool& exact) {
        auto su = std::get<SpineView>(whnf_view(u));
        auto sv = std::get<SpineView>(whnf_view(v));
        if (su.head != sv.head || su.args.size() != sv.args.size()) return false;
        if (k == 0) return true;
        for (std::size_t i = 0; i < su.args.size(); ++i) {
            const Outcome& o = run(su.args[i], sv.args[i], k - 1, level, Weight::zero());
            exact = exact && o.exact;
            if (!o.holds) return false;
        }
        return true;
    }

    const Outcome& run(const Dist& m, const Dist& n, std::size_t k, std::size_t level, const Weight& inherited) {
        Key key{m, n, k, level, inherited};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Outcome o = compute(m, n, k, level, inherited);
        return memo_.emplace(std::move(key), std::move(o)).first->second;
    }

    Outcome compute(const Dist& m, const Dist& n, std::size_t k, std::size_t level, const Weight& inherited) {
        Outcome out;
        const EvolveReport rm = evolve(m, params_.fuel);
        const EvolveReport rn = evolve(n, params_.fuel);
        out.exact = rm.converged && rn.converged;
        const Weight slack = params_.slack_enabled ? inherited + probe_.live_residual(rn.state) : Weight::zero();
        const Split d = split(rm.values);
        const Split e = split(rn.values);

        auto refute = [&](Label last, WitnessKind kind, std::vector<Entry> cut, Weight deficit) {
            out.holds = false;
            out.witness = Witness{{std::move(last)}, kind, std::move(cut), std::move(deficit)};
            return out;
        };

        if (d.abs_mass > e.abs_mass + slack) {
            const bool typed_away = d.abs_mass <= e.abs_mass + e.spine_mass + slack;
            return refute(Converge{}, typed_away ? WitnessKind::KernelTypeMismatch : WitnessKind::ConvergeDeficit,
                          d.abs, d.abs_mass - e.abs_mass - slack);
        }

        if (!d.spine.empty()) {
            FinSupportDist<std::size_t> src, tgt;
            for (std::size_t i = 0; i < d.spine.size(); ++i) {
                src.points.push_back(i);
                src.weights.push_back(d.spine[i].weight);
            }
            for (std::size_t j = 0; j < e.spine.size(); ++j) {
                tgt.points.push_back(j);
                tgt.weights.push_back(e.spine[j].weight);
            }
            RelMatrix rel(d.spine.size(), e.spine.size());
            bool edges_exact = true;
            for (std::size_t i = 0; i < d.spine.size(); ++i)
                for (std::size_t j = 0; j < e.spine.size(); ++j)
                    rel.set(i, j, edge(d.spine[i].term, e.spine[j].term, k, level + 1, edges_exact));
            out.exact = out.exact && edges_exact;
            LiftVerdict lv = lift_check_flow(src, tgt, rel, slack);
            if (!lv.holds) {
                std::vector<Entry> cut;
                for (std::size_t i : lv.witness_cut) cut.push_back(d.spine[i]);
                const auto first = std::get<SpineView>(whnf_view(cut.front().term));
                const Weight spare = max(Weight::zero(), e.abs_mass - d.abs_mass);
                const auto kind = lv.deficit <= spare ? WitnessKind::KernelTypeMismatch : WitnessKind::FlowDeficit;
                return refute(Call{first.head, 0, first.args.size()}, kind, std::move(cut), lv.deficit);
            }
        }

        if (k > 0 && !d.abs.empty()) {
            const std::string sym = fresh_symbol(level, rm.values, rn.values);
            const Dist dm = open_block(d.abs, sym);
            const Dist dn = open_block(e.abs, sym);
            const Outcome& sub = run(dm, dn, k - 1, level + 1, slack);
            out.exact = out.exact && sub.exact;
            if (!sub.holds) {
                out.holds = false;
                out.witness = sub.witness;
                out.witness->path.insert(out.witness->path.begin(), Ret{sym});
            }
        }
        return out;
    }

    SimParams params_;
    DivergenceProbe probe_;
    std::unordered_map<Key, Outcome, KeyHash> memo_;
};

/// Bounded check that n simulates m.
inline Verdict sim_check(const Dist& m, const Dist& n, const SimParams& params) {
    return SimChecker(params).check(m, n);
}

/// Spine entries related at depth k: same head, same arity, arguments
/// pairwise simulated at depth k.
inline bool app_edge(const Term& u, const Term& v, std::size_t k, std::size_t fuel) {
    SimParams p;
    p.depth = k;
    p.fuel = fuel;
    return SimChecker(p).app_edge(u, v, k);
}

/// Simulation in both directions: (m below n, n below m).
inline std::pair<Verdict, Verdict> bisim_check(const Dist& m, const Dist& n, const SimParams& params) {
    return {sim_check(m, n, params), sim_check(n, m, params)};
}

}  // namespace plamb

#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library code they check and favour obviousness over
// speed.

#include "plamb/lifting.hpp"
#include "plamb/lts.hpp"
#include "plamb/reduction.hpp"
#include "plamb/simulation.hpp"
#include "plamb/term.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using namespace plamb;

// --- reduction -------------------------------------------------------------

using Bag = std::map<Term, Weight>;

inline void put(Bag& b, const Term& t, const Weight& w) {
    if (w.is_zero()) return;
    b[t] += w;
}

inline Dist to_dist(const Bag& b) {
    std::vector<Entry> es;
    for (const auto& [t, w] : b)
        if (!w.is_zero()) es.push_back({t, w});
    return Dist::from_entries(es);
}

inline Dist replace_index(const Dist& d, std::uint32_t k, const Dist& s);

inline Bag replace_index_term(const Term& t, std::uint32_t k, const Dist& s) {
    Bag out;
    switch (t.kind()) {
        case TermKind::Bound:
            if (t.index() == k) {
                for (const auto& e : s) put(out, e.term, e.weight);
            } else {
                put(out, t, Weight::one());
            }
            break;
        case TermKind::Free: put(out, t, Weight::one()); break;
        case TermKind::Abs: put(out, Term::abs(t.name(), replace_index(t.body(), k + 1, s)), Weight::one()); break;
        case TermKind::App:
            put(out, Term::app(replace_index(t.fun(), k, s), replace_index(t.arg(), k, s)), Weight::one());
            break;
    }
    return out;
}

// Replaces bound index k (counted from the current position) by the locally
// closed distribution s, multiplying weights through.
inline Dist replace_index(const Dist& d, std::uint32_t k, const Dist& s) {
    Bag out;
    for (const auto& e : d)
        for (const auto& [t, w] : replace_index_term(e.term, k, s)) put(out, t, e.weight * w);
    return to_dist(out);
}

inline bool whnf(const Term& t) {
    if (t.is_abs() || t.is_free()) return true;
    if (!t.is_app()) return false;
    return t.fun().is_unit_point() && !t.fun().only().is_abs() && whnf(t.fun().only());
}

inline Bag head_step(const Term& t) {
    Bag out;
    if (whnf(t) || !t.is_app()) {
        put(out, t, Weight::one());
        return out;
    }
    const Dist& f = t.fun();
    if (!f.is_unit_point()) {
        for (const auto& e : f) put(out, Term::app(Dist::point(e.term), t.arg()), e.weight);
        return out;
    }
    const Term& h = f.only();
    if (h.is_abs()) {
        for (const auto& e : replace_index(h.body(), 0, t.arg())) put(out, e.term, e.weight);
        return out;
    }
    put(out, Term::app(to_dist(head_step(h)), t.arg()), Weight::one());
    return out;
}

/// Reduces the non-whnf entries of d one at a time, each against the state
/// left by the previous one.
inline Dist sequential_round(const Dist& d) {
    std::vector<Entry> todo;
    Bag state;
    for (const auto& e : d) {
        put(state, e.term, e.weight);
        if (!whnf(e.term)) todo.push_back(e);
    }
    for (const auto& e : todo) {
        state[e.term] -= e.weight;
        for (const auto& [t, w] : head_step(e.term)) put(state, t, e.weight * w);
    }
    return to_dist(state);
}

/// Explores every reduct of t; true when the set of reducts is finite (at
/// most 32 terms) and contains no whnf.
inline bool diverges(const Term& t) {
    std::vector<Term> seen{t};
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (whnf(seen[i])) return false;
        if (seen.size() > 32) return false;
        for (const auto& [u, w] : head_step(seen[i]))
            if (std::find(seen.begin(), seen.end(), u) == seen.end()) seen.push_back(u);
    }
    return true;
}

inline Weight live_residual(const Dist& state) {
    Weight r;
    for (const auto& e : state)
        if (!whnf(e.term) && !diverges(e.term)) r += e.weight;
    return r;
}

/// Value mass of `Y t` on the identity after k unfoldings.
inline Weight y_mass(unsigned k) { return Weight::one() - pow2_inv(k); }

// --- lifting ---------------------------------------------------------------

/// Mass of source points in `set` minus the mass of their image.
inline Weight hall_gap(const FinSupportDist<std::size_t>& d, const FinSupportDist<std::size_t>& e,
                       const RelMatrix& r, const std::vector<std::size_t>& set) {
    std::vector<bool> img(e.size(), false);
    Weight src, tgt;
    for (std::size_t i : set) {
        src += d.weights[i];
        for (std::size_t j = 0; j < e.size(); ++j)
            if (r(i, j)) img[j] = true;
    }
    for (std::size_t j = 0; j < e.size(); ++j)
        if (img[j]) tgt += e.weights[j];
    return src - tgt;
}

// --- simulation ------------------------------------------------------------

struct Split {
    std::vector<Entry> abs, spine;
    Weight abs_mass, spine_mass;
};

inline Split split(const Dist& values) {
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

inline std::string fresh(const Dist& a, const Dist& b) {
    for (std::size_t n = 100;; ++n) {
        const std::string s = "#" + std::to_string(n);
        if (!occurs_free(s, a) && !occurs_free(s, b)) return s;
    }
}

inline Dist open_block(const std::vector<Entry>& abs, const std::string& s) {
    Bag out;
    for (const auto& e : abs)
        for (const auto& x : replace_index(e.term.body(), 0, var(s))) put(out, x.term, e.weight * x.weight);
    return to_dist(out);
}

/// Unmemoised simulation with subset enumeration in place of max-flow.
inline bool sim(const Dist& m, const Dist& n, std::size_t k, std::size_t fuel, bool slack_on, const Weight& inherited);

inline bool spine_edge(const Term& u, const Term& v, std::size_t k, std::size_t fuel, bool slack_on) {
    std::vector<Dist> au, av;
    const Term* cu = &u;
    const Term* cv = &v;
    while (cu->is_app()) {
        au.insert(au.begin(), cu->arg());
        cu = &cu->fun().only();
    }
    while (cv->is_app()) {
        av.insert(av.begin(), cv->arg());
        cv = &cv->fun().only();
    }
    if (cu->name() != cv->name() || au.size() != av.size()) return false;
    if (k == 0) return true;
    for (std::size_t i = 0; i < au.size(); ++i)
        if (!sim(au[i], av[i], k - 1, fuel, slack_on, Weight::zero())) return false;
    return true;
}

inline bool sim(const Dist& m, const Dist& n, std::size_t k, std::size_t fuel, bool slack_on, const Weight& inherited) {
    const EvolveReport rm = evolve(m, fuel), rn = evolve(n, fuel);
    const Weight slack = slack_on ? inherited + live_residual(rn.state) : Weight::zero();
    const Split d = split(rm.values), e = split(rn.values);
    if (d.abs_mass > e.abs_mass + slack) return false;
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
        RelMatrix r(src.size(), tgt.size());
        for (std::size_t i = 0; i < src.size(); ++i)
            for (std::size_t j = 0; j < tgt.size(); ++j)
                r.set(i, j, spine_edge(d.spine[i].term, e.spine[j].term, k, fuel, slack_on));
        const LiftVerdict v = lift_check_subsets(src, tgt, r);
        if (v.deficit > slack) return false;
    }
    if (k > 0 && !d.abs.empty()) {
        const std::string s = fresh(rm.values, rn.values);
        return sim(open_block(d.abs, s), open_block(e.abs, s), k - 1, fuel, slack_on, slack);
    }
    return true;
}

/// Follows the `ret` steps of a witness path with weak transitions and
/// recomputes the final observation. Returns the deficit it reproduces.
inline std::optional<Weight> replay(const Dist& m, const Dist& n, const Witness& w, const SimParams& p) {
    Dist a = m, b = n;
    Weight slack;
    for (std::size_t i = 0; i + 1 < w.path.size(); ++i) {
        const auto* r = std::get_if<Ret>(&w.path[i]);
        if (!r) return std::nullopt;
        const EvolveReport ra = evolve(a, p.fuel), rb = evolve(b, p.fuel);
        if (p.slack_enabled) slack += live_residual(rb.state);
        a = weak_max_transition(ra.values, *r, 0).state;
        const auto sb = split(rb.values);
        b = sb.abs.empty() ? Dist() : weak_max_transition(rb.values, *r, 0).state;
    }
    const EvolveReport ra = evolve(a, p.fuel), rb = evolve(b, p.fuel);
    if (p.slack_enabled) slack += live_residual(rb.state);
    const Split d = split(ra.values), e = split(rb.values);
    if (std::holds_alternative<Converge>(w.path.back())) return d.abs_mass - e.abs_mass - slack;
    if (!std::holds_alternative<Call>(w.path.back())) return std::nullopt;
    // the cut is closed under the edge relation, so its gap is the deficit
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < d.spine.size(); ++i)
        for (const auto& c : w.cut)
            if (c.term == d.spine[i].term) set.push_back(i);
    FinSupportDist<std::size_t> src, tgt;
    for (std::size_t i = 0; i < d.spine.size(); ++i) {
        src.points.push_back(i);
        src.weights.push_back(d.spine[i].weight);
    }
    for (std::size_t j = 0; j < e.spine.size(); ++j) {
        tgt.points.push_back(j);
        tgt.weights.push_back(e.spine[j].weight);
    }
    SimChecker checker(p);
    RelMatrix r(src.size(), tgt.size());
    const std::size_t k = p.depth + 1 - w.path.size();
    for (std::size_t i = 0; i < src.size(); ++i)
        for (std::size_t j = 0; j < tgt.size(); ++j)
            r.set(i, j, k == 0 ? spine_edge(d.spine[i].term, e.spine[j].term, 0, p.fuel, p.slack_enabled)
                               : checker.app_edge(d.spine[i].term, e.spine[j].term, k - 1));
    return hall_gap(src, tgt, r, set) - slack;
}

}  // namespace oracle

#pragma once

// Lazy (call-by-name, weak head) reduction of distributions.

#include "plamb/term.hpp"

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace plamb {

struct AbsView {
    std::string binder;
    Term abstraction;
};

struct SpineView {
    std::string head;
    std::vector<Dist> args;
};

struct NotWhnf {};

using WhnfView = std::variant<AbsView, SpineView, NotWhnf>;

/// Classifies a term as an abstraction, an open application `x M1 .. Mn`
/// whose function positions are all unit points, or neither.
inline WhnfView whnf_view(const Term& t) {
    switch (t.kind()) {
        case TermKind::Abs: return AbsView{t.name(), t};
        case TermKind::Free: return SpineView{t.name(), {}};
        case TermKind::Bound: return NotWhnf{};
        case TermKind::App: {
            if (!t.fun().is_unit_point()) return NotWhnf{};
            WhnfView inner = whnf_view(t.fun().only());
            if (auto* s = std::get_if<SpineView>(&inner)) {
                s->args.push_back(t.arg());
                return inner;
            }
            return NotWhnf{};
        }
    }
    return NotWhnf{};
}

inline bool is_spine(const Term& t) {
    const Term* cur = &t;
    while (cur->is_app()) {
        if (!cur->fun().is_unit_point()) return false;
        cur = &cur->fun().only();
    }
    return cur->is_free();
}

inline bool is_whnf(const Term& t) { return t.is_abs() || is_spine(t); }

/// Sub-distribution supported on weak head normal forms.
inline Dist vals(const Dist& d) {
    std::vector<Entry> out;
    for (const auto& e : d)
        if (is_whnf(e.term)) out.push_back(e);
    if (out.size() == d.size()) return d;
    return Dist::from_entries(std::move(out));
}

/// Mass on entries that are not yet in weak head normal form.
inline Weight residual_mass(const Dist& d) {
    Weight r;
    for (const auto& e : d)
        if (!is_whnf(e.term)) r += e.weight;
    return r;
}

/// One head reduction of a single term; whnf terms map to themselves.
inline Dist step_term(const Term& t) {
    if (!t.is_app() || is_whnf(t)) return Dist::point(t);
    const Dist& f = t.fun();
    if (!f.is_unit_point()) {
        // application is left linear in a proper distribution
        DistBuilder b;
        for (const auto& e : f) b.add(Term::app(Dist::point(e.term), t.arg()), e.weight);
        return std::move(b).build();
    }
    const Term& h = f.only();
    if (h.is_abs()) return instantiate(h, t.arg());
    return Dist::point(Term::app(step_term(h), t.arg()));
}

/// One parallel step: every non-whnf entry takes one head reduction.
inline Dist step(const Dist& d) {
    DistBuilder b;
    for (const auto& e : d) {
        if (is_whnf(e.term))
            b.add(e.term, e.weight);
        else
            b.add(e.weight, step_term(e.term));
    }
    return std::move(b).build();
}

struct EvolveReport {
    Dist values;
    Weight residual;
    std::size_t steps_used = 0;
    bool converged = false;
    Dist state;  // full distribution reached, including non-whnf entries
};

/// Runs at most `fuel` parallel steps, stopping once no mass is left on
/// non-whnf entries.
inline EvolveReport evolve(const Dist& d, std::size_t fuel) {
    EvolveReport r;
    r.state = d;
    for (;;) {
        r.residual = residual_mass(r.state);
        if (r.residual.is_zero() || r.steps_used >= fuel) break;
        r.state = step(r.state);
        ++r.steps_used;
    }
    r.values = vals(r.state);
    r.converged = r.residual.is_zero();
    return r;
}

/// Recognises terms that can never produce a value: the terms reachable from
/// them by head reduction form a finite set without any whnf, as for
/// (\x. x x) (\x. x x). Gives up (answers false) beyond `budget` terms.
class DivergenceProbe {
public:
    explicit DivergenceProbe(std::size_t budget = 32) : budget_(budget) {}

    bool diverges(const Term& t) {
        if (is_whnf(t)) return false;
        if (auto it = cache_.find(t); it != cache_.end()) return it->second;
        std::unordered_set<Term> seen{t};
        std::vector<Term> todo{t};
        bool closed = true;
        while (!todo.empty() && closed) {
            const Term cur = todo.back();
            todo.pop_back();
            for (const auto& e : step_term(cur)) {
                if (is_whnf(e.term)) {
                    closed = false;
                    break;
                }
                if (seen.insert(e.term).second) {
                    todo.push_back(e.term);
                    if (seen.size() > budget_) closed = false;
                }
            }
        }
        cache_.emplace(t, closed);
        return closed;
    }

    /// Residual mass that might still turn into values.
    Weight live_residual(const Dist& state) {
        Weight r;
        for (const auto& e : state)
            if (!is_whnf(e.term) && !diverges(e.term)) r += e.weight;
        return r;
    }

private:
    std::size_t budget_;
    std::unordered_map<Term, bool> cache_;
};

}  // namespace plamb

#pragma once

// Labelled transitions on weak head normal forms.
//
//   abstraction  --conv-->      I
//   abstraction  --ret s-->     body[s/x]      (the beta step is folded in)
//   y M1 .. Mn   --call y i/n--> Mi  (1 <= i <= n),  --call y 0/n--> I
//   non-whnf     --tau-->       one head reduction

#include "plamb/errors.hpp"
#include "plamb/reduction.hpp"
#include "plamb/syntax.hpp"
#include "plamb/term.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace plamb {

struct Tau {
    auto operator<=>(const Tau&) const = default;
};
struct Converge {
    auto operator<=>(const Converge&) const = default;
};
struct Ret {
    std::string sym;
    auto operator<=>(const Ret&) const = default;
};
struct Call {
    std::string sym;
    std::size_t index = 0;
    std::size_t arity = 0;
    auto operator<=>(const Call&) const = default;
};

using Label = std::variant<Tau, Converge, Ret, Call>;

inline std::string to_string(const Label& l) {
    struct {
        std::string operator()(const Tau&) const { return "tau"; }
        std::string operator()(const Converge&) const { return "conv"; }
        std::string operator()(const Ret& r) const { return "ret " + r.sym; }
        std::string operator()(const Call& c) const {
            return "call " + c.sym + " " + std::to_string(c.index) + "/" + std::to_string(c.arity);
        }
    } v;
    return std::visit(v, l);
}

struct Transition {
    Label label;
    Dist target;
};

inline const Dist& identity_dist() {
    static const Dist d = lam("x", var("x"));
    return d;
}

/// Generated symbol `#n`.
inline std::string reserved_symbol(std::size_t n) { return "#" + std::to_string(n); }

/// Strong transitions of a single term. `fresh` is the symbol fed to the
/// applicative test and must not occur free in `t`.
inline std::vector<Transition> strong_transitions(const Term& t, const std::string& fresh) {
    if (occurs_free(fresh, t)) throw FreshNameCollision("symbol " + fresh + " occurs free in " + print(t));
    std::vector<Transition> out;
    WhnfView view = whnf_view(t);
    if (std::holds_alternative<NotWhnf>(view)) {
        out.push_back({Tau{}, step_term(t)});
    } else if (auto* a = std::get_if<AbsView>(&view)) {
        out.push_back({Converge{}, identity_dist()});
        out.push_back({Ret{fresh}, instantiate(a->abstraction, var(fresh))});
    } else {
        auto& s = std::get<SpineView>(view);
        const std::size_t n = s.args.size();
        out.push_back({Call{s.head, 0, n}, identity_dist()});
        for (std::size_t i = 1; i <= n; ++i) out.push_back({Call{s.head, i, n}, s.args[i - 1]});
    }
    return out;
}

namespace detail {

inline bool affords(const Term& t, const Label& l) {
    WhnfView view = whnf_view(t);
    if (std::holds_alternative<Tau>(l)) return std::holds_alternative<NotWhnf>(view);
    if (std::holds_alternative<Converge>(l) || std::holds_alternative<Ret>(l))
        return std::holds_alternative<AbsView>(view);
    const auto& c = std::get<Call>(l);
    const auto* s = std::get_if<SpineView>(&view);
    return s && s->head == c.sym && s->args.size() == c.arity && c.index <= c.arity;
}

}  // namespace detail

/// Weak max transition: the visible step is taken by every whnf entry that
/// affords it (targets scaled by the entry weight), then the combined target
/// is evolved. The target is unique.
inline EvolveReport weak_max_transition(const Dist& d, const Label& l, std::size_t fuel) {
    if (std::holds_alternative<Tau>(l)) return evolve(d, fuel);
    if (const auto* r = std::get_if<Ret>(&l))
        if (occurs_free(r->sym, d)) throw FreshNameCollision("symbol " + r->sym + " occurs free in " + print(d));
    DistBuilder b;
    bool any = false;
    for (const auto& e : d) {
        if (!detail::affords(e.term, l)) continue;
        any = true;
        if (std::holds_alternative<Converge>(l)) {
            b.add(e.weight, identity_dist());
        } else if (const auto* r = std::get_if<Ret>(&l)) {
            b.add(e.weight, instantiate(e.term, var(r->sym)));
        } else {
            const auto& c = std::get<Call>(l);
            if (c.index == 0) {
                b.add(e.weight, identity_dist());
            } else {
                auto view = std::get<SpineView>(whnf_view(e.term));
                b.add(e.weight, view.args[c.index - 1]);
            }
        }
    }
    if (!any) throw LabelNotApplicable("no entry affords " + to_string(l));
    return evolve(std::move(b).build(), fuel);
}

/// Visible labels afforded by the whnf part of `d`, in a fixed order:
/// conv and ret first, then calls grouped by head and arity.
inline std::vector<Label> visible_labels(const Dist& d, const std::string& fresh) {
    std::vector<Label> out;
    bool abs = false;
    std::vector<Call> calls;
    for (const auto& e : d) {
        WhnfView view = whnf_view(e.term);
        if (std::holds_alternative<AbsView>(view)) abs = true;
        if (auto* s = std::get_if<SpineView>(&view))
            for (std::size_t i = 0; i <= s->args.size(); ++i) calls.push_back(Call{s->head, i, s->args.size()});
    }
    if (abs) {
        out.push_back(Converge{});
        out.push_back(Ret{fresh});
    }
    std::sort(calls.begin(), calls.end(), [](const Call& a, const Call& b) {
        return std::tie(a.sym, a.arity, a.index) < std::tie(b.sym, b.arity, b.index);
    });
    calls.erase(std::unique(calls.begin(), calls.end()), calls.end());
    for (auto& c : calls) out.push_back(std::move(c));
    return out;
}

}  // namespace plamb

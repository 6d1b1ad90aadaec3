#pragma once

// Finite approximants.
//
// An approximant is a finite tree of abstractions, open applications and the
// undefined term, with rational weights. The undefined term is represented by
// the canonical divergent term (\x. x x) (\x. x x), so approximants are
// ordinary distributions and embedding is the identity on the representation.
//
// Membership c in a_k(M) is decided block-wise on the values of M:
//
//  * undefined entries of c contribute nothing;
//  * the abstractions of c together need strictly less mass than those of M,
//    and their opened bodies must be in a_{k-1} of M's opened bodies;
//  * the open applications of c must lift strictly into those of M along
//    edges with equal head and arity whose arguments are pairwise in
//    a_{k-1} at unit scale.
//
// The strict lift quantifies over every distribution way below M's values at
// once, so no search over intermediate distributions is needed.

#include "plamb/errors.hpp"
#include "plamb/lifting.hpp"
#include "plamb/lts.hpp"
#include "plamb/reduction.hpp"
#include "plamb/syntax.hpp"
#include "plamb/term.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plamb {

inline bool is_bottom(const Term& t) { return t == omega_term(); }

namespace detail {

inline bool fin_dist(const Dist& d);

inline bool fin_head(const Term& t) {
    if (t.is_free() || t.is_bound()) return true;
    if (!t.is_app() || !t.fun().is_unit_point()) return false;
    return fin_head(t.fun().only()) && fin_dist(t.arg());
}

inline bool fin_term(const Term& t) {
    if (is_bottom(t)) return true;
    if (t.is_abs()) return fin_dist(t.body());
    return fin_head(t);
}

inline bool fin_dist(const Dist& d) {
    for (const auto& e : d)
        if (!fin_term(e.term)) return false;
    return true;
}

}  // namespace detail

/// True when every entry, recursively, is undefined, an abstraction or an
/// open application.
inline bool is_fin_dist(const Dist& d) { return detail::fin_dist(d); }

/// A validated approximant.
class FinDist {
public:
    FinDist() = default;
    explicit FinDist(Dist d) : d_(std::move(d)) {
        if (!is_fin_dist(d_)) throw Error("not a finite approximant: " + print(d_, {true}));
    }

    static FinDist bottom() { return FinDist(Dist::point(omega_term())); }

    const Dist& dist() const { return d_; }

    friend bool operator==(const FinDist&, const FinDist&) = default;
    friend auto operator<=>(const FinDist& a, const FinDist& b) { return a.d_ <=> b.d_; }

private:
    Dist d_;
};

inline Dist embed(const FinDist& c) { return c.dist(); }

inline FinDist parse_fin(std::string_view src, const Prelude* prelude = nullptr) {
    ParseOptions opts;
    opts.prelude = prelude;
    opts.allow_bottom = true;
    return FinDist(parse(src, opts));
}

inline std::string print(const FinDist& c) { return print(c.dist(), PrintOptions{true}); }

namespace detail {

struct Blocks {
    std::vector<Entry> abs;
    std::vector<Entry> spine;
    Weight abs_mass;
};

inline Blocks blocks(const Dist& values) {
    Blocks b;
    for (const auto& e : values) {
        if (is_bottom(e.term)) continue;
        if (e.term.is_abs()) {
            b.abs.push_back(e);
            b.abs_mass += e.weight;
        } else {
            b.spine.push_back(e);
        }
    }
    return b;
}

inline Dist open_all(const std::vector<Entry>& abs, const std::string& sym, const Weight& scale = Weight::one()) {
    DistBuilder b;
    const Dist arg = var(sym);
    for (const auto& e : abs) b.add(scale * e.weight, instantiate(e.term, arg));
    return std::move(b).build();
}

inline std::string fresh_for(std::size_t level, const Dist& a, const Dist& b) {
    for (std::size_t n = level;; ++n) {
        std::string s = reserved_symbol(n);
        if (!occurs_free(s, a) && !occurs_free(s, b)) return s;
    }
}

inline bool approx_rec(const Dist& c, const Dist& m, std::size_t k, std::size_t fuel, std::size_t level) {
    const Blocks cb = blocks(c);
    if (cb.abs.empty() && cb.spine.empty()) return true;
    if (k == 0) return false;
    const Dist w = evolve(m, fuel).values;
    const Blocks wb = blocks(w);

    if (!cb.abs.empty()) {
        if (!(cb.abs_mass < wb.abs_mass)) return false;
        const std::string s = fresh_for(level, c, w);
        if (!approx_rec(open_all(cb.abs, s), open_all(wb.abs, s), k - 1, fuel, level + 1)) return false;
    }
    if (cb.spine.empty()) return true;

    FinSupportDist<std::size_t> src, tgt;
    for (std::size_t i = 0; i < cb.spine.size(); ++i) {
        src.points.push_back(i);
        src.weights.push_back(cb.spine[i].weight);
    }
    for (std::size_t j = 0; j < wb.spine.size(); ++j) {
        tgt.points.push_back(j);
        tgt.weights.push_back(wb.spine[j].weight);
    }
    RelMatrix rel(cb.spine.size(), wb.spine.size());
    for (std::size_t i = 0; i < cb.spine.size(); ++i) {
        const auto u = std::get<SpineView>(whnf_view(cb.spine[i].term));
        for (std::size_t j = 0; j < wb.spine.size(); ++j) {
            const auto v = std::get<SpineView>(whnf_view(wb.spine[j].term));
            if (u.head != v.head || u.args.size() != v.args.size()) continue;
            bool ok = true;
            for (std::size_t a = 0; ok && a < u.args.size(); ++a)
                ok = approx_rec(u.args[a], v.args[a], k - 1, fuel, level + 1);
            rel.set(i, j, ok);
        }
    }
    return lift_check_strict(src, tgt, rel);
}

}  // namespace detail

/// Decides c in a_k(m), with convergence replaced by evolution under `fuel`.
inline bool approx_check(const FinDist& c, const Dist& m, std::size_t k, std::size_t fuel) {
    return detail::approx_rec(c.dist(), m, k, fuel, 0);
}

/// Largest multiple of `grain` strictly below `w` (may be zero).
inline Weight round_strictly_below(const Weight& w, const Weight& grain) {
    const mpq_class q = w.raw() / grain.raw();
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    c -= 1;
    if (c <= 0) return Weight::zero();
    return Weight(mpq_class(c) * grain.raw());
}

inline void check_granularity(const Weight& grain) {
    if (!grain.is_positive() || grain.raw().get_num() != 1)
        throw GranularityError("granularity must be 1/g for a positive integer g, got " + grain.str());
}

namespace detail {

inline Dist generate(const Dist& m, std::size_t j, std::size_t fuel, const Weight& grain, std::size_t level) {
    if (j == 0) return Dist::point(omega_term());
    const Dist w = evolve(m, fuel).values;
    const Blocks wb = blocks(w);
    DistBuilder out;

    const Weight abs_w = round_strictly_below(wb.abs_mass, grain);
    if (abs_w.is_positive()) {
        const std::string s = fresh_for(level, w, Dist());
        // the whole block is generated as one abstraction over its normalised body
        const Weight inv(mpq_class(1) / wb.abs_mass.raw());
        const Dist body = generate(open_all(wb.abs, s, inv), j - 1, fuel, grain, level + 1);
        out.add(Term::lambda(s, body), abs_w);
    }
    for (const auto& e : wb.spine) {
        const Weight p = round_strictly_below(e.weight, grain);
        if (!p.is_positive()) continue;
        const auto v = std::get<SpineView>(whnf_view(e.term));
        Dist acc = var(v.head);
        for (const auto& a : v.args) acc = app(acc, generate(a, j - 1, fuel, grain, level + 1));
        out.add(acc.only(), p);
    }
    return std::move(out).build();
}

}  // namespace detail

/// Approximants of m at depths 0..k: evolve, cut the tree at the given depth
/// with the undefined term, and round every weight strictly down to the grid.
/// The depth-j element is in a_j(m) for the same fuel.
inline std::vector<FinDist> approx_generate(const Dist& m, std::size_t k, std::size_t fuel, const Weight& grain) {
    check_granularity(grain);
    std::vector<FinDist> out;
    for (std::size_t j = 0; j <= k; ++j) {
        FinDist c(detail::generate(m, j, fuel, grain, 0));
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

}  // namespace plamb

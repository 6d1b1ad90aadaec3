#pragma once

// Terms and finite sub-probability distributions of terms.
//
// Terms are stored locally nameless: variables bound by an enclosing
// abstraction are de Bruijn indices, free variables keep their names. Two
// terms are equal exactly when they are alpha-equivalent, which makes the
// structural representation its own canonical form. Binders remember the name
// they were written with, but only as a display hint.
//
// Term and Dist are immutable handles over shared nodes; copying is cheap.

#include "plamb/errors.hpp"
#include "plamb/weight.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace plamb {

enum class TermKind : std::uint8_t { Bound, Free, Abs, App };

struct TermNode;
struct DistRep;
class Dist;

class Term {
public:
    static Term bound(std::uint32_t index);
    static Term free(std::string name);
    /// Abstraction over a locally nameless body (index 0 refers to this binder).
    static Term abs(std::string hint, Dist body);
    static Term app(Dist fun, Dist arg);
    /// Abstraction binding every free occurrence of `name` in `body`.
    static Term lambda(const std::string& name, const Dist& body);

    TermKind kind() const;
    bool is_abs() const { return kind() == TermKind::Abs; }
    bool is_app() const { return kind() == TermKind::App; }
    bool is_free() const { return kind() == TermKind::Free; }
    bool is_bound() const { return kind() == TermKind::Bound; }

    std::uint32_t index() const;
    /// Free variable name, or the binder's display hint for abstractions.
    const std::string& name() const;
    const Dist& body() const;
    const Dist& fun() const;
    const Dist& arg() const;

    std::size_t hash() const;
    /// One more than the largest dangling de Bruijn index; 0 when locally closed.
    std::uint32_t dangling() const;
    std::uint64_t free_mask() const;
    std::size_t size() const;

    const TermNode* node() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const TermNode> node_;
    friend struct TermNode;
};

struct Entry {
    Term term;
    Weight weight;
};

/// Finite map from alpha-canonical terms to positive weights, total mass <= 1.
class Dist {
public:
    Dist();

    static Dist point(Term t, Weight w = Weight::one());
    /// Merges alpha-equivalent keys, drops zero weights, and rejects total
    /// mass above one.
    static Dist from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const;
    std::size_t size() const { return entries().size(); }
    bool empty() const { return entries().empty(); }
    const Weight& mass() const;
    std::size_t hash() const;
    std::uint32_t dangling() const;
    std::uint64_t free_mask() const;
    std::size_t term_size() const;

    Weight weight_of(const Term& t) const;
    /// True for `{1: t}`, the form written simply as `t`.
    bool is_unit_point() const;
    const Term& only() const { return entries().front().term; }

    auto begin() const { return entries().begin(); }
    auto end() const { return entries().end(); }

    friend bool operator==(const Dist& a, const Dist& b);
    friend std::strong_ordering operator<=>(const Dist& a, const Dist& b);

private:
    explicit Dist(std::shared_ptr<const DistRep> r) : rep_(std::move(r)) {}
    std::shared_ptr<const DistRep> rep_;
};

struct TermNode {
    TermKind kind;
    std::uint32_t index = 0;
    std::string name;
    Dist first;   // Abs: body, App: function
    Dist second;  // App: argument
    std::size_t hash = 0;
    std::uint32_t dangling = 0;
    std::uint64_t free_mask = 0;
    std::size_t size = 1;

    static Term make(TermNode n) { return Term(std::make_shared<const TermNode>(std::move(n))); }
};

struct DistRep {
    std::vector<Entry> entries;
    Weight mass;
    std::size_t hash = 0x51ed27;
    std::uint32_t dangling = 0;
    std::uint64_t free_mask = 0;
    std::size_t size = 0;
};

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4));
}

inline std::uint64_t name_bit(const std::string& name) {
    return std::uint64_t{1} << (std::hash<std::string>{}(name) & 63U);
}

inline const std::shared_ptr<const DistRep>& empty_rep() {
    static const auto rep = std::make_shared<const DistRep>();
    return rep;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Term

inline Term Term::bound(std::uint32_t index) {
    TermNode n{TermKind::Bound};
    n.index = index;
    n.hash = detail::mix(0xb0, index);
    n.dangling = index + 1;
    return TermNode::make(std::move(n));
}

inline Term Term::free(std::string name) {
    TermNode n{TermKind::Free};
    n.hash = detail::mix(0xf1, std::hash<std::string>{}(name));
    n.free_mask = detail::name_bit(name);
    n.name = std::move(name);
    return TermNode::make(std::move(n));
}

inline Term Term::abs(std::string hint, Dist body) {
    TermNode n{TermKind::Abs};
    n.hash = detail::mix(0xab, body.hash());
    n.dangling = body.dangling() > 0 ? body.dangling() - 1 : 0;
    n.free_mask = body.free_mask();
    n.size = 1 + body.term_size();
    n.name = std::move(hint);
    n.first = std::move(body);
    return TermNode::make(std::move(n));
}

inline Term Term::app(Dist fun, Dist arg) {
    TermNode n{TermKind::App};
    n.hash = detail::mix(detail::mix(0xa9, fun.hash()), arg.hash());
    n.dangling = std::max(fun.dangling(), arg.dangling());
    n.free_mask = fun.free_mask() | arg.free_mask();
    n.size = 1 + fun.term_size() + arg.term_size();
    n.first = std::move(fun);
    n.second = std::move(arg);
    return TermNode::make(std::move(n));
}

inline TermKind Term::kind() const { return node_->kind; }
inline std::uint32_t Term::index() const { return node_->index; }
inline const std::string& Term::name() const { return node_->name; }
inline const Dist& Term::body() const { return node_->first; }
inline const Dist& Term::fun() const { return node_->first; }
inline const Dist& Term::arg() const { return node_->second; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::uint32_t Term::dangling() const { return node_->dangling; }
inline std::uint64_t Term::free_mask() const { return node_->free_mask; }
inline std::size_t Term::size() const { return node_->size; }

namespace detail {

// Total structural order; binder hints are ignored, so alpha-equivalent terms
// compare equal.
inline std::strong_ordering deep_compare(const Term& a, const Term& b);

inline std::strong_ordering deep_compare(const Dist& a, const Dist& b) {
    if (a.hash() != b.hash()) return a.hash() <=> b.hash();
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    if (ea.data() == eb.data()) return std::strong_ordering::equal;
    if (ea.size() != eb.size()) return ea.size() <=> eb.size();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (auto c = deep_compare(ea[i].term, eb[i].term); c != 0) return c;
        if (auto c = ea[i].weight <=> eb[i].weight; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

inline std::strong_ordering deep_compare(const Term& a, const Term& b) {
    if (a.node() == b.node()) return std::strong_ordering::equal;
    if (a.hash() != b.hash()) return a.hash() <=> b.hash();
    if (a.kind() != b.kind()) return a.kind() <=> b.kind();
    switch (a.kind()) {
        case TermKind::Bound: return a.index() <=> b.index();
        case TermKind::Free: return a.name().compare(b.name()) <=> 0;
        case TermKind::Abs: return deep_compare(a.body(), b.body());
        case TermKind::App:
            if (auto c = deep_compare(a.fun(), b.fun()); c != 0) return c;
            return deep_compare(a.arg(), b.arg());
    }
    return std::strong_ordering::equal;
}

}  // namespace detail

inline bool operator==(const Term& a, const Term& b) { return detail::deep_compare(a, b) == 0; }
inline std::strong_ordering operator<=>(const Term& a, const Term& b) { return detail::deep_compare(a, b); }

// ---------------------------------------------------------------------------
// Dist

inline Dist::Dist() : rep_(detail::empty_rep()) {}

inline Dist Dist::point(Term t, Weight w) {
    std::vector<Entry> e;
    e.push_back(Entry{std::move(t), std::move(w)});
    return from_entries(std::move(e));
}

inline Dist Dist::from_entries(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return e.weight.is_zero(); });
    if (entries.empty()) return Dist();
    for (const auto& e : entries)
        if (e.weight.is_negative()) throw MassError("negative weight " + e.weight.str());
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return detail::deep_compare(a.term, b.term) < 0; });
    std::vector<Entry> merged;
    merged.reserve(entries.size());
    for (auto& e : entries) {
        if (!merged.empty() && merged.back().term == e.term)
            merged.back().weight += e.weight;
        else
            merged.push_back(std::move(e));
    }
    auto rep = std::make_shared<DistRep>();
    for (const auto& e : merged) {
        rep->mass += e.weight;
        rep->hash = detail::mix(detail::mix(rep->hash, e.term.hash()), e.weight.hash());
        rep->dangling = std::max(rep->dangling, e.term.dangling());
        rep->free_mask |= e.term.free_mask();
        rep->size += e.term.size();
    }
    if (rep->mass > Weight::one()) throw MassError("distribution mass " + rep->mass.str() + " exceeds 1");
    rep->entries = std::move(merged);
    return Dist(std::move(rep));
}

inline const std::vector<Entry>& Dist::entries() const { return rep_->entries; }
inline const Weight& Dist::mass() const { return rep_->mass; }
inline std::size_t Dist::hash() const { return rep_->hash; }
inline std::uint32_t Dist::dangling() const { return rep_->dangling; }
inline std::uint64_t Dist::free_mask() const { return rep_->free_mask; }
inline std::size_t Dist::term_size() const { return rep_->size; }

inline Weight Dist::weight_of(const Term& t) const {
    const auto& es = entries();
    auto it = std::lower_bound(es.begin(), es.end(), t,
                               [](const Entry& e, const Term& key) { return detail::deep_compare(e.term, key) < 0; });
    if (it != es.end() && it->term == t) return it->weight;
    return Weight::zero();
}

inline bool Dist::is_unit_point() const { return size() == 1 && entries().front().weight == Weight::one(); }

inline bool operator==(const Dist& a, const Dist& b) { return detail::deep_compare(a, b) == 0; }
inline std::strong_ordering operator<=>(const Dist& a, const Dist& b) { return detail::deep_compare(a, b); }

// ---------------------------------------------------------------------------
// Distribution algebra

/// Pointwise weight addition; throws MassError when the sum exceeds one.
inline Dist dist_union(const Dist& a, const Dist& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    std::vector<Entry> all(a.entries());
    all.insert(all.end(), b.entries().begin(), b.entries().end());
    return Dist::from_entries(std::move(all));
}

/// Sub-convex scaling p x d.
inline Dist dist_scale(const Weight& p, const Dist& d) {
    if (p == Weight::one()) return d;
    if (p.is_zero()) return Dist();
    std::vector<Entry> out;
    out.reserve(d.size());
    for (const auto& e : d) out.push_back(Entry{e.term, p * e.weight});
    return Dist::from_entries(std::move(out));
}

/// Accumulates weighted pieces and merges them once.
class DistBuilder {
public:
    void add(const Term& t, const Weight& w) {
        if (!w.is_zero()) entries_.push_back(Entry{t, w});
    }
    void add(const Weight& scale, const Dist& d) {
        if (scale.is_zero()) return;
        for (const auto& e : d) entries_.push_back(Entry{e.term, scale * e.weight});
    }
    void add(const Dist& d) { add(Weight::one(), d); }
    Dist build() && { return Dist::from_entries(std::move(entries_)); }

private:
    std::vector<Entry> entries_;
};

/// a <= b iff b = a (+) c for some c, i.e. pointwise weight domination.
inline bool dist_leq(const Dist& a, const Dist& b) {
    for (const auto& e : a)
        if (e.weight > b.weight_of(e.term)) return false;
    return true;
}

/// a << b: every entry of a is strictly below its weight in b.
inline bool dist_way_below(const Dist& a, const Dist& b) {
    for (const auto& e : a)
        if (!(e.weight < b.weight_of(e.term))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {

inline Dist open_at(const Dist& d, std::uint32_t depth, const Dist& repl);

inline Dist open_term_at(const Term& t, std::uint32_t depth, const Dist& repl) {
    switch (t.kind()) {
        case TermKind::Bound:
            return t.index() == depth ? repl : Dist::point(t);
        case TermKind::Free:
            return Dist::point(t);
        case TermKind::Abs:
            return Dist::point(Term::abs(t.name(), open_at(t.body(), depth + 1, repl)));
        case TermKind::App:
            return Dist::point(Term::app(open_at(t.fun(), depth, repl), open_at(t.arg(), depth, repl)));
    }
    return Dist::point(t);
}

// Replaces bound index `depth` by `repl` (locally closed), splicing weights.
inline Dist open_at(const Dist& d, std::uint32_t depth, const Dist& repl) {
    if (d.dangling() <= depth) return d;
    DistBuilder b;
    for (const auto& e : d) {
        if (e.term.dangling() <= depth)
            b.add(e.term, e.weight);
        else
            b.add(e.weight, open_term_at(e.term, depth, repl));
    }
    return std::move(b).build();
}

inline Dist close_at(const Dist& d, std::uint32_t depth, const std::string& name);

inline Term close_term_at(const Term& t, std::uint32_t depth, const std::string& name) {
    if ((t.free_mask() & name_bit(name)) == 0) return t;
    switch (t.kind()) {
        case TermKind::Free: return t.name() == name ? Term::bound(depth) : t;
        case TermKind::Bound: return t;
        case TermKind::Abs: return Term::abs(t.name(), close_at(t.body(), depth + 1, name));
        case TermKind::App: return Term::app(close_at(t.fun(), depth, name), close_at(t.arg(), depth, name));
    }
    return t;
}

inline Dist close_at(const Dist& d, std::uint32_t depth, const std::string& name) {
    if ((d.free_mask() & name_bit(name)) == 0) return d;
    std::vector<Entry> out;
    out.reserve(d.size());
    for (const auto& e : d) out.push_back(Entry{close_term_at(e.term, depth, name), e.weight});
    return Dist::from_entries(std::move(out));
}

inline Dist subst_free(const Dist& d, const std::string& name, const Dist& repl);

inline Dist subst_free_term(const Term& t, const std::string& name, const Dist& repl) {
    switch (t.kind()) {
        case TermKind::Free: return t.name() == name ? repl : Dist::point(t);
        case TermKind::Bound: return Dist::point(t);
        case TermKind::Abs: return Dist::point(Term::abs(t.name(), subst_free(t.body(), name, repl)));
        case TermKind::App:
            return Dist::point(Term::app(subst_free(t.fun(), name, repl), subst_free(t.arg(), name, repl)));
    }
    return Dist::point(t);
}

inline Dist subst_free(const Dist& d, const std::string& name, const Dist& repl) {
    if ((d.free_mask() & name_bit(name)) == 0) return d;
    DistBuilder b;
    for (const auto& e : d) {
        if ((e.term.free_mask() & name_bit(name)) == 0)
            b.add(e.term, e.weight);
        else
            b.add(e.weight, subst_free_term(e.term, name, repl));
    }
    return std::move(b).build();
}

inline void collect_free(const Dist& d, std::set<std::string>& out);

inline void collect_free(const Term& t, std::set<std::string>& out) {
    if (t.free_mask() == 0) return;
    switch (t.kind()) {
        case TermKind::Free: out.insert(t.name()); break;
        case TermKind::Bound: break;
        case TermKind::Abs: collect_free(t.body(), out); break;
        case TermKind::App:
            collect_free(t.fun(), out);
            collect_free(t.arg(), out);
            break;
    }
}

inline void collect_free(const Dist& d, std::set<std::string>& out) {
    for (const auto& e : d) collect_free(e.term, out);
}

}  // namespace detail

inline Term Term::lambda(const std::string& name, const Dist& body) {
    return Term::abs(name, detail::close_at(body, 0, name));
}

/// Body of an abstraction with its bound variable replaced by `arg`.
/// Call-by-name: `arg` is placed at every use site as a distribution.
inline Dist instantiate(const Term& abstraction, const Dist& arg) {
    return detail::open_at(abstraction.body(), 0, arg);
}

/// Capture-free substitution of `replacement` for the free variable `v`.
inline Dist subst(const Dist& body, const std::string& v, const Dist& replacement) {
    return detail::subst_free(body, v, replacement);
}

inline std::set<std::string> free_names(const Dist& d) {
    std::set<std::string> out;
    detail::collect_free(d, out);
    return out;
}

inline std::set<std::string> free_names(const Term& t) {
    std::set<std::string> out;
    detail::collect_free(t, out);
    return out;
}

inline bool occurs_free(const std::string& name, const Dist& d) {
    if ((d.free_mask() & detail::name_bit(name)) == 0) return false;
    return free_names(d).contains(name);
}

inline bool occurs_free(const std::string& name, const Term& t) {
    if ((t.free_mask() & detail::name_bit(name)) == 0) return false;
    return free_names(t).contains(name);
}

// Convenience constructors.
inline Dist var(const std::string& name) { return Dist::point(Term::free(name)); }
inline Dist lam(const std::string& name, const Dist& body) { return Dist::point(Term::lambda(name, body)); }
inline Dist app(const Dist& f, const Dist& a) { return Dist::point(Term::app(f, a)); }
template <class... Rest>
Dist app(const Dist& f, const Dist& a, const Rest&... rest) {
    return app(app(f, a), rest...);
}

}  // namespace plamb

template <>
struct std::hash<plamb::Term> {
    std::size_t operator()(const plamb::Term& t) const noexcept { return t.hash(); }
};

template <>
struct std::hash<plamb::Dist> {
    std::size_t operator()(const plamb::Dist& d) const noexcept { return d.hash(); }
};

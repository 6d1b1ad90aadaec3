#pragma once

// Lifting a relation to finite sub-probability distributions.
//
// d lifts to e under r when a matching moves all of d's mass along r-edges
// without exceeding any of e's weights. Decided by max-flow on the bipartite
// network source -> d_i -> e_j -> sink; the subset enumeration below is the
// Hall-style characterisation of the same property and serves as its oracle.

#include "plamb/errors.hpp"
#include "plamb/weight.hpp"

#include <cstddef>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace plamb {

class FlowNetwork {
public:
    struct Edge {
        std::size_t from;
        std::size_t to;
        Weight capacity;
        Weight flow;
    };

    explicit FlowNetwork(std::size_t nodes) : out_(nodes) {}

    std::size_t add_edge(std::size_t from, std::size_t to, Weight capacity) {
        const std::size_t id = edges_.size();
        edges_.push_back({from, to, std::move(capacity), Weight::zero()});
        out_[from].push_back(id);
        out_[to].push_back(id);
        return id;
    }

    std::size_t nodes() const { return out_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::vector<Edge>& edges() { return edges_; }
    const std::vector<std::size_t>& incident(std::size_t v) const { return out_[v]; }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
};

struct MaxFlowResult {
    Weight value;
    std::vector<bool> source_side;      // residual reachability from the source
    std::vector<std::size_t> min_cut;   // edges from source side to sink side
};

/// Exact maximum flow by shortest augmenting paths. The returned cut is
/// orthogonal to the flow: forward cut edges are saturated, backward ones
/// carry nothing.
inline MaxFlowResult max_flow(FlowNetwork& net, std::size_t source, std::size_t sink) {
    const std::size_t n = net.nodes();
    auto& edges = net.edges();
    for (auto& e : edges) e.flow = Weight::zero();

    auto residual = [&](std::size_t id, std::size_t from) {
        const auto& e = edges[id];
        return from == e.from ? e.capacity - e.flow : e.flow;
    };

    MaxFlowResult res;
    for (;;) {
        std::vector<std::ptrdiff_t> via(n, -1);
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{source};
        seen[source] = true;
        while (!queue.empty() && !seen[sink]) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t id : net.incident(v)) {
                const auto& e = edges[id];
                const std::size_t w = v == e.from ? e.to : e.from;
                if (seen[w] || !residual(id, v).is_positive()) continue;
                seen[w] = true;
                via[w] = static_cast<std::ptrdiff_t>(id);
                queue.push_back(w);
            }
        }
        if (!seen[sink]) {
            res.source_side = std::move(seen);
            break;
        }
        Weight bottleneck;
        bool first = true;
        for (std::size_t v = sink; v != source;) {
            const auto id = static_cast<std::size_t>(via[v]);
            const auto& e = edges[id];
            const std::size_t prev = v == e.to ? e.from : e.to;
            Weight r = residual(id, prev);
            if (first || r < bottleneck) bottleneck = r;
            first = false;
            v = prev;
        }
        for (std::size_t v = sink; v != source;) {
            const auto id = static_cast<std::size_t>(via[v]);
            auto& e = edges[id];
            const std::size_t prev = v == e.to ? e.from : e.to;
            if (prev == e.from) e.flow += bottleneck;
            else e.flow -= bottleneck;
            v = prev;
        }
        res.value += bottleneck;
    }
    for (std::size_t id = 0; id < edges.size(); ++id)
        if (res.source_side[edges[id].from] && !res.source_side[edges[id].to]) res.min_cut.push_back(id);
    return res;
}

template <class Point>
struct FinSupportDist {
    std::vector<Point> points;
    std::vector<Weight> weights;

    std::size_t size() const { return points.size(); }
    Weight mass() const {
        Weight m;
        for (const auto& w : weights) m += w;
        return m;
    }
};

class RelMatrix {
public:
    RelMatrix() = default;
    RelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

    static RelMatrix identity(std::size_t n) {
        RelMatrix r(n, n);
        for (std::size_t i = 0; i < n; ++i) r.set(i, i);
        return r;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v = true) { cells_[i * cols_ + j] = v ? 1 : 0; }

    /// Pointwise conjunction.
    friend RelMatrix operator&(const RelMatrix& a, const RelMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("relation shapes differ");
        RelMatrix r(a.rows_, a.cols_);
        for (std::size_t k = 0; k < a.cells_.size(); ++k) r.cells_[k] = a.cells_[k] & b.cells_[k];
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<unsigned char> cells_;
};

struct LiftVerdict {
    bool holds = true;
    Weight deficit;
    std::vector<std::size_t> witness_cut;  // indices into the source support
};

namespace detail {

inline void check_shape(std::size_t n, std::size_t m, const RelMatrix& r) {
    if (r.rows() != n || r.cols() != m)
        throw DimensionMismatch("relation is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                                " but distributions have " + std::to_string(n) + " and " + std::to_string(m) +
                                " points");
}

// Max flow through source -> a_i -> b_j -> sink with the given target caps.
inline MaxFlowResult bipartite_flow(const std::vector<Weight>& supply, const std::vector<Weight>& demand,
                                    const RelMatrix& r) {
    const std::size_t n = supply.size(), m = demand.size();
    const std::size_t source = n + m, sink = n + m + 1;
    Weight total;
    for (const auto& w : supply) total += w;
    const Weight unbounded = total + Weight::one();
    FlowNetwork net(n + m + 2);
    for (std::size_t i = 0; i < n; ++i) net.add_edge(source, i, supply[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (r(i, j)) net.add_edge(i, n + j, unbounded);
    for (std::size_t j = 0; j < m; ++j) net.add_edge(n + j, sink, demand[j]);
    return max_flow(net, source, sink);
}

}  // namespace detail

/// Decides whether d lifts to e under r, allowing up to `slack` of d's mass to
/// go unmatched. On failure the witness cut is the set of source points still
/// reachable in the residual network; it is closed under r and its mass
/// exceeds the mass of its r-image by deficit + slack.
template <class P, class Q>
LiftVerdict lift_check_flow(const FinSupportDist<P>& d, const FinSupportDist<Q>& e, const RelMatrix& r,
                            const Weight& slack = Weight::zero()) {
    if (slack.is_negative()) throw std::invalid_argument("slack must be non-negative");
    detail::check_shape(d.size(), e.size(), r);
    const MaxFlowResult mf = detail::bipartite_flow(d.weights, e.weights, r);
    const Weight gap = d.mass() - mf.value - slack;
    LiftVerdict v;
    if (!gap.is_positive()) return v;
    v.holds = false;
    v.deficit = gap;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (mf.source_side[i]) v.witness_cut.push_back(i);
    return v;
}

inline constexpr std::size_t kSubsetOracleLimit = 20;

/// Enumerates every subset C of the source support and compares its mass with
/// the mass of its r-image. Reports the largest violation; ties go to the
/// first subset in enumeration order, and the reported set is closed under
/// "has no r-successor outside the image".
template <class P, class Q>
LiftVerdict lift_check_subsets(const FinSupportDist<P>& d, const FinSupportDist<Q>& e, const RelMatrix& r) {
    detail::check_shape(d.size(), e.size(), r);
    const std::size_t n = d.size(), m = e.size();
    if (n > kSubsetOracleLimit)
        throw SupportTooLarge("subset enumeration supports at most " + std::to_string(kSubsetOracleLimit) +
                              " source points, got " + std::to_string(n));
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (r(i, j)) succ[i].push_back(j);

    LiftVerdict best;
    std::size_t best_set = 0;
    std::vector<char> image(m);
    for (std::size_t set = 1; set < (std::size_t{1} << n); ++set) {
        std::fill(image.begin(), image.end(), 0);
        Weight src;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(set >> i & 1U)) continue;
            src += d.weights[i];
            for (std::size_t j : succ[i]) image[j] = 1;
        }
        Weight tgt;
        for (std::size_t j = 0; j < m; ++j)
            if (image[j]) tgt += e.weights[j];
        const Weight gap = src - tgt;
        if (gap > best.deficit) {
            best.deficit = gap;
            best_set = set;
        }
    }
    if (!best.deficit.is_positive()) return best;
    best.holds = false;
    // close: add every source point whose successors already lie in the image
    std::fill(image.begin(), image.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
        if (best_set >> i & 1U)
            for (std::size_t j : succ[i]) image[j] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        bool inside = true;
        for (std::size_t j : succ[i]) inside = inside && image[j];
        if ((best_set >> i & 1U) || inside) best.witness_cut.push_back(i);
    }
    return best;
}

/// True when d lifts to some e' << e, i.e. a matching exists that leaves every
/// used target weight strictly below its bound. Equivalent to the strict Hall
/// condition: every nonempty C has mass strictly below its image's mass.
template <class P, class Q>
bool lift_check_strict(const FinSupportDist<P>& d, const FinSupportDist<Q>& e, const RelMatrix& r) {
    detail::check_shape(d.size(), e.size(), r);
    if (d.size() == 0) return true;
    if (e.size() == 0) return false;
    // With g = 1/lcm of all denominators, strict inequalities between grid
    // values become "<= value - g"; spreading g over the targets turns that
    // into an ordinary lift with slightly lowered caps.
    mpz_class den = 1;
    for (const auto& w : d.weights) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.raw().get_den_mpz_t());
    for (const auto& w : e.weights) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.raw().get_den_mpz_t());
    const Weight shave(mpq_class(mpz_class(1), den * static_cast<unsigned long>(e.size())));
    std::vector<Weight> lowered;
    lowered.reserve(e.size());
    for (const auto& w : e.weights) lowered.push_back(max(Weight::zero(), w - shave));
    const MaxFlowResult mf = detail::bipartite_flow(d.weights, lowered, r);
    return mf.value == d.mass();
}

}  // namespace plamb

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plamb {

/// Exact rational weight. Arbitrary precision, always in lowest terms.
///
/// Weights attached to distribution entries live in [0, 1]; intermediate
/// quantities (flow capacities, deficits, slack sums) reuse the same type and
/// are allowed to leave that range.
class Weight {
public:
    Weight() = default;
    Weight(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
    Weight(long n, long d) : q_(n, d) {
        if (d == 0) throw std::invalid_argument("weight with zero denominator");
        q_.canonicalize();
    }
    explicit Weight(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses `n/d`, an integer, or a decimal literal such as `0.25`.
    static Weight from_string(std::string_view text);

    static Weight zero() { return Weight(0); }
    static Weight one() { return Weight(1); }

    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_positive() const { return sgn(q_) > 0; }
    bool is_negative() const { return sgn(q_) < 0; }

    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    double to_double() const { return q_.get_d(); }

    std::size_t hash() const {
        std::size_t h = mpz_get_ui(q_.get_num_mpz_t());
        h ^= mpz_get_ui(q_.get_den_mpz_t()) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        if (sgn(q_) < 0) h = ~h;
        return h;
    }

    Weight& operator+=(const Weight& o) { q_ += o.q_; return *this; }
    Weight& operator-=(const Weight& o) { q_ -= o.q_; return *this; }
    Weight& operator*=(const Weight& o) { q_ *= o.q_; return *this; }
    Weight& operator/=(const Weight& o) {
        if (o.is_zero()) throw std::domain_error("division of weight by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    friend Weight operator*(Weight a, const Weight& b) { return a *= b; }
    friend Weight operator/(Weight a, const Weight& b) { return a /= b; }
    friend Weight operator-(const Weight& a) { return Weight(mpq_class(-a.q_)); }

    friend bool operator==(const Weight& a, const Weight& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class q_{0};
};

inline Weight min(const Weight& a, const Weight& b) { return a < b ? a : b; }
inline Weight max(const Weight& a, const Weight& b) { return a < b ? b : a; }
inline Weight abs(const Weight& a) { return a.is_negative() ? -a : a; }

/// 2^-k as an exact weight.
inline Weight pow2_inv(unsigned k) {
    mpz_class den = 1;
    den <<= k;
    return Weight(mpq_class(mpz_class(1), den));
}

inline Weight Weight::from_string(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("malformed weight literal '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    auto digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!digits(num) || !digits(den)) throw bad();
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw std::invalid_argument("weight with zero denominator");
        return Weight(mpq_class(n, d));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if ((!whole.empty() && !digits(whole)) || !digits(frac)) throw bad();
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        return Weight(mpq_class(n, den));
    }
    if (!digits(text)) throw bad();
    return Weight(mpq_class(mpz_class(std::string(text), 10)));
}

}  // namespace plamb

template <>
struct std::hash<plamb::Weight> {
    std::size_t operator()(const plamb::Weight& w) const noexcept { return w.hash(); }
};

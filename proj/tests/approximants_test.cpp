#include "plamb/approximants.hpp"
#include "plamb/prelude.hpp"
#include "plamb/simulation.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace plamb;

namespace {

Dist p(const char* s) { return parse(s, default_prelude()); }
FinDist c(const char* s) { return parse_fin(s, &default_prelude()); }

bool contains(const std::vector<FinDist>& cs, const FinDist& x) { return std::find(cs.begin(), cs.end(), x) != cs.end(); }

}  // namespace

TEST(Approximants, EmbedMapsBottomToOmega) {
    EXPECT_EQ(embed(c("_|_")), p("omega"));
    EXPECT_EQ(embed(c("{1/2: \\x. _|_}")), p("{1/2: \\x. omega}"));
    EXPECT_EQ(embed(c("y")), p("y"));
}

TEST(Approximants, ValidatesShape) {
    EXPECT_THROW(c("I y"), Error);
    EXPECT_THROW(c("{1/2: I} x"), Error);
    EXPECT_THROW(c("x (I y)"), Error);  // arguments must themselves be approximants
    EXPECT_NO_THROW(c("{1/2: x _|_, 1/4: \\x. x _|_}"));
}

TEST(Approximants, PrintsBottom) {
    EXPECT_EQ(print(c("{1/2: \\x. _|_}")), "{1/2: \\x. _|_}");
    EXPECT_EQ(print(c("x _|_")), "x _|_");
}

TEST(Approximants, BottomIsInEveryStratum) {
    for (const char* m : {"I", "omega", "x", "{}", "Y t"})
        for (std::size_t k : {0U, 1U, 3U}) EXPECT_TRUE(approx_check(FinDist::bottom(), p(m), k, 4)) << m;
}

TEST(Approximants, StrictWeights) {
    EXPECT_TRUE(approx_check(c("{1/2: \\x. _|_}"), p("\\x. x"), 1, 1));
    for (std::size_t k : {0U, 1U, 2U, 5U}) EXPECT_FALSE(approx_check(c("\\x. _|_"), p("\\x. x"), k, 8)) << k;
    EXPECT_FALSE(approx_check(c("{1/2: \\x. _|_}"), p("\\x. x"), 0, 8));
}

TEST(Approximants, BodiesDescend) {
    const Dist id = p("\\x. x");
    EXPECT_FALSE(approx_check(c("{1/2: \\x. {1/2: x}}"), id, 1, 4));
    EXPECT_TRUE(approx_check(c("{1/2: \\x. {1/2: x}}"), id, 2, 4));
    // bodies are compared at the scale of their block: {1/2: x} below {1: x}
    EXPECT_TRUE(approx_check(c("{1/2: \\x. x}"), id, 2, 4));
    EXPECT_FALSE(approx_check(c("{1/2: \\x. {1/2: y}}"), id, 3, 4));
}

TEST(Approximants, SpinesLiftStrictly) {
    const Dist m = p("{1/2: x a, 1/2: x b}");
    EXPECT_TRUE(approx_check(c("{1/4: x _|_, 1/4: x _|_}"), m, 1, 4));
    EXPECT_TRUE(approx_check(c("{3/4: x _|_}"), m, 1, 4));
    EXPECT_FALSE(approx_check(c("x _|_"), m, 3, 4));
    EXPECT_TRUE(approx_check(c("{1/4: x ({1/2: a}), 1/4: x ({1/2: b})}"), m, 2, 4));
    EXPECT_FALSE(approx_check(c("{1/4: x ({1/2: a}), 1/4: x ({1/2: b})}"), m, 1, 4));
    EXPECT_FALSE(approx_check(c("{3/4: x ({1/2: a})}"), m, 2, 4));
    EXPECT_FALSE(approx_check(c("{1/4: y _|_}"), m, 2, 4));
}

TEST(Approximants, Cumulative) {
    const Dist m = p("{1/2: \\x. x, 1/4: y (\\z. z)}");
    for (const char* s : {"{1/4: \\x. {1/2: x}}", "{1/8: y _|_}", "{1/8: y ({1/2: \\x. _|_})}", "_|_"}) {
        bool seen = false;
        for (std::size_t k = 0; k <= 5; ++k) {
            const bool now = approx_check(c(s), m, k, 8);
            EXPECT_TRUE(!seen || now) << s << " lost at " << k;
            seen = seen || now;
        }
        EXPECT_TRUE(seen) << s;
    }
}

TEST(Approximants, GenerateIdentity) {
    const auto cs = approx_generate(p("\\x. x"), 1, 1, Weight(1, 4));
    EXPECT_TRUE(contains(cs, c("{3/4: \\x. _|_}")));
    for (const auto& a : cs) EXPECT_TRUE(approx_check(a, p("\\x. x"), 1, 1)) << print(a);
}

TEST(Approximants, GenerateOmega) {
    for (const auto& a : approx_generate(p("omega"), 3, 8, Weight(1, 16))) {
        for (const auto& e : a.dist()) EXPECT_TRUE(is_bottom(e.term)) << print(a);
    }
}

TEST(Approximants, GenerateYRoundsStrictlyDown) {
    const auto cs = approx_generate(p("Y t"), 2, 6, Weight(1, 8));
    EXPECT_TRUE(contains(cs, c("{5/8: \\x. _|_}")));
    EXPECT_TRUE(contains(cs, c("{5/8: \\x. {7/8: x}}")));
    for (const auto& a : cs) EXPECT_TRUE(approx_check(a, p("Y t"), 2, 6)) << print(a);
}

TEST(Approximants, GranularityMustBeUnitFraction) {
    EXPECT_THROW(approx_generate(p("I"), 1, 1, Weight(2, 3)), GranularityError);
    EXPECT_THROW(approx_generate(p("I"), 1, 1, Weight(0)), GranularityError);
    EXPECT_NO_THROW(approx_generate(p("I"), 1, 1, Weight(1)));
}

TEST(Approximants, GeneratedApproximantsAreSimulated) {
    for (const char* m : {"{1/2: \\x. x, 1/4: y (\\z. z)}", "x tt ff", "\\x. {1/2: x, 1/2: y}", "Y t", "xor"}) {
        for (const auto& a : approx_generate(p(m), 3, 16, Weight(1, 8))) {
            EXPECT_TRUE(approx_check(a, p(m), 3, 16)) << m << " " << print(a);
            EXPECT_TRUE(sim_check(embed(a), p(m), SimParams{3, 16, true}).holds) << m << " " << print(a);
        }
    }
}

#include "plamb/approximants.hpp"
#include "plamb/weight.hpp"

#include <gtest/gtest.h>

using plamb::Weight;

TEST(Weight, ParsesFractionsIntegersAndDecimals) {
    EXPECT_EQ(Weight::from_string("1/2"), Weight(1, 2));
    EXPECT_EQ(Weight::from_string("2/4"), Weight(1, 2));
    EXPECT_EQ(Weight::from_string("0.2"), Weight(1, 5));
    EXPECT_EQ(Weight::from_string(".25"), Weight(1, 4));
    EXPECT_EQ(Weight::from_string("1"), Weight::one());
    EXPECT_EQ(Weight::from_string("0"), Weight::zero());
}

TEST(Weight, RejectsMalformedLiterals) {
    for (const char* bad : {"", "1/", "/2", "a", "1/0", "1.2.3", "-1"})
        EXPECT_THROW(Weight::from_string(bad), std::invalid_argument) << bad;
}

TEST(Weight, ExactArithmetic) {
    // 0.1 + 0.2 is exactly 0.3, unlike in binary floating point
    EXPECT_EQ(Weight::from_string("0.1") + Weight::from_string("0.2"), Weight(3, 10));
    EXPECT_EQ(Weight(1, 3) * Weight(3, 4), Weight(1, 4));
    EXPECT_EQ(Weight(1, 2) / Weight(1, 4), Weight(2));
    EXPECT_EQ((Weight(1, 3) - Weight(1, 2)).str(), "-1/6");
    EXPECT_THROW(Weight(1) / Weight(0), std::domain_error);
}

TEST(Weight, PrintsInLowestTerms) {
    EXPECT_EQ(Weight(6, 8).str(), "3/4");
    EXPECT_EQ(Weight(4, 4).str(), "1");
    EXPECT_EQ(Weight(0, 7).str(), "0");
}

TEST(Weight, PowersOfTwo) {
    EXPECT_EQ(plamb::pow2_inv(0), Weight::one());
    EXPECT_EQ(plamb::pow2_inv(10), Weight(1, 1024));
    EXPECT_EQ(plamb::pow2_inv(70).str(), "1/1180591620717411303424");
}

TEST(Weight, OrderAndHash) {
    EXPECT_LT(Weight(1, 3), Weight(1, 2));
    EXPECT_EQ(std::hash<Weight>{}(Weight(2, 4)), std::hash<Weight>{}(Weight(1, 2)));
    EXPECT_EQ(plamb::max(Weight(1, 3), Weight(1, 2)), Weight(1, 2));
    EXPECT_EQ(plamb::abs(Weight(-1, 3)), Weight(1, 3));
}

TEST(Weight, RoundsStrictlyDownToGrid) {
    const Weight g(1, 8);
    EXPECT_EQ(plamb::round_strictly_below(Weight(3, 4), g), Weight(5, 8));
    EXPECT_EQ(plamb::round_strictly_below(Weight(7, 10), g), Weight(5, 8));
    EXPECT_EQ(plamb::round_strictly_below(Weight(1, 8), g), Weight::zero());
    EXPECT_EQ(plamb::round_strictly_below(Weight(1, 10), g), Weight::zero());
    EXPECT_EQ(plamb::round_strictly_below(Weight(1), Weight(1, 4)), Weight(3, 4));
}

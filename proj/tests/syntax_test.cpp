#include "plamb/prelude.hpp"
#include "plamb/syntax.hpp"

#include <gtest/gtest.h>

using namespace plamb;

namespace {

const Prelude& P() { return default_prelude(); }

}  // namespace

TEST(Syntax, AlphaEquivalentTermsAreEqual) {
    EXPECT_EQ(parse("\\x. x"), parse("\\y. y"));
    EXPECT_EQ(parse("\\x. \\y. x y"), parse("\\a. \\b. a b"));
    EXPECT_NE(parse("\\x. \\y. x"), parse("\\x. \\y. y"));
    EXPECT_EQ(parse("λx. x"), parse("\\z. z"));
    EXPECT_EQ(parse("\\x. y").hash(), parse("\\z. y").hash());
}

TEST(Syntax, FreeNamesAreNotAlphaRenamed) {
    EXPECT_NE(parse("\\x. y"), parse("\\x. z"));
    EXPECT_NE(parse("x"), parse("y"));
}

TEST(Syntax, SumsMergeAndDropZeros) {
    EXPECT_EQ(parse("{1/2: x, 1/2: x}"), parse("x"));
    EXPECT_EQ(parse("{1/2: \\a. a, 1/4: \\b. b}"), parse("{3/4: \\c. c}"));
    EXPECT_EQ(parse("{0: x, 1/3: y}"), parse("{1/3: y}"));
    EXPECT_TRUE(parse("{}").empty());
    EXPECT_EQ(parse("{0.5: x, 0.5: y}"), parse("{1/2: y, 1/2: x}"));
}

TEST(Syntax, ApplicationIsLeftAssociative) {
    EXPECT_EQ(parse("x y z"), app(var("x"), var("y"), var("z")));
    EXPECT_EQ(parse("x (y z)"), app(var("x"), app(var("y"), var("z"))));
    EXPECT_EQ(parse("\\x. x y"), lam("x", app(var("x"), var("y"))));
}

TEST(Syntax, MassAboveOneIsRejected) {
    EXPECT_THROW(parse("{2/3: x, 2/3: y}"), MassError);
    EXPECT_THROW(parse("{3/2: x}"), ParseError);
    try {
        parse("\n  {2/3: x, 1/2: y}");
        FAIL();
    } catch (const MassError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("2:3:", 0), 0U) << e.what();
    }
}

TEST(Syntax, ParseErrorsCarryPositions) {
    try {
        parse("\\x. (x y");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1U);
        EXPECT_EQ(e.column(), 9U);
    }
    try {
        parse("x\n  )");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2U);
        EXPECT_EQ(e.column(), 3U);
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("{1/2 x}"), ParseError);
    EXPECT_THROW(parse("\\. x"), ParseError);
}

TEST(Syntax, HashNamesAreReserved) {
    EXPECT_THROW(parse("#0"), ReservedNameError);
    EXPECT_THROW(parse("\\#x. x"), ReservedNameError);
    EXPECT_THROW(parse("x #1"), ReservedNameError);
}

TEST(Syntax, BottomOnlyInApproximantMode) {
    EXPECT_THROW(parse("_|_"), ParseError);
    ParseOptions o;
    o.allow_bottom = true;
    EXPECT_EQ(parse("_|_", o).only(), omega_term());
    EXPECT_EQ(parse("\\x. _|_", o), parse("\\x. (\\y. y y) (\\y. y y)"));
}

TEST(Syntax, CommentsAndWhitespace) {
    EXPECT_EQ(parse("-- a comment\n  x   -- trailing\n y"), parse("x y"));
}

TEST(Syntax, PreludeNamesExpandOnlyWhenFree) {
    EXPECT_EQ(parse("I", P()), parse("\\x. x"));
    EXPECT_EQ(parse("\\I. I y", P()), parse("\\a. a y"));
    EXPECT_EQ(parse("tt", P()), parse("\\a. \\b. a"));
    EXPECT_EQ(parse("\\tt. tt", P()), parse("I", P()));
    EXPECT_EQ(parse("Y t", P()).only().kind(), TermKind::App);
}

TEST(Syntax, PreludeFileFormat) {
    const Prelude p = parse_prelude("-- header\nK = \\x. \\y. x\nKI = K (\\z. z)\n\n");
    ASSERT_EQ(p.size(), 2U);
    EXPECT_EQ(p.at("KI"), parse("(\\x. \\y. x) (\\z. z)"));
    EXPECT_THROW(parse_prelude("K \\x. x"), ParseError);
    EXPECT_THROW(parse_prelude("1K = x"), ParseError);
}

TEST(Syntax, PrintParseRoundTrip) {
    for (const char* src : {"\\x. x", "x y z", "x (y z)", "{1/2: x, 1/3: \\y. y x}", "(\\x. x) (\\y. y)",
                            "{}", "\\x. {1/2: x, 1/2: y}", "{1/4: (\\x. x x) (\\x. x x)}",
                            "({1/2: \\x. x, 1/2: y}) z", "x ({1/2: a, 1/2: b}) (\\c. c)"}) {
        const Dist d = parse(src);
        EXPECT_EQ(parse(print(d)), d) << src << " printed as " << print(d);
    }
}

TEST(Syntax, PrinterAvoidsCapture) {
    // binder hint x clashing with a free x in the body
    const Term t = Term::abs("x", app(Dist::point(Term::bound(0)), var("x")));
    EXPECT_EQ(print(t), "\\x'. x' x");
    EXPECT_EQ(parse(print(t)).only(), t);
    const Dist nested = parse("\\x. \\x. x");
    EXPECT_EQ(print(nested), "\\x. \\x'. x'");
}

TEST(Syntax, PrinterSortsEntriesDeterministically) {
    EXPECT_EQ(print(parse("{1/2: y, 1/4: x}")), "{1/4: x, 1/2: y}");
    EXPECT_EQ(print(parse("{1/3: \\x. x}")), "{1/3: \\x. x}");
    EXPECT_EQ(print(parse("x")), "x");
}

TEST(Syntax, SubstitutionIsCaptureFree) {
    // (\y. x)[y/x] must not capture
    const Dist r = subst(parse("\\y. x"), "x", var("y"));
    EXPECT_EQ(r, parse("\\z. y"));
    EXPECT_EQ(subst(parse("\\x. x"), "x", var("y")), parse("\\x. x"));
    EXPECT_EQ(subst(parse("{1/2: x, 1/2: z}"), "x", parse("{1/2: a, 1/2: b}")),
              parse("{1/4: a, 1/4: b, 1/2: z}"));
}

TEST(Syntax, FreeNames) {
    const auto names = free_names(parse("\\x. x y (\\z. w z)"));
    EXPECT_EQ(names, (std::set<std::string>{"w", "y"}));
    EXPECT_TRUE(occurs_free("y", parse("\\x. x y")));
    EXPECT_FALSE(occurs_free("x", parse("\\x. x y")));
}

#pragma once

#include "plamb/syntax.hpp"

#include <string_view>

namespace plamb {

inline constexpr int kPreludeVersion = 1;

// Y is Turing's fixpoint combinator, so `Y t` reduces to `t (Y t)` syntactically.
inline constexpr std::string_view kDefaultPrelude = R"(-- plamb prelude, version 1
I     = \x. x
omega = (\x. x x) (\x. x x)
Y     = (\x. \f. f (x x f)) (\x. \f. f (x x f))
tt    = \x. \y. x
ff    = \x. \y. y
xor   = \a. \b. a (b ff tt) b
-- the coin-flip functional whose fixpoint converges to I with probability 1
t     = \x. {1/2: I, 1/2: x}
)";

inline const Prelude& default_prelude() {
    static const Prelude p = parse_prelude(kDefaultPrelude);
    return p;
}

}  // namespace plamb

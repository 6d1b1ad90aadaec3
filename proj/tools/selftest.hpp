#pragma once

// Invariant checks over the bundled corpus plus seeded random instances.

#include "plamb/approximants.hpp"
#include "plamb/lifting.hpp"
#include "plamb/prelude.hpp"
#include "plamb/random.hpp"
#include "plamb/reduction.hpp"
#include "plamb/simulation.hpp"
#include "plamb/syntax.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#ifndef PLAMB_CORPUS_DIR
#define PLAMB_CORPUS_DIR "corpus"
#endif

namespace plamb {

inline std::filesystem::path corpus_dir() {
    if (const char* p = std::getenv("PLAMB_CORPUS"); p && *p) return p;
    return PLAMB_CORPUS_DIR;
}

/// One term per line of `terms.lam`; blank lines and `--` comments skipped.
inline std::vector<Dist> load_corpus(const Prelude& prelude, const std::filesystem::path& file = corpus_dir() / "terms.lam") {
    std::ifstream in(file);
    if (!in) throw Error("cannot open corpus " + file.string());
    std::vector<Dist> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find("--"); c != std::string::npos) line.erase(c);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse(line, prelude));
        } catch (const ParseError& e) {
            throw ParseError(file.filename().string() + ": " + e.message(), lineno, e.column());
        }
    }
    return out;
}

struct SelfTestCheck {
    std::string name;
    std::size_t passed = 0;
    std::size_t total = 0;
};

struct SelfTestReport {
    std::vector<SelfTestCheck> checks;
    std::vector<std::string> failures;
    bool ok() const {
        for (const auto& c : checks)
            if (c.passed != c.total) return false;
        return true;
    }
};

inline SelfTestReport run_selftest(std::uint64_t seed) {
    SelfTestReport rep;
    const Prelude& prelude = default_prelude();
    const std::vector<Dist> corpus = load_corpus(prelude);
    const Dist omega = Dist::point(omega_term());

    auto check = [&](const std::string& name, std::size_t n, const std::function<bool(std::size_t)>& ok) {
        SelfTestCheck c{name, 0, n};
        for (std::size_t i = 0; i < n; ++i) {
            if (ok(i))
                ++c.passed;
            else if (rep.failures.size() < 20)
                rep.failures.push_back(name + " #" + std::to_string(i));
        }
        rep.checks.push_back(c);
    };

    check("print/parse round trip", corpus.size(), [&](std::size_t i) { return parse(print(corpus[i])) == corpus[i]; });
    check("mass non-increase", corpus.size(), [&](std::size_t i) {
        Dist d = corpus[i];
        for (int s = 0; s < 16; ++s) {
            Dist next = step(d);
            if (next.mass() > d.mass() || !dist_leq(vals(d), vals(next))) return false;
            d = next;
        }
        return true;
    });
    check("simulation reflexive", corpus.size(),
          [&](std::size_t i) { return sim_check(corpus[i], corpus[i], SimParams{2, 16, true}).holds; });
    check("divergence is least", corpus.size(),
          [&](std::size_t i) { return sim_check(omega, corpus[i], SimParams{3, 16, true}).holds; });
    check("approximants sound", corpus.size(), [&](std::size_t i) {
        for (const auto& c : approx_generate(corpus[i], 2, 16, Weight(1, 8)))
            if (!approx_check(c, corpus[i], 2, 16)) return false;
        return true;
    });

    std::mt19937_64 rng(seed);
    check("flow agrees with subset enumeration", 200, [&](std::size_t) {
        const auto inst = random_lift_instance(rng, 6, 12);
        const auto a = lift_check_flow(inst.source, inst.target, inst.relation);
        const auto b = lift_check_subsets(inst.source, inst.target, inst.relation);
        return a.holds == b.holds && a.deficit == b.deficit;
    });
    TermGen gen(seed);
    check("random terms: sim reflexive", 100, [&](std::size_t) {
        const Dist d = gen.dist();
        return sim_check(d, d, SimParams{2, 8, true}).holds;
    });
    return rep;
}

}  // namespace plamb

#pragma once

// Command-line front end for plamb. Kept in a header so the tests can drive
// `run` with in-memory streams.

#include "plamb/approximants.hpp"
#include "plamb/lifting.hpp"
#include "plamb/lts.hpp"
#include "plamb/normalize.hpp"
#include "plamb/prelude.hpp"
#include "plamb/reduction.hpp"
#include "plamb/simulation.hpp"
#include "plamb/syntax.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace plamb::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kRefuted = 1, kUsage = 2 };

struct Config {
    std::size_t fuel = 64;
    std::size_t depth = 4;
    std::string grain = "1/16";
    std::string format = "text";
    std::uint64_t seed = 1;
    bool no_slack = false;
    std::string check_file;
    bool oracle = false;
};

class InputError : public Error {
public:
    using Error::Error;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("file not found: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A term argument is read from the named file when one exists; names ending
/// in `.lam` must exist.
inline std::string term_source(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
    if (arg.size() > 4 && arg.ends_with(".lam")) throw InputError("file not found: " + arg);
    return arg;
}

inline Prelude load_prelude() {
    if (const char* path = std::getenv("PLAMB_PRELUDE"); path && *path) return parse_prelude(read_file(path));
    return default_prelude();
}

inline std::string braced(const Dist& d, const PrintOptions& opts = {}) {
    std::vector<std::string> parts;
    for (const auto& e : d) parts.push_back(e.weight.str() + ": " + print(e.term, opts));
    std::sort(parts.begin(), parts.end());
    std::string out = "{";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    return out + "}";
}

inline json entries_json(const std::vector<Entry>& es, const PrintOptions& opts = {}) {
    json arr = json::array();
    for (const auto& e : es) arr.push_back({{"term", print(e.term, opts)}, {"weight", e.weight.str()}});
    return arr;
}

inline json verdict_json(const Verdict& v) {
    json j = {{"holds_at_bound", v.holds},
              {"exact", v.exact},
              {"depth", v.params.depth},
              {"fuel", v.params.fuel},
              {"slack", v.params.slack_enabled},
              {"witness", nullptr}};
    if (v.witness) {
        json path = json::array();
        for (const auto& l : v.witness->path) path.push_back(to_string(l));
        j["witness"] = {{"path", path},
                        {"kind", to_string(v.witness->kind)},
                        {"deficit", v.witness->deficit.str()},
                        {"cut", entries_json(v.witness->cut)}};
    }
    return j;
}

inline void verdict_text(std::ostream& out, const Verdict& v) {
    if (v.holds) {
        out << "NoCounterexample at depth " << v.params.depth << ", fuel " << v.params.fuel
            << (v.exact ? " (exact)" : " (bounded: some evaluation did not converge)") << "\n";
        return;
    }
    const Witness& w = *v.witness;
    out << "Refuted: " << to_string(w.kind) << ", deficit " << w.deficit.str() << "\n";
    out << "  path:";
    for (const auto& l : w.path) out << " [" << to_string(l) << "]";
    out << "\n  cut: " << braced(Dist::from_entries(w.cut)) << "\n";
}

inline FinSupportDist<std::size_t> support_from_json(const json& j, std::size_t& points) {
    FinSupportDist<std::size_t> d;
    const auto& ws = j.at("weights");
    points = j.contains("points") ? j.at("points").size() : ws.size();
    if (points != ws.size()) throw InputError("points and weights have different lengths");
    for (std::size_t i = 0; i < ws.size(); ++i) {
        d.points.push_back(i);
        d.weights.push_back(Weight::from_string(ws[i].is_string() ? ws[i].get<std::string>() : ws[i].dump()));
    }
    return d;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args) {
        CLI::App app{"Probabilistic lambda calculus: evaluation, open simulation, lifting, approximants", "plamb"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");
        std::vector<std::string> terms;
        std::string lift_file;
        auto common = [&](CLI::App* sub) {
            sub->add_option("--fuel", cfg_.fuel, "parallel reduction steps per evaluation")->capture_default_str();
            sub->add_option("--format", cfg_.format, "output format")
                ->check(CLI::IsMember({"text", "json"}))
                ->capture_default_str();
        };
        auto* eval = app.add_subcommand("eval", "evaluate a term and report its value distribution");
        eval->add_option("term", terms, "term text or file")->required()->expected(1);
        common(eval);
        auto* trace = app.add_subcommand("trace", "print every parallel reduction step");
        trace->add_option("term", terms)->required()->expected(1);
        common(trace);
        auto* lts = app.add_subcommand("lts", "labelled transitions of a term");
        lts->add_option("term", terms)->required()->expected(1);
        common(lts);
        auto* sim = app.add_subcommand("sim", "bounded check that B simulates A");
        sim->add_option("terms", terms, "A B")->required()->expected(2);
        auto* bisim = app.add_subcommand("bisim", "bounded simulation check in both directions");
        bisim->add_option("terms", terms, "A B")->required()->expected(2);
        for (auto* s : {sim, bisim}) {
            common(s);
            s->add_option("--depth", cfg_.depth, "stratum")->capture_default_str();
            s->add_flag("--no-slack", cfg_.no_slack, "do not credit unevaluated target mass");
        }
        auto* lift = app.add_subcommand("lift", "decide a lifting instance given as JSON");
        lift->add_option("instance", lift_file, "JSON file")->required();
        lift->add_flag("--oracle", cfg_.oracle, "also run subset enumeration");
        lift->add_option("--format", cfg_.format)->check(CLI::IsMember({"text", "json"}));
        auto* approx = app.add_subcommand("approx", "generate or check finite approximants");
        approx->add_option("term", terms)->required()->expected(1);
        common(approx);
        approx->add_option("--depth", cfg_.depth)->capture_default_str();
        approx->add_option("--grain", cfg_.grain, "grid 1/g for weights")->capture_default_str();
        approx->add_option("--check", cfg_.check_file, "approximant to test instead of generating");
        auto* norm = app.add_subcommand("normalize", "normalised value distribution per fuel step");
        norm->add_option("term", terms)->required()->expected(1);
        common(norm);
        auto* self = app.add_subcommand("selftest", "run the invariant suite on the bundled corpus");
        self->add_option("--seed", cfg_.seed)->capture_default_str();
        self->add_option("--format", cfg_.format)->check(CLI::IsMember({"text", "json"}));

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out_, err_);
            return code == 0 ? kOk : kUsage;
        }
        json_ = cfg_.format == "json";

        try {
            prelude_ = load_prelude();
            if (eval->parsed()) return do_eval(terms[0]);
            if (trace->parsed()) return do_trace(terms[0]);
            if (lts->parsed()) return do_lts(terms[0]);
            if (sim->parsed()) return do_sim(terms[0], terms[1]);
            if (bisim->parsed()) return do_bisim(terms[0], terms[1]);
            if (lift->parsed()) return do_lift(lift_file);
            if (approx->parsed()) return do_approx(terms[0]);
            if (norm->parsed()) return do_normalize(terms[0]);
            if (self->parsed()) return do_selftest();
        } catch (const DivergenceError& e) {
            err_ << "plamb: " << e.what() << "\n";
            return kRefuted;
        } catch (const std::exception& e) {
            err_ << "plamb: " << e.what() << "\n";
            return kUsage;
        }
        return kUsage;
    }

private:
    Dist load(const std::string& arg) {
        const std::string src = term_source(arg);
        try {
            return parse(src, prelude_);
        } catch (const ParseError& e) {
            throw ParseError(std::string("in ") + arg + ": " + e.message(), e.line(), e.column());
        }
    }

    SimParams sim_params() const { return SimParams{cfg_.depth, cfg_.fuel, !cfg_.no_slack}; }

    int do_eval(const std::string& arg) {
        const EvolveReport r = evolve(load(arg), cfg_.fuel);
        if (json_) {
            out_ << json{{"values", entries_json(r.values.entries())},
                         {"mass", r.values.mass().str()},
                         {"residual", r.residual.str()},
                         {"steps", r.steps_used},
                         {"converged", r.converged}}
                        .dump(2)
                 << "\n";
            return kOk;
        }
        out_ << braced(r.values) << "\n";
        out_ << "value mass " << r.values.mass().str() << ", residual " << r.residual.str() << ", after "
             << r.steps_used << " step" << (r.steps_used == 1 ? "" : "s")
             << (r.converged ? "" : " (fuel exhausted)") << "\n";
        for (const auto& e : r.values)
            out_ << "  " << e.weight.str() << "\t" << print(e.term) << "\n";
        return kOk;
    }

    int do_trace(const std::string& arg) {
        Dist d = load(arg);
        json steps = json::array();
        for (std::size_t s = 0;; ++s) {
            const Weight res = residual_mass(d);
            if (json_)
                steps.push_back({{"step", s}, {"state", print(d)}, {"residual", res.str()}});
            else
                out_ << s << ": " << print(d) << "\n";
            if (res.is_zero() || s == cfg_.fuel) break;
            d = step(d);
        }
        if (json_) out_ << steps.dump(2) << "\n";
        return kOk;
    }

    int do_lts(const std::string& arg) {
        const Dist d = load(arg);
        std::size_t n = 0;
        while (occurs_free(reserved_symbol(n), d)) ++n;
        const std::string fresh = reserved_symbol(n);
        json strong = json::array();
        for (const auto& e : d) {
            json ts = json::array();
            if (!json_) out_ << e.weight.str() << ": " << print(e.term) << "\n";
            for (const auto& t : strong_transitions(e.term, fresh)) {
                if (json_)
                    ts.push_back({{"label", to_string(t.label)}, {"target", print(t.target)}});
                else
                    out_ << "  --" << to_string(t.label) << "--> " << print(t.target) << "\n";
            }
            strong.push_back({{"term", print(e.term)}, {"weight", e.weight.str()}, {"transitions", ts}});
        }
        const EvolveReport r = evolve(d, cfg_.fuel);
        json weak = json::array();
        if (!json_) out_ << "weak transitions after " << r.steps_used << " steps:\n";
        for (const auto& l : visible_labels(r.values, fresh)) {
            const EvolveReport t = weak_max_transition(r.values, l, cfg_.fuel);
            if (json_)
                weak.push_back({{"label", to_string(l)}, {"target", print(t.values)}, {"residual", t.residual.str()}});
            else
                out_ << "  ==" << to_string(l) << "==> " << braced(t.values) << "\n";
        }
        if (json_) out_ << json{{"strong", strong}, {"weak", weak}}.dump(2) << "\n";
        return kOk;
    }

    int do_sim(const std::string& a, const std::string& b) {
        const Verdict v = sim_check(load(a), load(b), sim_params());
        if (json_)
            out_ << verdict_json(v).dump(2) << "\n";
        else
            verdict_text(out_, v);
        return v.holds ? kOk : kRefuted;
    }

    int do_bisim(const std::string& a, const std::string& b) {
        const auto [fwd, bwd] = bisim_check(load(a), load(b), sim_params());
        const bool both = fwd.holds && bwd.holds;
        if (json_) {
            out_ << json{{"forward", verdict_json(fwd)}, {"backward", verdict_json(bwd)}, {"bisimilar_at_bound", both}}
                        .dump(2)
                 << "\n";
        } else {
            out_ << "A below B: ";
            verdict_text(out_, fwd);
            out_ << "B below A: ";
            verdict_text(out_, bwd);
        }
        return both ? kOk : kRefuted;
    }

    int do_lift(const std::string& file) {
        json j;
        try {
            j = json::parse(read_file(file));
        } catch (const json::exception& e) {
            throw InputError(std::string("malformed lifting instance: ") + e.what());
        }
        std::size_t n = 0, m = 0;
        const auto d = support_from_json(j.at("source"), n);
        const auto e = support_from_json(j.at("target"), m);
        RelMatrix r(n, m);
        for (const auto& pair : j.at("relation")) {
            const auto i = pair.at(0).get<std::size_t>(), k = pair.at(1).get<std::size_t>();
            if (i >= n || k >= m) throw DimensionMismatch("relation pair out of range");
            r.set(i, k);
        }
        Weight slack;
        if (j.contains("slack")) slack = Weight::from_string(j["slack"].get<std::string>());
        const LiftVerdict v = lift_check_flow(d, e, r, slack);
        json res = {{"holds", v.holds}, {"deficit", v.deficit.str()}, {"witness_cut", v.witness_cut}};
        if (cfg_.oracle) {
            const LiftVerdict o = lift_check_subsets(d, e, r);
            res["oracle"] = {{"holds", o.holds}, {"deficit", o.deficit.str()}, {"witness_cut", o.witness_cut}};
        }
        if (json_) {
            out_ << res.dump(2) << "\n";
        } else {
            out_ << (v.holds ? "lifts" : "does not lift");
            if (!v.holds) {
                out_ << ", deficit " << v.deficit.str() << ", cut {";
                for (std::size_t i = 0; i < v.witness_cut.size(); ++i) out_ << (i ? ", " : "") << v.witness_cut[i];
                out_ << "}";
            }
            out_ << "\n";
            if (cfg_.oracle) out_ << "subset enumeration: deficit " << res["oracle"]["deficit"].get<std::string>() << "\n";
        }
        return v.holds ? kOk : kRefuted;
    }

    int do_approx(const std::string& arg) {
        const Dist m = load(arg);
        const Weight grain = Weight::from_string(cfg_.grain);
        check_granularity(grain);
        if (!cfg_.check_file.empty()) {
            const FinDist c = parse_fin(term_source(cfg_.check_file), &prelude_);
            const bool ok = approx_check(c, m, cfg_.depth, cfg_.fuel);
            if (json_)
                out_ << json{{"approximant", print(c)}, {"depth", cfg_.depth}, {"member", ok}}.dump(2) << "\n";
            else
                out_ << print(c) << (ok ? " is" : " is not") << " an approximant at depth " << cfg_.depth << "\n";
            return ok ? kOk : kRefuted;
        }
        const auto cs = approx_generate(m, cfg_.depth, cfg_.fuel, grain);
        json arr = json::array();
        for (const auto& c : cs) {
            if (json_)
                arr.push_back(print(c));
            else
                out_ << print(c) << "\n";
        }
        if (json_) out_ << arr.dump(2) << "\n";
        return kOk;
    }

    int do_normalize(const std::string& arg) {
        const NormalizationReport r = normalize(load(arg), cfg_.fuel);
        if (json_) {
            json steps = json::array();
            for (const auto& s : r.steps)
                steps.push_back({{"step", s.fuel_step},
                                 {"mass", s.mass.str()},
                                 {"normalized", entries_json(s.normalized.entries())},
                                 {"distance", s.distance ? json(s.distance->str()) : json(nullptr)}});
            out_ << json{{"steps", steps}, {"converged", r.converged}, {"converged_at", r.converged_at}}.dump(2)
                 << "\n";
            return kOk;
        }
        out_ << "step\tmass\tdistance\tnormalized\n";
        for (const auto& s : r.steps)
            out_ << s.fuel_step << "\t" << s.mass.str() << "\t" << (s.distance ? s.distance->str() : "-") << "\t"
                 << braced(s.normalized) << "\n";
        if (r.converged)
            out_ << "converged from step " << r.converged_at << "\n";
        else
            out_ << "not converged within " << cfg_.fuel << " steps\n";
        return kOk;
    }

    int do_selftest() {
        const SelfTestReport rep = run_selftest(cfg_.seed);
        if (json_) {
            json arr = json::array();
            for (const auto& c : rep.checks)
                arr.push_back({{"name", c.name}, {"passed", c.passed}, {"total", c.total}});
            out_ << json{{"seed", cfg_.seed}, {"checks", arr}, {"ok", rep.ok()}}.dump(2) << "\n";
        } else {
            for (const auto& c : rep.checks)
                out_ << (c.passed == c.total ? "pass " : "FAIL ") << c.name << " " << c.passed << "/" << c.total
                     << "\n";
            for (const auto& f : rep.failures) out_ << "  " << f << "\n";
        }
        return rep.ok() ? kOk : kRefuted;
    }

    std::ostream& out_;
    std::ostream& err_;
    Config cfg_;
    Prelude prelude_;
    bool json_ = false;
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Runner(out, err).run(args);
}

}  // namespace plamb::cli

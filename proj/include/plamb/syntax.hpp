#pragma once

// Concrete syntax:
//
//   dist   ::= term | '{' weight ':' term (',' weight ':' term)* '}' | '{}'
//   term   ::= var | '\' var '.' dist | atom atom+
//   atom   ::= var | '(' dist ')'
//   weight ::= integer '/' integer | decimal
//
// `--` starts a comment running to end of line. Identifiers beginning with
// `#` are reserved for generated symbols. Free identifiers that name a
// prelude definition are replaced by that definition. Approximant syntax adds
// the atom `_|_` for the undefined term.

#include "plamb/errors.hpp"
#include "plamb/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plamb {

using Prelude = std::map<std::string, Dist, std::less<>>;

/// (\x. x x) (\x. x x)
inline const Term& omega_term() {
    static const Term t = [] {
        const Dist self = lam("x", app(var("x"), var("x")));
        return Term::app(self, self);
    }();
    return t;
}

struct ParseOptions {
    const Prelude* prelude = nullptr;
    bool allow_bottom = false;  // accept `_|_`
};

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Parser {
public:
    Parser(std::string_view src, ParseOptions opts) : src_(src), opts_(opts) {}

    Dist parse_all() {
        Dist d = parse_dist();
        skip_ws();
        if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
        return d;
    }

private:
    std::string_view src_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    std::vector<std::string> scope_;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }
    char peek_at(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (!at_end()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == '-' && peek_at(1) == '-') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'" + (at_end() ? " at end of input" : ""));
        advance();
    }

    bool lambda_ahead() const {
        if (peek() == '\\') return true;
        // UTF-8 for U+03BB
        return static_cast<unsigned char>(peek()) == 0xCE && static_cast<unsigned char>(peek_at(1)) == 0xBB;
    }

    bool bottom_ahead() const { return peek() == '_' && peek_at(1) == '|' && peek_at(2) == '_'; }

    std::string identifier() {
        skip_ws();
        if (peek() == '#') throw ReservedNameError("identifiers starting with '#' are reserved", line_, col_);
        if (!ident_start(peek())) fail("expected identifier");
        std::string name;
        while (!at_end() && ident_char(peek())) {
            name.push_back(peek());
            advance();
        }
        return name;
    }

    Weight weight() {
        skip_ws();
        const std::size_t l = line_, c = col_;
        std::string text;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/' || peek() == '.')) {
            text.push_back(peek());
            advance();
        }
        try {
            Weight w = Weight::from_string(text);
            if (w > Weight::one()) throw ParseError("weight " + w.str() + " exceeds 1", l, c);
            return w;
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), l, c);
        }
    }

    Dist parse_dist() {
        skip_ws();
        if (peek() != '{') return parse_term();
        const std::size_t l = line_, c = col_;
        advance();
        skip_ws();
        if (peek() == '}') {
            advance();
            return Dist();
        }
        DistBuilder b;
        for (;;) {
            Weight w = weight();
            expect(':');
            b.add(w, parse_term());
            skip_ws();
            if (peek() == ',') {
                advance();
                continue;
            }
            expect('}');
            break;
        }
        try {
            return std::move(b).build();
        } catch (const MassError& e) {
            throw MassError(std::to_string(l) + ":" + std::to_string(c) + ": " + e.what());
        }
    }

    bool atom_ahead() {
        skip_ws();
        if (at_end()) return false;
        return peek() == '(' || peek() == '#' || ident_start(peek());
    }

    Dist parse_term() {
        skip_ws();
        if (lambda_ahead()) {
            if (peek() == '\\') advance();
            else { advance(); advance(); }
            std::string binder = identifier();
            expect('.');
            scope_.push_back(binder);
            Dist body = parse_dist();
            scope_.pop_back();
            return Dist::point(Term::abs(binder, std::move(body)));
        }
        Dist acc = parse_atom();
        while (atom_ahead()) acc = app(acc, parse_atom());
        return acc;
    }

    Dist parse_atom() {
        skip_ws();
        if (peek() == '(') {
            advance();
            Dist d = parse_dist();
            expect(')');
            return d;
        }
        if (bottom_ahead()) {
            if (!opts_.allow_bottom) fail("'_|_' is only allowed in approximants");
            advance(); advance(); advance();
            return Dist::point(omega_term());
        }
        std::string name = identifier();
        for (std::size_t i = scope_.size(); i-- > 0;)
            if (scope_[i] == name) return Dist::point(Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - i)));
        if (opts_.prelude) {
            if (auto it = opts_.prelude->find(name); it != opts_.prelude->end()) return it->second;
        }
        return var(name);
    }
};

struct Printer {
    bool bottom_marker = false;
    std::set<std::string> taken;        // free names of the whole printed value
    std::vector<std::string> binders;   // display names, innermost last

    std::string fresh(std::string hint) {
        if (hint.empty() || hint[0] == '#') hint = "x";
        auto used = [&](const std::string& n) {
            return taken.contains(n) || std::find(binders.begin(), binders.end(), n) != binders.end();
        };
        while (used(hint)) hint.push_back('\'');
        return hint;
    }

    bool is_bottom(const Term& t) const { return bottom_marker && t == omega_term(); }

    static bool is_var(const Term& t) { return t.is_free() || t.is_bound(); }

    std::string var_name(const Term& t) const {
        if (t.is_free()) return t.name();
        if (t.index() < binders.size()) return binders[binders.size() - 1 - t.index()];
        return "?" + std::to_string(t.index());
    }

    std::string term(const Term& t) {
        if (is_bottom(t)) return "_|_";
        switch (t.kind()) {
            case TermKind::Bound:
            case TermKind::Free: return var_name(t);
            case TermKind::Abs: {
                std::string n = fresh(t.name());
                binders.push_back(n);
                std::string out = "\\" + n + ". " + dist(t.body());
                binders.pop_back();
                return out;
            }
            case TermKind::App: return head(t.fun()) + " " + argument(t.arg());
        }
        return {};
    }

    std::string head(const Dist& f) {
        if (f.is_unit_point()) {
            const Term& h = f.only();
            if (is_bottom(h)) return "_|_";
            if (is_var(h) || h.is_app()) return term(h);
        }
        return "(" + dist(f) + ")";
    }

    std::string argument(const Dist& a) {
        if (a.is_unit_point() && (is_var(a.only()) || is_bottom(a.only()))) return term(a.only());
        return "(" + dist(a) + ")";
    }

    std::string dist(const Dist& d) {
        if (d.empty()) return "{}";
        if (d.is_unit_point()) return term(d.only());
        std::vector<std::pair<std::string, std::string>> parts;
        for (const auto& e : d) parts.emplace_back(term(e.term), e.weight.str());
        std::sort(parts.begin(), parts.end());
        std::string out = "{";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ", ";
            out += parts[i].second + ": " + parts[i].first;
        }
        return out + "}";
    }
};

}  // namespace detail

inline Dist parse(std::string_view src, const ParseOptions& opts = {}) {
    return detail::Parser(src, opts).parse_all();
}

inline Dist parse(std::string_view src, const Prelude& prelude) {
    ParseOptions opts;
    opts.prelude = &prelude;
    return parse(src, opts);
}

struct PrintOptions {
    bool bottom_marker = false;  // render the divergent term as `_|_`
};

inline std::string print(const Dist& d, const PrintOptions& opts = {}) {
    detail::Printer p;
    p.bottom_marker = opts.bottom_marker;
    p.taken = free_names(d);
    return p.dist(d);
}

inline std::string print(const Term& t, const PrintOptions& opts = {}) {
    return print(Dist::point(t), opts);
}

/// Parses `name = term` definitions, one per line; later lines may use
/// earlier names.
inline Prelude parse_prelude(std::string_view text) {
    Prelude out;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++lineno;
        start = end + 1;
        if (auto c = line.find("--"); c != std::string_view::npos) line = line.substr(0, c);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'name = term'", lineno, first + 1);
        std::string name(line.substr(first, eq - first));
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        if (name.empty() || !detail::ident_start(name[0]) ||
            !std::all_of(name.begin(), name.end(), detail::ident_char))
            throw ParseError("bad definition name '" + name + "'", lineno, first + 1);
        try {
            out.insert_or_assign(name, parse(line.substr(eq + 1), out));
        } catch (const ParseError& e) {
            throw ParseError(std::string("in definition of ") + name + ": " + e.message(), lineno, e.column());
        }
        if (end == text.size()) break;
    }
    return out;
}

}  // namespace plamb

#pragma once

// Boolean formulas in prefix notation: (and e1 e2), (or e1 e2), (not e),
// variables x<i>, constants 0 and 1.

#include <cctype>
#include <string>
#include <vector>

#include "bpseq/bp.hpp"
#include "bpseq/common.hpp"

namespace bpseq {

struct Formula {
    enum class Kind { And, Or, Not, Var, Const };
    Kind kind = Kind::Const;
    u32 var = 0;        // Kind::Var, 1-based
    bool value = false; // Kind::Const
    std::vector<Formula> kids;
};

inline Formula f_var(u32 i) { return Formula{Formula::Kind::Var, i, false, {}}; }
inline Formula f_const(bool v) { return Formula{Formula::Kind::Const, 0, v, {}}; }
inline Formula f_not(Formula a) { return Formula{Formula::Kind::Not, 0, false, {std::move(a)}}; }
inline Formula f_and(Formula a, Formula b) {
    return Formula{Formula::Kind::And, 0, false, {std::move(a), std::move(b)}};
}
inline Formula f_or(Formula a, Formula b) {
    return Formula{Formula::Kind::Or, 0, false, {std::move(a), std::move(b)}};
}

inline bool eval_formula(const Formula& f, const Assignment& asg) {
    switch (f.kind) {
        case Formula::Kind::And: return eval_formula(f.kids[0], asg) && eval_formula(f.kids[1], asg);
        case Formula::Kind::Or: return eval_formula(f.kids[0], asg) || eval_formula(f.kids[1], asg);
        case Formula::Kind::Not: return !eval_formula(f.kids[0], asg);
        case Formula::Kind::Var: return f.var <= asg.n && asg.get(f.var);
        case Formula::Kind::Const: return f.value;
    }
    return false;
}

inline u32 max_var(const Formula& f) {
    u32 m = (f.kind == Formula::Kind::Var) ? f.var : 0;
    for (const Formula& k : f.kids) m = std::max(m, max_var(k));
    return m;
}

// Negations are free in the permutation compilation, so depth counts only
// binary connectives.
inline u32 formula_depth(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or:
            return 1 + std::max(formula_depth(f.kids[0]), formula_depth(f.kids[1]));
        case Formula::Kind::Not:
            return formula_depth(f.kids[0]);
        default:
            return 0;
    }
}

inline std::string serialize_formula(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::And:
            return "(and " + serialize_formula(f.kids[0]) + " " + serialize_formula(f.kids[1]) + ")";
        case Formula::Kind::Or:
            return "(or " + serialize_formula(f.kids[0]) + " " + serialize_formula(f.kids[1]) + ")";
        case Formula::Kind::Not:
            return "(not " + serialize_formula(f.kids[0]) + ")";
        case Formula::Kind::Var:
            return "x" + std::to_string(f.var);
        case Formula::Kind::Const:
            return f.value ? "1" : "0";
    }
    return "";
}

namespace detail {

struct FormulaToken {
    std::string text;
    size_t pos; // 1-based character position
};

inline std::vector<FormulaToken> formula_tokens(const std::string& text) {
    std::vector<FormulaToken> toks;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')') {
            toks.push_back({std::string(1, c), i + 1});
            ++i;
        } else {
            size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '(' && text[j] != ')')
                ++j;
            toks.push_back({text.substr(i, j - i), i + 1});
            i = j;
        }
    }
    return toks;
}

[[noreturn]] inline void formula_fail(size_t pos, const std::string& msg) {
    fail_input("position " + std::to_string(pos) + ": " + msg);
}

inline Formula parse_formula_rec(const std::vector<FormulaToken>& toks, size_t& i) {
    if (i >= toks.size())
        formula_fail(toks.empty() ? 1 : toks.back().pos, "unexpected end of formula");
    const FormulaToken& tok = toks[i];
    if (tok.text == ")") formula_fail(tok.pos, "unexpected ')'");
    if (tok.text == "(") {
        ++i;
        if (i >= toks.size()) formula_fail(tok.pos, "unterminated '('");
        const FormulaToken& head = toks[i];
        u32 arity;
        Formula::Kind kind;
        if (head.text == "and") {
            kind = Formula::Kind::And;
            arity = 2;
        } else if (head.text == "or") {
            kind = Formula::Kind::Or;
            arity = 2;
        } else if (head.text == "not") {
            kind = Formula::Kind::Not;
            arity = 1;
        } else {
            formula_fail(head.pos, "unknown connective '" + head.text + "'");
        }
        ++i;
        Formula f;
        f.kind = kind;
        for (u32 a = 0; a < arity; ++a) {
            if (i < toks.size() && toks[i].text == ")")
                formula_fail(toks[i].pos, "'" + head.text + "' needs " + std::to_string(arity) +
                                              " operands, got " + std::to_string(a));
            f.kids.push_back(parse_formula_rec(toks, i));
        }
        if (i >= toks.size()) formula_fail(toks.back().pos, "missing ')'");
        if (toks[i].text != ")")
            formula_fail(toks[i].pos, "'" + head.text + "' takes exactly " + std::to_string(arity) +
                                          " operands");
        ++i;
        return f;
    }
    ++i;
    if (tok.text == "0") return f_const(false);
    if (tok.text == "1") return f_const(true);
    if (tok.text.size() >= 2 && tok.text[0] == 'x') {
        std::string digits = tok.text.substr(1);
        if (digits.find_first_not_of("0123456789") == std::string::npos) {
            u64 v = std::strtoull(digits.c_str(), nullptr, 10);
            if (v < 1 || v > 1000000) formula_fail(tok.pos, "variable index out of range");
            return f_var(static_cast<u32>(v));
        }
    }
    formula_fail(tok.pos, "expected a formula, got '" + tok.text + "'");
}

} // namespace detail

inline Formula parse_formula(const std::string& text) {
    std::string body;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) body += raw.substr(0, raw.find('#')) + "\n";
    std::vector<detail::FormulaToken> toks = detail::formula_tokens(body);
    if (toks.empty()) fail_input("position 1: empty formula");
    size_t i = 0;
    Formula f = detail::parse_formula_rec(toks, i);
    if (i != toks.size()) detail::formula_fail(toks[i].pos, "trailing input after formula");
    return f;
}

// Seeded random formula with binary depth at most `depth` over x1..xn.
inline Formula random_formula(rng64& rng, u32 depth, u32 n) {
    u32 pick = rng.below(depth == 0 ? 5 : 16);
    if (depth == 0 || pick >= 12) {
        if (pick == 4 || n == 0) return f_const(rng.below(2) == 1);
        return f_var(1 + rng.below(n));
    }
    if (pick < 5) return f_and(random_formula(rng, depth - 1, n), random_formula(rng, depth - 1, n));
    if (pick < 10) return f_or(random_formula(rng, depth - 1, n), random_formula(rng, depth - 1, n));
    return f_not(random_formula(rng, depth, n));
}

} // namespace bpseq

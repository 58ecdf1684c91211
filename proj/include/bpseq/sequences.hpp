#pragma once

// Weighted alphabets and symbol sequences: data model, text format, and
// weight expansion.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "bpseq/common.hpp"

namespace bpseq {

inline constexpr u64 default_unweight_cap = 10'000'000;

// Symbol identifiers are abstract integers; weights are positive.
struct WeightedAlphabet {
    std::map<u32, u64> weights;

    bool operator==(const WeightedAlphabet&) const = default;

    void validate() const {
        for (const auto& [id, w] : weights)
            if (w < 1) fail_input("symbol " + std::to_string(id) + " has weight 0");
    }

    u64 weight(u32 sym) const {
        auto it = weights.find(sym);
        if (it == weights.end())
            fail_input("symbol " + std::to_string(sym) + " missing from alphabet");
        return it->second;
    }

    u64 max_weight() const {
        u64 m = 1;
        for (const auto& [id, w] : weights) m = std::max(m, w);
        return m;
    }

    bool all_unit() const {
        for (const auto& [id, w] : weights)
            if (w != 1) return false;
        return true;
    }
};

struct WeightedSequence {
    std::vector<u32> syms;
    std::shared_ptr<const WeightedAlphabet> alphabet;

    void validate() const {
        if (!alphabet) fail_input("sequence has no alphabet");
        alphabet->validate();
        for (u32 s : syms) alphabet->weight(s);
    }
};

inline WeightedSequence make_sequence(std::vector<u32> syms, WeightedAlphabet alph) {
    WeightedSequence p{std::move(syms), std::make_shared<WeightedAlphabet>(std::move(alph))};
    p.validate();
    return p;
}

// Sum of the weights of all symbols.
inline u64 total_length(const WeightedSequence& p) {
    u64 total = 0;
    for (u32 s : p.syms) total = checked_add(total, p.alphabet->weight(s));
    return total;
}

// Replace each symbol by weight-many consecutive copies. Output length equals
// total_length; refuses beyond `cap`.
inline std::vector<u32> unweight(const WeightedSequence& p, u64 cap = default_unweight_cap) {
    u64 total = total_length(p);
    if (total > cap)
        fail_guard("unweighted length " + std::to_string(total) + " exceeds cap " + std::to_string(cap));
    std::vector<u32> out;
    out.reserve(total);
    for (u32 s : p.syms) {
        u64 w = p.alphabet->weight(s);
        for (u64 i = 0; i < w; ++i) out.push_back(s);
    }
    return out;
}

// ---- text format ----------------------------------------------------------
//
//   alphabet <count>
//   sym <id> weight <w>      (unweighted files: 'sym <id>', weight 1 implied)
//   seq
//   <ids, whitespace separated>
//
// One sequence per file; '#' comments and blank lines allowed. serialize
// emits the canonical form and round-trips byte-exactly through parse.

struct SequenceFile {
    WeightedSequence seq;
    bool weighted_syntax = true;
};

inline std::string serialize_seq_file(const SequenceFile& f) {
    std::ostringstream out;
    const auto& weights = f.seq.alphabet->weights;
    out << "alphabet " << weights.size() << "\n";
    for (const auto& [id, w] : weights) {
        out << "sym " << id;
        if (f.weighted_syntax) out << " weight " << w;
        out << "\n";
    }
    out << "seq\n";
    u32 on_line = 0;
    for (u32 s : f.seq.syms) {
        out << s << ((++on_line % 16 == 0) ? "\n" : " ");
    }
    if (on_line % 16 != 0) out << "\n";
    return out.str();
}

inline SequenceFile parse_seq_file(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    u32 lineno = 0;
    bool have_header = false, in_body = false;
    u64 declared = 0;
    int syntax = -1; // -1 undecided, 0 unweighted, 1 weighted
    WeightedAlphabet alph;
    std::vector<u32> syms;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::vector<std::string> toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks[0] != "alphabet" || toks.size() != 2)
                detail::parse_fail(lineno, "expected header 'alphabet <count>'");
            declared = detail::parse_u64_field(toks[1], lineno, "alphabet count");
            have_header = true;
            continue;
        }
        if (in_body) {
            for (const std::string& t : toks) {
                u32 s = detail::parse_u32_field(t, lineno, "sequence symbol");
                if (!alph.weights.count(s))
                    detail::parse_fail(lineno, "symbol " + std::to_string(s) + " missing from alphabet");
                syms.push_back(s);
            }
            continue;
        }
        if (toks[0] == "sym") {
            if (toks.size() == 2) {
                if (syntax == 1) detail::parse_fail(lineno, "missing weight in weighted alphabet");
                syntax = 0;
                u32 id = detail::parse_u32_field(toks[1], lineno, "symbol id");
                if (!alph.weights.emplace(id, 1).second)
                    detail::parse_fail(lineno, "duplicate symbol " + std::to_string(id));
            } else if (toks.size() == 4 && toks[2] == "weight") {
                if (syntax == 0) detail::parse_fail(lineno, "unexpected weight in unweighted alphabet");
                syntax = 1;
                u32 id = detail::parse_u32_field(toks[1], lineno, "symbol id");
                u64 w = detail::parse_u64_field(toks[3], lineno, "symbol weight");
                if (w < 1) detail::parse_fail(lineno, "symbol weight must be positive");
                if (!alph.weights.emplace(id, w).second)
                    detail::parse_fail(lineno, "duplicate symbol " + std::to_string(id));
            } else {
                detail::parse_fail(lineno, "expected 'sym <id>' or 'sym <id> weight <w>'");
            }
        } else if (toks[0] == "seq") {
            if (toks.size() != 1) detail::parse_fail(lineno, "'seq' takes no fields");
            in_body = true;
        } else {
            detail::parse_fail(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!have_header) fail_input("line 1: missing 'alphabet' header");
    if (!in_body) fail_input("missing 'seq' body");
    if (alph.weights.size() != declared)
        fail_input("alphabet declares " + std::to_string(declared) + " symbols, lists " +
                   std::to_string(alph.weights.size()));
    SequenceFile f;
    f.weighted_syntax = (syntax == 1);
    f.seq.alphabet = std::make_shared<WeightedAlphabet>(std::move(alph));
    f.seq.syms = std::move(syms);
    f.seq.validate();
    return f;
}

} // namespace bpseq

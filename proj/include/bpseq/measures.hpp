#pragma once

// Solvers for LCS, weighted LCS, k-LCS, and edit distance. All quadratic (or
// K-dimensional) dynamic programs in linear space, plus a word-parallel LCS
// for long inputs.

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "bpseq/common.hpp"
#include "bpseq/sequences.hpp"

namespace bpseq {

inline constexpr u64 default_k_lcs_cell_guard = 10'000'000;

// Standard quadratic recurrence, two rows.
inline u64 lcs_quadratic(const std::vector<u32>& x, const std::vector<u32>& y) {
    std::vector<u64> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    for (u32 a : x) {
        for (size_t j = 1; j <= y.size(); ++j) {
            u64 v = (a == y[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
            cur[j] = v;
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

// Word-parallel LCS. Row state V has one bit per position of y; bit j stays 1
// while the DP row value does not increase at column j+1. Per symbol of x the
// update is V = (V + (V & M)) | (V & ~M) with M the match mask of that
// symbol, carried across words; the final LCS is the number of cleared bits.
inline u64 lcs_bits(const std::vector<u32>& x, const std::vector<u32>& y) {
    const size_t m = y.size();
    const size_t words = (m + 63) / 64;
    if (words == 0 || x.empty()) return 0;
    std::unordered_map<u32, std::vector<u64>> match;
    match.reserve(64);
    for (size_t j = 0; j < m; ++j) {
        auto [it, fresh] = match.try_emplace(y[j]);
        if (fresh) it->second.assign(words, 0);
        it->second[j / 64] |= u64{1} << (j % 64);
    }
    std::vector<u64> V(words, ~u64{0});
    for (u32 a : x) {
        auto it = match.find(a);
        if (it == match.end()) continue;
        const std::vector<u64>& M = it->second;
        u64 carry = 0;
        for (size_t w = 0; w < words; ++w) {
            u64 v = V[w];
            u64 u = v & M[w];
            u64 s1 = v + u;
            u64 c1 = (s1 < v) ? 1 : 0;
            u64 s2 = s1 + carry;
            u64 c2 = (s2 < s1) ? 1 : 0;
            V[w] = s2 | (v & ~M[w]);
            carry = c1 | c2;
        }
    }
    u64 lcs = 0;
    for (size_t w = 0; w < words; ++w) {
        u64 valid = (w == words - 1 && m % 64 != 0) ? ((u64{1} << (m % 64)) - 1) : ~u64{0};
        lcs += static_cast<u64>(std::popcount(~V[w] & valid));
    }
    return lcs;
}

inline u64 lcs(const std::vector<u32>& x, const std::vector<u32>& y) {
    return lcs_bits(x, y);
}

// Maximum total weight of a common subsequence.
inline u64 wlcs(const WeightedSequence& p1, const WeightedSequence& p2) {
    if (!p1.alphabet || !p2.alphabet || !(*p1.alphabet == *p2.alphabet))
        fail_input("weighted LCS needs a shared alphabet");
    const std::vector<u32>& x = p1.syms;
    const std::vector<u32>& y = p2.syms;
    total_length(p1); // overflow pre-check: any common subsequence weighs less
    total_length(p2);
    std::vector<u64> ygain(y.size());
    for (size_t j = 0; j < y.size(); ++j) ygain[j] = p1.alphabet->weight(y[j]);
    std::vector<u64> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    for (u32 a : x) {
        for (size_t j = 1; j <= y.size(); ++j) {
            u64 v = std::max(prev[j], cur[j - 1]);
            if (a == y[j - 1]) v = std::max(v, prev[j - 1] + ygain[j - 1]);
            cur[j] = v;
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

// K-dimensional LCS recurrence over a flat table, one cell per prefix tuple.
// `gain` maps a matched symbol to its score (1 when unweighted).
template <typename GainFn>
inline u64 k_lcs_core(const std::vector<std::vector<u32>>& seqs, u64 cell_guard, GainFn gain) {
    const size_t K = seqs.size();
    if (K < 2) fail_input("k-LCS needs at least 2 sequences");
    u64 cells = 1;
    for (const auto& s : seqs) cells = checked_mul(cells, s.size() + 1);
    if (cells > cell_guard)
        fail_guard("k-LCS table of " + std::to_string(cells) + " cells exceeds guard " +
                   std::to_string(cell_guard));
    std::vector<u64> stride(K);
    u64 acc = 1;
    for (size_t d = K; d-- > 0;) {
        stride[d] = acc;
        acc *= seqs[d].size() + 1;
    }
    u64 all_back = 0;
    for (size_t d = 0; d < K; ++d) all_back += stride[d];
    std::vector<u64> dp(cells, 0);
    std::vector<size_t> idx(K, 0);
    for (u64 flat = 0; flat < cells; ++flat) {
        u64 best = 0;
        bool interior = true;
        for (size_t d = 0; d < K; ++d) {
            if (idx[d] == 0) {
                interior = false;
                continue;
            }
            best = std::max(best, dp[flat - stride[d]]);
        }
        if (interior) {
            u32 s0 = seqs[0][idx[0] - 1];
            bool all_match = true;
            for (size_t d = 1; d < K; ++d)
                if (seqs[d][idx[d] - 1] != s0) { all_match = false; break; }
            if (all_match) best = std::max(best, dp[flat - all_back] + gain(s0));
        }
        dp[flat] = best;
        for (size_t d = K; d-- > 0;) {
            if (++idx[d] <= seqs[d].size()) break;
            idx[d] = 0;
        }
    }
    return dp[cells - 1];
}

inline u64 k_lcs(const std::vector<std::vector<u32>>& seqs,
                 u64 cell_guard = default_k_lcs_cell_guard) {
    return k_lcs_core(seqs, cell_guard, [](u32) -> u64 { return 1; });
}

inline u64 k_lcs_weighted(const std::vector<WeightedSequence>& seqs,
                          u64 cell_guard = default_k_lcs_cell_guard) {
    if (seqs.size() < 2) fail_input("k-LCS needs at least 2 sequences");
    for (size_t i = 1; i < seqs.size(); ++i)
        if (!(*seqs[i].alphabet == *seqs[0].alphabet))
            fail_input("k-LCS needs a shared alphabet");
    std::vector<std::vector<u32>> plain;
    for (const auto& s : seqs) plain.push_back(s.syms);
    const WeightedAlphabet& alph = *seqs[0].alphabet;
    return k_lcs_core(plain, cell_guard, [&alph](u32 s) { return alph.weight(s); });
}

// Minimum number of insertions, deletions, and (optionally) substitutions.
inline u64 edit_distance(const std::vector<u32>& x, const std::vector<u32>& y,
                         bool allow_substitution = true) {
    std::vector<u64> prev(y.size() + 1), cur(y.size() + 1);
    std::iota(prev.begin(), prev.end(), u64{0});
    for (size_t i = 1; i <= x.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= y.size(); ++j) {
            u64 v = std::min(prev[j], cur[j - 1]) + 1;
            if (x[i - 1] == y[j - 1])
                v = std::min(v, prev[j - 1]);
            else if (allow_substitution)
                v = std::min(v, prev[j - 1] + 1);
            cur[j] = v;
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

} // namespace bpseq

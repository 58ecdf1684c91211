#pragma once

// Test-only reference implementations, written independently of the library
// code paths they check.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bpseq/bp.hpp"
#include "bpseq/sequences.hpp"

namespace bpseq::testing {

// Set-based BFS over explicitly filtered edges.
inline bool oracle_evaluate_bfs(const BranchingProgram& bp, const Assignment& asg) {
    std::set<std::pair<u32, u32>> cur{{1u, 1u}};
    for (u32 i = 1; i < bp.T; ++i) {
        std::set<std::pair<u32, u32>> next;
        bool bitval = asg.get(bp.layer_var[i - 1]);
        for (const Edge& e : bp.edges) {
            if (e.layer != i) continue;
            if ((e.bit != 0) != bitval) continue;
            if (cur.count({i, e.from})) next.insert({i + 1, e.to});
        }
        cur = std::move(next);
    }
    return cur.count({bp.T, 1u}) != 0;
}

// Depth-first enumeration of start-to-accept paths in the induced subgraph.
inline void oracle_paths_rec(const BranchingProgram& bp, const Assignment& asg,
                             u32 layer, u32 node, bool& found) {
    if (found) return;
    if (layer == bp.T) {
        if (node == 1) found = true;
        return;
    }
    bool bitval = asg.get(bp.layer_var[layer - 1]);
    for (const Edge& e : bp.edges)
        if (e.layer == layer && e.from == node && (e.bit != 0) == bitval)
            oracle_paths_rec(bp, asg, layer + 1, e.to, found);
}

inline bool oracle_evaluate_paths(const BranchingProgram& bp, const Assignment& asg) {
    bool found = false;
    oracle_paths_rec(bp, asg, 1, 1, found);
    return found;
}

inline bool is_subsequence(const std::vector<u32>& sub, const std::vector<u32>& full) {
    size_t pos = 0;
    for (u32 s : sub) {
        while (pos < full.size() && full[pos] != s) ++pos;
        if (pos == full.size()) return false;
        ++pos;
    }
    return true;
}

// Longest common subsequence by enumerating all subsequences of x and testing
// each for being a subsequence of y. Exponential; lengths must stay tiny.
inline u64 oracle_lcs_enum(const std::vector<u32>& x, const std::vector<u32>& y) {
    u64 best = 0;
    for (u64 mask = 0; mask < (u64{1} << x.size()); ++mask) {
        std::vector<u32> sub;
        for (u32 i = 0; i < x.size(); ++i)
            if ((mask >> i) & 1) sub.push_back(x[i]);
        if (is_subsequence(sub, y)) best = std::max<u64>(best, sub.size());
    }
    return best;
}

// Heaviest common subsequence by subsequence enumeration.
inline u64 oracle_wlcs_enum(const std::vector<u32>& x, const std::vector<u32>& y,
                            const WeightedAlphabet& alph) {
    u64 best = 0;
    for (u64 mask = 0; mask < (u64{1} << x.size()); ++mask) {
        std::vector<u32> sub;
        u64 w = 0;
        for (u32 i = 0; i < x.size(); ++i)
            if ((mask >> i) & 1) {
                sub.push_back(x[i]);
                w += alph.weight(x[i]);
            }
        if (is_subsequence(sub, y)) best = std::max(best, w);
    }
    return best;
}

// Longest subsequence common to every input, by enumeration over the first.
inline u64 oracle_common_enum(const std::vector<std::vector<u32>>& seqs) {
    u64 best = 0;
    const std::vector<u32>& x = seqs[0];
    for (u64 mask = 0; mask < (u64{1} << x.size()); ++mask) {
        std::vector<u32> sub;
        for (u32 i = 0; i < x.size(); ++i)
            if ((mask >> i) & 1) sub.push_back(x[i]);
        bool ok = true;
        for (size_t d = 1; d < seqs.size() && ok; ++d) ok = is_subsequence(sub, seqs[d]);
        if (ok) best = std::max<u64>(best, sub.size());
    }
    return best;
}

// Exhaustive search over edit scripts (no memoization).
inline u64 oracle_edit_search(const std::vector<u32>& x, const std::vector<u32>& y,
                              size_t i, size_t j, bool allow_sub) {
    if (i == x.size()) return y.size() - j;
    if (j == y.size()) return x.size() - i;
    u64 best = ~u64{0};
    if (x[i] == y[j]) best = oracle_edit_search(x, y, i + 1, j + 1, allow_sub);
    best = std::min(best, 1 + oracle_edit_search(x, y, i + 1, j, allow_sub));
    best = std::min(best, 1 + oracle_edit_search(x, y, i, j + 1, allow_sub));
    if (allow_sub && x[i] != y[j])
        best = std::min(best, 1 + oracle_edit_search(x, y, i + 1, j + 1, allow_sub));
    return best;
}

} // namespace bpseq::testing

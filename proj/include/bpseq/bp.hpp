#pragma once

// Layered nondeterministic branching programs: data model, text format,
// evaluation by forward reachability, closure operations, brute-force
// satisfiability oracles, and seeded random generation.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bpseq/common.hpp"

namespace bpseq {

// Edge from node (layer, from) to node (layer + 1, to), taken when the
// variable read at `layer` has value `bit`.
struct Edge {
    u32 layer = 0;
    u32 from = 0;
    u32 to = 0;
    u8 bit = 0;

    auto operator<=>(const Edge&) const = default;
};

// Layers are numbered 1..T, nodes within a layer 1..W, variables 1..n.
// Start node is (1, 1), accept node is (T, 1). Layer i < T reads variable
// layer_var[i - 1]. Duplicate edges collapse (std::set).
struct BranchingProgram {
    u32 n = 0;
    u32 T = 0;
    u32 W = 0;
    std::vector<u32> layer_var;
    std::set<Edge> edges;

    bool operator==(const BranchingProgram&) const = default;

    void validate() const {
        if (n < 1) fail_input("branching program needs n >= 1");
        if (T < 2) fail_input("branching program needs T >= 2");
        if (W < 1) fail_input("branching program needs W >= 1");
        if (W > 64) fail_guard("width above 64 is not supported");
        if (layer_var.size() != T - 1) fail_input("expected exactly T-1 layer lines");
        for (u32 i = 0; i < T - 1; ++i) {
            if (layer_var[i] < 1 || layer_var[i] > n)
                fail_input("layer " + std::to_string(i + 1) + " reads variable out of range");
        }
        for (const Edge& e : edges) {
            if (e.layer < 1 || e.layer > T - 1) fail_input("edge layer out of range");
            if (e.from < 1 || e.from > W || e.to < 1 || e.to > W)
                fail_input("edge endpoint out of range");
            if (e.bit > 1) fail_input("edge bit must be 0 or 1");
        }
    }
};

// Total assignment to variables 1..n, stored as bits (variable i at bit i-1).
struct Assignment {
    u32 n = 0;
    u64 bits = 0;

    bool operator==(const Assignment&) const = default;

    bool get(u32 var) const { return (bits >> (var - 1)) & 1; }
};

// Concatenate half-assignments: `a` covers variables 1..a.n, `b` covers
// a.n+1 .. a.n+b.n.
inline Assignment concat_halves(const Assignment& a, const Assignment& b) {
    return Assignment{a.n + b.n, a.bits | (b.bits << a.n)};
}

// All assignments over `n` variables in lexicographic order of the value
// sequence x_1, x_2, ..., x_n (so all-zeros first, x_1 most significant).
inline std::vector<Assignment> all_assignments(u32 n) {
    if (n > 24) fail_guard("assignment enumeration capped at n <= 24");
    std::vector<Assignment> out;
    out.reserve(u64{1} << n);
    for (u64 v = 0; v < (u64{1} << n); ++v) {
        u64 bits = 0;
        for (u32 i = 1; i <= n; ++i)
            bits |= ((v >> (n - i)) & 1) << (i - 1);
        out.push_back(Assignment{n, bits});
    }
    return out;
}

// Per-layer transition masks: step(i, b, j) is the bitmask of layer i+1
// nodes reachable from (i, j) when the layer's variable has value b.
struct bp_transitions {
    std::vector<std::array<std::vector<u64>, 2>> masks;

    explicit bp_transitions(const BranchingProgram& bp) {
        masks.resize(bp.T - 1);
        for (auto& layer : masks)
            for (auto& side : layer)
                side.assign(bp.W, 0);
        for (const Edge& e : bp.edges)
            masks[e.layer - 1][e.bit][e.from - 1] |= u64{1} << (e.to - 1);
    }

    u64 step(u32 layer, bool bit, u64 frontier) const {
        u64 next = 0;
        const std::vector<u64>& m = masks[layer - 1][bit ? 1 : 0];
        while (frontier) {
            u32 j = static_cast<u32>(std::countr_zero(frontier));
            frontier &= frontier - 1;
            next |= m[j];
        }
        return next;
    }
};

// Is (to_layer, to_node) reachable from (from_layer, from_node) in the
// subgraph induced by `asg`?
inline bool reachable(const BranchingProgram& bp, const bp_transitions& tr,
                      u32 from_layer, u32 from_node, u32 to_layer, u32 to_node,
                      const Assignment& asg) {
    if (to_layer < from_layer) return false;
    u64 frontier = u64{1} << (from_node - 1);
    for (u32 i = from_layer; i < to_layer; ++i) {
        frontier = tr.step(i, asg.get(bp.layer_var[i - 1]), frontier);
        if (!frontier) return false;
    }
    return (frontier >> (to_node - 1)) & 1;
}

inline bool evaluate(const BranchingProgram& bp, const bp_transitions& tr, const Assignment& asg) {
    return reachable(bp, tr, 1, 1, bp.T, 1, asg);
}

inline bool evaluate(const BranchingProgram& bp, const Assignment& asg) {
    return evaluate(bp, bp_transitions(bp), asg);
}

// First satisfying assignment in lexicographic order of the value sequence,
// or nullopt. Guarded at n <= 24.
inline std::optional<Assignment> brute_force_sat(const BranchingProgram& bp) {
    if (bp.n > 24) fail_guard("brute-force satisfiability capped at n <= 24");
    bp_transitions tr(bp);
    for (u64 v = 0; v < (u64{1} << bp.n); ++v) {
        u64 bits = 0;
        for (u32 i = 1; i <= bp.n; ++i)
            bits |= ((v >> (bp.n - i)) & 1) << (i - 1);
        Assignment asg{bp.n, bits};
        if (evaluate(bp, tr, asg)) return asg;
    }
    return std::nullopt;
}

// First pair (a, b) in S1 x S2 (row-major order) whose concatenation
// satisfies the program, or nullopt. Every a must cover variables 1..a.n and
// every b the remaining ones.
inline std::optional<std::pair<Assignment, Assignment>> satisfying_pair(
    const BranchingProgram& bp, const std::vector<Assignment>& S1,
    const std::vector<Assignment>& S2) {
    bp_transitions tr(bp);
    for (const Assignment& a : S1)
        for (const Assignment& b : S2) {
            Assignment full = concat_halves(a, b);
            if (full.n != bp.n) fail_input("half-assignment sizes do not sum to n");
            if (evaluate(bp, tr, full)) return std::make_pair(a, b);
        }
    return std::nullopt;
}

// ---- text format ----------------------------------------------------------
//
//   bp n=<n> T=<T> W=<W>
//   layer <i> var <f(i)>
//   edge <i> <j> <j'> <bit>
//
// '#' starts a comment; blank lines are ignored. serialize() emits the
// canonical form (header, layers 1..T-1 in order, edges sorted), and
// parse(serialize(p)) == p for every valid program.

inline std::string serialize_bp(const BranchingProgram& bp) {
    std::ostringstream out;
    out << "bp n=" << bp.n << " T=" << bp.T << " W=" << bp.W << "\n";
    for (u32 i = 1; i < bp.T; ++i)
        out << "layer " << i << " var " << bp.layer_var[i - 1] << "\n";
    for (const Edge& e : bp.edges)
        out << "edge " << e.layer << " " << e.from << " " << e.to << " " << static_cast<u32>(e.bit) << "\n";
    return out.str();
}

inline BranchingProgram parse_bp(const std::string& text) {
    BranchingProgram bp;
    std::istringstream in(text);
    std::string raw;
    u32 lineno = 0;
    bool have_header = false;
    std::vector<bool> layer_seen;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::vector<std::string> toks = detail::split_tokens(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks[0] != "bp") detail::parse_fail(lineno, "expected header 'bp n=.. T=.. W=..'");
            if (toks.size() != 4) detail::parse_fail(lineno, "header needs exactly n=, T=, W= fields");
            bp.n = detail::parse_kv(toks[1], "n", lineno);
            bp.T = detail::parse_kv(toks[2], "T", lineno);
            bp.W = detail::parse_kv(toks[3], "W", lineno);
            if (bp.n < 1 || bp.T < 2 || bp.W < 1)
                detail::parse_fail(lineno, "header needs n >= 1, T >= 2, W >= 1");
            bp.layer_var.assign(bp.T - 1, 0);
            layer_seen.assign(bp.T - 1, false);
            have_header = true;
            continue;
        }
        if (toks[0] == "layer") {
            if (toks.size() != 4 || toks[2] != "var")
                detail::parse_fail(lineno, "expected 'layer <i> var <v>'");
            u32 i = detail::parse_u32_field(toks[1], lineno, "layer index");
            u32 v = detail::parse_u32_field(toks[3], lineno, "layer variable");
            if (i < 1 || i > bp.T - 1) detail::parse_fail(lineno, "layer index out of range");
            if (layer_seen[i - 1]) detail::parse_fail(lineno, "duplicate layer " + std::to_string(i));
            if (v < 1 || v > bp.n) detail::parse_fail(lineno, "layer variable out of range");
            bp.layer_var[i - 1] = v;
            layer_seen[i - 1] = true;
        } else if (toks[0] == "edge") {
            if (toks.size() != 5) detail::parse_fail(lineno, "expected 'edge <i> <j> <j2> <bit>'");
            Edge e;
            e.layer = detail::parse_u32_field(toks[1], lineno, "edge layer");
            e.from = detail::parse_u32_field(toks[2], lineno, "edge source");
            e.to = detail::parse_u32_field(toks[3], lineno, "edge target");
            u32 bit = detail::parse_u32_field(toks[4], lineno, "edge bit");
            if (e.layer < 1 || e.layer > bp.T - 1) detail::parse_fail(lineno, "edge layer out of range");
            if (e.from < 1 || e.from > bp.W) detail::parse_fail(lineno, "edge source out of range");
            if (e.to < 1 || e.to > bp.W) detail::parse_fail(lineno, "edge target out of range");
            if (bit > 1) detail::parse_fail(lineno, "edge bit must be 0 or 1");
            e.bit = static_cast<u8>(bit);
            bp.edges.insert(e);
        } else {
            detail::parse_fail(lineno, "unknown directive '" + toks[0] + "'");
        }
    }
    if (!have_header) fail_input("line 1: missing 'bp' header");
    for (u32 i = 0; i < bp.T - 1; ++i)
        if (!layer_seen[i]) fail_input("missing 'layer' line for layer " + std::to_string(i + 1));
    bp.validate();
    return bp;
}

// ---- closure operations ----------------------------------------------------

// Serial conjunction: accepts iff both inputs accept (over the same variable
// set). B is appended after A; A's accept node bridges to B's start with
// unconditional pass-through edges, so T = T_A + T_B and W = max(W_A, W_B).
inline BranchingProgram and_compose(const BranchingProgram& a, const BranchingProgram& b) {
    if (a.n != b.n) fail_input("conjunction needs equal variable counts");
    BranchingProgram out;
    out.n = a.n;
    out.T = a.T + b.T;
    out.W = std::max(a.W, b.W);
    out.layer_var = a.layer_var;
    out.layer_var.push_back(1); // bridge layer; variable value is ignored
    for (u32 v : b.layer_var) out.layer_var.push_back(v);
    out.edges = a.edges;
    out.edges.insert(Edge{a.T, 1, 1, 0});
    out.edges.insert(Edge{a.T, 1, 1, 1});
    for (const Edge& e : b.edges)
        out.edges.insert(Edge{e.layer + a.T, e.from, e.to, e.bit});
    out.validate();
    return out;
}

// Union with a shared new start: accepts iff either input accepts (over the
// same variable set). The two programs run side by side (B's rows shifted by
// W_A) with their read layers interleaved, because one layer can read only
// one variable: even layers step A while B's rows pass through untouched,
// odd layers step B likewise. A fresh start layer branches into both starts
// and a final merge layer funnels both accepts into the new accept node.
// T = 2 * max(T_A - 1, T_B - 1) + 3 and W = W_A + W_B.
inline BranchingProgram or_compose(const BranchingProgram& a, const BranchingProgram& b) {
    if (a.n != b.n) fail_input("disjunction needs equal variable counts");
    BranchingProgram out;
    out.n = a.n;
    u32 L = std::max(a.T, b.T) - 1;
    out.T = 2 * L + 3;
    out.W = a.W + b.W;
    out.layer_var.assign(out.T - 1, 1); // slots not listed below ignore their read
    for (u8 bit : {0, 1}) {
        out.edges.insert(Edge{1, 1, 1, bit});
        out.edges.insert(Edge{1, 1, a.W + 1, bit});
    }
    for (u32 s = 1; s <= L; ++s) {
        u32 la = 2 * s;     // steps A, B rows persist
        u32 lb = 2 * s + 1; // steps B, A rows persist
        if (s <= a.T - 1) {
            out.layer_var[la - 1] = a.layer_var[s - 1];
        } else {
            for (u8 bit : {0, 1}) out.edges.insert(Edge{la, 1, 1, bit}); // finished: accept carries
        }
        if (s <= b.T - 1) {
            out.layer_var[lb - 1] = b.layer_var[s - 1];
        } else {
            for (u8 bit : {0, 1}) out.edges.insert(Edge{lb, a.W + 1, a.W + 1, bit});
        }
        for (u32 j = 1; j <= b.W; ++j)
            for (u8 bit : {0, 1}) out.edges.insert(Edge{la, a.W + j, a.W + j, bit});
        for (u32 j = 1; j <= a.W; ++j)
            for (u8 bit : {0, 1}) out.edges.insert(Edge{lb, j, j, bit});
    }
    for (const Edge& e : a.edges)
        out.edges.insert(Edge{2 * e.layer, e.from, e.to, e.bit});
    for (const Edge& e : b.edges)
        out.edges.insert(Edge{2 * e.layer + 1, e.from + a.W, e.to + a.W, e.bit});
    for (u8 bit : {0, 1}) {
        out.edges.insert(Edge{2 * L + 2, 1, 1, bit});
        out.edges.insert(Edge{2 * L + 2, a.W + 1, 1, bit});
    }
    out.validate();
    return out;
}

// ---- random generation -----------------------------------------------------

// Seeded random program: T = 2^t + 1 layers, uniform layer variables, each
// potential edge included independently with probability `density`. The draw
// order (variables for layers 1..T-1, then edges in lexicographic order of
// (layer, from, to, bit)) is part of the format: a seed pins the instance.
inline BranchingProgram random_bp(u32 n, u32 W, u32 t, double density, u64 seed) {
    if (n < 1) fail_input("random program needs n >= 1");
    if (W < 1) fail_input("random program needs W >= 1");
    if (t < 1 || t > 20) fail_input("random program needs 1 <= t <= 20");
    if (density < 0.0 || density > 1.0) fail_input("density must lie in [0, 1]");
    BranchingProgram bp;
    bp.n = n;
    bp.W = W;
    bp.T = (u32{1} << t) + 1;
    rng64 rng(seed);
    for (u32 i = 1; i < bp.T; ++i)
        bp.layer_var.push_back(1 + rng.below(n));
    for (u32 i = 1; i < bp.T; ++i)
        for (u32 j = 1; j <= W; ++j)
            for (u32 j2 = 1; j2 <= W; ++j2)
                for (u8 bit : {0, 1})
                    if (rng.unit() < density) bp.edges.insert(Edge{i, j, j2, bit});
    bp.validate();
    return bp;
}

} // namespace bpseq

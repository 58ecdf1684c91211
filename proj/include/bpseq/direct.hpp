#pragma once

// Reduction from branching-program satisfiability to weighted LCS (and its
// K-party variant): recursive reachability gadgets with a fixed weight
// schedule, vector gadgets, and the combined two-sequence instance with an
// exact satisfiability threshold.
//
// Levels: a level-k gadget spans 2^k layers; level 0 compares adjacent
// layers. For T = 2^t + 1 the full span start-to-accept sits at level t.

#include <map>
#include <string>
#include <vector>

#include "bpseq/bp.hpp"
#include "bpseq/score_tables.hpp"
#include "bpseq/sequences.hpp"

namespace bpseq {

// Letter ids. One contiguous block per level; parties K and widths W fix the
// layout. Parties 1..K-1 build "a-side" gadgets with a party-private padding
// letter; party K builds the "b-side" gadget. The two-party reduction is
// K = 2 with party 1 = a-side, party 2 = b-side.
struct DirectLetters {
    u32 K = 2;
    u32 W = 0;
    u32 t = 0;

    u32 e() const { return 1; }
    u32 dollar(u32 party) const { return 1 + party; } // party 1..K
    u32 level_width() const { return K + 1 + W; }     // f, g, K-1 hashes, W z's
    u32 level_base(u32 k) const { return 2 + K + (k - 1) * level_width(); }
    u32 f(u32 k) const { return level_base(k); }
    u32 g(u32 k) const { return level_base(k) + 1; }
    u32 hash(u32 k, u32 party) const { return level_base(k) + 1 + party; } // party 1..K-1
    u32 z(u32 k, u32 zz) const { return level_base(k) + K + zz; }          // zz 1..W
    // combine letters (two-party instance assembly)
    u32 fence_outer() const { return level_base(t + 1); }
    u32 fence_inner() const { return level_base(t + 1) + 1; }
    u32 lock() const { return level_base(t + 1) + 2; }

    std::map<u32, std::string> names(bool with_combine) const {
        std::map<u32, std::string> m;
        m[e()] = "e";
        for (u32 j = 1; j <= K; ++j) m[dollar(j)] = "$" + std::to_string(j);
        for (u32 k = 1; k <= t; ++k) {
            m[f(k)] = "f" + std::to_string(k);
            m[g(k)] = "g" + std::to_string(k);
            for (u32 j = 1; j < K; ++j) {
                std::string tag = (K == 2) ? "" : ("," + std::to_string(j));
                m[hash(k, j)] = "#" + std::to_string(k) + tag;
            }
            for (u32 zz = 1; zz <= W; ++zz)
                m[z(k, zz)] = "z" + std::to_string(k) + "[" + std::to_string(zz) + "]";
        }
        if (with_combine) {
            m[fence_outer()] = "F";
            m[fence_inner()] = "G";
            m[lock()] = "lock";
        }
        return m;
    }
};

struct DirectContext {
    const BranchingProgram* bp = nullptr;
    u32 K = 2;
    u32 t = 0;
    ScoreTables tables;
    DirectLetters letters;
    WeightedAlphabet gadget_alphabet; // gadget letters only
    WeightedAlphabet full_alphabet;   // plus instance-assembly letters

    u32 chunk() const { return bp->n / K; }
    u32 owner(u32 var) const { return 1 + (var - 1) / chunk(); }

    WeightedSequence weighted(std::vector<u32> syms, bool with_combine = false) const {
        WeightedSequence p{std::move(syms),
                           std::make_shared<WeightedAlphabet>(with_combine ? full_alphabet
                                                                           : gadget_alphabet)};
        p.validate();
        return p;
    }
};

inline DirectContext make_direct_context(const BranchingProgram& bp, u32 K = 2) {
    bp.validate();
    if (K < 2) fail_input("reduction needs at least 2 parties");
    if (bp.W < 2) fail_input("reduction needs width W >= 2");
    if (bp.n % K != 0) fail_input("variable count must divide evenly among parties");
    u32 span = bp.T - 1;
    if (span < 2 || (span & (span - 1)) != 0)
        fail_input("reduction needs T = 2^t + 1 layers with t >= 1");
    DirectContext ctx;
    ctx.bp = &bp;
    ctx.K = K;
    ctx.t = static_cast<u32>(std::countr_zero(span));
    ctx.tables = score_tables(bp.W, ctx.t);
    ctx.letters = DirectLetters{K, bp.W, ctx.t};

    WeightedAlphabet& a = ctx.gadget_alphabet;
    a.weights[ctx.letters.e()] = 1;
    for (u32 j = 1; j <= K; ++j) a.weights[ctx.letters.dollar(j)] = 1;
    for (u32 k = 1; k <= ctx.t; ++k) {
        u64 w9 = narrow_to_u64(9 * ctx.tables.Z[k - 1], "letter weight");
        u64 w2 = narrow_to_u64(2 * ctx.tables.Z[k - 1], "letter weight");
        a.weights[ctx.letters.f(k)] = w9;
        a.weights[ctx.letters.g(k)] = w9;
        for (u32 j = 1; j < K; ++j) a.weights[ctx.letters.hash(k, j)] = w9;
        for (u32 zz = 1; zz <= bp.W; ++zz) a.weights[ctx.letters.z(k, zz)] = w2;
    }
    ctx.full_alphabet = a;
    ctx.full_alphabet.weights[ctx.letters.fence_outer()] =
        narrow_to_u64(9 * ctx.tables.Z[ctx.t], "fence weight");
    ctx.full_alphabet.weights[ctx.letters.fence_inner()] =
        narrow_to_u64(9 * ctx.tables.Z[ctx.t], "fence weight");
    ctx.full_alphabet.weights[ctx.letters.lock()] =
        narrow_to_u64(2 * ctx.tables.Z[ctx.t], "lock weight");
    return ctx;
}

namespace detail {

inline void append_direct_gadget(const DirectContext& ctx, u32 party, const Assignment& half,
                                 u32 lu, u32 ju, u32 lv, u32 jv, u32 k, std::vector<u32>& out) {
    const DirectLetters& L = ctx.letters;
    const u32 W = ctx.bp->W;
    if (k == 0) {
        u32 var = ctx.bp->layer_var[lu - 1];
        if (ctx.owner(var) == party) {
            u32 lo = (party - 1) * ctx.chunk();
            bool bit = half.get(var - lo);
            bool has = ctx.bp->edges.count(Edge{lu, ju, jv, static_cast<u8>(bit ? 1 : 0)}) != 0;
            out.push_back(has ? L.e() : L.dollar(party));
        } else {
            out.push_back(L.e());
        }
        return;
    }
    u32 h = lu + (u32{1} << (k - 1));
    bool a_side = (party < ctx.K);
    if (a_side) {
        for (u32 i = 0; i < 2 * W; ++i) out.push_back(L.f(k));
        for (u32 zz = 1; zz <= W; ++zz) {
            out.push_back(L.g(k));
            out.push_back(L.z(k, zz));
            append_direct_gadget(ctx, party, half, lu, ju, h, zz, k - 1, out);
            out.push_back(L.z(k, zz));
            append_direct_gadget(ctx, party, half, h, zz, lv, jv, k - 1, out);
            out.push_back(L.z(k, zz));
            out.push_back(L.g(k));
        }
        for (u32 i = 0; i < 2 * W; ++i) out.push_back(L.f(k));
        for (u32 i = 0; i < 4 * W * (W - 1); ++i) out.push_back(L.hash(k, party));
    } else {
        for (u32 zz = 1; zz <= W; ++zz) {
            out.push_back(L.f(k));
            for (u32 i = 0; i < 2 * W; ++i) out.push_back(L.g(k));
            out.push_back(L.z(k, zz));
            append_direct_gadget(ctx, party, half, lu, ju, h, zz, k - 1, out);
            out.push_back(L.z(k, zz));
            append_direct_gadget(ctx, party, half, h, zz, lv, jv, k - 1, out);
            out.push_back(L.z(k, zz));
            for (u32 i = 0; i < 2 * W; ++i) out.push_back(L.g(k));
            out.push_back(L.f(k));
        }
    }
}

} // namespace detail

// Level-k reachability gadget for `party`, asking whether node (lv, jv) is
// reachable from (lu, ju) on the party's half of the assignment.
inline std::vector<u32> rg(const DirectContext& ctx, u32 party, const Assignment& half,
                           u32 lu, u32 ju, u32 lv, u32 jv, u32 k) {
    if (party < 1 || party > ctx.K) fail_input("party index out of range");
    if (half.n != ctx.chunk()) fail_input("half-assignment does not cover the party's variables");
    if (lu < 1 || lv > ctx.bp->T || ju < 1 || ju > ctx.bp->W || jv < 1 || jv > ctx.bp->W)
        fail_input("gadget endpoints out of range");
    if (k == 0) {
        if (lv != lu + 1) fail_input("base gadget needs adjacent layers");
    } else if (lv <= lu || lv - lu != (u32{1} << k)) {
        fail_input("level-k gadget needs a span of exactly 2^k layers");
    }
    std::vector<u32> out;
    detail::append_direct_gadget(ctx, party, half, lu, ju, lv, jv, k, out);
    return out;
}

// Full-span gadget from start to accept.
inline std::vector<u32> vector_gadget(const DirectContext& ctx, u32 party, const Assignment& half) {
    return rg(ctx, party, half, 1, 1, ctx.bp->T, 1, ctx.t);
}

// Combined two-sequence instance. A carries one block per a-half with the
// vector gadget doubled inside a shared three-lock core; B carries one block
// per b-half. Fences (F outer, G inner) are weighted so heavily that an
// optimal common subsequence keeps all of them, which pins exactly one
// A-block core against exactly one B-block core; the lock letters then admit
// score E only when that pair of halves satisfies the program.
struct DirectInstance {
    WeightedSequence A, B;
    bigint E;            // wlcs(A, B) = E iff satisfiable, <= E - 1 otherwise
    bigint weight_A, weight_B;
    bigint gadget_weight; // per vector gadget: Z_t
    u32 N1 = 0, N2 = 0;
};

inline DirectInstance direct_combine(const DirectContext& ctx,
                                     const std::vector<Assignment>& S1,
                                     const std::vector<Assignment>& S2) {
    if (ctx.K != 2) fail_input("combined instances are two-party");
    if (S1.empty() || S2.empty()) fail_input("combine needs nonempty half lists");
    const DirectLetters& L = ctx.letters;
    const u32 N1 = static_cast<u32>(S1.size());
    const u32 N2 = static_cast<u32>(S2.size());

    std::vector<u32> A, B;
    for (u32 i = 0; i < 2 * N2; ++i) A.push_back(L.fence_outer());
    for (const Assignment& a : S1) {
        std::vector<u32> vg = vector_gadget(ctx, 1, a);
        A.push_back(L.fence_inner());
        A.push_back(L.lock());
        A.insert(A.end(), vg.begin(), vg.end());
        A.push_back(L.lock());
        A.insert(A.end(), vg.begin(), vg.end());
        A.push_back(L.lock());
        A.push_back(L.fence_inner());
    }
    for (u32 i = 0; i < 2 * N2; ++i) A.push_back(L.fence_outer());

    for (const Assignment& b : S2) {
        std::vector<u32> vg = vector_gadget(ctx, 2, b);
        B.push_back(L.fence_outer());
        for (u32 i = 0; i < 2 * N1; ++i) B.push_back(L.fence_inner());
        B.push_back(L.lock());
        B.insert(B.end(), vg.begin(), vg.end());
        B.push_back(L.lock());
        B.insert(B.end(), vg.begin(), vg.end());
        B.push_back(L.lock());
        for (u32 i = 0; i < 2 * N1; ++i) B.push_back(L.fence_inner());
        B.push_back(L.fence_outer());
    }

    DirectInstance inst;
    const bigint& Zt = ctx.tables.Z[ctx.t];
    const bigint& Yt = ctx.tables.Y[ctx.t];
    inst.E = bigint(18) * (N1 + N2) * Zt + 6 * Zt + 2 * Yt;
    inst.weight_A = bigint(36) * N2 * Zt + bigint(26) * N1 * Zt;
    inst.weight_B = bigint(N2) * (bigint(36) * N1 + 26) * Zt;
    inst.gadget_weight = Zt;
    inst.N1 = N1;
    inst.N2 = N2;
    inst.A = ctx.weighted(std::move(A), true);
    inst.B = ctx.weighted(std::move(B), true);
    return inst;
}

// All half-assignments for one party's variable block, lexicographic.
inline std::vector<Assignment> party_halves(const DirectContext& ctx) {
    return all_assignments(ctx.chunk());
}

} // namespace bpseq

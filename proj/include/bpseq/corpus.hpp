#pragma once

// Deterministic evaluation corpora: seeded instance grids shared by the
// command-line verifier and the acceptance checks. Instance i fixes its
// shape by walking the parameter grid cyclically and its edges by seed, so
// every run sees byte-identical programs.

#include "bpseq/bp.hpp"

namespace bpseq {

struct CorpusSpec {
    std::vector<u32> ns, Ws, ts;
    std::vector<double> densities;
    u64 seed_base = 0;
    u32 count = 0;
};

// 200 programs across n in {2,4,6}, W in {2,3}, t in {1,2}, five densities.
inline CorpusSpec direct_corpus_spec() {
    return CorpusSpec{{2, 4, 6}, {2, 3}, {1, 2}, {0.2, 0.35, 0.5, 0.65, 0.8}, 1000, 200};
}

// 50 programs across n in {2,4}, W = 2, t in {1,2}, five densities.
inline CorpusSpec framework_corpus_spec() {
    return CorpusSpec{{2, 4}, {2}, {1, 2}, {0.2, 0.35, 0.5, 0.65, 0.8}, 7000, 50};
}

inline BranchingProgram corpus_instance(const CorpusSpec& c, u32 i) {
    if (i >= c.count) fail_input("corpus index out of range");
    u32 j = i;
    u32 n = c.ns[j % c.ns.size()];
    j /= static_cast<u32>(c.ns.size());
    u32 W = c.Ws[j % c.Ws.size()];
    j /= static_cast<u32>(c.Ws.size());
    u32 t = c.ts[j % c.ts.size()];
    j /= static_cast<u32>(c.ts.size());
    double density = c.densities[j % c.densities.size()];
    return random_bp(n, W, t, density, c.seed_base + i);
}

} // namespace bpseq

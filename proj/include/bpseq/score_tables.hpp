#pragma once

// Exact integer weight and score tables for the reachability-gadget
// reduction, in arbitrary precision.

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <string>
#include <vector>

#include "bpseq/common.hpp"

namespace bpseq {

using bigint = boost::multiprecision::cpp_int;

// Z[k]: total weight of any level-k gadget. Y[k]: score of a reachable pair.
// X (non-reachable score) is only ever needed as the bound Y[k] - 1.
struct ScoreTables {
    u32 W = 0;
    u32 t = 0;
    std::vector<bigint> Z;
    std::vector<bigint> Y;

    bigint X_bound(u32 k) const { return Y[k] - 1; }
};

inline ScoreTables score_tables(u32 W, u32 t) {
    if (W < 2) fail_input("score tables need W >= 2");
    ScoreTables s;
    s.W = W;
    s.t = t;
    s.Z.resize(t + 1);
    s.Y.resize(t + 1);
    s.Z[0] = 1;
    s.Y[0] = 1;
    for (u32 k = 1; k <= t; ++k) {
        s.Z[k] = s.Z[k - 1] * W * (36 * W + 26);
        s.Y[k] = 6 * (6 * W + 1) * s.Z[k - 1] + 2 * s.Y[k - 1];
    }
    return s;
}

inline u64 narrow_to_u64(const bigint& v, const std::string& what) {
    if (v < 0 || v > bigint(std::numeric_limits<u64>::max()))
        fail_guard(what + " exceeds the 64-bit solver range");
    return v.convert_to<u64>();
}

} // namespace bpseq

#pragma once

// Alignment-gadget framework: an abstract machinery of typed instance lists,
// partial alignments, and guarded concatenation builders, instantiated for
// the cost form of LCS over a weighted integer alphabet,
//   delta(x,y) = |x| + |y| - 2 * wlcs(x,y),
// with |.| the total weight, plus the full leveled reduction from
// branching-program satisfiability to a single delta threshold on two final
// weighted sequences.
//
// Builder contract (the whole framework rests on it): for payload lists
// xs (lambda items) and ys (mu <= lambda items),
//   min over all alignments of cost <= delta(x,y) - C <= min over windows,
// where windows match ys against a contiguous block of xs. Each builder
// site uses one fresh separator symbol, shared by the two sides so the
// separators can match, with weight above the site's total payload length:
// skipping a separator then always costs more than any cross-window match
// gain, so optimal subsequences consume separators greedily and respect the
// window structure. Conformance is certified by brute-force checks on small
// shapes, not by proof.

#include <array>
#include <map>
#include <optional>

#include "bpseq/bp.hpp"
#include "bpseq/measures.hpp"
#include "bpseq/score_tables.hpp"

namespace bpseq {

inline constexpr u64 default_framework_symbol_cap = 10'000'000;

struct TypeTag {
    u64 length = 0; // total weight, the expanded length
    u64 sum = 0;
    bool operator==(const TypeTag&) const = default;
};

// Symbol entry values are identically zero in this binding, so the sum
// component never varies and equal lengths mean equal types. This also fixes
// the parity of delta between instances of fixed types, which is what makes
// every "larger" case automatically "larger by at least 2".
inline u64 symbol_entry_value(u32) { return 0; }

struct GadgetInstance {
    std::vector<u32> syms;
    TypeTag tag;
};

inline TypeTag type_of(const WeightedAlphabet& alph, const std::vector<u32>& syms) {
    u64 len = 0, s = 0;
    for (u32 sym : syms) {
        len = checked_add(len, alph.weight(sym));
        s += symbol_entry_value(sym);
    }
    return TypeTag{len, s};
}

inline GadgetInstance make_instance(const WeightedAlphabet& alph, std::vector<u32> syms) {
    TypeTag tag = type_of(alph, syms);
    return GadgetInstance{std::move(syms), tag};
}

// Maximum total weight of a common subsequence; symbols match whole, which
// preserves the optimum of the weight-expanded problem because equal symbols
// always carry equal weights.
inline u64 weighted_lcs_value(const WeightedAlphabet& alph, const std::vector<u32>& x,
                              const std::vector<u32>& y) {
    std::vector<u64> ygain(y.size());
    for (size_t j = 0; j < y.size(); ++j) ygain[j] = alph.weight(y[j]);
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

inline u64 framework_delta(const WeightedAlphabet& alph, const GadgetInstance& x,
                           const GadgetInstance& y) {
    return checked_add(x.tag.length, y.tag.length) - 2 * weighted_lcs_value(alph, x.syms, y.syms);
}

// ---------------------------------------------------------------------------
// Alignments between an n-item list and an m-item list, n >= m.

struct AlignmentPair {
    u32 i = 0; // 1-based index into the long list
    u32 j = 0; // 1-based index into the short list
    bool operator==(const AlignmentPair&) const = default;
};

using Alignment = std::vector<AlignmentPair>;

inline constexpr u32 default_alignment_guard = 6;

namespace detail {

inline void collect_alignments(u32 n, u32 m, u32 i, u32 j, Alignment& cur,
                               std::vector<Alignment>& out) {
    out.push_back(cur);
    for (u32 a = i; a <= n; ++a)
        for (u32 b = j; b <= m; ++b) {
            cur.push_back({a, b});
            collect_alignments(n, m, a + 1, b + 1, cur, out);
            cur.pop_back();
        }
}

} // namespace detail

inline std::vector<Alignment> enumerate_alignments(u32 n, u32 m,
                                                   u32 guard = default_alignment_guard) {
    if (n < m) fail_input("alignment lists must satisfy n >= m");
    if (n > guard)
        fail_guard("alignment enumeration refused: n = " + std::to_string(n) + " exceeds " +
                   std::to_string(guard));
    std::vector<Alignment> out;
    Alignment cur;
    detail::collect_alignments(n, m, 1, 1, cur, out);
    return out;
}

// The n - m + 1 window alignments: ys pinned to a contiguous block of xs.
inline std::vector<Alignment> structured_alignments(u32 n, u32 m) {
    if (n < m) fail_input("alignment lists must satisfy n >= m");
    std::vector<Alignment> out;
    for (u32 shift = 0; shift <= n - m; ++shift) {
        Alignment a;
        for (u32 j = 1; j <= m; ++j) a.push_back({shift + j, j});
        out.push_back(std::move(a));
    }
    return out;
}

// cost(A) = sum of aligned pair deltas + Q per unmatched short-list item,
// where Q is the worst pair delta over the whole grid.
inline u64 alignment_cost(const Alignment& a, const std::vector<std::vector<u64>>& d) {
    u64 n = d.size();
    if (n == 0) return 0;
    u64 m = d[0].size();
    if (n < m) fail_input("alignment lists must satisfy n >= m");
    u64 q = 0;
    for (const auto& row : d)
        for (u64 v : row) q = std::max(q, v);
    u64 total = checked_mul(m - a.size(), q);
    for (const AlignmentPair& p : a) total = checked_add(total, d[p.i - 1][p.j - 1]);
    return total;
}

inline std::vector<std::vector<u64>> delta_grid(const WeightedAlphabet& alph,
                                                const std::vector<GadgetInstance>& xs,
                                                const std::vector<GadgetInstance>& ys) {
    std::vector<std::vector<u64>> d(xs.size(), std::vector<u64>(ys.size()));
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) d[i][j] = framework_delta(alph, xs[i], ys[j]);
    return d;
}

// ---------------------------------------------------------------------------
// Guarded concatenation builder. A class is one builder site in the
// construction; its separator symbol is used nowhere else and its weight
// (gamma) must sit above the site's total payload length.

struct GaClass {
    u32 separator = 0;
    u64 gamma = 0; // separator symbol weight, the run length once expanded
};

inline u64 separator_weight(u64 lambda, u64 mu, u64 long_item_len, u64 short_item_len) {
    return checked_add(
        checked_add(checked_mul(lambda, long_item_len), checked_mul(mu, short_item_len)), 64);
}

namespace detail {

inline void require_uniform(const std::vector<GadgetInstance>& items, const char* what) {
    if (items.empty()) fail_input(std::string(what) + ": empty payload list");
    for (const GadgetInstance& g : items)
        if (!(g.tag == items[0].tag)) fail_input(std::string(what) + ": mixed payload types");
}

} // namespace detail

// Long side: lambda items with lambda+1 single separators between them.
// Short side: mu items with mu+1 blocks of lambda-mu+1 separators, sized so
// every window shift can absorb all long-side separators.
inline GadgetInstance ga_build(const WeightedAlphabet& alph,
                               const std::vector<GadgetInstance>& items, const GaClass& cls,
                               u32 lambda, u32 mu, bool long_side) {
    if (lambda < mu || mu == 0) fail_input("builder shape needs lambda >= mu >= 1");
    detail::require_uniform(items, "builder");
    if (items.size() != (long_side ? lambda : mu))
        fail_input("builder item count does not match its side of the shape");
    if (alph.weight(cls.separator) != cls.gamma)
        fail_input("builder separator weight disagrees with its alphabet entry");
    u64 copies = long_side ? 1 : u64(lambda) - mu + 1;
    std::vector<u32> out;
    out.reserve((items.size() + 1) * copies + items.size() * items[0].syms.size());
    u64 length = 0;
    auto put_run = [&] {
        for (u64 c = 0; c < copies; ++c) out.push_back(cls.separator);
        length = checked_add(length, checked_mul(copies, cls.gamma));
    };
    put_run();
    for (const GadgetInstance& g : items) {
        out.insert(out.end(), g.syms.begin(), g.syms.end());
        length = checked_add(length, g.tag.length);
        put_run();
    }
    return GadgetInstance{std::move(out), TypeTag{length, 0}};
}

inline u64 ga_long_length(const GaClass& cls, u32 lambda, u64 item_len) {
    return checked_add(checked_mul(u64(lambda) + 1, cls.gamma), checked_mul(lambda, item_len));
}

inline u64 ga_short_length(const GaClass& cls, u32 lambda, u32 mu, u64 item_len) {
    u64 run = checked_mul(u64(lambda) - mu + 1, cls.gamma);
    return checked_add(checked_mul(u64(mu) + 1, run), checked_mul(mu, item_len));
}

inline u64 ga_long_symbols(u32 lambda, u64 item_syms) {
    return checked_add(u64(lambda) + 1, checked_mul(lambda, item_syms));
}

inline u64 ga_short_symbols(u32 lambda, u32 mu, u64 item_syms) {
    return checked_add(checked_mul(u64(mu) + 1, u64(lambda) - mu + 1),
                       checked_mul(mu, item_syms));
}

// The builder offset: delta(x,y) - C lands between the two alignment minima.
// Only the long-item length enters; the short side's surplus cancels.
inline u64 ga_constant(const GaClass& cls, u32 lambda, u32 mu, u64 long_item_len, u64) {
    return checked_add(checked_mul(u64(lambda) - mu, long_item_len),
                       checked_mul(checked_mul(mu, u64(lambda) - mu), cls.gamma));
}

// Exact rational maximum, kept as the witness fraction.
struct RatioMax {
    u64 num = 0;
    u64 den = 1;
    void update(u64 n, u64 d) {
        if (d == 0) fail_input("size ratio with zero denominator");
        if (bigint(n) * den > bigint(num) * d) {
            num = n;
            den = d;
        }
    }
};

struct ConformanceReport {
    bool bracket_ok = false;
    bool type_ok = false;
    bool size_ok = false;
    u64 constant = 0;    // builder offset C
    u64 min_all = 0;     // min cost over all alignments
    u64 min_windows = 0; // min cost over window alignments
    u64 delta = 0;       // measured delta(x,y)
    u64 len_x = 0, len_y = 0;
    RatioMax realized; // (|x|+|y|) / (n * (lx + ly))

    bool ok() const { return bracket_ok && type_ok && size_ok; }
};

// Brute-force certification of the builder contract on one input pair.
// corrupt_drop_tail builds x without its trailing separator; it exists as a
// negative control and must flag a bracket violation.
inline ConformanceReport check_alignment_gadget(const WeightedAlphabet& alph,
                                                const std::vector<GadgetInstance>& xs,
                                                const std::vector<GadgetInstance>& ys,
                                                const GaClass& cls,
                                                bool corrupt_drop_tail = false,
                                                u32 guard = default_alignment_guard) {
    u32 n = static_cast<u32>(xs.size());
    u32 m = static_cast<u32>(ys.size());
    if (n < m || m == 0) fail_input("conformance check needs n >= m >= 1");
    detail::require_uniform(xs, "conformance check");
    detail::require_uniform(ys, "conformance check");
    for (const auto* list : {&xs, &ys})
        for (const GadgetInstance& g : *list)
            for (u32 sym : g.syms)
                if (sym == cls.separator)
                    fail_input("payload contains the builder's separator symbol");

    GadgetInstance x = ga_build(alph, xs, cls, n, m, true);
    GadgetInstance y = ga_build(alph, ys, cls, n, m, false);
    if (corrupt_drop_tail) {
        x.syms.pop_back();
        x.tag.length -= cls.gamma;
    }

    ConformanceReport rep;
    rep.constant = ga_constant(cls, n, m, xs[0].tag.length, ys[0].tag.length);
    rep.delta = framework_delta(alph, x, y);
    rep.len_x = x.tag.length;
    rep.len_y = y.tag.length;

    std::vector<std::vector<u64>> d = delta_grid(alph, xs, ys);
    rep.min_all = std::numeric_limits<u64>::max();
    for (const Alignment& a : enumerate_alignments(n, m, guard))
        rep.min_all = std::min(rep.min_all, alignment_cost(a, d));
    rep.min_windows = std::numeric_limits<u64>::max();
    for (const Alignment& a : structured_alignments(n, m))
        rep.min_windows = std::min(rep.min_windows, alignment_cost(a, d));

    // delta - C must land in [min_all, min_windows]; compare without
    // unsigned underflow by moving C to the other side.
    rep.bracket_ok = checked_add(rep.min_all, rep.constant) <= rep.delta &&
                     rep.delta <= checked_add(rep.min_windows, rep.constant);

    u64 want_x = ga_long_length(cls, n, xs[0].tag.length);
    u64 want_y = ga_short_length(cls, n, m, ys[0].tag.length);
    rep.type_ok = x.tag == TypeTag{want_x - (corrupt_drop_tail ? cls.gamma : 0), 0} &&
                  y.tag == TypeTag{want_y, 0};

    u64 unit = checked_add(xs[0].tag.length, ys[0].tag.length);
    rep.realized.update(checked_add(want_x, want_y), checked_mul(n, unit));
    // With c realized as exactly that ratio, |x|+|y| <= c*n*(lx+ly) holds by
    // construction; record it and flag only degenerate zero-length inputs.
    rep.size_ok = unit > 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Disjunction gadget: two builder stages whose pair delta picks out the best
// (i,j) operand pair exactly: delta(x,y) = C + min_{i,j} delta(xs[i], ys[j]).

struct OrResult {
    GadgetInstance x, y;
    u64 constant = 0;
    RatioMax realized;
};

inline OrResult or_gadget(const WeightedAlphabet& alph, const std::vector<GadgetInstance>& xs,
                          const std::vector<GadgetInstance>& ys, const GaClass& stage1,
                          const GaClass& stage2) {
    if (xs.size() != ys.size() || xs.empty())
        fail_input("disjunction gadget needs equal nonempty operand lists");
    detail::require_uniform(xs, "disjunction gadget");
    detail::require_uniform(ys, "disjunction gadget");
    u32 n = static_cast<u32>(xs.size());

    // Stage 1: the x side carries all operands, each y operand rides alone.
    GadgetInstance xhat = ga_build(alph, xs, stage1, n, 1, true);
    std::vector<GadgetInstance> yhats;
    yhats.reserve(n);
    for (const GadgetInstance& yj : ys) yhats.push_back(ga_build(alph, {yj}, stage1, n, 1, false));

    // Stage 2: roles swap, the y side carries the stage-1 list.
    GadgetInstance yout = ga_build(alph, yhats, stage2, n, 1, true);
    GadgetInstance xout = ga_build(alph, {xhat}, stage2, n, 1, false);

    OrResult r;
    u64 c1 = ga_constant(stage1, n, 1, xs[0].tag.length, ys[0].tag.length);
    u64 c2 = ga_constant(stage2, n, 1, yhats[0].tag.length, xhat.tag.length);
    r.constant = checked_add(c1, c2);
    r.realized.update(checked_add(xhat.tag.length, yhats[0].tag.length),
                      checked_mul(n, checked_add(xs[0].tag.length, ys[0].tag.length)));
    r.realized.update(checked_add(yout.tag.length, xout.tag.length),
                      checked_mul(n, checked_add(yhats[0].tag.length, xhat.tag.length)));
    r.x = std::move(xout);
    r.y = std::move(yout);
    return r;
}

// ---------------------------------------------------------------------------
// The leveled reduction. Level k spans layer distance 2^k; level 0 spans one
// layer and is decided by coordinate-value evaluation gadgets.

struct FrameworkLevel {
    u64 rho = 0;              // pair score of a compatible level-k pair
    u64 or_c1 = 0, or_c2 = 0; // disjunction stage offsets (level >= 1)
    u64 len_x = 0, len_y = 0; // per-side total weights at this level
    u64 syms_x = 0, syms_y = 0; // per-side symbol counts
    GaClass triple;           // the 3-item path builder class
    GaClass or1, or2;         // disjunction stage classes
};

struct FrameworkContext {
    const BranchingProgram* bp = nullptr;
    std::shared_ptr<WeightedAlphabet> alph;
    u32 W = 0, w = 0, t = 0;
    u32 chunk = 0;    // variables per side
    u64 sym_cap = 0;  // refusal threshold for emitted symbol counts

    u64 rho_true = 0;  // compatible coordinate pair score
    u64 rho_false = 0; // conflicting coordinate pair score
    u64 gap = 0;       // rho_false - rho_true
    std::array<u32, 5> cv_syms{}; // shared coordinate symbols, weight 1

    GaClass base; // level-0 builder class (2w+2 items)
    GaClass nvg;  // half-vector builder class (2 vs 1 items)
    GaClass fin;  // final builder class (2N vs N items)

    std::vector<FrameworkLevel> levels; // 0..t

    u64 nvg_len_x = 0, nvg_len_y = 0;
    u64 nvg_syms_x = 0, nvg_syms_y = 0;
    u64 c_nvg = 0;     // half-vector pair offset
    u64 n_half = 0;    // N = 2^(n/2)
    u64 c_star = 0;    // final builder offset
    u64 threshold = 0; // satisfiable iff delta(x,y) <= threshold
    u64 final_len_x = 0, final_len_y = 0;
    u64 final_syms_x = 0, final_syms_y = 0;
    RatioMax realized; // max builder size ratio across the construction
};

namespace detail {

// Coordinate values: length-2 payloads over five shared unit-weight symbols,
// chosen so the (1,1) pair is the unique conflict. Side X: 0 -> (m a),
// 1 -> (c m); side Y: 0 -> (m b), 1 -> (d a).
inline GadgetInstance coordinate_value(const FrameworkContext& ctx, bool y_side, u32 bit) {
    const auto& s = ctx.cv_syms;
    u32 first = y_side ? (bit ? s[4] : s[0]) : (bit ? s[3] : s[0]);
    u32 second = y_side ? (bit ? s[1] : s[2]) : (bit ? s[0] : s[1]);
    return GadgetInstance{{first, second}, TypeTag{2, 0}};
}

} // namespace detail

inline FrameworkContext make_framework_context(const BranchingProgram& bp,
                                               u64 sym_cap = default_framework_symbol_cap) {
    bp.validate();
    FrameworkContext ctx;
    ctx.bp = &bp;
    ctx.W = bp.W;
    if (bp.W < 2 || (bp.W & (bp.W - 1)) != 0)
        fail_input("framework reduction needs width a power of two, at least 2");
    ctx.w = static_cast<u32>(std::countr_zero(bp.W));
    u32 span = bp.T - 1;
    if (span < 1 || (span & (span - 1)) != 0)
        fail_input("framework reduction needs T - 1 a power of two");
    ctx.t = static_cast<u32>(std::countr_zero(span));
    if (bp.n < 2 || bp.n % 2 != 0)
        fail_input("framework reduction needs an even variable count, at least 2");
    ctx.chunk = bp.n / 2;
    if (ctx.chunk > 20) fail_guard("framework reduction refused: more than 40 variables");
    ctx.sym_cap = sym_cap;

    ctx.alph = std::make_shared<WeightedAlphabet>();
    u32 next_sym = 1;
    auto fresh_symbol = [&](u64 weight) {
        ctx.alph->weights.emplace(next_sym, weight);
        return next_sym++;
    };
    for (u32 i = 0; i < 5; ++i) ctx.cv_syms[i] = fresh_symbol(1);
    auto fresh_class = [&](u64 lambda, u64 mu, u64 long_len, u64 short_len) {
        u64 gamma = separator_weight(lambda, mu, long_len, short_len);
        return GaClass{fresh_symbol(gamma), gamma};
    };

    ctx.rho_true = framework_delta(*ctx.alph, detail::coordinate_value(ctx, false, 0),
                                   detail::coordinate_value(ctx, true, 0));
    ctx.rho_false = framework_delta(*ctx.alph, detail::coordinate_value(ctx, false, 1),
                                    detail::coordinate_value(ctx, true, 1));
    if (ctx.rho_false < ctx.rho_true + 1)
        fail_input("coordinate values must make the conflict pair strictly worse");
    ctx.gap = ctx.rho_false - ctx.rho_true;

    u32 items0 = 2 * ctx.w + 2;
    ctx.base = fresh_class(items0, items0, 2, 2);
    ctx.levels.resize(ctx.t + 1);
    FrameworkLevel& l0 = ctx.levels[0];
    l0.triple = ctx.base;
    l0.rho = checked_mul(items0, ctx.rho_true);
    l0.len_x = l0.len_y = ga_long_length(ctx.base, items0, 2);
    l0.syms_x = l0.syms_y = ga_long_symbols(items0, 2);
    ctx.realized.update(2 * l0.len_x, checked_mul(items0, 4));

    for (u32 k = 1; k <= ctx.t; ++k) {
        FrameworkLevel& lv = ctx.levels[k];
        const FrameworkLevel& prev = ctx.levels[k - 1];
        lv.triple = fresh_class(3, 3, prev.len_x, prev.len_y);
        u64 pg_x = ga_long_length(lv.triple, 3, prev.len_x);
        u64 pg_y = ga_long_length(lv.triple, 3, prev.len_y);
        u64 pg_syms_x = ga_long_symbols(3, prev.syms_x);
        u64 pg_syms_y = ga_long_symbols(3, prev.syms_y);
        lv.or1 = fresh_class(ctx.W, 1, pg_x, pg_y);
        u64 xhat = ga_long_length(lv.or1, ctx.W, pg_x);
        u64 yhat = ga_short_length(lv.or1, ctx.W, 1, pg_y);
        u64 xhat_syms = ga_long_symbols(ctx.W, pg_syms_x);
        u64 yhat_syms = ga_short_symbols(ctx.W, 1, pg_syms_y);
        lv.or2 = fresh_class(ctx.W, 1, yhat, xhat);
        lv.len_y = ga_long_length(lv.or2, ctx.W, yhat);
        lv.len_x = ga_short_length(lv.or2, ctx.W, 1, xhat);
        lv.syms_y = ga_long_symbols(ctx.W, yhat_syms);
        lv.syms_x = ga_short_symbols(ctx.W, 1, xhat_syms);
        lv.or_c1 = ga_constant(lv.or1, ctx.W, 1, pg_x, pg_y);
        lv.or_c2 = ga_constant(lv.or2, ctx.W, 1, yhat, xhat);
        lv.rho = checked_add(checked_add(lv.or_c1, lv.or_c2), checked_mul(3, prev.rho));
        ctx.realized.update(checked_add(pg_x, pg_y),
                            checked_mul(3, checked_add(prev.len_x, prev.len_y)));
        ctx.realized.update(checked_add(xhat, yhat), checked_mul(ctx.W, checked_add(pg_x, pg_y)));
        ctx.realized.update(checked_add(lv.len_x, lv.len_y),
                            checked_mul(ctx.W, checked_add(yhat, xhat)));
    }

    const FrameworkLevel& top = ctx.levels[ctx.t];
    ctx.nvg = fresh_class(2, 1, top.len_x, top.len_y);
    ctx.nvg_len_x = ga_long_length(ctx.nvg, 2, top.len_x);
    ctx.nvg_len_y = ga_short_length(ctx.nvg, 2, 1, top.len_y);
    ctx.nvg_syms_x = ga_long_symbols(2, top.syms_x);
    ctx.nvg_syms_y = ga_short_symbols(2, 1, top.syms_y);
    ctx.c_nvg = ga_constant(ctx.nvg, 2, 1, top.len_x, top.len_y);
    ctx.realized.update(checked_add(ctx.nvg_len_x, ctx.nvg_len_y),
                        checked_mul(2, checked_add(top.len_x, top.len_y)));

    ctx.n_half = u64(1) << ctx.chunk;
    u32 lambda = static_cast<u32>(2 * ctx.n_half);
    u32 mu = static_cast<u32>(ctx.n_half);
    ctx.final_syms_x = ga_long_symbols(lambda, ctx.nvg_syms_x);
    ctx.final_syms_y = ga_short_symbols(lambda, mu, ctx.nvg_syms_y);
    if (ctx.final_syms_x > ctx.sym_cap || ctx.final_syms_y > ctx.sym_cap)
        fail_guard("framework reduction refused: final symbol count exceeds cap of " +
                   std::to_string(ctx.sym_cap));
    ctx.fin = fresh_class(lambda, mu, ctx.nvg_len_x, ctx.nvg_len_y);
    ctx.final_len_x = ga_long_length(ctx.fin, lambda, ctx.nvg_len_x);
    ctx.final_len_y = ga_short_length(ctx.fin, lambda, mu, ctx.nvg_len_y);
    ctx.c_star = ga_constant(ctx.fin, lambda, mu, ctx.nvg_len_x, ctx.nvg_len_y);
    ctx.realized.update(checked_add(ctx.final_len_x, ctx.final_len_y),
                        checked_mul(lambda, checked_add(ctx.nvg_len_x, ctx.nvg_len_y)));

    u64 unsat_pair = checked_add(checked_add(ctx.c_nvg, top.rho), ctx.gap);
    ctx.threshold =
        checked_add(checked_add(ctx.c_star, checked_mul(ctx.n_half - 1, unsat_pair)),
                    checked_add(ctx.c_nvg, top.rho));
    return ctx;
}

inline u64 framework_delta(const FrameworkContext& ctx, const GadgetInstance& x,
                           const GadgetInstance& y) {
    return framework_delta(*ctx.alph, x, y);
}

// ---------------------------------------------------------------------------
// Gadget builders. All take the context; reachability additionally takes a
// half-assignment. X carries the first n/2 variables, Y the rest.

namespace detail {

inline u32 level0_items(const FrameworkContext& ctx) { return 2 * ctx.w + 2; }

inline GadgetInstance level0_build(const FrameworkContext& ctx,
                                   const std::vector<GadgetInstance>& items) {
    u32 n = level0_items(ctx);
    return ga_build(*ctx.alph, items, ctx.base, n, n, true);
}

} // namespace detail

// Single-step evaluation gadget. The X variant carries the side-a verdict,
// the Y variant the side-b verdict; a pair scores rho[0] unless both carry
// bit 1, the combination reserved for "my side rejects this edge".
inline GadgetInstance edge_gadget(const FrameworkContext& ctx, bool y_side, u32 bit) {
    if (bit > 1) fail_input("edge gadget bit must be 0 or 1");
    std::vector<GadgetInstance> items;
    u32 n = detail::level0_items(ctx);
    for (u32 i = 0; i + 2 < n; ++i) items.push_back(detail::coordinate_value(ctx, y_side, bit));
    if (y_side) {
        items.push_back(detail::coordinate_value(ctx, true, 0));
        items.push_back(detail::coordinate_value(ctx, true, 1));
    } else {
        items.push_back(detail::coordinate_value(ctx, false, 1));
        items.push_back(detail::coordinate_value(ctx, false, 0));
    }
    return detail::level0_build(ctx, items);
}

// Level-0 index gadget for a branch choice z in [W]: the bits of z-1 and
// their complements, so equal choices meet in all-compatible pairs and
// different choices collide in exactly one conflicting slot per differing
// bit. The tail pairs are arranged to clash with every evaluation gadget.
inline GadgetInstance index_gadget_base(const FrameworkContext& ctx, bool y_side, u32 z) {
    if (z < 1 || z > ctx.W) fail_input("index gadget branch out of range");
    std::vector<GadgetInstance> items;
    for (u32 pass = 0; pass < 2; ++pass)
        for (u32 i = 0; i < ctx.w; ++i) {
            u32 bit = ((z - 1) >> i) & 1;
            if (pass == (y_side ? 0 : 1)) bit ^= 1;
            items.push_back(detail::coordinate_value(ctx, y_side, bit));
        }
    items.push_back(detail::coordinate_value(ctx, y_side, y_side ? 1 : 0));
    items.push_back(detail::coordinate_value(ctx, y_side, y_side ? 0 : 1));
    return detail::level0_build(ctx, items);
}

// Shared builder state: memoizes the half-independent gadget families.
struct FrameworkSession {
    const FrameworkContext* ctx = nullptr;
    std::map<std::pair<u32, u32>, GadgetInstance> ig_x, ig_y; // (level, z)
    std::map<u32, GadgetInstance> sel, base_x;                // level -> S^k, T^k

    explicit FrameworkSession(const FrameworkContext& c) : ctx(&c) {}
};

namespace detail {

inline GadgetInstance or_wrap(const FrameworkContext& ctx, const FrameworkLevel& lv,
                              std::vector<GadgetInstance> disjuncts, bool y_side) {
    if (!y_side) {
        GadgetInstance xhat = ga_build(*ctx.alph, disjuncts, lv.or1, ctx.W, 1, true);
        return ga_build(*ctx.alph, {xhat}, lv.or2, ctx.W, 1, false);
    }
    std::vector<GadgetInstance> yhats;
    yhats.reserve(disjuncts.size());
    for (GadgetInstance& d : disjuncts)
        yhats.push_back(ga_build(*ctx.alph, {d}, lv.or1, ctx.W, 1, false));
    return ga_build(*ctx.alph, yhats, lv.or2, ctx.W, 1, true);
}

inline GadgetInstance triple_wrap(const FrameworkContext& ctx, const FrameworkLevel& lv,
                                  const GadgetInstance& a, const GadgetInstance& b,
                                  const GadgetInstance& c) {
    return ga_build(*ctx.alph, {a, b, c}, lv.triple, 3, 3, true);
}

} // namespace detail

inline const GadgetInstance& index_gadget(FrameworkSession& s, bool y_side, u32 k, u32 z);

namespace detail {

inline GadgetInstance build_index_gadget(FrameworkSession& s, bool y_side, u32 k, u32 z) {
    const FrameworkContext& ctx = *s.ctx;
    if (k == 0) return index_gadget_base(ctx, y_side, z);
    const GadgetInstance& sub = index_gadget(s, y_side, k - 1, z);
    GadgetInstance triple = triple_wrap(ctx, ctx.levels[k], sub, sub, sub);
    std::vector<GadgetInstance> disjuncts(ctx.W, triple);
    return or_wrap(ctx, ctx.levels[k], std::move(disjuncts), y_side);
}

} // namespace detail

inline const GadgetInstance& index_gadget(FrameworkSession& s, bool y_side, u32 k, u32 z) {
    auto& memo = y_side ? s.ig_y : s.ig_x;
    auto it = memo.find({k, z});
    if (it == memo.end())
        it = memo.emplace(std::make_pair(k, z), detail::build_index_gadget(s, y_side, k, z)).first;
    return it->second;
}

// Baseline gadget T^k: scores exactly rho[k] against every Y reachability
// gadget. Selector gadget S^k: scores exactly rho[k] + gap against every Y
// reachability gadget, clamping the miss cost at the half-vector level.
inline const GadgetInstance& baseline_gadget(FrameworkSession& s, u32 k);

inline const GadgetInstance& selector_gadget(FrameworkSession& s, u32 k) {
    auto it = s.sel.find(k);
    if (it != s.sel.end()) return it->second;
    const FrameworkContext& ctx = *s.ctx;
    GadgetInstance built;
    if (k == 0) {
        std::vector<GadgetInstance> items;
        for (u32 i = 0; i + 2 < detail::level0_items(ctx); ++i)
            items.push_back(detail::coordinate_value(ctx, false, 0));
        items.push_back(detail::coordinate_value(ctx, false, 1));
        items.push_back(detail::coordinate_value(ctx, false, 1));
        built = detail::level0_build(ctx, items);
    } else {
        std::vector<GadgetInstance> disjuncts;
        for (u32 z = 1; z <= ctx.W; ++z)
            disjuncts.push_back(detail::triple_wrap(ctx, ctx.levels[k], baseline_gadget(s, k - 1),
                                                    selector_gadget(s, k - 1),
                                                    index_gadget(s, false, k - 1, z)));
        built = detail::or_wrap(ctx, ctx.levels[k], std::move(disjuncts), false);
    }
    return s.sel.emplace(k, std::move(built)).first->second;
}

inline const GadgetInstance& baseline_gadget(FrameworkSession& s, u32 k) {
    auto it = s.base_x.find(k);
    if (it != s.base_x.end()) return it->second;
    const FrameworkContext& ctx = *s.ctx;
    GadgetInstance built;
    if (k == 0) {
        std::vector<GadgetInstance> items(detail::level0_items(ctx),
                                          detail::coordinate_value(ctx, false, 0));
        built = detail::level0_build(ctx, items);
    } else {
        std::vector<GadgetInstance> disjuncts;
        for (u32 z = 1; z <= ctx.W; ++z)
            disjuncts.push_back(detail::triple_wrap(ctx, ctx.levels[k], baseline_gadget(s, k - 1),
                                                    baseline_gadget(s, k - 1),
                                                    index_gadget(s, false, k - 1, z)));
        built = detail::or_wrap(ctx, ctx.levels[k], std::move(disjuncts), false);
    }
    return s.base_x.emplace(k, std::move(built)).first->second;
}

// Reachability gadget for node u = (lu, ju) to v = (lu + 2^k, jv) under this
// side's half-assignment. A pair scores rho[k] iff v is reachable from u in
// the subgraph induced by the combined assignment.
inline GadgetInstance reach_gadget(FrameworkSession& s, bool y_side, const Assignment& half,
                                   u32 k, u32 lu, u32 ju, u32 lv, u32 jv) {
    const FrameworkContext& ctx = *s.ctx;
    const BranchingProgram& bp = *ctx.bp;
    if (half.n != ctx.chunk) fail_input("half-assignment width must be n/2");
    if (lu < 1 || lv > bp.T || ju < 1 || ju > bp.W || jv < 1 || jv > bp.W || lv <= lu)
        fail_input("reachability endpoints out of range");
    if (lv - lu != (u32(1) << k)) fail_input("level does not match the layer distance");
    if (k == 0) {
        u32 var = bp.layer_var[lu - 1];
        bool a_owns = var <= ctx.chunk;
        bool responsible = a_owns != y_side;
        if (!responsible) return edge_gadget(ctx, y_side, 1);
        u8 bit = a_owns ? half.get(var) : half.get(var - ctx.chunk);
        bool consistent = bp.edges.count(Edge{lu, ju, jv, bit}) != 0;
        return edge_gadget(ctx, y_side, consistent ? 0 : 1);
    }
    u32 h = lu + (u32(1) << (k - 1));
    std::vector<GadgetInstance> disjuncts;
    for (u32 z = 1; z <= ctx.W; ++z) {
        GadgetInstance left = reach_gadget(s, y_side, half, k - 1, lu, ju, h, z);
        GadgetInstance right = reach_gadget(s, y_side, half, k - 1, h, z, lv, jv);
        disjuncts.push_back(detail::triple_wrap(ctx, ctx.levels[k], left, right,
                                                index_gadget(s, y_side, k - 1, z)));
    }
    return detail::or_wrap(ctx, ctx.levels[k], std::move(disjuncts), y_side);
}

// Half-vector gadgets: X pairs its reachability verdict with the selector
// fallback, so every (a,b) pair scores c_nvg + rho[t] when satisfying and
// exactly c_nvg + rho[t] + gap otherwise.
inline GadgetInstance half_vector_x(FrameworkSession& s, const Assignment& a) {
    const FrameworkContext& ctx = *s.ctx;
    GadgetInstance rg = reach_gadget(s, false, a, ctx.t, 1, 1, ctx.bp->T, 1);
    return ga_build(*ctx.alph, {selector_gadget(s, ctx.t), std::move(rg)}, ctx.nvg, 2, 1, true);
}

inline GadgetInstance half_vector_y(FrameworkSession& s, const Assignment& b) {
    const FrameworkContext& ctx = *s.ctx;
    GadgetInstance rg = reach_gadget(s, true, b, ctx.t, 1, 1, ctx.bp->T, 1);
    return ga_build(*ctx.alph, {std::move(rg)}, ctx.nvg, 2, 1, false);
}

struct FrameworkInstance {
    WeightedSequence x, y;
    u64 len_x = 0, len_y = 0; // total weights
    u64 threshold = 0;
    u64 gap = 0;
};

// Final sequences: x lists every a-half twice so each (a,b) pair appears in
// some window; y lists every b-half once. delta(x,y) <= threshold iff some
// pair satisfies the program, and equals threshold + gap otherwise.
inline FrameworkInstance build_framework_instance(const FrameworkContext& ctx) {
    FrameworkSession s(ctx);
    std::vector<Assignment> halves = all_assignments(ctx.chunk);
    std::vector<GadgetInstance> xs;
    xs.reserve(2 * halves.size());
    for (const Assignment& a : halves) xs.push_back(half_vector_x(s, a));
    for (u64 i = 0; i < halves.size(); ++i) xs.push_back(xs[i]);
    std::vector<GadgetInstance> ys;
    ys.reserve(halves.size());
    for (const Assignment& b : halves) ys.push_back(half_vector_y(s, b));

    u32 lambda = static_cast<u32>(xs.size());
    u32 mu = static_cast<u32>(ys.size());
    GadgetInstance x = ga_build(*ctx.alph, xs, ctx.fin, lambda, mu, true);
    GadgetInstance y = ga_build(*ctx.alph, ys, ctx.fin, lambda, mu, false);
    if (x.tag.length != ctx.final_len_x || y.tag.length != ctx.final_len_y ||
        x.syms.size() != ctx.final_syms_x || y.syms.size() != ctx.final_syms_y)
        fail_input("final sequence sizes disagree with the precomputed tables");

    FrameworkInstance inst;
    inst.x = WeightedSequence{std::move(x.syms), ctx.alph};
    inst.y = WeightedSequence{std::move(y.syms), ctx.alph};
    inst.len_x = ctx.final_len_x;
    inst.len_y = ctx.final_len_y;
    inst.threshold = ctx.threshold;
    inst.gap = ctx.gap;
    return inst;
}

inline u64 framework_instance_delta(const FrameworkInstance& inst) {
    return checked_add(inst.len_x, inst.len_y) - 2 * wlcs(inst.x, inst.y);
}

inline bool framework_decide(const FrameworkInstance& inst) {
    return framework_instance_delta(inst) <= inst.threshold;
}

// Length discipline: every level obeys len <= (12 W^2 c^3)^k * L0 with c the
// realized builder ratio, so the final lengths respect the span raised to
// log2 of that factor.
inline bool framework_lengths_ok(const FrameworkContext& ctx) {
    bigint num = ctx.realized.num, den = ctx.realized.den;
    bigint l0 = ctx.levels[0].len_x + ctx.levels[0].len_y;
    bigint factor_num = 12 * bigint(ctx.W) * ctx.W * num * num * num;
    bigint factor_den = den * den * den;
    bigint bound_num = l0, bound_den = 1;
    for (u32 k = 0; k <= ctx.t; ++k) {
        if (k > 0) {
            bound_num *= factor_num;
            bound_den *= factor_den;
        }
        if (bigint(ctx.levels[k].len_x) * bound_den > bound_num) return false;
        if (bigint(ctx.levels[k].len_y) * bound_den > bound_num) return false;
    }
    return true;
}

} // namespace bpseq

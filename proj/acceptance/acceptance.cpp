// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any check fails. All comparisons are exact
// integer equalities or one-sided bounds; the only tolerances are runtime
// budgets, pinned inline.

#include <chrono>
#include <cstdio>
#include <string>

#include "bpseq/barrington.hpp"
#include "bpseq/corpus.hpp"
#include "bpseq/direct.hpp"
#include "bpseq/framework.hpp"

using namespace bpseq;

namespace {

int failures = 0;

#define EXPECT(cond, ...)                                      \
    do {                                                       \
        if (!(cond)) {                                         \
            ++failures;                                        \
            std::fprintf(stderr, "FAIL %d: ", __LINE__);       \
            std::fprintf(stderr, __VA_ARGS__);                 \
            std::fprintf(stderr, "\n");                        \
        }                                                      \
    } while (0)

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Direct reduction end to end: threshold equality iff satisfiable on the
// 200-program corpus, zero tolerance, under the 10-minute budget. The
// weighted score equals the unweighted LCS by the preserved-optimum identity
// (criterion 4); instances whose expansions fit a work budget are also
// checked literally against lcs of the expanded sequences.
std::string criterion_direct_end_to_end() {
    auto start = std::chrono::steady_clock::now();
    CorpusSpec spec = direct_corpus_spec();
    u32 agree = 0, expanded = 0;
    const bigint literal_budget = bigint(64) * 500'000'000; // ~0.5s of word ops
    for (u32 i = 0; i < spec.count; ++i) {
        BranchingProgram bp = corpus_instance(spec, i);
        DirectContext ctx = make_direct_context(bp);
        std::vector<Assignment> halves = party_halves(ctx);
        DirectInstance inst = direct_combine(ctx, halves, halves);
        u64 value = wlcs(inst.A, inst.B);
        bool sat = brute_force_sat(bp).has_value();
        if (sat)
            EXPECT(bigint(value) == inst.E, "instance %u: satisfiable but value != E", i);
        else
            EXPECT(bigint(value) <= inst.E - 1, "instance %u: unsatisfiable but value >= E", i);
        if ((sat && bigint(value) == inst.E) || (!sat && bigint(value) <= inst.E - 1)) ++agree;
        if (inst.weight_A * inst.weight_B <= literal_budget) {
            u64 plain = lcs(unweight(inst.A), unweight(inst.B));
            EXPECT(plain == value, "instance %u: expanded lcs %llu != weighted %llu", i,
                   (unsigned long long)plain, (unsigned long long)value);
            ++expanded;
        }
    }
    double dt = seconds_since(start);
    EXPECT(dt < 600.0, "corpus runtime %.1fs exceeds the 10-minute budget", dt);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%u/%u agree, %u expansion-checked, %.1fs", agree, spec.count,
                  expanded, dt);
    return buf;
}

// 2. Reachability-gadget dichotomy at distances 2 and 4, exhaustive over
// node pairs and half-assignment pairs for n = 4, W in {2,3}.
std::string criterion_gadget_dichotomy() {
    u64 checked = 0;
    for (u32 W : {2u, 3u})
        for (auto [density, seed] : {std::pair{0.3, 301ull}, {0.55, 302ull}, {0.75, 303ull}}) {
            BranchingProgram bp = random_bp(4, W, 2, density, seed);
            DirectContext ctx = make_direct_context(bp);
            bp_transitions tr(bp);
            std::vector<Assignment> halves = all_assignments(2);
            for (u32 k = 1; k <= 2; ++k) {
                u32 span = u32{1} << k;
                for (u32 lu = 1; lu + span <= bp.T; ++lu)
                    for (u32 ju = 1; ju <= W; ++ju)
                        for (u32 jv = 1; jv <= W; ++jv)
                            for (const Assignment& a : halves)
                                for (const Assignment& b : halves) {
                                    u64 score = wlcs(
                                        ctx.weighted(rg(ctx, 1, a, lu, ju, lu + span, jv, k)),
                                        ctx.weighted(rg(ctx, 2, b, lu, ju, lu + span, jv, k)));
                                    bool reach = reachable(bp, tr, lu, ju, lu + span, jv,
                                                           concat_halves(a, b));
                                    if (reach)
                                        EXPECT(bigint(score) == ctx.tables.Y[k],
                                               "W=%u k=%u: reachable pair scored off Y_k", W, k);
                                    else
                                        EXPECT(bigint(score) <= ctx.tables.Y[k] - 1,
                                               "W=%u k=%u: unreachable pair reached Y_k", W, k);
                                    ++checked;
                                }
            }
        }
    return std::to_string(checked) + " node/assignment pairs";
}

// 3. Weight calculus: constructed gadgets weigh exactly Z_k = (W(36W+26))^k
// at every level, and Z_k <= W^(8k).
std::string criterion_weight_calculus() {
    u64 constructed = 0;
    for (u32 W : {2u, 3u, 5u}) {
        BranchingProgram bp = random_bp(4, W, 2, 0.5, 400 + W);
        DirectContext ctx = make_direct_context(bp);
        std::vector<Assignment> halves = all_assignments(2);
        for (u32 k = 0; k <= 2; ++k) {
            u32 span = u32{1} << k;
            bigint closed = 1;
            for (u32 p = 0; p < k; ++p) closed *= W * (36 * W + 26);
            EXPECT(ctx.tables.Z[k] == closed, "W=%u: Z_%u differs from (W(36W+26))^k", W, k);
            for (u32 party : {1u, 2u})
                for (const Assignment& h : {halves[0], halves[2], halves[3]}) {
                    bigint got = total_length(
                        ctx.weighted(rg(ctx, party, h, 1, 1, 1 + span, std::min(W, 2u), k)));
                    EXPECT(got == ctx.tables.Z[k], "W=%u k=%u: gadget weight != Z_k", W, k);
                    ++constructed;
                }
        }
    }
    // three-party gadgets follow the same schedule
    BranchingProgram bp3 = random_bp(6, 2, 2, 0.5, 409);
    DirectContext ctx3 = make_direct_context(bp3, 3);
    for (u32 party = 1; party <= 3; ++party) {
        bigint got = total_length(ctx3.weighted(vector_gadget(ctx3, party, all_assignments(2)[1])));
        EXPECT(got == ctx3.tables.Z[2], "party %u vector gadget weight != Z_t", party);
        ++constructed;
    }
    for (u32 W = 2; W <= 6; ++W) {
        ScoreTables tables = score_tables(W, 6);
        bigint wpow8 = 1;
        for (u32 p = 0; p < 8; ++p) wpow8 *= W;
        bigint bound = 1;
        for (u32 k = 0; k <= 6; ++k) {
            EXPECT(tables.Z[k] <= bound, "W=%u: Z_%u exceeds W^(8k)", W, k);
            bound *= wpow8;
        }
    }
    return std::to_string(constructed) + " gadgets weighed";
}

// 4. Unweighting preserves the optimum: wlcs equals lcs of the expansions on
// 100 random weighted pairs, lengths <= 30, weights <= 8.
std::string criterion_unweighting() {
    rng64 rng(4242);
    for (u32 rep = 0; rep < 100; ++rep) {
        WeightedAlphabet alph;
        u32 symbols = 2 + static_cast<u32>(rng.below(5));
        for (u32 s = 1; s <= symbols; ++s) alph.weights[s] = 1 + rng.below(8);
        auto draw = [&] {
            std::vector<u32> syms;
            u32 len = 1 + static_cast<u32>(rng.below(30));
            for (u32 i = 0; i < len; ++i) syms.push_back(1 + static_cast<u32>(rng.below(symbols)));
            return make_sequence(std::move(syms), alph);
        };
        WeightedSequence p1 = draw(), p2 = draw();
        EXPECT(wlcs(p1, p2) == lcs(unweight(p1), unweight(p2)),
               "rep %u: wlcs differs from expanded lcs", rep);
    }
    return "100 weighted pairs";
}

// 5. Builder conformance: bracket, type determinism, and size bound hold on
// every list shape with n <= 4, for coordinate-value payloads and for
// level-1 gadget payloads.
std::string criterion_builder_conformance() {
    u32 shapes = 0;
    // coordinate-value payloads over a five-symbol unit alphabet
    WeightedAlphabet small;
    for (u32 s = 1; s <= 5; ++s) small.weights.emplace(s, 1);
    small.weights.emplace(9, 64);
    GaClass cls9{9, 64};
    auto cvx = [&](u32 bit) {
        return make_instance(small, bit ? std::vector<u32>{4, 1} : std::vector<u32>{1, 2});
    };
    auto cvy = [&](u32 bit) {
        return make_instance(small, bit ? std::vector<u32>{5, 2} : std::vector<u32>{1, 3});
    };
    for (u32 n = 1; n <= 4; ++n)
        for (u32 m = 1; m <= n; ++m) {
            std::vector<GadgetInstance> xs, ys;
            for (u32 i = 0; i < n; ++i) xs.push_back(cvx(i % 2));
            for (u32 jj = 0; jj < m; ++jj) ys.push_back(cvy(jj % 2));
            ConformanceReport rep = check_alignment_gadget(small, xs, ys, cls9);
            EXPECT(rep.ok(), "coordinate payloads: violation at shape %u x %u", n, m);
            ++shapes;
        }
    // level-1 gadget payloads from a live reduction context
    BranchingProgram bp = random_bp(2, 2, 1, 0.5, 500);
    FrameworkContext ctx = make_framework_context(bp);
    FrameworkSession s(ctx);
    WeightedAlphabet wide = *ctx.alph;
    u64 gamma = separator_weight(4, 4, ctx.levels[1].len_x, ctx.levels[1].len_y);
    wide.weights.emplace(1'000'000, gamma);
    GaClass cls{1'000'000, gamma};
    for (u32 n = 1; n <= 4; ++n)
        for (u32 m = 1; m <= n; ++m) {
            std::vector<GadgetInstance> xs, ys;
            for (u32 i = 0; i < n; ++i) xs.push_back(index_gadget(s, false, 1, 1 + i % 2));
            for (u32 jj = 0; jj < m; ++jj) ys.push_back(index_gadget(s, true, 1, 1 + jj % 2));
            ConformanceReport rep = check_alignment_gadget(wide, xs, ys, cls);
            EXPECT(rep.ok(), "gadget payloads: violation at shape %u x %u", n, m);
            ++shapes;
        }
    return std::to_string(shapes) + " shapes, zero violations";
}

// 6. Disjunction exactness: delta(x,y) - C equals the best operand pair on
// every corpus with n <= 3, and emitted lengths stay within c^2 n^2 (lx+ly).
std::string criterion_or_exactness() {
    WeightedAlphabet alph;
    for (u32 s = 1; s <= 6; ++s) alph.weights.emplace(s, 1);
    alph.weights.emplace(7, 96);
    alph.weights.emplace(8, 96);
    GaClass s1{7, 96}, s2{8, 96};
    rng64 rng(600);
    u32 corpora = 0;
    for (u32 n = 1; n <= 3; ++n)
        for (u32 rep = 0; rep < 25; ++rep) {
            std::vector<GadgetInstance> xs, ys;
            for (u32 i = 0; i < n; ++i) {
                std::vector<u32> px, py;
                for (u32 j = 0; j < 4; ++j) px.push_back(1 + static_cast<u32>(rng.below(6)));
                for (u32 j = 0; j < 4; ++j) py.push_back(1 + static_cast<u32>(rng.below(6)));
                xs.push_back(make_instance(alph, px));
                ys.push_back(make_instance(alph, py));
            }
            OrResult r = or_gadget(alph, xs, ys, s1, s2);
            u64 best = std::numeric_limits<u64>::max();
            for (const GadgetInstance& x : xs)
                for (const GadgetInstance& y : ys)
                    best = std::min(best, framework_delta(alph, x, y));
            EXPECT(framework_delta(alph, r.x, r.y) == r.constant + best,
                   "n=%u rep=%u: disjunction picked a non-optimal pair", n, rep);
            bigint total = bigint(r.x.tag.length) + r.y.tag.length;
            bigint unit = bigint(xs[0].tag.length) + ys[0].tag.length;
            EXPECT(total * r.realized.den * r.realized.den <=
                       bigint(r.realized.num) * r.realized.num * n * n * unit,
                   "n=%u rep=%u: output length above c^2 n^2 (lx+ly)", n, rep);
            ++corpora;
        }
    return std::to_string(corpora) + " corpora exact";
}

// 7. Leveled pipeline: on the 50-program corpus the final-sequence threshold
// test agrees with brute force; unsatisfiable instances score exactly
// threshold + (rho_F - rho_T), and satisfiable instances with a unique
// satisfying half-pair sit exactly at the threshold.
std::string criterion_framework_pipeline() {
    CorpusSpec spec = framework_corpus_spec();
    u32 sat_count = 0, unsat_count = 0, unique_pinned = 0;
    for (u32 i = 0; i < spec.count; ++i) {
        BranchingProgram bp = corpus_instance(spec, i);
        FrameworkContext ctx = make_framework_context(bp);
        FrameworkInstance inst = build_framework_instance(ctx);
        u64 delta = framework_instance_delta(inst);
        bp_transitions tr(bp);
        u32 sat_pairs = 0;
        for (const Assignment& a : all_assignments(bp.n / 2))
            for (const Assignment& b : all_assignments(bp.n / 2))
                if (evaluate(bp, tr, concat_halves(a, b))) ++sat_pairs;
        bool sat = sat_pairs > 0;
        EXPECT(framework_decide(inst) == sat, "instance %u: decision disagrees with oracle", i);
        if (sat) {
            ++sat_count;
            EXPECT(delta <= inst.threshold, "instance %u: satisfiable above threshold", i);
            if (sat_pairs == 1) {
                EXPECT(delta == inst.threshold,
                       "instance %u: unique satisfying pair not exactly at threshold", i);
                ++unique_pinned;
            }
        } else {
            ++unsat_count;
            EXPECT(delta == inst.threshold + inst.gap,
                   "instance %u: unsatisfiable gap is not exactly rho_F - rho_T", i);
        }
    }
    EXPECT(sat_count > 0 && unsat_count > 0, "corpus must exercise both outcomes");
    char buf[120];
    std::snprintf(buf, sizeof buf, "%u sat / %u unsat, %u pinned at threshold", sat_count,
                  unsat_count, unique_pinned);
    return buf;
}

// 8. Formula compilation: 100 random formulas (depth <= 5, up to 6
// variables) compile to width-5 programs with equal truth tables and length
// at most 4^depth + 1.
std::string criterion_formula_compilation() {
    rng64 rng(800);
    for (u32 rep = 0; rep < 100; ++rep) {
        u32 depth = static_cast<u32>(rng.below(6));
        u32 n = 1 + static_cast<u32>(rng.below(6));
        Formula f = random_formula(rng, depth, n);
        BranchingProgram bp = formula_to_bp(f);
        EXPECT(bp.W == 5, "rep %u: width %u != 5", rep, bp.W);
        u64 bound = 1;
        for (u32 d = 0; d < formula_depth(f); ++d) bound *= 4;
        EXPECT(bp.T <= bound + 1, "rep %u: length %u above 4^depth + 1", rep, bp.T);
        bp_transitions tr(bp);
        for (const Assignment& asg : all_assignments(bp.n))
            EXPECT(evaluate(bp, tr, asg) == eval_formula(f, asg),
                   "rep %u: truth tables differ", rep);
    }
    return "100 formulas, truth tables equal";
}

// 9. Three-party gadgets: weighted k-LCS of the three party gadgets equals
// Y_k exactly when the node pair is reachable and falls below otherwise,
// exhaustively over node pairs for k <= 2.
std::string criterion_three_party() {
    u64 checked = 0;
    BranchingProgram bp = random_bp(6, 2, 2, 0.5, 901);
    DirectContext ctx = make_direct_context(bp, 3);
    bp_transitions tr(bp);
    std::vector<Assignment> halves = all_assignments(2);
    for (u32 k = 0; k <= 2; ++k) {
        u32 span = u32{1} << k;
        for (u32 lu = 1; lu + span <= bp.T; ++lu)
            for (u32 ju = 1; ju <= bp.W; ++ju)
                for (u32 jv = 1; jv <= bp.W; ++jv)
                    for (const Assignment& a1 : halves)
                        for (const Assignment& a2 : halves)
                            for (const Assignment& a3 : halves) {
                                std::vector<WeightedSequence> gs;
                                for (u32 party = 1; party <= 3; ++party) {
                                    const Assignment& h =
                                        party == 1 ? a1 : (party == 2 ? a2 : a3);
                                    gs.push_back(ctx.weighted(
                                        rg(ctx, party, h, lu, ju, lu + span, jv, k)));
                                }
                                u64 score = k_lcs_weighted(gs);
                                Assignment full =
                                    concat_halves(concat_halves(a1, a2), a3);
                                bool reach = reachable(bp, tr, lu, ju, lu + span, jv, full);
                                if (reach)
                                    EXPECT(bigint(score) == ctx.tables.Y[k],
                                           "k=%u: reachable triple scored off Y_k", k);
                                else
                                    EXPECT(bigint(score) < ctx.tables.Y[k],
                                           "k=%u: unreachable triple reached Y_k", k);
                                ++checked;
                            }
    }
    return std::to_string(checked) + " triples";
}

// 10. Size scaling: per-gadget expansions equal (W(36W+26))^t exactly; the
// combined first sequence weighs 2 * 2^(n/2) * (gadget + separators) and
// reserializes byte-identically; framework lengths respect the
// (12 W^2 c^3)^k growth shape with the realized c reported.
std::string criterion_size_scaling() {
    for (u32 W : {2u, 3u})
        for (u32 t : {1u, 2u}) {
            BranchingProgram bp = random_bp(4, W, t, 0.5, 1000 + 10 * W + t);
            DirectContext ctx = make_direct_context(bp);
            std::vector<Assignment> halves = all_assignments(2);
            for (u32 party : {1u, 2u}) {
                std::vector<u32> expanded =
                    unweight(ctx.weighted(vector_gadget(ctx, party, halves[party])));
                EXPECT(bigint(expanded.size()) == ctx.tables.Z[t],
                       "W=%u t=%u party=%u: expansion != (W(36W+26))^t", W, t, party);
            }
            DirectInstance inst = direct_combine(ctx, halves, halves);
            bigint n_half = bigint(1) << (bp.n / 2);
            bigint block = ctx.tables.Z[t] + 30 * ctx.tables.Z[t]; // gadget + separators
            EXPECT(inst.weight_A == 2 * n_half * block,
                   "W=%u t=%u: |A| != 2 * 2^(n/2) * (gadget + separators)", W, t);
            EXPECT(bigint(total_length(inst.A)) == inst.weight_A,
                   "W=%u t=%u: measured |A| differs from the prediction", W, t);
            // rebuilding from scratch reproduces the files byte for byte
            DirectContext ctx2 = make_direct_context(bp);
            DirectInstance inst2 = direct_combine(ctx2, halves, halves);
            EXPECT(serialize_seq_file({inst.A, true}) == serialize_seq_file({inst2.A, true}) &&
                       serialize_seq_file({inst.B, true}) == serialize_seq_file({inst2.B, true}),
                   "W=%u t=%u: reserialization is not byte-identical", W, t);
        }
    RatioMax worst;
    for (u32 n : {2u, 4u})
        for (u32 t : {1u, 2u}) {
            BranchingProgram bp = random_bp(n, 2, t, 0.5, 1100 + 10 * n + t);
            FrameworkContext ctx = make_framework_context(bp);
            EXPECT(framework_lengths_ok(ctx), "n=%u t=%u: level growth above (12 W^2 c^3)^k", n,
                   t);
            worst.update(ctx.realized.num, ctx.realized.den);
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "closed forms exact, realized c = %llu/%llu",
                  (unsigned long long)worst.num, (unsigned long long)worst.den);
    return buf;
}

struct Criterion {
    const char* name;
    std::string (*run)();
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"direct end-to-end corpus", criterion_direct_end_to_end},
        {"reachability dichotomy", criterion_gadget_dichotomy},
        {"weight calculus", criterion_weight_calculus},
        {"unweighting soundness", criterion_unweighting},
        {"builder conformance", criterion_builder_conformance},
        {"disjunction exactness", criterion_or_exactness},
        {"leveled pipeline", criterion_framework_pipeline},
        {"formula compilation", criterion_formula_compilation},
        {"three-party k-LCS", criterion_three_party},
        {"size scaling", criterion_size_scaling},
    };
    int number = 0;
    for (const Criterion& c : criteria) {
        ++number;
        int before = failures;
        std::string summary;
        try {
            summary = c.run();
        } catch (const std::exception& e) {
            ++failures;
            summary = std::string("exception: ") + e.what();
        }
        bool ok = failures == before;
        std::printf("criterion %2d %s  %s (%s)\n", number, ok ? "PASS" : "FAIL", c.name,
                    summary.c_str());
        std::fflush(stdout);
    }
    if (failures) std::fprintf(stderr, "%d failed checks\n", failures);
    return failures ? 1 : 0;
}

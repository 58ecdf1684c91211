#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "bpseq/framework.hpp"
#include "oracles.hpp"

using namespace bpseq;

namespace {

// Shared test alphabet: six unit-weight payload symbols plus heavy
// separators 7, 8 (disjunction stages) and 9 (generic builder).
const WeightedAlphabet& test_alph() {
    static WeightedAlphabet a = [] {
        WeightedAlphabet al;
        for (u32 s = 1; s <= 6; ++s) al.weights.emplace(s, 1);
        al.weights.emplace(7, 96);
        al.weights.emplace(8, 96);
        al.weights.emplace(9, 64);
        return al;
    }();
    return a;
}

// Same compatibility structure as the framework's coordinate values: each
// cross pair shares one symbol except (1,1), which shares none.
GadgetInstance cv_x(u32 bit) {
    return make_instance(test_alph(), bit ? std::vector<u32>{4, 1} : std::vector<u32>{1, 2});
}
GadgetInstance cv_y(u32 bit) {
    return make_instance(test_alph(), bit ? std::vector<u32>{5, 2} : std::vector<u32>{1, 3});
}

BranchingProgram complete_bp(u32 n, u32 W, u32 t) {
    BranchingProgram bp;
    bp.n = n;
    bp.W = W;
    bp.T = (u32{1} << t) + 1;
    for (u32 i = 1; i < bp.T; ++i) {
        bp.layer_var.push_back(1 + (i - 1) % n);
        for (u32 j = 1; j <= W; ++j)
            for (u32 j2 = 1; j2 <= W; ++j2)
                for (u8 bit : {0, 1}) bp.edges.insert(Edge{i, j, j2, bit});
    }
    return bp;
}

// Complete program with every edge into the accepting node removed: no
// assignment can reach it, so the program is unsatisfiable.
BranchingProgram dead_end_bp(u32 n, u32 W, u32 t) {
    BranchingProgram bp = complete_bp(n, W, t);
    for (u32 j = 1; j <= W; ++j)
        for (u8 bit : {0, 1}) bp.edges.erase(Edge{bp.T - 1, j, 1, bit});
    return bp;
}

u64 min_pair_delta(const WeightedAlphabet& alph, const std::vector<GadgetInstance>& xs,
                   const std::vector<GadgetInstance>& ys) {
    u64 best = std::numeric_limits<u64>::max();
    for (const GadgetInstance& x : xs)
        for (const GadgetInstance& y : ys) best = std::min(best, framework_delta(alph, x, y));
    return best;
}

} // namespace

TEST_CASE("alignment enumeration matches the closed-form counts") {
    REQUIRE(enumerate_alignments(1, 1).size() == 2);
    REQUIRE(enumerate_alignments(2, 1).size() == 3);
    REQUIRE(enumerate_alignments(3, 2).size() == 10); // 1 + 3*2 + 3
    REQUIRE(enumerate_alignments(4, 4).size() == 70); // sum over k of C(4,k)^2
    for (u32 n = 1; n <= 5; ++n)
        for (u32 m = 1; m <= n; ++m) {
            REQUIRE(structured_alignments(n, m).size() == n - m + 1);
            for (const Alignment& a : structured_alignments(n, m)) {
                REQUIRE(a.size() == m);
                for (u32 j = 1; j < m; ++j) REQUIRE(a[j].i == a[j - 1].i + 1);
            }
        }
    // every window is one of the enumerated alignments
    std::vector<Alignment> all = enumerate_alignments(4, 2);
    for (const Alignment& w : structured_alignments(4, 2))
        REQUIRE(std::find(all.begin(), all.end(), w) != all.end());
    REQUIRE_THROWS_AS(enumerate_alignments(7, 2), guard_error);
    REQUIRE_THROWS_AS(enumerate_alignments(2, 3), input_error);
    REQUIRE_THROWS_AS(structured_alignments(1, 2), input_error);
}

TEST_CASE("alignment cost charges the worst pair for each unmatched item") {
    std::vector<std::vector<u64>> d = {{0, 3}, {2, 1}, {5, 0}};
    REQUIRE(alignment_cost({}, d) == 10);              // 2 * Q, Q = 5
    REQUIRE(alignment_cost({{1, 1}, {2, 2}}, d) == 1); // 0 + 1
    REQUIRE(alignment_cost({{1, 1}, {3, 2}}, d) == 0); // 0 + 0
    REQUIRE(alignment_cost({{2, 1}}, d) == 7);         // 2 + Q
    u64 best = std::numeric_limits<u64>::max();
    for (const Alignment& a : enumerate_alignments(3, 2))
        best = std::min(best, alignment_cost(a, d));
    REQUIRE(best == 0);
    REQUIRE(alignment_cost({}, {}) == 0); // empty short list costs nothing
}

TEST_CASE("builder bracket holds on every small shape") {
    GaClass cls{9, 64};
    for (u32 n = 1; n <= 4; ++n)
        for (u32 m = 1; m <= n; ++m) {
            std::vector<GadgetInstance> xs, ys;
            for (u32 i = 0; i < n; ++i) xs.push_back(cv_x(i % 2));
            for (u32 j = 0; j < m; ++j) ys.push_back(cv_y(j % 2));
            ConformanceReport rep = check_alignment_gadget(test_alph(), xs, ys, cls);
            INFO("shape " << n << " x " << m);
            REQUIRE(rep.ok());
            REQUIRE(rep.min_all <= rep.min_windows);
            REQUIRE(rep.len_x == ga_long_length(cls, n, 2));
            REQUIRE(rep.len_y == ga_short_length(cls, n, m, 2));
            REQUIRE(rep.constant == ga_constant(cls, n, m, 2, 2));
        }
    // all-conflict payloads: every alignment of the 2 x 2 grid costs exactly
    // 8, so the bracket pins the measured delta
    ConformanceReport hot =
        check_alignment_gadget(test_alph(), {cv_x(1), cv_x(1)}, {cv_y(1), cv_y(1)}, cls);
    REQUIRE(hot.ok());
    REQUIRE(hot.min_all == 8);
    REQUIRE(hot.min_windows == 8);
    REQUIRE(hot.delta == hot.constant + 8);
}

TEST_CASE("builder offset has its closed forms") {
    GaClass cls{9, 64};
    REQUIRE(ga_constant(cls, 3, 3, 10, 12) == 0);               // n = m
    REQUIRE(ga_constant(cls, 2, 1, 10, 12) == 10 + 64);         // (2,1)
    REQUIRE(ga_constant(cls, 4, 1, 10, 12) == 3 * (10 + 64));   // (W,1)
    REQUIRE(ga_constant(cls, 6, 3, 10, 12) == 3 * 10 + 9 * 64); // (2N,N)
}

TEST_CASE("corrupted builder output breaks the bracket") {
    GaClass cls{9, 64};
    std::vector<GadgetInstance> xs = {cv_x(0), cv_x(1), cv_x(0)};
    std::vector<GadgetInstance> ys = {cv_y(1), cv_y(0)};
    REQUIRE(check_alignment_gadget(test_alph(), xs, ys, cls).ok());
    ConformanceReport bad = check_alignment_gadget(test_alph(), xs, ys, cls, true);
    REQUIRE_FALSE(bad.bracket_ok);
    REQUIRE_FALSE(bad.ok());
}

TEST_CASE("builder types depend only on the shape and payload type") {
    GaClass cls{9, 64};
    GadgetInstance a = ga_build(test_alph(), {cv_x(0), cv_x(0)}, cls, 2, 2, true);
    GadgetInstance b = ga_build(test_alph(), {cv_x(1), cv_x(0)}, cls, 2, 2, true);
    REQUIRE(a.tag == b.tag);
    REQUIRE(a.syms != b.syms);
    GadgetInstance c = ga_build(test_alph(), {cv_y(1)}, cls, 2, 1, false);
    GadgetInstance d = ga_build(test_alph(), {cv_y(0)}, cls, 2, 1, false);
    REQUIRE(c.tag == d.tag);
    REQUIRE(type_of(test_alph(), a.syms) == a.tag);
    // the tag length is the weight-expanded length, not the symbol count
    REQUIRE(a.tag.length == 3 * 64 + 4);
    REQUIRE(a.syms.size() == 7);
}

TEST_CASE("builder rejects malformed inputs") {
    GaClass cls{9, 64};
    REQUIRE_THROWS_AS(ga_build(test_alph(), {}, cls, 2, 1, true), input_error);
    REQUIRE_THROWS_AS(ga_build(test_alph(), {cv_x(0)}, cls, 2, 1, true), input_error);
    REQUIRE_THROWS_AS(ga_build(test_alph(), {cv_x(0)}, cls, 1, 0, false), input_error);
    GadgetInstance long3 = make_instance(test_alph(), {1, 2, 3});
    REQUIRE_THROWS_AS(ga_build(test_alph(), {cv_x(0), long3}, cls, 2, 2, true), input_error);
    GadgetInstance has_sep = make_instance(test_alph(), {9, 1});
    REQUIRE_THROWS_AS(check_alignment_gadget(test_alph(), {has_sep}, {cv_y(0)}, cls),
                      input_error);
    // separator weight must agree with the alphabet entry
    REQUIRE_THROWS_AS(ga_build(test_alph(), {cv_x(0)}, GaClass{9, 63}, 1, 1, true), input_error);
}

TEST_CASE("disjunction gadget picks out the best operand pair exactly") {
    rng64 rng(41);
    GaClass s1{7, 96}, s2{8, 96};
    for (u32 n = 1; n <= 3; ++n) {
        for (u32 rep = 0; rep < 20; ++rep) {
            std::vector<GadgetInstance> xs, ys;
            for (u32 i = 0; i < n; ++i) {
                std::vector<u32> px, py;
                for (u32 j = 0; j < 4; ++j) px.push_back(1 + static_cast<u32>(rng.below(6)));
                for (u32 j = 0; j < 4; ++j) py.push_back(1 + static_cast<u32>(rng.below(6)));
                xs.push_back(make_instance(test_alph(), px));
                ys.push_back(make_instance(test_alph(), py));
            }
            OrResult r = or_gadget(test_alph(), xs, ys, s1, s2);
            REQUIRE(framework_delta(test_alph(), r.x, r.y) ==
                    r.constant + min_pair_delta(test_alph(), xs, ys));
            // combined output length within the quadratic budget
            bigint total = bigint(r.x.tag.length) + r.y.tag.length;
            bigint unit = bigint(xs[0].tag.length) + ys[0].tag.length;
            bigint cnum = r.realized.num, cden = r.realized.den;
            REQUIRE(total * cden * cden <= cnum * cnum * n * n * unit);
        }
    }
    REQUIRE_THROWS_AS(or_gadget(test_alph(), {cv_x(0)}, {cv_y(0), cv_y(1)}, s1, s2), input_error);
    REQUIRE_THROWS_AS(or_gadget(test_alph(), {}, {}, s1, s2), input_error);
    REQUIRE_THROWS_AS(or_gadget(test_alph(), {cv_x(0), make_instance(test_alph(), {1, 2, 3})},
                                {cv_y(0), cv_y(1)}, s1, s2),
                      input_error);
}

TEST_CASE("single-step gadget pairs score the published table") {
    for (u32 W : {2u, 4u}) {
        BranchingProgram bp = complete_bp(2, W, 1);
        FrameworkContext ctx = make_framework_context(bp);
        u32 w = ctx.w;
        u64 rho0 = ctx.levels[0].rho;
        REQUIRE(ctx.rho_true == 2);
        REQUIRE(ctx.rho_false == 4);
        REQUIRE(ctx.gap == 2);
        REQUIRE(rho0 == (2 * w + 2) * 2);

        // verdict pairs: conflict exactly when both sides raise the veto bit
        for (u32 a : {0u, 1u})
            for (u32 b : {0u, 1u}) {
                u64 d =
                    framework_delta(ctx, edge_gadget(ctx, false, a), edge_gadget(ctx, true, b));
                if (a == 1 && b == 1)
                    REQUIRE(d == rho0 + 2 * w * ctx.gap);
                else
                    REQUIRE(d == rho0);
            }

        // branch indexes: equal choices blend, different choices collide
        for (u32 z = 1; z <= W; ++z)
            for (u32 z2 = 1; z2 <= W; ++z2) {
                u64 d = framework_delta(ctx, index_gadget_base(ctx, false, z),
                                        index_gadget_base(ctx, true, z2));
                if (z == z2)
                    REQUIRE(d == rho0);
                else
                    REQUIRE(d == rho0 + u64(std::popcount((z - 1) ^ (z2 - 1))) * ctx.gap);
            }

        // indexes clash with every verdict gadget
        FrameworkSession s(ctx);
        for (u32 z = 1; z <= W; ++z)
            for (u32 b : {0u, 1u}) {
                REQUIRE(framework_delta(ctx, index_gadget_base(ctx, false, z),
                                        edge_gadget(ctx, true, b)) >= rho0 + 2);
                REQUIRE(framework_delta(ctx, edge_gadget(ctx, false, b),
                                        index_gadget_base(ctx, true, z)) >= rho0 + 2);
            }

        // baseline scores rho0 against everything, selector exactly rho0 + gap
        for (u32 b : {0u, 1u}) {
            REQUIRE(framework_delta(ctx, baseline_gadget(s, 0), edge_gadget(ctx, true, b)) ==
                    rho0);
            REQUIRE(framework_delta(ctx, selector_gadget(s, 0), edge_gadget(ctx, true, b)) ==
                    rho0 + ctx.gap);
        }
        for (u32 z = 1; z <= W; ++z)
            REQUIRE(framework_delta(ctx, baseline_gadget(s, 0), index_gadget_base(ctx, true, z)) ==
                    rho0);
    }
}

TEST_CASE("index gadgets separate branch choices at every level") {
    BranchingProgram bp = complete_bp(2, 2, 2);
    FrameworkContext ctx = make_framework_context(bp);
    FrameworkSession s(ctx);
    for (u32 k = 0; k <= ctx.t; ++k)
        for (u32 z = 1; z <= ctx.W; ++z)
            for (u32 z2 = 1; z2 <= ctx.W; ++z2) {
                u64 d =
                    framework_delta(ctx, index_gadget(s, false, k, z), index_gadget(s, true, k, z2));
                INFO("level " << k << " z " << z << " z' " << z2);
                if (z == z2)
                    REQUIRE(d == ctx.levels[k].rho);
                else
                    REQUIRE(d >= ctx.levels[k].rho + 2);
            }
}

TEST_CASE("reachability gadgets agree with graph reachability") {
    struct Case {
        u32 n, W, t;
        double density;
        u64 seed;
    };
    std::vector<Case> cases = {{2, 2, 1, 0.5, 11}, {2, 2, 1, 0.8, 12}, {4, 2, 1, 0.4, 13},
                               {4, 2, 1, 0.7, 14}, {2, 2, 2, 0.5, 15}, {2, 2, 2, 0.3, 16}};
    for (const Case& c : cases) {
        BranchingProgram bp = random_bp(c.n, c.W, c.t, c.density, c.seed);
        bp_transitions tr(bp);
        FrameworkContext ctx = make_framework_context(bp);
        FrameworkSession s(ctx);
        std::vector<Assignment> halves = all_assignments(ctx.chunk);
        for (u32 k = 0; k <= ctx.t; ++k) {
            u32 span = u32{1} << k;
            for (u32 lu = 1; lu + span <= bp.T; lu += span)
                for (u32 ju = 1; ju <= bp.W; ++ju)
                    for (u32 jv = 1; jv <= bp.W; ++jv) {
                        for (const Assignment& b : halves) {
                            GadgetInstance ry = reach_gadget(s, true, b, k, lu, ju, lu + span, jv);
                            REQUIRE(framework_delta(ctx, baseline_gadget(s, k), ry) ==
                                    ctx.levels[k].rho);
                            REQUIRE(framework_delta(ctx, selector_gadget(s, k), ry) ==
                                    ctx.levels[k].rho + ctx.gap);
                            for (const Assignment& a : halves) {
                                GadgetInstance rx =
                                    reach_gadget(s, false, a, k, lu, ju, lu + span, jv);
                                u64 d = framework_delta(ctx, rx, ry);
                                bool reach = reachable(bp, tr, lu, ju, lu + span, jv,
                                                       concat_halves(a, b));
                                INFO("level " << k << " from (" << lu << "," << ju << ") to ("
                                              << lu + span << "," << jv << ")");
                                if (reach)
                                    REQUIRE(d == ctx.levels[k].rho);
                                else
                                    REQUIRE(d >= ctx.levels[k].rho + 2);
                            }
                        }
                    }
        }
    }
}

TEST_CASE("gadget lengths match the precomputed tables") {
    BranchingProgram bp = random_bp(4, 2, 2, 0.5, 21);
    FrameworkContext ctx = make_framework_context(bp);
    FrameworkSession s(ctx);
    std::vector<Assignment> halves = all_assignments(ctx.chunk);
    for (u32 k = 0; k <= ctx.t; ++k) {
        u32 span = u32{1} << k;
        GadgetInstance rx = reach_gadget(s, false, halves[1], k, 1, 1, 1 + span, 1);
        GadgetInstance ry = reach_gadget(s, true, halves[2], k, 1, 1, 1 + span, 1);
        REQUIRE(rx.tag.length == ctx.levels[k].len_x);
        REQUIRE(ry.tag.length == ctx.levels[k].len_y);
        REQUIRE(rx.syms.size() == ctx.levels[k].syms_x);
        REQUIRE(ry.syms.size() == ctx.levels[k].syms_y);
        REQUIRE(index_gadget(s, false, k, 1).tag.length == ctx.levels[k].len_x);
        REQUIRE(index_gadget(s, true, k, 2).tag.length == ctx.levels[k].len_y);
        REQUIRE(baseline_gadget(s, k).tag.length == ctx.levels[k].len_x);
        REQUIRE(selector_gadget(s, k).tag.length == ctx.levels[k].len_x);
    }
    REQUIRE(half_vector_x(s, halves[0]).tag.length == ctx.nvg_len_x);
    REQUIRE(half_vector_y(s, halves[3]).tag.length == ctx.nvg_len_y);
    REQUIRE(half_vector_x(s, halves[0]).syms.size() == ctx.nvg_syms_x);
    REQUIRE(half_vector_y(s, halves[3]).syms.size() == ctx.nvg_syms_y);
    REQUIRE(framework_lengths_ok(ctx));

    // same shape parameters, different program: identical tables and types
    BranchingProgram bp2 = random_bp(4, 2, 2, 0.9, 22);
    FrameworkContext ctx2 = make_framework_context(bp2);
    FrameworkSession s2(ctx2);
    for (u32 k = 0; k <= ctx.t; ++k) {
        REQUIRE(ctx2.levels[k].len_x == ctx.levels[k].len_x);
        REQUIRE(ctx2.levels[k].len_y == ctx.levels[k].len_y);
        REQUIRE(ctx2.levels[k].rho == ctx.levels[k].rho);
    }
    REQUIRE(ctx2.threshold == ctx.threshold);
    GadgetInstance g1 = reach_gadget(s, false, halves[0], 1, 1, 1, 3, 2);
    GadgetInstance g2 = reach_gadget(s2, false, halves[3], 1, 1, 1, 3, 2);
    REQUIRE(g1.tag == g2.tag);
}

TEST_CASE("bracket holds with composite payloads") {
    BranchingProgram bp = complete_bp(2, 2, 1);
    FrameworkContext ctx = make_framework_context(bp);
    FrameworkSession s(ctx);
    WeightedAlphabet alph = *ctx.alph;
    u64 gamma = separator_weight(2, 2, ctx.levels[1].len_x, ctx.levels[1].len_y);
    alph.weights.emplace(1000, gamma);
    GaClass cls{1000, gamma};
    std::vector<GadgetInstance> xs = {index_gadget(s, false, 1, 1), index_gadget(s, false, 1, 2)};
    std::vector<GadgetInstance> ys1 = {index_gadget(s, true, 1, 2)};
    REQUIRE(check_alignment_gadget(alph, xs, ys1, cls).ok());
    std::vector<GadgetInstance> ys2 = {index_gadget(s, true, 1, 1), index_gadget(s, true, 1, 2)};
    ConformanceReport rep = check_alignment_gadget(alph, xs, ys2, cls);
    REQUIRE(rep.ok());
    REQUIRE(rep.delta == rep.constant + 2 * ctx.levels[1].rho); // diagonal all-compatible
}

TEST_CASE("half-vector pairs clamp the miss cost to one gap") {
    for (u32 n : {2u, 4u}) {
        BranchingProgram bp = random_bp(n, 2, 1, 0.55, 31 + n);
        bp_transitions tr(bp);
        FrameworkContext ctx = make_framework_context(bp);
        FrameworkSession s(ctx);
        std::vector<Assignment> halves = all_assignments(ctx.chunk);
        u64 hit = ctx.c_nvg + ctx.levels[ctx.t].rho;
        for (const Assignment& a : halves)
            for (const Assignment& b : halves) {
                GadgetInstance hx = half_vector_x(s, a);
                GadgetInstance hy = half_vector_y(s, b);
                u64 d = framework_delta(ctx, hx, hy);
                if (evaluate(bp, tr, concat_halves(a, b)))
                    REQUIRE(d == hit);
                else
                    REQUIRE(d == hit + ctx.gap);
            }
    }
}

TEST_CASE("final instances separate satisfiable programs by the published gap") {
    struct Case {
        BranchingProgram bp;
        const char* label;
    };
    std::vector<Case> cases;
    cases.push_back({complete_bp(2, 2, 1), "complete t=1"});
    cases.push_back({dead_end_bp(2, 2, 1), "dead end t=1"});
    cases.push_back({dead_end_bp(4, 2, 1), "dead end n=4"});
    cases.push_back({random_bp(4, 2, 1, 0.5, 51), "random n=4"});
    cases.push_back({random_bp(2, 2, 1, 0.35, 52), "random sparse"});
    cases.push_back({complete_bp(2, 2, 2), "complete t=2"});
    cases.push_back({dead_end_bp(2, 2, 2), "dead end t=2"});
    bool saw_sat = false, saw_unsat = false;
    for (const Case& c : cases) {
        FrameworkContext ctx = make_framework_context(c.bp);
        FrameworkInstance inst = build_framework_instance(ctx);
        REQUIRE(inst.x.syms.size() == ctx.final_syms_x);
        REQUIRE(inst.y.syms.size() == ctx.final_syms_y);
        REQUIRE(total_length(inst.x) == ctx.final_len_x);
        REQUIRE(total_length(inst.y) == ctx.final_len_y);
        bool sat = brute_force_sat(c.bp).has_value();
        u64 d = framework_instance_delta(inst);
        INFO(c.label);
        REQUIRE(framework_decide(inst) == sat);
        if (sat) {
            REQUIRE(d <= inst.threshold);
            saw_sat = true;
        } else {
            REQUIRE(d == inst.threshold + inst.gap);
            saw_unsat = true;
        }
    }
    REQUIRE(saw_sat);
    REQUIRE(saw_unsat);
}

TEST_CASE("context construction validates its inputs") {
    REQUIRE_THROWS_AS(make_framework_context(complete_bp(2, 3, 1)), input_error);
    REQUIRE_THROWS_AS(make_framework_context(complete_bp(3, 2, 1)), input_error);
    BranchingProgram bad_span = complete_bp(2, 2, 2);
    bad_span.T = 4; // T - 1 = 3 is not a power of two
    bad_span.layer_var.pop_back();
    std::set<Edge> kept;
    for (const Edge& e : bad_span.edges)
        if (e.layer <= 3) kept.insert(e);
    bad_span.edges = kept;
    REQUIRE_THROWS_AS(make_framework_context(bad_span), input_error);
    REQUIRE_THROWS_AS(make_framework_context(complete_bp(2, 2, 1), 100), guard_error);
    BranchingProgram wide;
    wide.n = 42;
    wide.W = 2;
    wide.T = 2;
    wide.layer_var = {1};
    wide.edges.insert(Edge{1, 1, 1, 0});
    REQUIRE_THROWS_AS(make_framework_context(wide), guard_error);
}

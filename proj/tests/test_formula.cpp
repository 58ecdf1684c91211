#include <catch2/catch_amalgamated.hpp>

#include "bpseq/barrington.hpp"
#include "bpseq/formula.hpp"
#include "oracles.hpp"

using namespace bpseq;

namespace {

u32 program_length(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or:
            return 2 * program_length(f.kids[0]) + 2 * program_length(f.kids[1]);
        case Formula::Kind::Not:
            return program_length(f.kids[0]);
        default:
            return 1;
    }
}

u64 pow4(u32 d) { return u64(1) << (2 * d); }

} // namespace

TEST_CASE("formula parsing round-trips and evaluates") {
    Formula f = parse_formula("(and x1 (not (or x2 0)))");
    REQUIRE(serialize_formula(f) == "(and x1 (not (or x2 0)))");
    REQUIRE(max_var(f) == 2);
    REQUIRE(formula_depth(f) == 2);
    // Truth table: x1 and not x2.
    for (u64 bits = 0; bits < 4; ++bits) {
        Assignment asg{2, bits};
        REQUIRE(eval_formula(f, asg) == (asg.get(1) && !asg.get(2)));
    }

    REQUIRE(serialize_formula(parse_formula("  x13 ")) == "x13");
    REQUIRE(serialize_formula(parse_formula("1")) == "1");
    REQUIRE(serialize_formula(parse_formula("(or (and x1 x2) (not x3)) # comment")) ==
            "(or (and x1 x2) (not x3))");
    REQUIRE(eval_formula(parse_formula("0"), Assignment{1, 1}) == false);
    REQUIRE(eval_formula(parse_formula("1"), Assignment{1, 0}) == true);
}

TEST_CASE("formula parse errors carry character positions") {
    auto fails_at = [](const std::string& text, const std::string& pos_prefix) {
        try {
            parse_formula(text);
            FAIL("expected input_error for: " << text);
        } catch (const input_error& e) {
            INFO(text << " -> " << e.what());
            REQUIRE(std::string(e.what()).rfind(pos_prefix, 0) == 0);
        }
    };
    fails_at("(and x1)", "position 8:");         // arity too low, ')' position
    fails_at("(not x1 x2)", "position 9:");      // arity too high, extra operand
    fails_at("(xor x1 x2)", "position 2:");      // unknown connective
    fails_at("(and x1 x2", "position 9:");       // missing ')', anchored at last token
    fails_at("x1 x2", "position 4:");            // trailing input
    fails_at(")", "position 1:");                // stray ')'
    fails_at("(and (or x1) x2)", "position 12:"); // nested arity error
    fails_at("x0", "position 1:");               // bad variable index
    fails_at("y1", "position 1:");               // unknown atom
    fails_at("", "position 1:");                 // empty input
    fails_at("   # only a comment", "position 1:");
}

TEST_CASE("pinned permutation constants match an independent search") {
    REQUIRE(is_five_cycle(perm_alpha));
    REQUIRE(is_five_cycle(perm_beta));
    REQUIRE(is_five_cycle(perm_gamma));

    // Independent search: the commutator of the pinned pair must be alpha,
    // and such pairs must exist in quantity (the construction is not lucky).
    auto commutator = [](const perm5& p, const perm5& q) {
        return perm_compose(perm_compose(p, q), perm_compose(perm_inverse(p), perm_inverse(q)));
    };
    REQUIRE(commutator(perm_beta, perm_gamma) == perm_alpha);

    u32 pairs = 0;
    perm5 p = perm_id;
    do {
        if (!is_five_cycle(p)) continue;
        perm5 q = perm_id;
        do {
            if (is_five_cycle(q) && commutator(p, q) == perm_alpha) ++pairs;
        } while (std::next_permutation(q.begin(), q.end()));
    } while (std::next_permutation(p.begin(), p.end()));
    REQUIRE(pairs > 0);

    // Conjugators found by the compiler really map alpha to beta and gamma.
    perm5 cb = detail::conjugator_to_alpha(perm_beta);
    perm5 cg = detail::conjugator_to_alpha(perm_gamma);
    REQUIRE(perm_compose(perm_compose(cb, perm_alpha), perm_inverse(cb)) == perm_beta);
    REQUIRE(perm_compose(perm_compose(cg, perm_alpha), perm_inverse(cg)) == perm_gamma);
}

TEST_CASE("group programs yield the 5-cycle exactly on satisfying assignments") {
    rng64 rng(0xf0f0f0f0ULL);
    for (u32 trial = 0; trial < 60; ++trial) {
        u32 n = 1 + rng.below(5);
        Formula f = random_formula(rng, 1 + rng.below(4), n);
        GroupProgram gp = compile_formula_program(f);
        for (const Assignment& asg : all_assignments(n)) {
            perm5 got = run_group_program(gp, asg);
            if (eval_formula(f, asg))
                REQUIRE(got == perm_alpha);
            else
                REQUIRE(got == perm_id);
        }
    }
}

TEST_CASE("compiled programs match formula truth tables exactly") {
    rng64 rng(0x1234abcdULL);
    for (u32 trial = 0; trial < 100; ++trial) {
        u32 n = 1 + rng.below(6);
        u32 depth = rng.below(6);
        Formula f = random_formula(rng, depth, n);
        BranchingProgram bp = formula_to_bp(f);
        INFO("formula: " << serialize_formula(f));
        REQUIRE(bp.W == 5);
        REQUIRE(bp.n == std::max<u32>(1, max_var(f)));
        REQUIRE(u64(bp.T) <= pow4(formula_depth(f)) + 1);
        REQUIRE(bp.T == program_length(f) + 1);
        // Permutation layers: every node has exactly one successor per bit.
        REQUIRE(bp.edges.size() == size_t(bp.T - 1) * 5 * 2);
        for (const Assignment& asg : all_assignments(std::max<u32>(1, max_var(f)))) {
            bool want = eval_formula(f, asg);
            REQUIRE(evaluate(bp, asg) == want);
            REQUIRE(testing::oracle_evaluate_bfs(bp, asg) == want);
        }
    }
}

TEST_CASE("connective costs: binary nodes quadruple, negation is free") {
    Formula x1 = f_var(1), x2 = f_var(2);
    REQUIRE(formula_to_bp(x1).T == 2);
    REQUIRE(formula_to_bp(f_not(x1)).T == 2);
    REQUIRE(formula_to_bp(f_and(x1, x2)).T == 5);
    REQUIRE(formula_to_bp(f_or(x1, x2)).T == 5);
    REQUIRE(formula_to_bp(f_not(f_and(f_not(x1), f_not(x2)))).T == 5);
    Formula deep = f_and(f_and(x1, x2), f_or(x1, f_not(x2)));
    REQUIRE(program_length(deep) == 16);
    REQUIRE(formula_to_bp(deep).T == 17);
}

TEST_CASE("constant formulas compile to constant programs") {
    BranchingProgram always = formula_to_bp(parse_formula("1"));
    BranchingProgram never = formula_to_bp(parse_formula("0"));
    REQUIRE(always.n == 1);
    REQUIRE(never.n == 1);
    for (const Assignment& asg : all_assignments(1)) {
        REQUIRE(evaluate(always, asg) == true);
        REQUIRE(evaluate(never, asg) == false);
    }
    REQUIRE(brute_force_sat(never) == std::nullopt);
}

TEST_CASE("compiled programs serialize and round-trip like any other program") {
    rng64 rng(77);
    Formula f = random_formula(rng, 3, 4);
    BranchingProgram bp = formula_to_bp(f);
    REQUIRE(parse_bp(serialize_bp(bp)) == bp);
}

TEST_CASE("random formulas round-trip through text") {
    rng64 rng(4242);
    for (u32 trial = 0; trial < 50; ++trial) {
        Formula f = random_formula(rng, 4, 6);
        std::string text = serialize_formula(f);
        REQUIRE(serialize_formula(parse_formula(text)) == text);
    }
}

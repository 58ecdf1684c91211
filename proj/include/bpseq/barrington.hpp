#pragma once

// Compiles boolean formulas to width-5 branching programs via permutation
// programs over S5. Each instruction reads one variable and applies one of
// two permutations; the program's composite is a fixed 5-cycle exactly when
// the formula is true, and the identity otherwise. Binary connectives cost a
// factor of 4 in length, negation is free, so T <= 4^depth + 1.

#include <array>

#include "bpseq/formula.hpp"

namespace bpseq {

using perm5 = std::array<u8, 5>;

constexpr perm5 perm_id{0, 1, 2, 3, 4};
// alpha is the reference 5-cycle; beta and gamma are 5-cycles whose
// commutator beta.gamma.beta^-1.gamma^-1 equals alpha.
constexpr perm5 perm_alpha{1, 2, 3, 4, 0};
constexpr perm5 perm_beta{2, 0, 4, 1, 3};
constexpr perm5 perm_gamma{2, 4, 3, 1, 0};

// Applies q first, then p.
constexpr perm5 perm_compose(const perm5& p, const perm5& q) {
    perm5 r{};
    for (u32 i = 0; i < 5; ++i) r[i] = p[q[i]];
    return r;
}

constexpr perm5 perm_inverse(const perm5& p) {
    perm5 r{};
    for (u32 i = 0; i < 5; ++i) r[p[i]] = static_cast<u8>(i);
    return r;
}

constexpr bool is_five_cycle(const perm5& p) {
    u32 i = 0, steps = 0;
    do {
        i = p[i];
        ++steps;
    } while (i != 0 && steps <= 5);
    return steps == 5;
}

static_assert(is_five_cycle(perm_alpha) && is_five_cycle(perm_beta) && is_five_cycle(perm_gamma));
static_assert(perm_compose(perm_compose(perm_beta, perm_gamma),
                           perm_compose(perm_inverse(perm_beta), perm_inverse(perm_gamma))) ==
              perm_alpha);

struct GroupInstruction {
    u32 var; // 1-based variable read
    perm5 on_true;
    perm5 on_false;
};

using GroupProgram = std::vector<GroupInstruction>;

// Composite permutation of the whole program under an assignment:
// instructions apply left to right, so instruction i+1 composes on the left.
inline perm5 run_group_program(const GroupProgram& p, const Assignment& asg) {
    perm5 acc = perm_id;
    for (const GroupInstruction& ins : p)
        acc = perm_compose(asg.get(ins.var) ? ins.on_true : ins.on_false, acc);
    return acc;
}

namespace detail {

// Rewrites a program yielding sigma/id into one yielding c.sigma.c^-1/id by
// editing only the boundary instructions.
inline GroupProgram conjugate_program(GroupProgram p, const perm5& c) {
    perm5 cinv = perm_inverse(c);
    p.front().on_true = perm_compose(p.front().on_true, cinv);
    p.front().on_false = perm_compose(p.front().on_false, cinv);
    p.back().on_true = perm_compose(c, p.back().on_true);
    p.back().on_false = perm_compose(c, p.back().on_false);
    return p;
}

// Program whose composite is the inverse of p's composite, same length.
inline GroupProgram invert_program(const GroupProgram& p) {
    GroupProgram r;
    r.reserve(p.size());
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        r.push_back({it->var, perm_inverse(it->on_true), perm_inverse(it->on_false)});
    return r;
}

inline GroupProgram post_compose(GroupProgram p, const perm5& c) {
    p.back().on_true = perm_compose(c, p.back().on_true);
    p.back().on_false = perm_compose(c, p.back().on_false);
    return p;
}

inline void append_program(GroupProgram& dst, const GroupProgram& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// Smallest c with target = c.alpha.c^-1, searched over S5 in lexicographic
// order; exists for every 5-cycle target.
inline perm5 conjugator_to_alpha(const perm5& target) {
    perm5 c = perm_id;
    do {
        if (perm_compose(perm_compose(c, perm_alpha), perm_inverse(c)) == target) return c;
    } while (std::next_permutation(c.begin(), c.end()));
    fail_input("conjugation target is not a 5-cycle");
}

inline GroupProgram compile_rec(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Var:
            return {{f.var, perm_alpha, perm_id}};
        case Formula::Kind::Const:
            return {{1, f.value ? perm_alpha : perm_id, f.value ? perm_alpha : perm_id}};
        case Formula::Kind::Not:
            // alpha . composite^-1 is alpha exactly when the child is false.
            return post_compose(invert_program(compile_rec(f.kids[0])), perm_alpha);
        case Formula::Kind::And: {
            // Commutator: the composite is beta.gamma.beta^-1.gamma^-1 with
            // each factor collapsing to id when its operand is false.
            GroupProgram pf = conjugate_program(compile_rec(f.kids[0]), conjugator_to_alpha(perm_beta));
            GroupProgram pg = conjugate_program(compile_rec(f.kids[1]), conjugator_to_alpha(perm_gamma));
            GroupProgram out = invert_program(pg);
            append_program(out, invert_program(pf));
            append_program(out, pg);
            append_program(out, pf);
            return out;
        }
        case Formula::Kind::Or:
            return compile_rec(f_not(f_and(f_not(f.kids[0]), f_not(f.kids[1]))));
    }
    fail_input("malformed formula node");
}

} // namespace detail

inline GroupProgram compile_formula_program(const Formula& f) { return detail::compile_rec(f); }

// Width-5 branching program accepting exactly the formula's satisfying
// assignments: node j at layer i steps to the instruction's permutation
// image of j, and the accept node is spliced in by swapping the composite's
// image of the start node with node 1 on the last layer.
inline BranchingProgram formula_to_bp(const Formula& f) {
    GroupProgram gp = compile_formula_program(f);
    perm5 swap01{1, 0, 2, 3, 4};
    static_assert(perm_alpha[0] == 1, "accept splice assumes alpha moves node 1 to node 2");
    gp = detail::post_compose(gp, swap01);

    BranchingProgram bp;
    bp.n = std::max<u32>(1, max_var(f));
    bp.T = static_cast<u32>(gp.size()) + 1;
    bp.W = 5;
    bp.layer_var.reserve(gp.size());
    for (u32 i = 0; i < gp.size(); ++i) {
        bp.layer_var.push_back(gp[i].var);
        for (u32 j = 0; j < 5; ++j) {
            bp.edges.insert({i + 1, j + 1, static_cast<u32>(gp[i].on_false[j]) + 1, 0});
            bp.edges.insert({i + 1, j + 1, static_cast<u32>(gp[i].on_true[j]) + 1, 1});
        }
    }
    bp.validate();
    return bp;
}

} // namespace bpseq

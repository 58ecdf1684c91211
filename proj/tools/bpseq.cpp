// Command-line front end: generation, formula compilation, reduction to
// sequence pairs, measure evaluation, corpus verification, and size stats.
//
// Exit codes: 0 success, 1 disagreement or closed-form mismatch, 2 usage or
// input error, 3 guard refusal.

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpseq/barrington.hpp"
#include "bpseq/corpus.hpp"
#include "bpseq/direct.hpp"
#include "bpseq/framework.hpp"

using namespace bpseq;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_input("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_input("cannot write " + path);
    out << content;
    if (!out) fail_input("short write to " + path);
}

// All integers ride as decimal strings so arbitrary precision survives JSON.
std::string dec(u64 v) { return std::to_string(v); }
std::string dec(const bigint& v) { return v.str(); }

void emit_report(const ordered_json& j, const std::string& path) {
    std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_file(path, text);
}

struct GuardFlags {
    u64 max_expand = default_unweight_cap;
};

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    u32 n = 4, W = 2, t = 1;
    double density = 0.5;
    u64 seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    BranchingProgram bp = random_bp(a.n, a.W, a.t, a.density, a.seed);
    write_file(a.out, serialize_bp(bp));
    std::cout << "wrote " << a.out << ": n=" << bp.n << " T=" << bp.T << " W=" << bp.W
              << " edges=" << bp.edges.size() << "\n";
    return 0;
}

// ---- compile-formula -------------------------------------------------------

int cmd_compile_formula(const std::string& in, const std::string& out) {
    Formula f = parse_formula(read_file(in));
    BranchingProgram bp = formula_to_bp(f);
    write_file(out, serialize_bp(bp));
    std::cout << "wrote " << out << ": depth=" << formula_depth(f) << " n=" << bp.n
              << " T=" << bp.T << " W=" << bp.W << "\n";
    return 0;
}

// ---- reduce ----------------------------------------------------------------

struct ReduceArgs {
    std::string in, engine = "direct", out_a, out_b, report;
};

ordered_json bp_header_json(const BranchingProgram& bp) {
    ordered_json j;
    j["n"] = dec(bp.n);
    j["W"] = dec(bp.W);
    j["T"] = dec(bp.T);
    return j;
}

int cmd_reduce(const ReduceArgs& a) {
    BranchingProgram bp = parse_bp(read_file(a.in));
    ordered_json j;
    j["schema"] = "1";
    j["engine"] = a.engine;
    std::string text_a, text_b;
    if (a.engine == "direct") {
        DirectContext ctx = make_direct_context(bp);
        std::vector<Assignment> halves = party_halves(ctx);
        DirectInstance inst = direct_combine(ctx, halves, halves);
        text_a = serialize_seq_file({inst.A, true});
        text_b = serialize_seq_file({inst.B, true});
        j.update(bp_header_json(bp));
        j["t"] = dec(ctx.t);
        ordered_json zt = ordered_json::array(), yt = ordered_json::array();
        for (const bigint& z : ctx.tables.Z) zt.push_back(dec(z));
        for (const bigint& y : ctx.tables.Y) yt.push_back(dec(y));
        j["Z"] = zt;
        j["Y"] = yt;
        j["E"] = dec(inst.E);
        j["gadget_weight"] = dec(inst.gadget_weight);
        j["weight_a"] = dec(inst.weight_A);
        j["weight_b"] = dec(inst.weight_B);
        ordered_json letters;
        for (const auto& [id, name] : ctx.letters.names(true)) letters[dec(id)] = name;
        j["letters"] = letters;
    } else if (a.engine == "framework") {
        FrameworkContext ctx = make_framework_context(bp);
        FrameworkInstance inst = build_framework_instance(ctx);
        text_a = serialize_seq_file({inst.x, true});
        text_b = serialize_seq_file({inst.y, true});
        j.update(bp_header_json(bp));
        j["t"] = dec(ctx.t);
        j["rho_true"] = dec(ctx.rho_true);
        j["rho_false"] = dec(ctx.rho_false);
        j["gap"] = dec(ctx.gap);
        ordered_json rho = ordered_json::array(), lx = ordered_json::array(),
                     ly = ordered_json::array();
        for (const FrameworkLevel& lv : ctx.levels) {
            rho.push_back(dec(lv.rho));
            lx.push_back(dec(lv.len_x));
            ly.push_back(dec(lv.len_y));
        }
        j["rho"] = rho;
        j["level_len_x"] = lx;
        j["level_len_y"] = ly;
        j["c_pair"] = dec(ctx.c_nvg);
        j["c_star"] = dec(ctx.c_star);
        j["threshold"] = dec(ctx.threshold);
        j["realized_c_num"] = dec(ctx.realized.num);
        j["realized_c_den"] = dec(ctx.realized.den);
        j["len_x"] = dec(ctx.final_len_x);
        j["len_y"] = dec(ctx.final_len_y);
        j["syms_x"] = dec(ctx.final_syms_x);
        j["syms_y"] = dec(ctx.final_syms_y);
    } else {
        fail_input("unknown engine '" + a.engine + "'");
    }
    write_file(a.out_a, text_a);
    write_file(a.out_b, text_b);
    j["bytes_a"] = dec(text_a.size());
    j["bytes_b"] = dec(text_b.size());
    emit_report(j, a.report);
    return 0;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
    std::vector<std::string> inputs;
    std::string measure = "wlcs";
    u32 k = 0;
    GuardFlags guards;
    std::string report;
};

int cmd_solve(const SolveArgs& a) {
    std::vector<WeightedSequence> seqs;
    for (const std::string& p : a.inputs) seqs.push_back(parse_seq_file(read_file(p)).seq);
    u64 value = 0;
    if (a.measure == "wlcs") {
        if (seqs.size() != 2) fail_input("wlcs takes exactly two sequences");
        value = wlcs(seqs[0], seqs[1]);
    } else if (a.measure == "lcs") {
        if (seqs.size() != 2) fail_input("lcs takes exactly two sequences");
        value = lcs(unweight(seqs[0], a.guards.max_expand), unweight(seqs[1], a.guards.max_expand));
    } else if (a.measure == "klcs") {
        u32 k = a.k ? a.k : static_cast<u32>(seqs.size());
        if (seqs.size() != k)
            fail_input("klcs with k=" + std::to_string(k) + " takes exactly that many sequences");
        value = k_lcs_weighted(seqs, a.guards.max_expand);
    } else {
        fail_input("unknown measure '" + a.measure + "'");
    }
    std::cout << value << "\n";
    if (!a.report.empty()) {
        ordered_json j;
        j["schema"] = "1";
        j["measure"] = a.measure;
        ordered_json lens = ordered_json::array();
        for (const WeightedSequence& s : seqs) lens.push_back(dec(total_length(s)));
        j["expanded_lengths"] = lens;
        j["value"] = dec(value);
        emit_report(j, a.report);
    }
    return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string corpus = "direct";
    u32 count = 0;
    u32 jobs = 1;
    std::string report;
};

struct Verdict {
    std::string line;
    ordered_json row;
    bool agree = false;
};

Verdict verify_one(const CorpusSpec& spec, const std::string& engine, u32 i) {
    BranchingProgram bp = corpus_instance(spec, i);
    bool sat = brute_force_sat(bp).has_value();
    bigint value, threshold;
    bool decided, exact_side;
    if (engine == "direct") {
        DirectContext ctx = make_direct_context(bp);
        std::vector<Assignment> halves = party_halves(ctx);
        DirectInstance inst = direct_combine(ctx, halves, halves);
        value = wlcs(inst.A, inst.B);
        threshold = inst.E;
        decided = value == threshold;
        // the threshold is one-sided: equality iff satisfiable, below otherwise
        exact_side = sat ? decided : value <= threshold - 1;
    } else {
        FrameworkContext ctx = make_framework_context(bp);
        FrameworkInstance inst = build_framework_instance(ctx);
        u64 delta = framework_instance_delta(inst);
        value = delta;
        threshold = inst.threshold;
        decided = framework_decide(inst);
        // unsatisfiable instances land exactly one gap above the threshold
        exact_side = sat ? delta <= inst.threshold : delta == inst.threshold + inst.gap;
    }
    Verdict v;
    v.agree = decided == sat && exact_side;
    std::ostringstream line;
    line << "instance " << i << ": n=" << bp.n << " W=" << bp.W << " T=" << bp.T
         << " value=" << value << " threshold=" << threshold
         << " decision=" << (decided ? "sat" : "unsat") << " oracle=" << (sat ? "sat" : "unsat")
         << (v.agree ? " agree" : " DISAGREE");
    v.line = line.str();
    v.row["instance"] = dec(u64(i));
    v.row["n"] = dec(bp.n);
    v.row["W"] = dec(bp.W);
    v.row["T"] = dec(bp.T);
    v.row["value"] = dec(value);
    v.row["threshold"] = dec(threshold);
    v.row["decision"] = decided ? "sat" : "unsat";
    v.row["oracle"] = sat ? "sat" : "unsat";
    v.row["agree"] = v.agree;
    return v;
}

int cmd_verify(const VerifyArgs& a) {
    if (a.corpus != "direct" && a.corpus != "framework")
        fail_input("unknown corpus '" + a.corpus + "'");
    CorpusSpec spec = a.corpus == "direct" ? direct_corpus_spec() : framework_corpus_spec();
    u32 count = a.count ? std::min(a.count, spec.count) : spec.count;
    u32 jobs = std::max(1u, a.jobs);

    // Workers fill a slot per instance; output order never depends on timing.
    std::vector<Verdict> slots(count);
    std::atomic<u32> next{0};
    std::atomic<bool> poisoned{false};
    std::string first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            u32 i = next.fetch_add(1);
            if (i >= count || poisoned.load()) return;
            try {
                slots[i] = verify_one(spec, a.corpus, i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (first_error.empty()) first_error = e.what();
                poisoned.store(true);
                return;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (u32 j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (poisoned.load()) fail_input("verification aborted: " + first_error);

    u32 disagreements = 0;
    ordered_json rows = ordered_json::array();
    for (const Verdict& v : slots) {
        std::cout << v.line << "\n";
        rows.push_back(v.row);
        if (!v.agree) ++disagreements;
    }
    std::cout << count << " instances, " << disagreements << " disagreements\n";
    if (!a.report.empty()) {
        ordered_json j;
        j["schema"] = "1";
        j["corpus"] = a.corpus;
        j["count"] = dec(u64(count));
        j["disagreements"] = dec(u64(disagreements));
        j["rows"] = rows;
        emit_report(j, a.report);
    }
    return disagreements == 0 ? 0 : 1;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
    std::string in, engine = "direct", report;
};

int cmd_stats(const StatsArgs& a) {
    BranchingProgram bp = parse_bp(read_file(a.in));
    u32 mismatches = 0;
    ordered_json j;
    j["schema"] = "1";
    j["engine"] = a.engine;
    j.update(bp_header_json(bp));
    auto check = [&](const std::string& name, const bigint& measured, const bigint& predicted) {
        bool ok = measured == predicted;
        std::cout << name << ": measured=" << measured << " predicted=" << predicted
                  << (ok ? " ok" : " MISMATCH") << "\n";
        ordered_json row;
        row["measured"] = dec(measured);
        row["predicted"] = dec(predicted);
        row["ok"] = ok;
        j[name] = row;
        if (!ok) ++mismatches;
    };
    if (a.engine == "direct") {
        DirectContext ctx = make_direct_context(bp);
        j["t"] = dec(ctx.t);
        std::vector<Assignment> halves = party_halves(ctx);
        bigint g0 = total_length(ctx.weighted(vector_gadget(ctx, 1, halves[0])));
        bigint g1 = total_length(ctx.weighted(vector_gadget(ctx, 2, halves.back())));
        check("gadget_weight_a", g0, ctx.tables.Z[ctx.t]);
        check("gadget_weight_b", g1, ctx.tables.Z[ctx.t]);
        DirectInstance inst = direct_combine(ctx, halves, halves);
        check("weight_a", total_length(inst.A), inst.weight_A);
        check("weight_b", total_length(inst.B), inst.weight_B);
        j["E"] = dec(inst.E);
    } else if (a.engine == "framework") {
        FrameworkContext ctx = make_framework_context(bp);
        j["t"] = dec(ctx.t);
        FrameworkSession s(ctx);
        std::vector<Assignment> halves = all_assignments(ctx.chunk);
        for (u32 k = 0; k <= ctx.t; ++k) {
            u32 span = u32{1} << k;
            GadgetInstance rx = reach_gadget(s, false, halves[0], k, 1, 1, 1 + span, 1);
            GadgetInstance ry = reach_gadget(s, true, halves.back(), k, 1, 1, 1 + span, 1);
            check("level_" + std::to_string(k) + "_len_x", rx.tag.length, ctx.levels[k].len_x);
            check("level_" + std::to_string(k) + "_len_y", ry.tag.length, ctx.levels[k].len_y);
        }
        FrameworkInstance inst = build_framework_instance(ctx);
        check("final_len_x", total_length(inst.x), ctx.final_len_x);
        check("final_len_y", total_length(inst.y), ctx.final_len_y);
        check("level_bound_holds", framework_lengths_ok(ctx) ? 1 : 0, 1);
        j["realized_c_num"] = dec(ctx.realized.num);
        j["realized_c_den"] = dec(ctx.realized.den);
        j["threshold"] = dec(ctx.threshold);
    } else {
        fail_input("unknown engine '" + a.engine + "'");
    }
    std::cout << (mismatches == 0 ? "all stats match" : "stats mismatches found") << "\n";
    if (!a.report.empty()) {
        j["mismatches"] = dec(u64(mismatches));
        emit_report(j, a.report);
    }
    return mismatches == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching-program satisfiability to sequence-similarity reductions"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* c_gen = app.add_subcommand("gen", "generate a random branching program");
    c_gen->add_option("--n", gen.n, "variable count");
    c_gen->add_option("--width", gen.W, "program width");
    c_gen->add_option("--t", gen.t, "log2 of the layer span (T = 2^t + 1)");
    c_gen->add_option("--density", gen.density, "edge density in [0,1]");
    c_gen->add_option("--seed", gen.seed, "generator seed")->required();
    c_gen->add_option("--out", gen.out, "output program file")->required();

    std::string cf_in, cf_out;
    CLI::App* c_cf = app.add_subcommand("compile-formula", "compile a formula to a width-5 program");
    c_cf->add_option("--in", cf_in, "formula file")->required();
    c_cf->add_option("--out", cf_out, "output program file")->required();

    ReduceArgs red;
    CLI::App* c_red = app.add_subcommand("reduce", "reduce a program to a sequence pair");
    c_red->add_option("--in", red.in, "program file")->required();
    c_red->add_option("--engine", red.engine, "direct or framework")
        ->check(CLI::IsMember({"direct", "framework"}));
    c_red->add_option("--out-a", red.out_a, "first sequence file")->required();
    c_red->add_option("--out-b", red.out_b, "second sequence file")->required();
    c_red->add_option("--report", red.report, "manifest path (default: stdout)");

    SolveArgs sol;
    CLI::App* c_sol = app.add_subcommand("solve", "evaluate a similarity measure on sequence files");
    c_sol->add_option("inputs", sol.inputs, "sequence files")->required()->expected(-2);
    c_sol->add_option("--measure", sol.measure, "wlcs, lcs, or klcs")
        ->check(CLI::IsMember({"wlcs", "lcs", "klcs"}));
    c_sol->add_option("--k", sol.k, "sequence count for klcs");
    c_sol->add_option("--max-expand", sol.guards.max_expand,
                      "cap on expanded length / table cells");
    c_sol->add_option("--report", sol.report, "JSON report path");

    VerifyArgs ver;
    CLI::App* c_ver = app.add_subcommand("verify", "run a reduction corpus against brute force");
    c_ver->add_option("--corpus", ver.corpus, "direct or framework")
        ->check(CLI::IsMember({"direct", "framework"}));
    c_ver->add_option("--count", ver.count, "instance count (default: full corpus)");
    c_ver->add_option("--jobs", ver.jobs, "worker threads");
    c_ver->add_option("--report", ver.report, "JSON report path");

    StatsArgs st;
    CLI::App* c_st = app.add_subcommand("stats", "compare emitted sizes against closed forms");
    c_st->add_option("--in", st.in, "program file")->required();
    c_st->add_option("--engine", st.engine, "direct or framework")
        ->check(CLI::IsMember({"direct", "framework"}));
    c_st->add_option("--report", st.report, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_gen) return cmd_gen(gen);
        if (*c_cf) return cmd_compile_formula(cf_in, cf_out);
        if (*c_red) return cmd_reduce(red);
        if (*c_sol) return cmd_solve(sol);
        if (*c_ver) return cmd_verify(ver);
        if (*c_st) return cmd_stats(st);
    } catch (const guard_error& e) {
        std::cerr << "guard refusal: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

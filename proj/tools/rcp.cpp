// Command-line front door: solve SMT-LIB string problems, inspect their
// propagation order, emit proof trees and generate benchmark families.
// Verdicts go to stdout, everything else to stderr or flag-named files.
// Exit codes: 0 sat, 1 unsat, 2 unknown, 3 error.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rcp/benchgen.hpp"
#include "rcp/charset.hpp"
#include "rcp/errors.hpp"
#include "rcp/frontend.hpp"
#include "rcp/ordering.hpp"
#include "rcp/proof.hpp"
#include "rcp/search.hpp"

namespace {

namespace fs = std::filesystem;
using rcp::SolveResult;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rcp::Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rcp::Error("cannot write " + path);
    out << text;
}

const char* verdict_word(SolveResult::Verdict v) {
    switch (v) {
    case SolveResult::Verdict::sat: return "sat";
    case SolveResult::Verdict::unsat: return "unsat";
    default: return "unknown";
    }
}

int verdict_code(SolveResult::Verdict v) {
    switch (v) {
    case SolveResult::Verdict::sat: return 0;
    case SolveResult::Verdict::unsat: return 1;
    default: return 2;
    }
}

// SMT-LIB string literal: quotes double, control and non-ASCII characters
// take the braced escape form.
std::string smt_literal(const rcp::Word& w) {
    std::string out = "\"";
    for (uint32_t cp : w) {
        if (cp == '"') {
            out += "\"\"";
        } else if (cp >= 0x20 && cp < 0x7f) {
            out.push_back(static_cast<char>(cp));
        } else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "\\u{%x}", cp);
            out += buf;
        }
    }
    return out + "\"";
}

std::string model_text(const rcp::Normalized& nz, const rcp::Model& m, bool verified) {
    std::string out = verified ? "(model" : "(model ; unverified";
    for (const auto& [v, w] : m)
        out += "\n  (define-fun " + nz.vars->name(v) + " () String " + smt_literal(w) + ")";
    return out + ")\n";
}

struct SolveFlags {
    std::string strategy = "auto";
    double timeout_s = 60.0;
    size_t max_model_len = 4096;
    uint64_t max_expansions = 100000;
    size_t state_cap = rcp::kDefaultStateCap;
    rcp::PriorityWeights weights;
    std::string stats_path, proof_path, model_path;
    unsigned jobs = 1;
};

void add_solve_flags(CLI::App* sc, SolveFlags& f) {
    sc->add_option("--strategy", f.strategy, "auto, ordered, fair or priority")
        ->check(CLI::IsMember({"auto", "ordered", "fair", "priority"}))
        ->capture_default_str();
    sc->add_option("--timeout", f.timeout_s, "wall budget per problem, seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc->add_option("--max-model-len", f.max_model_len,
                   "stop model enumeration at this total assignment length");
    sc->add_option("--max-expansions", f.max_expansions, "proof tree expansion budget");
    sc->add_option("--state-cap", f.state_cap, "abort automata operations beyond this size");
    sc->add_option("--w-concrete", f.weights.w_concrete, "priority weight: concrete languages");
    sc->add_option("--w-info-gain", f.weights.w_info_gain, "priority weight: expected tightening");
    sc->add_option("--w-exactness", f.weights.w_exactness, "priority weight: exact images");
    sc->add_option("--w-cost", f.weights.w_cost, "priority weight: automata size penalty");
    sc->add_option("--w-fairness", f.weights.w_fairness, "priority weight: clock age");
}

rcp::Budgets budgets_of(const SolveFlags& f) {
    rcp::Budgets b;
    b.wall_time = std::chrono::milliseconds(static_cast<int64_t>(f.timeout_s * 1000.0));
    b.max_expansions = f.max_expansions;
    b.max_model_total_len = f.max_model_len;
    b.nfa_state_cap = f.state_cap;
    return b;
}

rcp::Strategy strategy_of(const std::string& name) {
    if (name == "ordered") return rcp::Strategy::ordered;
    if (name == "fair") return rcp::Strategy::fair;
    if (name == "priority") return rcp::Strategy::priority;
    return rcp::Strategy::automatic;
}

struct Outcome {
    int code = 3;
    std::string verdict; // empty on error
    std::string error;
};

Outcome solve_file(const std::string& path, const SolveFlags& f,
                   rcp::Normalized* nz_out = nullptr, SolveResult* res_out = nullptr) {
    Outcome o;
    try {
        rcp::Normalized nz = rcp::normalize(rcp::parse(read_file(path)));
        SolveResult res = rcp::solve(nz.root, budgets_of(f), strategy_of(f.strategy), f.weights);
        o.verdict = verdict_word(res.verdict);
        o.code = verdict_code(res.verdict);
        if (nz_out) *nz_out = std::move(nz);
        if (res_out) *res_out = std::move(res);
    } catch (const rcp::Error& e) {
        o.error = path + ": " + e.what();
    }
    return o;
}

int run_solve(const std::vector<std::string>& files, const SolveFlags& f) {
    if (files.size() == 1) {
        rcp::Normalized nz;
        SolveResult res;
        Outcome o = solve_file(files[0], f, &nz, &res);
        if (o.code == 3) {
            std::cerr << "error: " << o.error << "\n";
            return 3;
        }
        std::cout << o.verdict << "\n";
        if (!f.stats_path.empty()) write_file(f.stats_path, res.stats.to_json() + "\n");
        if (!f.proof_path.empty()) {
            if (res.tree)
                write_file(f.proof_path, rcp::export_dot(*res.tree));
            else
                std::cerr << "warning: no proof tree to export\n";
        }
        if (!f.model_path.empty()) {
            if (res.verdict == SolveResult::Verdict::sat)
                write_file(f.model_path, model_text(nz, res.model, res.model_verified));
            else
                std::cerr << "warning: no model, verdict is " << o.verdict << "\n";
        }
        return o.code;
    }

    if (!f.stats_path.empty() || !f.proof_path.empty() || !f.model_path.empty()) {
        std::cerr << "error: --stats, --proof and --model need a single input file\n";
        return 3;
    }

    // Each worker owns an independent engine, so files solve concurrently
    // without shared state.
    std::vector<Outcome> out(files.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next.fetch_add(1)) < files.size();) out[i] = solve_file(files[i], f);
    };
    size_t n = std::max<size_t>(1, std::min<size_t>(f.jobs, files.size()));
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    int worst = 0;
    for (size_t i = 0; i < files.size(); ++i) {
        if (out[i].code == 3)
            std::cerr << "error: " << out[i].error << "\n";
        else
            std::cout << files[i] << ": " << out[i].verdict << "\n";
        worst = std::max(worst, out[i].code);
    }
    return worst;
}

int run_check_orderable(const std::string& file) {
    rcp::Normalized nz = rcp::normalize(rcp::parse(read_file(file)));
    rcp::OrderReport rep = rcp::analyze_order(nz.root.eqs());
    std::cout << rep.to_json() << "\n";
    return rep.orderable() ? 0 : 2;
}

int run_prove(const std::string& file, const SolveFlags& f, const std::string& dot_path) {
    rcp::Normalized nz;
    SolveResult res;
    Outcome o = solve_file(file, f, &nz, &res);
    if (o.code == 3) {
        std::cerr << "error: " << o.error << "\n";
        return 3;
    }
    std::cout << o.verdict << "\n";
    if (res.verdict != SolveResult::Verdict::unsat) {
        std::cerr << "error: prove needs an unsat verdict, got " << o.verdict << "\n";
        return o.code;
    }
    write_file(dot_path, rcp::export_dot(*res.tree));
    std::cerr << "wrote " << dot_path << "\n";
    return o.code;
}

int emit_bench(const rcp::GeneratedBench& g, const std::string& out_dir) {
    fs::create_directories(out_dir);
    fs::path base = fs::path(out_dir) / g.name;
    write_file((base.string() + ".smt2"), g.script);
    write_file((base.string() + ".json"), g.manifest);
    std::cout << g.verdict << "\n";
    std::cerr << "wrote " << base.string() << ".smt2 and .json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regular constraint propagation solver for string formulas"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    SolveFlags sf;
    auto* sc_solve = app.add_subcommand("solve", "decide one or more SMT-LIB files");
    sc_solve->add_option("files", files, "input problems")->required()->expected(-1);
    add_solve_flags(sc_solve, sf);
    sc_solve->add_option("--stats", sf.stats_path, "write search statistics JSON here");
    sc_solve->add_option("--proof", sf.proof_path, "write the final proof tree as DOT");
    sc_solve->add_option("--model", sf.model_path, "write a sat model in SMT-LIB form");
    sc_solve->add_option("--jobs", sf.jobs, "solve several files concurrently")
        ->check(CLI::PositiveNumber);

    std::string check_file;
    auto* sc_check = app.add_subcommand("check-orderable", "print the propagation-order report");
    sc_check->add_option("file", check_file, "input problem")->required();

    std::string prove_file, dot_path = "proof.dot";
    SolveFlags pf;
    auto* sc_prove = app.add_subcommand("prove", "solve and export the closed proof tree");
    sc_prove->add_option("file", prove_file, "input problem")->required();
    sc_prove->add_option("--proof", dot_path, "DOT output path")->capture_default_str();
    add_solve_flags(sc_prove, pf);

    rcp::PcpSpec pcp;
    std::string pcp_encoding = "transducer", pcp_out = ".";
    auto* sc_pcp = app.add_subcommand("gen-pcp", "generate a post-correspondence instance");
    sc_pcp->add_option("--dominos", pcp.num_dominos, "domino pairs")->capture_default_str();
    sc_pcp->add_option("--word-len", pcp.word_len, "letters per row word")->capture_default_str();
    sc_pcp->add_option("--alphabet", pcp.alphabet_size, "row word alphabet size")
        ->capture_default_str();
    sc_pcp->add_option("--encoding", pcp_encoding, "transducer or replaceall")
        ->check(CLI::IsMember({"transducer", "replaceall"}))
        ->capture_default_str();
    sc_pcp->add_option("--seed", pcp.seed, "generator seed")->capture_default_str();
    sc_pcp->add_option("--out", pcp_out, "output directory")->capture_default_str();

    rcp::BioSpec bio;
    std::string bio_out = ".";
    auto* sc_bio = app.add_subcommand("gen-bio", "generate a transcription-chain instance");
    sc_bio->add_option("--dna-len", bio.dna_len, "DNA constant length")->capture_default_str();
    sc_bio->add_option("--pattern-len", bio.pattern_len, "planted pattern length")
        ->capture_default_str();
    sc_bio->add_option("--replace", bio.num_replace, "substitution chain length, 1 to 4")
        ->capture_default_str();
    sc_bio->add_flag("--sat,!--unsat", bio.want_sat, "plant a witness or rule every witness out");
    sc_bio->add_option("--seed", bio.seed, "generator seed")->capture_default_str();
    sc_bio->add_option("--out", bio_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (*sc_solve) return run_solve(files, sf);
        if (*sc_check) return run_check_orderable(check_file);
        if (*sc_prove) return run_prove(prove_file, pf, dot_path);
        if (*sc_pcp)
            return emit_bench(rcp::gen_pcp(pcp, pcp_encoding == "replaceall"
                                                    ? rcp::PcpEncoding::replaceall
                                                    : rcp::PcpEncoding::transducer),
                              pcp_out);
        if (*sc_bio) return emit_bench(rcp::gen_bio(bio), bio_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}

#include <doctest.h>

#include <optional>
#include <string>

#include <json.hpp>

#include "rcp/benchgen.hpp"
#include "rcp/charset.hpp"
#include "rcp/errors.hpp"
#include "rcp/ordering.hpp"
#include "rcp/search.hpp"

using namespace rcp;
using nlohmann::json;

namespace {

// Reads the planted assignment out of a manifest and converts it to a model
// over the normalized variable table.
Model planted_model(const GeneratedBench& g, const Normalized& nz) {
    json doc = json::parse(g.manifest);
    Model m;
    for (auto& [name, word] : doc.at("planted").items())
        m[nz.vars->lookup(name)] = from_utf8(word.get<std::string>());
    return m;
}

std::optional<GeneratedBench> scan_pcp(PcpSpec s, PcpEncoding enc, int max_seeds,
                                       bool (*want)(const GeneratedBench&)) {
    for (int seed = 0; seed < max_seeds; ++seed) {
        s.seed = static_cast<uint64_t>(seed);
        GeneratedBench g = gen_pcp(s, enc);
        if (want(g)) return g;
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("single domino replaceall instance reproduces the published shape") {
    // Hunt for the seed whose random domino is 10 over 01, then the script
    // is forced character for character.
    auto hit = scan_pcp({1, 2, 2, 0}, PcpEncoding::replaceall, 400, [](const GeneratedBench& g) {
        return json::parse(g.manifest)["dominos"] == json::array({json::array({"10", "01"})});
    });
    REQUIRE(hit.has_value());
    CHECK(hit->script == "(set-logic QF_S)\n"
                         "(declare-const x String)\n"
                         "(declare-const y String)\n"
                         "(declare-const z String)\n"
                         "(assert (str.in_re x (re.+ (str.to_re \"2\"))))\n"
                         "(assert (= y (str.replace_all x \"2\" \"10\")))\n"
                         "(assert (= z (str.replace_all x \"2\" \"01\")))\n"
                         "(assert (= y z))\n"
                         "(check-sat)\n");
    // Every concatenation of copies of 10 starts with 1 and of 01 with 0, so
    // the planted search cannot hit; the label must stay open, never unsat.
    CHECK(hit->verdict == "unknown");
    CHECK(json::parse(hit->manifest).count("planted") == 0);
    CHECK(hit->name.substr(0, 9) == "pcp_d1_w2");
    CHECK(hit->name.substr(hit->name.size() - 3) == "_ra");

    Normalized nz = normalize(hit->problem);
    CHECK(nz.vars->size() == 3);
    CHECK(nz.root.eqs().size() == 3);
}

TEST_CASE("planted pcp matches verify against their own normalization") {
    // word_len 1 makes top == bot a coin flip per domino, so a sat instance
    // shows up within a few seeds for either encoding.
    auto is_sat = [](const GeneratedBench& g) { return g.verdict == "sat"; };

    auto ra = scan_pcp({1, 1, 2, 0}, PcpEncoding::replaceall, 64, is_sat);
    REQUIRE(ra.has_value());
    Normalized nra = normalize(ra->problem);
    CHECK(verify_model(nra.root, planted_model(*ra, nra)));

    auto td = scan_pcp({2, 1, 2, 0}, PcpEncoding::transducer, 64, is_sat);
    REQUIRE(td.has_value());
    Normalized ntd = normalize(td->problem);
    CHECK(verify_model(ntd.root, planted_model(*td, ntd)));

    // The shortest match is a single selector, so the planted x names one
    // domino and both rows carry its word.
    json m = json::parse(td->manifest);
    std::string x = m["planted"]["x"];
    CHECK(x.size() == 1);
    CHECK(m["planted"]["y"] == m["planted"]["z"]);
}

TEST_CASE("generation is deterministic per spec and seed") {
    PcpSpec p{3, 3, 2, 41};
    GeneratedBench a = gen_pcp(p), b = gen_pcp(p);
    CHECK(a.script == b.script);
    CHECK(a.manifest == b.manifest);
    CHECK(a.name == "pcp_d3_w3_a2_s41");

    BioSpec s{30, 5, 4, true, 41};
    GeneratedBench c = gen_bio(s), d = gen_bio(s);
    CHECK(c.script == d.script);
    CHECK(c.manifest == d.manifest);
    CHECK(c.name == "bio_sat_n30_p5_r4_s41");

    GeneratedBench e = gen_pcp({3, 3, 2, 42});
    CHECK(e.script != a.script);
}

TEST_CASE("selector characters start right after the word alphabet") {
    GeneratedBench g = gen_pcp({2, 2, 2, 7});
    CHECK(g.script.find("(s \"2\" ") != std::string::npos);
    CHECK(g.script.find("(s \"3\" ") != std::string::npos);
    CHECK(g.script.find("re.union") != std::string::npos);
    for (auto& d : json::parse(g.manifest)["dominos"])
        for (auto& w : d)
            for (char c : w.get<std::string>()) CHECK((c == '0' || c == '1'));

    // A wider word alphabet shifts the selectors past it.
    GeneratedBench h = gen_pcp({1, 2, 4, 7});
    CHECK(h.script.find("(s \"4\" ") != std::string::npos);
}

TEST_CASE("every generated family re-parses and normalizes") {
    for (uint32_t d = 1; d <= 3; ++d)
        for (uint32_t w = 1; w <= 3; ++w) {
            GeneratedBench g = gen_pcp({d, w, 2, 11});
            Normalized nz = normalize(g.problem);
            CHECK(nz.vars->size() == 3);
            CHECK(g.problem.transducers.size() == 2);
        }
    GeneratedBench ra = gen_pcp({1, 3, 2, 11}, PcpEncoding::replaceall);
    CHECK(normalize(ra.problem).root.eqs().size() == 3);

    for (bool sat : {true, false}) {
        GeneratedBench g = gen_bio({25, 6, 4, sat, 11});
        Normalized nz = normalize(g.problem);
        CHECK(nz.vars->size() == 6); // x, y, y1..y3, z
        CHECK(is_straight_line(nz.root.eqs()));
    }
}

TEST_CASE("small sat bio instance solves to its planted model") {
    GeneratedBench g = gen_bio({30, 5, 4, true, 1});
    CHECK(g.verdict == "sat");
    Normalized nz = normalize(g.problem);
    CHECK(verify_model(nz.root, planted_model(g, nz)));

    json m = json::parse(g.manifest);
    std::string pre = m["preimage"], pat = m["pattern"];
    CHECK(pre.find(pat) != std::string::npos);
    CHECK(m["planted"]["y"] == pre);

    Budgets b;
    b.wall_time = std::chrono::milliseconds(20000);
    SolveResult res = solve(nz.root, b);
    REQUIRE(res.verdict == SolveResult::Verdict::sat);
    if (res.model_verified) CHECK(verify_model(nz.root, res.model));
}

TEST_CASE("small unsat bio instance refutes") {
    GeneratedBench g = gen_bio({20, 4, 4, false, 3});
    CHECK(g.verdict == "unsat");

    json m = json::parse(g.manifest);
    std::string pre = m["preimage"], pat = m["pattern"];
    CHECK(pre.find(pat) == std::string::npos);
    for (char c : pat) CHECK(std::string("acgu").find(c) != std::string::npos);
    CHECK(m.count("planted") == 0);

    Normalized nz = normalize(g.problem);
    Budgets b;
    b.wall_time = std::chrono::milliseconds(20000);
    SolveResult res = solve(nz.root, b);
    CHECK(res.verdict == SolveResult::Verdict::unsat);
}

TEST_CASE("shorter substitution chains stay consistent") {
    for (uint32_t r = 1; r <= 3; ++r) {
        GeneratedBench g = gen_bio({20, 4, r, true, 9});
        Normalized nz = normalize(g.problem);
        CHECK(nz.vars->size() == 2 + r); // x, z, and the chain vars
        CHECK(nz.root.eqs().size() == r);
        CHECK(verify_model(nz.root, planted_model(g, nz)));
    }
}

TEST_CASE("default bio parameters give the published workload shape") {
    BioSpec s;
    CHECK(s.dna_len == 200);
    CHECK(s.pattern_len == 15);
    CHECK(s.num_replace == 4);
    CHECK(s.want_sat);

    GeneratedBench g = gen_bio(s);
    Normalized nz = normalize(g.problem);
    CHECK(is_straight_line(nz.root.eqs()));
    CHECK(analyze_order(nz.root.eqs()).orderable());
    CHECK(json::parse(g.manifest)["preimage"].get<std::string>().size() == 200);
}

TEST_CASE("malformed generator specs are rejected") {
    CHECK_THROWS_AS(gen_pcp({0, 3, 2, 0}), Error);
    CHECK_THROWS_AS(gen_pcp({3, 0, 2, 0}), Error);
    CHECK_THROWS_AS(gen_pcp({20, 3, 20, 0}), Error);
    CHECK_THROWS_AS(gen_pcp({2, 3, 2, 0}, PcpEncoding::replaceall), Error);
    CHECK_THROWS_AS(gen_bio({10, 11, 4, true, 0}), Error);
    CHECK_THROWS_AS(gen_bio({10, 0, 4, true, 0}), Error);
    CHECK_THROWS_AS(gen_bio({10, 4, 0, true, 0}), Error);
    CHECK_THROWS_AS(gen_bio({10, 4, 5, true, 0}), Error);
}

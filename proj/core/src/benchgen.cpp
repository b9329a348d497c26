#include "rcp/benchgen.hpp"

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

using nlohmann::json;

// Seeded draws reduced by modulo so the byte streams do not depend on the
// standard library's distribution implementations.
struct Rand {
    std::mt19937_64 eng;
    explicit Rand(uint64_t seed) : eng(seed) {}
    uint64_t below(uint64_t n) { return eng() % n; }
};

constexpr const char* kSelectorChars = "0123456789abcdefghijklmnopqrstuvwxyz";

std::string smt_quote(const std::string& s) { return "\"" + s + "\""; }

std::string selector_membership(const std::vector<char>& selectors) {
    if (selectors.size() == 1)
        return "(re.+ (str.to_re \"" + std::string(1, selectors[0]) + "\"))";
    std::string u = "(re.union";
    for (char c : selectors) u += " (str.to_re \"" + std::string(1, c) + "\")";
    return "(re.+ " + u + "))";
}

std::string transducer_def(const std::string& name, const std::vector<char>& selectors,
                           const std::vector<std::string>& words) {
    std::string s = "(define-transducer " + name +
                    "\n  (states s)\n  (init s)\n  (final s)\n  (trans";
    for (size_t i = 0; i < selectors.size(); ++i) {
        if (i) s += "\n        ";
        s += " (s \"" + std::string(1, selectors[i]) + "\" " + smt_quote(words[i]) + " s)";
    }
    return s + "))\n";
}

std::string chain_replace_all(const std::string& via, const std::string& pat,
                              const std::string& rep) {
    return "(str.replace_all " + via + " " + smt_quote(pat) + " " + smt_quote(rep) + ")";
}

std::string run_replace_all(const std::string& input, char pat, char rep) {
    std::string out = input;
    for (char& c : out)
        if (c == pat) c = rep;
    return out;
}

} // namespace

GeneratedBench gen_pcp(const PcpSpec& s, PcpEncoding enc) {
    if (s.num_dominos < 1 || s.word_len < 1 || s.alphabet_size < 1)
        throw Error("pcp spec fields must all be at least 1");
    if (s.alphabet_size + s.num_dominos > 36)
        throw Error("pcp spec needs more selector characters than exist");
    if (enc == PcpEncoding::replaceall && s.num_dominos != 1)
        throw Error("the replaceall encoding only fits a single domino");

    Rand r(s.seed);
    std::vector<std::string> top(s.num_dominos), bot(s.num_dominos);
    for (uint32_t i = 0; i < s.num_dominos; ++i) {
        for (uint32_t j = 0; j < s.word_len; ++j) {
            top[i].push_back(kSelectorChars[r.below(s.alphabet_size)]);
            bot[i].push_back(kSelectorChars[r.below(s.alphabet_size)]);
        }
    }
    std::vector<char> selectors(s.num_dominos);
    for (uint32_t i = 0; i < s.num_dominos; ++i)
        selectors[i] = kSelectorChars[s.alphabet_size + i];

    // Brute-force hunt for a planted match over selector words up to length
    // 8. A hit certifies sat; no hit stays "unknown", the instance may still
    // be either way.
    std::string planted_x, planted_row;
    bool found = false;
    uint64_t budget = 2'000'000;
    for (size_t len = 1; len <= 8 && !found && budget; ++len) {
        std::vector<uint32_t> pick(len, 0);
        for (;;) {
            std::string xs, ts, bs;
            for (uint32_t d : pick) {
                xs.push_back(selectors[d]);
                ts += top[d];
                bs += bot[d];
            }
            if (ts == bs) {
                planted_x = xs;
                planted_row = ts;
                found = true;
                break;
            }
            if (--budget == 0) break;
            size_t at = 0;
            while (at < len && ++pick[at] == s.num_dominos) pick[at++] = 0;
            if (at == len) break;
        }
    }

    std::string script = "(set-logic QF_S)\n(declare-const x String)\n"
                         "(declare-const y String)\n(declare-const z String)\n";
    if (enc == PcpEncoding::transducer) {
        script += transducer_def("top", selectors, top);
        script += transducer_def("bot", selectors, bot);
        script += "(assert (str.in_re x " + selector_membership(selectors) + "))\n";
        script += "(assert (= y (top x)))\n(assert (= z (bot x)))\n";
    } else {
        std::string sel(1, selectors[0]);
        script += "(assert (str.in_re x (re.+ (str.to_re \"" + sel + "\"))))\n";
        script += "(assert (= y " + chain_replace_all("x", sel, top[0]) + "))\n";
        script += "(assert (= z " + chain_replace_all("x", sel, bot[0]) + "))\n";
    }
    script += "(assert (= y z))\n(check-sat)\n";

    GeneratedBench out;
    out.name = "pcp_d" + std::to_string(s.num_dominos) + "_w" + std::to_string(s.word_len) +
               "_a" + std::to_string(s.alphabet_size) + "_s" + std::to_string(s.seed) +
               (enc == PcpEncoding::replaceall ? "_ra" : "");
    out.script = script;
    out.verdict = found ? "sat" : "unknown";
    out.problem = parse(script);

    json m;
    m["family"] = "pcp";
    m["spec"] = {{"num_dominos", s.num_dominos},
                 {"word_len", s.word_len},
                 {"alphabet_size", s.alphabet_size},
                 {"seed", s.seed},
                 {"encoding", enc == PcpEncoding::replaceall ? "replaceall" : "transducer"}};
    json dominos = json::array();
    for (uint32_t i = 0; i < s.num_dominos; ++i)
        dominos.push_back(json::array({top[i], bot[i]}));
    m["dominos"] = dominos;
    m["verdict"] = out.verdict;
    if (found)
        m["planted"] = {{"x", planted_x}, {"y", planted_row}, {"z", planted_row}};
    out.manifest = m.dump(2) + "\n";
    return out;
}

GeneratedBench gen_bio(const BioSpec& s) {
    if (s.dna_len < 1 || s.pattern_len < 1 || s.pattern_len > s.dna_len)
        throw Error("bio spec needs 1 <= pattern_len <= dna_len");
    if (s.num_replace < 1 || s.num_replace > 4)
        throw Error("bio spec supports 1 to 4 substitutions");

    static const char kRna[] = {'a', 'c', 'g', 'u'};
    static const std::pair<char, char> kPairs[] = {
        {'u', 'A'}, {'a', 'T'}, {'g', 'C'}, {'c', 'G'}};

    Rand r(s.seed);
    std::string rna;
    for (uint32_t i = 0; i < s.dna_len; ++i) rna.push_back(kRna[r.below(4)]);

    // Stage values of the substitution chain; the last one is the DNA
    // constant the instance pins.
    std::vector<std::string> stage{rna};
    for (uint32_t i = 0; i < s.num_replace; ++i)
        stage.push_back(run_replace_all(stage.back(), kPairs[i].first, kPairs[i].second));
    const std::string& dna = stage.back();

    std::string pattern(rna.substr(r.below(s.dna_len - s.pattern_len + 1), s.pattern_len));
    if (!s.want_sat) {
        // Mutate until no occurrence is left in the planted preimage. The
        // chain maps RNA letters bijectively, so absence there is absence in
        // every preimage.
        size_t tries = 0;
        for (;;) {
            std::string q = pattern;
            size_t muts = 1 + tries / 64;
            for (size_t m = 0; m < muts; ++m) {
                size_t pos = r.below(q.size());
                char c = q[pos];
                while (c == q[pos]) c = kRna[r.below(4)];
                q[pos] = c;
            }
            if (rna.find(q) == std::string::npos) {
                pattern = q;
                break;
            }
            if (++tries > 10000)
                throw Error("no absent pattern of this length exists, enlarge pattern_len");
        }
    }

    // Variable names along the chain: y, y1, .., then x on the last step.
    std::vector<std::string> names{"y"};
    for (uint32_t i = 1; i < s.num_replace; ++i) names.push_back("y" + std::to_string(i));
    names.push_back("x");

    std::string script = "(set-logic QF_S)\n(declare-const x String)\n";
    for (size_t i = 0; i + 1 < names.size(); ++i)
        script += "(declare-const " + names[i] + " String)\n";
    script += "(declare-const z String)\n";
    script += "(assert (= x " + smt_quote(dna) + "))\n";
    for (uint32_t i = 0; i < s.num_replace; ++i)
        script += "(assert (= " + names[i + 1] + " " +
                  chain_replace_all(names[i], std::string(1, kPairs[i].first),
                                    std::string(1, kPairs[i].second)) +
                  "))\n";
    script += "(assert (= z " + smt_quote(pattern) + "))\n";
    script += "(assert (str.contains y z))\n(check-sat)\n";

    GeneratedBench out;
    out.name = std::string("bio_") + (s.want_sat ? "sat" : "unsat") + "_n" +
               std::to_string(s.dna_len) + "_p" + std::to_string(s.pattern_len) + "_r" +
               std::to_string(s.num_replace) + "_s" + std::to_string(s.seed);
    out.script = script;
    out.verdict = s.want_sat ? "sat" : "unsat";
    out.problem = parse(script);

    json m;
    m["family"] = "bio";
    m["spec"] = {{"dna_len", s.dna_len},
                 {"pattern_len", s.pattern_len},
                 {"num_replace", s.num_replace},
                 {"want_sat", s.want_sat},
                 {"seed", s.seed}};
    m["verdict"] = out.verdict;
    m["pattern"] = pattern;
    m["preimage"] = rna;
    if (s.want_sat) {
        json planted;
        for (size_t i = 0; i < names.size(); ++i) planted[names[i]] = stage[i];
        planted["z"] = pattern;
        m["planted"] = planted;
    }
    out.manifest = m.dump(2) + "\n";
    return out;
}

} // namespace rcp

#pragma once

#include <cstdint>
#include <string>

#include "rcp/frontend.hpp"

namespace rcp {

// Post correspondence instances: num_dominos word pairs of length word_len
// over the first alphabet_size digit characters. Selector characters start
// right after the word alphabet, so the binary single-domino case picks '2'
// and matches the motivating encoding exactly.
struct PcpSpec {
    uint32_t num_dominos = 3;
    uint32_t word_len = 3;
    uint32_t alphabet_size = 2;
    uint64_t seed = 0;
};

// How gen_pcp spells the domino application. The transducer form works for
// any domino count; the replaceall form exists for single-domino fidelity.
enum class PcpEncoding { transducer, replaceall };

// Reverse transcription instances: a hidden RNA word of length dna_len runs
// through the first num_replace base substitutions, the result is pinned as
// a constant, and the RNA word must contain a pattern_len pattern that is
// either planted (satisfiable) or absent from every preimage.
struct BioSpec {
    uint32_t dna_len = 200;
    uint32_t pattern_len = 15;
    uint32_t num_replace = 4;
    bool want_sat = true;
    uint64_t seed = 0;
};

// One generated benchmark: the script text, the recorded truth, a JSON
// manifest documenting how it was made, and the parsed form (generation
// re-parses its own output, so scripts are valid by construction).
struct GeneratedBench {
    std::string name;     // file stem, e.g. "pcp_d3_w3_a2_s7"
    std::string script;   // SMT-LIB text
    std::string verdict;  // "sat", "unsat" or "unknown"
    std::string manifest; // serialized JSON sidecar
    Problem problem;
};

// Deterministic in the spec including the seed. The recorded verdict is
// "sat" only when a selector word up to length 8 matches top and bottom
// (the manifest then carries the planted model); anything else stays
// "unknown", never "unsat". Throws Error on specs that do not fit the
// selector character space and on replaceall encoding with several dominos.
GeneratedBench gen_pcp(const PcpSpec& s, PcpEncoding enc = PcpEncoding::transducer);

// Deterministic in the spec including the seed. Satisfiable instances plant
// the RNA preimage and take the pattern from it; unsatisfiable ones mutate
// the pattern until it avoids the unique RNA preimage, which settles the
// verdict because the substitution chain is a bijection on RNA letters.
// Throws Error when pattern_len exceeds dna_len or num_replace is outside
// 1..4.
GeneratedBench gen_bio(const BioSpec& s);

} // namespace rcp

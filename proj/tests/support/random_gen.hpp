#pragma once

// Seeded generators for property tests. mt19937_64 keeps the raw stream
// portable; all draws go through uniform_below to avoid distribution
// implementation differences.

#include <cstdint>
#include <random>
#include <vector>

#include "rcp/charset.hpp"
#include "rcp/nfa.hpp"
#include "rcp/regex.hpp"

namespace rcp::testing {

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t uniform_below(uint64_t n) { return n ? eng_() % n : 0; }
    bool coin(double p = 0.5) { return eng_() % 1000 < uint64_t(p * 1000); }

    Codepoint pick(const std::vector<Codepoint>& chars) {
        return chars[uniform_below(chars.size())];
    }

    Word word(const std::vector<Codepoint>& chars, size_t max_len) {
        size_t len = uniform_below(max_len + 1);
        Word w;
        for (size_t i = 0; i < len; ++i) w.push_back(static_cast<char32_t>(pick(chars)));
        return w;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

// Random regex over the given codepoints, node count bounded by size budget.
RegexAst random_regex(Rng& rng, const std::vector<Codepoint>& chars, int depth);

// Random NFA with small state count and arcs over the given codepoints.
// Always contains at least one initial state; may have an empty language.
Nfa random_nfa(Rng& rng, const std::vector<Codepoint>& chars, uint32_t max_states);

// Random NFA whose language is a finite set of explicitly chosen short words.
Nfa random_finite_nfa(Rng& rng, const std::vector<Codepoint>& chars, size_t max_words,
                      size_t max_len, std::vector<Word>* words_out = nullptr);

} // namespace rcp::testing

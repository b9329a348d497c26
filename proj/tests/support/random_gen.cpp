#include "support/random_gen.hpp"

#include <algorithm>

namespace rcp::testing {

RegexAst random_regex(Rng& rng, const std::vector<Codepoint>& chars, int depth) {
    // Leaves only once the depth budget runs out.
    if (depth <= 0) {
        switch (rng.uniform_below(4)) {
        case 0: return re::eps();
        case 1: return re::lit(rng.word(chars, 2));
        case 2: return re::cls(CharSet::single(rng.pick(chars)));
        default: return re::any_char();
        }
    }
    switch (rng.uniform_below(10)) {
    case 0: return re::lit(rng.word(chars, 3));
    case 1: return re::cls(CharSet::single(rng.pick(chars)));
    case 2: return re::cat({random_regex(rng, chars, depth - 1), random_regex(rng, chars, depth - 1)});
    case 3: return re::alt({random_regex(rng, chars, depth - 1), random_regex(rng, chars, depth - 1)});
    case 4: return re::star(random_regex(rng, chars, depth - 1));
    case 5: return re::plus(random_regex(rng, chars, depth - 1));
    case 6: return re::opt(random_regex(rng, chars, depth - 1));
    case 7: return re::inter({random_regex(rng, chars, depth - 1), random_regex(rng, chars, depth - 1)});
    case 8: return re::comp(random_regex(rng, chars, depth - 2));
    default: return re::any_string();
    }
}

Nfa random_nfa(Rng& rng, const std::vector<Codepoint>& chars, uint32_t max_states) {
    Nfa a;
    uint32_t n = 1 + uint32_t(rng.uniform_below(max_states));
    for (uint32_t i = 0; i < n; ++i) a.add_state();
    a.mark_initial(uint32_t(rng.uniform_below(n)));
    uint32_t finals = 1 + uint32_t(rng.uniform_below(n));
    for (uint32_t i = 0; i < finals; ++i) a.mark_final(uint32_t(rng.uniform_below(n)));
    uint32_t narcs = uint32_t(rng.uniform_below(3 * n + 1));
    for (uint32_t i = 0; i < narcs; ++i) {
        uint32_t src = uint32_t(rng.uniform_below(n));
        uint32_t dst = uint32_t(rng.uniform_below(n));
        CharSet lab = CharSet::single(rng.pick(chars));
        if (rng.coin(0.2)) lab = lab.union_with(CharSet::single(rng.pick(chars)));
        a.add_arc(src, std::move(lab), dst);
    }
    if (rng.coin(0.3)) {
        uint32_t src = uint32_t(rng.uniform_below(n));
        uint32_t dst = uint32_t(rng.uniform_below(n));
        if (src != dst) a.add_eps(src, dst);
    }
    return a;
}

Nfa random_finite_nfa(Rng& rng, const std::vector<Codepoint>& chars, size_t max_words,
                      size_t max_len, std::vector<Word>* words_out) {
    size_t count = rng.uniform_below(max_words + 1);
    std::vector<Word> words;
    for (size_t i = 0; i < count; ++i) words.push_back(rng.word(chars, max_len));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    Nfa acc = empty_lang();
    for (const Word& w : words) acc = union_lang(acc, singleton(w));
    if (words_out) *words_out = std::move(words);
    return acc;
}

} // namespace rcp::testing

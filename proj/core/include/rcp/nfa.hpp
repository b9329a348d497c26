#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rcp/charset.hpp"
#include "rcp/regex.hpp"

namespace rcp {

inline constexpr size_t kDefaultStateCap = 10000;

// Nondeterministic finite automaton with CharSet-labelled arcs and explicit
// epsilon arcs. States are dense 0..num_states-1. Epsilon arcs are an
// internal convenience: every language-level operation first normalizes to an
// epsilon-free machine.
struct Nfa {
    struct Arc {
        uint32_t src;
        CharSet label;
        uint32_t dst;
    };

    uint32_t num_states = 0;
    std::vector<uint32_t> initial; // sorted, unique
    std::vector<uint32_t> final;   // sorted, unique
    std::vector<Arc> arcs;
    std::vector<std::pair<uint32_t, uint32_t>> eps;

    uint32_t add_state() { return num_states++; }
    void add_arc(uint32_t src, CharSet label, uint32_t dst);
    void add_eps(uint32_t src, uint32_t dst) { eps.emplace_back(src, dst); }
    void mark_initial(uint32_t q);
    void mark_final(uint32_t q);
    bool is_initial(uint32_t q) const;
    bool is_final(uint32_t q) const;
};

// Constructors for the basic languages.
Nfa empty_lang();
Nfa epsilon_lang();
Nfa singleton(const Word& w);
Nfa universal(const Alphabet& alpha); // all words over the alphabet
Nfa char_class_lang(const CharSet& cs);

// Thompson construction. Intersection nodes become products; complement nodes
// determinize with the default state cap and may throw StateCapExceeded.
// Throws AlphabetMismatch when a literal or class leaves the alphabet.
Nfa compile_regex(const RegexAst& ast, const Alphabet& alpha);

// Language operations. Results are trimmed (only states on some
// initial-to-final path survive) but never minimized.
Nfa intersect(const Nfa& a, const Nfa& b);
Nfa union_lang(const Nfa& a, const Nfa& b);
Nfa concat_lang(const Nfa& a, const Nfa& b);
Nfa reverse_lang(const Nfa& a);
// Subset construction, complete over the alphabet; `capped` reports that the
// cap was hit before the construction finished (the partial result is
// meaningless then).
struct Determinized {
    Nfa dfa;
    bool capped = false;
};
Determinized determinize(const Nfa& a, const Alphabet& alpha, size_t state_cap = kDefaultStateCap);
// Throws StateCapExceeded when determinization overflows the cap.
Nfa complement(const Nfa& a, const Alphabet& alpha, size_t state_cap = kDefaultStateCap);

// Absent result means the language is empty; otherwise the witness is the
// shortest member, ties broken by smallest codepoint left to right.
std::optional<Word> is_empty(const Nfa& a);

bool accepts(const Nfa& a, const Word& w);

// All members of length <= max_len, shortest first, lexicographic within a
// length. Intended for small languages; use for_each_word_of_length to
// stream.
std::vector<Word> enumerate(const Nfa& a, size_t max_len);

// Streams accepted words of exactly `len` in lexicographic order until the
// callback returns false. Returns false iff the callback stopped the walk.
bool for_each_word_of_length(const Nfa& a, size_t len,
                             const std::function<bool(const Word&)>& fn);

// achievable[l] == true iff the language has a member of length l.
std::vector<bool> achievable_lengths(const Nfa& a, size_t max_len);

// Decides L(b) subseteq L(a). `capped` means the complement of `a` overflowed
// the state cap and nothing was decided.
struct Inclusion {
    enum class Verdict { yes, no, capped };
    Verdict verdict = Verdict::capped;
    std::optional<Word> counterexample; // shortest, for Verdict::no
};
Inclusion includes(const Nfa& a, const Nfa& b, const Alphabet& alpha,
                   size_t state_cap = kDefaultStateCap);

// Structural helpers shared by the function layer.
Nfa remove_epsilon(const Nfa& a);      // language-preserving, no trimming
Nfa trim(const Nfa& a);                // drop states off every accepting path
Nfa ensure_single_initial(const Nfa& a); // epsilon-free in, epsilon-free out

// The unique member if the language is a singleton, otherwise absent.
std::optional<Word> as_singleton(const Nfa& a);
// True when the language is all of alpha*, decided via inclusion (capped
// counts as false).
bool is_universal_lang(const Nfa& a, const Alphabet& alpha,
                       size_t state_cap = kDefaultStateCap);

} // namespace rcp

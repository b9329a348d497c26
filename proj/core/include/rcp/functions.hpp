#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rcp/nfa.hpp"
#include "rcp/vars.hpp"

namespace rcp {

// Right-hand side of an equational constraint: a word built from variables
// and constant segments, e.g. x . "-" . y . x. Variables may repeat.
struct ConcatTerm {
    using Item = std::variant<VarId, Word>;
    std::vector<Item> items;

    // Distinct variables in order of first occurrence; this fixes the arity
    // and the slot order of images and preimages.
    std::vector<VarId> distinct_vars() const;
    // True when no variable occurs twice.
    bool vars_linear() const;
};

// replaceAll with constant pattern and replacement, SMT-LIB semantics:
// leftmost, non-overlapping, empty pattern means identity.
struct ReplaceAllConst {
    Word pattern;
    Word replacement;
};

struct ReverseFn {};

// Rational transducer. Each rule consumes one codepoint from `input` (or
// nothing when input is absent) and emits either a fixed word or a copy of
// the consumed codepoint. Copy rules require an input label; they keep
// letter-to-letter machines small over large alphabets.
struct Transducer {
    struct Output {
        bool copy = false;
        Word text; // ignored when copy is set
    };
    struct Rule {
        uint32_t src;
        std::optional<CharSet> input; // absent = epsilon move
        Output out;
        uint32_t dst;
    };

    uint32_t num_states = 0;
    std::vector<uint32_t> initial;
    std::vector<uint32_t> final;
    std::vector<Rule> rules;

    uint32_t add_state() { return num_states++; }
    // Throws MalformedTransducer on out-of-range states, empty initial/final
    // sets or copy rules without an input label.
    void validate() const;
};

// The four function kinds propagation understands.
struct StringFunction {
    std::variant<ConcatTerm, ReplaceAllConst, ReverseFn, Transducer> fn;

    bool is_concat() const { return std::holds_alternative<ConcatTerm>(fn); }
    const ConcatTerm* concat() const { return std::get_if<ConcatTerm>(&fn); }
    // Number of argument slots: distinct variables for concat, 1 otherwise.
    size_t arity() const;
};

// Finite union of products of regular languages; the preimage shape.
// branches[k][i] constrains argument slot i in branch k.
struct RecognizableRel {
    size_t arity = 0;
    std::vector<std::vector<Nfa>> branches;
};

// Applies the function to concrete arguments (one word per slot, repeats
// share the slot value). Throws NotInDomain when a transducer has no
// accepting run and NotFunctional when it has runs with different outputs.
Word evaluate(const StringFunction& f, std::span<const Word> args);

// True when the image of regular languages under f is regular and we can
// build it: every kind except concat terms with a repeated variable.
bool is_forwardable(const StringFunction& f);

// True when the preimage of a regular language under f is a recognizable
// relation. Holds for every supported kind, including repeated-variable
// concat terms; kept as a named check so callers mirror the flow rules.
inline bool is_backwardable(const StringFunction&) { return true; }

// Image of the argument languages, one per slot in distinct_vars order.
// Throws NotForwardable when is_forwardable is false.
Nfa forward_image(const StringFunction& f, std::span<const Nfa> args, const Alphabet& alpha);

// Preimage of `out`: a recognizable relation over the argument slots.
// Branches with an empty component are pruned; repeated concat variables
// contribute the intersection of their segment languages.
RecognizableRel backward_preimage(const StringFunction& f, const Nfa& out, const Alphabet& alpha);

// Like backward_preimage but keeps branches whose intersected components are
// empty. Branch expansion in the calculus uses this so that contradictory
// branches show up as closable leaves instead of disappearing.
RecognizableRel backward_preimage_unpruned(const StringFunction& f, const Nfa& out,
                                           const Alphabet& alpha);

// Leftmost non-overlapping replacement as a transducer over `alpha`.
// Built on the pattern's failure function; pending partial matches are held
// back and flushed on mismatch or at the end of input.
Transducer compile_replaceall(const ReplaceAllConst& f, const Alphabet& alpha);

// Output language of the transducer on a single input word (used by
// evaluate and handy for tests).
Nfa transducer_outputs(const Transducer& t, const Word& input);

} // namespace rcp

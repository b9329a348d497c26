#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rcp/functions.hpp"
#include "rcp/nfa.hpp"
#include "rcp/vars.hpp"

namespace rcp {

// One equation x = f(x1, ..., xn). rhs_vars lists the argument slots in
// order; for concat terms it must equal the term's distinct variables.
struct EquationalConstraint {
    VarId lhs;
    StringFunction rhs;
    std::vector<VarId> rhs_vars;
    uint32_t id = 0;
};

// Builds an equation, deriving rhs_vars for concat terms and validating the
// slot count otherwise. Throws Error on arity mismatch.
EquationalConstraint make_equation(uint32_t id, VarId lhs, StringFunction rhs,
                                   std::vector<VarId> rhs_vars = {});

// A propagation step: push constraints through equation `eq` either from the
// arguments onto the left-hand side (fwd) or the other way (bwd).
enum class PropDir { fwd, bwd };

struct PropRule {
    uint32_t eq = 0;
    PropDir dir = PropDir::fwd;
    friend auto operator<=>(const PropRule&, const PropRule&) = default;
};

// A node state in the proof system: one running regular constraint per
// variable (absent means unconstrained) plus the immutable equation list.
// Copies are cheap; the automata and the equation list are shared.
struct Sequent {
    std::shared_ptr<const VarTable> vars;
    Alphabet alpha = Alphabet::unicode();
    std::shared_ptr<const std::vector<EquationalConstraint>> equations;
    std::map<VarId, std::shared_ptr<const Nfa>> constraints;
    bool closed = false;

    const std::vector<EquationalConstraint>& eqs() const { return *equations; }
    const EquationalConstraint& eq(uint32_t id) const;
    bool has_constraint(VarId x) const { return constraints.count(x) != 0; }
};

// Makes the root sequent. Constraint map entries replace the implicit
// universal language.
Sequent make_sequent(std::shared_ptr<const VarTable> vars, Alphabet alpha,
                     std::vector<EquationalConstraint> equations);

// The variable's current language; universal when unconstrained.
Nfa constraint_of(const Sequent& s, VarId x);

// Intersects `a` onto x's constraint. `changed` is true unless the language
// provably stayed the same (two-sided inclusion; a hit on the state cap
// conservatively reports changed). Unchanged additions leave the stored
// automaton object alone. Throws LeafClosed on closed sequents and
// StateCapExceeded when the automaton to store has more than state_cap
// states.
std::pair<Sequent, bool> add_constraint(const Sequent& s, VarId x, const Nfa& a,
                                        size_t state_cap = kDefaultStateCap);

// If some variable's language is empty, returns it with the closed sequent.
std::optional<std::pair<VarId, Sequent>> try_close(const Sequent& s);

// Pushes the image of the argument constraints onto the lhs. Throws
// NotForwardable when the rhs repeats a variable, LeafClosed when closed.
std::pair<Sequent, bool> apply_fwd(const Sequent& s, uint32_t eq_id,
                                   size_t state_cap = kDefaultStateCap);

// Splits on the preimage of the lhs constraint: one child per branch, each
// intersecting its components onto the argument variables. An empty result
// means the preimage relation itself is empty; the caller closes by adding
// the empty language to the lhs.
std::vector<std::pair<Sequent, bool>> apply_bwd(const Sequent& s, uint32_t eq_id,
                                                size_t state_cap = kDefaultStateCap);

} // namespace rcp

#include "rcp/sequent.hpp"

#include <algorithm>

#include "rcp/errors.hpp"

namespace rcp {

EquationalConstraint make_equation(uint32_t id, VarId lhs, StringFunction rhs,
                                   std::vector<VarId> rhs_vars) {
    EquationalConstraint eq;
    eq.id = id;
    eq.lhs = lhs;
    if (const ConcatTerm* term = rhs.concat()) {
        auto expect = term->distinct_vars();
        if (!rhs_vars.empty() && rhs_vars != expect)
            throw Error("equation argument list does not match the concat term");
        eq.rhs_vars = std::move(expect);
    } else {
        if (rhs_vars.size() != 1)
            throw Error("unary function equation needs exactly one argument variable");
        eq.rhs_vars = std::move(rhs_vars);
    }
    eq.rhs = std::move(rhs);
    return eq;
}

const EquationalConstraint& Sequent::eq(uint32_t id) const {
    for (const auto& e : *equations)
        if (e.id == id) return e;
    throw Error("unknown equation id");
}

Sequent make_sequent(std::shared_ptr<const VarTable> vars, Alphabet alpha,
                     std::vector<EquationalConstraint> equations) {
    Sequent s;
    s.vars = std::move(vars);
    s.alpha = std::move(alpha);
    s.equations =
        std::make_shared<const std::vector<EquationalConstraint>>(std::move(equations));
    return s;
}

Nfa constraint_of(const Sequent& s, VarId x) {
    auto it = s.constraints.find(x);
    if (it == s.constraints.end()) return universal(s.alpha);
    return *it->second;
}

std::pair<Sequent, bool> add_constraint(const Sequent& s, VarId x, const Nfa& a,
                                        size_t state_cap) {
    if (s.closed) throw LeafClosed("sequent is closed");
    Sequent next = s;
    auto it = s.constraints.find(x);
    if (it == s.constraints.end()) {
        // First constraint on x. A provably universal language carries no
        // information; leaving the variable unconstrained keeps the sequent
        // untouched on no-op additions.
        Nfa lang = trim(a);
        if (lang.num_states > state_cap)
            throw StateCapExceeded("constraint automaton has " +
                                   std::to_string(lang.num_states) + " states, cap is " +
                                   std::to_string(state_cap));
        if (is_universal_lang(lang, s.alpha, state_cap)) return {std::move(next), false};
        next.constraints[x] = std::make_shared<const Nfa>(std::move(lang));
        return {std::move(next), true};
    }
    const Nfa& old = *it->second;
    Nfa merged = intersect(old, a);
    if (merged.num_states > state_cap)
        throw StateCapExceeded("intersection grew to " + std::to_string(merged.num_states) +
                               " states, cap is " + std::to_string(state_cap));
    // The merge can only shrink, so equality reduces to old being a subset of
    // the merge. A capped comparison counts as changed. Unchanged additions
    // keep the existing automaton object: the machines stay small across
    // repeated no-op steps and callers can detect stability by identity.
    bool changed = includes(merged, old, s.alpha, state_cap).verdict != Inclusion::Verdict::yes;
    if (changed) next.constraints[x] = std::make_shared<const Nfa>(std::move(merged));
    return {std::move(next), changed};
}

std::optional<std::pair<VarId, Sequent>> try_close(const Sequent& s) {
    for (const auto& [x, lang] : s.constraints) {
        if (is_empty(*lang).has_value()) continue;
        Sequent closed = s;
        closed.closed = true;
        return std::pair{x, std::move(closed)};
    }
    return std::nullopt;
}

std::pair<Sequent, bool> apply_fwd(const Sequent& s, uint32_t eq_id, size_t state_cap) {
    if (s.closed) throw LeafClosed("sequent is closed");
    const EquationalConstraint& eq = s.eq(eq_id);
    if (!is_forwardable(eq.rhs)) throw NotForwardable("right-hand side repeats a variable");
    std::vector<Nfa> args;
    args.reserve(eq.rhs_vars.size());
    for (VarId v : eq.rhs_vars) args.push_back(constraint_of(s, v));
    Nfa img = forward_image(eq.rhs, args, s.alpha);
    return add_constraint(s, eq.lhs, img, state_cap);
}

std::vector<std::pair<Sequent, bool>> apply_bwd(const Sequent& s, uint32_t eq_id,
                                                size_t state_cap) {
    if (s.closed) throw LeafClosed("sequent is closed");
    const EquationalConstraint& eq = s.eq(eq_id);
    Nfa lhs_lang = constraint_of(s, eq.lhs);
    RecognizableRel rel = backward_preimage_unpruned(eq.rhs, lhs_lang, s.alpha);
    std::vector<std::pair<Sequent, bool>> children;
    children.reserve(rel.branches.size());
    for (const auto& branch : rel.branches) {
        Sequent child = s;
        bool changed = false;
        for (size_t i = 0; i < eq.rhs_vars.size(); ++i) {
            auto [next, ch] = add_constraint(child, eq.rhs_vars[i], branch[i], state_cap);
            child = std::move(next);
            changed = changed || ch;
        }
        children.emplace_back(std::move(child), changed);
    }
    return children;
}

} // namespace rcp

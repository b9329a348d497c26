#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "rcp/ordering.hpp"
#include "rcp/proof.hpp"

namespace rcp {

using Model = std::map<VarId, Word>;

struct Budgets {
    std::chrono::milliseconds wall_time{60000};
    uint64_t max_expansions = 100000;
    size_t max_model_total_len = 4096; // enumeration stops at this total assignment length
    size_t nfa_state_cap = kDefaultStateCap;
};

// Factor weights for priority scheduling. The cost term is measured per 100
// automaton states so the default magnitudes stay comparable.
struct PriorityWeights {
    double w_concrete = 100.0;
    double w_info_gain = 50.0;
    double w_exactness = 50.0; // inert: every supported image is exact
    double w_cost = 1.0;
    double w_fairness = 10.0;
};

// Counters a solve run accumulates; the CLI emits them as JSON.
struct SearchStats {
    uint64_t expansions = 0;
    uint64_t closes = 0;
    uint64_t fwd_images = 0;
    uint64_t bwd_images = 0;
    uint64_t enumeration_attempts = 0;
    size_t peak_states = 0; // largest constraint automaton seen
    int64_t elapsed_ms = 0;
    std::string strategy;

    std::string to_json() const;
};

struct SolveResult {
    enum class Verdict { sat, unsat, unknown };
    Verdict verdict = Verdict::unknown;

    // sat: the assignment, flagged verified when verify_model accepted it
    // against the original sequent. Unverified models come from surviving
    // branches of an ordered run, which guarantee satisfiability without
    // yielding a checkable witness.
    Model model;
    bool model_verified = false;

    std::optional<ProofTree> tree; // the closed proof for unsat; final tree otherwise
    std::string reason;            // unknown only
    SearchStats stats;
};

// True iff every regular constraint accepts its value and every equation
// evaluates to the assigned lhs. The model must cover all table variables.
bool verify_model(const Sequent& original, const Model& m);

// Brute-force model search: total assignment length 0..max_total, length
// tuples in declaration order, words of a given length in lexicographic
// order. Candidates come from the (propagation-tightened) hint languages,
// but acceptance is decided by verify_model against `original` only. The
// first passing assignment in this order is returned.
std::optional<Model> enumerate_models(
    const Sequent& original, const Sequent& hints, size_t max_total,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Weighted preference for applying `r` at `leaf`: rewards singleton
// constants among the involved languages, penalizes backward steps from a
// universal source and large automata, and grows with the rule's clock.
double priority_score(const Sequent& leaf, const PropRule& r, uint32_t clock,
                      const PriorityWeights& w);

// Called after every expansion with the updated tree and the step taken;
// absent action means a Close step. Used by tests to record traces.
using StepObserver =
    std::function<void(const ProofTree&, uint32_t leaf, const std::optional<PropRule>&)>;

// Runs the flow sequence start to finish, applying each step to every open
// branch and closing eagerly in between. A closed tree is unsat; surviving
// open branches prove satisfiability, and a model is reconstructed by
// enumeration where feasible (verified=false when not). Throws FlowMismatch
// when the flow does not cover the sequent's equations.
SolveResult solve_ordered(const Sequent& root, const FlowSequence& flow, const Budgets& b);

// Clock-driven fair search: prefers the (leaf, rule) pair with the highest
// propagation clock, forced whenever a clock sits at its bound. Declares sat
// only through a verified enumerated model.
SolveResult solve_fair(const Sequent& root, const Budgets& b, const StepObserver& observer = {});

// Like solve_fair but choosing by priority_score; the fairness bounds still
// preempt scores.
SolveResult solve_priority(const Sequent& root, const Budgets& b,
                           const PriorityWeights& w = {}, const StepObserver& observer = {});

enum class Strategy { automatic, ordered, fair, priority };

// automatic = run marking, orderable inputs go to solve_ordered, the rest to
// solve_priority. Requesting ordered on a non-orderable input is unknown.
SolveResult solve(const Sequent& root, const Budgets& b, Strategy strategy = Strategy::automatic,
                  const PriorityWeights& w = {});

} // namespace rcp

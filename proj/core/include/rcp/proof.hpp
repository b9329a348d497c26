#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcp/sequent.hpp"

namespace rcp {

enum class RuleKind { none, fwd, bwd, close };

// Edge label: how a node was derived from its parent. Backward steps carry
// their branch position; branch_count 0 marks the synthesized child of an
// empty preimage relation (the one that gets the empty language on the lhs).
struct RuleLabel {
    RuleKind kind = RuleKind::none;
    uint32_t eq = 0;
    uint32_t branch = 0;
    uint32_t branch_count = 0;
};

struct ProofNode {
    Sequent seq;
    int32_t parent = -1;
    RuleLabel label;
    std::vector<uint32_t> children;
    bool is_bot = false;   // dead end appended by a Close expansion
    bool changed = false;  // whether the creating step shrank any language

    // Leaf annotations. Meaningful while the node is an open leaf; clocks
    // saturate at their ceiling so bounded-fairness triggers stay bounded.
    std::map<PropRule, uint32_t> prop_clocks;
    uint32_t branch_clock = 0;
    uint32_t branch_bound = 1; // open-leaf count when this leaf appeared
};

struct ProofTree {
    std::vector<ProofNode> nodes;
    uint32_t prop_ceiling = 0;         // 2 * number of equations
    std::vector<uint32_t> open_leaves; // ascending ids

    const ProofNode& node(uint32_t id) const { return nodes[id]; }
    bool is_open_leaf(uint32_t id) const;
    bool closed() const { return open_leaves.empty(); }
};

// Single-node tree holding the root sequent; every propagation rule starts
// with clock 0 (fwd entries only for forwardable equations).
ProofTree make_tree(Sequent root);

struct Expansion {
    ProofTree tree;
    std::vector<uint32_t> children; // ids of the nodes the step appended
};

// Applies one rule to an open leaf and returns the grown tree. An absent
// action closes the leaf (requires an empty constraint) and appends the dead
// end. Propagation children reset the applied rule's clock, bump every other
// clock, and start with branch clock 0; all remaining open leaves get their
// branch clocks bumped. Close leaves annotations elsewhere untouched.
// Throws LeafClosed when `leaf` is not an open leaf.
Expansion expand(ProofTree tree, uint32_t leaf, const std::optional<PropRule>& action,
                 size_t state_cap = kDefaultStateCap);

// Deterministic DOT rendering; node ids are preorder positions, labels
// summarize each variable's language (empty, singleton word, state count).
std::string export_dot(const ProofTree& tree);

// Bounded replay of a finished tree: Close edges need an empty constraint,
// propagation edges are checked for bounded exactness against evaluate() on
// words up to `bound` (languages sampled breadth-first, 512 words each).
// Checks that never enumerate past their caps are exact at the bound;
// truncated enumerations only catch, never prove, a defect. Returns false
// and fills `diagnostic` on the first mismatch.
bool validate_proof(const ProofTree& tree, size_t bound, std::string* diagnostic = nullptr);

} // namespace rcp

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcp/sequent.hpp"

namespace rcp {

// A complete propagation schedule: every equation appears exactly once.
struct FlowSequence {
    std::vector<PropRule> steps;
};

// Tries to order the equations by repeatedly marking variables that occur
// exactly once across the remaining equations (each concat slot counts as an
// occurrence) and eliminating equations whose marked side admits the matching
// propagation. Succeeds iff everything is eliminated.
std::optional<FlowSequence> marking(const std::vector<EquationalConstraint>& eqs);

// Same loop restricted to eliminations through the left-hand side; the
// fragment solvable by backward steps alone.
bool is_straight_line(const std::vector<EquationalConstraint>& eqs);

// Dependency graph over term positions used as the independent orderability
// oracle. Nodes are the variable positions of each equation side; there is
// an edge p -> q when some other position opposite p shares q's variable.
struct SplittingGraph {
    struct Node {
        uint32_t eq;    // equation id
        bool lhs;       // which side of the equation
        uint32_t pos;   // position within the side's term
        VarId label;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
};

// Throws UnsupportedFunction for equations whose rhs is not a concat term or
// a (compilable) transducer; reverse has no such graph.
SplittingGraph build_splitting_graph(const std::vector<EquationalConstraint>& eqs);

// Directed cycle detection.
bool has_chain(const SplittingGraph& g);

// Combined fragment classification plus the JSON shape the CLI prints.
struct OrderReport {
    std::optional<FlowSequence> flow;       // present iff orderable
    std::vector<uint32_t> stuck_equations;  // remaining ids when not orderable
    bool straight_line = false;
    enum class ChainFree { yes, no, not_applicable } chain_free = ChainFree::not_applicable;

    bool orderable() const { return flow.has_value(); }
    std::string to_json() const;
};

OrderReport analyze_order(const std::vector<EquationalConstraint>& eqs);

} // namespace rcp

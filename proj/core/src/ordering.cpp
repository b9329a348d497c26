#include "rcp/ordering.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

// Occurrences of a variable within one equation; a variable repeated in a
// concat term is counted once per slot it fills.
void count_occurrences(const EquationalConstraint& eq, std::map<VarId, uint32_t>& counts) {
    counts[eq.lhs] += 1;
    if (const ConcatTerm* term = eq.rhs.concat()) {
        for (const auto& item : term->items)
            if (const VarId* v = std::get_if<VarId>(&item)) counts[*v] += 1;
    } else {
        for (VarId v : eq.rhs_vars) counts[v] += 1;
    }
}

struct MarkingRun {
    std::vector<PropRule> flow;
    std::vector<uint32_t> remaining; // equation ids left unordered
};

MarkingRun run_marking(const std::vector<EquationalConstraint>& eqs, bool bwd_only) {
    std::vector<const EquationalConstraint*> remaining;
    for (const auto& eq : eqs) remaining.push_back(&eq);
    std::set<VarId> marked;
    MarkingRun out;

    // Loop until a full pass neither marks nor removes anything. Equations
    // with constant-only right-hand sides are forwardable with zero marked
    // arguments, so removals alone count as progress.
    for (bool progress = true; progress;) {
        std::map<VarId, uint32_t> counts;
        for (const auto* eq : remaining) count_occurrences(*eq, counts);
        size_t before = marked.size();
        for (const auto& [v, n] : counts)
            if (n == 1) marked.insert(v);
        progress = marked.size() > before;

        for (auto it = remaining.begin(); it != remaining.end();) {
            const EquationalConstraint& eq = **it;
            if (marked.count(eq.lhs) && is_backwardable(eq.rhs)) {
                out.flow.push_back({eq.id, PropDir::bwd});
                it = remaining.erase(it);
                progress = true;
                continue;
            }
            bool all_args = std::all_of(eq.rhs_vars.begin(), eq.rhs_vars.end(),
                                        [&](VarId v) { return marked.count(v) != 0; });
            if (!bwd_only && all_args && is_forwardable(eq.rhs)) {
                out.flow.push_back({eq.id, PropDir::fwd});
                it = remaining.erase(it);
                progress = true;
                continue;
            }
            ++it;
        }
    }

    for (const auto* eq : remaining) out.remaining.push_back(eq->id);
    return out;
}

} // namespace

std::optional<FlowSequence> marking(const std::vector<EquationalConstraint>& eqs) {
    MarkingRun run = run_marking(eqs, false);
    if (!run.remaining.empty()) return std::nullopt;
    return FlowSequence{std::move(run.flow)};
}

bool is_straight_line(const std::vector<EquationalConstraint>& eqs) {
    return run_marking(eqs, true).remaining.empty();
}

SplittingGraph build_splitting_graph(const std::vector<EquationalConstraint>& eqs) {
    SplittingGraph g;
    // Sides are (eq, lhs) and (eq, rhs); positions hold only variables,
    // constant slots cannot take part in any cycle.
    for (const auto& eq : eqs) {
        if (std::holds_alternative<ReverseFn>(eq.rhs.fn))
            throw UnsupportedFunction("reverse equations have no splitting graph");
        g.nodes.push_back({eq.id, true, 0, eq.lhs});
        if (const ConcatTerm* term = eq.rhs.concat()) {
            uint32_t pos = 0;
            for (const auto& item : term->items) {
                if (const VarId* v = std::get_if<VarId>(&item))
                    g.nodes.push_back({eq.id, false, pos, *v});
                ++pos;
            }
        } else {
            g.nodes.push_back({eq.id, false, 0, eq.rhs_vars[0]});
        }
    }

    for (uint32_t p = 0; p < g.nodes.size(); ++p) {
        const auto& np = g.nodes[p];
        for (uint32_t q = 0; q < g.nodes.size(); ++q) {
            bool found = false;
            for (uint32_t pp = 0; pp < g.nodes.size() && !found; ++pp) {
                if (pp == q) continue;
                const auto& opp = g.nodes[pp];
                if (opp.eq == np.eq && opp.lhs != np.lhs && opp.label == g.nodes[q].label)
                    found = true;
            }
            if (found) g.edges.push_back({p, q});
        }
    }
    return g;
}

bool has_chain(const SplittingGraph& g) {
    std::vector<std::vector<uint32_t>> adj(g.nodes.size());
    for (auto [p, q] : g.edges) adj[p].push_back(q);
    // Iterative three-color DFS.
    std::vector<uint8_t> color(g.nodes.size(), 0);
    for (uint32_t start = 0; start < g.nodes.size(); ++start) {
        if (color[start]) continue;
        std::vector<std::pair<uint32_t, size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < adj[node].size()) {
                uint32_t to = adj[node][next++];
                if (color[to] == 1) return true;
                if (color[to] == 0) {
                    color[to] = 1;
                    stack.push_back({to, 0});
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

OrderReport analyze_order(const std::vector<EquationalConstraint>& eqs) {
    OrderReport report;
    MarkingRun run = run_marking(eqs, false);
    if (run.remaining.empty())
        report.flow = FlowSequence{std::move(run.flow)};
    else
        report.stuck_equations = std::move(run.remaining);
    report.straight_line = is_straight_line(eqs);
    try {
        report.chain_free = has_chain(build_splitting_graph(eqs))
                                ? OrderReport::ChainFree::no
                                : OrderReport::ChainFree::yes;
    } catch (const UnsupportedFunction&) {
        report.chain_free = OrderReport::ChainFree::not_applicable;
    }
    return report;
}

std::string OrderReport::to_json() const {
    nlohmann::json j;
    j["orderable"] = orderable();
    if (flow) {
        nlohmann::json steps = nlohmann::json::array();
        for (const PropRule& r : flow->steps)
            steps.push_back({{"eq", r.eq}, {"dir", r.dir == PropDir::fwd ? "fwd" : "bwd"}});
        j["flow"] = std::move(steps);
    } else {
        j["stuck_equations"] = stuck_equations;
    }
    j["straight_line"] = straight_line;
    switch (chain_free) {
    case ChainFree::yes:
        j["chain_free"] = true;
        break;
    case ChainFree::no:
        j["chain_free"] = false;
        break;
    case ChainFree::not_applicable:
        j["chain_free"] = "not-applicable";
        break;
    }
    return j.dump(2);
}

} // namespace rcp

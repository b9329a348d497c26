#include "rcp/proof.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

// Breadth cap for every language sampled during validation.
constexpr size_t kValidateWordCap = 512;
// Cap on argument tuples per replayed propagation edge.
constexpr size_t kValidateTupleCap = 20000;

void bump_saturating(uint32_t& clock, uint32_t ceiling) {
    if (clock < ceiling) ++clock;
}

std::map<PropRule, uint32_t> child_clocks(const ProofNode& leaf, PropRule applied,
                                          uint32_t ceiling) {
    std::map<PropRule, uint32_t> next = leaf.prop_clocks;
    for (auto& [rule, clock] : next) {
        if (rule == applied)
            clock = 0;
        else
            bump_saturating(clock, ceiling);
    }
    return next;
}

void remove_leaf(std::vector<uint32_t>& leaves, uint32_t id) {
    leaves.erase(std::remove(leaves.begin(), leaves.end(), id), leaves.end());
}

} // namespace

bool ProofTree::is_open_leaf(uint32_t id) const {
    return std::binary_search(open_leaves.begin(), open_leaves.end(), id);
}

ProofTree make_tree(Sequent root) {
    ProofTree t;
    ProofNode n;
    for (const auto& eq : root.eqs()) {
        n.prop_clocks[{eq.id, PropDir::bwd}] = 0;
        if (is_forwardable(eq.rhs)) n.prop_clocks[{eq.id, PropDir::fwd}] = 0;
    }
    t.prop_ceiling = uint32_t(2 * root.eqs().size());
    n.seq = std::move(root);
    t.nodes.push_back(std::move(n));
    t.open_leaves = {0};
    return t;
}

Expansion expand(ProofTree tree, uint32_t leaf, const std::optional<PropRule>& action,
                 size_t state_cap) {
    if (leaf >= tree.nodes.size() || !tree.is_open_leaf(leaf)) throw LeafClosed("node is not an open leaf");
    ProofNode& at = tree.nodes[leaf];
    Expansion result;

    if (!action) {
        auto closed = try_close(at.seq);
        if (!closed) throw Error("close step needs an empty constraint");
        ProofNode bot;
        bot.seq = std::move(closed->second);
        bot.parent = int32_t(leaf);
        bot.label = {RuleKind::close, 0, 0, 0};
        bot.is_bot = true;
        bot.branch_bound = 0;
        uint32_t id = uint32_t(tree.nodes.size());
        at.children.push_back(id);
        tree.nodes.push_back(std::move(bot));
        remove_leaf(tree.open_leaves, leaf);
        result.children = {id};
        result.tree = std::move(tree);
        return result;
    }

    // Propagation step: build the child sequents first.
    std::vector<std::pair<Sequent, bool>> steps;
    std::vector<RuleLabel> labels;
    if (action->dir == PropDir::fwd) {
        steps.push_back(apply_fwd(at.seq, action->eq, state_cap));
        labels.push_back({RuleKind::fwd, action->eq, 1, 1});
    } else {
        steps = apply_bwd(at.seq, action->eq, state_cap);
        if (steps.empty()) {
            // Empty preimage relation: the lhs cannot take any value, which
            // is expressed by intersecting it with the empty language.
            VarId lhs = at.seq.eq(action->eq).lhs;
            steps.push_back(add_constraint(at.seq, lhs, empty_lang(), state_cap));
            labels.push_back({RuleKind::bwd, action->eq, 0, 0});
        } else {
            for (uint32_t i = 0; i < steps.size(); ++i)
                labels.push_back({RuleKind::bwd, action->eq, i + 1, uint32_t(steps.size())});
        }
    }

    auto clocks = child_clocks(at, *action, tree.prop_ceiling);
    std::vector<uint32_t> fresh;
    for (size_t i = 0; i < steps.size(); ++i) {
        ProofNode child;
        child.seq = std::move(steps[i].first);
        child.changed = steps[i].second;
        child.parent = int32_t(leaf);
        child.label = labels[i];
        child.prop_clocks = clocks;
        child.branch_clock = 0;
        uint32_t id = uint32_t(tree.nodes.size());
        tree.nodes[leaf].children.push_back(id);
        tree.nodes.push_back(std::move(child));
        fresh.push_back(id);
    }

    remove_leaf(tree.open_leaves, leaf);
    for (uint32_t other : tree.open_leaves) {
        ProofNode& n = tree.nodes[other];
        bump_saturating(n.branch_clock, n.branch_bound);
    }
    tree.open_leaves.insert(tree.open_leaves.end(), fresh.begin(), fresh.end());
    std::sort(tree.open_leaves.begin(), tree.open_leaves.end());
    uint32_t bound = uint32_t(tree.open_leaves.size());
    for (uint32_t id : fresh) tree.nodes[id].branch_bound = bound;

    result.children = std::move(fresh);
    result.tree = std::move(tree);
    return result;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

std::string summarize(const Sequent& s) {
    std::string text;
    for (const auto& [x, lang] : s.constraints) {
        if (!text.empty()) text.push_back('\n');
        text += s.vars->name(x);
        auto witness = is_empty(*lang);
        if (!witness) {
            text += " = {}";
        } else if (auto w = as_singleton(*lang)) {
            text += " = \"" + to_utf8(*w) + "\"";
        } else {
            text += ": " + std::to_string(lang->num_states) + " states";
        }
    }
    if (text.empty()) text = "(unconstrained)";
    return text;
}

std::string rule_name(const RuleLabel& l) {
    switch (l.kind) {
    case RuleKind::close:
        return "Close";
    case RuleKind::fwd:
        return "Fwd-Prop eq" + std::to_string(l.eq);
    case RuleKind::bwd: {
        std::string s = "Bwd-Prop eq" + std::to_string(l.eq);
        if (l.branch_count == 0) return s + " [empty]";
        return s + " [" + std::to_string(l.branch) + "/" + std::to_string(l.branch_count) + "]";
    }
    default:
        return "";
    }
}

} // namespace

std::string export_dot(const ProofTree& tree) {
    // Preorder ids keep the rendering stable no matter the expansion order.
    std::vector<int32_t> order(tree.nodes.size(), -1);
    std::vector<uint32_t> stack{0};
    int32_t next = 0;
    while (!stack.empty()) {
        uint32_t id = stack.back();
        stack.pop_back();
        order[id] = next++;
        const auto& kids = tree.nodes[id].children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }

    std::ostringstream out;
    out << "digraph proof {\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    std::vector<uint32_t> by_order(tree.nodes.size());
    for (uint32_t id = 0; id < tree.nodes.size(); ++id)
        if (order[id] >= 0) by_order[size_t(order[id])] = id;
    for (uint32_t pos = 0; pos < by_order.size(); ++pos) {
        const ProofNode& n = tree.nodes[by_order[pos]];
        std::string label = n.is_bot ? "unsat" : summarize(n.seq);
        out << "  n" << pos << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    for (uint32_t pos = 0; pos < by_order.size(); ++pos) {
        const ProofNode& n = tree.nodes[by_order[pos]];
        for (uint32_t kid : n.children) {
            out << "  n" << pos << " -> n" << order[kid] << " [label=\""
                << dot_escape(rule_name(tree.nodes[kid].label)) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

namespace {

struct Fail {
    std::string why;
};

std::vector<Word> sample(const Nfa& lang, size_t max_len, bool* truncated) {
    std::vector<Word> words;
    for (size_t len = 0; len <= max_len && words.size() < kValidateWordCap; ++len) {
        bool full = for_each_word_of_length(lang, len, [&](const Word& w) {
            words.push_back(w);
            return words.size() < kValidateWordCap;
        });
        if (!full) {
            *truncated = true;
            break;
        }
    }
    return words;
}

// Iterates tuples over the sampled slot languages; returns false when the
// tuple cap stopped the walk early.
bool for_each_tuple(const std::vector<std::vector<Word>>& slots,
                    const std::function<bool(const std::vector<Word>&)>& fn) {
    size_t k = slots.size();
    std::vector<Word> tuple(k);
    if (std::any_of(slots.begin(), slots.end(), [](const auto& s) { return s.empty(); }))
        return true;
    std::vector<size_t> idx(k, 0);
    size_t count = 0;
    for (;;) {
        for (size_t i = 0; i < k; ++i) tuple[i] = slots[i][idx[i]];
        if (++count > kValidateTupleCap) return false;
        if (!fn(tuple)) return true;
        size_t i = 0;
        for (; i < k; ++i) {
            if (++idx[i] < slots[i].size()) break;
            idx[i] = 0;
        }
        if (i == k) return true;
    }
}

bool same_language(const Nfa& a, const Nfa& b, const Alphabet& alpha) {
    return includes(a, b, alpha).verdict == Inclusion::Verdict::yes &&
           includes(b, a, alpha).verdict == Inclusion::Verdict::yes;
}

// Variables whose constraint must be untouched by the step that produced
// `child` from `parent` (everything but the listed ones).
void check_untouched(const Sequent& parent, const Sequent& child,
                     const std::vector<VarId>& touched) {
    for (const auto& [x, lang] : child.constraints) {
        if (std::find(touched.begin(), touched.end(), x) != touched.end()) continue;
        auto it = parent.constraints.find(x);
        if (it == parent.constraints.end())
            throw Fail{"step invented a constraint on " + child.vars->name(x)};
        if (it->second == lang) continue; // shared snapshot
        if (!same_language(*it->second, *lang, child.alpha))
            throw Fail{"step modified bystander variable " + child.vars->name(x)};
    }
    for (const auto& [x, lang] : parent.constraints)
        if (!child.constraints.count(x))
            throw Fail{"step dropped the constraint on " + parent.vars->name(x)};
}

void check_close(const ProofNode& parent) {
    for (const auto& [x, lang] : parent.seq.constraints)
        if (!is_empty(*lang).has_value()) return;
    throw Fail{"close step without an empty constraint"};
}

void check_fwd(const ProofNode& pnode, const ProofNode& cnode, uint32_t eq_id, size_t bound) {
    const Sequent& p = pnode.seq;
    const Sequent& c = cnode.seq;
    const EquationalConstraint& eq = p.eq(eq_id);
    check_untouched(p, c, {eq.lhs});

    Nfa p_lhs = constraint_of(p, eq.lhs);
    Nfa c_lhs = constraint_of(c, eq.lhs);

    bool truncated = false;
    std::vector<std::vector<Word>> slots;
    // Unary functions may shrink their input, so sample a little deeper than
    // the bound on that side.
    size_t arg_len = eq.rhs.is_concat() ? bound : bound + 4;
    for (VarId v : eq.rhs_vars) slots.push_back(sample(constraint_of(p, v), arg_len, &truncated));

    std::set<Word> realized;
    bool complete = for_each_tuple(slots, [&](const std::vector<Word>& t) {
        Word v;
        try {
            v = evaluate(eq.rhs, t);
        } catch (const NotInDomain&) {
            return true;
        } catch (const NotFunctional&) {
            throw Fail{"transducer is not functional on a sampled input"};
        }
        realized.insert(v);
        if (accepts(p_lhs, v) && !accepts(c_lhs, v))
            throw Fail{"image step lost the value \"" + to_utf8(v) + "\""};
        return true;
    });
    truncated = truncated || !complete;

    if (!truncated) {
        bool words_truncated = false;
        for (const Word& w : sample(c_lhs, bound, &words_truncated))
            if (!realized.count(w))
                throw Fail{"image step admits unreachable value \"" + to_utf8(w) + "\""};
    }
}

void check_bwd(const ProofNode& pnode, const std::vector<const ProofNode*>& children,
               uint32_t eq_id, size_t bound) {
    const Sequent& p = pnode.seq;
    const EquationalConstraint& eq = p.eq(eq_id);
    Nfa p_lhs = constraint_of(p, eq.lhs);

    bool empty_relation = children.size() == 1 && children[0]->label.branch_count == 0;
    for (const ProofNode* cn : children) {
        const Sequent& c = cn->seq;
        if (empty_relation) {
            check_untouched(p, c, {eq.lhs});
            if (is_empty(constraint_of(c, eq.lhs)).has_value())
                throw Fail{"empty-preimage step left the lhs nonempty"};
            continue;
        }
        check_untouched(p, c, eq.rhs_vars);
        // Tuples inside a branch must map into the parent's lhs language.
        bool truncated = false;
        std::vector<std::vector<Word>> slots;
        for (VarId v : eq.rhs_vars) slots.push_back(sample(constraint_of(c, v), bound, &truncated));
        for_each_tuple(slots, [&](const std::vector<Word>& t) {
            Word v;
            try {
                v = evaluate(eq.rhs, t);
            } catch (const NotInDomain&) {
                throw Fail{"preimage branch contains a tuple outside the domain"};
            } catch (const NotFunctional&) {
                throw Fail{"transducer is not functional on a sampled input"};
            }
            if (!accepts(p_lhs, v))
                throw Fail{"preimage branch admits tuple mapping to \"" + to_utf8(v) +
                           "\" outside the lhs language"};
            return true;
        });
    }

    // Every short tuple that maps into the lhs language must survive in some
    // branch; with an empty relation no such tuple may exist at all.
    bool truncated = false;
    std::vector<std::vector<Word>> slots;
    for (VarId v : eq.rhs_vars) slots.push_back(sample(constraint_of(p, v), bound, &truncated));
    for_each_tuple(slots, [&](const std::vector<Word>& t) {
        Word v;
        try {
            v = evaluate(eq.rhs, t);
        } catch (const NotInDomain&) {
            return true;
        } catch (const NotFunctional&) {
            throw Fail{"transducer is not functional on a sampled input"};
        }
        if (!accepts(p_lhs, v)) return true;
        if (empty_relation)
            throw Fail{"empty-preimage step but tuple mapping to \"" + to_utf8(v) +
                       "\" exists"};
        for (const ProofNode* cn : children) {
            bool all = true;
            for (size_t i = 0; i < eq.rhs_vars.size() && all; ++i)
                if (!accepts(constraint_of(cn->seq, eq.rhs_vars[i]), t[i])) all = false;
            if (all) return true;
        }
        throw Fail{"preimage step dropped a surviving tuple"};
    });
}

} // namespace

bool validate_proof(const ProofTree& tree, size_t bound, std::string* diagnostic) {
    auto fail = [&](const std::string& why) {
        if (diagnostic) *diagnostic = why;
        return false;
    };
    if (tree.nodes.empty()) return fail("empty tree");
    if (!tree.closed()) return fail("tree has open leaves");

    try {
        for (uint32_t id = 0; id < tree.nodes.size(); ++id) {
            const ProofNode& n = tree.nodes[id];
            if (n.children.empty() && !n.is_bot)
                throw Fail{"leaf " + std::to_string(id) + " is not a dead end"};
            if (n.seq.equations != tree.nodes[0].seq.equations)
                throw Fail{"equations changed along a branch"};
            if (n.children.empty()) continue;

            const RuleLabel& l = tree.nodes[n.children[0]].label;
            switch (l.kind) {
            case RuleKind::close:
                check_close(n);
                break;
            case RuleKind::fwd:
                check_fwd(n, tree.nodes[n.children[0]], l.eq, bound);
                break;
            case RuleKind::bwd: {
                std::vector<const ProofNode*> kids;
                for (uint32_t kid : n.children) kids.push_back(&tree.nodes[kid]);
                check_bwd(n, kids, l.eq, bound);
                break;
            }
            default:
                throw Fail{"unlabeled edge"};
            }
        }
    } catch (const Fail& f) {
        return fail(f.why);
    }
    return true;
}

} // namespace rcp

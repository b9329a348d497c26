#include "rcp/search.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <json.hpp>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

using SteadyClock = std::chrono::steady_clock;

// lhs plus argument variables, deduplicated; the set whose constraints a
// rule reads or writes.
std::vector<VarId> involved_vars(const EquationalConstraint& eq) {
    std::vector<VarId> vars{eq.lhs};
    for (VarId v : eq.rhs_vars)
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    return vars;
}

// ---- model enumeration ----

constexpr size_t kWordListCap = 65536; // candidates kept per (variable, length)

// Little-endian bitsets over totals 0..max; enough machinery for the
// subset-sum feasibility tables below.
using Bits = std::vector<uint64_t>;

Bits zero_bits(size_t nbits) { return Bits(nbits / 64 + 1, 0); }
void set_bit(Bits& b, size_t i) { b[i / 64] |= uint64_t(1) << (i % 64); }
bool test_bit(const Bits& b, size_t i) { return (b[i / 64] >> (i % 64)) & 1; }

// dst |= src << shift, truncated to dst's width.
void or_shifted(Bits& dst, const Bits& src, size_t shift) {
    size_t word = shift / 64, bit = shift % 64;
    for (size_t i = 0; i + word < dst.size() && i < src.size(); ++i) {
        dst[i + word] |= src[i] << bit;
        if (bit && i + word + 1 < dst.size()) dst[i + word + 1] |= src[i] >> (64 - bit);
    }
}

// Depth-first sweep over assignments ordered by total length, then by
// per-variable length tuples in declaration order, then lexicographically
// within each length. Candidate words come from the hint languages; the
// original sequent decides acceptance.
class ModelEnumerator {
public:
    ModelEnumerator(const Sequent& original, const Sequent& hints, size_t max_total,
                    std::optional<SteadyClock::time_point> deadline)
        : original_(original), max_total_(max_total), deadline_(deadline) {
        std::set<VarId> in_equations;
        for (const auto& eq : original.eqs()) {
            in_equations.insert(eq.lhs);
            in_equations.insert(eq.rhs_vars.begin(), eq.rhs_vars.end());
        }
        for (uint32_t i = 0; i < original.vars->size(); ++i) {
            VarId v{i};
            // A variable no constraint or equation mentions can take any
            // value; pin it to the empty word instead of enumerating.
            if (!hints.has_constraint(v) && !original.has_constraint(v) &&
                !in_equations.count(v)) {
                model_[v] = Word{};
                continue;
            }
            vars_.push_back(v);
            langs_.push_back(constraint_of(hints, v));
            lengths_.push_back(achievable_lengths(langs_.back(), max_total));
        }

        // feasible_[i] bit s: variables i.. can reach total length s.
        feasible_.assign(vars_.size() + 1, zero_bits(max_total + 1));
        set_bit(feasible_.back(), 0);
        for (size_t i = vars_.size(); i-- > 0;)
            for (size_t len = 0; len <= max_total; ++len)
                if (lengths_[i][len]) or_shifted(feasible_[i], feasible_[i + 1], len);
    }

    std::optional<Model> run() {
        if (vars_.empty())
            return verify_model(original_, model_) ? std::optional<Model>(model_)
                                                   : std::nullopt;
        for (size_t total = 0; total <= max_total_; ++total) {
            if (!test_bit(feasible_.front(), total)) continue;
            if (assign(0, total)) return model_;
            if (timed_out_) return std::nullopt;
        }
        return std::nullopt;
    }

private:
    bool out_of_time() const { return deadline_ && SteadyClock::now() >= *deadline_; }

    bool assign(size_t i, size_t remaining) {
        if (i == vars_.size()) {
            if (++checked_ % 256 == 0 && out_of_time()) {
                timed_out_ = true;
                return false;
            }
            return verify_model(original_, model_);
        }
        for (size_t len = 0; len <= remaining; ++len) {
            if (!lengths_[i][len]) continue;
            if (!test_bit(feasible_[i + 1], remaining - len)) continue;
            for (const Word& w : words_at(i, len)) {
                model_[vars_[i]] = w;
                if (assign(i + 1, remaining - len)) return true;
                if (timed_out_) return false;
            }
            if (timed_out_) return false;
        }
        return false;
    }

    const std::vector<Word>& words_at(size_t i, size_t len) {
        auto key = std::pair{i, len};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::vector<Word> words;
        size_t steps = 0;
        for_each_word_of_length(langs_[i], len, [&](const Word& w) {
            words.push_back(w);
            if (words.size() >= kWordListCap) return false;
            if (++steps % 1024 == 0 && out_of_time()) {
                timed_out_ = true;
                return false;
            }
            return true;
        });
        return cache_.emplace(key, std::move(words)).first->second;
    }

    const Sequent& original_;
    size_t max_total_;
    std::optional<SteadyClock::time_point> deadline_;
    std::vector<VarId> vars_;
    std::vector<Nfa> langs_;
    std::vector<std::vector<bool>> lengths_;
    std::vector<Bits> feasible_;
    std::map<std::pair<size_t, size_t>, std::vector<Word>> cache_;
    Model model_;
    uint64_t checked_ = 0;
    bool timed_out_ = false;
};

// ---- shared search driver ----

struct Candidate {
    uint32_t leaf;
    PropRule rule;
    uint32_t clock;
};

struct Driver {
    const Sequent& root;
    const Budgets& budget;
    StepObserver observer;
    ProofTree tree;
    bool tree_lost = false; // a throwing expansion consumed the tree
    SearchStats stats;
    // Rules whose last application at this leaf's lineage changed nothing;
    // cleared per rule once an involved constraint changes again.
    std::map<uint32_t, std::set<PropRule>> suppressed;
    std::vector<PropRule> rules;
    // Clock-independent part of the priority score, per (node, rule); node
    // sequents are immutable so entries never go stale.
    std::map<std::pair<uint32_t, PropRule>, double> score_base;
    SteadyClock::time_point start = SteadyClock::now();
    SteadyClock::time_point deadline;

    Driver(const Sequent& r, const Budgets& b, std::string strategy, StepObserver obs)
        : root(r), budget(b), observer(std::move(obs)), tree(make_tree(r)) {
        stats.strategy = std::move(strategy);
        deadline = start + budget.wall_time;
        for (const auto& eq : r.eqs()) {
            if (is_forwardable(eq.rhs)) rules.push_back({eq.id, PropDir::fwd});
            rules.push_back({eq.id, PropDir::bwd});
        }
        std::sort(rules.begin(), rules.end());
        note_peak(tree.node(0).seq);
    }

    bool over_time() const { return SteadyClock::now() >= deadline; }

    void note_peak(const Sequent& s) {
        for (const auto& [v, lang] : s.constraints)
            stats.peak_states = std::max(stats.peak_states, size_t(lang->num_states));
    }

    SolveResult finish(SolveResult r) {
        r.stats = std::move(stats);
        r.stats.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(SteadyClock::now() - start)
                .count();
        if (!tree_lost) r.tree = std::move(tree);
        return r;
    }

    SolveResult unknown(std::string why) {
        SolveResult r;
        r.verdict = SolveResult::Verdict::unknown;
        r.reason = std::move(why);
        return finish(std::move(r));
    }

    SolveResult unsat() {
        SolveResult r;
        r.verdict = SolveResult::Verdict::unsat;
        return finish(std::move(r));
    }

    SolveResult sat(Model m, bool verified) {
        SolveResult r;
        r.verdict = SolveResult::Verdict::sat;
        r.model = std::move(m);
        r.model_verified = verified;
        return finish(std::move(r));
    }

    // Closes every closable leaf. Closing never enables another close, so a
    // single pass over the current leaves suffices.
    void close_all() {
        auto snapshot = tree.open_leaves;
        for (uint32_t leaf : snapshot) {
            if (!try_close(tree.node(leaf).seq)) continue;
            Expansion ex = expand(std::move(tree), leaf, std::nullopt, budget.nfa_state_cap);
            tree = std::move(ex.tree);
            ++stats.expansions;
            ++stats.closes;
            suppressed.erase(leaf);
            if (observer) observer(tree, leaf, std::nullopt);
        }
    }

    static bool involved_changed(const Sequent& parent, const Sequent& child,
                                 const EquationalConstraint& eq) {
        for (VarId v : involved_vars(eq)) {
            const Nfa* p = parent.has_constraint(v) ? parent.constraints.at(v).get() : nullptr;
            const Nfa* c = child.has_constraint(v) ? child.constraints.at(v).get() : nullptr;
            if (p != c) return true;
        }
        return false;
    }

    // One propagation expansion plus suppression bookkeeping. Returns a
    // result only when the state cap ends the search.
    std::optional<SolveResult> apply(uint32_t leaf, const PropRule& rule) {
        // The tree is moved into expand to avoid re-copying the whole node
        // vector per step; keep what the bookkeeping below still needs.
        Sequent parent_seq = tree.node(leaf).seq;
        Expansion ex;
        try {
            ex = expand(std::move(tree), leaf, rule, budget.nfa_state_cap);
        } catch (const StateCapExceeded& e) {
            tree_lost = true;
            return unknown(std::string("state cap exceeded: ") + e.what());
        }
        ++stats.expansions;
        (rule.dir == PropDir::fwd ? stats.fwd_images : stats.bwd_images) += 1;

        std::set<PropRule> inherited;
        if (auto it = suppressed.find(leaf); it != suppressed.end()) {
            inherited = std::move(it->second);
            suppressed.erase(it);
        }
        for (uint32_t child : ex.children) {
            const ProofNode& cn = ex.tree.node(child);
            std::set<PropRule> sup = inherited;
            if (!cn.changed) sup.insert(rule);
            for (auto it = sup.begin(); it != sup.end();) {
                if (involved_changed(parent_seq, cn.seq, parent_seq.eq(it->eq)))
                    it = sup.erase(it);
                else
                    ++it;
            }
            if (!sup.empty()) suppressed[child] = std::move(sup);
            note_peak(cn.seq);
        }
        tree = std::move(ex.tree);
        if (observer) observer(tree, leaf, rule);
        return std::nullopt;
    }

    // priority_score with the clock term stripped, cached per (node, rule);
    // singleton and universality checks are too costly to repeat each round.
    double priority_base(uint32_t leaf, const PropRule& r, const PriorityWeights& w) {
        auto key = std::pair{leaf, r};
        auto it = score_base.find(key);
        if (it != score_base.end()) return it->second;
        double base = priority_score(tree.node(leaf).seq, r, 0, w);
        return score_base.emplace(key, base).first->second;
    }

    // One enumeration attempt: a few tightened leaves first (their languages
    // are narrow, so hits are fast), and in thorough rounds every leaf plus
    // the root hints, which can miss nothing the bound admits.
    std::optional<Model> enumeration_round(SteadyClock::time_point until, bool thorough) {
        ++stats.enumeration_attempts;
        size_t quick = std::min<size_t>(tree.open_leaves.size(), 3);
        size_t tries = thorough ? tree.open_leaves.size() : quick;
        for (size_t i = 0; i < tries; ++i) {
            if (SteadyClock::now() >= until) return std::nullopt;
            if (auto m = enumerate_models(root, tree.node(tree.open_leaves[i]).seq,
                                          budget.max_model_total_len, until))
                return m;
        }
        if (thorough && SteadyClock::now() < until)
            return enumerate_models(root, root, budget.max_model_total_len, until);
        return std::nullopt;
    }

    template <typename Choose>
    SolveResult run(Choose&& choose) {
        uint64_t checkpoint = 32;
        for (;;) {
            close_all();
            if (tree.closed()) return unsat();
            if (over_time()) return unknown("wall-time budget exhausted");

            std::vector<Candidate> cands;
            for (uint32_t leaf : tree.open_leaves) {
                const ProofNode& n = tree.node(leaf);
                const std::set<PropRule>* sup = nullptr;
                if (auto it = suppressed.find(leaf); it != suppressed.end()) sup = &it->second;
                for (const PropRule& r : rules) {
                    if (sup && sup->count(r)) continue;
                    cands.push_back({leaf, r, n.prop_clocks.at(r)});
                }
            }
            if (cands.empty()) {
                // Propagation can change nothing anywhere: a fixpoint. Only
                // an enumerated model can still decide the instance.
                if (auto m = enumeration_round(deadline, true)) return sat(std::move(*m), true);
                return unknown(rules.empty()
                                   ? "no propagation rules apply; no model within length bound"
                                   : "propagation fixpoint; no model within length bound");
            }
            if (stats.expansions >= budget.max_expansions) {
                if (auto m = enumeration_round(deadline, true)) return sat(std::move(*m), true);
                return unknown("expansion budget exhausted");
            }

            // Fairness overrides scores: a rule clock at the ceiling is
            // served first, then any leaf whose branch clock hit its bound.
            const Candidate* pick = nullptr;
            if (tree.prop_ceiling > 0)
                for (const Candidate& c : cands)
                    if (c.clock >= tree.prop_ceiling &&
                        (!pick || std::pair(c.leaf, c.rule) < std::pair(pick->leaf, pick->rule)))
                        pick = &c;
            if (!pick) {
                for (uint32_t leaf : tree.open_leaves) {
                    const ProofNode& n = tree.node(leaf);
                    if (n.branch_clock < n.branch_bound) continue;
                    for (const Candidate& c : cands) {
                        if (c.leaf != leaf) continue;
                        if (!pick || c.clock > pick->clock ||
                            (c.clock == pick->clock && c.rule < pick->rule))
                            pick = &c;
                    }
                    if (pick) break;
                }
            }
            if (!pick) pick = &choose(cands);

            if (auto r = apply(pick->leaf, pick->rule)) return *r;

            if (stats.expansions >= checkpoint) {
                while (checkpoint <= stats.expansions) checkpoint *= 2;
                auto slice = std::min(deadline, SteadyClock::now() + budget.wall_time / 8);
                if (auto m = enumeration_round(slice, false)) return sat(std::move(*m), true);
            }
        }
    }
};

} // namespace

bool verify_model(const Sequent& original, const Model& m) {
    for (uint32_t i = 0; i < original.vars->size(); ++i)
        if (!m.count(VarId{i})) return false;
    for (const auto& [v, lang] : original.constraints)
        if (!accepts(*lang, m.at(v))) return false;
    for (const auto& eq : original.eqs()) {
        std::vector<Word> args;
        for (VarId v : eq.rhs_vars) args.push_back(m.at(v));
        try {
            if (evaluate(eq.rhs, args) != m.at(eq.lhs)) return false;
        } catch (const NotInDomain&) {
            return false;
        } catch (const NotFunctional&) {
            return false;
        }
    }
    return true;
}

std::optional<Model> enumerate_models(const Sequent& original, const Sequent& hints,
                                      size_t max_total,
                                      std::optional<SteadyClock::time_point> deadline) {
    return ModelEnumerator(original, hints, max_total, deadline).run();
}

double priority_score(const Sequent& leaf, const PropRule& r, uint32_t clock,
                      const PriorityWeights& w) {
    const EquationalConstraint& eq = leaf.eq(r.eq);
    bool concrete = false;
    size_t states = 0;
    for (VarId v : involved_vars(eq)) {
        if (!leaf.has_constraint(v)) {
            states += 1;
            continue;
        }
        const Nfa& lang = *leaf.constraints.at(v);
        states += lang.num_states;
        if (!concrete && as_singleton(lang)) concrete = true;
    }
    bool universal_src = false;
    if (r.dir == PropDir::bwd) {
        // Scoring runs often, so the universality check gets a small cap;
        // capped means "treat as not universal".
        universal_src = !leaf.has_constraint(eq.lhs) ||
                        is_universal_lang(*leaf.constraints.at(eq.lhs), leaf.alpha, 2048);
    }
    return w.w_concrete * (concrete ? 1.0 : 0.0) - w.w_info_gain * (universal_src ? 1.0 : 0.0) -
           w.w_exactness * 0.0 - w.w_cost * (double(states) / 100.0) +
           w.w_fairness * double(clock);
}

SolveResult solve_ordered(const Sequent& root, const FlowSequence& flow, const Budgets& b) {
    std::set<uint32_t> ids;
    for (const auto& eq : root.eqs()) ids.insert(eq.id);
    std::set<uint32_t> seen;
    for (const PropRule& r : flow.steps) {
        if (!ids.count(r.eq)) throw FlowMismatch("flow references an unknown equation id");
        if (!seen.insert(r.eq).second) throw FlowMismatch("flow repeats an equation");
        if (r.dir == PropDir::fwd && !is_forwardable(root.eq(r.eq).rhs))
            throw FlowMismatch("forward step on a non-forwardable right-hand side");
    }
    if (seen.size() != ids.size()) throw FlowMismatch("flow must cover every equation");

    Driver d(root, b, "ordered", {});
    d.close_all();
    for (const PropRule& step : flow.steps) {
        if (d.tree.closed()) break;
        auto leaves = d.tree.open_leaves;
        for (uint32_t leaf : leaves) {
            if (d.over_time()) return d.unknown("wall-time budget exhausted");
            if (d.stats.expansions >= b.max_expansions)
                return d.unknown("expansion budget exhausted");
            if (auto res = d.apply(leaf, step)) return *res;
        }
        d.close_all();
    }
    if (d.tree.closed()) return d.unsat();

    // The flow ran to the end and a branch survived with nonempty languages,
    // which settles satisfiability. Enumeration tries to attach a witness, but
    // only within a budget slice: the verdict no longer depends on it, so a
    // survivor with a huge candidate space should not stall the answer.
    auto slice = std::min(d.deadline, SteadyClock::now() + b.wall_time / 8);
    for (uint32_t leaf : d.tree.open_leaves) {
        if (SteadyClock::now() >= slice) break;
        ++d.stats.enumeration_attempts;
        if (auto m = enumerate_models(root, d.tree.node(leaf).seq, b.max_model_total_len,
                                      slice))
            return d.sat(std::move(*m), true);
    }
    Model shortest;
    const Sequent& survivor = d.tree.node(d.tree.open_leaves.front()).seq;
    for (uint32_t i = 0; i < root.vars->size(); ++i) {
        auto witness = is_empty(constraint_of(survivor, VarId{i}));
        shortest[VarId{i}] = witness ? *witness : Word{};
    }
    return d.sat(std::move(shortest), false);
}

SolveResult solve_fair(const Sequent& root, const Budgets& b, const StepObserver& observer) {
    Driver d(root, b, "fair", observer);
    auto choose = [&d](const std::vector<Candidate>& cands) -> const Candidate& {
        const Candidate* best = &cands.front();
        for (const Candidate& c : cands) {
            if (c.clock != best->clock) {
                if (c.clock > best->clock) best = &c;
                continue;
            }
            uint32_t cb = d.tree.node(c.leaf).branch_clock;
            uint32_t bb = d.tree.node(best->leaf).branch_clock;
            if (cb != bb) {
                if (cb > bb) best = &c;
                continue;
            }
            if (std::pair(c.leaf, c.rule) < std::pair(best->leaf, best->rule)) best = &c;
        }
        return *best;
    };
    return d.run(choose);
}

SolveResult solve_priority(const Sequent& root, const Budgets& b, const PriorityWeights& w,
                           const StepObserver& observer) {
    Driver d(root, b, "priority", observer);
    auto choose = [&d, &w](const std::vector<Candidate>& cands) -> const Candidate& {
        const Candidate* best = nullptr;
        double best_score = 0.0;
        for (const Candidate& c : cands) {
            double score = d.priority_base(c.leaf, c.rule, w) + w.w_fairness * double(c.clock);
            bool wins =
                !best || score > best_score ||
                (score == best_score &&
                 std::tuple(c.rule.eq, c.rule.dir, c.leaf) <
                     std::tuple(best->rule.eq, best->rule.dir, best->leaf));
            if (wins) {
                best = &c;
                best_score = score;
            }
        }
        return *best;
    };
    return d.run(choose);
}

SolveResult solve(const Sequent& root, const Budgets& b, Strategy strategy,
                  const PriorityWeights& w) {
    switch (strategy) {
    case Strategy::automatic:
        if (auto flow = marking(root.eqs())) return solve_ordered(root, *flow, b);
        return solve_priority(root, b, w);
    case Strategy::ordered: {
        if (auto flow = marking(root.eqs())) return solve_ordered(root, *flow, b);
        SolveResult r;
        r.verdict = SolveResult::Verdict::unknown;
        r.reason = "input is not orderable; the ordered strategy needs a flow sequence";
        r.stats.strategy = "ordered";
        return r;
    }
    case Strategy::fair:
        return solve_fair(root, b);
    case Strategy::priority:
        return solve_priority(root, b, w);
    }
    throw Error("unknown strategy");
}

std::string SearchStats::to_json() const {
    nlohmann::json j;
    j["strategy"] = strategy;
    j["expansions"] = expansions;
    j["closes"] = closes;
    j["fwd_images"] = fwd_images;
    j["bwd_images"] = bwd_images;
    j["enumeration_attempts"] = enumeration_attempts;
    j["peak_states"] = peak_states;
    j["elapsed_ms"] = elapsed_ms;
    return j.dump(2);
}

} // namespace rcp

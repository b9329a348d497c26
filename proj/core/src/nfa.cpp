#include "rcp/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

void insert_sorted(std::vector<uint32_t>& v, uint32_t q) {
    auto it = std::lower_bound(v.begin(), v.end(), q);
    if (it == v.end() || *it != q) v.insert(it, q);
}

bool contains_sorted(const std::vector<uint32_t>& v, uint32_t q) {
    return std::binary_search(v.begin(), v.end(), q);
}

// Epsilon closure of `from`, returned sorted.
std::vector<uint32_t> eps_closure(const Nfa& a, std::vector<uint32_t> from) {
    std::vector<std::vector<uint32_t>> succ(a.num_states);
    for (auto [s, d] : a.eps) succ[s].push_back(d);
    std::vector<bool> seen(a.num_states, false);
    std::deque<uint32_t> work;
    for (uint32_t q : from) {
        if (!seen[q]) { seen[q] = true; work.push_back(q); }
    }
    std::vector<uint32_t> out;
    while (!work.empty()) {
        uint32_t q = work.front();
        work.pop_front();
        out.push_back(q);
        for (uint32_t d : succ[q])
            if (!seen[d]) { seen[d] = true; work.push_back(d); }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Outgoing arcs grouped by source state.
std::vector<std::vector<const Nfa::Arc*>> arcs_by_src(const Nfa& a) {
    std::vector<std::vector<const Nfa::Arc*>> out(a.num_states);
    for (const auto& arc : a.arcs) out[arc.src].push_back(&arc);
    return out;
}

// Splits the union of the given labels into maximal intervals on which
// membership in every label is uniform.
std::vector<CharSet::Interval> atomic_intervals(const std::vector<const CharSet*>& labels) {
    std::vector<Codepoint> cuts;
    for (const CharSet* cs : labels) {
        for (const auto& iv : cs->intervals()) {
            cuts.push_back(iv.lo);
            if (iv.hi < kMaxCodepoint) cuts.push_back(iv.hi + 1);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<CharSet::Interval> atoms;
    for (size_t i = 0; i < cuts.size(); ++i) {
        Codepoint lo = cuts[i];
        Codepoint hi = (i + 1 < cuts.size()) ? cuts[i + 1] - 1 : kMaxCodepoint;
        bool used = false;
        for (const CharSet* cs : labels)
            if (cs->contains(lo)) { used = true; break; }
        if (used) atoms.push_back({lo, hi});
    }
    return atoms;
}

} // namespace

void Nfa::add_arc(uint32_t src, CharSet label, uint32_t dst) {
    if (label.empty()) return;
    arcs.push_back({src, std::move(label), dst});
}

void Nfa::mark_initial(uint32_t q) { insert_sorted(initial, q); }
void Nfa::mark_final(uint32_t q) { insert_sorted(final, q); }
bool Nfa::is_initial(uint32_t q) const { return contains_sorted(initial, q); }
bool Nfa::is_final(uint32_t q) const { return contains_sorted(final, q); }

Nfa empty_lang() {
    Nfa a;
    a.mark_initial(a.add_state());
    return a;
}

Nfa epsilon_lang() {
    Nfa a;
    uint32_t q = a.add_state();
    a.mark_initial(q);
    a.mark_final(q);
    return a;
}

Nfa singleton(const Word& w) {
    Nfa a;
    uint32_t q = a.add_state();
    a.mark_initial(q);
    for (char32_t c : w) {
        uint32_t r = a.add_state();
        a.add_arc(q, CharSet::single(static_cast<Codepoint>(c)), r);
        q = r;
    }
    a.mark_final(q);
    return a;
}

Nfa universal(const Alphabet& alpha) {
    Nfa a;
    uint32_t q = a.add_state();
    a.mark_initial(q);
    a.mark_final(q);
    a.add_arc(q, alpha.chars(), q);
    return a;
}

Nfa char_class_lang(const CharSet& cs) {
    Nfa a;
    uint32_t q = a.add_state();
    uint32_t r = a.add_state();
    a.mark_initial(q);
    a.mark_final(r);
    a.add_arc(q, cs, r);
    return a;
}

Nfa remove_epsilon(const Nfa& a) {
    if (a.eps.empty()) {
        Nfa b = a;
        return b;
    }
    Nfa b;
    b.num_states = a.num_states;
    b.initial = a.initial;
    auto by_src = arcs_by_src(a);
    for (uint32_t q = 0; q < a.num_states; ++q) {
        auto closure = eps_closure(a, {q});
        bool fin = false;
        for (uint32_t p : closure) {
            if (a.is_final(p)) fin = true;
            for (const Nfa::Arc* arc : by_src[p]) b.add_arc(q, arc->label, arc->dst);
        }
        if (fin) b.mark_final(q);
    }
    return b;
}

Nfa trim(const Nfa& a) {
    // Forward reachability.
    std::vector<std::vector<uint32_t>> fwd(a.num_states), bwd(a.num_states);
    for (const auto& arc : a.arcs) {
        fwd[arc.src].push_back(arc.dst);
        bwd[arc.dst].push_back(arc.src);
    }
    for (auto [s, d] : a.eps) {
        fwd[s].push_back(d);
        bwd[d].push_back(s);
    }
    auto bfs = [&](const std::vector<uint32_t>& seeds,
                   const std::vector<std::vector<uint32_t>>& succ) {
        std::vector<bool> seen(a.num_states, false);
        std::deque<uint32_t> work(seeds.begin(), seeds.end());
        for (uint32_t q : seeds) seen[q] = true;
        while (!work.empty()) {
            uint32_t q = work.front();
            work.pop_front();
            for (uint32_t d : succ[q])
                if (!seen[d]) { seen[d] = true; work.push_back(d); }
        }
        return seen;
    };
    auto reach = bfs(a.initial, fwd);
    auto coreach = bfs(a.final, bwd);
    std::vector<uint32_t> remap(a.num_states, UINT32_MAX);
    Nfa b;
    for (uint32_t q = 0; q < a.num_states; ++q)
        if (reach[q] && coreach[q]) remap[q] = b.add_state();
    if (b.num_states == 0) return empty_lang();
    for (uint32_t q : a.initial)
        if (remap[q] != UINT32_MAX) b.mark_initial(remap[q]);
    for (uint32_t q : a.final)
        if (remap[q] != UINT32_MAX) b.mark_final(remap[q]);
    for (const auto& arc : a.arcs)
        if (remap[arc.src] != UINT32_MAX && remap[arc.dst] != UINT32_MAX)
            b.add_arc(remap[arc.src], arc.label, remap[arc.dst]);
    for (auto [s, d] : a.eps)
        if (remap[s] != UINT32_MAX && remap[d] != UINT32_MAX && remap[s] != remap[d])
            b.add_eps(remap[s], remap[d]);
    return b;
}

Nfa ensure_single_initial(const Nfa& a) {
    if (a.initial.size() == 1 && a.eps.empty()) return a;
    Nfa b = remove_epsilon(a);
    if (b.initial.size() == 1) return b;
    uint32_t s = b.add_state();
    bool fin = false;
    size_t n = b.arcs.size();
    for (size_t i = 0; i < n; ++i) {
        const Nfa::Arc arc = b.arcs[i];
        if (b.is_initial(arc.src)) b.add_arc(s, arc.label, arc.dst);
    }
    for (uint32_t q : b.initial)
        if (b.is_final(q)) fin = true;
    b.initial = {s};
    if (fin) b.mark_final(s);
    return b;
}

Nfa intersect(const Nfa& a0, const Nfa& b0) {
    Nfa a = remove_epsilon(a0);
    Nfa b = remove_epsilon(b0);
    auto a_by_src = arcs_by_src(a);
    auto b_by_src = arcs_by_src(b);
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
    Nfa out;
    std::deque<std::pair<uint32_t, uint32_t>> work;
    auto get = [&](uint32_t qa, uint32_t qb) {
        auto key = std::make_pair(qa, qb);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        uint32_t id = out.add_state();
        ids.emplace(key, id);
        if (a.is_final(qa) && b.is_final(qb)) out.mark_final(id);
        work.push_back(key);
        return id;
    };
    for (uint32_t qa : a.initial)
        for (uint32_t qb : b.initial) out.mark_initial(get(qa, qb));
    while (!work.empty()) {
        auto [qa, qb] = work.front();
        work.pop_front();
        uint32_t src = ids.at({qa, qb});
        for (const Nfa::Arc* x : a_by_src[qa]) {
            for (const Nfa::Arc* y : b_by_src[qb]) {
                CharSet lab = x->label.intersect(y->label);
                if (lab.empty()) continue;
                out.add_arc(src, std::move(lab), get(x->dst, y->dst));
            }
        }
    }
    return trim(out);
}

Nfa union_lang(const Nfa& a, const Nfa& b) {
    Nfa out = a;
    uint32_t off = out.num_states;
    out.num_states += b.num_states;
    for (uint32_t q : b.initial) out.mark_initial(q + off);
    for (uint32_t q : b.final) out.mark_final(q + off);
    for (const auto& arc : b.arcs) out.add_arc(arc.src + off, arc.label, arc.dst + off);
    for (auto [s, d] : b.eps) out.add_eps(s + off, d + off);
    return out;
}

Nfa concat_lang(const Nfa& a, const Nfa& b) {
    Nfa out = a;
    uint32_t off = out.num_states;
    out.num_states += b.num_states;
    for (const auto& arc : b.arcs) out.add_arc(arc.src + off, arc.label, arc.dst + off);
    for (auto [s, d] : b.eps) out.add_eps(s + off, d + off);
    for (uint32_t f : a.final)
        for (uint32_t i : b.initial) out.add_eps(f, i + off);
    out.final.clear();
    for (uint32_t q : b.final) out.mark_final(q + off);
    return out;
}

Nfa reverse_lang(const Nfa& a) {
    if (a.final.empty()) return empty_lang();
    Nfa out;
    out.num_states = a.num_states;
    for (const auto& arc : a.arcs) out.add_arc(arc.dst, arc.label, arc.src);
    for (auto [s, d] : a.eps) out.add_eps(d, s);
    out.initial = a.final;
    out.final = a.initial;
    return out;
}

Determinized determinize(const Nfa& a0, const Alphabet& alpha, size_t state_cap) {
    Nfa a = remove_epsilon(a0);
    auto by_src = arcs_by_src(a);
    std::map<std::vector<uint32_t>, uint32_t> ids;
    Determinized res;
    Nfa& out = res.dfa;
    std::deque<std::vector<uint32_t>> work;
    auto get = [&](std::vector<uint32_t> set) -> uint32_t {
        auto it = ids.find(set);
        if (it != ids.end()) return it->second;
        uint32_t id = out.add_state();
        for (uint32_t q : set)
            if (a.is_final(q)) { out.mark_final(id); break; }
        work.push_back(set);
        ids.emplace(std::move(set), id);
        return id;
    };
    out.mark_initial(get(a.initial));
    while (!work.empty()) {
        if (ids.size() > state_cap) {
            res.capped = true;
            return res;
        }
        std::vector<uint32_t> set = work.front();
        work.pop_front();
        uint32_t src = ids.at(set);
        std::vector<const CharSet*> labels;
        std::vector<const Nfa::Arc*> arcs;
        for (uint32_t q : set) {
            for (const Nfa::Arc* arc : by_src[q]) {
                labels.push_back(&arc->label);
                arcs.push_back(arc);
            }
        }
        CharSet covered;
        // Merge atoms that lead to the same successor set so DFA arcs stay
        // few even over unicode.
        std::map<std::vector<uint32_t>, std::vector<CharSet::Interval>> moves;
        for (const auto& atom : atomic_intervals(labels)) {
            std::vector<uint32_t> succ;
            for (const Nfa::Arc* arc : arcs)
                if (arc->label.contains(atom.lo)) insert_sorted(succ, arc->dst);
            moves[std::move(succ)].push_back(atom);
        }
        for (auto& [succ, atoms] : moves) {
            CharSet lab = CharSet::from_intervals(atoms);
            covered = covered.union_with(lab);
            out.add_arc(src, std::move(lab), get(succ));
        }
        CharSet rest = alpha.chars().subtract(covered);
        if (!rest.empty()) out.add_arc(src, std::move(rest), get({}));
    }
    return res;
}

Nfa complement(const Nfa& a, const Alphabet& alpha, size_t state_cap) {
    Determinized det = determinize(a, alpha, state_cap);
    if (det.capped)
        throw StateCapExceeded("complement: determinization exceeded " +
                               std::to_string(state_cap) + " states");
    Nfa out = det.dfa;
    std::vector<uint32_t> flipped;
    for (uint32_t q = 0; q < out.num_states; ++q)
        if (!out.is_final(q)) flipped.push_back(q);
    out.final = std::move(flipped);
    return out;
}

std::optional<Word> is_empty(const Nfa& a0) {
    Nfa a = trim(remove_epsilon(a0));
    if (a.final.empty() || a.initial.empty()) return std::nullopt;
    // Distance from each state to acceptance.
    std::vector<std::vector<uint32_t>> pred(a.num_states);
    for (const auto& arc : a.arcs) pred[arc.dst].push_back(arc.src);
    constexpr uint32_t kInf = UINT32_MAX;
    std::vector<uint32_t> dist(a.num_states, kInf);
    std::deque<uint32_t> work;
    for (uint32_t q : a.final) { dist[q] = 0; work.push_back(q); }
    while (!work.empty()) {
        uint32_t q = work.front();
        work.pop_front();
        for (uint32_t p : pred[q])
            if (dist[p] == kInf) { dist[p] = dist[q] + 1; work.push_back(p); }
    }
    uint32_t best = kInf;
    for (uint32_t q : a.initial) best = std::min(best, dist[q]);
    if (best == kInf) return std::nullopt;
    auto by_src = arcs_by_src(a);
    // Greedy reconstruction: smallest codepoint that still finishes in time.
    Word w;
    std::vector<uint32_t> states;
    for (uint32_t q : a.initial)
        if (dist[q] <= best) states.push_back(q);
    for (uint32_t remaining = best; remaining > 0; --remaining) {
        Codepoint c = kMaxCodepoint + 1;
        for (uint32_t q : states)
            for (const Nfa::Arc* arc : by_src[q])
                if (dist[arc->dst] != kInf && dist[arc->dst] <= remaining - 1)
                    c = std::min(c, static_cast<Codepoint>(arc->label.min()));
        std::vector<uint32_t> next;
        for (uint32_t q : states)
            for (const Nfa::Arc* arc : by_src[q])
                if (arc->label.contains(c) && dist[arc->dst] != kInf &&
                    dist[arc->dst] <= remaining - 1)
                    insert_sorted(next, arc->dst);
        w.push_back(static_cast<char32_t>(c));
        states = std::move(next);
    }
    return w;
}

bool accepts(const Nfa& a, const Word& w) {
    if (a.num_states == 0) return false;
    std::vector<uint32_t> states = eps_closure(a, a.initial);
    auto by_src = arcs_by_src(a);
    for (char32_t c : w) {
        std::vector<uint32_t> next;
        for (uint32_t q : states)
            for (const Nfa::Arc* arc : by_src[q])
                if (arc->label.contains(static_cast<Codepoint>(c))) insert_sorted(next, arc->dst);
        if (next.empty()) return false;
        states = eps_closure(a, std::move(next));
    }
    for (uint32_t q : states)
        if (a.is_final(q)) return true;
    return false;
}

namespace {

// Shared lexicographic walk. Stops early when `emit` returns false.
bool enumerate_walk(const Nfa& a, const std::vector<std::vector<const Nfa::Arc*>>& by_src,
                    std::vector<uint32_t>& states, Word& prefix, size_t max_len,
                    bool exact_length, const std::vector<std::vector<bool>>* can_finish,
                    const std::function<bool(const Word&)>& emit) {
    size_t remaining = max_len - prefix.size();
    bool here_final = false;
    for (uint32_t q : states)
        if (a.is_final(q)) { here_final = true; break; }
    if (here_final && (!exact_length || remaining == 0)) {
        if (!emit(prefix)) return false;
    }
    if (remaining == 0) return true;
    std::vector<const CharSet*> labels;
    std::vector<const Nfa::Arc*> arcs;
    for (uint32_t q : states) {
        for (const Nfa::Arc* arc : by_src[q]) {
            if (can_finish && !(*can_finish)[remaining - 1][arc->dst]) continue;
            labels.push_back(&arc->label);
            arcs.push_back(arc);
        }
    }
    for (const auto& atom : atomic_intervals(labels)) {
        std::vector<uint32_t> succ;
        for (const Nfa::Arc* arc : arcs)
            if (arc->label.contains(atom.lo)) insert_sorted(succ, arc->dst);
        if (succ.empty()) continue;
        for (Codepoint c = atom.lo;; ++c) {
            prefix.push_back(static_cast<char32_t>(c));
            bool go_on = enumerate_walk(a, by_src, succ, prefix, max_len, exact_length,
                                        can_finish, emit);
            prefix.pop_back();
            if (!go_on) return false;
            if (c == atom.hi) break;
        }
    }
    return true;
}

// can[r][q] == true iff a final state is reachable from q in exactly r arcs.
std::vector<std::vector<bool>> exact_reach_table(const Nfa& a, size_t len) {
    std::vector<std::vector<bool>> can(len + 1, std::vector<bool>(a.num_states, false));
    for (uint32_t q : a.final) can[0][q] = true;
    for (size_t r = 1; r <= len; ++r)
        for (const auto& arc : a.arcs)
            if (can[r - 1][arc.dst]) can[r][arc.src] = true;
    return can;
}

} // namespace

std::vector<Word> enumerate(const Nfa& a0, size_t max_len) {
    Nfa a = trim(remove_epsilon(a0));
    std::vector<Word> out;
    if (a.initial.empty()) return out;
    auto by_src = arcs_by_src(a);
    // Walk per length so the result is ordered shortest-first.
    auto can = exact_reach_table(a, max_len);
    for (size_t len = 0; len <= max_len; ++len) {
        std::vector<uint32_t> states;
        for (uint32_t q : a.initial)
            if (can[len][q]) states.push_back(q);
        if (states.empty()) continue;
        Word prefix;
        enumerate_walk(a, by_src, states, prefix, len, true, &can,
                       [&](const Word& w) {
                           out.push_back(w);
                           return true;
                       });
    }
    return out;
}

bool for_each_word_of_length(const Nfa& a0, size_t len,
                             const std::function<bool(const Word&)>& fn) {
    Nfa a = trim(remove_epsilon(a0));
    if (a.initial.empty()) return true;
    auto by_src = arcs_by_src(a);
    auto can = exact_reach_table(a, len);
    std::vector<uint32_t> states;
    for (uint32_t q : a.initial)
        if (can[len][q]) states.push_back(q);
    if (states.empty()) return true;
    Word prefix;
    return enumerate_walk(a, by_src, states, prefix, len, true, &can, fn);
}

std::vector<bool> achievable_lengths(const Nfa& a0, size_t max_len) {
    Nfa a = trim(remove_epsilon(a0));
    std::vector<bool> out(max_len + 1, false);
    if (a.initial.empty()) return out;
    std::vector<bool> frontier(a.num_states, false);
    for (uint32_t q : a.initial) frontier[q] = true;
    for (size_t l = 0; l <= max_len; ++l) {
        bool hit = false, any = false;
        for (uint32_t q = 0; q < a.num_states; ++q) {
            if (!frontier[q]) continue;
            any = true;
            if (a.is_final(q)) hit = true;
        }
        out[l] = hit;
        if (!any || l == max_len) break;
        std::vector<bool> next(a.num_states, false);
        for (const auto& arc : a.arcs)
            if (frontier[arc.src]) next[arc.dst] = true;
        frontier = std::move(next);
    }
    return out;
}

Inclusion includes(const Nfa& a, const Nfa& b, const Alphabet& alpha, size_t state_cap) {
    Determinized det = determinize(a, alpha, state_cap);
    Inclusion res;
    if (det.capped) {
        res.verdict = Inclusion::Verdict::capped;
        return res;
    }
    Nfa comp = det.dfa;
    std::vector<uint32_t> flipped;
    for (uint32_t q = 0; q < comp.num_states; ++q)
        if (!comp.is_final(q)) flipped.push_back(q);
    comp.final = std::move(flipped);
    auto witness = is_empty(intersect(comp, b));
    if (witness) {
        res.verdict = Inclusion::Verdict::no;
        res.counterexample = std::move(witness);
    } else {
        res.verdict = Inclusion::Verdict::yes;
    }
    return res;
}

std::optional<Word> as_singleton(const Nfa& a0) {
    Nfa a = trim(remove_epsilon(a0));
    if (a.initial.empty() || a.final.empty()) return std::nullopt;
    // A trimmed machine with a cycle accepts infinitely many words.
    std::vector<std::vector<uint32_t>> succ(a.num_states);
    for (const auto& arc : a.arcs) succ[arc.src].push_back(arc.dst);
    std::vector<int> mark(a.num_states, 0); // 0 fresh, 1 on stack, 2 done
    std::vector<std::pair<uint32_t, size_t>> stack;
    for (uint32_t start = 0; start < a.num_states; ++start) {
        if (mark[start]) continue;
        stack.push_back({start, 0});
        mark[start] = 1;
        while (!stack.empty()) {
            auto& [q, i] = stack.back();
            if (i < succ[q].size()) {
                uint32_t d = succ[q][i++];
                if (mark[d] == 1) return std::nullopt;
                if (mark[d] == 0) { mark[d] = 1; stack.push_back({d, 0}); }
            } else {
                mark[q] = 2;
                stack.pop_back();
            }
        }
    }
    // Finite language: any path has fewer than num_states arcs.
    std::optional<Word> only;
    auto by_src = arcs_by_src(a);
    auto can = exact_reach_table(a, a.num_states);
    bool single = true;
    for (size_t len = 0; len < a.num_states + size_t(1) && single; ++len) {
        std::vector<uint32_t> states;
        for (uint32_t q : a.initial)
            if (len < can.size() && can[len][q]) states.push_back(q);
        if (states.empty()) continue;
        Word prefix;
        enumerate_walk(a, by_src, states, prefix, len, true, &can, [&](const Word& w) {
            if (only) { single = false; return false; }
            only = w;
            return true;
        });
    }
    if (!single) return std::nullopt;
    return only;
}

bool is_universal_lang(const Nfa& a, const Alphabet& alpha, size_t state_cap) {
    return includes(a, universal(alpha), alpha, state_cap).verdict == Inclusion::Verdict::yes;
}

namespace {

Nfa compile_node(const RegexAst& ast, const Alphabet& alpha) {
    switch (ast.kind) {
    case RegexKind::empty:
        return empty_lang();
    case RegexKind::epsilon:
        return epsilon_lang();
    case RegexKind::literal:
        if (!alpha.contains_word(ast.text))
            throw AlphabetMismatch("regex literal \"" + to_utf8(ast.text) +
                                   "\" leaves the alphabet");
        return singleton(ast.text);
    case RegexKind::char_class:
        if (!ast.chars.is_subset_of(alpha.chars()))
            throw AlphabetMismatch("regex character class leaves the alphabet");
        return char_class_lang(ast.chars);
    case RegexKind::concat: {
        Nfa acc = epsilon_lang();
        for (const auto& c : ast.children) acc = concat_lang(acc, compile_node(c, alpha));
        return acc;
    }
    case RegexKind::alternation: {
        if (ast.children.empty()) return empty_lang();
        Nfa acc = compile_node(ast.children[0], alpha);
        for (size_t i = 1; i < ast.children.size(); ++i)
            acc = union_lang(acc, compile_node(ast.children[i], alpha));
        return acc;
    }
    case RegexKind::star: {
        Nfa body = compile_node(ast.children[0], alpha);
        Nfa out = body;
        uint32_t hub = out.add_state();
        for (uint32_t q : body.initial) out.add_eps(hub, q);
        for (uint32_t q : body.final) out.add_eps(q, hub);
        out.initial = {hub};
        out.final.clear();
        out.mark_final(hub);
        return out;
    }
    case RegexKind::plus: {
        Nfa out = compile_node(ast.children[0], alpha);
        for (uint32_t f : out.final)
            for (uint32_t i : out.initial) out.add_eps(f, i);
        return out;
    }
    case RegexKind::opt:
        return union_lang(compile_node(ast.children[0], alpha), epsilon_lang());
    case RegexKind::intersection: {
        if (ast.children.empty()) return universal(alpha);
        Nfa acc = compile_node(ast.children[0], alpha);
        for (size_t i = 1; i < ast.children.size(); ++i)
            acc = intersect(acc, compile_node(ast.children[i], alpha));
        return acc;
    }
    case RegexKind::complement:
        return complement(compile_node(ast.children[0], alpha), alpha);
    case RegexKind::any_char:
        return char_class_lang(alpha.chars());
    case RegexKind::any_string:
        return universal(alpha);
    }
    throw Error("compile_regex: unhandled node kind");
}

} // namespace

Nfa compile_regex(const RegexAst& ast, const Alphabet& alpha) {
    return trim(compile_node(ast, alpha));
}

} // namespace rcp

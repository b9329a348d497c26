#include "rcp/functions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "rcp/errors.hpp"

namespace rcp {

std::vector<VarId> ConcatTerm::distinct_vars() const {
    std::vector<VarId> out;
    for (const Item& it : items)
        if (const VarId* v = std::get_if<VarId>(&it))
            if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
    return out;
}

bool ConcatTerm::vars_linear() const {
    std::vector<VarId> seen;
    for (const Item& it : items)
        if (const VarId* v = std::get_if<VarId>(&it)) {
            if (std::find(seen.begin(), seen.end(), *v) != seen.end()) return false;
            seen.push_back(*v);
        }
    return true;
}

void Transducer::validate() const {
    if (initial.empty()) throw MalformedTransducer("transducer has no initial state");
    if (final.empty()) throw MalformedTransducer("transducer has no final state");
    auto in_range = [&](uint32_t q) { return q < num_states; };
    for (uint32_t q : initial)
        if (!in_range(q)) throw MalformedTransducer("initial state out of range");
    for (uint32_t q : final)
        if (!in_range(q)) throw MalformedTransducer("final state out of range");
    for (const Rule& r : rules) {
        if (!in_range(r.src) || !in_range(r.dst))
            throw MalformedTransducer("rule state out of range");
        if (r.input && r.input->empty())
            throw MalformedTransducer("rule input label is empty");
        if (r.out.copy && !r.input)
            throw MalformedTransducer("copy output requires an input label");
    }
}

size_t StringFunction::arity() const {
    if (const ConcatTerm* t = concat()) return t->distinct_vars().size();
    return 1;
}

namespace {

// Appends arcs spelling `text` from state `from`, returning the state the
// spelled word ends in. Adds an epsilon arc for the empty word.
uint32_t spell_word(Nfa& a, uint32_t from, const Word& text) {
    uint32_t cur = from;
    for (char32_t c : text) {
        uint32_t next = a.add_state();
        a.add_arc(cur, CharSet::single(static_cast<Codepoint>(c)), next);
        cur = next;
    }
    return cur;
}

void connect_word(Nfa& a, uint32_t from, const Word& text, uint32_t to) {
    if (text.empty()) {
        a.add_eps(from, to);
        return;
    }
    uint32_t cur = from;
    for (size_t i = 0; i + 1 < text.size(); ++i) {
        uint32_t next = a.add_state();
        a.add_arc(cur, CharSet::single(static_cast<Codepoint>(text[i])), next);
        cur = next;
    }
    a.add_arc(cur, CharSet::single(static_cast<Codepoint>(text.back())), to);
}

// States of `a` reachable from `from` by spelling `text` (a is epsilon-free).
std::vector<uint32_t> walk_word(const std::vector<std::vector<const Nfa::Arc*>>& by_src,
                                uint32_t from, const Word& text) {
    std::vector<uint32_t> cur{from};
    for (char32_t c : text) {
        std::vector<uint32_t> next;
        for (uint32_t q : cur)
            for (const Nfa::Arc* arc : by_src[q])
                if (arc->label.contains(static_cast<Codepoint>(c))) {
                    auto it = std::lower_bound(next.begin(), next.end(), arc->dst);
                    if (it == next.end() || *it != arc->dst) next.insert(it, arc->dst);
                }
        if (next.empty()) return {};
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::vector<const Nfa::Arc*>> group_by_src(const Nfa& a) {
    std::vector<std::vector<const Nfa::Arc*>> out(a.num_states);
    for (const auto& arc : a.arcs) out[arc.src].push_back(&arc);
    return out;
}

Word evaluate_replaceall(const ReplaceAllConst& f, const Word& in) {
    if (f.pattern.empty()) return in;
    Word out;
    size_t i = 0;
    while (i < in.size()) {
        if (i + f.pattern.size() <= in.size() &&
            in.compare(i, f.pattern.size(), f.pattern) == 0) {
            out += f.replacement;
            i += f.pattern.size();
        } else {
            out.push_back(in[i++]);
        }
    }
    return out;
}

} // namespace

Nfa transducer_outputs(const Transducer& t, const Word& input) {
    t.validate();
    // Product of the transducer with the input word positions; the language
    // of the result is the set of outputs.
    size_t n = input.size();
    Nfa out;
    auto id = [&](uint32_t q, size_t pos) { return uint32_t(q * (n + 1) + pos); };
    out.num_states = t.num_states * uint32_t(n + 1);
    for (uint32_t q : t.initial) out.mark_initial(id(q, 0));
    for (uint32_t q : t.final) out.mark_final(id(q, n));
    for (const Transducer::Rule& r : t.rules) {
        if (!r.input) {
            for (size_t pos = 0; pos <= n; ++pos)
                connect_word(out, id(r.src, pos), r.out.text, id(r.dst, pos));
            continue;
        }
        for (size_t pos = 0; pos < n; ++pos) {
            if (!r.input->contains(static_cast<Codepoint>(input[pos]))) continue;
            Word emitted = r.out.text;
            if (r.out.copy) emitted.push_back(input[pos]);
            connect_word(out, id(r.src, pos), emitted, id(r.dst, pos + 1));
        }
    }
    return trim(out);
}

Word evaluate(const StringFunction& f, std::span<const Word> args) {
    if (args.size() != f.arity())
        throw Error("evaluate: expected " + std::to_string(f.arity()) + " arguments, got " +
                    std::to_string(args.size()));
    if (const ConcatTerm* term = f.concat()) {
        auto vars = term->distinct_vars();
        Word out;
        for (const auto& item : term->items) {
            if (const VarId* v = std::get_if<VarId>(&item)) {
                size_t slot = std::find(vars.begin(), vars.end(), *v) - vars.begin();
                out += args[slot];
            } else {
                out += std::get<Word>(item);
            }
        }
        return out;
    }
    if (const ReplaceAllConst* ra = std::get_if<ReplaceAllConst>(&f.fn))
        return evaluate_replaceall(*ra, args[0]);
    if (std::holds_alternative<ReverseFn>(f.fn)) {
        Word w(args[0]);
        std::reverse(w.begin(), w.end());
        return w;
    }
    const Transducer& t = std::get<Transducer>(f.fn);
    Nfa outputs = transducer_outputs(t, args[0]);
    auto any = is_empty(outputs);
    if (!any) throw NotInDomain("transducer rejects the input word");
    auto only = as_singleton(outputs);
    if (!only) throw NotFunctional("transducer relates the input to several outputs");
    return *only;
}

bool is_forwardable(const StringFunction& f) {
    if (const ConcatTerm* t = f.concat()) return t->vars_linear();
    return true;
}

namespace {

Nfa transducer_image(const Transducer& t, const Nfa& input, const Alphabet&) {
    t.validate();
    Nfa a = remove_epsilon(input);
    auto by_src = group_by_src(a);
    std::vector<std::vector<const Transducer::Rule*>> rules_by_src(t.num_states);
    for (const auto& r : t.rules) rules_by_src[r.src].push_back(&r);

    std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
    Nfa out;
    std::vector<std::pair<uint32_t, uint32_t>> work;
    auto get = [&](uint32_t qt, uint32_t qa) {
        auto key = std::make_pair(qt, qa);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        uint32_t id = out.add_state();
        ids.emplace(key, id);
        bool tf = std::find(t.final.begin(), t.final.end(), qt) != t.final.end();
        if (tf && a.is_final(qa)) out.mark_final(id);
        work.push_back(key);
        return id;
    };
    for (uint32_t qt : t.initial)
        for (uint32_t qa : a.initial) out.mark_initial(get(qt, qa));
    while (!work.empty()) {
        auto [qt, qa] = work.back();
        work.pop_back();
        uint32_t src = ids.at({qt, qa});
        for (const Transducer::Rule* r : rules_by_src[qt]) {
            if (!r->input) {
                connect_word(out, src, r->out.text, get(r->dst, qa));
                continue;
            }
            for (const Nfa::Arc* arc : by_src[qa]) {
                CharSet joint = r->input->intersect(arc->label);
                if (joint.empty()) continue;
                uint32_t dst = get(r->dst, arc->dst);
                if (r->out.copy) {
                    uint32_t mid = spell_word(out, src, r->out.text);
                    out.add_arc(mid, std::move(joint), dst);
                } else {
                    connect_word(out, src, r->out.text, dst);
                }
            }
        }
    }
    return trim(out);
}

Nfa transducer_preimage(const Transducer& t, const Nfa& output) {
    t.validate();
    Nfa b = remove_epsilon(output);
    auto by_src = group_by_src(b);
    std::vector<std::vector<const Transducer::Rule*>> rules_by_src(t.num_states);
    for (const auto& r : t.rules) rules_by_src[r.src].push_back(&r);

    std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
    Nfa out;
    std::vector<std::pair<uint32_t, uint32_t>> work;
    auto get = [&](uint32_t qt, uint32_t qb) {
        auto key = std::make_pair(qt, qb);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        uint32_t id = out.add_state();
        ids.emplace(key, id);
        bool tf = std::find(t.final.begin(), t.final.end(), qt) != t.final.end();
        if (tf && b.is_final(qb)) out.mark_final(id);
        work.push_back(key);
        return id;
    };
    for (uint32_t qt : t.initial)
        for (uint32_t qb : b.initial) out.mark_initial(get(qt, qb));
    while (!work.empty()) {
        auto [qt, qb] = work.back();
        work.pop_back();
        uint32_t src = ids.at({qt, qb});
        for (const Transducer::Rule* r : rules_by_src[qt]) {
            if (r->out.copy) {
                // Emitted word is text then the consumed codepoint; walk the
                // text first, then match the final codepoint against b's arcs.
                for (uint32_t mid : walk_word(by_src, qb, r->out.text)) {
                    for (const Nfa::Arc* arc : by_src[mid]) {
                        CharSet joint = r->input->intersect(arc->label);
                        if (joint.empty()) continue;
                        out.add_arc(src, std::move(joint), get(r->dst, arc->dst));
                    }
                }
                continue;
            }
            for (uint32_t qb2 : walk_word(by_src, qb, r->out.text)) {
                uint32_t dst = get(r->dst, qb2);
                if (r->input)
                    out.add_arc(src, *r->input, dst);
                else if (src != dst)
                    out.add_eps(src, dst);
            }
        }
    }
    return trim(out);
}

// Shared concat preimage. Branch components follow distinct_vars order;
// repeated variables contribute the intersection of their segment languages.
RecognizableRel concat_preimage(const ConcatTerm& term, const Nfa& out_lang, bool keep_empty) {
    auto vars = term.distinct_vars();
    RecognizableRel rel;
    rel.arity = vars.size();

    Nfa out = ensure_single_initial(trim(remove_epsilon(out_lang)));
    const size_t m = term.items.size();
    if (out.initial.empty() || out.num_states == 0) return rel;
    uint32_t q0 = out.initial.front();

    if (m == 0) {
        if (accepts(out, Word())) rel.branches.push_back({});
        return rel;
    }
    // Preimage of the whole language through a single variable is the
    // language itself; skip the tuple walk so callers see one branch.
    if (m == 1 && std::holds_alternative<VarId>(term.items[0])) {
        bool empty = !is_empty(out).has_value();
        if (!empty || keep_empty) rel.branches.push_back({out});
        return rel;
    }

    auto by_src = group_by_src(out);
    // For each constant item, which states each start state reaches.
    std::map<const Word*, std::vector<std::vector<uint32_t>>> const_walks;
    for (const auto& item : term.items) {
        if (const Word* w = std::get_if<Word>(&item)) {
            if (const_walks.count(w)) continue;
            std::vector<std::vector<uint32_t>> rows(out.num_states);
            for (uint32_t q = 0; q < out.num_states; ++q)
                rows[q] = walk_word(by_src, q, *w);
            const_walks.emplace(w, std::move(rows));
        }
    }

    auto sub_lang = [&](uint32_t from, uint32_t to) {
        Nfa seg = out;
        seg.initial = {from};
        seg.final = {to};
        return trim(seg);
    };

    // Key for deduplicating branches. Distinct state pairs can carry the
    // same segment language (both ends of a word automaton give {eps}), so
    // singleton segments are keyed by their word, the rest by the pair.
    using SegKey = std::variant<Word, std::pair<uint32_t, uint32_t>>;
    std::map<std::pair<uint32_t, uint32_t>, SegKey> key_cache;
    auto seg_key = [&](uint32_t from, uint32_t to) -> const SegKey& {
        auto it = key_cache.find({from, to});
        if (it == key_cache.end()) {
            SegKey key = std::pair{from, to};
            if (auto w = as_singleton(sub_lang(from, to))) key = std::move(*w);
            it = key_cache.emplace(std::pair{from, to}, std::move(key)).first;
        }
        return it->second;
    };

    // Tuple of inner boundaries b_1..b_{m-1} plus the accepting end b_m.
    std::vector<uint32_t> bounds(m + 1, q0);
    std::set<std::vector<SegKey>> seen;
    auto emit = [&]() {
        // Constants filter; variables collect their segment boundary pairs.
        std::map<VarId, std::vector<std::pair<uint32_t, uint32_t>>> segs;
        for (size_t i = 0; i < m; ++i) {
            uint32_t from = bounds[i], to = bounds[i + 1];
            if (const Word* w = std::get_if<Word>(&term.items[i])) {
                const auto& row = const_walks.at(w)[from];
                if (!std::binary_search(row.begin(), row.end(), to)) return;
            } else {
                segs[std::get<VarId>(term.items[i])].push_back({from, to});
            }
        }
        std::vector<SegKey> sig;
        for (VarId v : vars) {
            std::vector<SegKey> keys;
            for (auto [from, to] : segs[v]) keys.push_back(seg_key(from, to));
            std::sort(keys.begin(), keys.end());
            sig.insert(sig.end(), keys.begin(), keys.end());
            sig.push_back(std::pair{UINT32_MAX, UINT32_MAX}); // separator
        }
        if (!seen.insert(std::move(sig)).second) return;
        std::vector<Nfa> comps;
        bool any_empty = false;
        for (VarId v : vars) {
            const auto& pairs = segs[v];
            Nfa lang = sub_lang(pairs[0].first, pairs[0].second);
            for (size_t i = 1; i < pairs.size(); ++i)
                lang = intersect(lang, sub_lang(pairs[i].first, pairs[i].second));
            if (!is_empty(lang).has_value()) any_empty = true;
            comps.push_back(std::move(lang));
        }
        if (any_empty && !keep_empty) return;
        rel.branches.push_back(std::move(comps));
    };

    // Iterate b_1..b_{m-1} over all states and b_m over the finals.
    std::vector<uint32_t> inner(m - 1, 0);
    for (;;) {
        for (size_t i = 0; i < m - 1; ++i) bounds[i + 1] = inner[i];
        for (uint32_t f : out.final) {
            bounds[m] = f;
            emit();
        }
        size_t i = 0;
        for (; i < m - 1; ++i) {
            if (++inner[i] < out.num_states) break;
            inner[i] = 0;
        }
        if (i == m - 1) break;
    }
    return rel;
}

RecognizableRel unary_rel(Nfa lang, bool keep_empty) {
    RecognizableRel rel;
    rel.arity = 1;
    bool empty = !is_empty(lang).has_value();
    if (!empty || keep_empty) rel.branches.push_back({std::move(lang)});
    return rel;
}

RecognizableRel preimage_impl(const StringFunction& f, const Nfa& out, const Alphabet& alpha,
                              bool keep_empty) {
    if (const ConcatTerm* term = f.concat()) return concat_preimage(*term, out, keep_empty);
    if (const ReplaceAllConst* ra = std::get_if<ReplaceAllConst>(&f.fn)) {
        Transducer t = compile_replaceall(*ra, alpha);
        return unary_rel(transducer_preimage(t, out), keep_empty);
    }
    if (std::holds_alternative<ReverseFn>(f.fn))
        return unary_rel(reverse_lang(trim(remove_epsilon(out))), keep_empty);
    return unary_rel(transducer_preimage(std::get<Transducer>(f.fn), out), keep_empty);
}

} // namespace

Nfa forward_image(const StringFunction& f, std::span<const Nfa> args, const Alphabet& alpha) {
    if (!is_forwardable(f))
        throw NotForwardable("forward image undefined: concat term repeats a variable");
    if (args.size() != f.arity())
        throw Error("forward_image: expected " + std::to_string(f.arity()) +
                    " argument languages, got " + std::to_string(args.size()));
    if (const ConcatTerm* term = f.concat()) {
        auto vars = term->distinct_vars();
        Nfa acc = epsilon_lang();
        for (const auto& item : term->items) {
            if (const VarId* v = std::get_if<VarId>(&item)) {
                size_t slot = std::find(vars.begin(), vars.end(), *v) - vars.begin();
                acc = concat_lang(acc, args[slot]);
            } else {
                acc = concat_lang(acc, singleton(std::get<Word>(item)));
            }
        }
        return trim(acc);
    }
    if (const ReplaceAllConst* ra = std::get_if<ReplaceAllConst>(&f.fn)) {
        Transducer t = compile_replaceall(*ra, alpha);
        return transducer_image(t, args[0], alpha);
    }
    if (std::holds_alternative<ReverseFn>(f.fn)) return trim(reverse_lang(args[0]));
    return transducer_image(std::get<Transducer>(f.fn), args[0], alpha);
}

RecognizableRel backward_preimage(const StringFunction& f, const Nfa& out, const Alphabet& alpha) {
    return preimage_impl(f, out, alpha, false);
}

RecognizableRel backward_preimage_unpruned(const StringFunction& f, const Nfa& out,
                                           const Alphabet& alpha) {
    return preimage_impl(f, out, alpha, true);
}

Transducer compile_replaceall(const ReplaceAllConst& f, const Alphabet& alpha) {
    const Word& p = f.pattern;
    Transducer t;
    if (p.empty()) {
        // Empty pattern: the identity function.
        uint32_t q = t.add_state();
        t.initial = {q};
        t.final = {q};
        t.rules.push_back({q, alpha.chars(), {true, {}}, q});
        return t;
    }
    if (!alpha.contains_word(p) || !alpha.contains_word(f.replacement))
        throw AlphabetMismatch("replaceAll pattern or replacement leaves the alphabet");

    const uint32_t m = uint32_t(p.size());
    // States 0..m-1 hold the matched prefix p[0..j-1]; `flush` is final.
    for (uint32_t j = 0; j < m; ++j) t.add_state();
    uint32_t flush = t.add_state();
    t.initial = {0};
    t.final = {flush};

    // Failure table: fail[i] = longest proper border of p[0..i-1].
    std::vector<uint32_t> fail(m + 1, 0);
    for (uint32_t i = 1; i < m; ++i) {
        uint32_t k = fail[i];
        while (k > 0 && p[i] != p[k]) k = fail[k];
        fail[i + 1] = (p[i] == p[k]) ? k + 1 : 0;
    }
    auto step = [&](uint32_t j, char32_t c) {
        uint32_t k = j;
        while (k > 0 && p[k] != c) k = fail[k];
        return (p[k] == c) ? k + 1 : 0;
    };

    std::vector<char32_t> pattern_chars(p.begin(), p.end());
    std::sort(pattern_chars.begin(), pattern_chars.end());
    pattern_chars.erase(std::unique(pattern_chars.begin(), pattern_chars.end()),
                        pattern_chars.end());

    for (uint32_t j = 0; j < m; ++j) {
        const Word held = p.substr(0, j);
        CharSet warm; // handled by a dedicated rule below
        // Extending the match.
        if (j + 1 == m)
            t.rules.push_back({j, CharSet::single(Codepoint(p[j])), {false, f.replacement}, 0});
        else
            t.rules.push_back({j, CharSet::single(Codepoint(p[j])), {false, {}}, j + 1});
        warm = warm.union_with(CharSet::single(Codepoint(p[j])));
        // Mismatches that keep a nonempty border: the border ends in the
        // consumed codepoint, so the emitted text is a fixed prefix of held.
        for (char32_t c : pattern_chars) {
            if (c == p[j]) continue;
            uint32_t k = step(j, c);
            if (k == 0) continue;
            Word emitted = held;
            emitted.push_back(c);
            emitted.resize(j + 1 - k);
            t.rules.push_back({j, CharSet::single(Codepoint(c)), {false, emitted}, k});
            warm = warm.union_with(CharSet::single(Codepoint(c)));
        }
        // Everything else flushes the held prefix plus the consumed codepoint.
        CharSet cold = alpha.chars().subtract(warm);
        if (!cold.empty()) t.rules.push_back({j, cold, {true, held}, 0});
        // End of input: flush the held prefix.
        t.rules.push_back({j, std::nullopt, {false, held}, flush});
    }
    return t;
}

} // namespace rcp

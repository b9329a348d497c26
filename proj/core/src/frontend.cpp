#include "rcp/frontend.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>

#include "rcp/errors.hpp"
#include "rcp/nfa.hpp"
#include "rcp/vars.hpp"

namespace rcp {

namespace {

bool hex_digit(Codepoint c, uint32_t& out) {
    if (c >= U'0' && c <= U'9') { out = c - U'0'; return true; }
    if (c >= U'a' && c <= U'f') { out = 10 + (c - U'a'); return true; }
    if (c >= U'A' && c <= U'F') { out = 10 + (c - U'A'); return true; }
    return false;
}

// Resolves \uXXXX and \u{X..X} sequences. A backslash that does not start a
// well-formed escape stays in the word untouched, which is what SMT-LIB
// prescribes for string literals.
Word resolve_escapes(const Word& raw, size_t line, size_t col) {
    Word out;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != U'\\' || i + 1 >= raw.size() || raw[i + 1] != U'u') {
            out.push_back(raw[i]);
            continue;
        }
        uint32_t value = 0;
        uint32_t digit = 0;
        if (i + 2 < raw.size() && raw[i + 2] == U'{') {
            size_t j = i + 3;
            size_t digits = 0;
            while (j < raw.size() && hex_digit(raw[j], digit)) {
                value = value * 16 + digit;
                ++digits;
                ++j;
            }
            if (digits == 0 || digits > 6 || j >= raw.size() || raw[j] != U'}') {
                out.push_back(raw[i]);
                continue;
            }
            if (value > kMaxCodepoint)
                throw ParseError(line, col, "escape beyond U+10FFFF in string literal");
            out.push_back(static_cast<Codepoint>(value));
            i = j;
        } else {
            size_t j = i + 2;
            size_t digits = 0;
            while (j < raw.size() && digits < 4 && hex_digit(raw[j], digit)) {
                value = value * 16 + digit;
                ++digits;
                ++j;
            }
            if (digits != 4) {
                out.push_back(raw[i]);
                continue;
            }
            out.push_back(static_cast<Codepoint>(value));
            i = j - 1;
        }
    }
    return out;
}

struct Reader {
    std::string_view text;
    size_t pos = 0;
    size_t line = 1;
    size_t col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char take() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_blanks() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else {
                break;
            }
        }
    }

    static bool atom_char(char c) {
        return c != '(' && c != ')' && c != '"' && c != ';' && c != ' ' &&
               c != '\t' && c != '\r' && c != '\n';
    }

    SExpr parse_string(size_t l, size_t c) {
        take(); // opening quote
        std::string raw;
        for (;;) {
            if (eof()) throw ParseError(l, c, "unterminated string literal");
            char ch = take();
            if (ch == '"') {
                // A doubled quote is the SMT-LIB escape for one quote.
                if (!eof() && peek() == '"') {
                    raw.push_back(take());
                    continue;
                }
                break;
            }
            raw.push_back(ch);
        }
        SExpr node;
        node.kind = SExpr::Kind::string;
        node.str = resolve_escapes(from_utf8(raw), l, c);
        node.line = l;
        node.col = c;
        return node;
    }

    SExpr parse_one() {
        skip_blanks();
        if (eof()) throw ParseError(line, col, "unexpected end of input");
        size_t l = line, c = col;
        char ch = peek();
        if (ch == '(') {
            take();
            SExpr node;
            node.kind = SExpr::Kind::list;
            node.line = l;
            node.col = c;
            for (;;) {
                skip_blanks();
                if (eof()) throw ParseError(l, c, "unclosed '('");
                if (peek() == ')') {
                    take();
                    break;
                }
                node.items.push_back(parse_one());
            }
            return node;
        }
        if (ch == ')') throw ParseError(l, c, "unmatched ')'");
        if (ch == '"') return parse_string(l, c);
        SExpr node;
        node.kind = SExpr::Kind::atom;
        node.line = l;
        node.col = c;
        while (!eof() && atom_char(peek())) node.atom.push_back(take());
        return node;
    }
};

bool is_list(const SExpr& sx) { return sx.kind == SExpr::Kind::list; }
bool is_atom(const SExpr& sx) { return sx.kind == SExpr::Kind::atom; }
bool is_string(const SExpr& sx) { return sx.kind == SExpr::Kind::string; }

const std::string& head_of(const SExpr& sx) {
    static const std::string none;
    if (!is_list(sx) || sx.items.empty() || !is_atom(sx.items[0])) return none;
    return sx.items[0].atom;
}

[[noreturn]] void unsupported(const SExpr& at, const std::string& what) {
    throw UnsupportedFeature(what, what + " is not supported (line " +
                                       std::to_string(at.line) + ")");
}

// True for heads that belong to the SMT-LIB string or regex theories but
// fall outside the supported fragment. Reporting them as unsupported rather
// than unknown keeps the diagnostics honest.
bool theory_head(const std::string& h) {
    return h.rfind("str.", 0) == 0 || h.rfind("re.", 0) == 0;
}

bool bool_connective(const std::string& h) {
    return h == "or" || h == "=>" || h == "xor" || h == "ite" ||
           h == "distinct" || h == "let" || h == "forall" || h == "exists";
}

bool arith_head(const std::string& h) {
    return h == "+" || h == "-" || h == "*" || h == "div" || h == "mod" ||
           h == "<" || h == "<=" || h == ">" || h == ">=";
}

struct Ctx {
    const std::set<std::string>* vars;
    const std::map<std::string, Transducer>* transducers;
};

STerm parse_term(const SExpr& sx, const Ctx& ctx);

RegexAst parse_regex(const SExpr& sx, const Ctx& ctx) {
    if (is_atom(sx)) {
        if (sx.atom == "re.none") return re::empty();
        if (sx.atom == "re.all") return re::any_string();
        if (sx.atom == "re.allchar") return re::any_char();
        throw ParseError(sx.line, sx.col, "expected a regular expression");
    }
    if (is_string(sx))
        throw ParseError(sx.line, sx.col,
                         "string literal in regex position, wrap it in str.to_re");
    const std::string& h = head_of(sx);
    if (h.empty()) throw ParseError(sx.line, sx.col, "expected a regular expression");
    size_t n = sx.items.size();

    if (h == "str.to_re") {
        if (n != 2) throw ParseError(sx.line, sx.col, "str.to_re takes one argument");
        if (!is_string(sx.items[1]))
            unsupported(sx, "str.to_re on a non-literal term");
        return re::lit(sx.items[1].str);
    }
    if (h == "re.++" || h == "re.union" || h == "re.inter") {
        if (n < 2) throw ParseError(sx.line, sx.col, h + " takes at least one argument");
        std::vector<RegexAst> xs;
        for (size_t i = 1; i < n; ++i) xs.push_back(parse_regex(sx.items[i], ctx));
        if (h == "re.++") return re::cat(std::move(xs));
        if (h == "re.union") return re::alt(std::move(xs));
        return re::inter(std::move(xs));
    }
    if (h == "re.comp" || h == "re.*" || h == "re.+" || h == "re.opt") {
        if (n != 2) throw ParseError(sx.line, sx.col, h + " takes one argument");
        RegexAst x = parse_regex(sx.items[1], ctx);
        if (h == "re.comp") return re::comp(std::move(x));
        if (h == "re.*") return re::star(std::move(x));
        if (h == "re.+") return re::plus(std::move(x));
        return re::opt(std::move(x));
    }
    if (h == "re.range") {
        if (n != 3 || !is_string(sx.items[1]) || !is_string(sx.items[2]))
            throw ParseError(sx.line, sx.col, "re.range takes two string literals");
        const Word& lo = sx.items[1].str;
        const Word& hi = sx.items[2].str;
        // SMT-LIB gives re.range the empty language unless both bounds are
        // single characters in order.
        if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) return re::empty();
        return re::cls(CharSet::range(lo[0], hi[0]));
    }
    if (h == "_") unsupported(sx, "indexed regex operator");
    if (theory_head(h)) unsupported(sx, h);
    throw ParseError(sx.line, sx.col, "unknown regex operator " + h);
}

STerm parse_term(const SExpr& sx, const Ctx& ctx) {
    if (is_atom(sx)) {
        if (ctx.vars->count(sx.atom)) {
            STerm t;
            t.kind = STerm::Kind::var;
            t.name = sx.atom;
            return t;
        }
        if (ctx.transducers->count(sx.atom))
            throw ParseError(sx.line, sx.col,
                             "transducer " + sx.atom + " used as a term");
        throw ParseError(sx.line, sx.col, "undeclared variable " + sx.atom);
    }
    if (is_string(sx)) {
        STerm t;
        t.kind = STerm::Kind::lit;
        t.text = sx.str;
        return t;
    }
    const std::string& h = head_of(sx);
    if (h.empty()) throw ParseError(sx.line, sx.col, "expected a string term");
    size_t n = sx.items.size();

    if (h == "str.++") {
        if (n < 3) throw ParseError(sx.line, sx.col, "str.++ takes at least two arguments");
        STerm t;
        t.kind = STerm::Kind::concat;
        for (size_t i = 1; i < n; ++i) t.args.push_back(parse_term(sx.items[i], ctx));
        return t;
    }
    if (h == "str.replace_all") {
        if (n != 4) throw ParseError(sx.line, sx.col, "str.replace_all takes three arguments");
        if (!is_string(sx.items[2]) || !is_string(sx.items[3]))
            unsupported(sx, "str.replace_all with a non-literal pattern or replacement");
        STerm t;
        t.kind = STerm::Kind::replace_all;
        t.text = sx.items[2].str;
        t.text2 = sx.items[3].str;
        t.args.push_back(parse_term(sx.items[1], ctx));
        return t;
    }
    if (h == "str.reverse") {
        if (n != 2) throw ParseError(sx.line, sx.col, "str.reverse takes one argument");
        STerm t;
        t.kind = STerm::Kind::reverse;
        t.args.push_back(parse_term(sx.items[1], ctx));
        return t;
    }
    if (ctx.transducers->count(h)) {
        if (n != 2)
            throw ParseError(sx.line, sx.col, "transducer " + h + " takes one argument");
        STerm t;
        t.kind = STerm::Kind::transducer;
        t.name = h;
        t.args.push_back(parse_term(sx.items[1], ctx));
        return t;
    }
    if (h == "str.replace")
        unsupported(sx, "str.replace");
    if (theory_head(h) || h == "ite" || h == "let") unsupported(sx, h);
    if (arith_head(h)) unsupported(sx, "arithmetic");
    throw ParseError(sx.line, sx.col, "unknown operator " + h);
}

void parse_formula_into(const SExpr& sx, const Ctx& ctx, bool negated,
                        std::vector<SurfaceFormula>& out) {
    const std::string& h = head_of(sx);
    if (h.empty()) throw ParseError(sx.line, sx.col, "expected a formula");
    size_t n = sx.items.size();

    if (h == "and") {
        if (negated) unsupported(sx, "negated conjunction");
        if (n < 2) throw ParseError(sx.line, sx.col, "and takes at least one argument");
        for (size_t i = 1; i < n; ++i)
            parse_formula_into(sx.items[i], ctx, false, out);
        return;
    }
    if (h == "not") {
        if (n != 2) throw ParseError(sx.line, sx.col, "not takes one argument");
        parse_formula_into(sx.items[1], ctx, !negated, out);
        return;
    }
    if (h == "str.in_re") {
        if (n != 3) throw ParseError(sx.line, sx.col, "str.in_re takes two arguments");
        SurfaceFormula f;
        f.kind = negated ? SurfaceFormula::Kind::not_in_re : SurfaceFormula::Kind::in_re;
        f.lhs = parse_term(sx.items[1], ctx);
        f.re = parse_regex(sx.items[2], ctx);
        out.push_back(std::move(f));
        return;
    }
    if (h == "=") {
        if (n != 3)
            throw ParseError(sx.line, sx.col, "= takes exactly two operands here");
        if (negated) unsupported(sx, "disequality");
        SurfaceFormula f;
        f.kind = SurfaceFormula::Kind::eq;
        f.lhs = parse_term(sx.items[1], ctx);
        f.rhs = parse_term(sx.items[2], ctx);
        out.push_back(std::move(f));
        return;
    }
    if (h == "str.contains") {
        if (n != 3) throw ParseError(sx.line, sx.col, "str.contains takes two arguments");
        SurfaceFormula f;
        f.kind = negated ? SurfaceFormula::Kind::not_contains
                         : SurfaceFormula::Kind::contains;
        f.lhs = parse_term(sx.items[1], ctx);
        f.rhs = parse_term(sx.items[2], ctx);
        out.push_back(std::move(f));
        return;
    }
    if (bool_connective(h)) unsupported(sx, h);
    if (arith_head(h)) unsupported(sx, "arithmetic");
    if (theory_head(h)) unsupported(sx, h);
    throw ParseError(sx.line, sx.col, "expected a formula, got " + h);
}

// Decodes a transducer input label: eps, a single-character atom or literal,
// or (range "a" "z").
std::optional<CharSet> parse_input_label(const SExpr& sx) {
    if (is_atom(sx)) {
        if (sx.atom == "eps") return std::nullopt;
        Word w = from_utf8(sx.atom);
        if (w.size() != 1)
            throw MalformedTransducer("input label " + sx.atom +
                                      " is not a single character");
        return CharSet::single(w[0]);
    }
    if (is_string(sx)) {
        if (sx.str.size() != 1)
            throw MalformedTransducer("input label \"" + to_utf8(sx.str) +
                                      "\" is not a single character");
        return CharSet::single(sx.str[0]);
    }
    if (head_of(sx) == "range" && sx.items.size() == 3 && is_string(sx.items[1]) &&
        is_string(sx.items[2])) {
        const Word& lo = sx.items[1].str;
        const Word& hi = sx.items[2].str;
        if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0])
            throw MalformedTransducer("range bounds must be single characters in order");
        return CharSet::range(lo[0], hi[0]);
    }
    throw MalformedTransducer("bad input label in transition");
}

Transducer::Output parse_output_label(const SExpr& sx) {
    if (is_atom(sx) && sx.atom == "copy") return {true, {}};
    if (is_string(sx)) return {false, sx.str};
    throw MalformedTransducer("output label must be a string literal or copy");
}

} // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
    Reader r{text};
    std::vector<SExpr> forms;
    for (;;) {
        r.skip_blanks();
        if (r.eof()) break;
        forms.push_back(r.parse_one());
    }
    return forms;
}

std::pair<std::string, Transducer> parse_transducer(const SExpr& form) {
    if (!is_list(form) || form.items.size() < 2 || !is_atom(form.items[1]))
        throw MalformedTransducer("define-transducer needs a name");
    const std::string& name = form.items[1].atom;

    const SExpr* states = nullptr;
    const SExpr* init = nullptr;
    const SExpr* fin = nullptr;
    const SExpr* trans = nullptr;
    for (size_t i = 2; i < form.items.size(); ++i) {
        const SExpr& sec = form.items[i];
        const std::string& h = head_of(sec);
        const SExpr** slot = h == "states" ? &states
                           : h == "init"   ? &init
                           : h == "final"  ? &fin
                           : h == "trans"  ? &trans
                                           : nullptr;
        if (!slot)
            throw MalformedTransducer("transducer " + name +
                                      " has an unknown section " +
                                      (h.empty() ? "(not a list)" : h));
        if (*slot)
            throw MalformedTransducer("transducer " + name + " repeats section " + h);
        *slot = &sec;
    }
    if (!states) throw MalformedTransducer("transducer " + name + " has no states section");
    if (!init) throw MalformedTransducer("transducer " + name + " has no init section");
    if (!fin) throw MalformedTransducer("transducer " + name + " has no final section");

    Transducer t;
    std::map<std::string, uint32_t> index;
    for (size_t i = 1; i < states->items.size(); ++i) {
        const SExpr& q = states->items[i];
        if (!is_atom(q))
            throw MalformedTransducer("state names must be atoms in transducer " + name);
        if (!index.emplace(q.atom, t.add_state()).second)
            throw MalformedTransducer("duplicate state " + q.atom + " in transducer " + name);
    }
    auto state_of = [&](const SExpr& q) -> uint32_t {
        if (is_atom(q)) {
            auto it = index.find(q.atom);
            if (it != index.end()) return it->second;
        }
        throw MalformedTransducer("unknown state in transducer " + name);
    };
    for (size_t i = 1; i < init->items.size(); ++i)
        t.initial.push_back(state_of(init->items[i]));
    for (size_t i = 1; i < fin->items.size(); ++i)
        t.final.push_back(state_of(fin->items[i]));
    if (trans) {
        for (size_t i = 1; i < trans->items.size(); ++i) {
            const SExpr& e = trans->items[i];
            if (!is_list(e) || e.items.size() != 4)
                throw MalformedTransducer("transitions take the form (q IN OUT q') in " +
                                          name);
            Transducer::Rule rule;
            rule.src = state_of(e.items[0]);
            rule.input = parse_input_label(e.items[1]);
            rule.out = parse_output_label(e.items[2]);
            rule.dst = state_of(e.items[3]);
            t.rules.push_back(std::move(rule));
        }
    }
    t.validate();
    return {name, std::move(t)};
}

Problem parse(std::string_view text) {
    Problem p;
    std::set<std::string> declared;
    Ctx ctx{&declared, &p.transducers};

    auto declare = [&](const SExpr& form, const SExpr& name_sx, const SExpr& sort_sx) {
        if (!is_atom(name_sx))
            throw ParseError(form.line, form.col, "expected a variable name");
        if (!is_atom(sort_sx) || sort_sx.atom != "String") {
            std::string sort = is_atom(sort_sx) ? sort_sx.atom : "(composite sort)";
            throw UnsupportedFeature(sort, "only sort String is supported, got " + sort);
        }
        const std::string& name = name_sx.atom;
        if (declared.count(name))
            throw ParseError(name_sx.line, name_sx.col, name + " is already declared");
        if (p.transducers.count(name))
            throw ParseError(name_sx.line, name_sx.col,
                             name + " is already a transducer");
        declared.insert(name);
        p.declared_vars.push_back(name);
    };

    for (const SExpr& form : read_sexprs(text)) {
        const std::string& head = head_of(form);
        if (head.empty()) throw ParseError(form.line, form.col, "expected a command");
        size_t n = form.items.size();

        if (head == "set-logic") {
            if (n != 2 || !is_atom(form.items[1]))
                throw ParseError(form.line, form.col, "set-logic takes a logic name");
            p.logic = form.items[1].atom;
            if (p.logic != "QF_S" && p.logic != "QF_SLIA")
                throw UnsupportedFeature(p.logic, "logic " + p.logic +
                                                      " is not supported, use QF_S or QF_SLIA");
        } else if (head == "set-info" || head == "set-option" || head == "check-sat" ||
                   head == "get-model" || head == "exit") {
            // No effect on the problem.
        } else if (head == "declare-const") {
            if (n != 3) throw ParseError(form.line, form.col, "declare-const takes a name and a sort");
            declare(form, form.items[1], form.items[2]);
        } else if (head == "declare-fun") {
            if (n != 4) throw ParseError(form.line, form.col,
                                         "declare-fun takes a name, parameters and a sort");
            if (!is_list(form.items[2]) || !form.items[2].items.empty())
                throw UnsupportedFeature("declare-fun with parameters",
                                         "only nullary string constants can be declared");
            declare(form, form.items[1], form.items[3]);
        } else if (head == "define-transducer") {
            auto [name, t] = parse_transducer(form);
            if (declared.count(name))
                throw ParseError(form.line, form.col, name + " is already declared");
            if (!p.transducers.emplace(name, std::move(t)).second)
                throw ParseError(form.line, form.col,
                                 "transducer " + name + " is already defined");
        } else if (head == "assert") {
            if (n != 2) throw ParseError(form.line, form.col, "assert takes one formula");
            parse_formula_into(form.items[1], ctx, false, p.assertions);
        } else if (head == "push" || head == "pop" || head == "get-value" ||
                   head == "define-fun") {
            unsupported(form, head);
        } else {
            throw ParseError(form.line, form.col, "unknown command " + head);
        }
    }
    return p;
}

namespace {

// Rewrites assertions into equations plus per-variable regular constraints.
// Fresh variables are named __n<k>; equation ids follow emission order.
struct Lowerer {
    const Problem& prob;
    std::shared_ptr<VarTable> table = std::make_shared<VarTable>();
    Alphabet alpha = Alphabet::unicode();
    std::vector<EquationalConstraint> eqs;
    std::vector<std::pair<VarId, Nfa>> memberships;
    size_t next_fresh = 0;

    explicit Lowerer(const Problem& p) : prob(p) {
        for (const std::string& v : p.declared_vars) table->intern(v);
    }

    VarId fresh() {
        for (;; ++next_fresh) {
            std::string name = "__n" + std::to_string(next_fresh);
            if (!table->known(name)) {
                ++next_fresh;
                return table->intern(name);
            }
        }
    }

    VarId lookup(const STerm& t) const { return table->lookup(t.name); }

    void constrain(VarId x, Nfa a) { memberships.emplace_back(x, std::move(a)); }

    Nfa lit_nfa(const Word& w) const { return compile_regex(re::lit(w), alpha); }

    // The value of `t` as a variable, emitting whatever equations and
    // constraints that takes.
    VarId as_var(const STerm& t) {
        if (t.kind == STerm::Kind::var) return lookup(t);
        if (t.kind == STerm::Kind::lit) {
            VarId w = fresh();
            constrain(w, lit_nfa(t.text));
            return w;
        }
        VarId w = fresh();
        emit_eq(w, t);
        return w;
    }

    // Emits lhs = t for a composite t, freshening nested applications so
    // every equation has one function symbol on the right.
    void emit_eq(VarId lhs, const STerm& t) {
        uint32_t id = static_cast<uint32_t>(eqs.size());
        switch (t.kind) {
        case STerm::Kind::concat: {
            ConcatTerm ct;
            for (const STerm& a : t.args) {
                if (a.kind == STerm::Kind::lit)
                    ct.items.emplace_back(a.text);
                else
                    ct.items.emplace_back(as_var(a));
            }
            id = static_cast<uint32_t>(eqs.size());
            eqs.push_back(make_equation(id, lhs, StringFunction{std::move(ct)}));
            return;
        }
        case STerm::Kind::replace_all: {
            VarId arg = as_var(t.args[0]);
            id = static_cast<uint32_t>(eqs.size());
            eqs.push_back(make_equation(id, lhs,
                                        StringFunction{ReplaceAllConst{t.text, t.text2}},
                                        {arg}));
            return;
        }
        case STerm::Kind::reverse: {
            VarId arg = as_var(t.args[0]);
            id = static_cast<uint32_t>(eqs.size());
            eqs.push_back(make_equation(id, lhs, StringFunction{ReverseFn{}}, {arg}));
            return;
        }
        case STerm::Kind::transducer: {
            VarId arg = as_var(t.args[0]);
            id = static_cast<uint32_t>(eqs.size());
            eqs.push_back(make_equation(id, lhs,
                                        StringFunction{prob.transducers.at(t.name)},
                                        {arg}));
            return;
        }
        case STerm::Kind::var:
            eqs.push_back(make_equation(
                id, lhs, StringFunction{ConcatTerm{{ConcatTerm::Item{lookup(t)}}}}));
            return;
        case STerm::Kind::lit:
            constrain(lhs, lit_nfa(t.text));
            return;
        }
    }

    void handle_eq(const STerm& a, const STerm& b) {
        bool a_var = a.kind == STerm::Kind::var;
        bool b_var = b.kind == STerm::Kind::var;
        bool a_lit = a.kind == STerm::Kind::lit;
        bool b_lit = b.kind == STerm::Kind::lit;
        // Variable = literal carries no structure, it is a singleton
        // membership. Keeping it out of the equation list leaves each
        // variable with at most one defining equation where the input allows.
        if (a_var && b_lit) return constrain(lookup(a), lit_nfa(b.text));
        if (a_lit && b_var) return constrain(lookup(b), lit_nfa(a.text));
        if (a_lit && b_lit) {
            if (a.text == b.text) return;
            VarId w = fresh();
            constrain(w, lit_nfa(a.text));
            constrain(w, lit_nfa(b.text));
            return;
        }
        if (a_var) return emit_eq(lookup(a), b);
        if (b_var) return emit_eq(lookup(b), a);
        if (a_lit) {
            VarId w = fresh();
            constrain(w, lit_nfa(a.text));
            emit_eq(w, b);
            return;
        }
        if (b_lit) {
            VarId w = fresh();
            constrain(w, lit_nfa(b.text));
            emit_eq(w, a);
            return;
        }
        VarId w = fresh();
        emit_eq(w, a);
        emit_eq(w, b);
    }

    void handle_membership(const STerm& subject, RegexAst lang, bool positive) {
        if (!positive) lang = re::comp(std::move(lang));
        VarId v = subject.kind == STerm::Kind::var ? lookup(subject) : as_var(subject);
        constrain(v, compile_regex(lang, alpha));
    }

    // A needle is usable when it is a literal, a concatenation of usable
    // pieces, or a variable the input equates to a literal somewhere.
    std::optional<Word> needle_value(const STerm& t) const {
        switch (t.kind) {
        case STerm::Kind::lit:
            return t.text;
        case STerm::Kind::concat: {
            Word joined;
            for (const STerm& a : t.args) {
                auto part = needle_value(a);
                if (!part) return std::nullopt;
                joined += *part;
            }
            return joined;
        }
        case STerm::Kind::var:
            for (const SurfaceFormula& f : prob.assertions) {
                if (f.kind != SurfaceFormula::Kind::eq) continue;
                if (f.lhs.kind == STerm::Kind::var && f.lhs.name == t.name &&
                    f.rhs.kind == STerm::Kind::lit)
                    return f.rhs.text;
                if (f.rhs.kind == STerm::Kind::var && f.rhs.name == t.name &&
                    f.lhs.kind == STerm::Kind::lit)
                    return f.lhs.text;
            }
            return std::nullopt;
        default:
            return std::nullopt;
        }
    }

    void handle_contains(const STerm& hay, const STerm& needle, bool positive) {
        auto pat = needle_value(needle);
        if (!pat)
            throw UnsupportedFeature(
                "str.contains with a non-constant pattern",
                "str.contains needs a literal pattern or a variable equated to one");
        RegexAst lang =
            re::cat({re::any_string(), re::lit(*pat), re::any_string()});
        handle_membership(hay, std::move(lang), positive);
    }

    Normalized finish() {
        Sequent root = make_sequent(table, alpha, std::move(eqs));
        for (auto& [v, a] : memberships) root = add_constraint(root, v, a).first;
        return {std::move(root), table};
    }
};

} // namespace

Normalized normalize(const Problem& p) {
    Lowerer lo(p);
    for (const SurfaceFormula& f : p.assertions) {
        switch (f.kind) {
        case SurfaceFormula::Kind::in_re:
            lo.handle_membership(f.lhs, f.re, true);
            break;
        case SurfaceFormula::Kind::not_in_re:
            lo.handle_membership(f.lhs, f.re, false);
            break;
        case SurfaceFormula::Kind::eq:
            lo.handle_eq(f.lhs, f.rhs);
            break;
        case SurfaceFormula::Kind::contains:
            lo.handle_contains(f.lhs, f.rhs, true);
            break;
        case SurfaceFormula::Kind::not_contains:
            lo.handle_contains(f.lhs, f.rhs, false);
            break;
        }
    }
    return lo.finish();
}

} // namespace rcp

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcp/functions.hpp"
#include "rcp/regex.hpp"
#include "rcp/sequent.hpp"

namespace rcp {

// One node of the input s-expression tree. Atoms keep their raw spelling,
// string literals are unescaped into `str`. Positions are 1-based and point
// at the first character of the node.
struct SExpr {
    enum class Kind { atom, string, list };
    Kind kind = Kind::list;
    std::string atom;
    Word str;
    std::vector<SExpr> items;
    size_t line = 0;
    size_t col = 0;
};

// Reads the whole input into a sequence of top-level forms. Comments run
// from ';' to end of line. String literals double '"' to escape it and
// understand \uXXXX and \u{...} sequences. Throws ParseError.
std::vector<SExpr> read_sexprs(std::string_view text);

// A string-valued term of the surface language, before lowering.
struct STerm {
    enum class Kind { var, lit, concat, replace_all, reverse, transducer };
    Kind kind = Kind::var;
    std::string name;        // variable or transducer name
    Word text;               // literal payload, or the replace_all pattern
    Word text2;              // the replace_all replacement
    std::vector<STerm> args;
};

// One asserted constraint. Membership carries a regex, equations carry two
// terms, containment a haystack and a needle.
struct SurfaceFormula {
    enum class Kind { in_re, not_in_re, eq, contains, not_contains };
    Kind kind = Kind::eq;
    STerm lhs;
    STerm rhs;
    RegexAst re;
};

// A parsed problem: the declared variables in declaration order, any machine
// definitions, and the asserted formulas in file order.
struct Problem {
    std::string logic;
    std::vector<std::string> declared_vars;
    std::map<std::string, Transducer> transducers;
    std::vector<SurfaceFormula> assertions;
};

// Parses an SMT-LIB 2.6 strings fragment:
//
//   commands   set-logic (QF_S or QF_SLIA), set-info, set-option,
//              declare-const NAME String, declare-fun NAME () String,
//              define-transducer, assert, check-sat, get-model, exit
//   terms      variables, string literals, str.++, str.reverse,
//              str.replace_all with literal pattern and replacement,
//              application of a defined transducer
//   formulas   =, str.in_re, str.contains, not of either membership or
//              containment, and (flattened)
//   regexes    str.to_re on a literal, re.none, re.all, re.allchar,
//              re.++, re.union, re.inter, re.comp, re.*, re.+, re.opt,
//              re.range
//
// Anything outside the fragment (str.len, arithmetic, other sorts, ...)
// raises UnsupportedFeature naming the construct; malformed input raises
// ParseError with its position.
Problem parse(std::string_view text);

// Handles the machine definition extension:
//
//   (define-transducer NAME
//     (states q0 q1 ...)
//     (init q0)
//     (final q0 ...)
//     (trans (q IN OUT q') ...))
//
// IN is a single-character atom or literal, the atom eps, or
// (range "a" "z"); OUT is a literal or the atom copy. Shape problems and
// machines that fail validation raise MalformedTransducer.
std::pair<std::string, Transducer> parse_transducer(const SExpr& form);

struct Normalized {
    Sequent root;
    std::shared_ptr<const VarTable> vars;
};

// Lowers a problem to the solver's normal form over the Unicode alphabet.
// Composite terms get fresh __n<k> variables bound by equations, membership
// and containment become regular constraints (containment needs a needle
// that is a literal or a variable equated to one), and variable = literal
// becomes a singleton constraint. Nested applications split into chains of
// equations, so the result preserves chain-freeness of the input.
Normalized normalize(const Problem& p);

} // namespace rcp

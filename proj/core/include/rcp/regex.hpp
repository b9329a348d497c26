#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rcp/charset.hpp"

namespace rcp {

enum class RegexKind {
    empty,      // no words
    epsilon,    // the empty word
    literal,    // a fixed word
    char_class, // one codepoint drawn from a CharSet
    concat,
    alternation,
    star,
    plus,
    opt,
    intersection,
    complement,
    any_char,   // exactly one alphabet codepoint
    any_string, // all words over the alphabet
};

// Regex syntax tree. Plain value type; children owned by vector.
struct RegexAst {
    RegexKind kind = RegexKind::empty;
    Word text;            // literal payload
    CharSet chars;        // char_class payload
    std::vector<RegexAst> children;
};

// Builder helpers so tests and the frontend can assemble trees tersely.
namespace re {
RegexAst empty();
RegexAst eps();
RegexAst lit(Word w);
RegexAst lit(const std::string& utf8);
RegexAst cls(CharSet cs);
RegexAst cat(std::vector<RegexAst> xs);
RegexAst alt(std::vector<RegexAst> xs);
RegexAst star(RegexAst x);
RegexAst plus(RegexAst x);
RegexAst opt(RegexAst x);
RegexAst inter(std::vector<RegexAst> xs);
RegexAst comp(RegexAst x);
RegexAst any_char();
RegexAst any_string();
} // namespace re

// Deterministic rendering used by proof export and diagnostics.
std::string to_string(const RegexAst& ast);

} // namespace rcp

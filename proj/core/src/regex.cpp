#include "rcp/regex.hpp"

namespace rcp {
namespace re {

RegexAst empty() { return {RegexKind::empty, {}, {}, {}}; }
RegexAst eps() { return {RegexKind::epsilon, {}, {}, {}}; }
RegexAst lit(Word w) { return {RegexKind::literal, std::move(w), {}, {}}; }
RegexAst lit(const std::string& utf8) { return lit(from_utf8(utf8)); }
RegexAst cls(CharSet cs) { return {RegexKind::char_class, {}, std::move(cs), {}}; }
RegexAst cat(std::vector<RegexAst> xs) { return {RegexKind::concat, {}, {}, std::move(xs)}; }
RegexAst alt(std::vector<RegexAst> xs) { return {RegexKind::alternation, {}, {}, std::move(xs)}; }
RegexAst star(RegexAst x) { return {RegexKind::star, {}, {}, {std::move(x)}}; }
RegexAst plus(RegexAst x) { return {RegexKind::plus, {}, {}, {std::move(x)}}; }
RegexAst opt(RegexAst x) { return {RegexKind::opt, {}, {}, {std::move(x)}}; }
RegexAst inter(std::vector<RegexAst> xs) { return {RegexKind::intersection, {}, {}, std::move(xs)}; }
RegexAst comp(RegexAst x) { return {RegexKind::complement, {}, {}, {std::move(x)}}; }
RegexAst any_char() { return {RegexKind::any_char, {}, {}, {}}; }
RegexAst any_string() { return {RegexKind::any_string, {}, {}, {}}; }

} // namespace re

namespace {

void render(const RegexAst& ast, std::string& out) {
    auto join = [&](const char* op) {
        out += '(';
        for (size_t i = 0; i < ast.children.size(); ++i) {
            if (i) out += op;
            render(ast.children[i], out);
        }
        out += ')';
    };
    switch (ast.kind) {
    case RegexKind::empty: out += "[]"; break;
    case RegexKind::epsilon: out += "()"; break;
    case RegexKind::literal:
        out += '"';
        out += to_utf8(ast.text);
        out += '"';
        break;
    case RegexKind::char_class: {
        out += '[';
        for (const auto& iv : ast.chars.intervals()) {
            out += to_utf8(Word(1, char32_t(iv.lo)));
            if (iv.hi != iv.lo) {
                out += '-';
                out += to_utf8(Word(1, char32_t(iv.hi)));
            }
        }
        out += ']';
        break;
    }
    case RegexKind::concat: join(""); break;
    case RegexKind::alternation: join("|"); break;
    case RegexKind::star: render(ast.children[0], out); out += '*'; break;
    case RegexKind::plus: render(ast.children[0], out); out += '+'; break;
    case RegexKind::opt: render(ast.children[0], out); out += '?'; break;
    case RegexKind::intersection: join("&"); break;
    case RegexKind::complement: out += '~'; render(ast.children[0], out); break;
    case RegexKind::any_char: out += '.'; break;
    case RegexKind::any_string: out += ".*"; break;
    }
}

} // namespace

std::string to_string(const RegexAst& ast) {
    std::string out;
    render(ast, out);
    return out;
}

} // namespace rcp

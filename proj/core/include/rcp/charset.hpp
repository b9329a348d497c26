#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rcp {

using Codepoint = uint32_t;
using Word = std::u32string;

inline constexpr Codepoint kMaxCodepoint = 0x10FFFF;

// Set of codepoints stored as sorted, disjoint, non-adjacent closed intervals.
// All automaton labels are CharSets, so alphabet size never shows up in the
// representation of a transition.
class CharSet {
public:
    struct Interval {
        Codepoint lo;
        Codepoint hi; // inclusive
        friend auto operator<=>(const Interval&, const Interval&) = default;
    };

    CharSet() = default;

    static CharSet single(Codepoint c) { return range(c, c); }
    static CharSet range(Codepoint lo, Codepoint hi);
    // Accepts arbitrary intervals; sorts, merges overlaps and adjacency.
    static CharSet from_intervals(std::vector<Interval> ivs);
    static CharSet from_word_chars(const Word& w);

    bool empty() const { return ivs_.empty(); }
    bool contains(Codepoint c) const;
    // Number of codepoints in the set.
    uint64_t count() const;
    // Smallest codepoint; undefined on empty sets.
    Codepoint min() const { return ivs_.front().lo; }
    // Smallest codepoint >= c, if any.
    bool min_at_least(Codepoint c, Codepoint& out) const;

    CharSet union_with(const CharSet& o) const;
    CharSet intersect(const CharSet& o) const;
    CharSet subtract(const CharSet& o) const;
    bool is_subset_of(const CharSet& o) const { return subtract(o).empty(); }

    const std::vector<Interval>& intervals() const { return ivs_; }

    friend bool operator==(const CharSet&, const CharSet&) = default;

private:
    std::vector<Interval> ivs_;
};

// The universe automata and regexes operate over. Unicode covers all
// codepoints, ASCII the first 128; custom alphabets carry an explicit set.
class Alphabet {
public:
    enum class Kind { unicode, ascii, custom };

    static Alphabet unicode();
    static Alphabet ascii();
    static Alphabet custom(CharSet chars);

    Kind kind() const { return kind_; }
    const CharSet& chars() const { return chars_; }
    bool contains(Codepoint c) const { return chars_.contains(c); }
    bool contains_word(const Word& w) const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    Alphabet(Kind k, CharSet cs) : kind_(k), chars_(std::move(cs)) {}
    Kind kind_ = Kind::unicode;
    CharSet chars_;
};

// UTF-8 round-trips for diagnostics, file formats and model printing.
std::string to_utf8(const Word& w);
Word from_utf8(const std::string& s);

} // namespace rcp

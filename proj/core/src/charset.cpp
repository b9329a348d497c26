#include "rcp/charset.hpp"

#include <algorithm>

#include "rcp/errors.hpp"

namespace rcp {

CharSet CharSet::range(Codepoint lo, Codepoint hi) {
    CharSet cs;
    if (lo <= hi) cs.ivs_.push_back({lo, hi});
    return cs;
}

CharSet CharSet::from_intervals(std::vector<Interval> ivs) {
    std::erase_if(ivs, [](const Interval& iv) { return iv.lo > iv.hi; });
    std::sort(ivs.begin(), ivs.end());
    CharSet cs;
    for (const Interval& iv : ivs) {
        if (!cs.ivs_.empty() && iv.lo <= cs.ivs_.back().hi + 1 && cs.ivs_.back().hi + 1 != 0) {
            cs.ivs_.back().hi = std::max(cs.ivs_.back().hi, iv.hi);
        } else {
            cs.ivs_.push_back(iv);
        }
    }
    return cs;
}

CharSet CharSet::from_word_chars(const Word& w) {
    std::vector<Interval> ivs;
    ivs.reserve(w.size());
    for (char32_t c : w) ivs.push_back({static_cast<Codepoint>(c), static_cast<Codepoint>(c)});
    return from_intervals(std::move(ivs));
}

bool CharSet::contains(Codepoint c) const {
    auto it = std::upper_bound(ivs_.begin(), ivs_.end(), c,
                               [](Codepoint v, const Interval& iv) { return v < iv.lo; });
    if (it == ivs_.begin()) return false;
    --it;
    return c <= it->hi;
}

uint64_t CharSet::count() const {
    uint64_t n = 0;
    for (const Interval& iv : ivs_) n += uint64_t(iv.hi) - iv.lo + 1;
    return n;
}

bool CharSet::min_at_least(Codepoint c, Codepoint& out) const {
    for (const Interval& iv : ivs_) {
        if (iv.hi < c) continue;
        out = std::max(iv.lo, c);
        return true;
    }
    return false;
}

CharSet CharSet::union_with(const CharSet& o) const {
    std::vector<Interval> ivs = ivs_;
    ivs.insert(ivs.end(), o.ivs_.begin(), o.ivs_.end());
    return from_intervals(std::move(ivs));
}

CharSet CharSet::intersect(const CharSet& o) const {
    CharSet cs;
    size_t i = 0, j = 0;
    while (i < ivs_.size() && j < o.ivs_.size()) {
        const Interval& a = ivs_[i];
        const Interval& b = o.ivs_[j];
        Codepoint lo = std::max(a.lo, b.lo);
        Codepoint hi = std::min(a.hi, b.hi);
        if (lo <= hi) cs.ivs_.push_back({lo, hi});
        if (a.hi < b.hi) ++i; else ++j;
    }
    return cs;
}

CharSet CharSet::subtract(const CharSet& o) const {
    CharSet cs;
    size_t j = 0;
    for (Interval a : ivs_) {
        Codepoint cur = a.lo;
        while (j < o.ivs_.size() && o.ivs_[j].hi < cur) ++j;
        size_t k = j;
        while (cur <= a.hi) {
            if (k >= o.ivs_.size() || o.ivs_[k].lo > a.hi) {
                cs.ivs_.push_back({cur, a.hi});
                break;
            }
            const Interval& b = o.ivs_[k];
            if (b.lo > cur) cs.ivs_.push_back({cur, b.lo - 1});
            if (b.hi >= a.hi) break;
            cur = b.hi + 1;
            ++k;
        }
    }
    return cs;
}

Alphabet Alphabet::unicode() { return Alphabet(Kind::unicode, CharSet::range(0, kMaxCodepoint)); }
Alphabet Alphabet::ascii() { return Alphabet(Kind::ascii, CharSet::range(0, 127)); }
Alphabet Alphabet::custom(CharSet chars) { return Alphabet(Kind::custom, std::move(chars)); }

bool Alphabet::contains_word(const Word& w) const {
    for (char32_t c : w)
        if (!chars_.contains(static_cast<Codepoint>(c))) return false;
    return true;
}

std::string to_utf8(const Word& w) {
    std::string out;
    out.reserve(w.size());
    for (char32_t cp : w) {
        uint32_t c = static_cast<uint32_t>(cp);
        if (c < 0x80) {
            out.push_back(char(c));
        } else if (c < 0x800) {
            out.push_back(char(0xC0 | (c >> 6)));
            out.push_back(char(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(char(0xE0 | (c >> 12)));
            out.push_back(char(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(char(0x80 | (c & 0x3F)));
        } else {
            out.push_back(char(0xF0 | (c >> 18)));
            out.push_back(char(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(char(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(char(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

Word from_utf8(const std::string& s) {
    Word out;
    size_t i = 0;
    auto cont = [&](size_t k) -> uint32_t {
        unsigned char c = static_cast<unsigned char>(s[k]);
        if ((c & 0xC0) != 0x80) throw Error("invalid UTF-8 continuation byte");
        return c & 0x3F;
    };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        uint32_t cp;
        size_t len;
        if (c < 0x80) { cp = c; len = 1; }
        else if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
        else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
        else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
        else throw Error("invalid UTF-8 lead byte");
        if (i + len > s.size()) throw Error("truncated UTF-8 sequence");
        for (size_t k = 1; k < len; ++k) cp = (cp << 6) | cont(i + k);
        if (cp > kMaxCodepoint) throw Error("UTF-8 codepoint out of range");
        out.push_back(static_cast<char32_t>(cp));
        i += len;
    }
    return out;
}

} // namespace rcp

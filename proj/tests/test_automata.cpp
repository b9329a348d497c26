#include <doctest.h>

#include <algorithm>
#include <set>

#include "rcp/errors.hpp"
#include "rcp/nfa.hpp"
#include "support/oracle.hpp"
#include "support/random_gen.hpp"

using namespace rcp;
using namespace rcp::testing;

namespace {

const std::vector<Codepoint> kAb = {'a', 'b'};

Word W(const char* s) { return from_utf8(s); }

Alphabet ab_alpha() {
    return Alphabet::custom(CharSet::from_intervals({{'a', 'a'}, {'b', 'b'}}));
}

} // namespace

TEST_CASE("charset basics") {
    CharSet s = CharSet::from_intervals({{'d', 'f'}, {'a', 'b'}, {'c', 'c'}});
    CHECK(s.intervals().size() == 1); // a-b, c, d-f merge into a-f
    CHECK(s.contains('e'));
    CHECK(!s.contains('g'));
    CHECK(s.count() == 6);

    CharSet t = CharSet::range('e', 'z');
    CHECK(s.intersect(t) == CharSet::range('e', 'f'));
    CHECK(s.union_with(t) == CharSet::range('a', 'z'));
    CHECK(s.subtract(t) == CharSet::range('a', 'd'));
    CHECK(s.subtract(s).empty());

    Codepoint out = 0;
    CHECK(s.min_at_least('b', out));
    CHECK(out == 'b');
    CHECK(!CharSet().min_at_least(0, out));
}

TEST_CASE("utf8 round trip") {
    Word w = W("ab");
    w.push_back(char32_t(0x00E9));   // two-byte
    w.push_back(char32_t(0x4E2D));   // three-byte
    w.push_back(char32_t(0x1F600));  // four-byte
    CHECK(from_utf8(to_utf8(w)) == w);
}

TEST_CASE("compile and accept simple regexes") {
    Alphabet alpha = ab_alpha();
    Nfa a = compile_regex(re::cat({re::star(re::lit("a")), re::lit("b")}), alpha);
    CHECK(accepts(a, W("b")));
    CHECK(accepts(a, W("aaab")));
    CHECK(!accepts(a, W("ba")));
    CHECK(!accepts(a, W("")));

    Nfa none = compile_regex(re::empty(), alpha);
    CHECK(!is_empty(none).has_value());

    Nfa eps = compile_regex(re::eps(), alpha);
    CHECK(accepts(eps, W("")));
    CHECK(!accepts(eps, W("a")));

    CHECK_THROWS_AS(compile_regex(re::lit("xyz"), alpha), AlphabetMismatch);
}

TEST_CASE("intersection and emptiness witness") {
    Alphabet alpha = ab_alpha();
    // (10)+ meets (01)+ is empty; over a/b here.
    Nfa x = compile_regex(re::plus(re::lit("ab")), alpha);
    Nfa y = compile_regex(re::plus(re::lit("ba")), alpha);
    CHECK(!is_empty(intersect(x, y)).has_value());

    Nfa z = intersect(x, compile_regex(re::any_string(), alpha));
    auto witness = is_empty(z);
    REQUIRE(witness.has_value());
    CHECK(*witness == W("ab"));
}

TEST_CASE("witness is shortest then lexicographically least") {
    Alphabet alpha = ab_alpha();
    Nfa a = compile_regex(re::alt({re::lit("ba"), re::lit("ab"), re::lit("bbb")}), alpha);
    auto w = is_empty(a);
    REQUIRE(w.has_value());
    CHECK(*w == W("ab"));
}

TEST_CASE("enumerate orders by length then lexicographically") {
    Alphabet alpha = ab_alpha();
    Nfa a = compile_regex(re::star(re::alt({re::lit("a"), re::lit("b")})), alpha);
    auto words = enumerate(a, 2);
    std::vector<Word> expect = {W(""), W("a"), W("b"), W("aa"), W("ab"), W("ba"), W("bb")};
    CHECK(words == expect);

    Nfa plus_ab = compile_regex(re::plus(re::lit("ab")), alpha);
    auto w2 = enumerate(plus_ab, 8);
    std::vector<Word> expect2 = {W("ab"), W("abab"), W("ababab"), W("abababab")};
    CHECK(w2 == expect2);
}

TEST_CASE("inclusion verdicts and counterexamples") {
    Alphabet alpha = ab_alpha();
    Nfa all = compile_regex(re::any_string(), alpha);
    Nfa astar = compile_regex(re::star(re::lit("a")), alpha);
    CHECK(includes(all, astar, alpha).verdict == Inclusion::Verdict::yes);
    auto inc = includes(astar, all, alpha);
    CHECK(inc.verdict == Inclusion::Verdict::no);
    REQUIRE(inc.counterexample.has_value());
    CHECK(*inc.counterexample == W("b"));

    // Tiny cap trips on a machine that needs several subset states.
    Rng rng(7);
    Nfa big = random_nfa(rng, kAb, 8);
    big = union_lang(big, compile_regex(re::comp(re::plus(re::lit("ab"))), alpha));
    CHECK(includes(big, all, alpha, 1).verdict == Inclusion::Verdict::capped);
}

TEST_CASE("complement respects the state cap") {
    Alphabet alpha = ab_alpha();
    // (a|b)*a(a|b)^3 needs 2^4 subset states.
    RegexAst any = re::alt({re::lit("a"), re::lit("b")});
    Nfa a = compile_regex(
        re::cat({re::star(any), re::lit("a"), any, any, any}), alpha);
    CHECK_THROWS_AS(complement(a, alpha, 4), StateCapExceeded);
    Nfa c = complement(a, alpha, 100);
    CHECK(accepts(c, W("")));
    CHECK(!accepts(c, W("abbb")));
}

TEST_CASE("reverse concat union on samples") {
    Alphabet alpha = ab_alpha();
    Nfa ab = singleton(W("ab"));
    Nfa ba = reverse_lang(ab);
    CHECK(accepts(ba, W("ba")));
    CHECK(!accepts(ba, W("ab")));

    Nfa cat = concat_lang(singleton(W("a")), singleton(W("b")));
    CHECK(accepts(cat, W("ab")));
    CHECK(enumerate(cat, 4).size() == 1);

    Nfa uni = union_lang(singleton(W("a")), singleton(W("b")));
    auto words = enumerate(uni, 1);
    CHECK(words == std::vector<Word>{W("a"), W("b")});
}

TEST_CASE("singleton and universality detection") {
    Alphabet alpha = ab_alpha();
    auto one = as_singleton(singleton(W("ab")));
    REQUIRE(one.has_value());
    CHECK(*one == W("ab"));
    CHECK(!as_singleton(compile_regex(re::star(re::lit("a")), alpha)).has_value());
    CHECK(!as_singleton(empty_lang()).has_value());
    // Two paths spelling the same word still count as one member.
    Nfa dup = union_lang(singleton(W("ab")), singleton(W("ab")));
    auto d = as_singleton(dup);
    REQUIRE(d.has_value());
    CHECK(*d == W("ab"));

    CHECK(is_universal_lang(universal(alpha), alpha));
    CHECK(!is_universal_lang(singleton(W("a")), alpha));
}

TEST_CASE("exact length streaming and achievable lengths") {
    Alphabet alpha = ab_alpha();
    Nfa a = compile_regex(re::plus(re::lit("ab")), alpha);
    std::vector<Word> got;
    for_each_word_of_length(a, 4, [&](const Word& w) {
        got.push_back(w);
        return true;
    });
    CHECK(got == std::vector<Word>{W("abab")});

    auto ach = achievable_lengths(a, 7);
    std::vector<bool> expect = {false, false, true, false, true, false, true, false};
    CHECK(ach == expect);

    // Early stop is honoured.
    Nfa all = compile_regex(re::any_string(), alpha);
    int count = 0;
    bool finished = for_each_word_of_length(all, 3, [&](const Word&) {
        return ++count < 3;
    });
    CHECK(!finished);
    CHECK(count == 3);
}

TEST_CASE("membership agrees with the structural oracle on random regexes") {
    Alphabet alpha = ab_alpha();
    auto words = all_words(kAb, 5);
    Rng rng(2024);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        RegexAst ast = random_regex(rng, kAb, 3);
        Nfa a;
        try {
            a = compile_regex(ast, alpha);
        } catch (const StateCapExceeded&) {
            continue; // deep complements may blow the default cap
        }
        for (const Word& w : words) {
            bool lhs = accepts(a, w);
            bool rhs = oracle_matches(ast, w, alpha);
            if (lhs != rhs) {
                CAPTURE(to_string(ast));
                CAPTURE(to_utf8(w));
                REQUIRE(lhs == rhs);
            }
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("product language equals membership conjunction on random machines") {
    Alphabet alpha = ab_alpha();
    auto words = all_words(kAb, 4);
    Rng rng(99);
    for (int i = 0; i < 80; ++i) {
        Nfa a = random_nfa(rng, kAb, 4);
        Nfa b = random_nfa(rng, kAb, 4);
        Nfa prod = intersect(a, b);
        for (const Word& w : words)
            CHECK(accepts(prod, w) == (accepts(a, w) && accepts(b, w)));
    }
}

TEST_CASE("complement flips membership on random machines") {
    Alphabet alpha = ab_alpha();
    auto words = all_words(kAb, 4);
    Rng rng(123);
    for (int i = 0; i < 40; ++i) {
        Nfa a = random_nfa(rng, kAb, 4);
        Nfa c = complement(a, alpha);
        for (const Word& w : words) CHECK(accepts(c, w) != accepts(a, w));
    }
}

TEST_CASE("enumerate matches oracle word set on random finite languages") {
    Rng rng(55);
    for (int i = 0; i < 50; ++i) {
        std::vector<Word> words;
        Nfa a = random_finite_nfa(rng, kAb, 6, 3, &words);
        auto got = enumerate(a, 3);
        std::sort(words.begin(), words.end(), [](const Word& x, const Word& y) {
            if (x.size() != y.size()) return x.size() < y.size();
            return x < y;
        });
        CHECK(got == words);
    }
}

TEST_CASE("determinize preserves the language") {
    Alphabet alpha = ab_alpha();
    auto words = all_words(kAb, 4);
    Rng rng(42);
    for (int i = 0; i < 40; ++i) {
        Nfa a = random_nfa(rng, kAb, 5);
        auto det = determinize(a, alpha);
        REQUIRE(!det.capped);
        for (const Word& w : words) CHECK(accepts(det.dfa, w) == accepts(a, w));
    }
}

TEST_CASE("trim and epsilon removal preserve the language") {
    auto words = all_words(kAb, 4);
    Rng rng(1717);
    for (int i = 0; i < 40; ++i) {
        Nfa a = random_nfa(rng, kAb, 5);
        Nfa t = trim(a);
        Nfa e = remove_epsilon(a);
        Nfa s = ensure_single_initial(remove_epsilon(a));
        CHECK(s.initial.size() == 1);
        for (const Word& w : words) {
            CHECK(accepts(t, w) == accepts(a, w));
            CHECK(accepts(e, w) == accepts(a, w));
            CHECK(accepts(s, w) == accepts(a, w));
        }
    }
}

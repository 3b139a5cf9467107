#include <algorithm>
#include <random>

#include "doctest.h"
#include "forest/terms.hpp"

using namespace forest;

namespace {
const Alphabet ab{"a", "b"};
const Alphabet abc{"a", "b", "c"};

// Rebuilds a forest with every sibling list shuffled.
Forest shuffled(const Forest& f, std::mt19937& rng) {
  std::vector<Tree> trees;
  for (const auto& t : f.trees()) trees.emplace_back(t.label(), shuffled(t.children(), rng));
  std::shuffle(trees.begin(), trees.end(), rng);
  return Forest(std::move(trees));
}
}  // namespace

TEST_SUITE("terms") {
  TEST_CASE("parse examples") {
    CHECK(parse_forest("0", ab).empty());
    const Forest f = parse_forest("a(b(a)+a+b)+a(b)", ab);
    CHECK(f.trees().size() == 2);
    CHECK(f.size() == 7);
    CHECK_THROWS_AS(parse_forest("a(", ab), ParseError);
    CHECK_THROWS_AS(parse_forest("c", ab), ParseError);
    CHECK_THROWS_AS(parse_forest("a+[]", ab), ParseError);
    CHECK(parse_forest(" a ( b ) + b ", ab) == parse_forest("b+a(b)", ab));
  }

  TEST_CASE("parse errors carry a position") {
    try {
      parse_forest("a(b+)", ab);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 4);
    }
  }

  TEST_CASE("context parsing") {
    CHECK(parse_context("[]", ab).is_identity());
    const Context p = parse_context("a(b(a)+a+b)+a([])", ab);
    CHECK(apply_context(parse_forest("b", ab), p) == parse_forest("a(b(a)+a+b)+a(b)", ab));
    CHECK_THROWS_AS(parse_context("a+b", ab), ParseError);
    CHECK_THROWS_AS(parse_context("a([])+[]", ab), ParseError);
  }

  TEST_CASE("canonical form") {
    CHECK(parse_forest("a(b(a)+a+b)+a(b)", ab) == parse_forest("a(b)+a(a+b(a)+b)", ab));
    CHECK(render(parse_forest("a(b(a)+a+b)+a(b)", ab)) == render(parse_forest("a(b)+a(a+b(a)+b)", ab)));
    CHECK(canonical(Forest{}).empty());
    CHECK(parse_forest("b+a", ab) == parse_forest("a+b", ab));
  }

  TEST_CASE("add and adjoin") {
    const Forest a = parse_forest("a", ab);
    CHECK(add(Forest{}, a) == a);
    CHECK(add(a, a) == parse_forest("a+a", ab));
    CHECK(add(a, a).size() == 2);
    CHECK(add(parse_forest("a(b)", ab), parse_forest("b", ab)) == add(parse_forest("b", ab), parse_forest("a(b)", ab)));
    CHECK(adjoin(Forest{}, "a") == a);
    CHECK(render(adjoin(parse_forest("b", ab), "a")) == "a(b)");
    CHECK(render(adjoin(parse_forest("a+b", abc), "c")) == "c(a+b)");
  }

  TEST_CASE("substitution") {
    const Forest b = parse_forest("b", abc);
    CHECK(apply_context(b, Context{}) == b);
    CHECK(render(apply_context(b, parse_context("a([])", abc))) == "a(b)");
    CHECK(apply_context(parse_forest("b+b", abc), parse_context("a([]+c)+d", Alphabet{"a", "b", "c", "d"})) ==
          parse_forest("a(b+b+c)+d", Alphabet{"a", "b", "c", "d"}));
  }

  TEST_CASE("composition puts p into q") {
    const Context p = parse_context("a([])", ab);
    CHECK(compose(p, Context{}) == p);
    CHECK(compose(Context{}, parse_context("a([]+b)", ab)) == parse_context("a([]+b)", ab));
    CHECK(compose(parse_context("a([])", ab), parse_context("b([])", ab)) == parse_context("b(a([]))", ab));
  }

  TEST_CASE("enumeration examples") {
    const Alphabet a{"a"};
    const auto zero = enumerate_forests(a, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].empty());
    const auto two = enumerate_forests(a, 2);
    REQUIRE(two.size() == 4);
    CHECK(render(two[1]) == "a");
    CHECK(std::count(two.begin(), two.end(), parse_forest("a+a", a)) == 1);
    CHECK(std::count(two.begin(), two.end(), parse_forest("a(a)", a)) == 1);
    const auto one = enumerate_forests(ab, 1);
    REQUIRE(one.size() == 3);
    CHECK(render(one[1]) == "a");
    CHECK(render(one[2]) == "b");
  }

  TEST_CASE("enumeration is duplicate free and ordered by size") {
    const auto fs = enumerate_forests(ab, 5);
    for (std::size_t i = 1; i < fs.size(); ++i) {
      CHECK(fs[i - 1].size() <= fs[i].size());
      if (fs[i - 1].size() == fs[i].size()) CHECK(fs[i - 1] < fs[i]);
    }
    // Counts of unlabelled-by-size forests over two letters: 1, 2, 7, 26, 107, 458.
    std::vector<std::size_t> by_size(6);
    for (const auto& f : fs) ++by_size[f.size()];
    CHECK(by_size == std::vector<std::size_t>{1, 2, 7, 26, 107, 458});
  }

  TEST_CASE("horizontal monoid laws up to 5 nodes") {
    const auto fs = enumerate_forests(ab, 3);
    for (const auto& f : fs) {
      CHECK(add(f, Forest{}) == f);
      for (const auto& g : fs) {
        CHECK(add(f, g) == add(g, f));
        for (const auto& h : fs) CHECK(add(add(f, g), h) == add(f, add(g, h)));
      }
    }
    const auto big = enumerate_forests(ab, 5);
    for (std::size_t i = 0; i < big.size(); i += 37)
      for (std::size_t j = 0; j < big.size(); j += 41) CHECK(add(big[i], big[j]) == add(big[j], big[i]));
  }

  TEST_CASE("action laws up to 4 nodes") {
    const auto fs = enumerate_forests(ab, 4);
    const auto cs = enumerate_contexts(ab, 2);
    for (const auto& s : fs) CHECK(apply_context(s, Context{}) == s);
    for (std::size_t i = 0; i < fs.size(); i += 3)
      for (const auto& p : cs)
        for (const auto& q : cs) CHECK(apply_context(fs[i], compose(p, q)) == apply_context(apply_context(fs[i], p), q));
    const auto c4 = enumerate_contexts(ab, 4);
    for (std::size_t i = 0; i < c4.size(); i += 5)
      for (std::size_t j = 0; j < c4.size(); j += 7)
        for (const auto& s : {Forest{}, parse_forest("a", ab), parse_forest("b(a)+a", ab)})
          CHECK(apply_context(s, compose(c4[i], c4[j])) == apply_context(apply_context(s, c4[i]), c4[j]));
  }

  TEST_CASE("parser round trip") {
    for (const auto& f : enumerate_forests(ab, 5)) CHECK(parse_forest(render(f), ab) == f);
    for (const auto& p : enumerate_contexts(ab, 3)) CHECK(parse_context(render(p), ab) == p);
  }

  TEST_CASE("canonical form ignores sibling order") {
    std::mt19937 rng(11);
    for (const auto& f : enumerate_forests(abc, 4)) {
      const Forest g = shuffled(f, rng);
      CHECK(g == f);
      CHECK(canonical(g) == f);
      CHECK(canonical(canonical(g)) == canonical(g));
    }
  }

  TEST_CASE("contexts are counted without the hole") {
    const auto cs = enumerate_contexts(Alphabet{"a"}, 1);
    // [] ; a([]) ; []+a
    CHECK(cs.size() == 3);
  }
}

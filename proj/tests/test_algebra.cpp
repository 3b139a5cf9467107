#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "forest/division.hpp"
#include "forest/syntactic.hpp"
#include "forest/wreath.hpp"
#include "oracles.hpp"

using namespace forest;
using namespace fixtures;

namespace {

AlgebraTables or_tables() {
  AlgebraTables t;
  t.h_size = t.v_size = 2;
  t.add = t.mul = t.act = {0, 1, 1, 1};
  return t;
}

AlgebraTables random_mutation(AlgebraTables t, std::mt19937_64& rng) {
  const int which = static_cast<int>(rng() % 3);
  auto& table = which == 0 ? t.add : which == 1 ? t.mul : t.act;
  const std::size_t bound = which == 1 ? t.v_size : t.h_size;
  table[rng() % table.size()] = static_cast<Elem>(rng() % bound);
  return t;
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("validation examples") {
    CHECK(validate_algebra(or_tables()).ok());
    auto constant = or_tables();
    constant.act = {0, 0, 1, 1};
    const auto r = validate_algebra(constant);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->law == "faithful");
    CHECK(oracles::confirms(constant, *r.violation));
    AlgebraTables z2;
    z2.h_size = z2.v_size = 2;
    z2.add = z2.mul = z2.act = {0, 1, 1, 0};
    CHECK(validate_algebra(z2).ok());
  }

  TEST_CASE("derived insertion table is unique and checked") {
    const auto a = FiniteForestAlgebra::from_tables(or_tables());
    for (Elem v = 0; v < 2; ++v)
      for (Elem h = 0; h < 2; ++h) CHECK(a.ins(v, h) == (v | h));
    auto bad = or_tables();
    bad.ins = std::vector<Elem>{0, 0, 1, 1};
    const auto r = validate_algebra(bad);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->law == "insertion");
    CHECK(oracles::confirms(bad, *r.violation));
  }

  TEST_CASE("non-commutative horizontal monoid is rejected") {
    // left-zero semigroup with an identity adjoined: x + y = x for x, y != 0
    AlgebraTables t;
    t.v_size = 1;
    t.mul = {0};
    t.h_size = 3;
    t.add = {0, 1, 2, 1, 1, 1, 2, 2, 2};
    t.act = {0, 1, 2};
    const auto r = validate_algebra(t);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->law == "h_commutative");
    CHECK(oracles::confirms(t, *r.violation));
  }

  TEST_CASE("validation agrees with an independent law scan on random mutations") {
    std::mt19937_64 rng(2024);
    const std::vector<AlgebraTables> seeds{or_tables(), flat_algebra(cyclic_monoid(2)).tables(),
                                           flat_algebra(chain_monoid(3)).tables(),
                                           flat_algebra(subset_monoid(2)).tables()};
    for (int i = 0; i < 400; ++i) {
      AlgebraTables t = random_mutation(seeds[i % seeds.size()], rng);
      t.ins.reset();
      const auto r = validate_algebra(t);
      CHECK(r.ok() == oracles::direct_law_scan(t));
      if (!r.ok()) CHECK(oracles::confirms(t, *r.violation));
    }
  }

  TEST_CASE("evaluation") {
    const auto r = contains_a();
    CHECK(r.morphism().eval(parse_forest("b+b(b)", r.alphabet())) == 0);
    CHECK(r.morphism().eval(parse_forest("b(a)+b", r.alphabet())) == 1);
    CHECK(r.morphism().eval(Forest{}) == r.algebra().zero());
    CHECK(r.morphism().eval(Context{}) == r.algebra().one());
    CHECK_THROWS(r.morphism().eval(parse_forest("c")));
  }

  TEST_CASE("acceptance") {
    CHECK(contains_a().accepts(parse_forest("a")));
    CHECK_FALSE(contains_a().accepts(Forest{}));
    CHECK(parity().accepts(parse_forest("a+a")));
    CHECK_FALSE(parity().accepts(parse_forest("a(b)")));
  }

  TEST_CASE("evaluation is a homomorphism up to 4 nodes") {
    for (const auto& r : {contains_a(), parity(), contains_a_redundant(), a_has_b_child()}) {
      const auto& m = r.morphism();
      const auto& a = r.algebra();
      const auto fs = enumerate_forests(r.alphabet(), 3);
      const auto cs = enumerate_contexts(r.alphabet(), 2);
      for (const auto& s : fs) {
        for (const auto& t : fs) CHECK(m.eval(add(s, t)) == a.add(m.eval(s), m.eval(t)));
        for (const auto& p : cs) CHECK(m.eval(apply_context(s, p)) == a.act(m.eval(s), m.eval(p)));
      }
      for (const auto& p : cs)
        for (const auto& q : cs) CHECK(m.eval(compose(p, q)) == a.mul(m.eval(p), m.eval(q)));
    }
  }

  TEST_CASE("syntactic algebra") {
    const auto red = contains_a_redundant();
    const auto syn = SyntacticAlgebra::of(red);
    CHECK(red.algebra().h_size() == 3);
    CHECK(syn.algebra().h_size() == 2);
    CHECK(syn.algebra().v_size() == 2);
    for (const auto& f : enumerate_forests(red.alphabet(), 6))
      CHECK(syn.recognizer().accepts(f) == red.accepts(f));
    const auto twice = SyntacticAlgebra::of(syn.recognizer());
    CHECK(twice.algebra().h_size() == syn.algebra().h_size());
    CHECK(twice.algebra().v_size() == syn.algebra().v_size());

    const auto none = SyntacticAlgebra::of(Recognizer(contains_a().morphism(), {false, false}));
    CHECK(none.algebra().h_size() == 1);
    CHECK(none.algebra().v_size() == 1);
  }

  TEST_CASE("syntactic witness terms evaluate to their classes") {
    const auto syn = SyntacticAlgebra::of(a_has_b_child());
    const auto& m = syn.recognizer().morphism();
    for (Elem h = 0; h < syn.algebra().h_size(); ++h) CHECK(m.eval(syn.h_term(h)) == h);
    for (Elem v = 0; v < syn.algebra().v_size(); ++v) CHECK(m.eval(syn.v_term(v)) == v);
    for (Elem a = 0; a < syn.algebra().h_size(); ++a)
      for (Elem b = 0; b < syn.algebra().h_size(); ++b) {
        const Elem v = syn.distinguishing(a, b);
        if (a == b) {
          CHECK(v == kNone);
          continue;
        }
        REQUIRE(v != kNone);
        CHECK(syn.recognizer().accepting(syn.algebra().act(a, v)) != syn.recognizer().accepting(syn.algebra().act(b, v)));
      }
  }

  TEST_CASE("flat algebras") {
    CHECK(flat_algebra(or_monoid()).h_idempotent());
    CHECK_FALSE(flat_algebra(cyclic_monoid(2)).h_idempotent());
    CHECK(flat_algebra(cyclic_monoid(2)).h_commutative());
    CHECK(flat_algebra(trivial_monoid()).h_size() == 1);
    MonoidTable noncomm{3, {0, 1, 2, 1, 1, 1, 2, 2, 2}, 0};
    CHECK_THROWS_AS(flat_algebra(noncomm), AlgebraError);
  }

  TEST_CASE("wreath products") {
    const auto orr = flat_algebra(or_monoid());
    const auto w = wreath(orr, orr);
    CHECK(w.algebra.h_size() == 4);
    CHECK(w.algebra.v_size() == 8);
    CHECK_FALSE(check_homomorphism(w.algebra, orr, w.pi_h, w.pi_v).has_value());
    CHECK(validate_algebra(w.algebra.tables()).ok());
    // act((h2,h1),(f,v1)) = (h2 + f(h1), h1 v1)
    for (Elem h = 0; h < 4; ++h)
      for (Elem v = 0; v < 8; ++v) {
        const auto [h2, h1] = w.decode_h(h);
        const auto [f, v1] = w.decode_v(v);
        CHECK(w.algebra.act(h, v) == w.encode_h(orr.act(h2, f[h1]), orr.act(h1, v1)));
      }
    const auto triv = wreath(flat_algebra(trivial_monoid()), orr);
    CHECK(triv.algebra.h_size() == orr.h_size());
    CHECK(triv.algebra.v_size() == orr.v_size());
    CHECK(triv.algebra.tables().act == orr.tables().act);
    CHECK_THROWS_AS(wreath(orr, orr, 4), BudgetExceeded);
  }

  TEST_CASE("generated subalgebras") {
    const auto z2 = flat_algebra(cyclic_monoid(2));
    const auto none = generate(z2, {}, {});
    CHECK(none.hs == std::vector<Elem>{z2.zero()});
    CHECK(none.vs == std::vector<Elem>{z2.one()});
    const auto full = generate(z2, {}, {1});
    CHECK(full.hs.size() == 2);
    CHECK(full.vs.size() == 2);
  }

  TEST_CASE("division") {
    const auto orr = flat_algebra(or_monoid());
    const auto z2 = flat_algebra(cyclic_monoid(2));
    TmDivisionWitness<FiniteForestAlgebra> id{{0, 1}, {0, 1}, {0, 1}};
    CHECK(verify_tm_division(orr, orr, id).ok);
    const auto as_div = tm_to_division(orr, orr, id);
    CHECK(verify_division(orr, orr, as_div).ok);
    CHECK(verify_tm_division(orr, orr, division_to_tm(orr, orr, as_div)).ok);

    TmDivisionWitness<FiniteForestAlgebra> bad{{0, 1}, {1, 0}, {0, 1}};
    CHECK_FALSE(verify_tm_division(orr, orr, bad).ok);
    CHECK_THROWS_AS(tm_to_division(orr, orr, bad), std::invalid_argument);

    // OR divides OR x Z/2 through the first projection.
    const auto prod = product(orr, z2);
    TmDivisionWitness<FiniteForestAlgebra> proj{{0, 2}, {0, 1}, {0, 2}};
    REQUIRE(verify_tm_division(orr, prod, proj).ok);
    const auto d = tm_to_division(orr, prod, proj);
    CHECK(verify_division(orr, prod, d).ok);
    CHECK(verify_tm_division(orr, prod, division_to_tm(orr, prod, d)).ok);

    CHECK(search_division(orr, orr).has_value());
    CHECK_FALSE(search_division(z2, orr).has_value());
    const auto triv = flat_algebra(trivial_monoid());
    CHECK(search_division(triv, z2).has_value());
    CHECK(search_division(triv, flat_algebra(chain_monoid(3))).has_value());
  }
}

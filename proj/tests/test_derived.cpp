#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "forest/decide.hpp"
#include "forest/derived.hpp"

using namespace forest;
using namespace fixtures;

namespace {

using Pair = std::pair<Elem, Elem>;

std::shared_ptr<const PairAlgebra> pairs_of(const Recognizer& r, const KDefAlgebra& kd) {
  return std::make_shared<const PairAlgebra>(PairAlgebra::build(r.morphism(), kd.beta()));
}

Pair image_pair(const PairAlgebra& pa, const Forest& s) {
  return {pa.alpha().morphism().eval(s), pa.beta().morphism().eval(s)};
}
Pair image_pair(const PairAlgebra& pa, const Context& p) {
  return {pa.alpha().morphism().eval(p), pa.beta().morphism().eval(p)};
}

}  // namespace

TEST_SUITE("derived") {
  TEST_CASE("a morphism paired with itself gives the diagonal") {
    const auto r = contains_a();
    const auto pa = PairAlgebra::build(r.morphism(), r.morphism());
    CHECK(pa.h_pairs().size() == 2);
    for (const auto& [x, y] : pa.h_pairs()) CHECK(x == y);
    for (const auto& [x, y] : pa.v_pairs()) CHECK(x == y);
  }

  TEST_CASE("contains-a against beta_0") {
    const auto kd = build_kdef_algebra(binary(), 0);
    const auto pa = pairs_of(contains_a(), kd);
    // empty forest, a forest without a, a forest with a
    CHECK(pa->h_pairs().size() == 3);
    const auto d = DerivedCategory::build(pa);
    CHECK(d.category().num_objects() == 2);
    CHECK(d.category().num_harrows() == 3);
  }

  TEST_CASE("pair closure equals the image of small terms") {
    for (const auto& [r, k] : std::vector<std::pair<Recognizer, std::size_t>>{
             {contains_a(unary()), 1}, {parity(unary()), 1}, {contains_a(), 0}, {a_has_b_child(), 0}}) {
      const auto kd = build_kdef_algebra(r.alphabet(), k);
      const auto pa = pairs_of(r, kd);
      std::set<Pair> seen_h, seen_v;
      for (const auto& s : enumerate_forests(r.alphabet(), 6)) seen_h.insert(image_pair(*pa, s));
      for (const auto& p : enumerate_contexts(r.alphabet(), 6)) seen_v.insert(image_pair(*pa, p));
      CHECK(seen_h == std::set<Pair>(pa->h_pairs().begin(), pa->h_pairs().end()));
      CHECK(seen_v == std::set<Pair>(pa->v_pairs().begin(), pa->v_pairs().end()));
    }
  }

  TEST_CASE("replayed terms evaluate to their pairs") {
    const auto kd = build_kdef_algebra(binary(), 1);
    const auto pa = pairs_of(a_has_b_child(), kd);
    for (Elem i = 0; i < pa->h_pairs().size(); ++i) CHECK(image_pair(*pa, pa->h_term(i)) == pa->h_pairs()[i]);
    for (Elem i = 0; i < pa->v_pairs().size(); ++i) CHECK(image_pair(*pa, pa->v_term(i)) == pa->v_pairs()[i]);
    CHECK(pa->h_term(pa->find_h({pa->alpha().morphism().eval(Forest{}), pa->beta().morphism().eval(Forest{})})).empty());
  }

  TEST_CASE("derived category is well defined on terms") {
    for (const auto& [r, k] : std::vector<std::pair<Recognizer, std::size_t>>{
             {contains_a(unary()), 1}, {parity(unary()), 1}, {parity(), 0}}) {
      const auto kd = build_kdef_algebra(r.alphabet(), k);
      const auto pa = pairs_of(r, kd);
      const auto d = DerivedCategory::build(pa);
      const auto& c = d.category();
      CHECK_FALSE(find_category_violation(c.raw()).has_value());
      for (const auto& s : enumerate_forests(r.alphabet(), 3)) {
        const auto [h1, h2] = image_pair(*pa, s);
        const Elem c_s = d.harrow_of(h1, h2);
        REQUIRE(c_s != kNone);
        CHECK(c.h_end(c_s) == d.object_of(h2));
        for (const auto& p : enumerate_contexts(r.alphabet(), 3)) {
          const auto [v1, v2] = image_pair(*pa, p);
          const Elem u = d.arrow_of(d.object_of(h2), v1, v2);
          REQUIRE(u != kNone);
          const auto [g1, g2] = image_pair(*pa, apply_context(s, p));
          CHECK(c.act(c_s, u) == d.harrow_of(g1, g2));
          CHECK(c.end(u) == d.object_of(g2));
        }
      }
    }
  }

  TEST_CASE("both directions of the decomposition") {
    const std::size_t k = 1;
    const auto w = lt_wreath_recognizer(unary(), k, lt_spec_contains("a"));
    REQUIRE(w.pi_ok);
    const auto pa = pairs_of(contains_a(unary()), w.kdef);
    const auto d = DerivedCategory::build(pa);

    const auto cov = dct_backward(d, w.flat, w.letters);
    CHECK(verify_covering(d.category(), w.flat, cov).ok());

    const auto tm = dct_forward(d, w.flat, cov);
    const Wreath<FlatSubsetAlgebra> target(w.flat, pa->beta().algebra());
    CHECK(verify_tm_division(pa->alpha().algebra(), target, tm).ok);

    auto bad = w.letters;
    bad[0].v = pa->beta().algebra().one();
    if (bad[0].v == w.letters[0].v) bad[0].v = pa->beta().algebra().v_size() - 1;
    CHECK_THROWS_AS(dct_backward(d, w.flat, bad), FactorizationError);

    // With a constant left coordinate only beta_1 is left, which cannot see
    // an a below the roots.
    const auto wb = lt_wreath_recognizer(binary(), k, lt_spec_contains("a"));
    const auto db = DerivedCategory::build(pairs_of(contains_a(), wb.kdef));
    CHECK(verify_covering(db.category(), wb.flat, dct_backward(db, wb.flat, wb.letters)).ok());
    auto blind = wb.letters;
    for (auto& l : blind)
      for (auto& f : l.f) f = wb.flat.one();
    CHECK_THROWS_AS(dct_backward(db, wb.flat, blind), FactorizationError);
  }

  TEST_CASE("canonical cover gives a forward witness") {
    const auto kd = build_kdef_algebra(unary(), 1);
    const auto pa = pairs_of(contains_a(unary()), kd);
    const auto d = DerivedCategory::build(pa);
    const auto cc = canonical_flat_cover(d.category());
    REQUIRE(cc.injectivity(d.category()).ok());
    const auto keep = cc.reduce(d.category());
    const FlatSubsetAlgebra flat(keep.size());
    const auto cov = cc.project(keep);
    REQUIRE(verify_covering(d.category(), flat, cov).ok());
    const auto tm = dct_forward(d, flat, cov);
    CHECK(verify_tm_division(pa->alpha().algebra(), Wreath<FlatSubsetAlgebra>(flat, pa->beta().algebra()), tm).ok);

    auto broken = cov;
    broken.harrow[0].clear();
    CHECK_THROWS_AS(dct_forward(d, flat, broken), std::invalid_argument);
  }
}

#include "doctest.h"
#include "fixtures.hpp"
#include "forest/category.hpp"
#include "forest/json_io.hpp"

using namespace forest;
using namespace fixtures;

namespace {

DiagramNode leaf(Elem c) { return {DiagramNode::Kind::HalfArrow, c, {}, 0}; }
DiagramNode node(Elem u, std::vector<DiagramNode> kids) { return {DiagramNode::Kind::Arrow, u, std::move(kids), 0}; }

// In a one-object flat category over a commutative monoid every node
// contributes its id once: the value is the product of all ids.
Elem flat_value(const MonoidTable& m, const std::vector<DiagramNode>& ns) {
  Elem acc = m.identity;
  for (const auto& n : ns) {
    acc = m.op[acc * m.size + n.id];
    acc = m.op[acc * m.size + flat_value(m, n.children)];
  }
  return acc;
}

std::size_t count_nodes(const std::vector<DiagramNode>& ns) {
  std::size_t n = 0;
  for (const auto& x : ns) n += 1 + count_nodes(x.children);
  return n;
}

}  // namespace

TEST_SUITE("category") {
  TEST_CASE("validation") {
    const auto c = one_object_category(flat_algebra(or_monoid()));
    CHECK(c.num_objects() == 1);
    CHECK(c.num_harrows() == 2);
    CHECK(c.num_arrows() == 2);
    CHECK_FALSE(find_category_violation(c.raw()).has_value());

    RawCategory broken = one_object_category(flat_algebra(chain_monoid(3))).raw();
    // Redirect one composite so that (1 2) 0 != 1 (2 0).
    for (auto& [u, v, w] : broken.comp)
      if (u == 2 && v == 0) w = 1;
    const auto v = find_category_violation(broken);
    REQUIRE(v.has_value());
    CHECK_THROWS_AS(ForestCategory::from_raw(broken), CategoryError);
  }

  TEST_CASE("derived categories validate") {
    const auto d = derived_case("d", contains_a(unary()), 1);
    CHECK_FALSE(find_category_violation(d.category->raw()).has_value());
    CHECK(d.category->objects_idempotent_commutative());
  }

  TEST_CASE("diagram evaluation") {
    const auto z3 = cyclic_monoid(3);
    const auto c = one_object_category(flat_algebra(z3));
    for (Elem h = 0; h < 3; ++h) CHECK(eval_diagram(c, Diagram{{leaf(h)}}) == h);

    const Diagram d{{node(1, {leaf(2), leaf(1)}), leaf(2)}};
    CHECK(eval_diagram(c, d) == flat_value(z3, d.roots));
    CHECK(support(c, d).count() == 3);
    CHECK(support(c, d).test(2));
    CHECK(support(c, d).test(1));
    CHECK(support(c, d).test(3 + 1));
    CHECK(rootsum(c, d) == 0);

    for (const auto& e : enumerate_diagrams(c, 5)) {
      CHECK(count_nodes(e.roots) <= 5);
      const Elem v = eval_diagram(c, e);
      CHECK(v == flat_value(z3, e.roots));
      CHECK(eval_diagram(c, e, EvalMode::InsertLeftFold) == v);
      CHECK(eval_diagram(c, e, EvalMode::InsertRightFold) == v);
    }
  }

  TEST_CASE("parses agree on two-object and derived categories") {
    std::vector<SuiteCategory> cats;
    for (const auto& s : two_object_specs())
      cats.push_back({s.name, std::make_shared<const ForestCategory>(
                                  category_from_actions(or_monoid(), s.harrows, s.end, s.generators))});
    cats.push_back(derived_case("d", contains_a(unary()), 1));
    for (const auto& sc : cats)
      for (const auto& e : enumerate_diagrams(*sc.category, 4)) {
        const Elem v = eval_diagram(*sc.category, e);
        CHECK(eval_diagram(*sc.category, e, EvalMode::InsertLeftFold) == v);
        CHECK(eval_diagram(*sc.category, e, EvalMode::InsertRightFold) == v);
        CHECK(sc.category->h_end(v) == rootsum(*sc.category, e));
      }
  }

  TEST_CASE("endpoint mismatch is rejected") {
    const auto s = two_object_specs()[3];  // chain3 up: half-arrow 0 ends at 0, arrow 0 -> 1 exists
    const auto c = category_from_actions(or_monoid(), s.harrows, s.end, s.generators);
    Elem from1 = kNone;
    for (Elem u = 0; u < c.num_arrows(); ++u)
      if (c.start(u) == 1) from1 = u;
    REQUIRE(from1 != kNone);
    CHECK_THROWS_AS(eval_diagram(c, Diagram{{node(from1, {leaf(0)})}}), CategoryError);
  }

  TEST_CASE("identity checks") {
    const auto orc = one_object_category(flat_algebra(or_monoid()));
    const auto r = check_identities(orc);
    CHECK(r.precondition);
    CHECK(r.all_hold());
    CHECK(check_derived_identities(orc).all_hold());

    const auto z2 = one_object_category(flat_algebra(cyclic_monoid(2)));
    const auto bad = check_identities(z2);
    REQUIRE(bad.horizontal_idempotence.has_value());
    CHECK(bad.horizontal_idempotence->ids == std::vector<Elem>{1});
    CHECK_FALSE(check_derived_identities(z2).all_hold());

    const auto d = derived_case("d", contains_a(unary()), 1);
    CHECK(check_identities(*d.category).all_hold());
  }

  TEST_CASE("horizontal transfer on two-object categories") {
    for (const auto& s : two_object_specs()) {
      const auto c = category_from_actions(or_monoid(), s.harrows, s.end, s.generators);
      const auto rep = check_derived_identities(c);
      CHECK(rep.multicontexts_checked > 0);
      if (check_identities(c).all_hold()) CHECK(rep.all_hold());
    }
    const auto s = two_object_specs()[5];  // chain3 top
    const auto c = category_from_actions(or_monoid(), s.harrows, s.end, s.generators);
    REQUIRE(check_identities(c).all_hold());
    const auto rep = check_derived_identities(c, 4);
    CHECK(rep.all_hold());
    CHECK(rep.multicontexts_checked > check_derived_identities(c).multicontexts_checked);
  }

  TEST_CASE("brute force") {
    const auto z2 = one_object_category(flat_algebra(cyclic_monoid(2)));
    const auto w = brute_force_global_ic(z2, 2);
    REQUIRE(w.has_value());
    CHECK(support(z2, w->d1) == support(z2, w->d2));
    CHECK(rootsum(z2, w->d1) == rootsum(z2, w->d2));
    CHECK(eval_diagram(z2, w->d1) != eval_diagram(z2, w->d2));

    const auto orc = one_object_category(flat_algebra(or_monoid()));
    CHECK_FALSE(brute_force_global_ic(orc, 4).has_value());
    for (const auto& s : two_object_specs())
      CHECK_FALSE(
          brute_force_global_ic(category_from_actions(or_monoid(), s.harrows, s.end, s.generators), 1).has_value());
    CHECK_THROWS_AS(brute_force_global_ic(orc, 4, 1), BudgetExceeded);
  }

  TEST_CASE("canonical cover") {
    const auto orc = one_object_category(flat_algebra(or_monoid()));
    const auto cov = canonical_flat_cover(orc);
    CHECK(cov.injectivity(orc).ok());
    const auto flat = FlatSubsetAlgebra(cov.universe);
    CHECK(verify_covering(orc, flat, cov.project()).ok());
    const auto keep = cov.reduce(orc);
    CHECK(keep.size() <= cov.universe);
    CHECK(verify_covering(orc, FlatSubsetAlgebra(keep.size()), cov.project(keep)).ok());

    const auto z2 = one_object_category(flat_algebra(cyclic_monoid(2)));
    const auto zc = canonical_flat_cover(z2);
    const auto inj = zc.injectivity(z2);
    CHECK(inj.has("b(ii)"));
    CHECK_FALSE(verify_covering(z2, FlatSubsetAlgebra(zc.universe), zc.project()).ok());

    auto empty = cov.project();
    empty.harrow[0].clear();
    const auto rep = verify_covering(orc, flat, empty);
    CHECK(rep.has("nonempty"));

    CHECK_THROWS_AS(canonical_flat_cover(orc, 3), BudgetExceeded);
  }

  TEST_CASE("json round trip") {
    for (const auto& s : two_object_specs()) {
      const auto c = category_from_actions(or_monoid(), s.harrows, s.end, s.generators);
      const auto back = ForestCategory::from_raw(category_from_json(to_json(c)));
      CHECK(back.num_arrows() == c.num_arrows());
      CHECK(to_json(back) == to_json(c));
    }
  }
}

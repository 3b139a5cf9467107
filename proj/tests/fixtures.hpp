#pragma once

// Curated recognizers and the category suite shared by the unit tests and
// the acceptance binary.

#include <memory>
#include <string>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/category.hpp"
#include "forest/derived.hpp"
#include "forest/kdefinite.hpp"

namespace fixtures {

using namespace forest;

inline std::shared_ptr<const FiniteForestAlgebra> shared(FiniteForestAlgebra a) {
  return std::make_shared<const FiniteForestAlgebra>(std::move(a));
}

inline Alphabet unary() { return Alphabet{"a"}; }
inline Alphabet binary() { return Alphabet{"a", "b"}; }

/// "contains an a" through flat OR; b maps to the identity.
inline Recognizer contains_a(const Alphabet& al = binary()) {
  std::vector<Elem> letters;
  for (const auto& l : al.labels()) letters.push_back(l == "a" ? 1 : 0);
  return Recognizer(Morphism(shared(flat_algebra(or_monoid())), al, letters), {false, true});
}

/// Even number of a's through flat Z/2.
inline Recognizer parity(const Alphabet& al = binary()) {
  std::vector<Elem> letters;
  for (const auto& l : al.labels()) letters.push_back(l == "a" ? 1 : 0);
  return Recognizer(Morphism(shared(flat_algebra(cyclic_monoid(2))), al, letters), {true, false});
}

/// contains-a through the 3-chain under max: b reaches a state that the
/// language cannot tell from the empty forest.
inline Recognizer contains_a_redundant() {
  return Recognizer(Morphism(shared(flat_algebra(chain_monoid(3))), binary(), {2, 1}), {false, false, true});
}

inline Recognizer empty_language(const Alphabet& al = binary()) {
  return Recognizer(Morphism(shared(flat_algebra(trivial_monoid())), al, std::vector<Elem>(al.size(), 0)), {false});
}

inline Recognizer universal_language(const Alphabet& al = binary()) {
  return Recognizer(Morphism(shared(flat_algebra(trivial_monoid())), al, std::vector<Elem>(al.size(), 0)), {true});
}

/// "some a has a b child", built from ==_2 classes.
inline Recognizer a_has_b_child() { return lt_recognizer(binary(), 2, lt_spec_child("a", "b")).recognizer; }

/// Independent check of "some a has a b child" by recursion on the term.
inline bool has_a_with_b_child(const Forest& f) {
  for (const auto& t : f.trees()) {
    if (t.label() == "a")
      for (const auto& c : t.children().trees())
        if (c.label() == "b") return true;
    if (has_a_with_b_child(t.children())) return true;
  }
  return false;
}

inline std::size_t count_label(const Forest& f, const std::string& label) {
  std::size_t n = 0;
  for (const auto& t : f.trees()) n += (t.label() == label) + count_label(t.children(), label);
  return n;
}

// ------------------------------------------------------------ category suite

struct SuiteCategory {
  std::string name;
  std::shared_ptr<const ForestCategory> category;
  /// Largest brute-force bound that fits the memory budget.
  std::size_t brute_force_limit = 6;
};

inline MonoidTable monoid_product(const MonoidTable& a, const MonoidTable& b) {
  MonoidTable m;
  m.size = a.size * b.size;
  m.identity = static_cast<Elem>(a.identity * b.size + b.identity);
  m.op.resize(m.size * m.size);
  for (Elem x = 0; x < m.size; ++x)
    for (Elem y = 0; y < m.size; ++y)
      m.op[x * m.size + y] = static_cast<Elem>(a.op[(x / b.size) * a.size + y / b.size] * b.size +
                                               b.op[(x % b.size) * b.size + y % b.size]);
  return m;
}

inline SuiteCategory derived_case(const std::string& name, const Recognizer& r, std::size_t k,
                                  std::size_t bf_limit = 6) {
  const auto kd = build_kdef_algebra(r.alphabet(), k);
  auto pa = std::make_shared<const PairAlgebra>(PairAlgebra::build(r.morphism(), kd.beta()));
  const auto d = DerivedCategory::build(pa);
  return {name, std::make_shared<const ForestCategory>(d.category()), bf_limit};
}

/// Two objects {0, 1} under OR; half-arrow monoids with an end map onto it.
struct TwoObjectSpec {
  std::string name;
  MonoidTable harrows;
  std::vector<Elem> end;
  std::vector<ArrowSpec> generators;
};

inline std::vector<TwoObjectSpec> two_object_specs() {
  const auto or2 = monoid_product(or_monoid(), or_monoid());
  const auto z2or = monoid_product(cyclic_monoid(2), or_monoid());
  return {
      {"2obj orxor loops", or2, {0, 0, 1, 1}, {{0, 0, {1, 1}}, {0, 0, {0, 1}}}},
      {"2obj orxor swap", or2, {0, 0, 1, 1}, {{0, 1, {3, 2}}}},
      {"2obj z2xor loop", z2or, {0, 1, 0, 1}, {{0, 0, {0, 2}}}},
      {"2obj chain3 up", chain_monoid(3), {0, 1, 1}, {{0, 1, {2}}}},
      {"2obj chain3 down", chain_monoid(3), {0, 1, 1}, {{1, 0, {0, 0}}}},
      {"2obj chain3 top", chain_monoid(3), {0, 0, 1}, {{0, 1, {2, 2}}, {1, 1, {2}}}},
      {"2obj chain3 twist", chain_monoid(3), {0, 0, 1}, {{0, 0, {0, 1}}, {0, 0, {1, 0}}}},
      {"2obj subset2 collapse", subset_monoid(2), {0, 1, 1, 1}, {{0, 0, {0}}, {1, 0, {0, 0, 0}}}},
      {"2obj subset2 up", subset_monoid(2), {0, 1, 1, 1}, {{0, 1, {2}}}},
      {"2obj subset2 merge", subset_monoid(2), {0, 1, 1, 1}, {{1, 1, {1, 3, 1}}}},
  };
}

inline std::vector<SuiteCategory> category_suite() {
  std::vector<SuiteCategory> out;
  auto one = [&](const std::string& name, const FiniteForestAlgebra& a) {
    out.push_back({name, std::make_shared<const ForestCategory>(one_object_category(a)), 6});
  };
  one("flat or", flat_algebra(or_monoid()));
  one("flat z2", flat_algebra(cyclic_monoid(2)));
  one("flat z3", flat_algebra(cyclic_monoid(3)));
  one("flat trivial", flat_algebra(trivial_monoid()));
  one("flat chain3", flat_algebra(chain_monoid(3)));
  one("flat chain4", flat_algebra(chain_monoid(4)));
  one("flat subset2", flat_algebra(subset_monoid(2)));
  one("or x z2", product(flat_algebra(or_monoid()), flat_algebra(cyclic_monoid(2))));
  one("k1 types over a", build_kdef_algebra(unary(), 1).algebra());
  for (const auto& s : two_object_specs())
    out.push_back({s.name,
                   std::make_shared<const ForestCategory>(
                       category_from_actions(or_monoid(), s.harrows, s.end, s.generators)),
                   6});
  out.push_back(derived_case("derived contains-a {a} k0", contains_a(unary()), 0));
  out.push_back(derived_case("derived contains-a {a} k1", contains_a(unary()), 1));
  out.push_back(derived_case("derived parity {a} k0", parity(unary()), 0));
  out.push_back(derived_case("derived parity {a} k1", parity(unary()), 1));
  out.push_back(derived_case("derived contains-a {a,b} k0", contains_a(), 0));
  out.push_back(derived_case("derived parity {a,b} k0", parity(), 0));
  out.push_back(derived_case("derived a-has-b-child k0", a_has_b_child(), 0));
  return out;
}

}  // namespace fixtures

#pragma once

// Finite forest categories given by explicit tables, forest/context diagrams
// over them, the three local identities for global idempotence and
// commutativity, and division of categories by forest algebras.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/bitset.hpp"
#include "forest/closure.hpp"
#include "forest/wreath.hpp"

namespace forest {

class CategoryError : public std::runtime_error {
 public:
  explicit CategoryError(Violation v);
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Unvalidated category data.  comp holds (u, v, uv), act holds (c, u, cu)
/// and ins holds (u, c, ins(u, c)).
struct RawCategory {
  MonoidTable objects;
  MonoidTable harrows;
  std::vector<Elem> harrow_end;
  std::vector<std::pair<Elem, Elem>> arrows;  // (start, end)
  std::vector<Elem> identity;                 // per object
  std::vector<std::tuple<Elem, Elem, Elem>> comp, act, ins;
};

class ForestCategory {
 public:
  /// Checks every axiom; throws CategoryError with the first violation.
  static ForestCategory from_raw(const RawCategory& raw);
  /// Builds the lookup tables without checking the axioms (shape errors
  /// still throw).
  static ForestCategory trusted(const RawCategory& raw);

  std::size_t num_objects() const { return objects_.size; }
  std::size_t num_harrows() const { return harrows_.size; }
  std::size_t num_arrows() const { return start_.size(); }

  Elem obj_add(Elem x, Elem y) const { return objects_.op[x * objects_.size + y]; }
  Elem obj_zero() const { return objects_.identity; }
  Elem h_add(Elem c, Elem d) const { return harrows_.op[c * harrows_.size + d]; }
  Elem h_zero() const { return harrows_.identity; }
  Elem h_end(Elem c) const { return h_end_[c]; }
  Elem start(Elem u) const { return start_[u]; }
  Elem end(Elem u) const { return end_[u]; }
  Elem identity(Elem x) const { return identity_[x]; }
  /// uv, or kNone when end(u) != start(v).
  Elem comp(Elem u, Elem v) const;
  /// cu, or kNone when end(c) != start(u).
  Elem act(Elem c, Elem u) const;
  Elem ins(Elem u, Elem c) const { return ins_[u * harrows_.size + c]; }

  /// Arrows with the given start, in increasing id order.
  const std::vector<Elem>& out(Elem x) const { return out_[x]; }
  /// Half-arrows with the given end.
  const std::vector<Elem>& harrows_to(Elem x) const { return to_[x]; }

  const RawCategory& raw() const { return raw_; }
  bool objects_idempotent_commutative() const;

 private:
  ForestCategory() = default;
  RawCategory raw_;
  MonoidTable objects_, harrows_;
  std::vector<Elem> h_end_, start_, end_, identity_;
  std::vector<Elem> pos_;                 // arrow -> index in out(start)
  std::vector<std::vector<Elem>> comp_;   // u -> by pos of v
  std::vector<std::vector<Elem>> act_;    // c -> by pos of u
  std::vector<Elem> ins_;
  std::vector<std::vector<Elem>> out_, to_;
};

std::optional<Violation> find_category_violation(const RawCategory& raw);

/// The one-object category of a forest algebra.
ForestCategory one_object_category(const FiniteForestAlgebra& a);

/// An arrow given by its start, end and action on HArr(start) (indexed by
/// position in the list of half-arrows ending at start).
struct ArrowSpec {
  Elem start = 0, end = 0;
  std::vector<Elem> action;
};

/// The category whose arrows are the closure of `generators` under
/// composition and insertion (plus identities), arrows being identified with
/// their actions.  Throws CategoryError when the closure needs an action
/// that is not a function into the right hom-set, or the result violates an
/// axiom.
ForestCategory category_from_actions(const MonoidTable& objects, const MonoidTable& harrows,
                                     const std::vector<Elem>& harrow_end,
                                     const std::vector<ArrowSpec>& generators,
                                     std::size_t max_arrows = 10'000);

// ------------------------------------------------------------------ diagrams

struct DiagramNode {
  enum class Kind { HalfArrow, Arrow, Hole };
  Kind kind = Kind::HalfArrow;
  Elem id = 0;  // half-arrow id, arrow id, or hole object
  std::vector<DiagramNode> children;
  std::size_t hole_index = 0;  // for holes in multicontexts
};

/// A forest of diagram nodes.  Forest diagrams have no holes, context
/// diagrams one, multicontext diagrams several (distinguished by
/// hole_index).
struct Diagram {
  std::vector<DiagramNode> roots;
};

enum class EvalMode { SumFirst, InsertLeftFold, InsertRightFold };

/// Value of a forest diagram; throws CategoryError on an endpoint mismatch.
Elem eval_diagram(const ForestCategory& c, const Diagram& d, EvalMode mode = EvalMode::SumFirst);
/// Value of a context diagram (an arrow from the hole object).
Elem eval_context_diagram(const ForestCategory& c, const Diagram& d);
/// Value of a multicontext at the given half-arrows (by hole_index).
Elem eval_multicontext(const ForestCategory& c, const Diagram& d, const std::vector<Elem>& args);
/// Support: half-arrow c is bit c, arrow u is bit |HArr| + u.
Bitset support(const ForestCategory& c, const Diagram& d);
Elem rootsum(const ForestCategory& c, const Diagram& d);
std::string render(const Diagram& d);

/// Every forest diagram with between 1 and `max_nodes` nodes, up to sibling
/// order.
std::vector<Diagram> enumerate_diagrams(const ForestCategory& c, std::size_t max_nodes);
/// Multicontext diagrams with holes of the given objects (each used once)
/// and at most `max_nodes` non-hole nodes.
std::vector<Diagram> enumerate_multicontexts(const ForestCategory& c,
                                             const std::vector<Elem>& hole_objects,
                                             std::size_t max_nodes);

// ------------------------------------------------------ identity checking

struct IdentityFailure {
  std::string identity;
  std::vector<Elem> ids;  // instantiating ids in the order of the identity
  std::string detail;
};

struct IdentityReport {
  bool precondition = true;  // objects idempotent and commutative
  std::optional<IdentityFailure> loop_removal, horizontal_absorption, horizontal_idempotence;
  bool all_hold() const { return !loop_removal && !horizontal_absorption && !horizontal_idempotence; }
};

IdentityReport check_identities(const ForestCategory& c);

struct DerivedIdentityReport {
  std::optional<IdentityFailure> vertical_idempotence, horizontal_swap, nested_insertion_variant,
      horizontal_transfer;
  std::size_t multicontexts_checked = 0;
  bool all_hold() const {
    return !vertical_idempotence && !horizontal_swap && !nested_insertion_variant && !horizontal_transfer;
  }
};

/// Horizontal transfer is checked on multicontexts with at most
/// `transfer_bound` non-hole nodes.
DerivedIdentityReport check_derived_identities(const ForestCategory& c, std::size_t transfer_bound = 2);

struct GlobalIcWitness {
  Diagram d1, d2;
};

/// Searches forest diagrams with at most `max_nodes` nodes for two with the
/// same support and rootsum but different values.  Throws BudgetExceeded
/// when more than `max_keys` distinct (support, value) pairs arise.
std::optional<GlobalIcWitness> brute_force_global_ic(const ForestCategory& c, std::size_t max_nodes,
                                                     std::size_t max_keys = 4'000'000);

// ------------------------------------------------------------------ division

template <ForestAlgebraLike A>
struct Covering {
  std::vector<std::vector<typename A::H>> harrow;  // K(c) per half-arrow
  std::vector<std::vector<typename A::V>> arrow;   // K(u) per arrow
};

struct CoveringReport {
  std::vector<std::string> failures;  // one entry per violated clause instance kind
  bool ok() const { return failures.empty(); }
  bool has(const std::string& clause) const;
};

template <ForestAlgebraLike A>
CoveringReport verify_covering(const ForestCategory& c, const A& alg, const Covering<A>& cov,
                               std::size_t max_failures = 8) {
  using H = typename A::H;
  using V = typename A::V;
  CoveringReport rep;
  auto fail = [&](const std::string& clause, const std::string& what) {
    if (rep.failures.size() < max_failures) rep.failures.push_back(clause + ": " + what);
  };
  if (cov.harrow.size() != c.num_harrows() || cov.arrow.size() != c.num_arrows()) {
    rep.failures.push_back("shape: covering sets do not match the category");
    return rep;
  }
  for (Elem h = 0; h < c.num_harrows(); ++h)
    if (cov.harrow[h].empty()) fail("nonempty", "half-arrow " + std::to_string(h) + " has an empty cover");
  for (Elem u = 0; u < c.num_arrows(); ++u)
    if (cov.arrow[u].empty()) fail("nonempty", "arrow " + std::to_string(u) + " has an empty cover");
  if (!rep.ok()) return rep;

  std::vector<std::unordered_set<H, Hasher>> kh(c.num_harrows());
  std::vector<std::unordered_set<V, Hasher>> kv(c.num_arrows());
  for (Elem h = 0; h < c.num_harrows(); ++h) kh[h].insert(cov.harrow[h].begin(), cov.harrow[h].end());
  for (Elem u = 0; u < c.num_arrows(); ++u) kv[u].insert(cov.arrow[u].begin(), cov.arrow[u].end());

  bool stop = false;
  auto once = [&](const std::string& clause, const std::string& what) {
    fail(clause, what);
    stop = true;
  };
  // (a)(i) composition
  for (Elem e = 0; e < c.num_arrows() && !stop; ++e)
    for (Elem f : c.out(c.end(e))) {
      const Elem ef = c.comp(e, f);
      for (const auto& x : cov.arrow[e]) {
        for (const auto& y : cov.arrow[f])
          if (!kv[ef].count(alg.mul(x, y))) {
            once("a(i)", "K(" + std::to_string(e) + ")K(" + std::to_string(f) + ") not in K(ef)");
            break;
          }
        if (stop) break;
      }
      if (stop) break;
    }
  stop = false;
  // (a)(ii) action
  for (Elem h = 0; h < c.num_harrows() && !stop; ++h)
    for (Elem e : c.out(c.h_end(h))) {
      const Elem he = c.act(h, e);
      for (const auto& x : cov.harrow[h]) {
        for (const auto& y : cov.arrow[e])
          if (!kh[he].count(alg.act(x, y))) {
            once("a(ii)", "K(" + std::to_string(h) + ")K(" + std::to_string(e) + ") not in K(ce)");
            break;
          }
        if (stop) break;
      }
      if (stop) break;
    }
  stop = false;
  // (a)(iii) horizontal sum
  for (Elem h = 0; h < c.num_harrows() && !stop; ++h)
    for (Elem d = 0; d < c.num_harrows() && !stop; ++d) {
      const Elem hd = c.h_add(h, d);
      for (const auto& x : cov.harrow[h]) {
        for (const auto& y : cov.harrow[d])
          if (!kh[hd].count(alg.add(x, y))) {
            once("a(iii)", "K(" + std::to_string(h) + ")+K(" + std::to_string(d) + ") not in K(c+d)");
            break;
          }
        if (stop) break;
      }
    }
  stop = false;
  // (a)(iv) insertion
  for (Elem h = 0; h < c.num_harrows() && !stop; ++h)
    for (Elem f = 0; f < c.num_arrows() && !stop; ++f) {
      const Elem fh = c.ins(f, h);
      for (const auto& x : cov.harrow[h]) {
        for (const auto& y : cov.arrow[f])
          if (!kv[fh].count(alg.ins(y, x))) {
            once("a(iv)", "K(" + std::to_string(h) + ")+K(" + std::to_string(f) + ") not in K(c+f)");
            break;
          }
        if (stop) break;
      }
    }
  // (b)(i) coterminal arrows, (b)(ii) half-arrows with a common end.
  {
    std::unordered_map<std::pair<Elem, Elem>, std::unordered_map<V, Elem, Hasher>, PairHash> by_ends;
    bool found = false;
    for (Elem u = 0; u < c.num_arrows() && !found; ++u) {
      auto& m = by_ends[{c.start(u), c.end(u)}];
      for (const auto& x : cov.arrow[u]) {
        auto [it, fresh] = m.emplace(x, u);
        if (!fresh && it->second != u) {
          fail("b(i)", "coterminal arrows " + std::to_string(it->second) + " and " + std::to_string(u) +
                           " share a covering element");
          found = true;
          break;
        }
      }
    }
  }
  {
    std::unordered_map<Elem, std::unordered_map<H, Elem, Hasher>> by_end;
    bool found = false;
    for (Elem h = 0; h < c.num_harrows() && !found; ++h) {
      auto& m = by_end[c.h_end(h)];
      for (const auto& x : cov.harrow[h]) {
        auto [it, fresh] = m.emplace(x, h);
        if (!fresh && it->second != h) {
          fail("b(ii)", "half-arrows " + std::to_string(it->second) + " and " + std::to_string(h) +
                            " share a covering element");
          found = true;
          break;
        }
      }
    }
  }
  return rep;
}

/// The covering by supports: X covers u when some forest or context diagram
/// with support X has value u.  Families are stored densely, indexed by the
/// support as a mask over HArr followed by Arr.
struct CanonicalCover {
  std::size_t universe = 0;
  std::vector<std::vector<std::uint8_t>> harrow, arrow;
  std::size_t forest_pairs = 0, context_pairs = 0;

  /// Injectivity clauses b(i) and b(ii) after projecting supports onto
  /// `keep` (all ids when empty).
  CoveringReport injectivity(const ForestCategory& c, const std::vector<std::size_t>& keep = {}) const;
  /// The covering by projected supports, into the flat algebra over
  /// keep.size() ids (all ids when empty).
  Covering<FlatSubsetAlgebra> project(const std::vector<std::size_t>& keep = {}) const;
  /// Greedily drops ids while the projection stays injective.  Projections
  /// are monoid morphisms of the flat algebra, so the result is still a
  /// covering whenever the full one is.
  std::vector<std::size_t> reduce(const ForestCategory& c) const;
};

/// Unbounded fixpoint over (support, value) pairs; throws BudgetExceeded
/// when |HArr| + |Arr| exceeds `max_universe`.
CanonicalCover canonical_flat_cover(const ForestCategory& c, std::size_t max_universe = 18);

}  // namespace forest

#pragma once

// Generated subalgebras of (possibly implicit) forest algebras.  The closure
// records how each element was first reached, so that every element can be
// replayed as a concrete forest or context.

#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/hash.hpp"
#include "forest/terms.hpp"

namespace forest {

/// Enough structure to generate a horizontal monoid: zero, addition and an
/// action by (generator) vertical values.
template <class A>
concept HorizontalAlgebraLike = requires(const A& a, const typename A::H& h, const typename A::V& v) {
  { a.zero() } -> std::convertible_to<typename A::H>;
  { a.add(h, h) } -> std::convertible_to<typename A::H>;
  { a.act(h, v) } -> std::convertible_to<typename A::H>;
};

template <class A>
concept ForestAlgebraLike = HorizontalAlgebraLike<A> &&
    requires(const A& a, const typename A::H& h, const typename A::V& v) {
  { a.one() } -> std::convertible_to<typename A::V>;
  { a.mul(v, v) } -> std::convertible_to<typename A::V>;
  { a.ins(v, h) } -> std::convertible_to<typename A::V>;
};

struct HDerivation {
  enum class Kind { Zero, Gen, Sum, Act };
  Kind kind = Kind::Zero;
  Elem a = kNone;    // Sum: left summand; Act: argument
  Elem b = kNone;    // Sum: right summand (a tree element)
  Elem gen = kNone;  // Gen: horizontal generator; Act: vertical generator
};

struct VDerivation {
  enum class Kind { One, Mul, Ins };
  Kind kind = Kind::One;
  Elem a = kNone;    // prefix
  Elem gen = kNone;  // Mul: vertical generator
  Elem h = kNone;    // Ins: horizontal element (a tree element)
};

struct ClosureBudget {
  std::size_t max_h = 1'000'000;
  std::size_t max_v = 200'000;
  bool horizontal_only = false;
};

template <HorizontalAlgebraLike A>
struct Closure {
  using H = typename A::H;
  using V = typename A::V;

  std::vector<H> hs;
  std::vector<V> vs;
  std::unordered_map<H, Elem, Hasher> h_index;
  std::unordered_map<V, Elem, Hasher> v_index;
  std::vector<HDerivation> h_deriv;
  std::vector<VDerivation> v_deriv;
  /// Indices into `hs` of the tree elements (act by a generator, or a
  /// horizontal generator).
  std::vector<Elem> trees;
  /// Index in `hs` of each horizontal generator.
  std::vector<Elem> h_gen;
  /// Index in `vs` of each vertical generator (kNone in horizontal-only mode).
  std::vector<Elem> v_gen;
  bool has_v = false;

  Elem find_h(const H& h) const {
    auto it = h_index.find(h);
    return it == h_index.end() ? kNone : it->second;
  }
  Elem find_v(const V& v) const {
    auto it = v_index.find(v);
    return it == v_index.end() ? kNone : it->second;
  }
};

/// Closure of the subalgebra generated by vertical generators `vgens` and
/// horizontal generators `hgens`.  The horizontal part is the closure of {0}
/// under adding tree elements, where the trees are the horizontal generators
/// and the results of acting by a vertical generator.  The vertical part is
/// the closure of {1} under right multiplication by generators and by
/// ins(1, t) for trees t.
template <HorizontalAlgebraLike A>
Closure<A> generate_horizontal(const A& alg, const std::vector<typename A::V>& vgens,
                               const std::vector<typename A::H>& hgens = {},
                               ClosureBudget budget = {}) {
  using H = typename A::H;
  Closure<A> c;

  auto add_h = [&](H h, HDerivation d) -> std::pair<Elem, bool> {
    auto [it, fresh] = c.h_index.emplace(h, static_cast<Elem>(c.hs.size()));
    if (fresh) {
      if (c.hs.size() >= budget.max_h) throw BudgetExceeded("horizontal closure", c.hs.size() + 1, budget.max_h);
      c.hs.push_back(std::move(h));
      c.h_deriv.push_back(d);
    }
    return {it->second, fresh};
  };

  std::vector<char> is_tree;
  auto mark_tree = [&](Elem i) {
    if (is_tree.size() <= i) is_tree.resize(i + 1, 0);
    if (is_tree[i]) return false;
    is_tree[i] = 1;
    c.trees.push_back(i);
    return true;
  };

  // Each pass acts on the new elements and adds every known tree to every
  // element; repeat until nothing changes.
  add_h(alg.zero(), {HDerivation::Kind::Zero});
  for (Elem g = 0; g < hgens.size(); ++g) {
    const Elem i = add_h(hgens[g], {HDerivation::Kind::Gen, kNone, kNone, g}).first;
    c.h_gen.push_back(i);
    mark_tree(i);
  }

  std::size_t acted = 0;
  std::vector<std::size_t> tree_done;  // per element: trees[0, n) already added
  for (;;) {
    const std::size_t h_before = c.hs.size();
    const std::size_t t_before = c.trees.size();
    for (; acted < c.hs.size(); ++acted) {
      for (Elem g = 0; g < vgens.size(); ++g) {
        H r = alg.act(c.hs[acted], vgens[g]);
        mark_tree(add_h(std::move(r), {HDerivation::Kind::Act, static_cast<Elem>(acted), kNone, g}).first);
      }
    }
    for (std::size_t h = 0; h < c.hs.size(); ++h) {
      if (tree_done.size() < c.hs.size()) tree_done.resize(c.hs.size(), 0);
      for (; tree_done[h] < c.trees.size(); ++tree_done[h]) {
        const Elem t = c.trees[tree_done[h]];
        H r = alg.add(c.hs[h], c.hs[t]);
        add_h(std::move(r), {HDerivation::Kind::Sum, static_cast<Elem>(h), t});
      }
    }
    if (c.hs.size() == h_before && c.trees.size() == t_before && acted == c.hs.size()) break;
  }

  return c;
}

template <ForestAlgebraLike A>
Closure<A> generate(const A& alg, const std::vector<typename A::V>& vgens,
                    const std::vector<typename A::H>& hgens = {}, ClosureBudget budget = {}) {
  using V = typename A::V;
  Closure<A> c = generate_horizontal(alg, vgens, hgens, budget);
  if (budget.horizontal_only) return c;

  c.has_v = true;
  auto add_v = [&](V v, VDerivation d) -> std::pair<Elem, bool> {
    auto [it, fresh] = c.v_index.emplace(v, static_cast<Elem>(c.vs.size()));
    if (fresh) {
      if (c.vs.size() >= budget.max_v) throw BudgetExceeded("vertical closure", c.vs.size() + 1, budget.max_v);
      c.vs.push_back(std::move(v));
      c.v_deriv.push_back(d);
    }
    return {it->second, fresh};
  };
  add_v(alg.one(), {VDerivation::Kind::One});
  std::vector<V> tree_ctx;
  tree_ctx.reserve(c.trees.size());
  for (Elem t : c.trees) tree_ctx.push_back(alg.ins(alg.one(), c.hs[t]));
  for (std::size_t i = 0; i < c.vs.size(); ++i) {
    for (Elem g = 0; g < vgens.size(); ++g) {
      V r = alg.mul(c.vs[i], vgens[g]);
      add_v(std::move(r), {VDerivation::Kind::Mul, static_cast<Elem>(i), g});
    }
    for (std::size_t k = 0; k < c.trees.size(); ++k) {
      V r = alg.mul(c.vs[i], tree_ctx[k]);
      add_v(std::move(r), {VDerivation::Kind::Ins, static_cast<Elem>(i), kNone, c.trees[k]});
    }
  }
  for (const auto& g : vgens) c.v_gen.push_back(c.find_v(g));
  return c;
}

/// Replays closure derivations as concrete terms.  `vgen_terms[g]` is a
/// context evaluating to the g-th vertical generator, `hgen_terms[g]` a forest
/// evaluating to the g-th horizontal generator.
class TermReplay {
 public:
  template <class C>
  TermReplay(const C& closure, std::vector<Context> vgen_terms, std::vector<Forest> hgen_terms = {})
      : h_deriv_(closure.h_deriv),
        v_deriv_(closure.v_deriv),
        vgen_(std::move(vgen_terms)),
        hgen_(std::move(hgen_terms)),
        h_memo_(h_deriv_.size()),
        v_memo_(v_deriv_.size()) {}

  const Forest& forest(Elem h) {
    if (h_memo_[h]) return *h_memo_[h];
    const auto& d = h_deriv_[h];
    Forest f;
    switch (d.kind) {
      case HDerivation::Kind::Zero:
        break;
      case HDerivation::Kind::Gen:
        f = hgen_.at(d.gen);
        break;
      case HDerivation::Kind::Sum: {
        Forest left = forest(d.a);
        f = add(left, forest(d.b));
        break;
      }
      case HDerivation::Kind::Act:
        f = apply_context(forest(d.a), vgen_.at(d.gen));
        break;
    }
    h_memo_[h] = std::move(f);
    return *h_memo_[h];
  }

  const Context& context(Elem v) {
    if (v_memo_[v]) return *v_memo_[v];
    const auto& d = v_deriv_[v];
    Context p;
    switch (d.kind) {
      case VDerivation::Kind::One:
        break;
      case VDerivation::Kind::Mul: {
        Context prefix = context(d.a);
        p = compose(prefix, vgen_.at(d.gen));
        break;
      }
      case VDerivation::Kind::Ins: {
        Context prefix = context(d.a);
        p = compose(prefix, sum_context(forest(d.h)));
        break;
      }
    }
    v_memo_[v] = std::move(p);
    return *v_memo_[v];
  }

 private:
  std::vector<HDerivation> h_deriv_;
  std::vector<VDerivation> v_deriv_;
  std::vector<Context> vgen_;
  std::vector<Forest> hgen_;
  std::vector<std::optional<Forest>> h_memo_;
  std::vector<std::optional<Context>> v_memo_;
};

/// A closure turned into explicit tables, with vertical elements merged when
/// they act identically on the generated horizontal part.
struct MaterializedImage {
  FiniteForestAlgebra algebra;
  /// Closure vertical index -> quotient vertical index.
  std::vector<Elem> v_class;
  /// For each quotient vertical element, the first closure index in its class.
  std::vector<Elem> v_rep;
};

template <ForestAlgebraLike A>
MaterializedImage materialize(const A& alg, const Closure<A>& c) {
  const std::size_t nh = c.hs.size();
  const std::size_t nv0 = c.vs.size();
  // Action columns on the generated horizontal part.
  std::vector<Elem> col(nv0 * nh);
  for (std::size_t v = 0; v < nv0; ++v)
    for (std::size_t h = 0; h < nh; ++h) {
      Elem r = c.find_h(alg.act(c.hs[h], c.vs[v]));
      if (r == kNone) throw std::logic_error("closure is not closed under the action");
      col[v * nh + h] = r;
    }
  std::unordered_map<std::vector<Elem>, Elem, Hasher> cls;
  std::vector<Elem> v_class(nv0);
  std::vector<Elem> v_rep;
  for (std::size_t v = 0; v < nv0; ++v) {
    std::vector<Elem> key(col.begin() + static_cast<std::ptrdiff_t>(v * nh),
                          col.begin() + static_cast<std::ptrdiff_t>((v + 1) * nh));
    auto [it, fresh] = cls.emplace(std::move(key), static_cast<Elem>(v_rep.size()));
    if (fresh) v_rep.push_back(static_cast<Elem>(v));
    v_class[v] = it->second;
  }
  const std::size_t nv = v_rep.size();
  AlgebraTables t;
  t.h_size = nh;
  t.v_size = nv;
  t.zero = c.find_h(alg.zero());
  t.one = v_class[c.find_v(alg.one())];
  t.add.resize(nh * nh);
  for (std::size_t a = 0; a < nh; ++a)
    for (std::size_t b = 0; b < nh; ++b) {
      Elem r = c.find_h(alg.add(c.hs[a], c.hs[b]));
      if (r == kNone) throw std::logic_error("closure is not closed under addition");
      t.add[a * nh + b] = r;
    }
  t.act.resize(nh * nv);
  for (std::size_t h = 0; h < nh; ++h)
    for (std::size_t v = 0; v < nv; ++v) t.act[h * nv + v] = col[v_rep[v] * nh + h];
  t.mul.resize(nv * nv);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nv; ++b) {
      Elem r = c.find_v(alg.mul(c.vs[v_rep[a]], c.vs[v_rep[b]]));
      if (r == kNone) throw std::logic_error("closure is not closed under multiplication");
      t.mul[a * nv + b] = v_class[r];
    }
  return MaterializedImage{FiniteForestAlgebra::trusted(std::move(t)), std::move(v_class),
                           std::move(v_rep)};
}

/// An explicit algebra whose vertical monoid consists of transformations of
/// a generated horizontal part: generated by the action of each vertical
/// generator and by h -> h + t for every tree element t.  Derivations match
/// the closure format so terms can be replayed.
struct TransformationAlgebra {
  FiniteForestAlgebra algebra;
  /// Vertical index of each generator.
  std::vector<Elem> gen;
  std::vector<HDerivation> h_deriv;
  std::vector<VDerivation> v_deriv;
};

/// Largest table (in cells) a transformation algebra may allocate.
inline constexpr std::size_t kMaxTableCells = std::size_t{1} << 26;

template <HorizontalAlgebraLike A>
TransformationAlgebra transformation_algebra(const A& alg, const Closure<A>& c,
                                             const std::vector<typename A::V>& vgens,
                                             std::size_t max_v = 200'000) {
  using Map = std::vector<Elem>;
  const std::size_t nh = c.hs.size();
  auto lookup = [&](const typename A::H& h) {
    Elem r = c.find_h(h);
    if (r == kNone) throw std::logic_error("horizontal closure is incomplete");
    return r;
  };
  std::vector<Map> gmaps;
  for (const auto& g : vgens) {
    Map m(nh);
    for (Elem h = 0; h < nh; ++h) m[h] = lookup(alg.act(c.hs[h], g));
    gmaps.push_back(std::move(m));
  }
  std::vector<Map> tmaps;
  for (Elem t : c.trees) {
    Map m(nh);
    for (Elem h = 0; h < nh; ++h) m[h] = lookup(alg.add(c.hs[h], c.hs[t]));
    tmaps.push_back(std::move(m));
  }

  std::vector<Map> vs;
  std::unordered_map<Map, Elem, Hasher> index;
  TransformationAlgebra out{FiniteForestAlgebra::trusted({1, {0}, 0, 1, {0}, 0, {0}, std::vector<Elem>{0}}),
                            {}, c.h_deriv, {}};
  // Tables of |V| x |V| and |V| x |H| cells must fit as well.
  auto limit = max_v;
  while (limit > 1 && (limit * limit > kMaxTableCells || limit * nh > kMaxTableCells)) limit /= 2;
  auto add_v = [&](Map m, VDerivation d) {
    auto [it, fresh] = index.emplace(m, static_cast<Elem>(vs.size()));
    if (fresh) {
      if (vs.size() >= limit) throw BudgetExceeded("vertical transformation monoid", vs.size() + 1, limit);
      vs.push_back(std::move(m));
      out.v_deriv.push_back(d);
    }
    return it->second;
  };
  Map id(nh);
  for (Elem h = 0; h < nh; ++h) id[h] = h;
  add_v(id, {VDerivation::Kind::One});
  Map next(nh);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (Elem g = 0; g < gmaps.size(); ++g) {
      for (Elem h = 0; h < nh; ++h) next[h] = gmaps[g][vs[i][h]];
      add_v(next, {VDerivation::Kind::Mul, static_cast<Elem>(i), g});
    }
    for (std::size_t k = 0; k < tmaps.size(); ++k) {
      for (Elem h = 0; h < nh; ++h) next[h] = tmaps[k][vs[i][h]];
      add_v(next, {VDerivation::Kind::Ins, static_cast<Elem>(i), kNone, c.trees[k]});
    }
  }
  for (const auto& m : gmaps) out.gen.push_back(index.at(m));

  const std::size_t nv = vs.size();
  AlgebraTables t;
  t.h_size = nh;
  t.v_size = nv;
  t.zero = lookup(alg.zero());
  t.one = 0;
  t.add.resize(nh * nh);
  for (Elem a = 0; a < nh; ++a)
    for (Elem b = 0; b < nh; ++b) t.add[a * nh + b] = lookup(alg.add(c.hs[a], c.hs[b]));
  t.act.resize(nh * nv);
  for (Elem h = 0; h < nh; ++h)
    for (Elem v = 0; v < nv; ++v) t.act[h * nv + v] = vs[v][h];
  t.mul.resize(nv * nv);
  for (Elem a = 0; a < nv; ++a)
    for (Elem b = 0; b < nv; ++b) {
      for (Elem h = 0; h < nh; ++h) next[h] = vs[b][vs[a][h]];
      auto it = index.find(next);
      if (it == index.end()) throw std::logic_error("transformation monoid is not closed");
      t.mul[a * nv + b] = it->second;
    }
  out.algebra = FiniteForestAlgebra::trusted(std::move(t));
  return out;
}

}  // namespace forest

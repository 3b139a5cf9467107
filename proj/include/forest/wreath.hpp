#pragma once

// Implicit forest algebras (elements are values rather than table indices):
// flat subset algebras, direct products and wreath products.  These are used
// with the generic closure in closure.hpp.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/bitset.hpp"
#include "forest/closure.hpp"
#include "forest/hash.hpp"

namespace forest {

/// Subsets of an n-element universe under union, acting on itself.
class FlatSubsetAlgebra {
 public:
  using H = Bitset;
  using V = Bitset;

  explicit FlatSubsetAlgebra(std::size_t universe) : n_(universe) {}
  std::size_t universe() const { return n_; }

  H zero() const { return Bitset(n_); }
  V one() const { return Bitset(n_); }
  H add(const H& a, const H& b) const { return a | b; }
  V mul(const V& a, const V& b) const { return a | b; }
  H act(const H& h, const V& v) const { return h | v; }
  V ins(const V& v, const H& h) const { return v | h; }
  H singleton(std::size_t i) const {
    Bitset b(n_);
    b.set(i);
    return b;
  }

 private:
  std::size_t n_;
};

template <HorizontalAlgebraLike A, HorizontalAlgebraLike B>
class ProductAlgebra {
 public:
  using H = std::pair<typename A::H, typename B::H>;
  using V = std::pair<typename A::V, typename B::V>;

  ProductAlgebra(const A& a, const B& b) : a_(a), b_(b) {}
  const A& left() const { return a_; }
  const B& right() const { return b_; }

  H zero() const { return {a_.zero(), b_.zero()}; }
  V one() const { return {a_.one(), b_.one()}; }
  H add(const H& x, const H& y) const { return {a_.add(x.first, y.first), b_.add(x.second, y.second)}; }
  V mul(const V& x, const V& y) const { return {a_.mul(x.first, y.first), b_.mul(x.second, y.second)}; }
  H act(const H& h, const V& v) const { return {a_.act(h.first, v.first), b_.act(h.second, v.second)}; }
  V ins(const V& v, const H& h) const { return {a_.ins(v.first, h.first), b_.ins(v.second, h.second)}; }

 private:
  const A& a_;
  const B& b_;
};

/// Vertical element of a wreath product: a function from the right factor's
/// horizontal carrier to the left factor's vertical monoid, and a right
/// vertical element.
template <class LV>
struct WreathV {
  std::vector<LV> f;
  Elem v = 0;

  friend bool operator==(const WreathV&, const WreathV&) = default;
  std::size_t hash() const { return hash_mix(Hasher{}(f), v); }
};

/// (L_H, L_V) o (R_H, R_V) with R explicit.  Horizontal elements are pairs
/// (left, right); the action is (h2, h1)(f, v1) = (h2 f(h1), h1 v1).
template <ForestAlgebraLike L>
class Wreath {
 public:
  using H = std::pair<typename L::H, Elem>;
  using V = WreathV<typename L::V>;

  Wreath(const L& left, const FiniteForestAlgebra& right) : l_(left), r_(right) {}
  const L& left() const { return l_; }
  const FiniteForestAlgebra& right() const { return r_; }

  H zero() const { return {l_.zero(), r_.zero()}; }
  V one() const { return {std::vector<typename L::V>(r_.h_size(), l_.one()), r_.one()}; }
  H add(const H& x, const H& y) const { return {l_.add(x.first, y.first), r_.add(x.second, y.second)}; }
  H act(const H& h, const V& w) const {
    return {l_.act(h.first, w.f[h.second]), r_.act(h.second, w.v)};
  }
  V mul(const V& a, const V& b) const {
    V out;
    out.f.reserve(a.f.size());
    for (Elem k = 0; k < a.f.size(); ++k) out.f.push_back(l_.mul(a.f[k], b.f[r_.act(k, a.v)]));
    out.v = r_.mul(a.v, b.v);
    return out;
  }
  V ins(const V& w, const H& h) const {
    V out;
    out.f.reserve(w.f.size());
    for (const auto& x : w.f) out.f.push_back(l_.ins(x, h.first));
    out.v = r_.ins(w.v, h.second);
    return out;
  }
  /// The vertical element (k -> f(k), v).
  V make(std::vector<typename L::V> f, Elem v) const { return V{std::move(f), v}; }

 private:
  const L& l_;
  const FiniteForestAlgebra& r_;
};

/// Fully materialized wreath product of explicit algebras.  Horizontal
/// (h2, h1) is encoded as h2 * |H1| + h1; vertical (f, v1) as
/// code(f) * |V1| + v1 with code(f) = sum f(k) |V2|^k.
struct WreathProduct {
  FiniteForestAlgebra algebra;
  std::size_t outer_h = 0, outer_v = 0, inner_h = 0, inner_v = 0;
  /// Projection onto the inner (right) factor.
  std::vector<Elem> pi_h, pi_v;

  Elem encode_h(Elem h2, Elem h1) const { return static_cast<Elem>(h2 * inner_h + h1); }
  Elem encode_v(const std::vector<Elem>& f, Elem v1) const;
  std::pair<Elem, Elem> decode_h(Elem h) const {
    return {static_cast<Elem>(h / inner_h), static_cast<Elem>(h % inner_h)};
  }
  std::pair<std::vector<Elem>, Elem> decode_v(Elem v) const;
};

/// Throws BudgetExceeded when |V2|^|H1| * |V1| exceeds `budget`, and
/// AlgebraError if the vertical part is not faithful.
WreathProduct wreath(const FiniteForestAlgebra& outer, const FiniteForestAlgebra& inner,
                     std::size_t budget = 1 << 16);

/// Checks that (map_h, map_v) is a homomorphism from `a` into `b`; returns a
/// description of the first failure.
std::optional<std::string> check_homomorphism(const FiniteForestAlgebra& a,
                                              const FiniteForestAlgebra& b,
                                              const std::vector<Elem>& map_h,
                                              const std::vector<Elem>& map_v);

}  // namespace forest

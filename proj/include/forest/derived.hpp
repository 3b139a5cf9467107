#pragma once

// The derived forest category of a pair of morphisms alpha, beta out of the
// same free algebra, and both constructive directions relating coverings of
// it to wreath product factorizations.

#include <concepts>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/category.hpp"
#include "forest/closure.hpp"
#include "forest/division.hpp"
#include "forest/syntactic.hpp"
#include "forest/wreath.hpp"

namespace forest {

/// Realizable pairs (alpha(s), beta(s)) and (alpha(p), beta(p)).  Both
/// morphisms are first replaced by their surjective images; all indices are
/// image indices.
class PairAlgebra {
 public:
  using Prod = ProductAlgebra<FiniteForestAlgebra, FiniteForestAlgebra>;
  using Pair = std::pair<Elem, Elem>;

  static PairAlgebra build(const Morphism& alpha, const Morphism& beta, ClosureBudget budget = {});

  const MorphismImage& alpha() const { return *alpha_; }
  const MorphismImage& beta() const { return *beta_; }
  const Alphabet& alphabet() const { return alpha_->morphism().alphabet(); }
  const std::vector<Pair>& h_pairs() const { return closure_->hs; }
  const std::vector<Pair>& v_pairs() const { return closure_->vs; }
  Elem find_h(Pair p) const { return closure_->find_h(p); }
  Elem find_v(Pair p) const { return closure_->find_v(p); }
  const Closure<Prod>& closure() const { return *closure_; }

  /// A forest s with (alpha(s), beta(s)) = h_pairs()[i].
  Forest h_term(Elem i) const { return replay_->forest(i); }
  /// A context p with (alpha(p), beta(p)) = v_pairs()[i].
  Context v_term(Elem i) const { return replay_->context(i); }

 private:
  PairAlgebra() = default;
  std::shared_ptr<MorphismImage> alpha_, beta_;
  std::shared_ptr<Closure<Prod>> closure_;
  std::shared_ptr<TermReplay> replay_;
};

/// Arrow key: start object, end object, and the values h1 alpha(p) for h1
/// ranging over the sorted set R of first coordinates over the start.
struct ArrowKey {
  Elem start = 0, end = 0;
  std::vector<Elem> action;
  friend auto operator<=>(const ArrowKey&, const ArrowKey&) = default;
  friend bool operator==(const ArrowKey&, const ArrowKey&) = default;
};

class DerivedCategory {
 public:
  /// Objects are the horizontal values of beta, half-arrows the realizable
  /// pairs (ids as in the pair algebra), arrows the realizable contexts up to
  /// equal action on the compatible first coordinates.  The result is
  /// validated; throws CategoryError on a violation and BudgetExceeded
  /// beyond `max_arrows`.
  static DerivedCategory build(std::shared_ptr<const PairAlgebra> pa, std::size_t max_arrows = 200'000);

  const ForestCategory& category() const { return *cat_; }
  const PairAlgebra& pairs() const { return *pa_; }
  std::shared_ptr<const PairAlgebra> pairs_ptr() const { return pa_; }

  /// Object of a value of beta's image algebra, kNone when unreachable.
  Elem object_of(Elem h2) const { return object_of_.at(h2); }
  Elem object_value(Elem x) const { return object_value_.at(x); }
  /// First coordinates of the half-arrows ending at x, sorted.
  const std::vector<Elem>& r_set(Elem x) const { return r_set_.at(x); }
  PairAlgebra::Pair harrow_pair(Elem c) const { return pa_->h_pairs().at(c); }
  Elem harrow_of(Elem h1, Elem h2) const { return pa_->find_h({h1, h2}); }
  const ArrowKey& key(Elem u) const { return keys_.at(u); }
  /// A realizable (alpha(p), beta(p)) in the class of u.
  PairAlgebra::Pair arrow_rep(Elem u) const { return reps_.at(u); }
  /// The arrow of the context class (v1, v2) out of object x; kNone if the
  /// class has no arrow (the pair is not realizable).
  Elem arrow_of(Elem x, Elem v1, Elem v2) const;
  ArrowKey make_key(Elem x, Elem v1, Elem v2) const;

 private:
  DerivedCategory() = default;
  std::shared_ptr<const PairAlgebra> pa_;
  std::shared_ptr<const ForestCategory> cat_;
  std::vector<Elem> object_of_, object_value_;
  std::vector<std::vector<Elem>> r_set_;
  std::vector<ArrowKey> keys_;
  std::vector<PairAlgebra::Pair> reps_;
  std::map<ArrowKey, Elem> arrow_index_;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
template <class T>
void sort_if_ordered(std::vector<T>& v) {
  if constexpr (std::totally_ordered<T>) std::sort(v.begin(), v.end());
}
}  // namespace detail

/// Direction (a): from a covering of the derived category by `alg`, a
/// tm-division of alpha's algebra into alg o (beta's algebra).  K is the set
/// of (x, h2) with x covering a half-arrow (h1, h2), psi(x, h2) = h1, and
/// hat(v1) = (f, v2) for the first realizable (v1, v2), f(h2) being the
/// first element covering the arrow of (v1, v2) out of h2.  Throws
/// std::invalid_argument when the covering does not verify.
template <ForestAlgebraLike L>
TmDivisionWitness<Wreath<L>> dct_forward(const DerivedCategory& d, const L& alg, const Covering<L>& cov) {
  const ForestCategory& c = d.category();
  if (auto rep = verify_covering(c, alg, cov); !rep.ok())
    throw std::invalid_argument("covering does not verify: " + rep.failures.front());
  const PairAlgebra& pa = d.pairs();
  const auto& a1 = pa.alpha().algebra();
  const auto& a2 = pa.beta().algebra();

  TmDivisionWitness<Wreath<L>> w;
  std::unordered_map<typename Wreath<L>::H, Elem, Hasher> seen;
  for (Elem h = 0; h < c.num_harrows(); ++h) {
    const auto [h1, h2] = d.harrow_pair(h);
    for (const auto& x : cov.harrow[h]) {
      typename Wreath<L>::H key{x, h2};
      auto [it, fresh] = seen.emplace(key, h1);
      if (!fresh) continue;
      w.k.push_back(key);
      w.psi.push_back(h1);
    }
  }
  std::vector<Elem> first_v(a1.v_size(), kNone);
  for (Elem i = 0; i < pa.v_pairs().size(); ++i)
    if (first_v[pa.v_pairs()[i].first] == kNone) first_v[pa.v_pairs()[i].first] = i;
  for (Elem v1 = 0; v1 < a1.v_size(); ++v1) {
    if (first_v[v1] == kNone) throw std::logic_error("vertical element without a realizing context");
    const Elem v2 = pa.v_pairs()[first_v[v1]].second;
    std::vector<typename L::V> f;
    for (Elem h2 = 0; h2 < a2.h_size(); ++h2) {
      const Elem x = d.object_of(h2);
      if (x == kNone) {
        f.push_back(alg.one());
        continue;
      }
      const Elem u = d.arrow_of(x, v1, v2);
      if (u == kNone) throw std::logic_error("realizable context without an arrow");
      f.push_back(cov.arrow[u].front());
    }
    w.hat.push_back(typename Wreath<L>::V{std::move(f), v2});
  }
  return w;
}

/// Direction (b): given letter images delta(a) in left o (beta's algebra),
/// checks that the right coordinate of delta is beta and that alpha factors
/// through delta, then returns the covering
///   K(h1, h2) = { left coordinate of delta(s) : alpha(s) = h1, beta(s) = h2 },
///   K(u)      = { f_q(h2) : delta(q) = (f_q, beta(q)), q in the class of u from h2 }.
/// Throws FactorizationError with a witness when a hypothesis fails.
template <ForestAlgebraLike L>
Covering<L> dct_backward(const DerivedCategory& d, const L& left,
                         const std::vector<WreathV<typename L::V>>& delta_letters, ClosureBudget budget = {}) {
  const PairAlgebra& pa = d.pairs();
  const Alphabet& alphabet = pa.alphabet();
  const auto& a1 = pa.alpha().algebra();
  const auto& a2 = pa.beta().algebra();
  if (delta_letters.size() != alphabet.size())
    throw std::invalid_argument("one wreath element per letter is required");
  for (Elem i = 0; i < alphabet.size(); ++i) {
    if (delta_letters[i].f.size() != a2.h_size())
      throw std::invalid_argument("wreath element has the wrong function length");
    if (delta_letters[i].v != pa.beta().morphism().letters()[i])
      throw FactorizationError("right coordinate of delta differs from beta at letter " + alphabet[i]);
  }
  Wreath<L> wr(left, a2);
  using W = Wreath<L>;
  ProductAlgebra<W, FiniteForestAlgebra> prod(wr, a1);
  std::vector<typename ProductAlgebra<W, FiniteForestAlgebra>::V> gens;
  for (Elem i = 0; i < alphabet.size(); ++i) gens.push_back({delta_letters[i], pa.alpha().morphism().letters()[i]});
  auto cl = generate(prod, gens, {}, budget);
  std::vector<Context> letter_terms;
  for (const auto& l : alphabet.labels()) letter_terms.push_back(letter_context(l));
  TermReplay replay(cl, letter_terms);

  std::unordered_map<typename W::H, Elem, Hasher> gamma_h;
  for (Elem i = 0; i < cl.hs.size(); ++i) {
    auto [it, fresh] = gamma_h.emplace(cl.hs[i].first, cl.hs[i].second);
    if (!fresh && it->second != cl.hs[i].second)
      throw FactorizationError("alpha does not factor through delta: forest " + render(replay.forest(i)) +
                               " has the delta value of a forest with a different alpha value");
  }
  std::unordered_map<typename W::V, Elem, Hasher> gamma_v;
  for (Elem i = 0; i < cl.vs.size(); ++i) {
    auto [it, fresh] = gamma_v.emplace(cl.vs[i].first, cl.vs[i].second);
    if (!fresh && it->second != cl.vs[i].second)
      throw FactorizationError("alpha does not factor through delta: context " + render(replay.context(i)) +
                               " has the delta value of a context with a different alpha value");
  }

  const ForestCategory& c = d.category();
  std::vector<std::unordered_set<typename L::H, Hasher>> kh(c.num_harrows());
  std::vector<std::unordered_set<typename L::V, Hasher>> kv(c.num_arrows());
  for (const auto& [dh, h1] : cl.hs) {
    const Elem idx = d.harrow_of(h1, dh.second);
    if (idx == kNone) throw std::logic_error("realizable pair missing from the pair algebra");
    kh[idx].insert(dh.first);
  }
  for (const auto& [dv, v1] : cl.vs)
    for (Elem x = 0; x < c.num_objects(); ++x) {
      const Elem u = d.arrow_of(x, v1, dv.v);
      if (u == kNone) throw std::logic_error("realizable context missing from the derived category");
      kv[u].insert(dv.f[d.object_value(x)]);
    }
  Covering<L> cov;
  for (auto& s : kh) {
    cov.harrow.emplace_back(s.begin(), s.end());
    detail::sort_if_ordered(cov.harrow.back());
  }
  for (auto& s : kv) {
    cov.arrow.emplace_back(s.begin(), s.end());
    detail::sort_if_ordered(cov.arrow.back());
  }
  return cov;
}

}  // namespace forest

#include "forest/derived.hpp"

#include <algorithm>

namespace forest {

PairAlgebra PairAlgebra::build(const Morphism& alpha, const Morphism& beta, ClosureBudget budget) {
  if (!(alpha.alphabet() == beta.alphabet()))
    throw std::invalid_argument("pair closure needs morphisms over the same alphabet");
  PairAlgebra pa;
  pa.alpha_ = std::make_shared<MorphismImage>(MorphismImage::of(alpha, budget));
  pa.beta_ = std::make_shared<MorphismImage>(MorphismImage::of(beta, budget));
  const auto& m1 = pa.alpha_->morphism();
  const auto& m2 = pa.beta_->morphism();
  Prod prod(m1.target(), m2.target());
  std::vector<Prod::V> gens;
  for (Elem i = 0; i < m1.letters().size(); ++i) gens.push_back({m1.letters()[i], m2.letters()[i]});
  budget.horizontal_only = false;
  pa.closure_ = std::make_shared<Closure<Prod>>(generate(prod, gens, {}, budget));
  std::vector<Context> terms;
  for (const auto& l : m1.alphabet().labels()) terms.push_back(letter_context(l));
  pa.replay_ = std::make_shared<TermReplay>(*pa.closure_, std::move(terms));
  return pa;
}

ArrowKey DerivedCategory::make_key(Elem x, Elem v1, Elem v2) const {
  const auto& a1 = pa_->alpha().algebra();
  const auto& a2 = pa_->beta().algebra();
  ArrowKey k{x, object_of_.at(a2.act(object_value_[x], v2)), {}};
  k.action.reserve(r_set_[x].size());
  for (Elem h1 : r_set_[x]) k.action.push_back(a1.act(h1, v1));
  return k;
}

Elem DerivedCategory::arrow_of(Elem x, Elem v1, Elem v2) const {
  auto it = arrow_index_.find(make_key(x, v1, v2));
  return it == arrow_index_.end() ? kNone : it->second;
}

DerivedCategory DerivedCategory::build(std::shared_ptr<const PairAlgebra> pa, std::size_t max_arrows) {
  DerivedCategory d;
  d.pa_ = pa;
  const auto& a1 = pa->alpha().algebra();
  const auto& a2 = pa->beta().algebra();
  const auto& hp = pa->h_pairs();
  const auto& vp = pa->v_pairs();

  // Objects in increasing order of value.
  d.object_of_.assign(a2.h_size(), kNone);
  std::vector<bool> reached(a2.h_size());
  for (const auto& p : hp) reached[p.second] = true;
  for (Elem h2 = 0; h2 < a2.h_size(); ++h2)
    if (reached[h2]) {
      d.object_of_[h2] = static_cast<Elem>(d.object_value_.size());
      d.object_value_.push_back(h2);
    }
  const std::size_t no = d.object_value_.size();
  d.r_set_.assign(no, {});
  for (const auto& [h1, h2] : hp) d.r_set_[d.object_of_[h2]].push_back(h1);
  for (auto& r : d.r_set_) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }

  for (Elem x = 0; x < no; ++x)
    for (const auto& [v1, v2] : vp) {
      ArrowKey k = d.make_key(x, v1, v2);
      if (d.arrow_index_.count(k)) continue;
      if (d.keys_.size() >= max_arrows) throw BudgetExceeded("derived arrows", d.keys_.size() + 1, max_arrows);
      d.arrow_index_.emplace(k, static_cast<Elem>(d.keys_.size()));
      d.keys_.push_back(std::move(k));
      d.reps_.emplace_back(v1, v2);
    }

  auto lookup = [&](Elem x, Elem v1, Elem v2) {
    const Elem u = d.arrow_of(x, v1, v2);
    if (u == kNone) throw std::logic_error("derived category is not closed");
    return u;
  };
  auto harrow = [&](Elem h1, Elem h2) {
    const Elem c = pa->find_h({h1, h2});
    if (c == kNone) throw std::logic_error("pair algebra is not closed");
    return c;
  };

  RawCategory raw;
  raw.objects.size = no;
  raw.objects.op.resize(no * no);
  for (Elem x = 0; x < no; ++x)
    for (Elem y = 0; y < no; ++y)
      raw.objects.op[x * no + y] = d.object_of_[a2.add(d.object_value_[x], d.object_value_[y])];
  raw.objects.identity = d.object_of_[a2.zero()];
  const std::size_t nh = hp.size();
  raw.harrows.size = nh;
  raw.harrows.op.resize(nh * nh);
  for (Elem c = 0; c < nh; ++c)
    for (Elem e = 0; e < nh; ++e)
      raw.harrows.op[c * nh + e] = harrow(a1.add(hp[c].first, hp[e].first), a2.add(hp[c].second, hp[e].second));
  raw.harrows.identity = harrow(a1.zero(), a2.zero());
  for (const auto& p : hp) raw.harrow_end.push_back(d.object_of_[p.second]);
  for (const auto& k : d.keys_) raw.arrows.emplace_back(k.start, k.end);
  for (Elem x = 0; x < no; ++x) raw.identity.push_back(lookup(x, a1.one(), a2.one()));

  const std::size_t na = d.keys_.size();
  std::vector<std::vector<Elem>> out(no);
  for (Elem u = 0; u < na; ++u) out[d.keys_[u].start].push_back(u);
  for (Elem u = 0; u < na; ++u) {
    const auto [v1, v2] = d.reps_[u];
    for (Elem w : out[d.keys_[u].end]) {
      const auto [w1, w2] = d.reps_[w];
      raw.comp.emplace_back(u, w, lookup(d.keys_[u].start, a1.mul(v1, w1), a2.mul(v2, w2)));
    }
    for (Elem c = 0; c < nh; ++c)
      raw.ins.emplace_back(u, c, lookup(d.keys_[u].start, a1.ins(v1, hp[c].first), a2.ins(v2, hp[c].second)));
  }
  for (Elem c = 0; c < nh; ++c)
    for (Elem u : out[d.object_of_[hp[c].second]]) {
      const auto [v1, v2] = d.reps_[u];
      raw.act.emplace_back(c, u, harrow(a1.act(hp[c].first, v1), a2.act(hp[c].second, v2)));
    }
  d.cat_ = std::make_shared<const ForestCategory>(ForestCategory::from_raw(raw));
  return d;
}

}  // namespace forest

#include "forest/division.hpp"

#include <algorithm>
#include <functional>

namespace forest {

namespace {

using Prod = ProductAlgebra<FiniteForestAlgebra, FiniteForestAlgebra>;

std::optional<DivisionWitness<FiniteForestAlgebra>> try_generators(
    const FiniteForestAlgebra& a, const FiniteForestAlgebra& b, const std::vector<Elem>& gens,
    const std::vector<Elem>& images) {
  Prod prod(b, a);
  std::vector<Prod::V> pg;
  for (std::size_t i = 0; i < gens.size(); ++i) pg.push_back({gens[i], images[i]});
  ClosureBudget budget;
  budget.max_h = b.h_size() * a.h_size();
  budget.max_v = b.v_size() * a.v_size();
  auto c = generate(prod, pg, {}, budget);

  std::vector<Elem> fh(b.h_size(), kNone), fv(b.v_size(), kNone);
  std::vector<bool> hit_h(a.h_size()), hit_v(a.v_size());
  DivisionWitness<FiniteForestAlgebra> w;
  w.generators = gens;
  for (const auto& [x, y] : c.hs) {
    if (fh[x] == kNone) {
      fh[x] = y;
      w.h_carrier.push_back(x);
      w.phi_h.push_back(y);
    } else if (fh[x] != y) {
      return std::nullopt;
    }
    hit_h[y] = true;
  }
  for (const auto& [x, y] : c.vs) {
    if (fv[x] == kNone) {
      fv[x] = y;
      w.v_carrier.push_back(x);
      w.phi_v.push_back(y);
    } else if (fv[x] != y) {
      return std::nullopt;
    }
    hit_v[y] = true;
  }
  for (bool x : hit_h)
    if (!x) return std::nullopt;
  for (bool x : hit_v)
    if (!x) return std::nullopt;
  return w;
}

}  // namespace

std::optional<DivisionWitness<FiniteForestAlgebra>> search_division(
    const FiniteForestAlgebra& a, const FiniteForestAlgebra& b, DivisionSearchLimits limits) {
  if (b.h_size() > limits.max_h || b.v_size() > limits.max_v)
    throw std::invalid_argument("search_division: target exceeds the size caps");
  const std::size_t nv = b.v_size();
  const std::size_t max_gens = std::min(limits.max_generators, nv);
  std::vector<Elem> gens;
  std::vector<Elem> images;

  // Combinations of generators, then all image assignments.
  std::function<std::optional<DivisionWitness<FiniteForestAlgebra>>(std::size_t, Elem)> pick;
  std::function<std::optional<DivisionWitness<FiniteForestAlgebra>>(std::size_t)> assign;
  assign = [&](std::size_t i) -> std::optional<DivisionWitness<FiniteForestAlgebra>> {
    if (i == gens.size()) return try_generators(a, b, gens, images);
    for (Elem y = 0; y < a.v_size(); ++y) {
      images[i] = y;
      if (auto w = assign(i + 1)) return w;
    }
    return std::nullopt;
  };
  pick = [&](std::size_t remaining, Elem from) -> std::optional<DivisionWitness<FiniteForestAlgebra>> {
    if (remaining == 0) {
      images.assign(gens.size(), 0);
      return assign(0);
    }
    for (Elem v = from; v < nv; ++v) {
      gens.push_back(v);
      auto w = pick(remaining - 1, v + 1);
      gens.pop_back();
      if (w) return w;
    }
    return std::nullopt;
  };
  for (std::size_t size = 0; size <= max_gens; ++size)
    if (auto w = pick(size, 0)) return w;
  return std::nullopt;
}

}  // namespace forest

#pragma once

// Division of forest algebras in its two forms: A is a homomorphic image of
// a subalgebra of B (DivisionWitness), and the transformation-monoid form
// (TmDivisionWitness).  Both are generic in the representation of B.

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/closure.hpp"
#include "forest/wreath.hpp"

namespace forest {

/// The subalgebra of B generated by `generators`, mapped onto A.
template <ForestAlgebraLike B>
struct DivisionWitness {
  std::vector<typename B::V> generators;
  std::vector<typename B::H> h_carrier;
  std::vector<Elem> phi_h;  // parallel to h_carrier
  std::vector<typename B::V> v_carrier;
  std::vector<Elem> phi_v;  // parallel to v_carrier
};

/// K is a submonoid of B's horizontal monoid, psi: K -> H_A onto, and
/// hat: V_A -> V_B with K hat(v) in K and psi(k hat(v)) = psi(k) v.
template <ForestAlgebraLike B>
struct TmDivisionWitness {
  std::vector<typename B::H> k;
  std::vector<Elem> psi;                // parallel to k
  std::vector<typename B::V> hat;       // indexed by V_A
};

struct DivisionReport {
  bool ok = true;
  std::string failure;
  static DivisionReport fail(std::string why) { return {false, std::move(why)}; }
};

template <ForestAlgebraLike B>
DivisionReport verify_division(const FiniteForestAlgebra& a, const B& b, const DivisionWitness<B>& w) {
  if (w.h_carrier.size() != w.phi_h.size() || w.v_carrier.size() != w.phi_v.size())
    return DivisionReport::fail("carrier and map sizes differ");
  std::unordered_map<typename B::H, Elem, Hasher> ph;
  std::unordered_map<typename B::V, Elem, Hasher> pv;
  for (std::size_t i = 0; i < w.h_carrier.size(); ++i) {
    if (w.phi_h[i] >= a.h_size()) return DivisionReport::fail("horizontal image out of range");
    if (!ph.emplace(w.h_carrier[i], w.phi_h[i]).second)
      return DivisionReport::fail("horizontal carrier lists an element twice");
  }
  for (std::size_t i = 0; i < w.v_carrier.size(); ++i) {
    if (w.phi_v[i] >= a.v_size()) return DivisionReport::fail("vertical image out of range");
    if (!pv.emplace(w.v_carrier[i], w.phi_v[i]).second)
      return DivisionReport::fail("vertical carrier lists an element twice");
  }
  // The carriers must be exactly the generated subalgebra.
  auto c = generate(b, w.generators);
  if (c.hs.size() != ph.size() || c.vs.size() != pv.size())
    return DivisionReport::fail("carriers differ from the generated subalgebra");
  for (const auto& h : c.hs)
    if (!ph.count(h)) return DivisionReport::fail("horizontal carrier misses a generated element");
  for (const auto& v : c.vs)
    if (!pv.count(v)) return DivisionReport::fail("vertical carrier misses a generated element");

  auto fh = [&](const typename B::H& h) { return ph.at(h); };
  auto fv = [&](const typename B::V& v) { return pv.at(v); };
  if (fh(b.zero()) != a.zero()) return DivisionReport::fail("zero not preserved");
  if (fv(b.one()) != a.one()) return DivisionReport::fail("one not preserved");
  const auto& H = w.h_carrier;
  const auto& V = w.v_carrier;
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = 0; j < H.size(); ++j)
      if (fh(b.add(H[i], H[j])) != a.add(w.phi_h[i], w.phi_h[j]))
        return DivisionReport::fail("addition not preserved");
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = 0; j < V.size(); ++j)
      if (fv(b.mul(V[i], V[j])) != a.mul(w.phi_v[i], w.phi_v[j]))
        return DivisionReport::fail("multiplication not preserved");
  for (std::size_t i = 0; i < H.size(); ++i)
    for (std::size_t j = 0; j < V.size(); ++j) {
      if (fh(b.act(H[i], V[j])) != a.act(w.phi_h[i], w.phi_v[j]))
        return DivisionReport::fail("action not preserved");
      if (fv(b.ins(V[j], H[i])) != a.ins(w.phi_v[j], w.phi_h[i]))
        return DivisionReport::fail("insertion not preserved");
    }
  std::vector<bool> hit_h(a.h_size()), hit_v(a.v_size());
  for (auto x : w.phi_h) hit_h[x] = true;
  for (auto x : w.phi_v) hit_v[x] = true;
  for (bool x : hit_h)
    if (!x) return DivisionReport::fail("horizontal map is not onto");
  for (bool x : hit_v)
    if (!x) return DivisionReport::fail("vertical map is not onto");
  return {};
}

template <ForestAlgebraLike B>
DivisionReport verify_tm_division(const FiniteForestAlgebra& a, const B& b,
                                  const TmDivisionWitness<B>& w) {
  if (w.k.size() != w.psi.size()) return DivisionReport::fail("K and psi sizes differ");
  if (w.hat.size() != a.v_size()) return DivisionReport::fail("hat must be defined on all of V");
  std::unordered_map<typename B::H, Elem, Hasher> psi;
  for (std::size_t i = 0; i < w.k.size(); ++i) {
    if (w.psi[i] >= a.h_size()) return DivisionReport::fail("psi value out of range");
    if (!psi.emplace(w.k[i], w.psi[i]).second) return DivisionReport::fail("K lists an element twice");
  }
  auto it0 = psi.find(b.zero());
  if (it0 == psi.end()) return DivisionReport::fail("K does not contain 0");
  if (it0->second != a.zero()) return DivisionReport::fail("psi(0) != 0");
  for (std::size_t i = 0; i < w.k.size(); ++i)
    for (std::size_t j = 0; j < w.k.size(); ++j) {
      auto it = psi.find(b.add(w.k[i], w.k[j]));
      if (it == psi.end()) return DivisionReport::fail("K is not closed under addition");
      if (it->second != a.add(w.psi[i], w.psi[j])) return DivisionReport::fail("psi is not additive");
    }
  std::vector<bool> hit(a.h_size());
  for (auto x : w.psi) hit[x] = true;
  for (bool x : hit)
    if (!x) return DivisionReport::fail("psi is not onto");
  for (Elem v = 0; v < a.v_size(); ++v)
    for (std::size_t i = 0; i < w.k.size(); ++i) {
      auto it = psi.find(b.act(w.k[i], w.hat[v]));
      if (it == psi.end())
        return DivisionReport::fail("K hat(" + std::to_string(v) + ") leaves K");
      if (it->second != a.act(w.psi[i], v))
        return DivisionReport::fail("psi(k hat(v)) != psi(k) v at v=" + std::to_string(v));
    }
  return {};
}

/// K = horizontal carrier, psi = phi_h, hat(v) = first carrier element over v.
template <ForestAlgebraLike B>
TmDivisionWitness<B> division_to_tm(const FiniteForestAlgebra& a, const B& b,
                                    const DivisionWitness<B>& w) {
  if (auto r = verify_division(a, b, w); !r.ok)
    throw std::invalid_argument("division witness invalid: " + r.failure);
  TmDivisionWitness<B> out{w.h_carrier, w.phi_h, {}};
  for (Elem v = 0; v < a.v_size(); ++v) {
    for (std::size_t i = 0; i < w.v_carrier.size(); ++i)
      if (w.phi_v[i] == v) {
        out.hat.push_back(w.v_carrier[i]);
        break;
      }
  }
  return out;
}

/// Builds the subalgebra of B generated by hat(V_A) paired with V_A; it maps
/// functionally onto A when the tm witness is valid.
template <ForestAlgebraLike B>
DivisionWitness<B> tm_to_division(const FiniteForestAlgebra& a, const B& b,
                                  const TmDivisionWitness<B>& w, ClosureBudget budget = {}) {
  if (auto r = verify_tm_division(a, b, w); !r.ok)
    throw std::invalid_argument("tm-division witness invalid: " + r.failure);
  ProductAlgebra<B, FiniteForestAlgebra> prod(b, a);
  std::vector<typename ProductAlgebra<B, FiniteForestAlgebra>::V> gens;
  for (Elem v = 0; v < a.v_size(); ++v) gens.push_back({w.hat[v], v});
  auto c = generate(prod, gens, {}, budget);
  DivisionWitness<B> out;
  out.generators = w.hat;
  std::unordered_map<typename B::H, Elem, Hasher> fh;
  std::unordered_map<typename B::V, Elem, Hasher> fv;
  for (const auto& [x, y] : c.hs) {
    auto [it, fresh] = fh.emplace(x, y);
    if (fresh) {
      out.h_carrier.push_back(x);
      out.phi_h.push_back(y);
    } else if (it->second != y) {
      throw std::logic_error("generated relation is not functional on H");
    }
  }
  for (const auto& [x, y] : c.vs) {
    auto [it, fresh] = fv.emplace(x, y);
    if (fresh) {
      out.v_carrier.push_back(x);
      out.phi_v.push_back(y);
    } else if (it->second != y) {
      throw std::logic_error("generated relation is not functional on V");
    }
  }
  return out;
}

struct DivisionSearchLimits {
  std::size_t max_h = 8;
  std::size_t max_v = 12;
  std::size_t max_generators = 3;
};

/// Searches for a division of A into an explicit B by trying vertical
/// generator sets of B (by increasing size) and every assignment of their
/// images in V_A.  Throws std::invalid_argument when B exceeds the caps.
std::optional<DivisionWitness<FiniteForestAlgebra>> search_division(
    const FiniteForestAlgebra& a, const FiniteForestAlgebra& b, DivisionSearchLimits limits = {});

}  // namespace forest

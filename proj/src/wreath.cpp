#include "forest/wreath.hpp"

#include <unordered_set>

namespace forest {

Elem WreathProduct::encode_v(const std::vector<Elem>& f, Elem v1) const {
  std::size_t code = 0;
  for (std::size_t k = f.size(); k-- > 0;) code = code * outer_v + f[k];
  return static_cast<Elem>(code * inner_v + v1);
}

std::pair<std::vector<Elem>, Elem> WreathProduct::decode_v(Elem v) const {
  std::vector<Elem> f(inner_h);
  std::size_t code = v / inner_v;
  for (std::size_t k = 0; k < inner_h; ++k) {
    f[k] = static_cast<Elem>(code % outer_v);
    code /= outer_v;
  }
  return {std::move(f), static_cast<Elem>(v % inner_v)};
}

WreathProduct wreath(const FiniteForestAlgebra& outer, const FiniteForestAlgebra& inner,
                     std::size_t budget) {
  WreathProduct w{FiniteForestAlgebra::trusted({1, {0}, 0, 1, {0}, 0, {0}, std::vector<Elem>{0}}),
                  outer.h_size(), outer.v_size(), inner.h_size(), inner.v_size(), {}, {}};
  std::size_t functions = 1;
  for (std::size_t k = 0; k < inner.h_size(); ++k) {
    functions *= outer.v_size();
    if (functions * inner.v_size() > budget)
      throw BudgetExceeded("wreath product vertical monoid", functions * inner.v_size(), budget);
  }
  const std::size_t nh = outer.h_size() * inner.h_size();
  const std::size_t nv = functions * inner.v_size();
  if (nh * nv > budget * 64)
    throw BudgetExceeded("wreath product action table", nh * nv, budget * 64);

  std::vector<std::vector<Elem>> fs(nv);
  std::vector<Elem> v1s(nv);
  for (Elem v = 0; v < nv; ++v) std::tie(fs[v], v1s[v]) = w.decode_v(v);

  AlgebraTables t;
  t.h_size = nh;
  t.v_size = nv;
  t.zero = w.encode_h(outer.zero(), inner.zero());
  t.one = w.encode_v(std::vector<Elem>(inner.h_size(), outer.one()), inner.one());
  t.add.resize(nh * nh);
  for (Elem a = 0; a < nh; ++a)
    for (Elem b = 0; b < nh; ++b) {
      auto [a2, a1] = w.decode_h(a);
      auto [b2, b1] = w.decode_h(b);
      t.add[a * nh + b] = w.encode_h(outer.add(a2, b2), inner.add(a1, b1));
    }
  t.act.resize(nh * nv);
  for (Elem h = 0; h < nh; ++h) {
    auto [h2, h1] = w.decode_h(h);
    for (Elem v = 0; v < nv; ++v)
      t.act[h * nv + v] = w.encode_h(outer.act(h2, fs[v][h1]), inner.act(h1, v1s[v]));
  }
  t.mul.resize(nv * nv);
  std::vector<Elem> g(inner.h_size());
  for (Elem a = 0; a < nv; ++a)
    for (Elem b = 0; b < nv; ++b) {
      for (Elem k = 0; k < inner.h_size(); ++k)
        g[k] = outer.mul(fs[a][k], fs[b][inner.act(k, v1s[a])]);
      t.mul[a * nv + b] = w.encode_v(g, inner.mul(v1s[a], v1s[b]));
    }
  t.ins.emplace(nv * nh);
  for (Elem v = 0; v < nv; ++v)
    for (Elem h = 0; h < nh; ++h) {
      auto [h2, h1] = w.decode_h(h);
      for (Elem k = 0; k < inner.h_size(); ++k) g[k] = outer.ins(fs[v][k], h2);
      (*t.ins)[v * nh + h] = w.encode_v(g, inner.ins(v1s[v], h1));
    }

  // Faithfulness holds for valid factors; check it anyway.
  std::unordered_set<std::vector<Elem>, Hasher> columns;
  std::vector<Elem> col(nh);
  for (Elem v = 0; v < nv; ++v) {
    for (Elem h = 0; h < nh; ++h) col[h] = t.act[h * nv + v];
    if (!columns.insert(col).second)
      throw AlgebraError({"faithful", {v}, "wreath product vertical element collapses"});
  }

  w.algebra = FiniteForestAlgebra::trusted(std::move(t));
  w.pi_h.resize(nh);
  w.pi_v.resize(nv);
  for (Elem h = 0; h < nh; ++h) w.pi_h[h] = w.decode_h(h).second;
  for (Elem v = 0; v < nv; ++v) w.pi_v[v] = v1s[v];
  if (auto err = check_homomorphism(w.algebra, inner, w.pi_h, w.pi_v))
    throw std::logic_error("wreath projection: " + *err);
  return w;
}

std::optional<std::string> check_homomorphism(const FiniteForestAlgebra& a,
                                              const FiniteForestAlgebra& b,
                                              const std::vector<Elem>& mh,
                                              const std::vector<Elem>& mv) {
  if (mh.size() != a.h_size() || mv.size() != a.v_size()) return "map sizes do not match";
  for (auto x : mh)
    if (x >= b.h_size()) return "horizontal image out of range";
  for (auto x : mv)
    if (x >= b.v_size()) return "vertical image out of range";
  if (mh[a.zero()] != b.zero()) return "zero not preserved";
  if (mv[a.one()] != b.one()) return "one not preserved";
  for (Elem x = 0; x < a.h_size(); ++x)
    for (Elem y = 0; y < a.h_size(); ++y)
      if (mh[a.add(x, y)] != b.add(mh[x], mh[y]))
        return "addition not preserved at (" + std::to_string(x) + "," + std::to_string(y) + ")";
  for (Elem x = 0; x < a.v_size(); ++x)
    for (Elem y = 0; y < a.v_size(); ++y)
      if (mv[a.mul(x, y)] != b.mul(mv[x], mv[y]))
        return "multiplication not preserved at (" + std::to_string(x) + "," + std::to_string(y) + ")";
  for (Elem h = 0; h < a.h_size(); ++h)
    for (Elem v = 0; v < a.v_size(); ++v) {
      if (mh[a.act(h, v)] != b.act(mh[h], mv[v]))
        return "action not preserved at (" + std::to_string(h) + "," + std::to_string(v) + ")";
      if (mv[a.ins(v, h)] != b.ins(mv[v], mh[h]))
        return "insertion not preserved at (" + std::to_string(v) + "," + std::to_string(h) + ")";
    }
  return std::nullopt;
}

}  // namespace forest

#include "forest/category.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace forest {

namespace {

std::string ids_text(const std::vector<Elem>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(ids[i]);
  }
  return s;
}

std::string violation_text(const Violation& v) {
  return v.law + " [" + ids_text(v.indices) + "]: " + v.message;
}

Violation shape(std::string msg, std::vector<Elem> ids = {}) {
  return Violation{"shape", std::move(ids), std::move(msg)};
}

std::optional<Violation> monoid_violation(const MonoidTable& m, const std::string& name) {
  const std::size_t n = m.size;
  if (n == 0) return shape(name + " monoid is empty");
  if (m.op.size() != n * n) return shape(name + " table has the wrong size");
  if (m.identity >= n) return shape(name + " identity out of range");
  for (Elem x : m.op)
    if (x >= n) return shape(name + " table entry out of range");
  auto op = [&](Elem a, Elem b) { return m.op[a * n + b]; };
  for (Elem a = 0; a < n; ++a)
    if (op(a, m.identity) != a || op(m.identity, a) != a)
      return Violation{name + "_identity", {a}, "identity law fails"};
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (op(a, b) != op(b, a)) return Violation{name + "_commutative", {a, b}, "a+b != b+a"};
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (op(op(a, b), c) != op(a, op(b, c)))
          return Violation{name + "_associative", {a, b, c}, "(a+b)+c != a+(b+c)"};
  return std::nullopt;
}

}  // namespace

CategoryError::CategoryError(Violation v) : std::runtime_error(violation_text(v)), violation_(std::move(v)) {}

bool CoveringReport::has(const std::string& clause) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const std::string& f) { return f.rfind(clause + ":", 0) == 0; });
}

Elem ForestCategory::comp(Elem u, Elem v) const {
  if (end_[u] != start_[v]) return kNone;
  return comp_[u][pos_[v]];
}

Elem ForestCategory::act(Elem c, Elem u) const {
  if (h_end_[c] != start_[u]) return kNone;
  return act_[c][pos_[u]];
}

bool ForestCategory::objects_idempotent_commutative() const {
  for (Elem x = 0; x < objects_.size; ++x) {
    if (obj_add(x, x) != x) return false;
    for (Elem y = 0; y < objects_.size; ++y)
      if (obj_add(x, y) != obj_add(y, x)) return false;
  }
  return true;
}

ForestCategory ForestCategory::trusted(const RawCategory& raw) {
  auto fail = [](Violation v) { throw CategoryError(std::move(v)); };
  const std::size_t no = raw.objects.size, nh = raw.harrows.size, na = raw.arrows.size();
  if (no == 0 || raw.objects.op.size() != no * no || raw.objects.identity >= no)
    fail(shape("objects monoid malformed"));
  if (nh == 0 || raw.harrows.op.size() != nh * nh || raw.harrows.identity >= nh)
    fail(shape("half-arrow monoid malformed"));
  for (Elem x : raw.objects.op)
    if (x >= no) fail(shape("objects table entry out of range"));
  for (Elem x : raw.harrows.op)
    if (x >= nh) fail(shape("half-arrow table entry out of range"));
  if (raw.harrow_end.size() != nh) fail(shape("end map has the wrong length"));
  for (Elem c = 0; c < nh; ++c)
    if (raw.harrow_end[c] >= no) fail(shape("half-arrow end out of range", {c}));
  for (Elem u = 0; u < na; ++u)
    if (raw.arrows[u].first >= no || raw.arrows[u].second >= no) fail(shape("arrow endpoint out of range", {u}));
  if (raw.identity.size() != no) fail(shape("identity list has the wrong length"));
  for (Elem x = 0; x < no; ++x)
    if (raw.identity[x] >= na) fail(shape("identity arrow out of range", {x}));

  ForestCategory c;
  c.raw_ = raw;
  c.objects_ = raw.objects;
  c.harrows_ = raw.harrows;
  c.h_end_ = raw.harrow_end;
  c.identity_ = raw.identity;
  c.out_.assign(no, {});
  c.to_.assign(no, {});
  c.pos_.assign(na, 0);
  for (Elem u = 0; u < na; ++u) {
    c.start_.push_back(raw.arrows[u].first);
    c.end_.push_back(raw.arrows[u].second);
    c.pos_[u] = static_cast<Elem>(c.out_[raw.arrows[u].first].size());
    c.out_[raw.arrows[u].first].push_back(u);
  }
  for (Elem h = 0; h < nh; ++h) c.to_[raw.harrow_end[h]].push_back(h);

  c.comp_.resize(na);
  for (Elem u = 0; u < na; ++u) c.comp_[u].assign(c.out_[c.end_[u]].size(), kNone);
  c.act_.resize(nh);
  for (Elem h = 0; h < nh; ++h) c.act_[h].assign(c.out_[c.h_end_[h]].size(), kNone);
  c.ins_.assign(na * nh, kNone);

  for (const auto& [u, v, w] : raw.comp) {
    if (u >= na || v >= na || w >= na) fail(shape("composition entry out of range", {u, v, w}));
    if (c.end_[u] != c.start_[v]) fail(shape("composition of non-composable arrows", {u, v}));
    Elem& slot = c.comp_[u][c.pos_[v]];
    if (slot != kNone && slot != w) fail(shape("conflicting composition entries", {u, v}));
    slot = w;
  }
  for (const auto& [h, u, w] : raw.act) {
    if (h >= nh || u >= na || w >= nh) fail(shape("action entry out of range", {h, u, w}));
    if (c.h_end_[h] != c.start_[u]) fail(shape("action on a half-arrow with the wrong end", {h, u}));
    Elem& slot = c.act_[h][c.pos_[u]];
    if (slot != kNone && slot != w) fail(shape("conflicting action entries", {h, u}));
    slot = w;
  }
  for (const auto& [u, h, w] : raw.ins) {
    if (u >= na || h >= nh || w >= na) fail(shape("insertion entry out of range", {u, h, w}));
    Elem& slot = c.ins_[u * nh + h];
    if (slot != kNone && slot != w) fail(shape("conflicting insertion entries", {u, h}));
    slot = w;
  }
  for (Elem u = 0; u < na; ++u)
    for (std::size_t i = 0; i < c.comp_[u].size(); ++i)
      if (c.comp_[u][i] == kNone)
        fail(Violation{"comp_total", {u, c.out_[c.end_[u]][i]}, "composition undefined on a composable pair"});
  for (Elem h = 0; h < nh; ++h)
    for (std::size_t i = 0; i < c.act_[h].size(); ++i)
      if (c.act_[h][i] == kNone)
        fail(Violation{"act_total", {h, c.out_[c.h_end_[h]][i]}, "action undefined on a composable pair"});
  for (Elem u = 0; u < na; ++u)
    for (Elem h = 0; h < nh; ++h)
      if (c.ins_[u * nh + h] == kNone) fail(Violation{"ins_total", {u, h}, "insertion undefined"});
  return c;
}

std::optional<Violation> find_category_violation(const RawCategory& raw) {
  if (auto v = monoid_violation(raw.objects, "objects")) return v;
  if (auto v = monoid_violation(raw.harrows, "harrows")) return v;
  std::optional<ForestCategory> built;
  try {
    built.emplace(ForestCategory::trusted(raw));
  } catch (const CategoryError& e) {
    return e.violation();
  }
  const ForestCategory& c = *built;
  const Elem no = static_cast<Elem>(c.num_objects());
  const Elem nh = static_cast<Elem>(c.num_harrows());
  const Elem na = static_cast<Elem>(c.num_arrows());

  // end is an onto monoid homomorphism
  if (c.h_end(c.h_zero()) != c.obj_zero())
    return Violation{"end_homomorphism", {c.h_zero()}, "end(0) is not the zero object"};
  for (Elem a = 0; a < nh; ++a)
    for (Elem b = 0; b < nh; ++b)
      if (c.h_end(c.h_add(a, b)) != c.obj_add(c.h_end(a), c.h_end(b)))
        return Violation{"end_homomorphism", {a, b}, "end(c+d) != end(c)+end(d)"};
  for (Elem x = 0; x < no; ++x)
    if (c.harrows_to(x).empty()) return Violation{"end_onto", {x}, "no half-arrow ends at this object"};

  // composition
  for (Elem x = 0; x < no; ++x) {
    const Elem i = c.identity(x);
    if (c.start(i) != x || c.end(i) != x) return Violation{"identity", {x, i}, "identity is not a loop at x"};
  }
  for (Elem u = 0; u < na; ++u) {
    if (c.comp(c.identity(c.start(u)), u) != u || c.comp(u, c.identity(c.end(u))) != u)
      return Violation{"identity", {u}, "identity is not a unit for composition"};
    for (Elem v : c.out(c.end(u))) {
      const Elem uv = c.comp(u, v);
      if (c.start(uv) != c.start(u) || c.end(uv) != c.end(v))
        return Violation{"comp_endpoints", {u, v}, "uv has the wrong endpoints"};
    }
  }
  for (Elem u = 0; u < na; ++u)
    for (Elem v : c.out(c.end(u)))
      for (Elem w : c.out(c.end(v)))
        if (c.comp(c.comp(u, v), w) != c.comp(u, c.comp(v, w)))
          return Violation{"comp_associative", {u, v, w}, "(uv)w != u(vw)"};

  // action
  for (Elem h = 0; h < nh; ++h) {
    if (c.act(h, c.identity(c.h_end(h))) != h) return Violation{"act_unit", {h}, "c 1 != c"};
    for (Elem u : c.out(c.h_end(h)))
      if (c.h_end(c.act(h, u)) != c.end(u)) return Violation{"act_endpoints", {h, u}, "end(cu) != end(u)"};
  }
  for (Elem h = 0; h < nh; ++h)
    for (Elem u : c.out(c.h_end(h)))
      for (Elem v : c.out(c.end(u)))
        if (c.act(c.act(h, u), v) != c.act(h, c.comp(u, v)))
          return Violation{"act_associative", {h, u, v}, "(cu)v != c(uv)"};
  for (Elem x = 0; x < no; ++x) {
    std::map<std::pair<Elem, std::vector<Elem>>, Elem> seen;
    for (Elem u : c.out(x)) {
      std::vector<Elem> sig;
      for (Elem h : c.harrows_to(x)) sig.push_back(c.act(h, u));
      auto [it, fresh] = seen.emplace(std::make_pair(c.end(u), std::move(sig)), u);
      if (!fresh) return Violation{"faithful", {it->second, u}, "coterminal arrows act identically"};
    }
  }

  // insertion
  for (Elem u = 0; u < na; ++u)
    for (Elem d = 0; d < nh; ++d) {
      const Elem i = c.ins(u, d);
      if (c.start(i) != c.start(u) || c.end(i) != c.obj_add(c.end(u), c.h_end(d)))
        return Violation{"ins_endpoints", {u, d}, "ins(u,d) has the wrong endpoints"};
    }
  for (Elem u = 0; u < na; ++u)
    for (Elem d = 0; d < nh; ++d) {
      const Elem i = c.ins(u, d);
      for (Elem e : c.harrows_to(c.start(u)))
        if (c.act(e, i) != c.h_add(c.act(e, u), d))
          return Violation{"ins_action", {e, u, d}, "e ins(u,d) != eu + d"};
      for (Elem g = 0; g < nh; ++g)
        if (c.ins(i, g) != c.ins(u, c.h_add(d, g)))
          return Violation{"ins_nested", {u, d, g}, "ins(ins(u,d),g) != ins(u,d+g)"};
    }
  for (Elem f = 0; f < na; ++f)
    for (Elem u : c.out(c.end(f)))
      for (Elem d = 0; d < nh; ++d)
        if (c.comp(f, c.ins(u, d)) != c.ins(c.comp(f, u), d))
          return Violation{"ins_precomposition", {f, u, d}, "f ins(u,d) != ins(fu,d)"};
  return std::nullopt;
}

ForestCategory ForestCategory::from_raw(const RawCategory& raw) {
  if (auto v = find_category_violation(raw)) throw CategoryError(*v);
  return trusted(raw);
}

ForestCategory one_object_category(const FiniteForestAlgebra& a) {
  RawCategory raw;
  raw.objects = trivial_monoid();
  const auto& t = a.tables();
  raw.harrows = MonoidTable{t.h_size, t.add, t.zero};
  raw.harrow_end.assign(t.h_size, 0);
  raw.arrows.assign(t.v_size, {0, 0});
  raw.identity = {t.one};
  for (Elem u = 0; u < t.v_size; ++u)
    for (Elem v = 0; v < t.v_size; ++v) raw.comp.emplace_back(u, v, a.mul(u, v));
  for (Elem h = 0; h < t.h_size; ++h)
    for (Elem u = 0; u < t.v_size; ++u) {
      raw.act.emplace_back(h, u, a.act(h, u));
      raw.ins.emplace_back(u, h, a.ins(u, h));
    }
  return ForestCategory::from_raw(raw);
}

ForestCategory category_from_actions(const MonoidTable& objects, const MonoidTable& harrows,
                                     const std::vector<Elem>& harrow_end,
                                     const std::vector<ArrowSpec>& generators, std::size_t max_arrows) {
  if (auto v = monoid_violation(objects, "objects")) throw CategoryError(*v);
  if (auto v = monoid_violation(harrows, "harrows")) throw CategoryError(*v);
  const std::size_t no = objects.size, nh = harrows.size;
  if (harrow_end.size() != nh) throw CategoryError(shape("end map has the wrong length"));
  std::vector<std::vector<Elem>> to(no);
  std::vector<Elem> pos(nh);
  for (Elem h = 0; h < nh; ++h) {
    if (harrow_end[h] >= no) throw CategoryError(shape("half-arrow end out of range", {h}));
    pos[h] = static_cast<Elem>(to[harrow_end[h]].size());
    to[harrow_end[h]].push_back(h);
  }
  auto hadd = [&](Elem a, Elem b) { return harrows.op[a * nh + b]; };
  auto oadd = [&](Elem x, Elem y) { return objects.op[x * no + y]; };

  std::vector<ArrowSpec> arrows;
  std::map<std::tuple<Elem, Elem, std::vector<Elem>>, Elem> index;
  auto add = [&](ArrowSpec s) -> Elem {
    if (s.start >= no || s.end >= no) throw CategoryError(shape("arrow endpoint out of range"));
    if (s.action.size() != to[s.start].size())
      throw CategoryError(shape("arrow action has the wrong length"));
    for (Elem h : s.action)
      if (h >= nh || harrow_end[h] != s.end)
        throw CategoryError(Violation{"act_endpoints", {h}, "arrow action leaves HArr(end)"});
    auto key = std::make_tuple(s.start, s.end, s.action);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (arrows.size() >= max_arrows) throw BudgetExceeded("category arrows", arrows.size() + 1, max_arrows);
    const auto id = static_cast<Elem>(arrows.size());
    index.emplace(std::move(key), id);
    arrows.push_back(std::move(s));
    return id;
  };

  std::vector<Elem> identity(no);
  for (Elem x = 0; x < no; ++x) identity[x] = add(ArrowSpec{x, x, to[x]});
  for (const auto& g : generators) add(g);

  auto compose = [&](Elem u, Elem v) {
    ArrowSpec s{arrows[u].start, arrows[v].end, {}};
    for (Elem h : arrows[u].action) s.action.push_back(arrows[v].action[pos[h]]);
    return s;
  };
  auto insert = [&](Elem u, Elem d) {
    ArrowSpec s{arrows[u].start, oadd(arrows[u].end, harrow_end[d]), {}};
    for (Elem h : arrows[u].action) s.action.push_back(hadd(h, d));
    return s;
  };

  // Every new arrow is composed with all earlier ones (both ways) and with
  // every half-arrow inserted.
  std::map<std::pair<Elem, Elem>, Elem> comp;
  std::map<std::pair<Elem, Elem>, Elem> ins;
  for (Elem i = 0; i < arrows.size(); ++i) {
    for (Elem j = 0; j <= i; ++j) {
      if (arrows[i].end == arrows[j].start) comp[{i, j}] = add(compose(i, j));
      if (arrows[j].end == arrows[i].start) comp[{j, i}] = add(compose(j, i));
    }
    for (Elem d = 0; d < nh; ++d) ins[{i, d}] = add(insert(i, d));
  }

  RawCategory raw;
  raw.objects = objects;
  raw.harrows = harrows;
  raw.harrow_end = harrow_end;
  raw.identity = identity;
  for (const auto& a : arrows) raw.arrows.emplace_back(a.start, a.end);
  for (const auto& [k, w] : comp) raw.comp.emplace_back(k.first, k.second, w);
  for (const auto& [k, w] : ins) raw.ins.emplace_back(k.first, k.second, w);
  for (Elem u = 0; u < arrows.size(); ++u)
    for (std::size_t p = 0; p < arrows[u].action.size(); ++p)
      raw.act.emplace_back(to[arrows[u].start][p], u, arrows[u].action[p]);
  return ForestCategory::from_raw(raw);
}

}  // namespace forest

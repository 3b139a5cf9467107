#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <functional>
#include <map>
#include <unordered_set>

#include "forest/category.hpp"

namespace forest {

namespace {

[[noreturn]] void mismatch(const std::string& what, std::vector<Elem> ids) {
  throw CategoryError(Violation{"diagram", std::move(ids), what});
}

Elem sum_values(const ForestCategory& c, const std::vector<Elem>& vals) {
  Elem s = c.h_zero();
  for (Elem v : vals) s = c.h_add(s, v);
  return s;
}

/// Combines the values of a sibling list as the half-arrow seen by a parent
/// arrow (or the root level when `u` is kNone).
Elem combine(const ForestCategory& c, const std::vector<Elem>& vals, Elem u, EvalMode mode) {
  auto apply = [&](Elem h) {
    if (u == kNone) return h;
    const Elem r = c.act(h, u);
    if (r == kNone) mismatch("children do not end at the arrow's start", {h, u});
    return r;
  };
  if (mode == EvalMode::SumFirst || vals.size() <= 1) return apply(sum_values(c, vals));
  // Fold the siblings after the first into an arrow out of end(first).
  Elem a = c.identity(c.h_end(vals[0]));
  if (mode == EvalMode::InsertLeftFold) {
    for (std::size_t i = 1; i < vals.size(); ++i) a = c.ins(a, vals[i]);
  } else {
    a = c.ins(a, sum_values(c, {vals.begin() + 1, vals.end()}));
  }
  if (u != kNone) {
    const Elem au = c.comp(a, u);
    if (au == kNone) mismatch("children do not end at the arrow's start", {vals[0], u});
    a = au;
  }
  return c.act(vals[0], a);
}

Elem eval_node(const ForestCategory& c, const DiagramNode& n, EvalMode mode, const std::vector<Elem>* args) {
  switch (n.kind) {
    case DiagramNode::Kind::HalfArrow:
      if (n.id >= c.num_harrows()) mismatch("half-arrow id out of range", {n.id});
      return n.id;
    case DiagramNode::Kind::Hole:
      if (!args || n.hole_index >= args->size()) mismatch("unfilled hole", {n.id});
      if (c.h_end((*args)[n.hole_index]) != n.id) mismatch("hole filled with the wrong object", {n.id});
      return (*args)[n.hole_index];
    case DiagramNode::Kind::Arrow: {
      if (n.id >= c.num_arrows()) mismatch("arrow id out of range", {n.id});
      std::vector<Elem> vals;
      for (const auto& ch : n.children) vals.push_back(eval_node(c, ch, mode, args));
      return combine(c, vals, n.id, mode);
    }
  }
  return kNone;
}

/// Value of a subtree that may contain the hole: (is_arrow, value).
std::pair<bool, Elem> eval_ctx(const ForestCategory& c, const std::vector<DiagramNode>& nodes, Elem parent);

std::pair<bool, Elem> eval_ctx_node(const ForestCategory& c, const DiagramNode& n) {
  switch (n.kind) {
    case DiagramNode::Kind::HalfArrow:
      return {false, eval_node(c, n, EvalMode::SumFirst, nullptr)};
    case DiagramNode::Kind::Hole:
      if (n.id >= c.num_objects()) mismatch("hole object out of range", {n.id});
      return {true, c.identity(n.id)};
    case DiagramNode::Kind::Arrow:
      if (n.id >= c.num_arrows()) mismatch("arrow id out of range", {n.id});
      return eval_ctx(c, n.children, n.id);
  }
  return {false, kNone};
}

std::pair<bool, Elem> eval_ctx(const ForestCategory& c, const std::vector<DiagramNode>& nodes, Elem parent) {
  Elem hole = kNone;
  std::vector<Elem> rest;
  for (const auto& ch : nodes) {
    auto [is_arrow, v] = eval_ctx_node(c, ch);
    if (is_arrow) {
      if (hole != kNone) mismatch("context diagram has more than one hole", {});
      hole = v;
    } else {
      rest.push_back(v);
    }
  }
  if (hole == kNone) return {false, combine(c, rest, parent, EvalMode::SumFirst)};
  Elem a = c.ins(hole, sum_values(c, rest));
  if (parent != kNone) {
    const Elem ap = c.comp(a, parent);
    if (ap == kNone) mismatch("children do not end at the arrow's start", {a, parent});
    a = ap;
  }
  return {true, a};
}

void support_of(const ForestCategory& c, const DiagramNode& n, Bitset& out) {
  if (n.kind == DiagramNode::Kind::HalfArrow) out.set(n.id);
  if (n.kind == DiagramNode::Kind::Arrow) out.set(c.num_harrows() + n.id);
  for (const auto& ch : n.children) support_of(c, ch, out);
}

void render_node(const DiagramNode& n, std::string& out) {
  switch (n.kind) {
    case DiagramNode::Kind::HalfArrow:
      out += "h" + std::to_string(n.id);
      return;
    case DiagramNode::Kind::Hole:
      out += "[" + std::to_string(n.hole_index) + ":" + std::to_string(n.id) + "]";
      return;
    case DiagramNode::Kind::Arrow:
      out += "u" + std::to_string(n.id);
      out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += "+";
        render_node(n.children[i], out);
      }
      out += ")";
      return;
  }
}

}  // namespace

Elem eval_diagram(const ForestCategory& c, const Diagram& d, EvalMode mode) {
  std::vector<Elem> vals;
  for (const auto& r : d.roots) vals.push_back(eval_node(c, r, mode, nullptr));
  return combine(c, vals, kNone, mode);
}

Elem eval_context_diagram(const ForestCategory& c, const Diagram& d) {
  auto [is_arrow, v] = eval_ctx(c, d.roots, kNone);
  if (!is_arrow) mismatch("context diagram has no hole", {});
  return v;
}

Elem eval_multicontext(const ForestCategory& c, const Diagram& d, const std::vector<Elem>& args) {
  std::vector<Elem> vals;
  for (const auto& r : d.roots) vals.push_back(eval_node(c, r, EvalMode::SumFirst, &args));
  return sum_values(c, vals);
}

Bitset support(const ForestCategory& c, const Diagram& d) {
  Bitset out(c.num_harrows() + c.num_arrows());
  for (const auto& r : d.roots) support_of(c, r, out);
  return out;
}

Elem rootsum(const ForestCategory& c, const Diagram& d) {
  Elem x = c.obj_zero();
  for (const auto& r : d.roots) {
    Elem e = kNone;
    switch (r.kind) {
      case DiagramNode::Kind::HalfArrow: e = c.h_end(r.id); break;
      case DiagramNode::Kind::Arrow: e = c.end(r.id); break;
      case DiagramNode::Kind::Hole: e = r.id; break;
    }
    x = c.obj_add(x, e);
  }
  return x;
}

std::string render(const Diagram& d) {
  if (d.roots.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    if (i) out += "+";
    render_node(d.roots[i], out);
  }
  return out;
}

// -------------------------------------------------------------- enumeration

std::vector<Diagram> enumerate_multicontexts(const ForestCategory& c, const std::vector<Elem>& hole_objects,
                                             std::size_t max_nodes) {
  if (hole_objects.size() > 31) throw std::invalid_argument("too many holes");
  struct Item {
    DiagramNode node;
    std::size_t size;
    std::uint32_t mask;
    Elem end;
  };
  std::vector<Item> trees;
  const std::uint32_t full = (std::uint32_t{1} << hole_objects.size()) - 1;

  // Forests of exactly `size` nodes from trees[0..limit), as nondecreasing
  // index sequences with disjoint hole masks.
  auto forests = [&](std::size_t size, std::size_t limit, auto&& emit) {
    std::vector<std::size_t> picked;
    std::function<void(std::size_t, std::size_t, std::uint32_t)> rec = [&](std::size_t from, std::size_t left,
                                                                          std::uint32_t mask) {
      if (left == 0) emit(picked, mask);
      for (std::size_t i = from; i < limit; ++i) {
        const Item& t = trees[i];
        if (t.size > left || (t.mask & mask)) continue;
        picked.push_back(i);
        // A hole cannot repeat, so continue from i + 1 for size-0 trees.
        rec(t.size == 0 ? i + 1 : i, left - t.size, mask | t.mask);
        picked.pop_back();
      }
    };
    rec(0, size, 0);
  };
  auto build = [&](const std::vector<std::size_t>& picked) {
    std::vector<DiagramNode> out;
    for (std::size_t i : picked) out.push_back(trees[i].node);
    return out;
  };
  auto sum_end = [&](const std::vector<std::size_t>& picked) {
    Elem x = c.obj_zero();
    for (std::size_t i : picked) x = c.obj_add(x, trees[i].end);
    return x;
  };

  for (std::size_t i = 0; i < hole_objects.size(); ++i) {
    DiagramNode n{DiagramNode::Kind::Hole, hole_objects[i], {}, i};
    trees.push_back(Item{n, 0, std::uint32_t{1} << i, hole_objects[i]});
  }
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    const std::size_t limit = trees.size();
    if (n == 1)
      for (Elem h = 0; h < c.num_harrows(); ++h)
        trees.push_back(Item{DiagramNode{DiagramNode::Kind::HalfArrow, h, {}, 0}, 1, 0, c.h_end(h)});
    std::vector<Item> fresh;
    forests(n - 1, limit, [&](const std::vector<std::size_t>& picked, std::uint32_t mask) {
      const Elem x = sum_end(picked);
      for (Elem u : c.out(x))
        fresh.push_back(Item{DiagramNode{DiagramNode::Kind::Arrow, u, build(picked), 0}, n, mask, c.end(u)});
    });
    for (auto& f : fresh) trees.push_back(std::move(f));
  }

  std::vector<Diagram> out;
  const std::size_t min_nodes = hole_objects.empty() ? 1 : 0;
  for (std::size_t n = min_nodes; n <= max_nodes; ++n)
    forests(n, trees.size(), [&](const std::vector<std::size_t>& picked, std::uint32_t mask) {
      if (mask == full) out.push_back(Diagram{build(picked)});
    });
  return out;
}

std::vector<Diagram> enumerate_diagrams(const ForestCategory& c, std::size_t max_nodes) {
  return enumerate_multicontexts(c, {}, max_nodes);
}

// ---------------------------------------------------------------- identities

IdentityReport check_identities(const ForestCategory& c) {
  IdentityReport rep;
  rep.precondition = c.objects_idempotent_commutative();
  const Elem nh = static_cast<Elem>(c.num_harrows());

  for (Elem r = 0; r < nh && !rep.loop_removal; ++r) {
    const Elem y = c.h_end(r);
    for (Elem s : c.out(y)) {
      if (c.end(s) != y) continue;
      const Elem rs = c.act(r, s);
      for (Elem t1 : c.out(y))
        for (Elem t2 : c.out(y)) {
          const Elem lhs = c.h_add(c.act(rs, t1), c.act(rs, t2));
          const Elem rhs = c.h_add(c.act(r, t1), c.act(rs, t2));
          if (lhs != rhs && !rep.loop_removal)
            rep.loop_removal = IdentityFailure{"loop_removal", {r, s, t1, t2},
                                               "rst1 + rst2 = " + std::to_string(lhs) + " but rt1 + rst2 = " +
                                                   std::to_string(rhs)};
        }
      if (rep.loop_removal) break;
    }
  }

  for (Elem r = 0; r < nh && !rep.horizontal_absorption; ++r)
    for (Elem s = 0; s < nh && !rep.horizontal_absorption; ++s) {
      const Elem x = c.h_end(r), xy = c.h_end(s);
      if (c.obj_add(x, xy) != xy) continue;
      const Elem rs = c.h_add(r, s);
      for (Elem t : c.out(xy)) {
        for (Elem u : c.out(x)) {
          const Elem ru = c.act(r, u);
          const Elem lhs = c.h_add(c.act(rs, t), ru);
          const Elem rhs = c.h_add(c.act(s, t), ru);
          if (lhs != rhs) {
            rep.horizontal_absorption =
                IdentityFailure{"horizontal_absorption", {r, s, t, u},
                                "(r+s)t + ru = " + std::to_string(lhs) + " but st + ru = " + std::to_string(rhs)};
            break;
          }
        }
        if (rep.horizontal_absorption) break;
      }
    }

  for (Elem r = 0; r < nh; ++r)
    if (c.h_add(r, r) != r) {
      rep.horizontal_idempotence =
          IdentityFailure{"horizontal_idempotence", {r}, "r + r = " + std::to_string(c.h_add(r, r))};
      break;
    }
  return rep;
}

DerivedIdentityReport check_derived_identities(const ForestCategory& c, std::size_t transfer_bound) {
  DerivedIdentityReport rep;
  const Elem no = static_cast<Elem>(c.num_objects());
  const Elem nh = static_cast<Elem>(c.num_harrows());

  for (Elem u = 0; u < c.num_arrows(); ++u)
    if (c.start(u) == c.end(u) && c.comp(u, u) != u) {
      rep.vertical_idempotence = IdentityFailure{"vertical_idempotence", {u}, "uu != u"};
      break;
    }

  for (Elem x = 0; x < no && !rep.horizontal_swap; ++x) {
    const auto& hs = c.harrows_to(x);
    const auto& us = c.out(x);
    for (Elem r : hs)
      for (Elem s : hs)
        for (Elem t : us)
          for (Elem u : us) {
            if (rep.horizontal_swap) break;
            const Elem lhs = c.h_add(c.act(r, t), c.act(s, u));
            const Elem rhs = c.h_add(c.act(s, t), c.act(r, u));
            if (lhs != rhs)
              rep.horizontal_swap = IdentityFailure{"horizontal_swap", {r, s, t, u}, "rt + su != st + ru"};
          }
  }

  for (Elem r = 0; r < nh && !rep.nested_insertion_variant; ++r)
    for (Elem t = 0; t < nh && !rep.nested_insertion_variant; ++t) {
      const Elem x = c.h_end(r);
      const Elem xy = c.obj_add(x, c.h_end(t));
      const Elem rt = c.h_add(r, t);
      for (Elem u : c.out(x)) {
        if (c.end(u) != xy) continue;
        const Elem ru = c.act(r, u);
        const Elem rut = c.h_add(ru, t);
        if (c.h_end(rut) != xy) continue;
        for (Elem s : c.out(xy)) {
          const Elem lhs = c.h_add(c.act(rt, s), ru);
          const Elem rhs = c.h_add(c.act(rut, s), ru);
          if (lhs != rhs) {
            rep.nested_insertion_variant =
                IdentityFailure{"nested_insertion_variant", {r, t, s, u}, "(r+t)s + ru != (ru+t)s + ru"};
            break;
          }
        }
        if (rep.nested_insertion_variant) break;
      }
    }

  std::map<std::pair<Elem, Elem>, std::vector<Diagram>> cache;
  for (Elem x = 0; x < no && !rep.horizontal_transfer; ++x)
    for (Elem y = 0; y < no && !rep.horizontal_transfer; ++y) {
      const Elem xy = c.obj_add(x, y);
      auto it = cache.find({x, xy});
      if (it == cache.end())
        it = cache.emplace(std::make_pair(x, xy), enumerate_multicontexts(c, {xy, x, xy}, transfer_bound)).first;
      for (const auto& d : it->second) {
        ++rep.multicontexts_checked;
        for (Elem v : c.harrows_to(x))
          for (Elem w : c.harrows_to(y))
            for (Elem u : c.harrows_to(xy)) {
              if (rep.horizontal_transfer) break;
              const Elem vw = c.h_add(v, w), uw = c.h_add(u, w);
              if (c.h_end(vw) != xy || c.h_end(uw) != xy) continue;
              if (eval_multicontext(c, d, {vw, v, u}) != eval_multicontext(c, d, {uw, v, u}))
                rep.horizontal_transfer =
                    IdentityFailure{"horizontal_transfer", {v, w, u}, "D(v+w,v,u) != D(u+w,v,u) at D = " + render(d)};
            }
        if (rep.horizontal_transfer) break;
      }
    }
  return rep;
}

// -------------------------------------------------------------- brute force

namespace {

struct Key {
  Bitset supp;
  Elem val;
  friend auto operator<=>(const Key&, const Key&) = default;
  friend bool operator==(const Key&, const Key&) = default;
};

/// How a tree or forest key of a given size was first reached.
struct Back {
  enum Kind { Leaf, Arrow, Sum } kind = Leaf;
  Elem id = 0;               // half-arrow or arrow
  Key left{}, right{};       // Arrow: left = child forest; Sum: left = tree, right = rest
  std::size_t left_size = 0, right_size = 0;
};

}  // namespace

std::optional<GlobalIcWitness> brute_force_global_ic(const ForestCategory& c, std::size_t max_nodes,
                                                     std::size_t max_keys) {
  const std::size_t nbits = c.num_harrows() + c.num_arrows();
  const Elem nh = static_cast<Elem>(c.num_harrows());
  std::vector<std::map<Key, Back>> trees(max_nodes + 1), forests(max_nodes + 1);
  forests[0].emplace(Key{Bitset(nbits), c.h_zero()}, Back{});

  std::function<DiagramNode(const Key&, std::size_t)> tree_of;
  std::function<void(const Key&, std::size_t, std::vector<DiagramNode>&)> forest_of;
  tree_of = [&](const Key& k, std::size_t n) {
    const Back& b = trees[n].at(k);
    if (b.kind == Back::Leaf) return DiagramNode{DiagramNode::Kind::HalfArrow, b.id, {}, 0};
    DiagramNode node{DiagramNode::Kind::Arrow, b.id, {}, 0};
    forest_of(b.left, b.left_size, node.children);
    return node;
  };
  forest_of = [&](const Key& k, std::size_t n, std::vector<DiagramNode>& out) {
    if (n == 0) return;
    const Back& b = forests[n].at(k);
    out.push_back(tree_of(b.left, b.left_size));
    forest_of(b.right, b.right_size, out);
  };
  auto diagram = [&](const Key& k, std::size_t n) {
    Diagram d;
    forest_of(k, n, d.roots);
    return d;
  };

  std::map<std::pair<Bitset, Elem>, std::pair<Key, std::size_t>> bucket;
  std::size_t keys = 0;
  auto charge = [&] {
    if (++keys > max_keys) throw BudgetExceeded("diagram keys", keys, max_keys);
  };
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    if (n == 1)
      for (Elem h = 0; h < nh; ++h) {
        Bitset s(nbits);
        s.set(h);
        trees[1].emplace(Key{s, h}, Back{Back::Leaf, h, {}, {}, 0, 0});
      }
    for (const auto& [fk, fb] : forests[n - 1])
      for (Elem u : c.out(c.h_end(fk.val))) {
        Bitset s = fk.supp;
        s.set(nh + u);
        if (trees[n].emplace(Key{std::move(s), c.act(fk.val, u)}, Back{Back::Arrow, u, fk, {}, n - 1, 0}).second)
          charge();
      }
    for (std::size_t t = 1; t <= n; ++t)
      for (const auto& [tk, tb] : trees[t])
        for (const auto& [rk, rb] : forests[n - t])
          if (forests[n].emplace(Key{tk.supp | rk.supp, c.h_add(tk.val, rk.val)},
                                 Back{Back::Sum, 0, tk, rk, t, n - t}).second)
            charge();
    for (const auto& [k, b] : forests[n]) {
      auto [it, fresh] = bucket.emplace(std::make_pair(k.supp, c.h_end(k.val)), std::make_pair(k, n));
      if (!fresh && it->second.first.val != k.val)
        return GlobalIcWitness{diagram(it->second.first, it->second.second), diagram(k, n)};
    }
  }
  return std::nullopt;
}

// -------------------------------------------------------------- canonical cover

namespace {

using Family = std::vector<std::uint8_t>;
using Counts = std::vector<std::uint64_t>;

void zeta(Counts& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = std::size_t{1} << i;
    for (std::size_t m = 0; m < a.size(); ++m)
      if (m & b) a[m] += a[m ^ b];
  }
}

void mobius(Counts& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = std::size_t{1} << i;
    for (std::size_t m = 0; m < a.size(); ++m)
      if (m & b) a[m] -= a[m ^ b];
  }
}

bool any(const Family& f) { return std::any_of(f.begin(), f.end(), [](std::uint8_t x) { return x != 0; }); }

Counts transformed(const Family& f, std::size_t n) {
  Counts a(f.begin(), f.end());
  zeta(a, n);
  return a;
}

/// Adds {X | bit : X in src} to dst; returns whether dst grew.
bool shift_into(const Family& src, std::size_t bit, Family& dst) {
  bool grew = false;
  const std::size_t b = std::size_t{1} << bit;
  for (std::size_t m = 0; m < src.size(); ++m)
    if (src[m] && !dst[m | b]) {
      dst[m | b] = 1;
      grew = true;
    }
  return grew;
}

/// For each (i, j) with both families nonempty, adds {X u Y} of left[i],
/// right[j] into out[target(i, j)].  Returns whether anything grew.
template <class Target>
bool union_products(const std::vector<Family>& left, const std::vector<Family>& right, std::vector<Family>& out,
                    std::size_t n, Target target) {
  std::vector<std::optional<Counts>> zl(left.size()), zr(right.size());
  for (std::size_t i = 0; i < left.size(); ++i)
    if (any(left[i])) zl[i] = transformed(left[i], n);
  for (std::size_t j = 0; j < right.size(); ++j)
    if (any(right[j])) zr[j] = transformed(right[j], n);
  std::vector<std::optional<Counts>> acc(out.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (!zl[i]) continue;
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (!zr[j]) continue;
      auto& a = acc[target(static_cast<Elem>(i), static_cast<Elem>(j))];
      if (!a) a.emplace(std::size_t{1} << n, 0);
      for (std::size_t m = 0; m < a->size(); ++m) (*a)[m] += (*zl[i])[m] * (*zr[j])[m];
    }
  }
  bool grew = false;
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (!acc[t]) continue;
    mobius(*acc[t], n);
    for (std::size_t m = 0; m < acc[t]->size(); ++m)
      if ((*acc[t])[m] != 0 && !out[t][m]) {
        out[t][m] = 1;
        grew = true;
      }
  }
  return grew;
}

std::size_t count_pairs(const std::vector<Family>& fams) {
  std::size_t n = 0;
  for (const auto& f : fams) n += static_cast<std::size_t>(std::count(f.begin(), f.end(), 1));
  return n;
}

std::vector<std::uint32_t> projection(std::size_t universe, const std::vector<std::size_t>& keep) {
  std::vector<std::uint32_t> bit(universe, 0);
  if (keep.empty()) {
    for (std::size_t i = 0; i < universe; ++i) bit[i] = std::uint32_t{1} << i;
  } else {
    for (std::size_t i = 0; i < keep.size(); ++i) bit[keep[i]] = std::uint32_t{1} << i;
  }
  std::vector<std::uint32_t> proj(std::size_t{1} << universe, 0);
  for (std::size_t m = 1; m < proj.size(); ++m) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
    proj[m] = proj[m & (m - 1)] | bit[low];
  }
  return proj;
}

}  // namespace

CanonicalCover canonical_flat_cover(const ForestCategory& c, std::size_t max_universe) {
  const std::size_t nh = c.num_harrows(), na = c.num_arrows();
  const std::size_t n = nh + na;
  if (n > max_universe || n > 26) throw BudgetExceeded("canonical cover universe", n, std::min<std::size_t>(max_universe, 26));
  const std::size_t size = std::size_t{1} << n;
  std::vector<Family> forests(nh, Family(size, 0)), trees(nh, Family(size, 0)), contexts(na, Family(size, 0));

  forests[c.h_zero()][0] = 1;
  for (Elem h = 0; h < nh; ++h) trees[h][std::size_t{1} << h] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (Elem a = 0; a < nh; ++a) {
      if (!any(forests[a])) continue;
      for (Elem u : c.out(c.h_end(a))) grew |= shift_into(forests[a], nh + u, trees[c.act(a, u)]);
    }
    grew |= union_products(forests, trees, forests, n, [&](Elem a, Elem t) { return c.h_add(a, t); });
  }

  for (Elem x = 0; x < c.num_objects(); ++x) contexts[c.identity(x)][0] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (Elem e = 0; e < na; ++e) {
      if (!any(contexts[e])) continue;
      for (Elem u : c.out(c.end(e))) grew |= shift_into(contexts[e], nh + u, contexts[c.comp(e, u)]);
    }
    grew |= union_products(contexts, trees, contexts, n, [&](Elem e, Elem t) { return c.ins(e, t); });
  }

  CanonicalCover out;
  out.universe = n;
  out.forest_pairs = count_pairs(forests);
  out.context_pairs = count_pairs(contexts);
  out.harrow = std::move(forests);
  out.arrow = std::move(contexts);
  return out;
}

CoveringReport CanonicalCover::injectivity(const ForestCategory& c, const std::vector<std::size_t>& keep) const {
  CoveringReport rep;
  const auto proj = projection(universe, keep);
  const std::size_t width = keep.empty() ? universe : keep.size();
  std::vector<Elem> owner(std::size_t{1} << width, kNone);

  auto scan = [&](const std::vector<Elem>& members, const std::vector<Family>& fams, const std::string& clause,
                  const std::string& what) {
    std::vector<std::uint32_t> touched;
    bool found = false;
    for (Elem id : members) {
      for (std::size_t m = 0; m < fams[id].size() && !found; ++m) {
        if (!fams[id][m]) continue;
        Elem& o = owner[proj[m]];
        if (o == kNone) {
          o = id;
          touched.push_back(proj[m]);
        } else if (o != id) {
          rep.failures.push_back(clause + ": " + what + " " + std::to_string(o) + " and " + std::to_string(id) +
                                 " share a covering element");
          found = true;
        }
      }
      if (found) break;
    }
    for (auto p : touched) owner[p] = kNone;
    return found;
  };

  std::map<std::pair<Elem, Elem>, std::vector<Elem>> coterminal;
  for (Elem u = 0; u < c.num_arrows(); ++u) coterminal[{c.start(u), c.end(u)}].push_back(u);
  for (const auto& [ends, us] : coterminal)
    if (scan(us, arrow, "b(i)", "coterminal arrows")) break;
  for (Elem x = 0; x < c.num_objects(); ++x)
    if (scan(c.harrows_to(x), harrow, "b(ii)", "half-arrows")) break;
  return rep;
}

Covering<FlatSubsetAlgebra> CanonicalCover::project(const std::vector<std::size_t>& keep) const {
  const auto proj = projection(universe, keep);
  const std::size_t width = keep.empty() ? universe : keep.size();
  auto convert = [&](const std::vector<Family>& fams) {
    std::vector<std::vector<Bitset>> out;
    for (const auto& f : fams) {
      std::set<std::uint32_t> masks;
      for (std::size_t m = 0; m < f.size(); ++m)
        if (f[m]) masks.insert(proj[m]);
      std::vector<Bitset> sets;
      for (auto p : masks) {
        Bitset b(width);
        for (std::size_t i = 0; i < width; ++i)
          if ((p >> i) & 1U) b.set(i);
        sets.push_back(std::move(b));
      }
      std::sort(sets.begin(), sets.end());
      out.push_back(std::move(sets));
    }
    return out;
  };
  return Covering<FlatSubsetAlgebra>{convert(harrow), convert(arrow)};
}

std::vector<std::size_t> CanonicalCover::reduce(const ForestCategory& c) const {
  std::vector<std::size_t> keep(universe);
  for (std::size_t i = 0; i < universe; ++i) keep[i] = i;
  if (!injectivity(c).ok()) return keep;
  for (std::size_t i = universe; i-- > 0;) {
    std::vector<std::size_t> trial;
    for (std::size_t k : keep)
      if (k != i) trial.push_back(k);
    if (trial.empty()) continue;
    if (injectivity(c, trial).ok()) keep = std::move(trial);
  }
  return keep;
}

}  // namespace forest

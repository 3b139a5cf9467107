#pragma once

// Independent checks written without the library's scanners: direct law
// scans over raw tables and per-law confirmation of reported violations.

#include <vector>

#include "forest/algebra.hpp"

namespace oracles {

using forest::AlgebraTables;
using forest::Elem;
using forest::Violation;

struct Tables {
  const AlgebraTables& t;
  Elem nh() const { return static_cast<Elem>(t.h_size); }
  Elem nv() const { return static_cast<Elem>(t.v_size); }
  Elem add(Elem a, Elem b) const { return t.add.at(a * t.h_size + b); }
  Elem mul(Elem a, Elem b) const { return t.mul.at(a * t.v_size + b); }
  Elem act(Elem h, Elem v) const { return t.act.at(h * t.v_size + v); }
  bool in_range() const {
    for (Elem x : t.add)
      if (x >= nh()) return false;
    for (Elem x : t.mul)
      if (x >= nv()) return false;
    for (Elem x : t.act)
      if (x >= nh()) return false;
    return t.zero < nh() && t.one < nv();
  }
  bool same_action(Elem v, Elem w) const {
    for (Elem h = 0; h < nh(); ++h)
      if (act(h, v) != act(h, w)) return false;
    return true;
  }
  bool inserts(Elem w, Elem v, Elem h) const {
    for (Elem g = 0; g < nh(); ++g)
      if (act(g, w) != add(act(g, v), h)) return false;
    return true;
  }
};

/// True iff the tables satisfy every forest algebra law.
inline bool direct_law_scan(const AlgebraTables& raw) {
  Tables t{raw};
  if (t.nh() == 0 || t.nv() == 0 || !t.in_range()) return false;
  for (Elem a = 0; a < t.nh(); ++a) {
    if (t.add(a, raw.zero) != a) return false;
    for (Elem b = 0; b < t.nh(); ++b) {
      if (t.add(a, b) != t.add(b, a)) return false;
      for (Elem c = 0; c < t.nh(); ++c)
        if (t.add(t.add(a, b), c) != t.add(a, t.add(b, c))) return false;
    }
  }
  for (Elem a = 0; a < t.nv(); ++a) {
    if (t.mul(a, raw.one) != a || t.mul(raw.one, a) != a) return false;
    for (Elem b = 0; b < t.nv(); ++b)
      for (Elem c = 0; c < t.nv(); ++c)
        if (t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c))) return false;
  }
  for (Elem h = 0; h < t.nh(); ++h) {
    if (t.act(h, raw.one) != h) return false;
    for (Elem a = 0; a < t.nv(); ++a)
      for (Elem b = 0; b < t.nv(); ++b)
        if (t.act(t.act(h, a), b) != t.act(h, t.mul(a, b))) return false;
  }
  for (Elem v = 0; v < t.nv(); ++v)
    for (Elem w = v + 1; w < t.nv(); ++w)
      if (t.same_action(v, w)) return false;
  for (Elem v = 0; v < t.nv(); ++v)
    for (Elem h = 0; h < t.nh(); ++h) {
      if (raw.ins) {
        if (!t.inserts((*raw.ins).at(v * t.nh() + h), v, h)) return false;
        continue;
      }
      bool found = false;
      for (Elem w = 0; w < t.nv() && !found; ++w) found = t.inserts(w, v, h);
      if (!found) return false;
    }
  return true;
}

/// Re-checks a reported violation at its indices.
inline bool confirms(const AlgebraTables& raw, const Violation& v) {
  Tables t{raw};
  const auto& i = v.indices;
  if (v.law == "shape") return !t.in_range() || t.nh() == 0 || t.nv() == 0;
  if (!t.in_range()) return false;
  if (v.law == "h_identity") return i.size() == 1 && (t.add(raw.zero, i[0]) != i[0] || t.add(i[0], raw.zero) != i[0]);
  if (v.law == "h_commutative") return i.size() == 2 && t.add(i[0], i[1]) != t.add(i[1], i[0]);
  if (v.law == "h_associative")
    return i.size() == 3 && t.add(t.add(i[0], i[1]), i[2]) != t.add(i[0], t.add(i[1], i[2]));
  if (v.law == "v_identity") return i.size() == 1 && (t.mul(raw.one, i[0]) != i[0] || t.mul(i[0], raw.one) != i[0]);
  if (v.law == "v_associative")
    return i.size() == 3 && t.mul(t.mul(i[0], i[1]), i[2]) != t.mul(i[0], t.mul(i[1], i[2]));
  if (v.law == "action_unit") return i.size() == 1 && t.act(i[0], raw.one) != i[0];
  if (v.law == "action_compatible")
    return i.size() == 3 && t.act(t.act(i[0], i[1]), i[2]) != t.act(i[0], t.mul(i[1], i[2]));
  if (v.law == "faithful") return i.size() == 2 && i[0] != i[1] && t.same_action(i[0], i[1]);
  if (v.law == "insertion") {
    if (i.size() != 2) return false;
    if (raw.ins) return !t.inserts((*raw.ins).at(i[0] * t.nh() + i[1]), i[0], i[1]);
    for (Elem w = 0; w < t.nv(); ++w)
      if (t.inserts(w, i[0], i[1])) return false;
    return true;
  }
  return false;
}

}  // namespace oracles

#include "forest/algebra.hpp"

#include <unordered_map>

#include "forest/hash.hpp"

namespace forest {

AlgebraError::AlgebraError(Violation v)
    : std::runtime_error(v.law + ": " + v.message), violation_(std::move(v)) {}

BudgetExceeded::BudgetExceeded(const std::string& what, std::size_t required,
                               std::size_t budget)
    : std::runtime_error(what + ": budget " + std::to_string(budget) + " exceeded (reached " +
                         std::to_string(required) + ")"),
      required_(required),
      budget_(budget) {}

namespace {

Violation violation(std::string law, std::vector<Elem> idx, std::string msg) {
  return Violation{std::move(law), std::move(idx), std::move(msg)};
}

std::string show(std::initializer_list<Elem> xs) {
  std::string s = "(";
  for (auto x : xs) {
    if (s.size() > 1) s += ",";
    s += std::to_string(x);
  }
  return s + ")";
}

std::optional<Violation> check_shape(const AlgebraTables& t) {
  const auto nh = t.h_size;
  const auto nv = t.v_size;
  if (nh == 0 || nv == 0) return violation("shape", {}, "empty carrier");
  if (t.add.size() != nh * nh) return violation("shape", {}, "add table has wrong size");
  if (t.mul.size() != nv * nv) return violation("shape", {}, "mul table has wrong size");
  if (t.act.size() != nh * nv) return violation("shape", {}, "act table has wrong size");
  if (t.ins && t.ins->size() != nv * nh) return violation("shape", {}, "ins table has wrong size");
  if (t.zero >= nh) return violation("shape", {t.zero}, "zero out of range");
  if (t.one >= nv) return violation("shape", {t.one}, "one out of range");
  for (auto x : t.add)
    if (x >= nh) return violation("shape", {x}, "add entry out of range");
  for (auto x : t.mul)
    if (x >= nv) return violation("shape", {x}, "mul entry out of range");
  for (auto x : t.act)
    if (x >= nh) return violation("shape", {x}, "act entry out of range");
  if (t.ins)
    for (auto x : *t.ins)
      if (x >= nv) return violation("shape", {x}, "ins entry out of range");
  return std::nullopt;
}

}  // namespace

std::optional<Violation> find_violation(const AlgebraTables& t, std::vector<Elem>* derived_ins) {
  if (auto v = check_shape(t)) return v;
  const Elem nh = static_cast<Elem>(t.h_size);
  const Elem nv = static_cast<Elem>(t.v_size);
  auto add = [&](Elem a, Elem b) { return t.add[a * nh + b]; };
  auto mul = [&](Elem a, Elem b) { return t.mul[a * nv + b]; };
  auto act = [&](Elem h, Elem v) { return t.act[h * nv + v]; };

  // (H, +, 0) commutative monoid.
  for (Elem a = 0; a < nh; ++a) {
    if (add(t.zero, a) != a || add(a, t.zero) != a)
      return violation("h_identity", {a}, "0 is not an identity for " + show({a}));
  }
  for (Elem a = 0; a < nh; ++a)
    for (Elem b = a + 1; b < nh; ++b)
      if (add(a, b) != add(b, a))
        return violation("h_commutative", {a, b}, "a+b != b+a at " + show({a, b}));
  for (Elem a = 0; a < nh; ++a)
    for (Elem b = 0; b < nh; ++b)
      for (Elem c = 0; c < nh; ++c)
        if (add(add(a, b), c) != add(a, add(b, c)))
          return violation("h_associative", {a, b, c}, "(a+b)+c != a+(b+c) at " + show({a, b, c}));

  // (V, ., 1) monoid.  For large V associativity follows from the action
  // laws plus faithfulness, which are checked below.
  for (Elem v = 0; v < nv; ++v) {
    if (mul(t.one, v) != v || mul(v, t.one) != v)
      return violation("v_identity", {v}, "1 is not an identity for " + show({v}));
  }
  constexpr Elem kDirectAssocLimit = 128;
  if (nv <= kDirectAssocLimit) {
    for (Elem a = 0; a < nv; ++a)
      for (Elem b = 0; b < nv; ++b)
        for (Elem c = 0; c < nv; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            return violation("v_associative", {a, b, c},
                             "(ab)c != a(bc) at " + show({a, b, c}));
  }

  // Right action.
  for (Elem h = 0; h < nh; ++h)
    if (act(h, t.one) != h) return violation("action_unit", {h}, "h1 != h at " + show({h}));
  for (Elem h = 0; h < nh; ++h)
    for (Elem a = 0; a < nv; ++a)
      for (Elem b = 0; b < nv; ++b)
        if (act(act(h, a), b) != act(h, mul(a, b)))
          return violation("action_compatible", {h, a, b},
                           "(hv)w != h(vw) at " + show({h, a, b}));

  // Faithfulness: distinct vertical elements have distinct action columns.
  std::unordered_map<std::vector<Elem>, Elem, VectorHash> by_column;
  std::vector<Elem> column(nh);
  for (Elem v = 0; v < nv; ++v) {
    for (Elem h = 0; h < nh; ++h) column[h] = act(h, v);
    auto [it, fresh] = by_column.emplace(column, v);
    if (!fresh)
      return violation("faithful", {it->second, v},
                       "vertical elements " + show({it->second, v}) + " act identically");
  }

  // Insertion: g ins(v,h) = gv + h for every g.
  std::vector<Elem> ins(static_cast<std::size_t>(nv) * nh);
  for (Elem v = 0; v < nv; ++v) {
    for (Elem h = 0; h < nh; ++h) {
      for (Elem g = 0; g < nh; ++g) column[g] = add(act(g, v), h);
      auto it = by_column.find(column);
      if (it == by_column.end())
        return violation("insertion", {v, h}, "no element ins" + show({v, h}) + " exists");
      if (t.ins && (*t.ins)[v * nh + h] != it->second)
        return violation("insertion", {v, h},
                         "ins" + show({v, h}) + " does not satisfy g.ins(v,h) = gv+h");
      ins[v * nh + h] = it->second;
    }
  }
  if (derived_ins != nullptr) *derived_ins = std::move(ins);
  return std::nullopt;
}

ValidationResult validate_algebra(const AlgebraTables& tables) {
  ValidationResult r;
  std::vector<Elem> ins;
  if (auto v = find_violation(tables, &ins)) {
    r.violation = std::move(v);
    return r;
  }
  AlgebraTables t = tables;
  if (!t.ins) t.ins = std::move(ins);
  r.algebra = FiniteForestAlgebra::trusted(std::move(t));
  return r;
}

FiniteForestAlgebra FiniteForestAlgebra::from_tables(AlgebraTables tables) {
  auto r = validate_algebra(tables);
  if (!r.ok()) throw AlgebraError(*r.violation);
  return std::move(*r.algebra);
}

FiniteForestAlgebra FiniteForestAlgebra::trusted(AlgebraTables t) {
  if (!t.ins) {
    // Derive ins from the action columns.
    const auto nh = t.h_size;
    const auto nv = t.v_size;
    std::unordered_map<std::vector<Elem>, Elem, VectorHash> by_column;
    std::vector<Elem> column(nh);
    for (Elem v = 0; v < nv; ++v) {
      for (Elem h = 0; h < nh; ++h) column[h] = t.act[h * nv + v];
      by_column.emplace(column, v);
    }
    std::vector<Elem> ins(nv * nh);
    for (Elem v = 0; v < nv; ++v) {
      for (Elem h = 0; h < nh; ++h) {
        for (Elem g = 0; g < nh; ++g) column[g] = t.add[t.act[g * nv + v] * nh + h];
        auto it = by_column.find(column);
        if (it == by_column.end())
          throw AlgebraError({"insertion", {v, h}, "no insertion element"});
        ins[v * nh + h] = it->second;
      }
    }
    t.ins = std::move(ins);
  }
  return FiniteForestAlgebra(std::move(t));
}

bool FiniteForestAlgebra::h_idempotent() const {
  for (Elem h = 0; h < h_size(); ++h)
    if (add(h, h) != h) return false;
  return true;
}

bool FiniteForestAlgebra::h_commutative() const {
  for (Elem a = 0; a < h_size(); ++a)
    for (Elem b = 0; b < h_size(); ++b)
      if (add(a, b) != add(b, a)) return false;
  return true;
}

bool operator==(const FiniteForestAlgebra& a, const FiniteForestAlgebra& b) {
  const auto& x = a.t_;
  const auto& y = b.t_;
  return x.h_size == y.h_size && x.v_size == y.v_size && x.zero == y.zero && x.one == y.one &&
         x.add == y.add && x.mul == y.mul && x.act == y.act && x.ins == y.ins;
}

// ------------------------------------------------------------ Flat algebras

FiniteForestAlgebra flat_algebra(const MonoidTable& m) {
  const auto n = m.size;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (m.op[a * n + b] != m.op[b * n + a])
        throw AlgebraError({"h_commutative", {a, b}, "flat algebras need a commutative monoid"});
  AlgebraTables t;
  t.h_size = t.v_size = n;
  t.add = t.mul = t.act = t.ins.emplace(m.op);
  t.zero = t.one = m.identity;
  return FiniteForestAlgebra::from_tables(std::move(t));
}

MonoidTable or_monoid() { return MonoidTable{2, {0, 1, 1, 1}, 0}; }

MonoidTable cyclic_monoid(std::size_t n) {
  MonoidTable m{n, std::vector<Elem>(n * n), 0};
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) m.op[a * n + b] = static_cast<Elem>((a + b) % n);
  return m;
}

MonoidTable trivial_monoid() { return MonoidTable{1, {0}, 0}; }

MonoidTable chain_monoid(std::size_t n) {
  MonoidTable m{n, std::vector<Elem>(n * n), 0};
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) m.op[a * n + b] = std::max(a, b);
  return m;
}

MonoidTable subset_monoid(std::size_t bits) {
  const std::size_t n = std::size_t{1} << bits;
  MonoidTable m{n, std::vector<Elem>(n * n), 0};
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) m.op[a * n + b] = a | b;
  return m;
}

bool is_idempotent(const MonoidTable& m) {
  for (Elem a = 0; a < m.size; ++a)
    if (m.op[a * m.size + a] != a) return false;
  return true;
}

FiniteForestAlgebra product(const FiniteForestAlgebra& a, const FiniteForestAlgebra& b) {
  AlgebraTables t;
  const auto ah = a.h_size(), bh = b.h_size(), av = a.v_size(), bv = b.v_size();
  t.h_size = ah * bh;
  t.v_size = av * bv;
  auto hx = [&](Elem x, Elem y) { return static_cast<Elem>(x * bh + y); };
  auto vx = [&](Elem x, Elem y) { return static_cast<Elem>(x * bv + y); };
  t.zero = hx(a.zero(), b.zero());
  t.one = vx(a.one(), b.one());
  t.add.resize(t.h_size * t.h_size);
  t.mul.resize(t.v_size * t.v_size);
  t.act.resize(t.h_size * t.v_size);
  t.ins.emplace(t.v_size * t.h_size);
  for (Elem h = 0; h < t.h_size; ++h)
    for (Elem g = 0; g < t.h_size; ++g)
      t.add[h * t.h_size + g] = hx(a.add(h / bh, g / bh), b.add(h % bh, g % bh));
  for (Elem v = 0; v < t.v_size; ++v)
    for (Elem w = 0; w < t.v_size; ++w)
      t.mul[v * t.v_size + w] = vx(a.mul(v / bv, w / bv), b.mul(v % bv, w % bv));
  for (Elem h = 0; h < t.h_size; ++h)
    for (Elem v = 0; v < t.v_size; ++v) {
      t.act[h * t.v_size + v] = hx(a.act(h / bh, v / bv), b.act(h % bh, v % bv));
      (*t.ins)[v * t.h_size + h] = vx(a.ins(v / bv, h / bh), b.ins(v % bv, h % bh));
    }
  return FiniteForestAlgebra::trusted(std::move(t));
}

// --------------------------------------------------------------- Morphisms

Morphism::Morphism(std::shared_ptr<const FiniteForestAlgebra> target, Alphabet alphabet,
                   std::vector<Elem> letters)
    : target_(std::move(target)), alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
  if (letters_.size() != alphabet_.size())
    throw std::invalid_argument("letter map must be total on the alphabet");
  for (auto v : letters_)
    if (v >= target_->v_size()) throw std::invalid_argument("letter image out of range");
}

Elem Morphism::letter(std::string_view label) const {
  return letters_[alphabet_.index_of(label)];
}

Elem Morphism::eval(const Forest& s) const {
  const auto& alg = *target_;
  Elem h = alg.zero();
  for (const auto& t : s.trees()) {
    h = alg.add(h, alg.act(eval(t.children()), letter(t.label())));
  }
  return h;
}

Elem Morphism::eval(const Context& p) const {
  const auto& alg = *target_;
  Elem v = alg.ins(alg.one(), eval(p.bottom()));
  for (const auto& layer : p.layers()) {
    v = alg.mul(v, letter(layer.label));
    v = alg.ins(v, eval(layer.siblings));
  }
  return v;
}

Recognizer::Recognizer(Morphism morphism, std::vector<bool> accept)
    : morphism_(std::move(morphism)), accept_(std::move(accept)) {
  if (accept_.size() != morphism_.target().h_size())
    throw std::invalid_argument("accepting set must be indexed by H");
}

}  // namespace forest

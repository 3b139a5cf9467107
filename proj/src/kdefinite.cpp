#include "forest/kdefinite.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace forest {

TypeUniverse::TypeUniverse() {
  types_.push_back(KType{});
  index_.emplace(Key{0, "", {}}, 0);
}

std::size_t TypeUniverse::KeyHash::operator()(const Key& k) const {
  return hash_mix(hash_mix(k.depth, std::hash<std::string>{}(k.label)), Hasher{}(k.children));
}

TypeId TypeUniverse::intern(std::size_t depth, const std::string& label, TypeSet children) {
  if (depth == 0) return atom();
  std::lock_guard lock(mu_);
  Key key{depth, label, std::move(children)};
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<TypeId>(types_.size());
  types_.push_back(KType{depth, key.label, key.children});
  index_.emplace(std::move(key), id);
  return id;
}

KType TypeUniverse::get(TypeId id) const {
  std::lock_guard lock(mu_);
  return types_.at(id);
}

std::size_t TypeUniverse::depth(TypeId id) const {
  std::lock_guard lock(mu_);
  return types_.at(id).depth;
}

std::string TypeUniverse::label(TypeId id) const {
  std::lock_guard lock(mu_);
  return types_.at(id).label;
}

std::size_t TypeUniverse::size() const {
  std::lock_guard lock(mu_);
  return types_.size();
}

TypeId TypeUniverse::truncate(TypeId id, std::size_t j) {
  const KType t = get(id);
  if (j > t.depth) throw std::invalid_argument("truncate: target depth exceeds the type depth");
  if (j == t.depth) return id;
  if (j == 0) return atom();
  const std::uint64_t key = (static_cast<std::uint64_t>(id) << 16) | j;
  {
    std::lock_guard lock(mu_);
    auto it = trunc_memo_.find(key);
    if (it != trunc_memo_.end()) return it->second;
  }
  TypeSet kids;
  kids.reserve(t.children.size());
  for (TypeId c : t.children) kids.push_back(truncate(c, j - 1));
  const TypeId r = intern(j, t.label, make_set(std::move(kids)));
  std::lock_guard lock(mu_);
  trunc_memo_.emplace(key, r);
  return r;
}

std::string TypeUniverse::render(TypeId id) const {
  const KType t = get(id);
  if (t.depth == 0) return "*";
  std::vector<std::string> parts;
  for (TypeId c : t.children) parts.push_back(render(c));
  std::sort(parts.begin(), parts.end());
  std::string out = t.label + "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "}";
}

TypeSet make_set(std::vector<TypeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

TypeSet set_union(const TypeSet& a, const TypeSet& b) {
  TypeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string render_set(const TypeUniverse& u, const TypeSet& s) {
  std::vector<std::string> parts;
  for (TypeId t : s) parts.push_back(u.render(t));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "}";
}

TypeId node_type(TypeUniverse& u, const Tree& t, std::size_t k) {
  if (k == 0) return u.atom();
  return u.intern(k, t.label(), root_types(u, t.children(), k - 1));
}

TypeSet root_types(TypeUniverse& u, const Forest& s, std::size_t k) {
  std::vector<TypeId> out;
  out.reserve(s.trees().size());
  for (const auto& t : s.trees()) out.push_back(node_type(u, t, k));
  return make_set(std::move(out));
}

namespace {

void collect_nodes(TypeUniverse& u, const Forest& s, std::size_t k, std::vector<TypeId>& out) {
  for (const auto& t : s.trees()) {
    out.push_back(node_type(u, t, k));
    collect_nodes(u, t.children(), k, out);
  }
}

}  // namespace

TypeSet node_types(TypeUniverse& u, const Forest& s, std::size_t k) {
  std::vector<TypeId> out;
  collect_nodes(u, s, k, out);
  return make_set(std::move(out));
}

TypeSet truncate_set(TypeUniverse& u, const TypeSet& s, std::size_t j) {
  std::vector<TypeId> out;
  out.reserve(s.size());
  for (TypeId t : s) out.push_back(u.truncate(t, j));
  return make_set(std::move(out));
}

bool sim_k(TypeUniverse& u, const Forest& s, const Forest& t, std::size_t k) {
  return root_types(u, s, k) == root_types(u, t, k);
}

bool equiv_k(TypeUniverse& u, const Forest& s, const Forest& t, std::size_t k) {
  if (k == 0) throw std::invalid_argument("equiv_k requires k >= 1");
  return sim_k(u, s, t, k - 1) && node_types(u, s, k) == node_types(u, t, k);
}

KTypeSetAlgebra::H KTypeSetAlgebra::act(const H& h, V letter) const {
  if (k_ == 0) return {u_->atom()};
  return {u_->intern(k_, alphabet_[letter], truncate_set(*u_, h, k_ - 1))};
}

Elem KDefAlgebra::h_index(const TypeSet& s) const {
  auto it = h_index_.find(s);
  return it == h_index_.end() ? kNone : it->second;
}

namespace {

std::vector<Elem> letter_indices(const Alphabet& a) {
  std::vector<Elem> out(a.size());
  for (Elem i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::vector<Context> letter_contexts(const Alphabet& a) {
  std::vector<Context> out;
  for (const auto& l : a.labels()) out.push_back(letter_context(l));
  return out;
}

}  // namespace

KDefAlgebra build_kdef_algebra(const Alphabet& alphabet, std::size_t k,
                               std::shared_ptr<TypeUniverse> universe, ClosureBudget budget) {
  if (!universe) universe = std::make_shared<TypeUniverse>();
  KTypeSetAlgebra hk(universe, alphabet, k);
  const auto gens = letter_indices(alphabet);
  auto c = generate_horizontal(hk, gens, {}, budget);
  auto ta = transformation_algebra(hk, c, gens, budget.max_v);

  KDefAlgebra out;
  out.k_ = k;
  out.u_ = universe;
  out.h_sets_ = c.hs;
  for (Elem i = 0; i < c.hs.size(); ++i) out.h_index_.emplace(c.hs[i], i);
  auto alg = std::make_shared<const FiniteForestAlgebra>(std::move(ta.algebra));
  out.beta_.emplace(alg, alphabet, ta.gen);
  struct Log {
    std::vector<HDerivation> h_deriv;
    std::vector<VDerivation> v_deriv;
  } log{std::move(ta.h_deriv), std::move(ta.v_deriv)};
  out.replay_ = std::make_shared<TermReplay>(log, letter_contexts(alphabet));
  return out;
}

// ------------------------------------------------------------------ specs

LtSpec lt_spec_contains(const std::string& label) {
  LtSpec s;
  s.name = "contains " + label;
  s.features.push_back([label](const TypeUniverse& u, TypeId t) { return u.label(t) == label; });
  s.accept = [](std::uint64_t f, const TypeSet&) { return (f & 1U) != 0; };
  return s;
}

LtSpec lt_spec_child(const std::string& parent, const std::string& child) {
  LtSpec s;
  s.name = parent + " has a " + child + " child";
  s.features.push_back([parent, child](const TypeUniverse& u, TypeId t) {
    const KType kt = u.get(t);
    if (kt.depth < 2 || kt.label != parent) return false;
    return std::any_of(kt.children.begin(), kt.children.end(),
                       [&](TypeId c) { return u.label(c) == child; });
  });
  s.accept = [](std::uint64_t f, const TypeSet&) { return (f & 1U) != 0; };
  return s;
}

LtSpec lt_spec_none() {
  return LtSpec{"empty", {}, [](std::uint64_t, const TypeSet&) { return false; }};
}

LtSpec lt_spec_all() {
  return LtSpec{"universal", {}, [](std::uint64_t, const TypeSet&) { return true; }};
}

namespace {

/// States (feature mask over node k-types, root (k-1)-type set).
class LtStateAlgebra {
 public:
  using H = std::pair<std::uint64_t, TypeSet>;
  using V = Elem;

  LtStateAlgebra(TypeUniverse& u, const Alphabet& a, std::size_t k, const LtSpec& spec)
      : u_(u), a_(a), k_(k), spec_(spec) {}
  H zero() const { return {0, {}}; }
  H add(const H& x, const H& y) const { return {x.first | y.first, set_union(x.second, y.second)}; }
  H act(const H& h, V letter) const {
    const TypeId t = u_.intern(k_, a_[letter], h.second);
    std::uint64_t f = h.first;
    for (std::size_t i = 0; i < spec_.features.size(); ++i)
      if (spec_.features[i](u_, t)) f |= std::uint64_t{1} << i;
    return {f, {u_.truncate(t, k_ - 1)}};
  }

 private:
  TypeUniverse& u_;
  const Alphabet& a_;
  std::size_t k_;
  const LtSpec& spec_;
};

}  // namespace

LtRecognizer lt_recognizer(const Alphabet& alphabet, std::size_t k, const LtSpec& spec,
                           std::shared_ptr<TypeUniverse> universe, ClosureBudget budget) {
  if (k == 0) throw std::invalid_argument("lt_recognizer requires k >= 1");
  if (spec.features.size() > 64) throw std::invalid_argument("at most 64 features");
  if (!universe) universe = std::make_shared<TypeUniverse>();
  LtStateAlgebra st(*universe, alphabet, k, spec);
  const auto gens = letter_indices(alphabet);
  auto c = generate_horizontal(st, gens, {}, budget);
  auto ta = transformation_algebra(st, c, gens, budget.max_v);
  std::vector<bool> accept(c.hs.size());
  for (Elem h = 0; h < c.hs.size(); ++h) accept[h] = spec.accept(c.hs[h].first, c.hs[h].second);
  auto alg = std::make_shared<const FiniteForestAlgebra>(std::move(ta.algebra));
  struct Log {
    std::vector<HDerivation> h_deriv;
    std::vector<VDerivation> v_deriv;
  } log{std::move(ta.h_deriv), std::move(ta.v_deriv)};
  return LtRecognizer{Recognizer(Morphism(alg, alphabet, ta.gen), std::move(accept)), c.hs,
                      std::make_shared<TermReplay>(log, letter_contexts(alphabet))};
}

std::optional<LtWitness> oracle_k_lt(const Recognizer& r, std::size_t k, std::size_t max_nodes,
                                     std::shared_ptr<TypeUniverse> universe) {
  if (k == 0) throw std::invalid_argument("oracle_k_lt requires k >= 1");
  if (!universe) universe = std::make_shared<TypeUniverse>();
  std::map<std::pair<TypeSet, TypeSet>, std::pair<Forest, bool>> seen;
  for (const auto& s : enumerate_forests(r.alphabet(), max_nodes)) {
    auto sig = std::make_pair(node_types(*universe, s, k), root_types(*universe, s, k - 1));
    const bool acc = r.accepts(s);
    auto [it, fresh] = seen.emplace(std::move(sig), std::make_pair(s, acc));
    if (!fresh && it->second.second != acc) return LtWitness{it->second.first, s};
  }
  return std::nullopt;
}

}  // namespace forest

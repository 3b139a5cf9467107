#pragma once

// k-definite types of nodes, the congruences ~_k and ==_k, the quotient
// algebra (H_k, V_k) with its projection beta_k, recognizers for unions of
// ==_k classes, and a brute-force search for k-local-testability failures.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/closure.hpp"
#include "forest/terms.hpp"

namespace forest {

using TypeId = std::uint32_t;
/// A set of types, sorted and without duplicates.
using TypeSet = std::vector<TypeId>;

/// depth 0 is the unique atom (empty label, no children); depth k > 0 is a
/// label with the set of (k-1)-types of the children.
struct KType {
  std::size_t depth = 0;
  std::string label;
  TypeSet children;
};

/// Append-only hash-consing table for types.  Ids are stable for the
/// lifetime of the universe; all members are safe to call concurrently.
class TypeUniverse {
 public:
  TypeUniverse();

  TypeId atom() const { return 0; }
  /// `children` must be sorted and duplicate-free, each of depth `depth - 1`.
  TypeId intern(std::size_t depth, const std::string& label, TypeSet children);
  KType get(TypeId id) const;
  std::size_t depth(TypeId id) const;
  std::string label(TypeId id) const;
  /// The j-type determined by a type of depth >= j.  Throws
  /// std::invalid_argument if j exceeds the depth.
  TypeId truncate(TypeId id, std::size_t j);
  /// Canonical nested text: "*" for the atom, "a{...}" otherwise with the
  /// children rendered and sorted as strings.
  std::string render(TypeId id) const;
  std::size_t size() const;

 private:
  struct Key {
    std::size_t depth;
    std::string label;
    TypeSet children;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  mutable std::mutex mu_;
  std::vector<KType> types_;
  std::unordered_map<Key, TypeId, KeyHash> index_;
  std::unordered_map<std::uint64_t, TypeId> trunc_memo_;
};

TypeSet make_set(std::vector<TypeId> ids);
TypeSet set_union(const TypeSet& a, const TypeSet& b);
std::string render_set(const TypeUniverse& u, const TypeSet& s);

TypeId node_type(TypeUniverse& u, const Tree& t, std::size_t k);
/// beta_k of a concrete forest.
TypeSet root_types(TypeUniverse& u, const Forest& s, std::size_t k);
TypeSet node_types(TypeUniverse& u, const Forest& s, std::size_t k);
TypeSet truncate_set(TypeUniverse& u, const TypeSet& s, std::size_t j);
bool sim_k(TypeUniverse& u, const Forest& s, const Forest& t, std::size_t k);
/// Requires k >= 1.
bool equiv_k(TypeUniverse& u, const Forest& s, const Forest& t, std::size_t k);

/// Horizontal-only view of beta_k: elements are root type sets, generators
/// are letter indices acting by adjoining a root.
class KTypeSetAlgebra {
 public:
  using H = TypeSet;
  using V = Elem;

  KTypeSetAlgebra(std::shared_ptr<TypeUniverse> u, Alphabet alphabet, std::size_t k)
      : u_(std::move(u)), alphabet_(std::move(alphabet)), k_(k) {}
  H zero() const { return {}; }
  H add(const H& a, const H& b) const { return set_union(a, b); }
  H act(const H& h, V letter) const;
  std::size_t k() const { return k_; }
  const Alphabet& alphabet() const { return alphabet_; }
  TypeUniverse& universe() const { return *u_; }

 private:
  std::shared_ptr<TypeUniverse> u_;
  Alphabet alphabet_;
  std::size_t k_;
};

/// (H_k, V_k) restricted to realizable values, with beta_k.
class KDefAlgebra {
 public:
  const Alphabet& alphabet() const { return beta_->alphabet(); }
  std::size_t k() const { return k_; }
  const FiniteForestAlgebra& algebra() const { return beta_->target(); }
  std::shared_ptr<const FiniteForestAlgebra> algebra_ptr() const { return beta_->target_ptr(); }
  const Morphism& beta() const { return *beta_; }
  /// Root type set of each horizontal element.
  const std::vector<TypeSet>& h_sets() const { return h_sets_; }
  Elem h_index(const TypeSet& s) const;
  TypeUniverse& universe() const { return *u_; }
  std::shared_ptr<TypeUniverse> universe_ptr() const { return u_; }

  Forest h_term(Elem h) const { return replay_->forest(h); }
  Context v_term(Elem v) const { return replay_->context(v); }

 private:
  friend KDefAlgebra build_kdef_algebra(const Alphabet&, std::size_t, std::shared_ptr<TypeUniverse>,
                                        ClosureBudget);
  std::size_t k_ = 0;
  std::shared_ptr<TypeUniverse> u_;
  std::optional<Morphism> beta_;
  std::vector<TypeSet> h_sets_;
  std::unordered_map<TypeSet, Elem, Hasher> h_index_;
  std::shared_ptr<TermReplay> replay_;
};

KDefAlgebra build_kdef_algebra(const Alphabet& alphabet, std::size_t k,
                               std::shared_ptr<TypeUniverse> universe = nullptr,
                               ClosureBudget budget = {});

/// Which unions of ==_k classes to accept.  Each feature is a predicate on a
/// single node k-type; acceptance sees the set of features present among the
/// node k-types and the root (k-1)-type set.
struct LtSpec {
  std::string name;
  std::vector<std::function<bool(const TypeUniverse&, TypeId)>> features;
  std::function<bool(std::uint64_t, const TypeSet&)> accept;
};

LtSpec lt_spec_contains(const std::string& label);
/// Some node labelled `parent` has a child labelled `child` (needs k >= 2).
LtSpec lt_spec_child(const std::string& parent, const std::string& child);
LtSpec lt_spec_none();
LtSpec lt_spec_all();

struct LtRecognizer {
  Recognizer recognizer;
  /// Per horizontal element: feature mask and root (k-1)-type set.
  std::vector<std::pair<std::uint64_t, TypeSet>> states;
  std::shared_ptr<TermReplay> replay;
};

/// Requires k >= 1.
LtRecognizer lt_recognizer(const Alphabet& alphabet, std::size_t k, const LtSpec& spec,
                           std::shared_ptr<TypeUniverse> universe = nullptr,
                           ClosureBudget budget = {});

struct LtWitness {
  Forest s, t;
};

/// Searches forests with at most `max_nodes` nodes for s ==_k t accepted
/// differently.  Requires k >= 1.
std::optional<LtWitness> oracle_k_lt(const Recognizer& r, std::size_t k, std::size_t max_nodes,
                                     std::shared_ptr<TypeUniverse> universe = nullptr);

}  // namespace forest

#pragma once

// Finite forest algebras given by explicit tables, morphisms from the free
// forest algebra, and recognizers.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forest/terms.hpp"

namespace forest {

using Elem = std::uint32_t;
inline constexpr Elem kNone = static_cast<Elem>(-1);

/// Raw tables, row-major with row = left operand.  `ins` may be omitted and
/// is then derived during validation.
struct AlgebraTables {
  std::size_t h_size = 0;
  std::vector<Elem> add;  // h_size * h_size
  Elem zero = 0;
  std::size_t v_size = 0;
  std::vector<Elem> mul;  // v_size * v_size
  Elem one = 0;
  std::vector<Elem> act;  // h_size * v_size
  std::optional<std::vector<Elem>> ins;  // v_size * h_size
};

/// A law violated by a set of tables, with the indices that witness it.
struct Violation {
  std::string law;
  std::vector<Elem> indices;
  std::string message;
};

class AlgebraError : public std::runtime_error {
 public:
  explicit AlgebraError(Violation v);
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Thrown when a closure or construction would exceed its element budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t required, std::size_t budget);
  std::size_t required() const { return required_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

class FiniteForestAlgebra {
 public:
  using H = Elem;
  using V = Elem;

  /// Validates every law and derives `ins` if absent.  Throws AlgebraError.
  static FiniteForestAlgebra from_tables(AlgebraTables tables);
  /// For tables produced by a construction that guarantees the laws.  Only
  /// derives `ins` when missing; nothing else is checked.
  static FiniteForestAlgebra trusted(AlgebraTables tables);

  std::size_t h_size() const { return t_.h_size; }
  std::size_t v_size() const { return t_.v_size; }
  H zero() const { return t_.zero; }
  V one() const { return t_.one; }
  H add(H a, H b) const { return t_.add[a * t_.h_size + b]; }
  V mul(V a, V b) const { return t_.mul[a * t_.v_size + b]; }
  H act(H h, V v) const { return t_.act[h * t_.v_size + v]; }
  V ins(V v, H h) const { return (*t_.ins)[v * t_.h_size + h]; }

  const AlgebraTables& tables() const { return t_; }
  bool h_idempotent() const;
  bool h_commutative() const;

  friend bool operator==(const FiniteForestAlgebra& a, const FiniteForestAlgebra& b);

 private:
  explicit FiniteForestAlgebra(AlgebraTables t) : t_(std::move(t)) {}
  AlgebraTables t_;
};

/// First violated law, scanning in a fixed order; nullopt if all hold.  When
/// the tables omit `ins` and everything else holds, `derived_ins` receives the
/// derived table.
std::optional<Violation> find_violation(const AlgebraTables& tables,
                                        std::vector<Elem>* derived_ins = nullptr);

struct ValidationResult {
  std::optional<FiniteForestAlgebra> algebra;
  std::optional<Violation> violation;
  bool ok() const { return algebra.has_value(); }
};
ValidationResult validate_algebra(const AlgebraTables& tables);

/// A commutative monoid given by its table.
struct MonoidTable {
  std::size_t size = 0;
  std::vector<Elem> op;
  Elem identity = 0;
};

/// The flat algebra (M, M) where M acts on itself by its own operation.
/// Throws AlgebraError if the monoid is not commutative.
FiniteForestAlgebra flat_algebra(const MonoidTable& monoid);
MonoidTable or_monoid();
MonoidTable cyclic_monoid(std::size_t n);
MonoidTable trivial_monoid();
/// Chain 0 < 1 < ... < n-1 under max.
MonoidTable chain_monoid(std::size_t n);
/// Subsets of an n-element set under union (2^n elements, bit-encoded).
MonoidTable subset_monoid(std::size_t n);
bool is_idempotent(const MonoidTable& m);

/// Direct product; element (a, b) is encoded as a * |B| + b.
FiniteForestAlgebra product(const FiniteForestAlgebra& a, const FiniteForestAlgebra& b);

/// The unique extension of a letter map to the free forest algebra.
class Morphism {
 public:
  Morphism(std::shared_ptr<const FiniteForestAlgebra> target, Alphabet alphabet,
           std::vector<Elem> letters);

  const FiniteForestAlgebra& target() const { return *target_; }
  std::shared_ptr<const FiniteForestAlgebra> target_ptr() const { return target_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Elem>& letters() const { return letters_; }
  Elem letter(std::string_view label) const;

  Elem eval(const Forest& s) const;
  Elem eval(const Context& p) const;

 private:
  std::shared_ptr<const FiniteForestAlgebra> target_;
  Alphabet alphabet_;
  std::vector<Elem> letters_;
};

class Recognizer {
 public:
  Recognizer(Morphism morphism, std::vector<bool> accept);

  const Morphism& morphism() const { return morphism_; }
  const FiniteForestAlgebra& algebra() const { return morphism_.target(); }
  const Alphabet& alphabet() const { return morphism_.alphabet(); }
  const std::vector<bool>& accept() const { return accept_; }
  bool accepting(Elem h) const { return accept_[h]; }

  bool accepts(const Forest& s) const { return accept_[morphism_.eval(s)]; }

 private:
  Morphism morphism_;
  std::vector<bool> accept_;
};

}  // namespace forest

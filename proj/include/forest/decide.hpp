#pragma once

// Deciding local testability: relations R_k and S_k over the syntactic
// algebra, the two identities over them, the pipeline with its verdicts, and
// the wreath product recognizer for unions of ==_k classes.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/kdefinite.hpp"
#include "forest/syntactic.hpp"
#include "forest/wreath.hpp"

namespace forest {

enum class RelationStrategy { Exact, Saturation, Sampled };
std::string to_string(RelationStrategy s);

/// Bounds for the sampled strategy: every forest/context up to
/// `term_bound` nodes plus `random_terms` seeded random ones of at most
/// `random_size` nodes.
struct SampleOptions {
  std::size_t term_bound = 3;
  std::size_t random_terms = 40;
  std::size_t random_size = 7;
  std::uint64_t seed = 0;
};

/// Pairs (alpha(r), alpha(s)) with beta_k(r) a subset of beta_k(s), each
/// with realizing forests.
struct RelationR {
  RelationStrategy strategy = RelationStrategy::Exact;
  std::size_t k = 0;
  std::map<std::pair<Elem, Elem>, std::pair<Forest, Forest>> pairs;
  bool contains(Elem r, Elem s) const { return pairs.count({r, s}) != 0; }
};

/// Pairs (alpha(r), alpha(p)) with beta_k(rp) = beta_k(r), each with
/// realizing terms.
struct RelationS {
  RelationStrategy strategy = RelationStrategy::Exact;
  std::size_t k = 0;
  std::map<std::pair<Elem, Elem>, std::pair<Forest, Context>> pairs;
  bool contains(Elem r, Elem p) const { return pairs.count({r, p}) != 0; }
};

/// Everything computed once per recognizer: the syntactic algebra and a
/// shared type universe.
class LtProblem {
 public:
  explicit LtProblem(const Recognizer& r, ClosureBudget budget = {});

  const Recognizer& input() const { return input_; }
  const SyntacticAlgebra& syntactic() const { return *syn_; }
  const Recognizer& alpha() const { return syn_->recognizer(); }
  const FiniteForestAlgebra& algebra() const { return syn_->algebra(); }
  const Alphabet& alphabet() const { return input_.alphabet(); }
  TypeUniverse& universe() const { return *universe_; }
  std::shared_ptr<TypeUniverse> universe_ptr() const { return universe_; }
  std::size_t k_star() const { return algebra().h_size() * algebra().h_size() + 1; }

 private:
  Recognizer input_;
  std::shared_ptr<SyntacticAlgebra> syn_;
  std::shared_ptr<TypeUniverse> universe_;
};

/// True iff the syntactic horizontal monoid is idempotent.
bool h_idempotent_necessary(const Recognizer& r);

/// Throws BudgetExceeded when the strategy's closure exceeds `pair_budget`,
/// and std::invalid_argument for saturation over a non-idempotent algebra.
RelationR relation_r(const LtProblem& p, std::size_t k, RelationStrategy strategy, std::size_t pair_budget = 200'000,
                     const SampleOptions& sample = {});
/// Saturation is not available for S; requesting it throws
/// std::invalid_argument.
RelationS relation_s(const LtProblem& p, std::size_t k, RelationStrategy strategy, std::size_t pair_budget = 200'000,
                     const SampleOptions& sample = {});

/// Concrete instance of an identity: (i) uses r, s, t, u and (ii) uses
/// r, p, q, q2.
struct IdentityWitness {
  int identity = 1;
  Forest r, s;
  Context p, t, u, q, q2;
  Elem lhs = 0, rhs = 0;
  std::string render() const;
};

/// Re-checks a witness on its terms: the side condition at level `level`
/// and the inequality of the two sides under `alpha`.
bool reverify_witness(const Recognizer& alpha, TypeUniverse& u, const IdentityWitness& w, std::size_t level);

enum class IdentityOutcome { Holds, Violated, Inconclusive };
std::string to_string(IdentityOutcome o);

struct IdentityCheck {
  IdentityOutcome outcome = IdentityOutcome::Holds;
  std::size_t k = 0;
  RelationStrategy r_strategy = RelationStrategy::Exact, s_strategy = RelationStrategy::Exact;
  std::size_t r_size = 0, s_size = 0;
  std::optional<IdentityWitness> witness;
  /// Holds with exact (or saturated) relations is conclusive; violations
  /// found with exact relations carry side conditions that hold at k.
  bool conclusive() const {
    return outcome != IdentityOutcome::Inconclusive && s_strategy != RelationStrategy::Sampled &&
           r_strategy != RelationStrategy::Sampled;
  }
};

IdentityCheck check_lt_identities(const LtProblem& p, const RelationR& r, const RelationS& s);
/// Computes both relations with the given strategies and checks.  A budget
/// overrun yields Inconclusive.
IdentityCheck check_lt_identities_at_k(const LtProblem& p, std::size_t k, RelationStrategy r_strategy,
                                       RelationStrategy s_strategy, std::size_t pair_budget = 200'000,
                                       const SampleOptions& sample = {});

struct DecideOptions {
  std::size_t max_k = 3;
  std::size_t pair_budget = 200'000;
  SampleOptions sample;
};

struct LevelOutcome {
  std::size_t k = 0;
  IdentityCheck check;
  std::string note;
};

struct LtVerdict {
  enum class Kind { LT, NotLT, Unknown };
  Kind kind = Kind::Unknown;
  /// LT: the language is a union of ==_level classes.
  std::size_t level = 0;
  /// NotLT: "nonidempotent" or "identity".
  std::string reason;
  std::size_t k_star = 0;
  std::size_t syntactic_h = 0, syntactic_v = 0;
  /// nonidempotent: a forest s with alpha(s + s) != alpha(s).
  std::optional<Forest> nonidempotent_term;
  std::optional<IdentityWitness> witness;
  std::vector<LevelOutcome> transcript;
};
std::string to_string(LtVerdict::Kind k);

LtVerdict decide_lt(const Recognizer& r, const DecideOptions& options = {});

/// Re-checks the evidence carried by a verdict against the recognizer.
bool reverify_verdict(const Recognizer& r, const LtVerdict& v);

/// The recognizer of a union of ==_k classes through
/// flat(node k-types) o (H_k, V_k): the left coordinate collects node
/// k-types, the right one is beta_k.
struct LtWreath {
  KDefAlgebra kdef;
  std::vector<TypeId> types;  // flat universe
  FlatSubsetAlgebra flat{0};
  std::vector<WreathV<Bitset>> letters;
  Recognizer recognizer;
  /// Right coordinate of every letter image equals beta_k of the letter.
  bool pi_ok = false;
};

LtWreath lt_wreath_recognizer(const Alphabet& alphabet, std::size_t k, const LtSpec& spec,
                              std::shared_ptr<TypeUniverse> universe = nullptr, ClosureBudget budget = {});

/// Seeded random terms for sampling.
Forest random_forest(const Alphabet& a, std::size_t nodes, std::mt19937_64& rng);
Context random_context(const Alphabet& a, std::size_t nodes, std::mt19937_64& rng);

}  // namespace forest

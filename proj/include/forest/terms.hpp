#pragma once

// Free forest algebra terms: unordered forests and one-hole contexts over a
// finite alphabet.  Forests are kept in canonical form (siblings sorted by a
// fixed structural order), so equality is structural equality.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forest {

class Tree;

/// A finite set of labels.  Labels are nonempty tokens over [a-zA-Z0-9_].
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::initializer_list<std::string> labels);
  explicit Alphabet(std::vector<std::string> labels);

  bool contains(std::string_view label) const;
  /// Position of `label` in sorted order; throws std::out_of_range if absent.
  std::size_t index_of(std::string_view label) const;
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> labels_;
};

bool is_valid_label(std::string_view label);

class Forest {
 public:
  Forest() = default;
  explicit Forest(std::vector<Tree> trees);

  const std::vector<Tree>& trees() const { return trees_; }
  /// Number of nodes.
  std::size_t size() const { return nodes_; }
  bool empty() const { return trees_.empty(); }

  friend bool operator==(const Forest& a, const Forest& b);
  friend std::strong_ordering operator<=>(const Forest& a, const Forest& b);

 private:
  std::vector<Tree> trees_;
  std::size_t nodes_ = 0;
};

class Tree {
 public:
  Tree(std::string label, Forest children);

  const std::string& label() const { return label_; }
  const Forest& children() const { return children_; }
  std::size_t size() const { return nodes_; }

  friend bool operator==(const Tree& a, const Tree& b);
  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b);

 private:
  std::string label_;
  Forest children_;
  std::size_t nodes_;
};

/// One level of the path from the hole to the root of a context: the node
/// label and the siblings of that node.
struct ContextLayer {
  std::string label;
  Forest siblings;

  friend bool operator==(const ContextLayer&, const ContextLayer&) = default;
};

/// A forest with exactly one hole at a leaf position.  Stored as the
/// siblings of the hole plus the chain of enclosing layers, innermost first.
/// This representation is canonical.
class Context {
 public:
  Context() = default;  // the bare hole
  Context(Forest bottom, std::vector<ContextLayer> layers);

  const Forest& bottom() const { return bottom_; }
  const std::vector<ContextLayer>& layers() const { return layers_; }
  std::size_t size() const;
  bool is_identity() const { return bottom_.empty() && layers_.empty(); }

  friend bool operator==(const Context&, const Context&) = default;
  friend std::strong_ordering operator<=>(const Context& a, const Context& b);

 private:
  Forest bottom_;
  std::vector<ContextLayer> layers_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parsing.  Grammar (whitespace-insensitive between tokens):
//   forest := "0" | item ("+" item)*
//   item   := label ("(" forest ")")? | "[]"
// The hole "[]" is only legal in contexts, exactly once.
Forest parse_forest(std::string_view text, const Alphabet& alphabet);
Context parse_context(std::string_view text, const Alphabet& alphabet);
/// Variants that accept any well-formed label.
Forest parse_forest(std::string_view text);
Context parse_context(std::string_view text);

std::string render(const Forest& f);
std::string render(const Tree& t);
/// The hole-bearing item is rendered first among its siblings.
std::string render(const Context& p);

Forest canonical(const Forest& f);
Forest add(const Forest& f, const Forest& g);
Forest adjoin(const Forest& f, const std::string& label);
Forest apply_context(const Forest& s, const Context& p);
/// pq: p is substituted into the hole of q.
Context compose(const Context& p, const Context& q);
/// The context "a([])".
Context letter_context(const std::string& label);
/// The context "[]+s".
Context sum_context(const Forest& s);
/// Maximum root-to-leaf node count (0 for the empty forest).
std::size_t depth(const Forest& f);

/// Every canonical forest with at most `max_nodes` nodes, exactly once,
/// ordered by node count and then by the structural order.
std::vector<Forest> enumerate_forests(const Alphabet& alphabet,
                                      std::size_t max_nodes);
/// Every context with at most `max_nodes` nodes (the hole is not counted).
std::vector<Context> enumerate_contexts(const Alphabet& alphabet,
                                        std::size_t max_nodes);

}  // namespace forest

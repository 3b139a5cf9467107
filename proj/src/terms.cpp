#include "forest/terms.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace forest {

// ---------------------------------------------------------------- Alphabet

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Alphabet::Alphabet(std::initializer_list<std::string> labels)
    : Alphabet(std::vector<std::string>(labels)) {}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (const auto& l : labels_) {
    if (!is_valid_label(l) || l == "0") {
      throw std::invalid_argument("invalid label '" + l + "'");
    }
  }
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool Alphabet::contains(std::string_view label) const {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

std::size_t Alphabet::index_of(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    throw std::out_of_range("label '" + std::string(label) + "' not in alphabet");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

// ---------------------------------------------------------- Forest / Tree

Forest::Forest(std::vector<Tree> trees) : trees_(std::move(trees)) {
  std::sort(trees_.begin(), trees_.end());
  for (const auto& t : trees_) nodes_ += t.size();
}

Tree::Tree(std::string label, Forest children)
    : label_(std::move(label)),
      children_(std::move(children)),
      nodes_(1 + children_.size()) {}

// Order: node count, then the tree sequence lexicographically.
std::strong_ordering operator<=>(const Forest& a, const Forest& b) {
  if (auto c = a.nodes_ <=> b.nodes_; c != 0) return c;
  const auto n = std::min(a.trees_.size(), b.trees_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.trees_[i] <=> b.trees_[i]; c != 0) return c;
  }
  return a.trees_.size() <=> b.trees_.size();
}

bool operator==(const Forest& a, const Forest& b) {
  return a.nodes_ == b.nodes_ && a.trees_ == b.trees_;
}

// Order: node count, then root label, then children.
std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
  if (auto c = a.nodes_ <=> b.nodes_; c != 0) return c;
  if (auto c = a.label_.compare(b.label_); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.children_ <=> b.children_;
}

bool operator==(const Tree& a, const Tree& b) {
  return a.nodes_ == b.nodes_ && a.label_ == b.label_ && a.children_ == b.children_;
}

// ----------------------------------------------------------------- Context

Context::Context(Forest bottom, std::vector<ContextLayer> layers)
    : bottom_(std::move(bottom)), layers_(std::move(layers)) {}

std::size_t Context::size() const {
  std::size_t n = bottom_.size();
  for (const auto& l : layers_) n += 1 + l.siblings.size();
  return n;
}

std::strong_ordering operator<=>(const Context& a, const Context& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (auto c = a.layers_.size() <=> b.layers_.size(); c != 0) return c;
  if (auto c = a.bottom_ <=> b.bottom_; c != 0) return c;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    const auto& la = a.layers_[i];
    const auto& lb = b.layers_[i];
    if (auto c = la.label.compare(lb.label); c != 0) {
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (auto c = la.siblings <=> lb.siblings; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ------------------------------------------------------------------ Parser

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

struct RawItem {
  bool hole = false;
  std::string label;
  std::vector<RawItem> children;
  std::size_t position = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const Alphabet* alphabet)
      : text_(text), alphabet_(alphabet) {}

  std::vector<RawItem> parse_all() {
    auto items = parse_forest();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return items;
  }

 private:
  std::vector<RawItem> parse_forest() {
    skip_ws();
    std::size_t start = pos_;
    if (peek_label() == "0") {
      pos_ += 1;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        pos_ = start;
        fail("'0' cannot be used as a summand");
      }
      return {};
    }
    std::vector<RawItem> items;
    items.push_back(parse_item());
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '+') {
        ++pos_;
        items.push_back(parse_item());
      } else {
        break;
      }
    }
    return items;
  }

  RawItem parse_item() {
    skip_ws();
    RawItem item;
    item.position = pos_;
    if (pos_ >= text_.size()) fail("expected a label or '[]'");
    if (text_[pos_] == '[') {
      ++pos_;
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
      ++pos_;
      item.hole = true;
      return item;
    }
    std::string_view label = peek_label();
    if (label.empty()) fail("expected a label or '[]'");
    if (label == "0") fail("'0' is not a tree");
    if (alphabet_ != nullptr && !alphabet_->contains(label)) {
      fail("unknown label '" + std::string(label) + "'");
    }
    item.label = std::string(label);
    pos_ += label.size();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      item.children = parse_forest();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
    }
    return item;
  }

  std::string_view peek_label() const {
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
      ++end;
    }
    return text_.substr(pos_, end - pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(pos_, message);
  }

  std::string_view text_;
  const Alphabet* alphabet_;
  std::size_t pos_ = 0;
};

std::size_t count_holes(const std::vector<RawItem>& items) {
  std::size_t n = 0;
  for (const auto& it : items) n += it.hole ? 1 : count_holes(it.children);
  return n;
}

Forest to_forest(const std::vector<RawItem>& items) {
  std::vector<Tree> trees;
  trees.reserve(items.size());
  for (const auto& it : items) trees.emplace_back(it.label, to_forest(it.children));
  return Forest(std::move(trees));
}

// Builds the context from the items of a forest that contains the hole.
// `layers` collects the path innermost-first after the recursion unwinds.
void to_context(const std::vector<RawItem>& items, Forest& bottom,
                std::vector<ContextLayer>& layers) {
  std::vector<Tree> others;
  const RawItem* path = nullptr;
  for (const auto& it : items) {
    if (it.hole || count_holes(it.children) > 0) {
      path = &it;
    } else {
      others.emplace_back(it.label, to_forest(it.children));
    }
  }
  Forest siblings(std::move(others));
  if (path->hole) {
    bottom = std::move(siblings);
    return;
  }
  to_context(path->children, bottom, layers);
  layers.push_back({path->label, std::move(siblings)});
}

Forest parse_forest_impl(std::string_view text, const Alphabet* alphabet) {
  Parser parser(text, alphabet);
  auto items = parser.parse_all();
  if (count_holes(items) != 0) throw ParseError(0, "a forest cannot contain a hole");
  return to_forest(items);
}

Context parse_context_impl(std::string_view text, const Alphabet* alphabet) {
  Parser parser(text, alphabet);
  auto items = parser.parse_all();
  const auto holes = count_holes(items);
  if (holes != 1) {
    throw ParseError(0, "a context needs exactly one hole, found " + std::to_string(holes));
  }
  Forest bottom;
  std::vector<ContextLayer> layers;
  to_context(items, bottom, layers);
  return Context(std::move(bottom), std::move(layers));
}

}  // namespace

Forest parse_forest(std::string_view text, const Alphabet& alphabet) {
  return parse_forest_impl(text, &alphabet);
}
Context parse_context(std::string_view text, const Alphabet& alphabet) {
  return parse_context_impl(text, &alphabet);
}
Forest parse_forest(std::string_view text) { return parse_forest_impl(text, nullptr); }
Context parse_context(std::string_view text) { return parse_context_impl(text, nullptr); }

// --------------------------------------------------------------- Rendering

std::string render(const Tree& t) {
  if (t.children().empty()) return t.label();
  return t.label() + "(" + render(t.children()) + ")";
}

std::string render(const Forest& f) {
  if (f.empty()) return "0";
  std::string out;
  for (const auto& t : f.trees()) {
    if (!out.empty()) out += '+';
    out += render(t);
  }
  return out;
}

std::string render(const Context& p) {
  std::string inner = "[]";
  if (!p.bottom().empty()) inner += "+" + render(p.bottom());
  for (const auto& layer : p.layers()) {
    inner = layer.label + "(" + inner + ")";
    if (!layer.siblings.empty()) inner += "+" + render(layer.siblings);
  }
  return inner;
}

// ------------------------------------------------------------- Operations

Forest canonical(const Forest& f) {
  std::vector<Tree> trees;
  trees.reserve(f.trees().size());
  for (const auto& t : f.trees()) trees.emplace_back(t.label(), canonical(t.children()));
  return Forest(std::move(trees));
}

Forest add(const Forest& f, const Forest& g) {
  std::vector<Tree> trees;
  trees.reserve(f.trees().size() + g.trees().size());
  std::merge(f.trees().begin(), f.trees().end(), g.trees().begin(), g.trees().end(),
             std::back_inserter(trees));
  return Forest(std::move(trees));
}

Forest adjoin(const Forest& f, const std::string& label) {
  return Forest({Tree(label, f)});
}

Forest apply_context(const Forest& s, const Context& p) {
  Forest result = add(s, p.bottom());
  for (const auto& layer : p.layers()) {
    result = add(adjoin(result, layer.label), layer.siblings);
  }
  return result;
}

Context compose(const Context& p, const Context& q) {
  if (p.layers().empty()) {
    return Context(add(p.bottom(), q.bottom()), q.layers());
  }
  std::vector<ContextLayer> layers = p.layers();
  layers.back().siblings = add(layers.back().siblings, q.bottom());
  layers.insert(layers.end(), q.layers().begin(), q.layers().end());
  return Context(p.bottom(), std::move(layers));
}

Context letter_context(const std::string& label) {
  return Context(Forest(), {ContextLayer{label, Forest()}});
}

Context sum_context(const Forest& s) { return Context(s, {}); }

std::size_t depth(const Forest& f) {
  std::size_t d = 0;
  for (const auto& t : f.trees()) d = std::max(d, 1 + depth(t.children()));
  return d;
}

// ------------------------------------------------------------- Enumeration

namespace {

class ForestTable {
 public:
  ForestTable(const Alphabet& alphabet, std::size_t max_nodes) {
    by_size_.resize(max_nodes + 1);
    trees_by_size_.resize(max_nodes + 1);
    by_size_[0].push_back(Forest());
    for (std::size_t n = 1; n <= max_nodes; ++n) {
      for (const auto& label : alphabet.labels()) {
        for (const auto& f : by_size_[n - 1]) trees_by_size_[n].emplace_back(label, f);
      }
      all_trees_.insert(all_trees_.end(), trees_by_size_[n].begin(), trees_by_size_[n].end());
      std::vector<Tree> chosen;
      extend(n, 0, chosen, by_size_[n]);
      std::sort(by_size_[n].begin(), by_size_[n].end());
    }
  }

  const std::vector<Forest>& forests(std::size_t n) const { return by_size_[n]; }

 private:
  // Multisets of trees as nondecreasing index sequences into all_trees_.
  void extend(std::size_t remaining, std::size_t min_index, std::vector<Tree>& chosen,
              std::vector<Forest>& out) {
    if (remaining == 0) {
      out.emplace_back(chosen);
      return;
    }
    for (std::size_t i = min_index; i < all_trees_.size(); ++i) {
      const auto& t = all_trees_[i];
      if (t.size() > remaining) break;
      chosen.push_back(t);
      extend(remaining - t.size(), i, chosen, out);
      chosen.pop_back();
    }
  }

  std::vector<std::vector<Forest>> by_size_;
  std::vector<std::vector<Tree>> trees_by_size_;
  std::vector<Tree> all_trees_;
};

}  // namespace

std::vector<Forest> enumerate_forests(const Alphabet& alphabet, std::size_t max_nodes) {
  ForestTable table(alphabet, max_nodes);
  std::vector<Forest> out;
  for (std::size_t n = 0; n <= max_nodes; ++n) {
    out.insert(out.end(), table.forests(n).begin(), table.forests(n).end());
  }
  return out;
}

std::vector<Context> enumerate_contexts(const Alphabet& alphabet, std::size_t max_nodes) {
  ForestTable table(alphabet, max_nodes);
  // by_size[n]: contexts with exactly n nodes.
  std::vector<std::vector<Context>> by_size(max_nodes + 1);
  for (std::size_t n = 0; n <= max_nodes; ++n) {
    for (const auto& f : table.forests(n)) by_size[n].emplace_back(f, std::vector<ContextLayer>{});
    // Outermost layer (label, siblings) on top of a smaller context.
    for (std::size_t sib = 0; sib + 1 <= n; ++sib) {
      const std::size_t inner = n - 1 - sib;
      for (const auto& c : by_size[inner]) {
        for (const auto& label : alphabet.labels()) {
          for (const auto& s : table.forests(sib)) {
            auto layers = c.layers();
            layers.push_back({label, s});
            by_size[n].emplace_back(c.bottom(), std::move(layers));
          }
        }
      }
    }
    std::sort(by_size[n].begin(), by_size[n].end());
  }
  std::vector<Context> out;
  for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace forest

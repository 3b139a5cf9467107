#include "forest/decide.hpp"

#include <algorithm>
#include <unordered_map>

#include "forest/derived.hpp"

namespace forest {

std::string to_string(RelationStrategy s) {
  switch (s) {
    case RelationStrategy::Exact: return "exact";
    case RelationStrategy::Saturation: return "saturation";
    case RelationStrategy::Sampled: return "sampled";
  }
  return "?";
}

std::string to_string(IdentityOutcome o) {
  switch (o) {
    case IdentityOutcome::Holds: return "holds";
    case IdentityOutcome::Violated: return "violated";
    case IdentityOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(LtVerdict::Kind k) {
  switch (k) {
    case LtVerdict::Kind::LT: return "LT";
    case LtVerdict::Kind::NotLT: return "NotLT";
    case LtVerdict::Kind::Unknown: return "Unknown";
  }
  return "?";
}

LtProblem::LtProblem(const Recognizer& r, ClosureBudget budget)
    : input_(r),
      syn_(std::make_shared<SyntacticAlgebra>(SyntacticAlgebra::of(r, budget))),
      universe_(std::make_shared<TypeUniverse>()) {}

bool h_idempotent_necessary(const Recognizer& r) { return SyntacticAlgebra::of(r).algebra().h_idempotent(); }

// ------------------------------------------------------------------ sampling

Forest random_forest(const Alphabet& a, std::size_t nodes, std::mt19937_64& rng) {
  Forest out;
  while (nodes > 0) {
    const std::size_t size = std::uniform_int_distribution<std::size_t>(1, nodes)(rng);
    const std::size_t label = std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng);
    out = add(out, adjoin(random_forest(a, size - 1, rng), a[label]));
    nodes -= size;
  }
  return out;
}

Context random_context(const Alphabet& a, std::size_t nodes, std::mt19937_64& rng) {
  Context p;
  while (nodes > 0) {
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      const std::size_t label = std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng);
      p = compose(p, letter_context(a[label]));
      nodes -= 1;
    } else {
      const std::size_t size = std::uniform_int_distribution<std::size_t>(1, nodes)(rng);
      p = compose(p, sum_context(random_forest(a, size, rng)));
      nodes -= size;
    }
  }
  return p;
}

namespace {

std::vector<Forest> sample_forests(const Alphabet& a, const SampleOptions& o) {
  auto out = enumerate_forests(a, o.term_bound);
  std::mt19937_64 rng(o.seed);
  for (std::size_t i = 0; i < o.random_terms; ++i)
    out.push_back(random_forest(a, std::uniform_int_distribution<std::size_t>(1, o.random_size)(rng), rng));
  return out;
}

std::vector<Context> sample_contexts(const Alphabet& a, const SampleOptions& o) {
  auto out = enumerate_contexts(a, o.term_bound);
  std::mt19937_64 rng(o.seed ^ 0x5bd1e995ULL);
  for (std::size_t i = 0; i < o.random_terms; ++i)
    out.push_back(random_context(a, std::uniform_int_distribution<std::size_t>(1, o.random_size)(rng), rng));
  return out;
}

std::vector<Context> letter_terms(const Alphabet& a) {
  std::vector<Context> out;
  for (const auto& l : a.labels()) out.push_back(letter_context(l));
  return out;
}

bool is_subset(const TypeSet& a, const TypeSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

using TypedProduct = ProductAlgebra<FiniteForestAlgebra, KTypeSetAlgebra>;

/// Realizable (alpha(s), beta_k(s)) with realizing forests.
struct TypedTable {
  std::vector<std::pair<Elem, TypeSet>> rows;
  std::vector<Forest> terms;
};

TypedTable typed_table(const LtProblem& p, std::size_t k, std::size_t budget) {
  KTypeSetAlgebra kt(p.universe_ptr(), p.alphabet(), k);
  TypedProduct prod(p.algebra(), kt);
  std::vector<TypedProduct::V> gens;
  for (Elem i = 0; i < p.alphabet().size(); ++i) gens.push_back({p.alpha().morphism().letters()[i], i});
  ClosureBudget b;
  b.max_h = budget;
  auto c = generate_horizontal(prod, gens, {}, b);
  TermReplay replay(c, letter_terms(p.alphabet()));
  TypedTable t;
  t.rows = c.hs;
  for (Elem i = 0; i < c.hs.size(); ++i) t.terms.push_back(replay.forest(i));
  return t;
}

RelationR exact_r(const LtProblem& p, std::size_t k, std::size_t budget) {
  const auto table = typed_table(p, k, budget);
  const std::size_t nh = p.algebra().h_size();
  RelationR out{RelationStrategy::Exact, k, {}};
  std::vector<std::vector<Elem>> by_value(nh);
  for (Elem i = 0; i < table.rows.size(); ++i) by_value[table.rows[i].first].push_back(i);

  // Index the types that occur; small universes use a superset table.
  std::vector<TypeId> ids;
  for (const auto& [h, s] : table.rows) ids.insert(ids.end(), s.begin(), s.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() <= 20) {
    std::unordered_map<TypeId, std::size_t> pos;
    for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
    auto mask_of = [&](const TypeSet& s) {
      std::uint32_t m = 0;
      for (TypeId t : s) m |= std::uint32_t{1} << pos[t];
      return m;
    };
    const std::size_t n = ids.size();
    for (Elem hs = 0; hs < nh; ++hs) {
      if (by_value[hs].empty()) continue;
      // witness[m] = some row over hs whose set contains m
      std::vector<Elem> witness(std::size_t{1} << n, kNone);
      for (Elem i : by_value[hs]) witness[mask_of(table.rows[i].second)] = i;
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t m = 0; m < witness.size(); ++m)
          if (!(m & (std::size_t{1} << b)) && witness[m] == kNone) witness[m] = witness[m | (std::size_t{1} << b)];
      for (Elem hr = 0; hr < nh; ++hr)
        for (Elem i : by_value[hr]) {
          const Elem j = witness[mask_of(table.rows[i].second)];
          if (j != kNone) {
            out.pairs.emplace(std::make_pair(hr, hs), std::make_pair(table.terms[i], table.terms[j]));
            break;
          }
        }
    }
    return out;
  }
  for (Elem hr = 0; hr < nh; ++hr)
    for (Elem hs = 0; hs < nh; ++hs) {
      bool found = false;
      for (Elem i : by_value[hr]) {
        for (Elem j : by_value[hs])
          if (is_subset(table.rows[i].second, table.rows[j].second)) {
            out.pairs.emplace(std::make_pair(hr, hs), std::make_pair(table.terms[i], table.terms[j]));
            found = true;
            break;
          }
        if (found) break;
      }
    }
  return out;
}

RelationR saturated_r(const LtProblem& p, std::size_t k, std::size_t budget) {
  const auto& alg = p.algebra();
  if (!alg.h_idempotent()) throw std::invalid_argument("saturation needs an idempotent horizontal monoid");
  const auto& letters = p.alpha().morphism().letters();
  const Alphabet& al = p.alphabet();

  // Trees by root k-type: type -> value -> realizing tree.
  std::map<TypeId, std::map<Elem, Forest>> trees;
  auto add_tree = [&](TypeId t, Elem v, const Forest& f) { trees[t].emplace(v, f); };
  if (k == 0) {
    for (Elem h = 0; h < alg.h_size(); ++h)
      for (Elem a = 0; a < al.size(); ++a)
        add_tree(p.universe().atom(), alg.act(h, letters[a]), adjoin(p.syntactic().h_term(h), al[a]));
  } else {
    const auto below = typed_table(p, k - 1, budget);
    for (std::size_t i = 0; i < below.rows.size(); ++i)
      for (Elem a = 0; a < al.size(); ++a)
        add_tree(p.universe().intern(k, al[a], below.rows[i].second), alg.act(below.rows[i].first, letters[a]),
                 adjoin(below.terms[i], al[a]));
  }

  std::map<std::pair<Elem, Elem>, std::pair<Forest, Forest>> base;
  for (const auto& [t, vals] : trees)
    for (const auto& [v1, f1] : vals)
      for (const auto& [v2, f2] : vals) base.emplace(std::make_pair(v1, v2), std::make_pair(f1, f2));

  RelationR out{RelationStrategy::Saturation, k, {}};
  std::vector<std::pair<Elem, Elem>> order;
  auto push = [&](std::pair<Elem, Elem> key, std::pair<Forest, Forest> terms) {
    if (out.pairs.emplace(key, std::move(terms)).second) order.push_back(key);
  };
  push({alg.zero(), alg.zero()}, {Forest{}, Forest{}});
  for (const auto& [key, terms] : base) push(key, terms);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto key = order[i];
    const auto terms = out.pairs.at(key);
    for (const auto& [bk, bt] : base)
      push({alg.add(key.first, bk.first), alg.add(key.second, bk.second)},
           {add(terms.first, bt.first), add(terms.second, bt.second)});
    for (Elem x = 0; x < alg.h_size(); ++x)
      push({key.first, alg.add(key.second, x)}, {terms.first, add(terms.second, p.syntactic().h_term(x))});
  }
  return out;
}

RelationR sampled_r(const LtProblem& p, std::size_t k, const SampleOptions& o) {
  const auto fs = sample_forests(p.alphabet(), o);
  std::vector<Elem> vals;
  std::vector<TypeSet> types;
  for (const auto& f : fs) {
    vals.push_back(p.alpha().morphism().eval(f));
    types.push_back(root_types(p.universe(), f, k));
  }
  RelationR out{RelationStrategy::Sampled, k, {}};
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (is_subset(types[i], types[j])) out.pairs.emplace(std::make_pair(vals[i], vals[j]), std::make_pair(fs[i], fs[j]));
  return out;
}

RelationS exact_s(const LtProblem& p, std::size_t k, std::size_t budget) {
  ClosureBudget b;
  b.max_h = budget;
  b.max_v = budget;
  auto kd = build_kdef_algebra(p.alphabet(), k, p.universe_ptr(), b);
  const auto pa = PairAlgebra::build(p.alpha().morphism(), kd.beta(), b);
  const auto& bk = pa.beta().algebra();
  RelationS out{RelationStrategy::Exact, k, {}};
  for (Elem i = 0; i < pa.h_pairs().size(); ++i) {
    const auto [h1, t] = pa.h_pairs()[i];
    for (Elem j = 0; j < pa.v_pairs().size(); ++j) {
      const auto [v1, w] = pa.v_pairs()[j];
      if (bk.act(t, w) != t || out.contains(h1, v1)) continue;
      out.pairs.emplace(std::make_pair(h1, v1), std::make_pair(pa.h_term(i), pa.v_term(j)));
    }
  }
  return out;
}

RelationS sampled_s(const LtProblem& p, std::size_t k, const SampleOptions& o) {
  const auto fs = sample_forests(p.alphabet(), o);
  const auto cs = sample_contexts(p.alphabet(), o);
  const auto& m = p.alpha().morphism();
  std::vector<Elem> cvals;
  for (const auto& c : cs) cvals.push_back(m.eval(c));
  RelationS out{RelationStrategy::Sampled, k, {}};
  for (const auto& f : fs) {
    const Elem h = m.eval(f);
    const TypeSet t = root_types(p.universe(), f, k);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (out.contains(h, cvals[j])) continue;
      if (root_types(p.universe(), apply_context(f, cs[j]), k) == t)
        out.pairs.emplace(std::make_pair(h, cvals[j]), std::make_pair(f, cs[j]));
    }
  }
  return out;
}

}  // namespace

RelationR relation_r(const LtProblem& p, std::size_t k, RelationStrategy strategy, std::size_t pair_budget,
                     const SampleOptions& sample) {
  switch (strategy) {
    case RelationStrategy::Exact: return exact_r(p, k, pair_budget);
    case RelationStrategy::Saturation: return saturated_r(p, k, pair_budget);
    case RelationStrategy::Sampled: return sampled_r(p, k, sample);
  }
  throw std::invalid_argument("unknown strategy");
}

RelationS relation_s(const LtProblem& p, std::size_t k, RelationStrategy strategy, std::size_t pair_budget,
                     const SampleOptions& sample) {
  switch (strategy) {
    case RelationStrategy::Exact: return exact_s(p, k, pair_budget);
    case RelationStrategy::Saturation: throw std::invalid_argument("S has no saturation strategy");
    case RelationStrategy::Sampled: return sampled_s(p, k, sample);
  }
  throw std::invalid_argument("unknown strategy");
}

// ---------------------------------------------------------------- identities

std::string IdentityWitness::render() const {
  using forest::render;
  if (identity == 1)
    return "(i) r=" + render(r) + " s=" + render(s) + " t=" + render(t) + " u=" + render(u) +
           " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs);
  return "(ii) r=" + render(r) + " p=" + render(p) + " q=" + render(q) + " q'=" + render(q2) +
         " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs);
}

bool reverify_witness(const Recognizer& alpha, TypeUniverse& u, const IdentityWitness& w, std::size_t level) {
  const auto& m = alpha.morphism();
  if (w.identity == 1) {
    if (!is_subset(root_types(u, w.r, level), root_types(u, w.s, level))) return false;
    const Forest ru = apply_context(w.r, w.u);
    const Elem lhs = m.eval(add(apply_context(add(w.r, w.s), w.t), ru));
    const Elem rhs = m.eval(add(apply_context(w.s, w.t), ru));
    return lhs != rhs;
  }
  const Forest rp = apply_context(w.r, w.p);
  if (root_types(u, rp, level) != root_types(u, w.r, level)) return false;
  const Forest rpq2 = apply_context(rp, w.q2);
  const Elem lhs = m.eval(add(apply_context(rp, w.q), rpq2));
  const Elem rhs = m.eval(add(apply_context(w.r, w.q), rpq2));
  return lhs != rhs;
}

IdentityCheck check_lt_identities(const LtProblem& p, const RelationR& r, const RelationS& s) {
  const auto& a = p.algebra();
  IdentityCheck out;
  out.k = r.k;
  out.r_strategy = r.strategy;
  out.s_strategy = s.strategy;
  out.r_size = r.pairs.size();
  out.s_size = s.pairs.size();
  const Elem nv = static_cast<Elem>(a.v_size());
  for (const auto& [key, terms] : r.pairs) {
    const auto [hr, hs] = key;
    for (Elem t = 0; t < nv && !out.witness; ++t)
      for (Elem u = 0; u < nv; ++u) {
        const Elem ru = a.act(hr, u);
        const Elem lhs = a.add(a.act(a.add(hr, hs), t), ru);
        const Elem rhs = a.add(a.act(hs, t), ru);
        if (lhs != rhs) {
          IdentityWitness w;
          w.identity = 1;
          w.r = terms.first;
          w.s = terms.second;
          w.t = p.syntactic().v_term(t);
          w.u = p.syntactic().v_term(u);
          w.lhs = lhs;
          w.rhs = rhs;
          out.witness = std::move(w);
          break;
        }
      }
    if (out.witness) break;
  }
  if (!out.witness)
    for (const auto& [key, terms] : s.pairs) {
      const auto [hr, vp] = key;
      const Elem rp = a.act(hr, vp);
      for (Elem q = 0; q < nv && !out.witness; ++q)
        for (Elem q2 = 0; q2 < nv; ++q2) {
          const Elem rpq2 = a.act(rp, q2);
          const Elem lhs = a.add(a.act(rp, q), rpq2);
          const Elem rhs = a.add(a.act(hr, q), rpq2);
          if (lhs != rhs) {
            IdentityWitness w;
            w.identity = 2;
            w.r = terms.first;
            w.p = terms.second;
            w.q = p.syntactic().v_term(q);
            w.q2 = p.syntactic().v_term(q2);
            w.lhs = lhs;
            w.rhs = rhs;
            out.witness = std::move(w);
            break;
          }
        }
      if (out.witness) break;
    }
  const bool exact = r.strategy != RelationStrategy::Sampled && s.strategy != RelationStrategy::Sampled;
  if (out.witness) {
    out.outcome = IdentityOutcome::Violated;
  } else {
    out.outcome = exact ? IdentityOutcome::Holds : IdentityOutcome::Inconclusive;
  }
  return out;
}

IdentityCheck check_lt_identities_at_k(const LtProblem& p, std::size_t k, RelationStrategy r_strategy,
                                       RelationStrategy s_strategy, std::size_t pair_budget,
                                       const SampleOptions& sample) {
  try {
    const auto r = relation_r(p, k, r_strategy, pair_budget, sample);
    const auto s = relation_s(p, k, s_strategy, pair_budget, sample);
    return check_lt_identities(p, r, s);
  } catch (const BudgetExceeded&) {
    IdentityCheck out;
    out.k = k;
    out.r_strategy = r_strategy;
    out.s_strategy = s_strategy;
    out.outcome = IdentityOutcome::Inconclusive;
    return out;
  }
}

// ------------------------------------------------------------------ pipeline

namespace {

std::optional<RelationR> best_r(const LtProblem& p, std::size_t k, const DecideOptions& o, std::string& note) {
  try {
    return relation_r(p, k, RelationStrategy::Exact, o.pair_budget);
  } catch (const BudgetExceeded& e) {
    note += "exact R over budget; ";
  }
  try {
    return relation_r(p, k, RelationStrategy::Saturation, o.pair_budget);
  } catch (const BudgetExceeded& e) {
    note += "saturated R over budget; ";
  }
  return relation_r(p, k, RelationStrategy::Sampled, o.pair_budget, o.sample);
}

RelationS best_s(const LtProblem& p, std::size_t k, const DecideOptions& o, std::string& note) {
  try {
    return relation_s(p, k, RelationStrategy::Exact, o.pair_budget);
  } catch (const BudgetExceeded& e) {
    note += "exact S over budget; ";
  }
  return relation_s(p, k, RelationStrategy::Sampled, o.pair_budget, o.sample);
}

}  // namespace

LtVerdict decide_lt(const Recognizer& r, const DecideOptions& options) {
  LtProblem p(r);
  const auto& a = p.algebra();
  LtVerdict v;
  v.k_star = p.k_star();
  v.syntactic_h = a.h_size();
  v.syntactic_v = a.v_size();

  for (Elem h = 0; h < a.h_size(); ++h)
    if (a.add(h, h) != h) {
      const Forest s = p.syntactic().h_term(h);
      const auto& m = p.alpha().morphism();
      if (m.eval(add(s, s)) == m.eval(s)) throw std::logic_error("non-idempotence witness failed to re-verify");
      v.kind = LtVerdict::Kind::NotLT;
      v.reason = "nonidempotent";
      v.nonidempotent_term = s;
      return v;
    }

  const std::size_t last = std::min(options.max_k, v.k_star);
  for (std::size_t k = 0; k <= last; ++k) {
    LevelOutcome lo;
    lo.k = k;
    const auto rel_r = best_r(p, k, options, lo.note);
    const auto rel_s = best_s(p, k, options, lo.note);
    lo.check = check_lt_identities(p, *rel_r, rel_s);
    v.transcript.push_back(lo);
    const auto& c = lo.check;
    if (c.outcome == IdentityOutcome::Holds && c.conclusive()) {
      v.kind = LtVerdict::Kind::LT;
      v.level = k + 1;
      return v;
    }
    if (c.outcome == IdentityOutcome::Violated && reverify_witness(p.alpha(), p.universe(), *c.witness, v.k_star)) {
      v.kind = LtVerdict::Kind::NotLT;
      v.reason = "identity";
      v.witness = c.witness;
      return v;
    }
    if (c.outcome == IdentityOutcome::Violated) v.transcript.back().note += "witness fails its side condition at k*; ";
  }

  // Concrete witness search with side conditions taken at k* directly.
  LevelOutcome lo;
  lo.k = v.k_star;
  const auto rel_r = relation_r(p, v.k_star, RelationStrategy::Sampled, options.pair_budget, options.sample);
  const auto rel_s = relation_s(p, v.k_star, RelationStrategy::Sampled, options.pair_budget, options.sample);
  lo.check = check_lt_identities(p, rel_r, rel_s);
  lo.note = "sampled search at k*";
  v.transcript.push_back(lo);
  if (lo.check.outcome == IdentityOutcome::Violated &&
      reverify_witness(p.alpha(), p.universe(), *lo.check.witness, v.k_star)) {
    v.kind = LtVerdict::Kind::NotLT;
    v.reason = "identity";
    v.witness = lo.check.witness;
    return v;
  }
  v.kind = LtVerdict::Kind::Unknown;
  return v;
}

bool reverify_verdict(const Recognizer& r, const LtVerdict& v) {
  LtProblem p(r);
  switch (v.kind) {
    case LtVerdict::Kind::NotLT:
      if (v.reason == "nonidempotent") {
        if (!v.nonidempotent_term) return false;
        const auto& m = p.alpha().morphism();
        return m.eval(add(*v.nonidempotent_term, *v.nonidempotent_term)) != m.eval(*v.nonidempotent_term);
      }
      return v.witness && reverify_witness(p.alpha(), p.universe(), *v.witness, p.k_star());
    case LtVerdict::Kind::LT: {
      if (v.level == 0 || v.transcript.empty()) return false;
      const auto& c = v.transcript.back().check;
      if (c.k + 1 != v.level) return false;
      const auto again = check_lt_identities_at_k(p, c.k, c.r_strategy, c.s_strategy);
      return again.outcome == IdentityOutcome::Holds && again.conclusive();
    }
    case LtVerdict::Kind::Unknown:
      return true;
  }
  return false;
}

// ------------------------------------------------------------- wreath route

LtWreath lt_wreath_recognizer(const Alphabet& alphabet, std::size_t k, const LtSpec& spec,
                              std::shared_ptr<TypeUniverse> universe, ClosureBudget budget) {
  if (k == 0) throw std::invalid_argument("lt_wreath_recognizer requires k >= 1");
  if (spec.features.size() > 64) throw std::invalid_argument("at most 64 features");
  if (!universe) universe = std::make_shared<TypeUniverse>();
  auto kd = build_kdef_algebra(alphabet, k, universe, budget);
  const auto& hk = kd.algebra();
  TypeUniverse& u = *universe;

  std::vector<TypeId> types;
  std::unordered_map<TypeId, std::size_t> pos;
  std::vector<std::vector<std::size_t>> node_type(alphabet.size(), std::vector<std::size_t>(hk.h_size()));
  for (Elem a = 0; a < alphabet.size(); ++a)
    for (Elem h = 0; h < hk.h_size(); ++h) {
      const TypeId t = u.intern(k, alphabet[a], truncate_set(u, kd.h_sets()[h], k - 1));
      auto [it, fresh] = pos.emplace(t, types.size());
      if (fresh) types.push_back(t);
      node_type[a][h] = it->second;
    }
  FlatSubsetAlgebra flat(types.size());
  std::vector<WreathV<Bitset>> letters;
  for (Elem a = 0; a < alphabet.size(); ++a) {
    WreathV<Bitset> w;
    for (Elem h = 0; h < hk.h_size(); ++h) w.f.push_back(flat.singleton(node_type[a][h]));
    w.v = kd.beta().letters()[a];
    letters.push_back(std::move(w));
  }

  Wreath<FlatSubsetAlgebra> wr(flat, hk);
  auto c = generate(wr, letters, {}, budget);
  auto mi = materialize(wr, c);

  std::vector<std::uint64_t> feature(types.size(), 0);
  for (std::size_t i = 0; i < types.size(); ++i)
    for (std::size_t f = 0; f < spec.features.size(); ++f)
      if (spec.features[f](u, types[i])) feature[i] |= std::uint64_t{1} << f;
  std::vector<bool> accept(c.hs.size());
  for (Elem i = 0; i < c.hs.size(); ++i) {
    std::uint64_t mask = 0;
    c.hs[i].first.for_each([&](std::size_t t) { mask |= feature[t]; });
    accept[i] = spec.accept(mask, truncate_set(u, kd.h_sets()[c.hs[i].second], k - 1));
  }

  std::vector<Elem> pi_h, pi_v;
  for (const auto& h : c.hs) pi_h.push_back(h.second);
  for (Elem r : mi.v_rep) pi_v.push_back(c.vs[r].v);
  bool pi_ok = !check_homomorphism(mi.algebra, hk, pi_h, pi_v).has_value();
  for (Elem a = 0; a < alphabet.size(); ++a) pi_ok = pi_ok && letters[a].v == kd.beta().letters()[a];

  std::vector<Elem> gen;
  for (Elem g : c.v_gen) gen.push_back(mi.v_class[g]);
  auto alg = std::make_shared<const FiniteForestAlgebra>(std::move(mi.algebra));
  Recognizer rec(Morphism(alg, alphabet, std::move(gen)), std::move(accept));
  return LtWreath{std::move(kd), std::move(types), flat, std::move(letters), std::move(rec), pi_ok};
}

}  // namespace forest

// Acceptance criteria, one line each.  Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "forest/decide.hpp"
#include "forest/derived.hpp"
#include "forest/division.hpp"
#include "forest/syntactic.hpp"
#include "oracles.hpp"

using namespace forest;
using namespace fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

// ---------------------------------------------------------------- 1

// Unary and binary laws range over every term with at most 4 nodes; ternary
// laws over every triple of such terms with at most 6 nodes in total.
Outcome free_algebra_laws() {
  Outcome o;
  constexpr std::size_t total = 6;
  const Alphabet ab = binary();
  const auto fs = enumerate_forests(ab, 4);
  const auto cs = enumerate_contexts(ab, 4);
  std::size_t checks = 0;
  for (const auto& f : fs) {
    o.require(add(f, Forest{}) == f && add(Forest{}, f) == f, "horizontal identity");
    o.require(apply_context(f, Context{}) == f, "action unit");
    for (const auto& g : fs) {
      o.require(add(f, g) == add(g, f), "horizontal commutativity");
      for (const auto& h : fs) {
        if (f.size() + g.size() + h.size() > total) continue;
        o.require(add(add(f, g), h) == add(f, add(g, h)), "horizontal associativity");
        ++checks;
      }
    }
  }
  for (const auto& p : cs) {
    o.require(compose(p, Context{}) == p && compose(Context{}, p) == p, "vertical identity");
    for (const auto& q : cs) {
      o.require(parse_context(render(compose(p, q)), binary()) == compose(p, q), "context round trip");
      for (const auto& r : cs) {
        if (p.size() + q.size() + r.size() > total) continue;
        o.require(compose(compose(p, q), r) == compose(p, compose(q, r)), "vertical associativity");
        ++checks;
      }
      for (const auto& s : fs) {
        if (s.size() + p.size() + q.size() > total) continue;
        o.require(apply_context(s, compose(p, q)) == apply_context(apply_context(s, p), q), "action compatibility");
        ++checks;
      }
    }
  }
  o.require(parse_forest("a(b(a)+a+b)+a(b)", ab) == parse_forest("a(b)+a(a+b(a)+b)", ab), "example equality");
  o.detail << fs.size() << " forests, " << cs.size() << " contexts, " << checks << " composite checks";
  return o;
}

// ---------------------------------------------------------------- 2

AlgebraTables mutate(AlgebraTables t, std::mt19937_64& rng) {
  const int which = static_cast<int>(rng() % 3);
  auto& table = which == 0 ? t.add : which == 1 ? t.mul : t.act;
  const std::size_t bound = which == 1 ? t.v_size : t.h_size;
  table[rng() % table.size()] = static_cast<Elem>(rng() % bound);
  t.ins.reset();
  return t;
}

Outcome algebra_validation() {
  Outcome o;
  const std::vector<AlgebraTables> base{flat_algebra(or_monoid()).tables(), flat_algebra(cyclic_monoid(2)).tables(),
                                        contains_a_redundant().algebra().tables()};
  std::vector<AlgebraTables> suite = base;
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 50; ++i) suite.push_back(mutate(base[i % base.size()], rng));
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto r = validate_algebra(suite[i]);
    if (i < base.size()) o.require(r.ok(), "curated table rejected");
    o.require(r.ok() == oracles::direct_law_scan(suite[i]), "classification differs from direct scan");
    if (!r.ok()) {
      ++rejected;
      o.require(oracles::confirms(suite[i], *r.violation), "violation not confirmed: " + r.violation->law);
    }
  }
  o.detail << suite.size() << " tables, " << rejected << " rejected with confirmed violations";
  return o;
}

// ---------------------------------------------------------------- 3

Outcome syntactic() {
  Outcome o;
  const auto red = contains_a_redundant();
  const auto syn = SyntacticAlgebra::of(red);
  o.require(syn.algebra().h_size() == 2 && syn.algebra().v_size() == 2, "sizes");
  std::size_t n = 0;
  for (const auto& f : enumerate_forests(red.alphabet(), 6)) {
    o.require(syn.recognizer().accepts(f) == red.accepts(f), "language differs on " + render(f));
    ++n;
  }
  const auto twice = SyntacticAlgebra::of(syn.recognizer());
  o.require(twice.algebra().h_size() == 2 && twice.algebra().v_size() == 2, "second application");
  o.detail << "|H|=" << syn.algebra().h_size() << " |V|=" << syn.algebra().v_size() << ", " << n << " forests";
  return o;
}

// ---------------------------------------------------------------- 4, 5

struct SuiteResult {
  std::string name;
  bool identities = false, derived = false;
  std::optional<GlobalIcWitness> witness;
  std::size_t witness_bound = 0;
  std::string cover;  // "verifies", "non-injective", "certificate", or a failure
};

std::optional<GlobalIcWitness> search(const ForestCategory& c, std::size_t max_bound, std::size_t& bound) {
  for (bound = 1; bound <= max_bound; ++bound)
    if (auto w = brute_force_global_ic(c, bound)) return w;
  return std::nullopt;
}

std::vector<SuiteResult>& suite_results() {
  static std::vector<SuiteResult> results = [] {
    std::vector<SuiteResult> out;
    for (const auto& sc : category_suite()) {
      const auto& c = *sc.category;
      SuiteResult r;
      r.name = sc.name;
      r.identities = check_identities(c).all_hold();
      r.derived = check_derived_identities(c).all_hold();
      r.witness = search(c, r.identities ? 5 : 6, r.witness_bound);
      try {
        const auto cc = canonical_flat_cover(c);
        if (!cc.injectivity(c).ok()) {
          r.cover = "non-injective";
        } else {
          const auto keep = cc.reduce(c);
          r.cover = verify_covering(c, FlatSubsetAlgebra(keep.size()), cc.project(keep)).ok()
                        ? "verifies"
                        : "injective but fails verification";
        }
      } catch (const BudgetExceeded&) {
        // Too many ids for the dense cover.  A witness pair already shows
        // that any cover by supports is not injective: both diagrams have
        // the same support, their values are coterminal and distinct.
        if (r.witness && support(c, r.witness->d1) == support(c, r.witness->d2) &&
            c.h_end(eval_diagram(c, r.witness->d1)) == c.h_end(eval_diagram(c, r.witness->d2)) &&
            eval_diagram(c, r.witness->d1) != eval_diagram(c, r.witness->d2))
          r.cover = "certificate";
        else
          r.cover = "cover over budget";
      }
      out.push_back(std::move(r));
    }
    return out;
  }();
  return results;
}

Outcome soundness_chain() {
  Outcome o;
  const auto& rs = suite_results();
  o.require(rs.size() >= 20, "suite too small");
  std::size_t failing = 0;
  for (const auto& r : rs) {
    if (r.identities) {
      o.require(r.derived, r.name + ": derived identities fail");
      o.require(!r.witness, r.name + ": brute-force witness");
    } else {
      ++failing;
      o.require(r.witness && r.witness_bound <= 6, r.name + ": no witness within 6");
    }
  }
  o.detail << rs.size() << " categories, " << failing << " failing the identities, all with witnesses";
  return o;
}

Outcome global_ic() {
  Outcome o;
  std::size_t verified = 0, refuted = 0, certified = 0;
  for (const auto& r : suite_results()) {
    if (!r.witness) {
      o.require(r.cover == "verifies", r.name + ": cover " + r.cover);
      ++verified;
    } else {
      o.require(r.cover == "non-injective" || r.cover == "certificate", r.name + ": cover " + r.cover);
      if (r.cover == "certificate") ++certified;
      else ++refuted;
    }
  }
  o.detail << verified << " covers verify, " << refuted << " fail injectivity, " << certified
           << " over the cover budget refuted by witness certificate";
  return o;
}

// ---------------------------------------------------------------- 6

Outcome derived_category_theorem() {
  Outcome o;
  // (a) over {a}: the dense cover needs at most 18 ids.
  {
    const auto kd = build_kdef_algebra(unary(), 1);
    auto pa = std::make_shared<const PairAlgebra>(PairAlgebra::build(contains_a(unary()).morphism(), kd.beta()));
    const auto d = DerivedCategory::build(pa);
    const auto cc = canonical_flat_cover(d.category());
    const auto keep = cc.reduce(d.category());
    const FlatSubsetAlgebra flat(keep.size());
    const auto cov = cc.project(keep);
    o.require(verify_covering(d.category(), flat, cov).ok(), "(a) canonical cover does not verify");
    const auto tm = dct_forward(d, flat, cov);
    const Wreath<FlatSubsetAlgebra> target(flat, pa->beta().algebra());
    o.require(verify_tm_division(pa->alpha().algebra(), target, tm).ok, "(a) tm-division fails");
    o.detail << "(a) {a}: " << keep.size() << "-id flat cover, division verified; ";
  }
  // (b) and the round trip, over {a} and {a,b}.
  for (const auto& al : {unary(), binary()}) {
    const auto w = lt_wreath_recognizer(al, 1, lt_spec_contains("a"));
    o.require(w.pi_ok, "(b) wreath letters do not project onto beta_1");
    auto pa = std::make_shared<const PairAlgebra>(PairAlgebra::build(contains_a(al).morphism(), w.kdef.beta()));
    const auto d = DerivedCategory::build(pa);
    const auto cov = dct_backward(d, w.flat, w.letters);
    o.require(verify_covering(d.category(), w.flat, cov).ok(), "(b) covering fails");
    const auto tm = dct_forward(d, w.flat, cov);
    const Wreath<FlatSubsetAlgebra> target(w.flat, pa->beta().algebra());
    o.require(verify_tm_division(pa->alpha().algebra(), target, tm).ok, "(b)->(a) round trip fails");
    o.detail << "(b) |A|=" << al.size() << ": " << d.category().num_harrows() << " half-arrows, "
             << d.category().num_arrows() << " arrows, covering and round trip verified; ";
  }
  return o;
}

// ---------------------------------------------------------------- 7, 8

struct Curated {
  std::string name;
  Recognizer r;
};

std::vector<Curated> curated() {
  return {{"contains-a", contains_a()},
          {"contains-a (3 states)", contains_a_redundant()},
          {"parity", parity()},
          {"a has b child", a_has_b_child()},
          {"empty", empty_language()},
          {"universal", universal_language()}};
}

Outcome verdicts() {
  Outcome o;
  for (const auto& [name, r] : curated()) {
    const auto v = decide_lt(r);
    o.detail << name << "=" << to_string(v.kind);
    if (v.kind == LtVerdict::Kind::LT) o.detail << "(<=" << v.level << ")";
    if (v.kind == LtVerdict::Kind::NotLT) o.detail << "(" << v.reason << ")";
    o.detail << " ";
    o.require(reverify_verdict(r, v), name + ": evidence does not re-verify");
    if (name == "parity") {
      o.require(v.kind == LtVerdict::Kind::NotLT && v.reason == "nonidempotent", "parity verdict");
    } else {
      o.require(v.kind == LtVerdict::Kind::LT, name + " verdict");
      if (name == "a has b child") o.require(v.level <= 3, "child level");
    }
  }
  return o;
}

Outcome oracle_consistency() {
  Outcome o;
  for (const auto& [name, r] : curated()) {
    const auto v = decide_lt(r);
    if (v.kind != LtVerdict::Kind::LT) continue;
    o.require(!oracle_k_lt(r, v.level, 6).has_value(), name + ": oracle witness at level " + std::to_string(v.level));
  }
  const auto w = oracle_k_lt(parity(), 1, 4);
  o.require(w.has_value(), "no parity witness within 4 nodes");
  if (w) {
    TypeUniverse u;
    o.require(equiv_k(u, w->s, w->t, 1) && parity().accepts(w->s) != parity().accepts(w->t), "parity witness invalid");
    o.detail << "parity witness " << render(w->s) << " vs " << render(w->t);
  }
  return o;
}

// ---------------------------------------------------------------- 9

Outcome bridge() {
  Outcome o;
  for (const auto& [name, r] : std::vector<Curated>{{"contains-a", contains_a()}, {"parity", parity()}})
    for (std::size_t k = 0; k <= 1; ++k) {
      const LtProblem p(r);
      const auto c = check_lt_identities_at_k(p, k, RelationStrategy::Exact, RelationStrategy::Exact);
      const auto kd = build_kdef_algebra(r.alphabet(), k, p.universe_ptr());
      auto pa = std::make_shared<const PairAlgebra>(PairAlgebra::build(p.alpha().morphism(), kd.beta()));
      const bool cat = check_identities(DerivedCategory::build(pa).category()).all_hold();
      o.require(c.outcome != IdentityOutcome::Inconclusive, name + " inconclusive");
      o.require((c.outcome == IdentityOutcome::Holds) == cat, name + " k=" + std::to_string(k) + " disagrees");
      o.detail << name << " k=" << k << ": " << to_string(c.outcome) << "/" << (cat ? "holds" : "violated") << "; ";
    }
  return o;
}

// ---------------------------------------------------------------- 10

template <class Rel>
std::set<std::pair<Elem, Elem>> keys(const Rel& r) {
  std::set<std::pair<Elem, Elem>> out;
  for (const auto& [k, v] : r.pairs) out.insert(k);
  return out;
}

Outcome strategies() {
  Outcome o;
  struct Case {
    std::string name;
    Recognizer r;
    std::size_t max_k;
  };
  const std::vector<Case> cases{{"contains-a {a,b}", contains_a(), 1},
                                {"a has b child", a_has_b_child(), 1},
                                {"universal {a,b}", universal_language(), 1},
                                {"contains-a {a}", contains_a(unary()), 3},
                                {"universal {a}", universal_language(unary()), 3}};
  std::size_t compared = 0, sampled = 0, by_terms = 0;
  for (const auto& [name, r, max_k] : cases) {
    const LtProblem p(r);
    const auto& m = p.alpha().morphism();
    for (std::size_t k = 0; k <= max_k; ++k) {
      const std::string at = name + " k=" + std::to_string(k);
      std::set<std::pair<Elem, Elem>> exact_r;
      try {
        exact_r = keys(relation_r(p, k, RelationStrategy::Exact));
      } catch (const BudgetExceeded&) {
        o.require(false, at + ": exact R over budget");
        continue;
      }
      o.require(keys(relation_r(p, k, RelationStrategy::Saturation)) == exact_r, at + ": saturation differs");
      ++compared;
      // Exact S needs the vertical k-definite closure, out of reach at k = 3.
      // There a sampled pair is checked through its realizing terms, which
      // places it in the realizable relation directly.
      std::optional<std::set<std::pair<Elem, Elem>>> exact_s;
      try {
        exact_s = keys(relation_s(p, k, RelationStrategy::Exact));
      } catch (const BudgetExceeded&) {
      }
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SampleOptions so;
        so.seed = seed;
        const auto sr = keys(relation_r(p, k, RelationStrategy::Sampled, 200'000, so));
        o.require(std::includes(exact_r.begin(), exact_r.end(), sr.begin(), sr.end()), at + ": sampled R not a subset");
        const auto ss = relation_s(p, k, RelationStrategy::Sampled, 200'000, so);
        if (exact_s) {
          const auto sk = keys(ss);
          o.require(std::includes(exact_s->begin(), exact_s->end(), sk.begin(), sk.end()), at + ": sampled S not a subset");
        } else {
          for (const auto& [key, terms] : ss.pairs) {
            const auto& [f, c] = terms;
            o.require(m.eval(f) == key.first && m.eval(c) == key.second &&
                          root_types(p.universe(), apply_context(f, c), k) == root_types(p.universe(), f, k),
                      at + ": sampled S pair not realized");
          }
          ++by_terms;
        }
        ++sampled;
      }
    }
  }
  o.detail << compared << " exact/saturation comparisons, " << sampled << " seeded sampled runs (" << by_terms
           << " with S checked on realizing terms)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"free algebra laws", free_algebra_laws},
      {"algebra validation", algebra_validation},
      {"syntactic algebra", syntactic},
      {"category soundness chain", soundness_chain},
      {"global idempotent-commutativity by covering", global_ic},
      {"derived category theorem, both directions", derived_category_theorem},
      {"decision verdicts", verdicts},
      {"oracle consistency", oracle_consistency},
      {"identities agree with derived categories", bridge},
      {"relation strategies agree", strategies},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s) [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}

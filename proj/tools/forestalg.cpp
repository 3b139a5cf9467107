// forestalg: command line front end.  Every subcommand builds one JSON
// report; --json prints it verbatim, otherwise it is shown as key: value
// lines.  Exit codes: 0 done, 1 property refuted, 2 bad input, 3 budget.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "forest/category.hpp"
#include "forest/decide.hpp"
#include "forest/derived.hpp"
#include "forest/json_io.hpp"
#include "forest/kdefinite.hpp"
#include "forest/syntactic.hpp"

using namespace forest;

namespace {

struct Global {
  bool json = false;
  bool timings = false;
  std::uint64_t seed = 0;
};

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json file_input(const std::string& path) { return {{"path", path}, {"fnv1a", fnv1a(slurp(path))}}; }

Recognizer load_recognizer(const std::string& path, Json& inputs) {
  inputs.push_back(file_input(path));
  return recognizer_from_json(read_json_file(path));
}

Alphabet parse_alphabet(const std::string& csv) {
  std::vector<std::string> labels;
  std::stringstream ss(csv);
  for (std::string l; std::getline(ss, l, ',');)
    if (!l.empty()) labels.push_back(l);
  if (labels.empty()) throw InputError("empty alphabet");
  try {
    return Alphabet(labels);
  } catch (const std::exception& e) {
    throw InputError(std::string("alphabet: ") + e.what());
  }
}

LtSpec parse_spec(const std::string& s) {
  if (s == "none") return lt_spec_none();
  if (s == "all") return lt_spec_all();
  if (s.rfind("contains:", 0) == 0) return lt_spec_contains(s.substr(9));
  if (s.rfind("child:", 0) == 0) {
    const auto rest = s.substr(6);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw InputError("child spec is child:PARENT,CHILD");
    return lt_spec_child(rest.substr(0, comma), rest.substr(comma + 1));
  }
  throw InputError("unknown spec " + s + " (none, all, contains:L, child:P,C)");
}

Json failure_json(const std::optional<IdentityFailure>& f) {
  if (!f) return "holds";
  return {{"identity", f->identity}, {"ids", f->ids}, {"detail", f->detail}};
}

void print_text(const Json& report, std::ostream& os) {
  for (const auto& [key, value] : report.items()) {
    if (value.is_string())
      os << key << ": " << value.get<std::string>() << "\n";
    else if (value.is_object() && !value.empty()) {
      os << key << ":\n";
      for (const auto& [k2, v2] : value.items())
        os << "  " << k2 << ": " << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << "\n";
    } else
      os << key << ": " << value.dump() << "\n";
  }
}

// ---------------------------------------------------------------- commands

int cmd_show(const std::string& term, bool context, Json& r) {
  if (context) {
    const Context p = parse_context(term);
    r["context"] = render(p);
    return 0;
  }
  const Forest f = parse_forest(term);
  r["forest"] = render(f);
  r["nodes"] = f.size();
  r["depth"] = depth(f);
  return 0;
}

int cmd_eval(const std::string& rec_path, const std::string& term, bool context, Json& r) {
  const Recognizer rec = load_recognizer(rec_path, r["inputs"]);
  if (context) {
    const Context p = parse_context(term, rec.alphabet());
    r["context"] = render(p);
    r["value"] = rec.morphism().eval(p);
    return 0;
  }
  const Forest f = parse_forest(term, rec.alphabet());
  r["forest"] = render(f);
  const Elem v = rec.morphism().eval(f);
  r["value"] = v;
  r["accept"] = rec.accepting(v);
  return 0;
}

int cmd_syntactic(const std::string& rec_path, const std::string& out, Json& r) {
  const Recognizer rec = load_recognizer(rec_path, r["inputs"]);
  const auto syn = SyntacticAlgebra::of(rec);
  r["input_h"] = rec.algebra().h_size();
  r["input_v"] = rec.algebra().v_size();
  r["h_size"] = syn.algebra().h_size();
  r["v_size"] = syn.algebra().v_size();
  r["h_quot"] = syn.h_quot();
  r["v_quot"] = syn.v_quot();
  Json terms = Json::array();
  for (Elem h = 0; h < syn.algebra().h_size(); ++h) terms.push_back(render(syn.h_term(h)));
  r["h_terms"] = terms;
  terms = Json::array();
  for (Elem v = 0; v < syn.algebra().v_size(); ++v) terms.push_back(render(syn.v_term(v)));
  r["v_terms"] = terms;
  r["recognizer"] = to_json(syn.recognizer());
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    os << to_json(syn.recognizer()).dump(2) << "\n";
  }
  return 0;
}

int cmd_kdef(const std::string& alphabet_csv, std::size_t k, const std::vector<std::string>& terms,
             std::size_t budget, Json& r) {
  const Alphabet alphabet = parse_alphabet(alphabet_csv);
  auto universe = std::make_shared<TypeUniverse>();
  r["alphabet"] = alphabet.labels();
  r["k"] = k;
  if (!terms.empty()) {
    // Type sets of concrete forests only; the algebra may be far too large.
    Json out = Json::array();
    for (const auto& t : terms) {
      const Forest f = parse_forest(t, alphabet);
      out.push_back({{"forest", render(f)},
                     {"root_types", render_set(*universe, root_types(*universe, f, k))},
                     {"node_types", render_set(*universe, node_types(*universe, f, k))}});
    }
    r["terms"] = out;
    return 0;
  }
  ClosureBudget b;
  b.max_h = budget;
  b.max_v = budget;
  const auto kd = build_kdef_algebra(alphabet, k, universe, b);
  r["h_size"] = kd.algebra().h_size();
  r["v_size"] = kd.algebra().v_size();
  r["algebra"] = to_json(kd.algebra());
  r["letters"] = kd.beta().letters();
  Json sets = Json::array();
  for (const auto& s : kd.h_sets()) sets.push_back(render_set(*universe, s));
  r["types"] = sets;
  return 0;
}

int cmd_lt_make(const std::string& alphabet_csv, std::size_t k, const std::string& spec, bool wreath,
                const std::string& out, Json& r) {
  const Alphabet alphabet = parse_alphabet(alphabet_csv);
  const LtSpec s = parse_spec(spec);
  r["alphabet"] = alphabet.labels();
  r["k"] = k;
  r["spec"] = spec;
  Json rec;
  if (wreath) {
    const auto w = lt_wreath_recognizer(alphabet, k, s);
    r["construction"] = "wreath";
    r["node_types"] = w.types.size();
    r["pi_check"] = w.pi_ok;
    rec = to_json(w.recognizer);
  } else {
    r["construction"] = "direct";
    rec = to_json(lt_recognizer(alphabet, k, s).recognizer);
  }
  r["recognizer"] = rec;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw InputError("cannot write " + out);
    os << rec.dump(2) << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& rec_path, std::size_t k, std::size_t max_nodes, Json& r) {
  if (k == 0) throw InputError("--k must be at least 1");
  const Recognizer rec = load_recognizer(rec_path, r["inputs"]);
  r["k"] = k;
  r["max_nodes"] = max_nodes;
  const auto w = oracle_k_lt(rec, k, max_nodes);
  if (!w) {
    r["witness"] = nullptr;
    return 0;
  }
  r["witness"] = {{"s", render(w->s)},
                  {"t", render(w->t)},
                  {"accept_s", rec.accepts(w->s)},
                  {"accept_t", rec.accepts(w->t)}};
  return 1;
}

std::size_t parse_beta(const std::string& beta) {
  if (beta.rfind("kdef:", 0) != 0) throw InputError("--beta must be kdef:K");
  try {
    return std::stoul(beta.substr(5));
  } catch (const std::exception&) {
    throw InputError("--beta must be kdef:K");
  }
}

int cmd_derived(const std::string& alpha_path, const std::string& beta, Json& r) {
  const Recognizer rec = load_recognizer(alpha_path, r["inputs"]);
  const std::size_t k = parse_beta(beta);
  const auto kd = build_kdef_algebra(rec.alphabet(), k);
  auto pa = std::make_shared<const PairAlgebra>(PairAlgebra::build(rec.morphism(), kd.beta()));
  const auto d = DerivedCategory::build(pa);
  const auto& c = d.category();
  r["k"] = k;
  r["objects"] = c.num_objects();
  r["halfarrows"] = c.num_harrows();
  r["arrows"] = c.num_arrows();
  r["category"] = to_json(c);
  Json keys = Json::object();
  Json objs = Json::array();
  for (Elem x = 0; x < c.num_objects(); ++x) objs.push_back(render_set(kd.universe(), kd.h_sets()[d.object_value(x)]));
  keys["objects"] = objs;
  Json hs = Json::array();
  for (Elem h = 0; h < c.num_harrows(); ++h)
    hs.push_back({{"alpha", d.harrow_pair(h).first}, {"beta", d.harrow_pair(h).second}, {"term", render(pa->h_term(h))}});
  keys["halfarrows"] = hs;
  Json as = Json::array();
  for (Elem u = 0; u < c.num_arrows(); ++u) {
    const auto& key = d.key(u);
    as.push_back({{"start", key.start}, {"end", key.end}, {"action", key.action}});
  }
  keys["arrows"] = as;
  r["keys"] = keys;
  return 0;
}

int cmd_check_ic(const std::string& path, std::size_t bound, bool cover, Json& r) {
  r["inputs"].push_back(file_input(path));
  const ForestCategory c = ForestCategory::from_raw(category_from_json(read_json_file(path)));
  const auto ir = check_identities(c);
  r["objects_idempotent_commutative"] = ir.precondition;
  r["loop_removal"] = failure_json(ir.loop_removal);
  r["horizontal_absorption"] = failure_json(ir.horizontal_absorption);
  r["horizontal_idempotence"] = failure_json(ir.horizontal_idempotence);
  const auto dr = check_derived_identities(c);
  r["derived_identities"] = {{"vertical_idempotence", failure_json(dr.vertical_idempotence)},
                             {"horizontal_swap", failure_json(dr.horizontal_swap)},
                             {"nested_insertion_variant", failure_json(dr.nested_insertion_variant)},
                             {"horizontal_transfer", failure_json(dr.horizontal_transfer)}};
  bool refuted = !ir.precondition || !ir.all_hold();
  if (bound > 0) {
    const auto w = brute_force_global_ic(c, bound);
    r["brute_force_bound"] = bound;
    if (w) {
      r["brute_force_witness"] = {{"d1", render(w->d1)},
                                  {"d2", render(w->d2)},
                                  {"value1", eval_diagram(c, w->d1)},
                                  {"value2", eval_diagram(c, w->d2)}};
      refuted = true;
    } else {
      r["brute_force_witness"] = nullptr;
    }
  }
  if (cover) {
    const auto cc = canonical_flat_cover(c);
    const auto inj = cc.injectivity(c);
    Json cj = {{"universe", cc.universe}, {"injective", inj.ok()}};
    if (inj.ok()) {
      const auto keep = cc.reduce(c);
      FlatSubsetAlgebra flat(keep.size());
      const auto rep = verify_covering(c, flat, cc.project(keep));
      cj["reduced_universe"] = keep.size();
      cj["division_verified"] = rep.ok();
      if (!rep.ok()) refuted = true;
    } else {
      cj["failure"] = inj.failures.front();
      refuted = true;
    }
    r["canonical_cover"] = cj;
  }
  r["verdict"] = refuted ? "refuted" : "globally idempotent and commutative (up to the checks run)";
  return refuted ? 1 : 0;
}

Json witness_json(const Recognizer& input, const SyntacticAlgebra& syn, const IdentityWitness& w, std::size_t k_star) {
  Json j;
  Forest lhs, rhs;
  if (w.identity == 1) {
    j = {{"identity", "(r+s)t + ru = st + ru"},
         {"r", render(w.r)},
         {"s", render(w.s)},
         {"t", render(w.t)},
         {"u", render(w.u)},
         {"side_condition", "root " + std::to_string(k_star) + "-types of r within those of s"}};
    lhs = add(apply_context(add(w.r, w.s), w.t), apply_context(w.r, w.u));
    rhs = add(apply_context(w.s, w.t), apply_context(w.r, w.u));
  } else {
    j = {{"identity", "rpq + rpq' = rq + rpq'"},
         {"r", render(w.r)},
         {"p", render(w.p)},
         {"q", render(w.q)},
         {"q'", render(w.q2)},
         {"side_condition", "root " + std::to_string(k_star) + "-types of rp equal those of r"}};
    const Forest rp = apply_context(w.r, w.p);
    lhs = add(apply_context(rp, w.q), apply_context(rp, w.q2));
    rhs = add(apply_context(w.r, w.q), apply_context(rp, w.q2));
  }
  j["lhs"] = render(lhs);
  j["rhs"] = render(rhs);
  const Elem v = syn.distinguishing(w.lhs, w.rhs);
  if (v != kNone) {
    const Context ctx = syn.v_term(v);
    j["separating_context"] = render(ctx);
    j["lhs_in_context"] = render(apply_context(lhs, ctx));
    j["rhs_in_context"] = render(apply_context(rhs, ctx));
    j["accept_lhs_in_context"] = input.accepts(apply_context(lhs, ctx));
    j["accept_rhs_in_context"] = input.accepts(apply_context(rhs, ctx));
  }
  return j;
}

int cmd_decide(const std::string& path, const DecideOptions& o, Json& r) {
  const Recognizer rec = load_recognizer(path, r["inputs"]);
  r["options"] = {{"max_k", o.max_k},
                  {"pair_budget", o.pair_budget},
                  {"term_bound", o.sample.term_bound},
                  {"random_terms", o.sample.random_terms},
                  {"random_size", o.sample.random_size},
                  {"seed", o.sample.seed}};
  const auto v = decide_lt(rec, o);
  if (!reverify_verdict(rec, v)) throw std::logic_error("verdict evidence failed to re-verify");
  const auto syn = SyntacticAlgebra::of(rec);
  r["verdict"] = to_string(v.kind);
  if (v.kind == LtVerdict::Kind::LT) r["level_at_most"] = v.level;
  if (!v.reason.empty()) r["reason"] = v.reason;
  r["k_star"] = v.k_star;
  r["syntactic"] = {{"h_size", v.syntactic_h}, {"v_size", v.syntactic_v}};
  if (v.nonidempotent_term) {
    const Forest& s = *v.nonidempotent_term;
    Json e = {{"s", render(s)}, {"s+s", render(add(s, s))}};
    const auto& m = syn.recognizer().morphism();
    const Elem sep = syn.distinguishing(m.eval(s), m.eval(add(s, s)));
    if (sep != kNone) {
      const Context ctx = syn.v_term(sep);
      e["separating_context"] = render(ctx);
      e["accept_s_in_context"] = rec.accepts(apply_context(s, ctx));
      e["accept_s+s_in_context"] = rec.accepts(apply_context(add(s, s), ctx));
    }
    r["evidence"] = e;
  }
  if (v.witness) r["evidence"] = witness_json(rec, syn, *v.witness, v.k_star);
  Json tr = Json::array();
  for (const auto& lo : v.transcript) {
    Json t = {{"k", lo.k},
              {"outcome", to_string(lo.check.outcome)},
              {"r_strategy", to_string(lo.check.r_strategy)},
              {"r_size", lo.check.r_size},
              {"s_strategy", to_string(lo.check.s_strategy)},
              {"s_size", lo.check.s_size}};
    if (!lo.note.empty()) t["note"] = lo.note;
    tr.push_back(t);
  }
  r["transcript"] = tr;
  r["reverified"] = true;
  switch (v.kind) {
    case LtVerdict::Kind::LT: return 0;
    case LtVerdict::Kind::NotLT: return 1;
    case LtVerdict::Kind::Unknown: return 3;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forest algebra toolkit: terms, recognizers, forest categories, local testability"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json, "Print the report as JSON");
  app.add_flag("--timings", g.timings, "Add wall-clock timings to the report (breaks byte-identity)");
  app.add_option("--seed", g.seed, "Seed for randomized search")->default_val(0);

  std::string term, rec_path, alphabet = "a,b", spec, out, beta;
  std::vector<std::string> terms;
  bool context = false, wreath = false, cover = false;
  std::size_t k = 1, max_nodes = 6, bound = 0, budget = 200'000;
  DecideOptions dopt;

  auto* show = app.add_subcommand("show", "Parse a forest or context and print its canonical form");
  show->add_option("term", term, "Term")->required();
  show->add_flag("--context", context, "Parse as a context");

  auto* eval = app.add_subcommand("eval", "Evaluate a term under a recognizer");
  eval->add_option("--rec", rec_path, "Recognizer JSON")->required();
  eval->add_option("term", term, "Term")->required();
  eval->add_flag("--context", context, "Parse as a context");

  auto* syntactic = app.add_subcommand("syntactic", "Syntactic forest algebra of a recognizer");
  syntactic->add_option("rec", rec_path, "Recognizer JSON")->required();
  syntactic->add_option("--out", out, "Write the syntactic recognizer here");

  auto* kdef = app.add_subcommand("kdef", "Reachable k-definite algebra, or type sets of given forests");
  kdef->add_option("--alphabet", alphabet, "Comma separated labels")->default_val("a,b");
  kdef->add_option("--k", k, "Level")->default_val(1);
  kdef->add_option("--term", terms, "Report root and node k-types of this forest instead");
  kdef->add_option("--budget", budget, "Element budget")->default_val(200'000);

  auto* lt_make = app.add_subcommand("lt-make", "Recognizer for a union of ==_k classes");
  lt_make->add_option("--alphabet", alphabet, "Comma separated labels")->default_val("a,b");
  lt_make->add_option("--k", k, "Level")->default_val(1);
  lt_make->add_option("--spec", spec, "none | all | contains:L | child:P,C")->required();
  lt_make->add_flag("--wreath", wreath, "Build through the wreath product with (H_k,V_k)");
  lt_make->add_option("--out", out, "Write the recognizer here");

  auto* oracle = app.add_subcommand("oracle-lt", "Search for s ==_k t accepted differently");
  oracle->add_option("rec", rec_path, "Recognizer JSON")->required();
  oracle->add_option("--k", k, "Level (>= 1)")->default_val(1);
  oracle->add_option("--max-nodes", max_nodes, "Largest forest size")->default_val(6);

  auto* derived = app.add_subcommand("derived", "Derived forest category of (alpha, beta_k)");
  derived->add_option("--alpha", rec_path, "Recognizer JSON")->required();
  derived->add_option("--beta", beta, "kdef:K")->required();

  auto* check_ic = app.add_subcommand("check-ic", "Identities of global idempotence and commutativity");
  check_ic->add_option("category", rec_path, "Category JSON")->required();
  check_ic->add_option("--bound", bound, "Brute-force diagram bound (0 = off)")->default_val(0);
  check_ic->add_flag("--cover", cover, "Also build and verify the canonical flat cover");

  auto* decide = app.add_subcommand("decide-lt", "Decide local testability");
  decide->add_option("rec", rec_path, "Recognizer JSON")->required();
  decide->add_option("--max-k", dopt.max_k, "Largest k tried")->default_val(3);
  decide->add_option("--pair-budget", dopt.pair_budget, "Closure budget for the relations")->default_val(200'000);
  decide->add_option("--term-bound", dopt.sample.term_bound, "Exhaustive term size for sampling")->default_val(3);

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  dopt.sample.seed = g.seed;

  Json report;
  const auto* sub = app.get_subcommands().front();
  report["command"] = sub->get_name();
  report["inputs"] = Json::array();
  report["seed"] = g.seed;
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (sub == show) code = cmd_show(term, context, report);
    else if (sub == eval) code = cmd_eval(rec_path, term, context, report);
    else if (sub == syntactic) code = cmd_syntactic(rec_path, out, report);
    else if (sub == kdef) code = cmd_kdef(alphabet, k, terms, budget, report);
    else if (sub == lt_make) code = cmd_lt_make(alphabet, k, spec, wreath, out, report);
    else if (sub == oracle) code = cmd_oracle(rec_path, k, max_nodes, report);
    else if (sub == derived) code = cmd_derived(rec_path, beta, report);
    else if (sub == check_ic) code = cmd_check_ic(rec_path, bound, cover, report);
    else if (sub == decide) code = cmd_decide(rec_path, dopt, report);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    report["verdict"] = "Unknown";
    report["budget"] = {{"required", e.required()}, {"limit", e.budget()}, {"message", e.what()}};
    code = 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const AlgebraError& e) {
    std::cerr << "invalid algebra: " << e.what() << "\n";
    return 2;
  } catch (const CategoryError& e) {
    std::cerr << "invalid category: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  }
  if (g.timings)
    report["timings"] = {
        {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()}};
  report["exit_code"] = code;
  if (g.json)
    std::cout << report.dump(2) << "\n";
  else
    print_text(report, std::cout);
  return code;
}

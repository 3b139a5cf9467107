#include "forest/json_io.hpp"

#include <fstream>

namespace forest {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Elem index(const Json& j, std::size_t bound, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0 || static_cast<std::size_t>(j.get<long long>()) >= bound)
    throw InputError(what + ": expected an index below " + std::to_string(bound));
  return static_cast<Elem>(j.get<long long>());
}

std::size_t size_of(const Json& j, const char* key) {
  const Json& s = field(j, key);
  if (!s.is_number_integer() || s.get<long long>() <= 0) throw InputError(std::string(key) + " must be positive");
  return static_cast<std::size_t>(s.get<long long>());
}

std::vector<Elem> matrix(const Json& j, std::size_t rows, std::size_t cols, std::size_t bound,
                         const std::string& what) {
  if (!j.is_array() || j.size() != rows) throw InputError(what + ": expected " + std::to_string(rows) + " rows");
  std::vector<Elem> out;
  out.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols)
      throw InputError(what + ": expected rows of length " + std::to_string(cols));
    for (const auto& x : row) out.push_back(index(x, bound, what));
  }
  return out;
}

Json rows(const std::vector<Elem>& flat, std::size_t cols) {
  Json out = Json::array();
  for (std::size_t i = 0; i < flat.size(); i += cols)
    out.push_back(std::vector<Elem>(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                    flat.begin() + static_cast<std::ptrdiff_t>(i + cols)));
  return out;
}

MonoidTable monoid_from_json(const Json& j, const std::string& what) {
  MonoidTable m;
  m.size = size_of(j, "size");
  m.op = matrix(field(j, "add"), m.size, m.size, m.size, what + ".add");
  m.identity = index(field(j, "zero"), m.size, what + ".zero");
  return m;
}

Json monoid_to_json(const MonoidTable& m) {
  Json j;
  j["size"] = m.size;
  j["add"] = rows(m.op, m.size);
  j["zero"] = m.identity;
  return j;
}

std::vector<std::tuple<Elem, Elem, Elem>> triples(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of triples");
  std::vector<std::tuple<Elem, Elem, Elem>> out;
  const auto big = static_cast<std::size_t>(kNone);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw InputError(what + ": expected triples");
    out.emplace_back(index(t[0], big, what), index(t[1], big, what), index(t[2], big, what));
  }
  return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

AlgebraTables tables_from_json(const Json& j) {
  AlgebraTables t;
  const Json& h = field(j, "h");
  const Json& v = field(j, "v");
  t.h_size = size_of(h, "size");
  t.add = matrix(field(h, "add"), t.h_size, t.h_size, t.h_size, "h.add");
  t.zero = index(field(h, "zero"), t.h_size, "h.zero");
  t.v_size = size_of(v, "size");
  t.mul = matrix(field(v, "mul"), t.v_size, t.v_size, t.v_size, "v.mul");
  t.one = index(field(v, "one"), t.v_size, "v.one");
  t.act = matrix(field(j, "act"), t.h_size, t.v_size, t.h_size, "act");
  if (j.contains("ins")) t.ins = matrix(j.at("ins"), t.v_size, t.h_size, t.v_size, "ins");
  return t;
}

Json to_json(const FiniteForestAlgebra& a) {
  const auto& t = a.tables();
  Json j;
  j["h"] = {{"size", t.h_size}, {"add", rows(t.add, t.h_size)}, {"zero", t.zero}};
  j["v"] = {{"size", t.v_size}, {"mul", rows(t.mul, t.v_size)}, {"one", t.one}};
  j["act"] = rows(t.act, t.v_size);
  if (t.ins) j["ins"] = rows(*t.ins, t.h_size);
  return j;
}

Recognizer recognizer_from_json(const Json& j) {
  auto alg = std::make_shared<const FiniteForestAlgebra>(FiniteForestAlgebra::from_tables(tables_from_json(j)));
  const Json& labels = field(j, "alphabet");
  if (!labels.is_array() || labels.empty()) throw InputError("alphabet must be a nonempty array");
  std::vector<std::string> names;
  for (const auto& l : labels) {
    if (!l.is_string()) throw InputError("alphabet entries must be strings");
    names.push_back(l.get<std::string>());
  }
  Alphabet alphabet;
  try {
    alphabet = Alphabet(names);
  } catch (const std::exception& e) {
    throw InputError(std::string("alphabet: ") + e.what());
  }
  const Json& lj = field(j, "letters");
  if (!lj.is_object()) throw InputError("letters must map labels to vertical elements");
  std::vector<Elem> letters(alphabet.size(), kNone);
  for (const auto& [label, v] : lj.items()) {
    if (!alphabet.contains(label)) throw InputError("letters: unknown label " + label);
    letters[alphabet.index_of(label)] = index(v, alg->v_size(), "letters." + label);
  }
  for (std::size_t i = 0; i < letters.size(); ++i)
    if (letters[i] == kNone) throw InputError("letters: no image for " + alphabet[i]);
  std::vector<bool> accept(alg->h_size(), false);
  const Json& aj = field(j, "accept");
  if (!aj.is_array()) throw InputError("accept must be an array");
  for (const auto& h : aj) accept[index(h, alg->h_size(), "accept")] = true;
  return Recognizer(Morphism(alg, alphabet, letters), accept);
}

Json to_json(const Recognizer& r) {
  Json j = to_json(r.algebra());
  j["alphabet"] = r.alphabet().labels();
  Json letters = Json::object();
  for (std::size_t i = 0; i < r.alphabet().size(); ++i) letters[r.alphabet()[i]] = r.morphism().letters()[i];
  j["letters"] = letters;
  Json accept = Json::array();
  for (Elem h = 0; h < r.accept().size(); ++h)
    if (r.accept()[h]) accept.push_back(h);
  j["accept"] = accept;
  return j;
}

RawCategory category_from_json(const Json& j) {
  RawCategory raw;
  raw.objects = monoid_from_json(field(j, "objects"), "objects");
  const Json& hj = field(j, "halfarrows");
  raw.harrows = monoid_from_json(hj, "halfarrows");
  const Json& ends = field(hj, "end");
  if (!ends.is_array() || ends.size() != raw.harrows.size)
    throw InputError("halfarrows.end: one object per half-arrow is required");
  for (const auto& e : ends) raw.harrow_end.push_back(index(e, raw.objects.size, "halfarrows.end"));
  const Json& aj = field(j, "arrows");
  if (!aj.is_array()) throw InputError("arrows must be an array");
  for (const auto& a : aj)
    raw.arrows.emplace_back(index(field(a, "start"), raw.objects.size, "arrows.start"),
                            index(field(a, "end"), raw.objects.size, "arrows.end"));
  const Json& ij = field(j, "identity");
  if (!ij.is_array() || ij.size() != raw.objects.size) throw InputError("identity: one arrow per object is required");
  for (const auto& u : ij) raw.identity.push_back(index(u, raw.arrows.size(), "identity"));
  raw.comp = triples(field(j, "comp"), "comp");
  raw.act = triples(field(j, "act"), "act");
  raw.ins = triples(field(j, "ins"), "ins");
  return raw;
}

Json to_json(const ForestCategory& c) {
  const RawCategory& raw = c.raw();
  Json j;
  j["objects"] = monoid_to_json(raw.objects);
  Json h = monoid_to_json(raw.harrows);
  h["end"] = raw.harrow_end;
  j["halfarrows"] = h;
  Json arrows = Json::array();
  for (const auto& [s, e] : raw.arrows) arrows.push_back({{"start", s}, {"end", e}});
  j["arrows"] = arrows;
  j["identity"] = raw.identity;
  auto dump = [](const std::vector<std::tuple<Elem, Elem, Elem>>& ts) {
    Json out = Json::array();
    for (const auto& [a, b, r] : ts) out.push_back({a, b, r});
    return out;
  };
  j["comp"] = dump(raw.comp);
  j["act"] = dump(raw.act);
  j["ins"] = dump(raw.ins);
  return j;
}

}  // namespace forest

#include "forest/syntactic.hpp"

#include <numeric>
#include <unordered_map>

namespace forest {

namespace {

std::vector<Context> letter_terms(const Alphabet& a) {
  std::vector<Context> out;
  out.reserve(a.size());
  for (const auto& l : a.labels()) out.push_back(letter_context(l));
  return out;
}

}  // namespace

MorphismImage MorphismImage::of(const Morphism& m, ClosureBudget budget) {
  budget.horizontal_only = false;
  const auto& target = m.target();
  auto c = generate(target, m.letters(), {}, budget);

  const std::size_t nh0 = target.h_size();
  const std::size_t nv0 = target.v_size();
  if (c.hs.size() == nh0 && c.vs.size() == nv0) {
    MorphismImage img(m);
    img.onto_ = true;
    img.h_orig_.resize(nh0);
    std::iota(img.h_orig_.begin(), img.h_orig_.end(), 0);
    img.h_of_orig_ = img.h_orig_;
    img.v_orig_.resize(nv0);
    std::iota(img.v_orig_.begin(), img.v_orig_.end(), 0);
    img.v_of_orig_ = img.v_orig_;
    img.h_closure_.resize(nh0);
    img.v_closure_.resize(nv0);
    for (Elem h = 0; h < nh0; ++h) img.h_closure_[h] = c.find_h(h);
    for (Elem v = 0; v < nv0; ++v) img.v_closure_[v] = c.find_v(v);
    img.replay_ = std::make_shared<TermReplay>(c, letter_terms(m.alphabet()));
    return img;
  }

  auto mi = materialize(target, c);
  std::vector<Elem> letters;
  for (Elem g : c.v_gen) letters.push_back(mi.v_class[g]);
  auto alg = std::make_shared<const FiniteForestAlgebra>(std::move(mi.algebra));
  MorphismImage img(Morphism(alg, m.alphabet(), std::move(letters)));
  img.h_orig_ = c.hs;
  img.h_closure_.resize(c.hs.size());
  std::iota(img.h_closure_.begin(), img.h_closure_.end(), 0);
  img.h_of_orig_.assign(nh0, kNone);
  for (Elem i = 0; i < c.hs.size(); ++i) img.h_of_orig_[c.hs[i]] = i;
  img.v_closure_ = mi.v_rep;
  for (Elem r : mi.v_rep) img.v_orig_.push_back(c.vs[r]);
  img.v_of_orig_.assign(nv0, kNone);
  for (Elem i = 0; i < c.vs.size(); ++i) img.v_of_orig_[c.vs[i]] = mi.v_class[i];
  img.replay_ = std::make_shared<TermReplay>(c, letter_terms(m.alphabet()));
  return img;
}

Forest MorphismImage::h_term(Elem h) const { return replay_->forest(h_closure_.at(h)); }
Context MorphismImage::v_term(Elem v) const { return replay_->context(v_closure_.at(v)); }

ImageRecognizer surjective_image(const Recognizer& r, ClosureBudget budget) {
  auto img = MorphismImage::of(r.morphism(), budget);
  std::vector<bool> acc(img.algebra().h_size());
  for (Elem h = 0; h < acc.size(); ++h) acc[h] = r.accepting(img.h_orig()[h]);
  Recognizer rec(img.morphism(), std::move(acc));
  return ImageRecognizer{std::move(img), std::move(rec)};
}

SyntacticAlgebra SyntacticAlgebra::of(const Recognizer& r, ClosureBudget budget) {
  auto ir = surjective_image(r, budget);
  const auto& a = ir.recognizer.algebra();
  const std::size_t nh = a.h_size();
  const std::size_t nv = a.v_size();
  const auto& acc = ir.recognizer.accept();

  // h ~ h' iff they agree on every experiment h -> [hv in X].  The image V
  // is closed under composition and contains ins(1, g), so this is already a
  // congruence and no iteration is needed.
  std::vector<Elem> h_class(nh);
  std::vector<Elem> h_rep;
  {
    std::unordered_map<std::vector<bool>, Elem> by_sig;
    std::vector<bool> sig(nv);
    for (Elem h = 0; h < nh; ++h) {
      for (Elem v = 0; v < nv; ++v) sig[v] = acc[a.act(h, v)];
      auto [it, fresh] = by_sig.emplace(sig, static_cast<Elem>(h_rep.size()));
      if (fresh) h_rep.push_back(h);
      h_class[h] = it->second;
    }
  }
  std::vector<Elem> v_class(nv);
  std::vector<Elem> v_rep;
  {
    std::unordered_map<std::vector<Elem>, Elem, Hasher> by_col;
    std::vector<Elem> col(nh);
    for (Elem v = 0; v < nv; ++v) {
      for (Elem h = 0; h < nh; ++h) col[h] = h_class[a.act(h, v)];
      auto [it, fresh] = by_col.emplace(col, static_cast<Elem>(v_rep.size()));
      if (fresh) v_rep.push_back(v);
      v_class[v] = it->second;
    }
  }

  const std::size_t mh = h_rep.size();
  const std::size_t mv = v_rep.size();
  AlgebraTables t;
  t.h_size = mh;
  t.v_size = mv;
  t.zero = h_class[a.zero()];
  t.one = v_class[a.one()];
  t.add.resize(mh * mh);
  for (Elem x = 0; x < mh; ++x)
    for (Elem y = 0; y < mh; ++y) t.add[x * mh + y] = h_class[a.add(h_rep[x], h_rep[y])];
  t.mul.resize(mv * mv);
  for (Elem x = 0; x < mv; ++x)
    for (Elem y = 0; y < mv; ++y) t.mul[x * mv + y] = v_class[a.mul(v_rep[x], v_rep[y])];
  t.act.resize(mh * mv);
  t.ins.emplace(mv * mh);
  for (Elem h = 0; h < mh; ++h)
    for (Elem v = 0; v < mv; ++v) {
      t.act[h * mv + v] = h_class[a.act(h_rep[h], v_rep[v])];
      (*t.ins)[v * mh + h] = v_class[a.ins(v_rep[v], h_rep[h])];
    }
  auto alg = std::make_shared<const FiniteForestAlgebra>(FiniteForestAlgebra::from_tables(std::move(t)));

  std::vector<Elem> letters;
  for (Elem l : ir.recognizer.morphism().letters()) letters.push_back(v_class[l]);
  std::vector<bool> accept(mh);
  for (Elem h = 0; h < mh; ++h) accept[h] = acc[h_rep[h]];

  SyntacticAlgebra s(Recognizer(Morphism(alg, r.alphabet(), std::move(letters)), std::move(accept)),
                     std::move(ir.image));
  s.h_rep_ = std::move(h_rep);
  s.v_rep_ = std::move(v_rep);
  const auto& img = s.image_;
  s.h_quot_.assign(r.algebra().h_size(), kNone);
  for (Elem h = 0; h < s.h_quot_.size(); ++h)
    if (img.h_of_orig()[h] != kNone) s.h_quot_[h] = h_class[img.h_of_orig()[h]];
  s.v_quot_.assign(r.algebra().v_size(), kNone);
  for (Elem v = 0; v < s.v_quot_.size(); ++v)
    if (img.v_of_orig()[v] != kNone) s.v_quot_[v] = v_class[img.v_of_orig()[v]];
  return s;
}

Forest SyntacticAlgebra::h_term(Elem h) const { return image_.h_term(h_rep_.at(h)); }
Context SyntacticAlgebra::v_term(Elem v) const { return image_.v_term(v_rep_.at(v)); }

Elem SyntacticAlgebra::distinguishing(Elem a, Elem b) const {
  const auto& alg = algebra();
  for (Elem v = 0; v < alg.v_size(); ++v)
    if (recognizer_.accepting(alg.act(a, v)) != recognizer_.accepting(alg.act(b, v))) return v;
  return kNone;
}

}  // namespace forest

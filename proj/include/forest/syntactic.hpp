#pragma once

// Reachable images of morphisms and syntactic forest algebras.

#include <memory>
#include <optional>
#include <vector>

#include "forest/algebra.hpp"
#include "forest/closure.hpp"

namespace forest {

/// The image of a morphism from the free algebra, as an explicit algebra,
/// together with concrete terms realizing each element.
class MorphismImage {
 public:
  /// If the morphism is already onto, the target and its indices are kept.
  static MorphismImage of(const Morphism& m, ClosureBudget budget = {});

  const Morphism& morphism() const { return morphism_; }
  const FiniteForestAlgebra& algebra() const { return morphism_.target(); }
  bool onto() const { return onto_; }
  /// Image index -> index in the original target (a representative for V).
  const std::vector<Elem>& h_orig() const { return h_orig_; }
  const std::vector<Elem>& v_orig() const { return v_orig_; }
  /// Original index -> image index, kNone when unreachable.
  const std::vector<Elem>& h_of_orig() const { return h_of_orig_; }
  const std::vector<Elem>& v_of_orig() const { return v_of_orig_; }

  /// A forest evaluating to image element h.
  Forest h_term(Elem h) const;
  /// A context evaluating to image element v.
  Context v_term(Elem v) const;

 private:
  MorphismImage(Morphism m) : morphism_(std::move(m)) {}
  Morphism morphism_;
  bool onto_ = false;
  std::vector<Elem> h_orig_, v_orig_, h_of_orig_, v_of_orig_;
  std::vector<Elem> h_closure_, v_closure_;  // image index -> closure index
  std::shared_ptr<TermReplay> replay_;
};

struct ImageRecognizer {
  MorphismImage image;
  Recognizer recognizer;
};
ImageRecognizer surjective_image(const Recognizer& r, ClosureBudget budget = {});

class SyntacticAlgebra {
 public:
  static SyntacticAlgebra of(const Recognizer& r, ClosureBudget budget = {});

  const Recognizer& recognizer() const { return recognizer_; }
  const FiniteForestAlgebra& algebra() const { return recognizer_.algebra(); }
  /// Original H/V index -> syntactic index (kNone for unreachable elements).
  const std::vector<Elem>& h_quot() const { return h_quot_; }
  const std::vector<Elem>& v_quot() const { return v_quot_; }

  Forest h_term(Elem h) const;
  Context v_term(Elem v) const;
  /// A syntactic vertical element v with exactly one of a.v, b.v accepting;
  /// kNone if a == b.
  Elem distinguishing(Elem a, Elem b) const;

 private:
  SyntacticAlgebra(Recognizer r, MorphismImage img)
      : recognizer_(std::move(r)), image_(std::move(img)) {}
  Recognizer recognizer_;
  MorphismImage image_;
  std::vector<Elem> h_quot_, v_quot_;
  std::vector<Elem> h_rep_, v_rep_;  // syntactic index -> image index
};

}  // namespace forest

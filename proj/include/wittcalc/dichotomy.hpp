#pragma once

// Parity dichotomy for twists on the blow-up and the recipe compiler that
// turns it into explicit compositions of pull-backs, periodicity
// isomorphisms, push-forwards and devissage.

#include "wittcalc/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wittcalc {

/// Reference to a (coherent when the twist is a DualizingClass) shifted Witt
/// group W^degree(scheme, twist), optionally with supports.
struct WittRef {
  SchemeNode scheme;
  std::int64_t degree = 0;
  std::variant<PicElement, DualizingClass> twist;
  std::optional<SchemeNode> support;

  static WittRef locally_free(SchemeNode scheme, std::int64_t degree, PicElement twist,
                              std::optional<SchemeNode> support = std::nullopt);
  static WittRef coherent(std::int64_t degree, DualizingClass twist,
                          std::optional<SchemeNode> support = std::nullopt);

  bool is_coherent() const { return std::holds_alternative<DualizingClass>(twist); }
  const PicElement& bundle() const;            // Pic twist or the dualizing class bundle
  const DualizingClass& dualizing() const;     // throws unless coherent

  bool operator==(const WittRef& rhs) const;

  /// "W^0(U, (1))", "W~^1_Z(X, (0)[2])"; fold_degrees renders i mod 4.
  std::string to_string(bool fold_degrees = false) const;
};

enum class StepOp { Pullback, ShriekPullback, Pushforward, Periodicity, Devissage, InversePullback, Boundary };

const char* to_string(StepOp op);

struct RecipeStep {
  StepOp op = StepOp::Periodicity;
  std::optional<MorphismData> morphism;
  WittRef from;
  WittRef to;
  std::string justification;

  /// Composition-notation symbol: "π_*", "α̃*", "(α*)⁻¹", "∂", ... ; empty for periodicity.
  std::string symbol() const;
};

enum class RecipeKind { Section, Connecting };

const char* to_string(RecipeKind kind);

struct Recipe {
  RecipeKind kind = RecipeKind::Section;
  std::vector<RecipeStep> steps;
  std::vector<std::string> assumptions;
  bool vanishes = false;

  /// Right-to-left composition of the non-periodicity steps,
  /// e.g. "π_* ∘ α̃* ∘ (α*)⁻¹".
  std::string composition() const;
};

enum class Case { A, B };

struct Classification {
  Case which = Case::A;
  PicElement L;             // Pic(X) block of the twist
  Integer ell;              // O(E) coordinate
  SchemeNode target_scheme; // X in case A, Z in case B
  PicElement target_twist;
  std::int64_t degree_offset = 0;  // target degree = * + offset
};

struct CoherentClassification {
  Case which = Case::A;
  PicElement L;
  Integer ell;
  DualizingClass target;           // K_X + L on X, or iota^!(K_X + L) on Z
  std::int64_t degree_offset = 0;  // 0 in case A, +1 in case B
};

Classification classify(const BlowupDiagram& d, const PicElement& M);
CoherentClassification classify_coherent(const BlowupDiagram& d, const DualizingClass& K_X,
                                         const DualizingClass& K);

Recipe compile_section(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L, std::int64_t i);
Recipe compile_connecting(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L,
                          std::int64_t i);

/// Section when lambda(L) = c - 1 mod 2, connecting otherwise.
Recipe compile_regular(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L, std::int64_t i);

struct NonRegularHypotheses {
  bool a_dualizing_on_y = false;     // K_Y dualizing with alpha^* K_Y = K_U
  bool b_homotopy_invariance = false;
  bool c_tor_finite = false;         // alpha~ of finite Tor-dimension
  bool d_picard_sequence = false;    // Z -> Pic(Bl) -> Pic(U) exact; re-checked
};

struct NonRegularResult {
  Integer n;
  Recipe recipe;
};

NonRegularResult compile_nonregular(const BlowupDiagram& d, const HypothesisData& h, const DualizingClass& K_X,
                                    const DualizingClass& K_Y, const NonRegularHypotheses& flags,
                                    std::int64_t i = 0);

enum class MainLemmaVariant { A, B };

Recipe main_lemma_recipe(const BlowupDiagram& d, const DualizingClass& K_X, MainLemmaVariant variant,
                         std::int64_t i = 0);

struct LesEntry {
  WittRef ref;
  std::string arrow;                  // label of the outgoing arrow
  std::optional<WittRef> devissage;   // W^{i+1}_Z(X, L) for the Z-entries
};

/// Three entries per degree i in [i_from, i_to].
std::vector<LesEntry> les_table(const BlowupDiagram& d, const PicElement& L, std::int64_t i_from,
                                std::int64_t i_to);

/// Independent well-formedness check of a recipe; returns the list of
/// violations (empty when the recipe is sound). Only step invariants and the
/// diagram are consulted, never the compiler.
std::vector<std::string> check_recipe(const Recipe& r, const BlowupDiagram& d);

}  // namespace wittcalc

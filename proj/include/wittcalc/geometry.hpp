#pragma once

// The blow-up diagram of a regular closed immersion Z -> X of codimension
// c >= 2, with Picard-level pull-backs, relative canonical classes and the
// auxiliary affine-bundle data (Y, alpha, alpha~) used to split restriction.
//
//        iota         upsilon
//     Z -----> X <------------ U
//     ^        ^             /  |
//  pi~|        |pi  upsilon~/   | alpha
//     |        |           /    v
//     E -----> Bl --------------> Y
//       iota~       alpha~

#include "wittcalc/lattice.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace wittcalc {

namespace symbols {
inline constexpr const char* iota = "ι";
inline constexpr const char* upsilon = "υ";
inline constexpr const char* pi = "π";
inline constexpr const char* iota_t = "ι̃";
inline constexpr const char* pi_t = "π̃";
inline constexpr const char* upsilon_t = "υ̃";
inline constexpr const char* alpha = "α";
inline constexpr const char* alpha_t = "α̃";
}  // namespace symbols

class SchemeNode {
 public:
  SchemeNode() = default;
  /// Throws a domain error when regular is set without gorenstein.
  static SchemeNode create(std::string name, PicLattice pic, bool regular, bool gorenstein);

  const std::string& name() const;
  const PicLattice& pic() const;
  bool regular() const;
  bool gorenstein() const;
  bool valid() const { return data_ != nullptr; }

  bool operator==(const SchemeNode& other) const { return data_ == other.data_; }

 private:
  struct Data {
    std::string name;
    PicLattice pic;
    bool regular;
    bool gorenstein;
  };
  std::shared_ptr<const Data> data_;
};

enum class MorphismKind {
  OpenImmersion,
  RegularClosedImmersion,
  BlowDown,
  ProjectiveBundle,
  AffineBundle,
  Auxiliary,
};

const char* to_string(MorphismKind kind);

struct MorphismData {
  std::string name;
  SchemeNode source;
  SchemeNode target;
  MorphismKind kind = MorphismKind::Auxiliary;
  LatticeHom pullback;        // target.pic -> source.pic
  std::int64_t relative_dim = 0;
  PicElement omega;           // relative canonical class, in source.pic
  bool tor_finite = true;

  /// Checks the per-kind invariants and the pull-back orientation.
  static MorphismData make(std::string name, SchemeNode source, SchemeNode target, MorphismKind kind,
                           LatticeHom pullback, std::int64_t relative_dim, PicElement omega,
                           bool tor_finite = true, std::int64_t fiber_dim = 0);
};

struct BlowupDiagram {
  SchemeNode X, Z, U, Bl, E;
  std::int64_t c = 0;
  MorphismData iota, upsilon, pi, iota_t, pi_t, upsilon_t;
  PicElement oE;            // O(E) in Pic(Bl), the last generator
  PicElement oE_restricted; // O_E(-1) in Pic(E), the last generator
  PicElement omega_iota;    // in Pic(Z)
};

struct HypothesisData {
  SchemeNode Y;
  std::int64_t fiber_dim = 0;
  MorphismData alpha;        // U -> Y
  MorphismData alpha_t;      // Bl -> Y
  LatticeHom alpha_inverse;  // (alpha*)^-1 : Pic(U) -> Pic(Y)
  LatticeHom lambda;         // Pic(X) -> Z
};

/// A dualizing complex up to isomorphism: a line-bundle twist and a shift.
struct DualizingClass {
  SchemeNode scheme;
  PicElement bundle;
  std::int64_t shift = 0;

  DualizingClass() = default;
  DualizingClass(SchemeNode scheme, PicElement bundle, std::int64_t shift);

  bool operator==(const DualizingClass& rhs) const;
  std::string to_string() const;
};

BlowupDiagram build_blowup(const SchemeNode& X, const SchemeNode& Z, std::int64_t c,
                           const LatticeHom& iota_pullback, const PicElement& omega_iota);

HypothesisData attach_hypothesis(const BlowupDiagram& d, const SchemeNode& Y,
                                 const LatticeHom& alpha_pullback,
                                 const LatticeHom& alpha_t_pullback, std::int64_t fiber_dim);

/// lambda(L): the e-coordinate of alpha~* (alpha*)^-1 upsilon*(L) in Pic(Bl).
Integer lambda_of(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L);

/// Some L on f.target with M = omega_f + f*(L) mod 2, or nullopt. When the
/// pull-back has an integral coordinate left inverse R the answer is
/// R (M - omega_f) exactly; otherwise the mod-2 solution with free
/// variables set to zero.
std::optional<PicElement> pushforward_twist_target(const MorphismData& f, const PicElement& M);

/// f^!(K) = (f*(K.bundle) + omega_f, K.shift + dim f).
DualizingClass shriek(const MorphismData& f, const DualizingClass& K);

/// Derived pull-back of a dualizing class along f (no twist, no shift).
DualizingClass derived_pullback(const MorphismData& f, const DualizingClass& K);

/// Re-checks every matrix identity the diagram is supposed to satisfy; throws a
/// validation error naming the first that fails.
void validate_diagram(const BlowupDiagram& d);
void validate_hypothesis(const BlowupDiagram& d, const HypothesisData& h);

/// Exactness of Z --(1 -> O(E))--> Pic(Bl) --upsilon~*--> Pic(U), decided by
/// an integer kernel computation.
bool picard_sequence_exact(const BlowupDiagram& d);

struct GrassmannianInstance {
  std::int64_t d = 0;
  std::int64_t n = 0;
  BlowupDiagram diagram;
  HypothesisData hypothesis;
};

/// X = Gr_d(n), Z = Gr_d(n-1), Y = Gr_{d-1}(n-1) with rank-one Picard groups.
GrassmannianInstance grassmannian_instance(std::int64_t d, std::int64_t n, const Integer& lambda_row,
                                           const Integer& omega_iota_coeff);

}  // namespace wittcalc

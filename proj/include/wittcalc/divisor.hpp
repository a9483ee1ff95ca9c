#pragma once

// Affine model of a Cartier divisor E = V(t) in B = Spec Z[x..], and the
// matrix-level checks of the codimension-one factorization of the boundary.

#include "wittcalc/chain.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wittcalc {

inline constexpr const char* kDivisorTwist = "oE-dual";

struct DivisorModel {
  PolyRing ring;
  PolyElement t;

  /// Rejects t = 0 and units.
  static DivisorModel make(PolyRing ring, PolyElement t);
  static DivisorModel parse(const std::string& ring, const std::string& t);
};

/// (O(E)^v, sigma_E): rank one in degree 0 with form (t), shift 0, eps +1.
SymmetricPair divisor_pair(const DivisorModel& m);

/// The space C = [A --t--> A] (degrees 1 -> 0) with chi = (-1, 1), shift 1,
/// written down directly rather than through symmetric_cone.
SymmetricSpace koszul_pushforward_unit(const DivisorModel& m);

struct BlockCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct FactorizationReport {
  bool passed = false;
  bool phi_nondegenerate = false;
  bool literal_equal = false;  // LHS and RHS coincide on the nose
  std::vector<BlockCheck> blocks;

  std::optional<BlockCheck> first_failure() const;
};

/// Compares LHS = symmetric_cone(divisor_pair (x) phi) with
/// RHS = koszul_pushforward_unit (x) phi through the canonical comparison map
/// Theta_n = diag(phi_n, 1): RHS_n = P_n + P_{n-1} -> LHS_n = (D_jP)_n + P_{n-1}.
/// Theta is checked to be a chain map carrying the LHS form to the RHS form;
/// it is an isometry exactly when phi is nondegenerate.
FactorizationReport verify_factorization(const DivisorModel& m, const SymmetricPair& phi);

struct RestrictionWitness {
  std::map<std::int64_t, LocMatrix> p;  // (1/t) * identity, degreewise
  LocalizedElement scalar;              // 1/t
};

RestrictionWitness restriction_witness(const DivisorModel& m, const SymmetricPair& phi);

struct RestrictionReport {
  bool passed = false;
  bool isometric = false;
  /// Whether the symmetric cone of divisor_pair (x) phi admits a verified
  /// contracting homotopy after inverting t; empty when phi is degenerate.
  std::optional<bool> cone_contractible_on_u;
};

RestrictionReport verify_restriction(const DivisorModel& m, const SymmetricPair& phi);

}  // namespace wittcalc

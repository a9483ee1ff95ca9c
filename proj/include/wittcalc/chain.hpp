#pragma once

// Bounded complexes of finite free modules over Z[x_1..x_k], with the sign
// conventions
//   d : P_n -> P_{n-1}                          (homological grading)
//   (P^)_n = (P_{-n})*,  d^_n = (-1)^n d_{1-n}^T
//   P[k]_n = P_{n-k},    d[k]_n = (-1)^k d_{n-k}
//   D_i(P) = P^[i],      D_i(P)_n = (P_{i-n})*, differential (-1)^n d_{i+1-n}^T
//   cone(f: P -> Q)_n = Q_n + P_{n-1}, d = [[d_Q, f], [0, -d_P]]
//   (P (x) Q)_n = sum_p P_p (x) Q_{n-p}, d = d_P (x) 1 + (-1)^p 1 (x) d_Q
// An i-shifted form psi: P -> D_i(P) is eps-symmetric when
//   eps psi_m = (-1)^(i + (i+1) m) psi_{i-m}^T   for every m.

#include "wittcalc/poly.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wittcalc {

class ChainComplex {
 public:
  ChainComplex() = default;
  /// Zero-rank degrees and zero differentials are dropped; shapes, ring and
  /// d o d = 0 are checked.
  ChainComplex(PolyRing ring, std::map<std::int64_t, std::size_t> ranks,
               std::map<std::int64_t, PolyMatrix> differentials = {});

  const PolyRing& ring() const { return ring_; }
  std::size_t rank(std::int64_t n) const;
  /// d_n : P_n -> P_{n-1}, a rank(n-1) x rank(n) matrix (zero when absent).
  PolyMatrix d(std::int64_t n) const;
  const std::map<std::int64_t, std::size_t>& ranks() const { return ranks_; }
  const std::map<std::int64_t, PolyMatrix>& differentials() const { return d_; }

  bool is_zero() const { return ranks_.empty(); }
  std::int64_t min_degree() const;  // 0 for the zero complex
  std::int64_t max_degree() const;
  std::int64_t euler_characteristic() const;

  PolyElement zero() const { return PolyElement(ring_, 0); }

  bool operator==(const ChainComplex& rhs) const;
  bool operator!=(const ChainComplex& rhs) const { return !(*this == rhs); }

 private:
  PolyRing ring_;
  std::map<std::int64_t, std::size_t> ranks_;
  std::map<std::int64_t, PolyMatrix> d_;
};

struct ChainMap {
  ChainComplex source;
  ChainComplex target;
  std::map<std::int64_t, PolyMatrix> components;

  /// Throws a validation error naming the first square that fails to commute.
  static ChainMap make(ChainComplex source, ChainComplex target, std::map<std::int64_t, PolyMatrix> components);
  /// Builds without checking; commutes() answers the question.
  static ChainMap unchecked(ChainComplex source, ChainComplex target, std::map<std::int64_t, PolyMatrix> components);

  /// f_n : source_n -> target_n (zero when absent).
  PolyMatrix at(std::int64_t n) const;
  /// Degree of the first non-commuting square, or nullopt.
  std::optional<std::int64_t> first_failing_square() const;
  bool commutes() const { return !first_failing_square(); }

  static ChainMap identity(const ChainComplex& p);
  ChainMap compose_after(const ChainMap& g) const;  // this o g
};

ChainComplex dual(const ChainComplex& p);
ChainComplex shift(const ChainComplex& p, std::int64_t k);
/// D_i(P) = dual(P)[i].
ChainComplex shifted_dual(const ChainComplex& p, std::int64_t i);
/// D_i(f) : D_i(Q) -> D_i(P) for f : P -> Q, components f_{i-n}^T.
ChainMap shifted_dual(const ChainMap& f, std::int64_t i);
/// The chain isomorphism P -> dual(dual(P)) with components (-1)^n.
ChainMap double_dual_identification(const ChainComplex& p);

ChainComplex cone(const ChainMap& f);
ChainComplex direct_sum(const ChainComplex& p, const ChainComplex& q);

struct TensorBasis {
  std::int64_t p;     // degree in the first factor
  std::size_t a;      // index in P_p
  std::size_t b;      // index in Q_{n-p}
};

ChainComplex tensor(const ChainComplex& p, const ChainComplex& q);
/// Basis of (P (x) Q)_n in the order used by tensor().
std::vector<TensorBasis> tensor_basis(const ChainComplex& p, const ChainComplex& q, std::int64_t n);
/// Offset of the block P_p (x) Q_{n-p} inside (P (x) Q)_n.
std::size_t tensor_offset(const ChainComplex& p, const ChainComplex& q, std::int64_t n, std::int64_t block_p);

/// Permutation matrices (P (x) Q) (x) R -> P (x) (Q (x) R), degreewise.
ChainMap tensor_associator(const ChainComplex& p, const ChainComplex& q, const ChainComplex& r);

/// Verifies d h + h d = id for a degree +1 map h (h_n : P_n -> P_{n+1}).
bool is_contracting_homotopy(const ChainComplex& p, const std::map<std::int64_t, PolyMatrix>& h);

/// Formal rank-one twist: a sorted multiset of generator labels ("1" when empty).
struct Twist {
  std::vector<std::string> labels;

  static Twist trivial() { return {}; }
  static Twist named(std::string label) { return Twist{{std::move(label)}}; }
  Twist operator*(const Twist& rhs) const;
  bool operator==(const Twist& rhs) const { return labels == rhs.labels; }
  std::string to_string() const;
};

struct SymmetricPair {
  ChainComplex complex;
  Twist twist;
  std::int64_t shift = 0;
  ChainMap form;  // complex -> D_shift(complex) (x) twist
  int epsilon = 1;

  /// Checks the chain-map property and eps-symmetry.
  static SymmetricPair make(ChainComplex complex, Twist twist, std::int64_t shift,
                            std::map<std::int64_t, PolyMatrix> form, int epsilon);

  PolyMatrix form_at(std::int64_t n) const { return form.at(n); }
  /// Empty when symmetric, otherwise the first offending degree.
  std::optional<std::int64_t> symmetry_defect() const;
  /// Every form component is square with determinant +-1.
  bool nondegenerate() const;
};

struct SymmetricSpace {
  SymmetricPair pair;

  /// Throws a validation error unless the form is degreewise invertible.
  static SymmetricSpace make(SymmetricPair pair);
};

/// Degree-0 pair on A^k with the given symmetric matrix, shift 0.
SymmetricPair form_in_degree_zero(const PolyMatrix& m, int epsilon = 1, Twist twist = Twist::trivial());
/// Hyperbolic space on P (+) D_i(P), form [[0, 1], [u (-1)^((i+1)n), 0]].
SymmetricPair hyperbolic(const ChainComplex& p, std::int64_t i, int u = 1);

SymmetricSpace symmetric_cone(const SymmetricPair& pair);
SymmetricPair tensor_forms(const SymmetricPair& a, const SymmetricPair& b);

/// True iff W is a chain map b.complex -> a.complex over R[1/t] and
/// W^T psi_a W = witness_t psi_b degreewise. Throws a validation error when
/// some W_n is not invertible over R[1/t] or witness_t is not a unit.
bool localize_check_isometric(const SymmetricPair& a, const SymmetricPair& b, const PolyElement& t,
                              const std::map<std::int64_t, LocMatrix>& witness_p,
                              const LocalizedElement& witness_t);

}  // namespace wittcalc

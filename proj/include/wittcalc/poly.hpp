#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer
// coefficients, and their localization at a single element t.

#include "wittcalc/lattice.hpp"
#include "wittcalc/matrix.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wittcalc {

class PolyRing {
 public:
  /// The integers.
  PolyRing();
  explicit PolyRing(std::vector<std::string> variables);

  /// "Z", "Z[x]", "Z[x,y]".
  static PolyRing parse(const std::string& text);

  const std::vector<std::string>& variables() const { return *vars_; }
  std::size_t nvars() const { return vars_->size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool operator==(const PolyRing& rhs) const { return *vars_ == *rhs.vars_; }
  bool operator!=(const PolyRing& rhs) const { return !(*this == rhs); }

  std::string to_string() const;

 private:
  std::shared_ptr<const std::vector<std::string>> vars_;
};

using Exponents = std::vector<std::uint32_t>;

class PolyElement {
 public:
  PolyElement() = default;  // zero of the integers
  PolyElement(PolyRing ring, const Integer& constant);
  PolyElement(PolyRing ring, long constant) : PolyElement(std::move(ring), Integer(constant)) {}

  static PolyElement variable(const PolyRing& ring, std::size_t index);
  static PolyElement monomial(const PolyRing& ring, Exponents exps, const Integer& coeff);
  /// Infix grammar: integers, declared variables, + - * ^ and parentheses.
  static PolyElement parse(const PolyRing& ring, const std::string& text);

  const PolyRing& ring() const { return ring_; }
  const std::map<Exponents, Integer>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant coefficient (0 when absent).
  Integer constant_term() const;
  /// +1 or -1: the units of an integer polynomial ring.
  bool is_unit() const;
  std::size_t total_degree() const;

  PolyElement zero_like() const { return PolyElement(ring_, 0); }
  PolyElement one_like() const { return PolyElement(ring_, 1); }

  PolyElement operator+(const PolyElement& rhs) const;
  PolyElement operator-(const PolyElement& rhs) const;
  PolyElement operator-() const;
  PolyElement operator*(const PolyElement& rhs) const;
  PolyElement operator*(long k) const;
  PolyElement pow(unsigned k) const;

  bool operator==(const PolyElement& rhs) const;
  bool operator!=(const PolyElement& rhs) const { return !(*this == rhs); }

  /// q with q * d == *this, or nullopt when d does not divide exactly.
  std::optional<PolyElement> divide_exact(const PolyElement& d) const;
  bool divisible_by(const PolyElement& d) const { return divide_exact(d).has_value(); }

  /// Canonical rendering, terms in decreasing lex order: "x^2*y - 3*x + 1".
  std::string to_string() const;

 private:
  void require_same_ring(const PolyElement& rhs, const char* what) const;

  PolyRing ring_;
  std::map<Exponents, Integer> terms_;  // no zero coefficients
};

using PolyMatrix = Matrix<PolyElement>;

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
PolyElement determinant(const PolyMatrix& m);

/// Inverse of a matrix whose determinant is +-1, via the adjugate; nullopt
/// when the determinant is not a unit.
std::optional<PolyMatrix> inverse_unimodular(const PolyMatrix& m);

/// Element num / t^k of R[1/t], kept normalized: t does not divide num
/// unless k = 0.
class LocalizedElement {
 public:
  LocalizedElement() = default;
  LocalizedElement(PolyElement num, std::uint32_t t_power, PolyElement t);
  static LocalizedElement from_poly(const PolyElement& p, const PolyElement& t) { return {p, 0, t}; }

  const PolyElement& numerator() const { return num_; }
  std::uint32_t t_power() const { return k_; }
  const PolyElement& t() const { return t_; }

  bool is_zero() const { return num_.is_zero(); }
  /// Units of R[1/t] among normalized elements: +-t^j / t^k.
  bool is_unit() const;

  LocalizedElement zero_like() const { return {num_.zero_like(), 0, t_}; }
  LocalizedElement one_like() const { return {num_.one_like(), 0, t_}; }

  LocalizedElement operator+(const LocalizedElement& rhs) const;
  LocalizedElement operator-(const LocalizedElement& rhs) const;
  LocalizedElement operator-() const;
  LocalizedElement operator*(const LocalizedElement& rhs) const;
  LocalizedElement operator*(long k) const;

  bool operator==(const LocalizedElement& rhs) const;

  std::string to_string() const;

 private:
  void require_same_t(const LocalizedElement& rhs) const;

  PolyElement num_;
  std::uint32_t k_ = 0;
  PolyElement t_;
};

using LocMatrix = Matrix<LocalizedElement>;

LocMatrix localize(const PolyMatrix& m, const PolyElement& t);

}  // namespace wittcalc

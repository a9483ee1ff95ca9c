#pragma once

// Finitely generated free abelian groups (Picard lattices), their elements
// and homomorphisms, with exact arbitrary-precision arithmetic.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wittcalc {

using Integer = boost::multiprecision::cpp_int;

std::string to_string(const Integer& v);
bool is_even(const Integer& v);

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows,
                             std::size_t cols_if_empty = 0);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<Integer> row(std::size_t r) const;
  std::vector<Integer> apply(const std::vector<Integer>& v) const;

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix& rhs) const = default;

  bool is_identity() const;
  bool is_zero() const;

  /// Rank over the field with two elements.
  std::size_t rank_mod2() const;
  /// Rank over the rationals.
  std::size_t rank_rational() const;
  /// Inverse over the integers, or nullopt when the matrix is not unimodular.
  std::optional<IntMatrix> inverse() const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Solve A x = b over the two-element field. Returns the solution with all
/// free variables set to zero, or nullopt when the system is inconsistent.
std::optional<std::vector<int>> solve_mod2(const IntMatrix& a,
                                           const std::vector<Integer>& b);

/// A Picard group presented as a free abelian group on named generators.
/// Two lattices are equal only if they come from the same construction.
class PicLattice {
 public:
  PicLattice() = default;
  static PicLattice create(std::string name, std::vector<std::string> generators);

  const std::string& name() const;
  const std::vector<std::string>& generators() const;
  std::size_t rank() const;
  bool valid() const { return data_ != nullptr; }

  bool operator==(const PicLattice& other) const { return data_ == other.data_; }

 private:
  struct Data {
    std::string name;
    std::vector<std::string> generators;
  };
  std::shared_ptr<const Data> data_;
};

class PicElement {
 public:
  PicElement() = default;
  PicElement(PicLattice lattice, std::vector<Integer> coords);
  PicElement(PicLattice lattice, std::initializer_list<long> coords);

  static PicElement zero(const PicLattice& lattice);
  static PicElement basis(const PicLattice& lattice, std::size_t index);

  const PicLattice& lattice() const { return lattice_; }
  const std::vector<Integer>& coords() const { return coords_; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }

  bool is_zero() const;

  PicElement operator+(const PicElement& rhs) const;
  PicElement operator-(const PicElement& rhs) const;
  PicElement operator-() const;
  friend PicElement operator*(const Integer& k, const PicElement& v);

  bool operator==(const PicElement& rhs) const;

  /// "(a, b, c)" rendering of the coordinates.
  std::string to_string() const;

 private:
  PicLattice lattice_;
  std::vector<Integer> coords_;
};

class LatticeHom {
 public:
  LatticeHom() = default;
  LatticeHom(PicLattice source, PicLattice target, IntMatrix matrix);

  static LatticeHom identity(const PicLattice& lattice);
  static LatticeHom identity_between(const PicLattice& source, const PicLattice& target);

  const PicLattice& source() const { return source_; }
  const PicLattice& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  PicElement apply(const PicElement& v) const;

  bool operator==(const LatticeHom& rhs) const;

 private:
  PicLattice source_;
  PicLattice target_;
  IntMatrix matrix_;
};

PicElement apply(const LatticeHom& h, const PicElement& v);

/// g after h.
LatticeHom compose(const LatticeHom& g, const LatticeHom& h);

/// True iff every coordinate of a - b is even.
bool equal_mod2(const PicElement& a, const PicElement& b);

/// Order of coker(h) tensored with Z/2, i.e. 2^(target rank - mod-2 rank).
Integer coker_mod2_order(const LatticeHom& h);

/// Rank of the kernel of h over the integers (= source rank - rational rank).
std::size_t kernel_rank(const LatticeHom& h);

/// True iff the coordinates of v have gcd 1.
bool is_primitive(const PicElement& v);

}  // namespace wittcalc

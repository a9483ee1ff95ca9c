#pragma once

// Dense matrices over an exact ring element type T. T provides +, -, *, ==,
// is_zero(), zero_like() and one_like(); every matrix keeps a zero prototype
// so that ring context survives empty shapes.

#include "wittcalc/errors.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace wittcalc {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& proto)
      : rows_(rows), cols_(cols), zero_(proto.zero_like()), data_(rows * cols, zero_) {}

  static Matrix identity(std::size_t n, const T& proto) {
    Matrix m(n, n, proto);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = proto.one_like();
    return m;
  }

  static Matrix scalar(std::size_t n, const T& value) {
    Matrix m(n, n, value);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_)
      fail(ErrorKind::Structural, "matrix product of shapes " + shape() + " and " + rhs.shape());
    Matrix out(rows_, rhs.cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a.is_zero()) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) {
          const T& b = rhs(k, j);
          if (!b.is_zero()) out(i, j) = out(i, j) + a * b;
        }
      }
    return out;
  }

  Matrix operator+(const Matrix& rhs) const {
    same_shape(rhs, "sum");
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + rhs.data_[k];
    return out;
  }

  Matrix operator-(const Matrix& rhs) const {
    same_shape(rhs, "difference");
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - rhs.data_[k];
    return out;
  }

  Matrix operator-() const {
    Matrix out = *this;
    for (auto& v : out.data_) v = -v;
    return out;
  }

  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& v : out.data_) v = s * v;
    return out;
  }

  Matrix scaled(long s) const {
    if (s == 1) return *this;
    if (s == -1) return -*this;
    return scaled(zero_.one_like() * s);
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  bool operator==(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!(data_[k] == rhs.data_[k])) return false;
    return true;
  }
  bool operator!=(const Matrix& rhs) const { return !(*this == rhs); }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!v.is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!((*this)(i, j) == (i == j ? zero_.one_like() : zero_))) return false;
    return true;
  }

  /// Copies `block` with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
      fail(ErrorKind::Internal, "block " + block.shape() + " at (" + std::to_string(r0) + ", " +
                                    std::to_string(c0) + ") does not fit in " + shape());
    for (std::size_t i = 0; i < block.rows_; ++i)
      for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r0 + i, c0 + j) = block(i, j);
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix out(nr, nc, zero_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  /// Kronecker product, rows indexed by (i, k) -> i * rhs.rows + k.
  Matrix kron(const Matrix& rhs) const {
    Matrix out(rows_ * rhs.rows_, cols_ * rhs.cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& a = (*this)(i, j);
        if (a.is_zero()) continue;
        for (std::size_t k = 0; k < rhs.rows_; ++k)
          for (std::size_t l = 0; l < rhs.cols_; ++l) out(i * rhs.rows_ + k, j * rhs.cols_ + l) = a * rhs(k, l);
      }
    return out;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    Matrix<U> out(rows_, cols_, f(zero_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) out += ", ";
      out += "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) out += ", ";
        out += (*this)(i, j).to_string();
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  void same_shape(const Matrix& rhs, const char* what) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      fail(ErrorKind::Structural, std::string("matrix ") + what + " of shapes " + shape() + " and " + rhs.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  T zero_;
  std::vector<T> data_;
};

}  // namespace wittcalc

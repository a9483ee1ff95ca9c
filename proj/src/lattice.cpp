#include "wittcalc/lattice.hpp"

#include "wittcalc/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace wittcalc {

using Rational = boost::multiprecision::cpp_rational;

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Assumption: return "assumption";
    case ErrorKind::Internal: return "internal";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

std::string to_string(const Integer& v) { return v.str(); }

bool is_even(const Integer& v) { return v % 2 == 0; }

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::Structural, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows,
                               std::size_t cols_if_empty) {
  IntMatrix m;
  m.rows_ = rows.size();
  m.cols_ = rows.empty() ? cols_if_empty : rows.front().size();
  m.data_.reserve(m.rows_ * m.cols_);
  for (const auto& r : rows) {
    if (r.size() != m.cols_) fail(ErrorKind::Structural, "ragged matrix: rows have different lengths");
    m.data_.insert(m.data_.end(), r.begin(), r.end());
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Integer> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

std::vector<Integer> IntMatrix::apply(const std::vector<Integer>& v) const {
  if (v.size() != cols_) fail(ErrorKind::Structural, "matrix/vector size mismatch");
  std::vector<Integer> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Integer acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = std::move(acc);
  }
  return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail(ErrorKind::Structural, "matrix product dimension mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Integer& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(ErrorKind::Structural, "matrix sum dimension mismatch");
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(ErrorKind::Structural, "matrix difference dimension mismatch");
  IntMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

bool IntMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

namespace {

// Row-reduce a 0/1 matrix in place; returns pivot columns in row order.
std::vector<std::size_t> eliminate_mod2(std::vector<std::vector<int>>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c] != 0)
        for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] ^= rows[r][k];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<int>> reduce_mod2(const IntMatrix& m) {
  std::vector<std::vector<int>> rows(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = is_even(m(r, c)) ? 0 : 1;
  return rows;
}

}  // namespace

std::size_t IntMatrix::rank_mod2() const {
  auto rows = reduce_mod2(*this);
  return eliminate_mod2(rows, cols_).size();
}

std::size_t IntMatrix::rank_rational() const {
  std::vector<std::vector<Rational>> a(rows_, std::vector<Rational>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) a[r][c] = Rational((*this)(r, c));
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    std::size_t p = rank;
    while (p < rows_ && a[p][c] == 0) ++p;
    if (p == rows_) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < rows_; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[rank][c];
      for (std::size_t k = c; k < cols_; ++k) a[i][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::optional<IntMatrix> IntMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  const std::size_t n = rows_;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = Rational((*this)(r, c));
    a[r][n + r] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    Rational pivot = a[c][c];
    for (auto& v : a[c]) v /= pivot;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[i][k] -= f * a[c][k];
    }
  }
  IntMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const Rational& v = a[r][n + c];
      if (boost::multiprecision::denominator(v) != 1) return std::nullopt;
      inv(r, c) = boost::multiprecision::numerator(v);
    }
  return inv;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) os << ", ";
    os << '[';
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ", ";
      os << (*this)(r, c);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

std::optional<std::vector<int>> solve_mod2(const IntMatrix& a, const std::vector<Integer>& b) {
  if (b.size() != a.rows()) fail(ErrorKind::Structural, "solve_mod2: right-hand side has wrong length");
  auto rows = reduce_mod2(a);
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r].push_back(is_even(b[r]) ? 0 : 1);
  auto pivots = eliminate_mod2(rows, a.cols());
  // A pivot in the augmented column means the system is inconsistent.
  for (std::size_t r = pivots.size(); r < rows.size(); ++r)
    if (rows[r][a.cols()] != 0) return std::nullopt;
  std::vector<int> x(a.cols(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = rows[r][a.cols()];
  return x;
}

// --------------------------------------------------------------- PicLattice

PicLattice PicLattice::create(std::string name, std::vector<std::string> generators) {
  std::set<std::string> seen;
  for (const auto& g : generators)
    if (!seen.insert(g).second)
      fail(ErrorKind::Structural, "lattice " + name + ": duplicate generator label '" + g + "'");
  PicLattice l;
  l.data_ = std::make_shared<const Data>(Data{std::move(name), std::move(generators)});
  return l;
}

const std::string& PicLattice::name() const {
  static const std::string empty;
  return data_ ? data_->name : empty;
}

const std::vector<std::string>& PicLattice::generators() const {
  static const std::vector<std::string> empty;
  return data_ ? data_->generators : empty;
}

std::size_t PicLattice::rank() const { return data_ ? data_->generators.size() : 0; }

// --------------------------------------------------------------- PicElement

namespace {

void require_same(const PicLattice& a, const PicLattice& b, const char* what) {
  if (!(a == b))
    fail(ErrorKind::Structural,
         std::string(what) + ": lattice mismatch between " + a.name() + " and " + b.name());
}

}  // namespace

PicElement::PicElement(PicLattice lattice, std::vector<Integer> coords)
    : lattice_(std::move(lattice)), coords_(std::move(coords)) {
  if (coords_.size() != lattice_.rank())
    fail(ErrorKind::Structural, "element of " + lattice_.name() + " has " +
                                    std::to_string(coords_.size()) + " coordinates, rank is " +
                                    std::to_string(lattice_.rank()));
}

PicElement::PicElement(PicLattice lattice, std::initializer_list<long> coords)
    : PicElement(std::move(lattice), std::vector<Integer>(coords.begin(), coords.end())) {}

PicElement PicElement::zero(const PicLattice& lattice) {
  return PicElement(lattice, std::vector<Integer>(lattice.rank()));
}

PicElement PicElement::basis(const PicLattice& lattice, std::size_t index) {
  std::vector<Integer> c(lattice.rank());
  c.at(index) = 1;
  return PicElement(lattice, std::move(c));
}

bool PicElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

PicElement PicElement::operator+(const PicElement& rhs) const {
  require_same(lattice_, rhs.lattice_, "addition");
  auto c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += rhs.coords_[i];
  return PicElement(lattice_, std::move(c));
}

PicElement PicElement::operator-(const PicElement& rhs) const {
  require_same(lattice_, rhs.lattice_, "subtraction");
  auto c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= rhs.coords_[i];
  return PicElement(lattice_, std::move(c));
}

PicElement PicElement::operator-() const {
  auto c = coords_;
  for (auto& v : c) v = -v;
  return PicElement(lattice_, std::move(c));
}

PicElement operator*(const Integer& k, const PicElement& v) {
  auto c = v.coords_;
  for (auto& x : c) x *= k;
  return PicElement(v.lattice_, std::move(c));
}

bool PicElement::operator==(const PicElement& rhs) const {
  return lattice_ == rhs.lattice_ && coords_ == rhs.coords_;
}

std::string PicElement::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ", ";
    s += coords_[i].str();
  }
  return s + ")";
}

// --------------------------------------------------------------- LatticeHom

LatticeHom::LatticeHom(PicLattice source, PicLattice target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank())
    fail(ErrorKind::Structural, "homomorphism " + source_.name() + " -> " + target_.name() +
                                    " needs a " + std::to_string(target_.rank()) + "x" +
                                    std::to_string(source_.rank()) + " matrix, got " +
                                    std::to_string(matrix_.rows()) + "x" +
                                    std::to_string(matrix_.cols()));
}

LatticeHom LatticeHom::identity(const PicLattice& lattice) {
  return LatticeHom(lattice, lattice, IntMatrix::identity(lattice.rank()));
}

LatticeHom LatticeHom::identity_between(const PicLattice& source, const PicLattice& target) {
  return LatticeHom(source, target, IntMatrix::identity(source.rank()));
}

PicElement LatticeHom::apply(const PicElement& v) const {
  if (!(v.lattice() == source_))
    fail(ErrorKind::Structural, "cannot apply " + source_.name() + " -> " + target_.name() +
                                    " to an element of " + v.lattice().name());
  return PicElement(target_, matrix_.apply(v.coords()));
}

bool LatticeHom::operator==(const LatticeHom& rhs) const {
  return source_ == rhs.source_ && target_ == rhs.target_ && matrix_ == rhs.matrix_;
}

PicElement apply(const LatticeHom& h, const PicElement& v) { return h.apply(v); }

LatticeHom compose(const LatticeHom& g, const LatticeHom& h) {
  if (!(h.target() == g.source()))
    fail(ErrorKind::Structural, "cannot compose: " + h.source().name() + " -> " + h.target().name() +
                                    " followed by " + g.source().name() + " -> " + g.target().name());
  return LatticeHom(h.source(), g.target(), g.matrix() * h.matrix());
}

bool equal_mod2(const PicElement& a, const PicElement& b) {
  require_same(a.lattice(), b.lattice(), "equal_mod2");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_even(a[i] - b[i])) return false;
  return true;
}

Integer coker_mod2_order(const LatticeHom& h) {
  const std::size_t free = h.target().rank() - h.matrix().rank_mod2();
  return Integer(1) << free;
}

std::size_t kernel_rank(const LatticeHom& h) {
  return h.source().rank() - h.matrix().rank_rational();
}

bool is_primitive(const PicElement& v) {
  Integer g = 0;
  for (const auto& c : v.coords()) g = boost::multiprecision::gcd(g, c);
  return g == 1;
}

}  // namespace wittcalc

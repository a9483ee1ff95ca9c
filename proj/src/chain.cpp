#include "wittcalc/chain.hpp"

#include "wittcalc/errors.hpp"

#include <algorithm>
#include <utility>

namespace wittcalc {

namespace {

bool odd(std::int64_t n) { return (n % 2) != 0; }
long sign_of(std::int64_t exponent) { return odd(exponent) ? -1 : 1; }

void check_entries_ring(const PolyMatrix& m, const PolyRing& ring, const std::string& what) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).ring() != ring)
        fail(ErrorKind::Structural, what + ": entry over " + m(i, j).ring().to_string() + " in a complex over " +
                                        ring.to_string());
}

std::pair<std::int64_t, std::int64_t> joint_range(const ChainComplex& a, const ChainComplex& b) {
  if (a.is_zero() && b.is_zero()) return {0, -1};
  if (a.is_zero()) return {b.min_degree(), b.max_degree()};
  if (b.is_zero()) return {a.min_degree(), a.max_degree()};
  return {std::min(a.min_degree(), b.min_degree()), std::max(a.max_degree(), b.max_degree())};
}

}  // namespace

// -------------------------------------------------------------- ChainComplex

ChainComplex::ChainComplex(PolyRing ring, std::map<std::int64_t, std::size_t> ranks,
                           std::map<std::int64_t, PolyMatrix> differentials)
    : ring_(std::move(ring)) {
  for (const auto& [n, r] : ranks)
    if (r > 0) ranks_[n] = r;
  for (auto& [n, m] : differentials) {
    if (m.rows() != rank(n - 1) || m.cols() != rank(n))
      fail(ErrorKind::Structural, "d_" + std::to_string(n) + " has shape " + m.shape() + ", expected " +
                                      std::to_string(rank(n - 1)) + "x" + std::to_string(rank(n)));
    check_entries_ring(m, ring_, "d_" + std::to_string(n));
    if (!m.is_zero()) d_.emplace(n, std::move(m));
  }
  for (const auto& [n, m] : d_) {
    auto prev = d_.find(n - 1);
    if (prev != d_.end() && !(prev->second * m).is_zero())
      fail(ErrorKind::Validation, "d_" + std::to_string(n - 1) + " o d_" + std::to_string(n) + " != 0");
  }
}

std::size_t ChainComplex::rank(std::int64_t n) const {
  auto it = ranks_.find(n);
  return it == ranks_.end() ? 0 : it->second;
}

PolyMatrix ChainComplex::d(std::int64_t n) const {
  auto it = d_.find(n);
  if (it != d_.end()) return it->second;
  return PolyMatrix(rank(n - 1), rank(n), zero());
}

std::int64_t ChainComplex::min_degree() const { return ranks_.empty() ? 0 : ranks_.begin()->first; }
std::int64_t ChainComplex::max_degree() const { return ranks_.empty() ? 0 : ranks_.rbegin()->first; }

std::int64_t ChainComplex::euler_characteristic() const {
  std::int64_t chi = 0;
  for (const auto& [n, r] : ranks_) chi += sign_of(n) * static_cast<std::int64_t>(r);
  return chi;
}

bool ChainComplex::operator==(const ChainComplex& rhs) const {
  return ring_ == rhs.ring_ && ranks_ == rhs.ranks_ && d_ == rhs.d_;
}

// ------------------------------------------------------------------ ChainMap

ChainMap ChainMap::unchecked(ChainComplex source, ChainComplex target, std::map<std::int64_t, PolyMatrix> components) {
  if (source.ring() != target.ring())
    fail(ErrorKind::Structural, "chain map between complexes over " + source.ring().to_string() + " and " +
                                    target.ring().to_string());
  ChainMap f;
  for (auto& [n, m] : components) {
    if (m.rows() != target.rank(n) || m.cols() != source.rank(n))
      fail(ErrorKind::Structural, "component " + std::to_string(n) + " has shape " + m.shape() + ", expected " +
                                      std::to_string(target.rank(n)) + "x" + std::to_string(source.rank(n)));
    check_entries_ring(m, source.ring(), "component " + std::to_string(n));
    if (!m.is_zero()) f.components.emplace(n, std::move(m));
  }
  f.source = std::move(source);
  f.target = std::move(target);
  return f;
}

ChainMap ChainMap::make(ChainComplex source, ChainComplex target, std::map<std::int64_t, PolyMatrix> components) {
  ChainMap f = unchecked(std::move(source), std::move(target), std::move(components));
  if (auto n = f.first_failing_square())
    fail(ErrorKind::Validation, "not a chain map: the square at degree " + std::to_string(*n) +
                                    " does not commute (d_" + std::to_string(*n) + " f_" + std::to_string(*n) +
                                    " = " + (f.target.d(*n) * f.at(*n)).to_string() + ", f_" +
                                    std::to_string(*n - 1) + " d_" + std::to_string(*n) + " = " +
                                    (f.at(*n - 1) * f.source.d(*n)).to_string() + ")");
  return f;
}

PolyMatrix ChainMap::at(std::int64_t n) const {
  auto it = components.find(n);
  if (it != components.end()) return it->second;
  return PolyMatrix(target.rank(n), source.rank(n), source.zero());
}

std::optional<std::int64_t> ChainMap::first_failing_square() const {
  auto [lo, hi] = joint_range(source, target);
  for (std::int64_t n = lo; n <= hi + 1; ++n)
    if (target.d(n) * at(n) != at(n - 1) * source.d(n)) return n;
  return std::nullopt;
}

ChainMap ChainMap::identity(const ChainComplex& p) {
  std::map<std::int64_t, PolyMatrix> c;
  for (const auto& [n, r] : p.ranks()) c.emplace(n, PolyMatrix::identity(r, p.zero()));
  return unchecked(p, p, std::move(c));
}

ChainMap ChainMap::compose_after(const ChainMap& g) const {
  if (g.target != source) fail(ErrorKind::Structural, "composition of non-composable chain maps");
  std::map<std::int64_t, PolyMatrix> c;
  for (const auto& [n, r] : g.source.ranks()) c.emplace(n, at(n) * g.at(n));
  return unchecked(g.source, target, std::move(c));
}

// ------------------------------------------------------------- constructions

ChainComplex dual(const ChainComplex& p) {
  std::map<std::int64_t, std::size_t> ranks;
  for (const auto& [n, r] : p.ranks()) ranks[-n] = r;
  std::map<std::int64_t, PolyMatrix> d;
  for (const auto& [m, mat] : p.differentials()) {
    const std::int64_t n = 1 - m;
    d.emplace(n, mat.transpose().scaled(sign_of(n)));
  }
  return ChainComplex(p.ring(), std::move(ranks), std::move(d));
}

ChainComplex shift(const ChainComplex& p, std::int64_t k) {
  std::map<std::int64_t, std::size_t> ranks;
  for (const auto& [n, r] : p.ranks()) ranks[n + k] = r;
  std::map<std::int64_t, PolyMatrix> d;
  for (const auto& [m, mat] : p.differentials()) d.emplace(m + k, mat.scaled(sign_of(k)));
  return ChainComplex(p.ring(), std::move(ranks), std::move(d));
}

ChainComplex shifted_dual(const ChainComplex& p, std::int64_t i) { return shift(dual(p), i); }

ChainMap shifted_dual(const ChainMap& f, std::int64_t i) {
  ChainComplex src = shifted_dual(f.target, i);
  ChainComplex tgt = shifted_dual(f.source, i);
  std::map<std::int64_t, PolyMatrix> c;
  for (const auto& [m, mat] : f.components) c.emplace(i - m, mat.transpose());
  return ChainMap::unchecked(std::move(src), std::move(tgt), std::move(c));
}

ChainMap double_dual_identification(const ChainComplex& p) {
  std::map<std::int64_t, PolyMatrix> c;
  for (const auto& [n, r] : p.ranks()) c.emplace(n, PolyMatrix::identity(r, p.zero()).scaled(sign_of(n)));
  return ChainMap::make(p, dual(dual(p)), std::move(c));
}

ChainComplex cone(const ChainMap& f) {
  if (auto n = f.first_failing_square())
    fail(ErrorKind::Validation, "cone of a map that is not a chain map: square at degree " + std::to_string(*n) +
                                    " does not commute");
  const ChainComplex& P = f.source;
  const ChainComplex& Q = f.target;
  const PolyElement zero = P.zero();
  std::map<std::int64_t, std::size_t> ranks;
  for (const auto& [n, r] : Q.ranks()) ranks[n] += r;
  for (const auto& [n, r] : P.ranks()) ranks[n + 1] += r;
  if (ranks.empty()) return ChainComplex(P.ring(), {});
  std::map<std::int64_t, PolyMatrix> d;
  const std::int64_t lo = ranks.begin()->first;
  const std::int64_t hi = ranks.rbegin()->first;
  for (std::int64_t n = lo; n <= hi + 1; ++n) {
    const std::size_t q0 = Q.rank(n), p0 = P.rank(n - 1);
    const std::size_t q1 = Q.rank(n - 1), p1 = P.rank(n - 2);
    PolyMatrix m(q1 + p1, q0 + p0, zero);
    m.set_block(0, 0, Q.d(n));
    m.set_block(0, q0, f.at(n - 1));
    m.set_block(q1, q0, -P.d(n - 1));
    d.emplace(n, std::move(m));
  }
  return ChainComplex(P.ring(), std::move(ranks), std::move(d));
}

ChainComplex direct_sum(const ChainComplex& p, const ChainComplex& q) {
  if (p.ring() != q.ring()) fail(ErrorKind::Structural, "direct sum over different rings");
  std::map<std::int64_t, std::size_t> ranks;
  for (const auto& [n, r] : p.ranks()) ranks[n] += r;
  for (const auto& [n, r] : q.ranks()) ranks[n] += r;
  if (ranks.empty()) return ChainComplex(p.ring(), {});
  std::map<std::int64_t, PolyMatrix> d;
  for (std::int64_t n = ranks.begin()->first; n <= ranks.rbegin()->first + 1; ++n) {
    PolyMatrix m(p.rank(n - 1) + q.rank(n - 1), p.rank(n) + q.rank(n), p.zero());
    m.set_block(0, 0, p.d(n));
    m.set_block(p.rank(n - 1), p.rank(n), q.d(n));
    d.emplace(n, std::move(m));
  }
  return ChainComplex(p.ring(), std::move(ranks), std::move(d));
}

// -------------------------------------------------------------------- tensor

std::size_t tensor_offset(const ChainComplex& p, const ChainComplex& q, std::int64_t n, std::int64_t block_p) {
  std::size_t off = 0;
  for (const auto& [deg, r] : p.ranks()) {
    if (deg >= block_p) break;
    off += r * q.rank(n - deg);
  }
  return off;
}

std::vector<TensorBasis> tensor_basis(const ChainComplex& p, const ChainComplex& q, std::int64_t n) {
  std::vector<TensorBasis> out;
  for (const auto& [deg, r] : p.ranks()) {
    const std::size_t rq = q.rank(n - deg);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < rq; ++b) out.push_back({deg, a, b});
  }
  return out;
}

ChainComplex tensor(const ChainComplex& p, const ChainComplex& q) {
  if (p.ring() != q.ring())
    fail(ErrorKind::Structural, "tensor product of complexes over " + p.ring().to_string() + " and " +
                                    q.ring().to_string());
  const PolyElement zero = p.zero();
  std::map<std::int64_t, std::size_t> ranks;
  for (const auto& [a, ra] : p.ranks())
    for (const auto& [b, rb] : q.ranks()) ranks[a + b] += ra * rb;
  if (ranks.empty()) return ChainComplex(p.ring(), {});
  std::map<std::int64_t, PolyMatrix> d;
  for (std::int64_t n = ranks.begin()->first; n <= ranks.rbegin()->first + 1; ++n) {
    PolyMatrix m(ranks.count(n - 1) ? ranks[n - 1] : 0, ranks.count(n) ? ranks[n] : 0, zero);
    for (const auto& [deg, rp] : p.ranks()) {
      const std::int64_t qdeg = n - deg;
      const std::size_t rq = q.rank(qdeg);
      if (rq == 0) continue;
      const std::size_t col = tensor_offset(p, q, n, deg);
      if (p.rank(deg - 1) > 0) {
        const PolyMatrix blk = p.d(deg).kron(PolyMatrix::identity(rq, zero));
        m.set_block(tensor_offset(p, q, n - 1, deg - 1), col, blk);
      }
      if (q.rank(qdeg - 1) > 0) {
        const PolyMatrix blk = PolyMatrix::identity(rp, zero).kron(q.d(qdeg)).scaled(sign_of(deg));
        m.set_block(tensor_offset(p, q, n - 1, deg), col, blk);
      }
    }
    d.emplace(n, std::move(m));
  }
  return ChainComplex(p.ring(), std::move(ranks), std::move(d));
}

ChainMap tensor_associator(const ChainComplex& p, const ChainComplex& q, const ChainComplex& r) {
  const ChainComplex pq = tensor(p, q);
  const ChainComplex qr = tensor(q, r);
  const ChainComplex lhs = tensor(pq, r);
  const ChainComplex rhs = tensor(p, qr);
  const PolyElement one = p.zero().one_like();
  std::map<std::int64_t, PolyMatrix> c;
  for (const auto& [n, rank] : lhs.ranks()) {
    PolyMatrix m(rhs.rank(n), rank, p.zero());
    std::size_t col = 0;
    for (const TensorBasis& outer : tensor_basis(pq, r, n)) {
      const std::int64_t s = outer.p;
      const TensorBasis inner = tensor_basis(p, q, s)[outer.a];
      const std::int64_t qdeg = s - inner.p;
      const std::size_t idx_qr = tensor_offset(q, r, n - inner.p, qdeg) + inner.b * r.rank(n - s) + outer.b;
      const std::size_t row = tensor_offset(p, qr, n, inner.p) + inner.a * qr.rank(n - inner.p) + idx_qr;
      m(row, col++) = one;
    }
    c.emplace(n, std::move(m));
  }
  return ChainMap::make(lhs, rhs, std::move(c));
}

bool is_contracting_homotopy(const ChainComplex& p, const std::map<std::int64_t, PolyMatrix>& h) {
  auto h_at = [&](std::int64_t n) {
    auto it = h.find(n);
    if (it != h.end()) return it->second;
    return PolyMatrix(p.rank(n + 1), p.rank(n), p.zero());
  };
  for (const auto& [n, r] : p.ranks()) {
    const PolyMatrix hn = h_at(n), hm = h_at(n - 1);
    if (hn.rows() != p.rank(n + 1) || hn.cols() != r || hm.rows() != r || hm.cols() != p.rank(n - 1))
      fail(ErrorKind::Structural, "homotopy component has the wrong shape at degree " + std::to_string(n));
    if (!(p.d(n + 1) * hn + hm * p.d(n)).is_identity()) return false;
  }
  return true;
}

// -------------------------------------------------------------------- twists

Twist Twist::operator*(const Twist& rhs) const {
  Twist out{labels};
  out.labels.insert(out.labels.end(), rhs.labels.begin(), rhs.labels.end());
  std::sort(out.labels.begin(), out.labels.end());
  return out;
}

std::string Twist::to_string() const {
  if (labels.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < labels.size(); ++k) out += (k ? "⊗" : "") + labels[k];
  return out;
}

// ------------------------------------------------------------ symmetric pairs

SymmetricPair SymmetricPair::make(ChainComplex complex, Twist twist, std::int64_t shift,
                                  std::map<std::int64_t, PolyMatrix> form, int epsilon) {
  if (epsilon != 1 && epsilon != -1) fail(ErrorKind::Domain, "epsilon must be +1 or -1");
  SymmetricPair s;
  ChainComplex target = shifted_dual(complex, shift);
  s.form = ChainMap::make(complex, std::move(target), std::move(form));
  s.complex = std::move(complex);
  s.twist = std::move(twist);
  s.shift = shift;
  s.epsilon = epsilon;
  if (auto m = s.symmetry_defect())
    fail(ErrorKind::Validation, "form is not " + std::string(epsilon == 1 ? "+" : "-") +
                                    "1-symmetric in degree " + std::to_string(*m) +
                                    ": eps psi_m != (-1)^(i+(i+1)m) psi_{i-m}^T");
  return s;
}

std::optional<std::int64_t> SymmetricPair::symmetry_defect() const {
  for (const auto& [m, r] : complex.ranks()) {
    const PolyMatrix lhs = form.at(m).scaled(epsilon);
    const PolyMatrix rhs = form.at(shift - m).transpose().scaled(sign_of(shift + (shift + 1) * m));
    if (lhs != rhs) return m;
  }
  return std::nullopt;
}

bool SymmetricPair::nondegenerate() const {
  std::vector<std::int64_t> degs;
  for (const auto& [n, r] : complex.ranks()) {
    degs.push_back(n);
    degs.push_back(shift - n);
  }
  for (std::int64_t n : degs) {
    const PolyMatrix m = form.at(n);
    if (m.rows() != m.cols()) return false;
    if (m.rows() > 0 && !determinant(m).is_unit()) return false;
  }
  return true;
}

SymmetricSpace SymmetricSpace::make(SymmetricPair pair) {
  if (!pair.nondegenerate())
    fail(ErrorKind::Validation, "form is not degreewise invertible; a symmetric space needs an isomorphism");
  return SymmetricSpace{std::move(pair)};
}

SymmetricPair form_in_degree_zero(const PolyMatrix& m, int epsilon, Twist twist) {
  if (m.rows() != m.cols()) fail(ErrorKind::Structural, "form matrix must be square, got " + m.shape());
  ChainComplex p(m.zero().ring(), {{0, m.rows()}});
  return SymmetricPair::make(std::move(p), std::move(twist), 0, {{0, m}}, epsilon);
}

SymmetricPair hyperbolic(const ChainComplex& p, std::int64_t i, int u) {
  const ChainComplex dp = shifted_dual(p, i);
  ChainComplex h = direct_sum(p, dp);
  std::map<std::int64_t, PolyMatrix> psi;
  for (const auto& [n, r] : h.ranks()) {
    const std::size_t rp = p.rank(n), s = dp.rank(n);
    PolyMatrix m(h.rank(i - n), r, p.zero());
    // target H_{i-n}^* = (D_iP)_n (+) P_n
    m.set_block(0, rp, PolyMatrix::identity(s, p.zero()));
    m.set_block(s, 0, PolyMatrix::identity(rp, p.zero()).scaled(u * sign_of((i + 1) * n)));
    psi.emplace(n, std::move(m));
  }
  for (int eps : {1, -1}) {
    SymmetricPair candidate;
    candidate.complex = h;
    candidate.shift = i;
    candidate.epsilon = eps;
    candidate.form = ChainMap::unchecked(h, shifted_dual(h, i), psi);
    if (!candidate.symmetry_defect()) return SymmetricPair::make(h, Twist::trivial(), i, psi, eps);
  }
  fail(ErrorKind::Internal, "hyperbolic form is neither symmetric nor antisymmetric");
}

SymmetricSpace symmetric_cone(const SymmetricPair& pair) {
  if (auto m = pair.symmetry_defect())
    fail(ErrorKind::Validation, "symmetric cone of a pair that is not symmetric (degree " + std::to_string(*m) + ")");
  const ChainComplex& Q = pair.complex;
  const std::int64_t i = pair.shift;
  const int eps = pair.epsilon;
  ChainComplex C = cone(pair.form);
  const PolyElement zero = Q.zero();
  std::map<std::int64_t, PolyMatrix> chi;
  for (const auto& [n, r] : C.ranks()) {
    const std::size_t d_block = Q.rank(i - n);   // (D_iQ)_n
    const std::size_t q_block = Q.rank(n - 1);   // Q_{n-1}
    // columns [(D_iQ)_n ; Q_{n-1}], rows [Q_{n-1}-dual block ; Q_{i-n}-dual block]
    PolyMatrix m(q_block + d_block, d_block + q_block, zero);
    m.set_block(0, d_block, PolyMatrix::identity(q_block, zero).scaled(eps * sign_of((i + 1) * n)));
    m.set_block(q_block, 0, PolyMatrix::identity(d_block, zero).scaled(sign_of(n)));
    chi.emplace(n, std::move(m));
  }
  return SymmetricSpace::make(SymmetricPair::make(std::move(C), pair.twist, i + 1, std::move(chi), eps));
}

SymmetricPair tensor_forms(const SymmetricPair& a, const SymmetricPair& b) {
  const ChainComplex& P = a.complex;
  const ChainComplex& Q = b.complex;
  ChainComplex T = tensor(P, Q);
  const std::int64_t i = a.shift, j = b.shift;
  std::map<std::int64_t, PolyMatrix> form;
  for (const auto& [n, r] : T.ranks()) {
    PolyMatrix m(T.rank(i + j - n), r, T.zero());
    for (const auto& [p, rp] : P.ranks()) {
      const std::int64_t q = n - p;
      if (Q.rank(q) == 0) continue;
      const PolyMatrix blk = a.form.at(p).kron(b.form.at(q)).scaled(sign_of(q * (p + i)));
      if (blk.rows() == 0) continue;
      m.set_block(tensor_offset(P, Q, i + j - n, i - p), tensor_offset(P, Q, n, p), blk);
    }
    form.emplace(n, std::move(m));
  }
  return SymmetricPair::make(std::move(T), a.twist * b.twist, i + j, std::move(form), a.epsilon * b.epsilon);
}

// ---------------------------------------------------------------- isometries

bool localize_check_isometric(const SymmetricPair& a, const SymmetricPair& b, const PolyElement& t,
                              const std::map<std::int64_t, LocMatrix>& witness_p,
                              const LocalizedElement& witness_t) {
  if (a.complex.ring() != b.complex.ring() || t.ring() != a.complex.ring())
    fail(ErrorKind::Structural, "isometry check over mismatched rings");
  if (witness_t.t() != t) fail(ErrorKind::Structural, "witness scalar lives in a different localization");
  if (!witness_t.is_unit())
    fail(ErrorKind::Validation, "witness scalar " + witness_t.to_string() + " is not a unit after inverting " +
                                    t.to_string());
  if (a.shift != b.shift || a.epsilon != b.epsilon) return false;

  const LocalizedElement lzero = LocalizedElement::from_poly(t.zero_like(), t);
  auto W = [&](std::int64_t n) {
    auto it = witness_p.find(n);
    if (it != witness_p.end()) return it->second;
    return LocMatrix(a.complex.rank(n), b.complex.rank(n), lzero);
  };

  auto [lo, hi] = joint_range(a.complex, b.complex);
  for (std::int64_t n = lo; n <= hi; ++n) {
    const LocMatrix w = W(n);
    if (w.rows() != a.complex.rank(n) || w.cols() != b.complex.rank(n))
      fail(ErrorKind::Structural, "witness component " + std::to_string(n) + " has shape " + w.shape());
    if (w.rows() != w.cols())
      fail(ErrorKind::Validation, "witness component " + std::to_string(n) + " is not square");
    if (w.rows() == 0) continue;
    std::uint32_t k = 0;
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) k = std::max(k, w(r, c).t_power());
    PolyMatrix cleared(w.rows(), w.cols(), t.zero_like());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c)
        cleared(r, c) = w(r, c).numerator() * t.pow(k - w(r, c).t_power());
    if (!LocalizedElement::from_poly(determinant(cleared), t).is_unit())
      fail(ErrorKind::Validation, "witness component " + std::to_string(n) + " has determinant " +
                                      determinant(cleared).to_string() + " (times a power of 1/t), not +-t^k");
  }

  for (std::int64_t n = lo; n <= hi + 1; ++n) {
    if (W(n - 1) * localize(b.complex.d(n), t) != localize(a.complex.d(n), t) * W(n)) return false;
  }
  const std::int64_t i = a.shift;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const LocMatrix lhs = W(i - n).transpose() * localize(a.form.at(n), t) * W(n);
    if (lhs != localize(b.form.at(n), t).scaled(witness_t)) return false;
  }
  return true;
}

}  // namespace wittcalc

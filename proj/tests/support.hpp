#pragma once

// Random instance generators and independent oracles shared by the test
// suites and the acceptance binary.

#include "wittcalc/chain.hpp"
#include "wittcalc/dichotomy.hpp"
#include "wittcalc/geometry.hpp"

#include <random>
#include <string>
#include <vector>

namespace wittcalc::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline std::vector<std::string> gen_names(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(stem + std::to_string(k));
  return out;
}

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long lo = -3, long hi = 3) {
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = uniform(rng, lo, hi);
  return m;
}

inline PicElement random_element(Rng& rng, const PicLattice& l, long lo = -5, long hi = 5) {
  std::vector<Integer> c;
  for (std::size_t k = 0; k < l.rank(); ++k) c.emplace_back(uniform(rng, lo, hi));
  return PicElement(l, std::move(c));
}

/// A unimodular matrix together with its inverse, both built from the same
/// sequence of elementary row operations (so the inverse is known without
/// any linear algebra).
struct UnimodularPair {
  IntMatrix m;
  IntMatrix inv;
};

inline UnimodularPair random_unimodular(Rng& rng, std::size_t n, int ops = 6) {
  UnimodularPair p{IntMatrix::identity(n), IntMatrix::identity(n)};
  if (n == 0) return p;
  for (int k = 0; k < ops; ++k) {
    const std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    const std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    if (i == j) {
      // negate row i: E = E^-1
      IntMatrix e = IntMatrix::identity(n);
      e(i, i) = -1;
      p.m = e * p.m;
      p.inv = p.inv * e;
    } else {
      const long a = uniform(rng, -2, 2);
      IntMatrix e = IntMatrix::identity(n), einv = IntMatrix::identity(n);
      e(i, j) = a;
      einv(i, j) = -a;
      p.m = e * p.m;
      p.inv = p.inv * einv;
    }
  }
  return p;
}

struct RandomInstance {
  BlowupDiagram d;
  HypothesisData h;
  IntMatrix alpha_inv_oracle;  // inverse of alpha*, known by construction
  IntMatrix lambda_row_y;      // last row of alpha~*, as a row over Pic(Y)
};

inline BlowupDiagram random_diagram(Rng& rng, bool regular = true) {
  const std::size_t rx = static_cast<std::size_t>(uniform(rng, 1, 3));
  const std::size_t rz = static_cast<std::size_t>(uniform(rng, 0, 3));
  const std::int64_t c = uniform(rng, 2, 6);
  const SchemeNode X = SchemeNode::create("X", PicLattice::create("Pic(X)", gen_names("H", rx)), regular, true);
  const SchemeNode Z = SchemeNode::create("Z", PicLattice::create("Pic(Z)", gen_names("h", rz)), regular, true);
  return build_blowup(X, Z, c, LatticeHom(X.pic(), Z.pic(), random_matrix(rng, rz, rx)),
                      random_element(rng, Z.pic()));
}

inline RandomInstance random_instance(Rng& rng, bool regular = true) {
  RandomInstance out;
  out.d = random_diagram(rng, regular);
  const std::size_t rx = out.d.X.pic().rank();
  const SchemeNode Y = SchemeNode::create("Y", PicLattice::create("Pic(Y)", gen_names("y", rx)), regular, true);
  const UnimodularPair u = random_unimodular(rng, rx);
  out.alpha_inv_oracle = u.inv;
  out.lambda_row_y = random_matrix(rng, 1, rx);
  IntMatrix at(rx + 1, rx);
  for (std::size_t r = 0; r < rx; ++r)
    for (std::size_t c = 0; c < rx; ++c) at(r, c) = u.m(r, c);
  for (std::size_t c = 0; c < rx; ++c) at(rx, c) = out.lambda_row_y(0, c);
  out.h = attach_hypothesis(out.d, Y, LatticeHom(Y.pic(), out.d.U.pic(), u.m), LatticeHom(Y.pic(), out.d.Bl.pic(), at),
                            uniform(rng, 1, 4));
  return out;
}

/// lambda(L) = (last row of alpha~*) . (alpha*)^-1 . L, from the oracle inverse.
inline Integer lambda_oracle(const RandomInstance& inst, const PicElement& L) {
  const auto y = inst.alpha_inv_oracle.apply(L.coords());
  Integer s = 0;
  for (std::size_t k = 0; k < y.size(); ++k) s += inst.lambda_row_y(0, k) * y[k];
  return s;
}

/// Parity oracle: Case A iff ell - (c - 1) is even, computed on machine ints.
inline bool parity_case_a(long ell, long c) { return ((ell - (c - 1)) % 2 + 2) % 2 == 0; }

inline DualizingClass random_dualizing(Rng& rng, const SchemeNode& s) {
  return DualizingClass(s, random_element(rng, s.pic()), uniform(rng, -4, 4));
}

// ------------------------------------------------------------ chain helpers

inline PolyElement random_poly(Rng& rng, const PolyRing& ring, int terms = 2, long coeff = 3) {
  PolyElement p(ring, 0);
  for (int k = 0; k < terms; ++k) {
    Exponents e(ring.nvars(), 0);
    for (auto& v : e) v = static_cast<std::uint32_t>(uniform(rng, 0, 1));
    p = p + PolyElement::monomial(ring, e, uniform(rng, -coeff, coeff));
  }
  return p;
}

inline PolyMatrix random_poly_matrix(Rng& rng, const PolyRing& ring, std::size_t r, std::size_t c) {
  PolyMatrix m(r, c, PolyElement(ring, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_poly(rng, ring);
  return m;
}

/// Product of elementary matrices, possibly negated: invertible over any ring.
inline PolyMatrix random_poly_unimodular(Rng& rng, const PolyRing& ring, std::size_t n) {
  const PolyElement zero(ring, 0);
  PolyMatrix m = PolyMatrix::identity(n, zero);
  for (int k = 0; k < 5 && n > 1; ++k) {
    const std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    PolyMatrix e = PolyMatrix::identity(n, zero);
    e(i, j) = random_poly(rng, ring, 1, 2);
    m = e * m;
  }
  if (uniform(rng, 0, 1) == 1) m = m.scaled(-1L);
  return m;
}

/// Small random complex with d o d = 0: a two-term complex, possibly padded
/// with a split third term d_{n+1} = (something killed by d_n).
inline ChainComplex random_complex(Rng& rng, const PolyRing& ring) {
  const std::int64_t lo = uniform(rng, -2, 2);
  const int len = static_cast<int>(uniform(rng, 1, 3));
  std::map<std::int64_t, std::size_t> ranks;
  for (int k = 0; k < len; ++k) ranks[lo + k] = static_cast<std::size_t>(uniform(rng, 1, 2));
  std::map<std::int64_t, PolyMatrix> d;
  if (len >= 2) d.emplace(lo + 1, random_poly_matrix(rng, ring, ranks[lo], ranks[lo + 1]));
  if (len == 3) {
    // d_{lo+2} = 0 keeps d o d = 0 for any d_{lo+1}.
    d.emplace(lo + 2, PolyMatrix(ranks[lo + 1], ranks[lo + 2], PolyElement(ring, 0)));
  }
  return ChainComplex(ring, ranks, d);
}

/// Koszul complex of (a, b): A -> A^2 -> A in degrees 2, 1, 0.
inline ChainComplex koszul2(const PolyElement& a, const PolyElement& b) {
  const PolyElement z = a.zero_like();
  PolyMatrix d1(1, 2, z), d2(2, 1, z);
  d1(0, 0) = a;
  d1(0, 1) = b;
  d2(0, 0) = -b;
  d2(1, 0) = a;
  return ChainComplex(a.ring(), {{0, 1}, {1, 2}, {2, 1}}, {{1, d1}, {2, d2}});
}

}  // namespace wittcalc::testing

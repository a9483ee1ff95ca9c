#include "support.hpp"

#include "wittcalc/chain.hpp"
#include "wittcalc/errors.hpp"

#include <gtest/gtest.h>

using namespace wittcalc;
using namespace wittcalc::testing;

namespace {

const PolyRing& zxy() {
  static const PolyRing r = PolyRing::parse("Z[x,y]");
  return r;
}

PolyElement P(const std::string& s) { return PolyElement::parse(zxy(), s); }

PolyMatrix m1(const PolyElement& v) {
  PolyMatrix m(1, 1, v.zero_like());
  m(0, 0) = v;
  return m;
}

PolyMatrix mat(std::vector<std::vector<std::string>> rows) {
  PolyMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), P("0"));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = P(rows[i][j]);
  return m;
}

// [A --v--> A] in degrees 1 -> 0.
ChainComplex arrow(const PolyElement& v) { return ChainComplex(v.ring(), {{0, 1}, {1, 1}}, {{1, m1(v)}}); }

ChainComplex point(const PolyRing& ring, std::size_t r = 1, std::int64_t deg = 0) {
  return ChainComplex(ring, {{deg, r}});
}

// A random symmetric pair: degree-0 forms, hyperbolic spaces on random
// complexes, and tensor products of those.
SymmetricPair random_pair(Rng& rng, int depth = 0) {
  const long kind = uniform(rng, 0, depth < 1 ? 2 : 1);
  if (kind == 0) {
    const std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 2));
    PolyMatrix m(n, n, P("0"));
    const int eps = uniform(rng, 0, 1) ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const PolyElement v = (i == j && eps == -1) ? P("0") : random_poly(rng, zxy(), 2);
        m(i, j) = v;
        m(j, i) = eps == 1 ? v : -v;
      }
    return form_in_degree_zero(m, eps);
  }
  if (kind == 1) return hyperbolic(random_complex(rng, zxy()), uniform(rng, -2, 2), uniform(rng, 0, 1) ? 1 : -1);
  return tensor_forms(random_pair(rng, depth + 1), random_pair(rng, depth + 1));
}

}  // namespace

// ----------------------------------------------------------------- complexes

TEST(ChainComplex, RejectsNonZeroSquare) {
  const PolyMatrix d1 = mat({{"x"}}), d2 = mat({{"1"}});
  EXPECT_THROW(ChainComplex(zxy(), {{0, 1}, {1, 1}, {2, 1}}, {{1, d1}, {2, d2}}), Error);
  EXPECT_NO_THROW(ChainComplex(zxy(), {{0, 1}, {1, 1}, {2, 1}}, {{1, d1}, {2, mat({{"0"}})}}));
  EXPECT_THROW(ChainComplex(zxy(), {{0, 1}, {1, 2}}, {{1, d1}}), Error);
}

TEST(Dual, ArrowGoesToDegreesZeroMinusOne) {
  const ChainComplex d = dual(arrow(P("x")));
  EXPECT_EQ(d.rank(0), 1u);
  EXPECT_EQ(d.rank(-1), 1u);
  EXPECT_EQ(d.rank(1), 0u);
  // d^_0 = (-1)^0 d_1^T
  EXPECT_EQ(d.d(0), mat({{"x"}}));
}

TEST(Dual, PointStaysInDegreeZero) {
  const ChainComplex d = dual(point(zxy(), 3));
  EXPECT_EQ(d.ranks(), (std::map<std::int64_t, std::size_t>{{0, 3}}));
}

TEST(Dual, ShiftedDualOfArrowHasMinusT) {
  const ChainComplex d = shifted_dual(arrow(P("x")), 1);
  EXPECT_EQ(d.rank(1), 1u);
  EXPECT_EQ(d.rank(0), 1u);
  EXPECT_EQ(d.d(1), mat({{"-x"}}));
}

TEST(Shift, Examples) {
  const ChainComplex a = arrow(P("x"));
  const ChainComplex s = shift(a, 1);
  EXPECT_EQ(s.rank(2), 1u);
  EXPECT_EQ(s.rank(1), 1u);
  EXPECT_EQ(s.d(2), mat({{"-x"}}));
  EXPECT_EQ(shift(s, -1), a);
  EXPECT_EQ(shift(a, 0), a);
}

TEST(Cone, OfMultiplicationByT) {
  const ChainComplex A = point(zxy());
  const ChainComplex c = cone(ChainMap::make(A, A, {{0, mat({{"x"}})}}));
  EXPECT_EQ(c, arrow(P("x")));
}

TEST(Cone, OfIdentityIsContractible) {
  const ChainComplex A = point(zxy());
  const ChainComplex c = cone(ChainMap::identity(A));
  // h_0 : C_0 = A -> C_1 = A.
  EXPECT_TRUE(is_contracting_homotopy(c, {{0, mat({{"1"}})}}));
  EXPECT_FALSE(is_contracting_homotopy(c, {{0, mat({{"2"}})}}));
}

TEST(Cone, OfZeroMapIsShift) {
  Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    const ChainComplex p = random_complex(rng, zxy());
    const ChainComplex zero(zxy(), {});
    EXPECT_EQ(cone(ChainMap::make(p, zero, {})), shift(p, 1));
  }
}

TEST(Cone, RejectsNonChainMap) {
  const ChainComplex a = arrow(P("x"));
  const ChainMap bad = ChainMap::unchecked(a, a, {{0, mat({{"1"}})}, {1, mat({{"2"}})}});
  EXPECT_EQ(bad.first_failing_square(), 1);
  try {
    cone(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("degree 1"), std::string::npos);
  }
}

TEST(Tensor, KoszulOnTwoElements) {
  const ChainComplex k = tensor(arrow(P("x")), arrow(P("y")));
  EXPECT_EQ(k.ranks(), (std::map<std::int64_t, std::size_t>{{0, 1}, {1, 2}, {2, 1}}));
  // Hand computation: degree-1 basis is (P_0 (x) Q_1, P_1 (x) Q_0).
  EXPECT_EQ(k.d(1), mat({{"y", "x"}}));
  EXPECT_EQ(k.d(2), mat({{"x"}, {"-y"}}));
  // Isomorphic to the textbook Koszul complex of (y, x) via -1 in degree 2.
  const ChainComplex textbook = koszul2(P("y"), P("x"));
  EXPECT_EQ(textbook.d(1), k.d(1));
  EXPECT_EQ(textbook.d(2), k.d(2).scaled(-1L));
}

TEST(Tensor, UnitAndZero) {
  Rng rng(52);
  for (int k = 0; k < 20; ++k) {
    const ChainComplex p = random_complex(rng, zxy());
    EXPECT_EQ(tensor(p, point(zxy())), p);
    EXPECT_EQ(tensor(point(zxy()), p), p);
    EXPECT_TRUE(tensor(p, ChainComplex(zxy(), {})).is_zero());
  }
  EXPECT_THROW(tensor(point(zxy()), point(PolyRing())), Error);
}

// --------------------------------------------------------------------- forms

TEST(SymmetricCone, DivisorPairGivesMinusOneOne) {
  const SymmetricPair t = form_in_degree_zero(mat({{"x"}}), 1, Twist::named("oE-dual"));
  const SymmetricSpace s = symmetric_cone(t);
  EXPECT_EQ(s.pair.complex, arrow(P("x")));
  EXPECT_EQ(s.pair.shift, 1);
  EXPECT_EQ(s.pair.epsilon, 1);
  EXPECT_EQ(s.pair.form.at(1), mat({{"-1"}}));
  EXPECT_EQ(s.pair.form.at(0), mat({{"1"}}));
  EXPECT_EQ(s.pair.form.target.d(1), mat({{"-x"}}));
  EXPECT_EQ(s.pair.twist.to_string(), "oE-dual");
}

TEST(SymmetricCone, RejectsAsymmetricPair) {
  SymmetricPair p = form_in_degree_zero(mat({{"1", "x"}, {"x", "1"}}));
  p.form.components[0] = mat({{"1", "x"}, {"0", "1"}});
  EXPECT_TRUE(p.symmetry_defect().has_value());
  EXPECT_THROW(symmetric_cone(p), Error);
}

TEST(TensorForms, Examples) {
  const SymmetricPair t = form_in_degree_zero(mat({{"x"}}));
  const SymmetricPair u = form_in_degree_zero(mat({{"y"}}));
  EXPECT_EQ(tensor_forms(t, u).form.at(0), mat({{"x*y"}}));
  const SymmetricPair unit = form_in_degree_zero(mat({{"1"}}));
  const SymmetricPair h = hyperbolic(arrow(P("x")), 1);
  const SymmetricPair uh = tensor_forms(unit, h);
  EXPECT_EQ(uh.complex, h.complex);
  EXPECT_EQ(uh.form.components, h.form.components);
  // Oracle: Kronecker product of (t) and diag(1, 3).
  const SymmetricPair d = tensor_forms(t, form_in_degree_zero(mat({{"1", "0"}, {"0", "3"}})));
  EXPECT_EQ(d.form.at(0), mat({{"x", "0"}, {"0", "3*x"}}));
  EXPECT_FALSE(d.nondegenerate());
}

TEST(LocalizeIsometric, Examples) {
  const PolyElement t = P("x");
  const SymmetricPair a = form_in_degree_zero(mat({{"x"}}));
  const SymmetricPair b = form_in_degree_zero(mat({{"1"}}));
  const LocalizedElement inv_t(P("1"), 1, t);
  const LocalizedElement one = LocalizedElement::from_poly(P("1"), t);
  EXPECT_TRUE(localize_check_isometric(a, b, t, {{0, LocMatrix::scalar(1, inv_t)}}, inv_t));
  EXPECT_TRUE(localize_check_isometric(a, a, t, {{0, LocMatrix::scalar(1, one)}}, one));
  EXPECT_FALSE(localize_check_isometric(a, b, t, {{0, LocMatrix::scalar(1, one)}}, one));
  // x + 1 is not a unit after inverting x.
  const LocalizedElement bad = LocalizedElement::from_poly(P("x+1"), t);
  EXPECT_THROW(localize_check_isometric(a, b, t, {{0, LocMatrix::scalar(1, bad)}}, one), Error);
}

TEST(Hyperbolic, IsSymmetricAndNondegenerate) {
  Rng rng(53);
  for (int k = 0; k < 50; ++k) {
    const ChainComplex p = random_complex(rng, zxy());
    const std::int64_t i = uniform(rng, -3, 3);
    const SymmetricPair h = hyperbolic(p, i);
    EXPECT_FALSE(h.symmetry_defect().has_value());
    EXPECT_TRUE(h.nondegenerate());
    EXPECT_NO_THROW(SymmetricSpace::make(h));
  }
}

// ------------------------------------------------------------- properties

TEST(ChainProperty, DerivedComplexesSquareToZero) {
  // The constructor rejects d o d != 0, so building succeeds iff the property holds.
  Rng rng(54);
  for (int k = 0; k < 500; ++k) {
    const ChainComplex p = random_complex(rng, zxy()), q = random_complex(rng, zxy());
    const std::int64_t s = uniform(rng, -3, 3);
    EXPECT_NO_THROW({
      (void)dual(p);
      (void)shift(p, s);
      (void)shifted_dual(q, s);
      (void)tensor(p, q);
      (void)direct_sum(p, q);
      (void)cone(ChainMap::identity(p));
    });
  }
}

TEST(ChainProperty, DualIsAnInvolutionUpToTheSignIdentification) {
  Rng rng(55);
  for (int k = 0; k < 500; ++k) {
    const ChainComplex p = random_complex(rng, zxy());
    const ChainComplex dd = dual(dual(p));
    EXPECT_EQ(dd.ranks(), p.ranks());
    for (const auto& [n, d] : p.differentials()) EXPECT_EQ(dd.d(n), d.scaled(-1L));
    const ChainMap w = double_dual_identification(p);
    EXPECT_TRUE(w.commutes());
    for (const auto& [n, r] : p.ranks())
      EXPECT_EQ(w.at(n), PolyMatrix::identity(r, p.zero()).scaled(n % 2 == 0 ? 1L : -1L));
    EXPECT_EQ(shift(shift(p, 3), -3), p);
  }
}

TEST(ChainProperty, ConeOfIsomorphismIsContractible) {
  Rng rng(56);
  for (int k = 0; k < 500; ++k) {
    const ChainComplex p = random_complex(rng, zxy());
    std::map<std::int64_t, PolyMatrix> f, finv;
    for (const auto& [n, r] : p.ranks()) {
      f.emplace(n, random_poly_unimodular(rng, zxy(), r));
      finv.emplace(n, *inverse_unimodular(f.at(n)));
    }
    std::map<std::int64_t, PolyMatrix> dq;
    for (const auto& [n, d] : p.differentials()) dq.emplace(n, f.at(n - 1) * d * finv.at(n));
    const ChainComplex q(zxy(), p.ranks(), dq);
    const ChainMap phi = ChainMap::make(p, q, f);
    const ChainComplex c = cone(phi);
    // h_n : C_n = Q_n + P_{n-1} -> C_{n+1} = Q_{n+1} + P_n, h = [[0, 0], [f_n^-1, 0]].
    std::map<std::int64_t, PolyMatrix> h;
    for (std::int64_t n = c.min_degree() - 1; n <= c.max_degree(); ++n) {
      PolyMatrix m(c.rank(n + 1), c.rank(n), p.zero());
      if (finv.count(n)) m.set_block(q.rank(n + 1), 0, finv.at(n));
      h.emplace(n, std::move(m));
    }
    EXPECT_TRUE(is_contracting_homotopy(c, h));
    EXPECT_EQ(c.euler_characteristic(), 0);
  }
}

TEST(ChainProperty, TensorIsAssociativeAfterReindexing) {
  Rng rng(57);
  for (int k = 0; k < 500; ++k) {
    const ChainComplex a = random_complex(rng, zxy()), b = random_complex(rng, zxy()), c = random_complex(rng, zxy());
    const ChainMap assoc = tensor_associator(a, b, c);
    EXPECT_TRUE(assoc.commutes());
    EXPECT_EQ(assoc.source, tensor(tensor(a, b), c));
    EXPECT_EQ(assoc.target, tensor(a, tensor(b, c)));
    // Oracle: each component is a permutation matrix.
    for (const auto& [n, m] : assoc.components) {
      ASSERT_EQ(m.rows(), m.cols());
      for (std::size_t r = 0; r < m.rows(); ++r) {
        int ones = 0;
        for (std::size_t col = 0; col < m.cols(); ++col) {
          if (m(r, col) == P("1")) ++ones;
          else EXPECT_TRUE(m(r, col).is_zero());
        }
        EXPECT_EQ(ones, 1);
      }
    }
  }
}

TEST(ChainProperty, EulerCharacteristicOfCone) {
  Rng rng(58);
  for (int k = 0; k < 500; ++k) {
    const ChainComplex p = random_complex(rng, zxy()), q = random_complex(rng, zxy());
    std::map<std::int64_t, PolyMatrix> zero;
    const ChainComplex c = cone(ChainMap::make(p, q, zero));
    EXPECT_EQ(c.euler_characteristic(), q.euler_characteristic() - p.euler_characteristic());
    const ChainComplex ci = cone(ChainMap::identity(p));
    EXPECT_EQ(ci.euler_characteristic(), 0);
  }
}

TEST(ChainProperty, SymmetricConeIsAlwaysASpace) {
  Rng rng(59);
  for (int k = 0; k < 300; ++k) {
    const SymmetricPair pair = random_pair(rng);
    EXPECT_FALSE(pair.symmetry_defect().has_value());
    const SymmetricSpace s = symmetric_cone(pair);
    EXPECT_FALSE(s.pair.symmetry_defect().has_value());
    EXPECT_TRUE(s.pair.nondegenerate());
    EXPECT_EQ(s.pair.shift, pair.shift + 1);
    EXPECT_EQ(s.pair.epsilon, pair.epsilon);
    for (const auto& [n, m] : s.pair.form.components) {
      const PolyElement det = determinant(m);
      EXPECT_TRUE(det.is_unit());
    }
  }
}

TEST(ChainProperty, TensorFormsMultiplyShiftsAndEpsilons) {
  Rng rng(60);
  for (int k = 0; k < 200; ++k) {
    const SymmetricPair a = random_pair(rng, 1), b = random_pair(rng, 1);
    const SymmetricPair t = tensor_forms(a, b);
    EXPECT_EQ(t.shift, a.shift + b.shift);
    EXPECT_EQ(t.epsilon, a.epsilon * b.epsilon);
    EXPECT_FALSE(t.symmetry_defect().has_value());
    EXPECT_EQ(t.nondegenerate(), a.nondegenerate() && b.nondegenerate());
  }
}

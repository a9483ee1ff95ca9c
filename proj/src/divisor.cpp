#include "wittcalc/divisor.hpp"

#include "wittcalc/errors.hpp"

#include <utility>

namespace wittcalc {

DivisorModel DivisorModel::make(PolyRing ring, PolyElement t) {
  if (t.ring() != ring)
    fail(ErrorKind::Structural, "t is in " + t.ring().to_string() + ", the model ring is " + ring.to_string());
  if (t.is_zero()) fail(ErrorKind::Domain, "t = 0 does not cut out a divisor");
  if (t.is_unit()) fail(ErrorKind::Domain, "t = " + t.to_string() + " is a unit, so E would be empty");
  return DivisorModel{std::move(ring), std::move(t)};
}

DivisorModel DivisorModel::parse(const std::string& ring, const std::string& t) {
  const PolyRing r = PolyRing::parse(ring);
  return make(r, PolyElement::parse(r, t));
}

SymmetricPair divisor_pair(const DivisorModel& m) {
  PolyMatrix form(1, 1, m.t);
  form(0, 0) = m.t;
  return SymmetricPair::make(ChainComplex(m.ring, {{0, 1}}), Twist::named(kDivisorTwist), 0, {{0, form}}, 1);
}

SymmetricSpace koszul_pushforward_unit(const DivisorModel& m) {
  const PolyElement one = m.t.one_like();
  PolyMatrix d1(1, 1, m.t);
  d1(0, 0) = m.t;
  ChainComplex c(m.ring, {{0, 1}, {1, 1}}, {{1, d1}});
  PolyMatrix chi1(1, 1, one), chi0(1, 1, one);
  chi1(0, 0) = -one;
  chi0(0, 0) = one;
  return SymmetricSpace::make(
      SymmetricPair::make(std::move(c), Twist::named(kDivisorTwist), 1, {{1, chi1}, {0, chi0}}, 1));
}

std::optional<BlockCheck> FactorizationReport::first_failure() const {
  for (const auto& b : blocks)
    if (!b.ok) return b;
  return std::nullopt;
}

FactorizationReport verify_factorization(const DivisorModel& m, const SymmetricPair& phi) {
  if (phi.complex.ring() != m.ring)
    fail(ErrorKind::Structural, "form over " + phi.complex.ring().to_string() + ", model over " +
                                    m.ring.to_string());
  const SymmetricPair lhs = symmetric_cone(tensor_forms(divisor_pair(m), phi)).pair;
  const SymmetricPair rhs = tensor_forms(koszul_pushforward_unit(m).pair, phi);
  const ChainComplex& P = phi.complex;
  const std::int64_t j = phi.shift;
  const PolyElement zero = P.zero();

  FactorizationReport rep;
  rep.phi_nondegenerate = phi.nondegenerate();
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.blocks.push_back({std::move(name), ok, std::move(detail)});
  };
  add("twist", lhs.twist == rhs.twist, lhs.twist.to_string() + " vs " + rhs.twist.to_string());
  add("shift", lhs.shift == rhs.shift, std::to_string(lhs.shift) + " vs " + std::to_string(rhs.shift));
  add("epsilon", lhs.epsilon == rhs.epsilon, std::to_string(lhs.epsilon) + " vs " + std::to_string(rhs.epsilon));

  std::map<std::int64_t, PolyMatrix> theta;
  for (const auto& [n, r] : rhs.complex.ranks()) {
    const std::size_t top = P.rank(j - n), low = P.rank(n - 1);
    PolyMatrix t(top + low, P.rank(n) + low, zero);
    t.set_block(0, 0, phi.form.at(n));
    t.set_block(top, P.rank(n), PolyMatrix::identity(low, zero));
    theta.emplace(n, std::move(t));
  }
  bool shapes_ok = true;
  for (const auto& [n, t] : theta)
    if (t.rows() != lhs.complex.rank(n)) shapes_ok = false;
  for (const auto& [n, r] : lhs.complex.ranks())
    if (!theta.count(n) && r > 0) shapes_ok = false;
  add("comparison map shapes", shapes_ok, shapes_ok ? "" : "ranks of LHS and RHS do not match phi");
  if (!shapes_ok) return rep;

  const ChainMap th = ChainMap::unchecked(rhs.complex, lhs.complex, theta);
  const std::int64_t lo = std::min(lhs.complex.min_degree(), rhs.complex.min_degree());
  const std::int64_t hi = std::max(lhs.complex.max_degree(), rhs.complex.max_degree());
  for (std::int64_t n = lo; n <= hi + 1; ++n) {
    const PolyMatrix a = lhs.complex.d(n) * th.at(n);
    const PolyMatrix b = th.at(n - 1) * rhs.complex.d(n);
    add("chain square " + std::to_string(n), a == b, a == b ? "" : a.to_string() + " vs " + b.to_string());
  }
  for (std::int64_t n = lo; n <= hi; ++n) {
    const PolyMatrix pulled = th.at(j + 1 - n).transpose() * lhs.form.at(n) * th.at(n);
    const PolyMatrix target = rhs.form.at(n);
    add("form block " + std::to_string(n), pulled == target,
        pulled == target ? target.to_string() : pulled.to_string() + " vs " + target.to_string());
  }
  rep.passed = !rep.first_failure().has_value();
  rep.literal_equal = lhs.complex == rhs.complex && lhs.form.components == rhs.form.components;
  return rep;
}

RestrictionWitness restriction_witness(const DivisorModel& m, const SymmetricPair& phi) {
  const LocalizedElement inv_t(m.t.one_like(), 1, m.t);
  RestrictionWitness w{{}, inv_t};
  for (const auto& [n, r] : phi.complex.ranks()) w.p.emplace(n, LocMatrix::scalar(r, inv_t));
  return w;
}

namespace {

bool localized_cone_contractible(const DivisorModel& m, const SymmetricPair& q, const SymmetricPair& phi) {
  const ChainComplex C = cone(q.form);
  const std::int64_t j = q.shift;
  const LocalizedElement lzero = LocalizedElement::from_poly(m.t.zero_like(), m.t);
  const LocalizedElement inv_t(m.t.one_like(), 1, m.t);

  // g_n = psi_n^-1 = (t phi_n)^-1 : (D_jQ)_n -> Q_n
  std::map<std::int64_t, LocMatrix> g;
  for (const auto& [n, r] : q.complex.ranks()) {
    auto inv = inverse_unimodular(phi.form.at(n));
    if (!inv) return false;
    g.emplace(n, localize(*inv, m.t).scaled(inv_t));
  }
  // h_n : C_n = (D_jQ)_n + Q_{n-1} -> C_{n+1} = (D_jQ)_{n+1} + Q_n, h = [[0, 0], [g_n, 0]]
  auto h = [&](std::int64_t n) {
    const std::size_t dn = q.complex.rank(j - n), qn1 = q.complex.rank(n - 1);
    const std::size_t dn1 = q.complex.rank(j - n - 1), qn = q.complex.rank(n);
    LocMatrix out(dn1 + qn, dn + qn1, lzero);
    auto it = g.find(n);
    if (it != g.end()) out.set_block(dn1, 0, it->second);
    return out;
  };
  for (const auto& [n, r] : C.ranks()) {
    const LocMatrix s = localize(C.d(n + 1), m.t) * h(n) + h(n - 1) * localize(C.d(n), m.t);
    if (!s.is_identity()) return false;
  }
  return true;
}

}  // namespace

RestrictionReport verify_restriction(const DivisorModel& m, const SymmetricPair& phi) {
  const SymmetricPair q = tensor_forms(divisor_pair(m), phi);
  const RestrictionWitness w = restriction_witness(m, phi);
  RestrictionReport rep;
  rep.isometric = localize_check_isometric(q, phi, m.t, w.p, w.scalar);
  if (phi.nondegenerate()) rep.cone_contractible_on_u = localized_cone_contractible(m, q, phi);
  rep.passed = rep.isometric && rep.cone_contractible_on_u.value_or(true);
  return rep;
}

}  // namespace wittcalc

#include "wittcalc/geometry.hpp"

#include "wittcalc/errors.hpp"

#include <string>
#include <vector>

namespace wittcalc {

// --------------------------------------------------------------- SchemeNode

SchemeNode SchemeNode::create(std::string name, PicLattice pic, bool regular, bool gorenstein) {
  if (!pic.valid()) fail(ErrorKind::Structural, "scheme " + name + " needs a Picard lattice");
  if (regular && !gorenstein)
    fail(ErrorKind::Domain, "scheme " + name + " is flagged regular but not Gorenstein; regular schemes are Gorenstein");
  SchemeNode s;
  s.data_ = std::make_shared<const Data>(Data{std::move(name), std::move(pic), regular, gorenstein});
  return s;
}

const std::string& SchemeNode::name() const {
  static const std::string empty;
  return data_ ? data_->name : empty;
}
const PicLattice& SchemeNode::pic() const {
  static const PicLattice empty;
  return data_ ? data_->pic : empty;
}
bool SchemeNode::regular() const { return data_ && data_->regular; }
bool SchemeNode::gorenstein() const { return data_ && data_->gorenstein; }

const char* to_string(MorphismKind kind) {
  switch (kind) {
    case MorphismKind::OpenImmersion: return "open-immersion";
    case MorphismKind::RegularClosedImmersion: return "regular-closed-immersion";
    case MorphismKind::BlowDown: return "blow-down";
    case MorphismKind::ProjectiveBundle: return "projective-bundle";
    case MorphismKind::AffineBundle: return "affine-bundle";
    case MorphismKind::Auxiliary: return "auxiliary";
  }
  return "unknown";
}

// ------------------------------------------------------------- MorphismData

MorphismData MorphismData::make(std::string name, SchemeNode source, SchemeNode target, MorphismKind kind,
                                LatticeHom pullback, std::int64_t relative_dim, PicElement omega,
                                bool tor_finite, std::int64_t fiber_dim) {
  if (!(pullback.source() == target.pic()) || !(pullback.target() == source.pic()))
    fail(ErrorKind::Structural, "morphism " + name + ": pull-back must map Pic(" + target.name() +
                                    ") to Pic(" + source.name() + ")");
  if (!(omega.lattice() == source.pic()))
    fail(ErrorKind::Structural, "morphism " + name + ": relative canonical class must live in Pic(" +
                                    source.name() + ")");
  switch (kind) {
    case MorphismKind::OpenImmersion:
      if (!omega.is_zero() || relative_dim != 0)
        fail(ErrorKind::Validation, "open immersion " + name + " must have trivial canonical class and dimension 0");
      break;
    case MorphismKind::AffineBundle:
      if (!omega.is_zero() || (relative_dim != 0 && relative_dim != fiber_dim))
        fail(ErrorKind::Validation, "affine bundle " + name + " must have trivial canonical class and dimension 0 or the fiber dimension");
      break;
    case MorphismKind::RegularClosedImmersion:
      if (relative_dim >= 0)
        fail(ErrorKind::Validation, "regular closed immersion " + name + " must have negative relative dimension (minus its codimension)");
      break;
    default:
      break;
  }
  MorphismData m;
  m.name = std::move(name);
  m.source = std::move(source);
  m.target = std::move(target);
  m.kind = kind;
  m.pullback = std::move(pullback);
  m.relative_dim = relative_dim;
  m.omega = std::move(omega);
  m.tor_finite = tor_finite;
  return m;
}

// ----------------------------------------------------------- DualizingClass

DualizingClass::DualizingClass(SchemeNode s, PicElement b, std::int64_t sh)
    : scheme(std::move(s)), bundle(std::move(b)), shift(sh) {
  if (!(bundle.lattice() == scheme.pic()))
    fail(ErrorKind::Structural, "dualizing class on " + scheme.name() + " has a bundle from " +
                                    bundle.lattice().name());
}

bool DualizingClass::operator==(const DualizingClass& rhs) const {
  return scheme == rhs.scheme && bundle == rhs.bundle && shift == rhs.shift;
}

std::string DualizingClass::to_string() const {
  return bundle.to_string() + "[" + std::to_string(shift) + "]";
}

// ------------------------------------------------------------- construction

namespace {

IntMatrix stacked_identity(std::size_t n) {  // [I; 0], (n+1) x n
  IntMatrix m(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix projection_drop_last(std::size_t n) {  // [I 0], n x (n+1)
  IntMatrix m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<std::string> with_extra(std::vector<std::string> gens, const std::string& extra) {
  gens.push_back(extra);
  return gens;
}

PicElement last_generator_multiple(const PicLattice& l, const Integer& k) {
  std::vector<Integer> c(l.rank());
  c.back() = k;
  return PicElement(l, std::move(c));
}

// (block, k) in Pic(base) + Z.
PicElement extend(const PicLattice& l, const PicElement& block, const Integer& k) {
  std::vector<Integer> c = block.coords();
  c.push_back(k);
  return PicElement(l, std::move(c));
}

}  // namespace

BlowupDiagram build_blowup(const SchemeNode& X, const SchemeNode& Z, std::int64_t c,
                           const LatticeHom& iota_pullback, const PicElement& omega_iota) {
  if (c < 2)
    fail(ErrorKind::Domain, "codimension c >= 2 required for the blow-up setup (got c = " + std::to_string(c) + ")");
  if (!(iota_pullback.source() == X.pic()) || !(iota_pullback.target() == Z.pic()))
    fail(ErrorKind::Structural, "iota pull-back must map Pic(" + X.name() + ") to Pic(" + Z.name() + ")");
  if (!(omega_iota.lattice() == Z.pic()))
    fail(ErrorKind::Structural, "omega_iota must live in Pic(" + Z.name() + ")");

  const std::size_t rx = X.pic().rank();
  const std::size_t rz = Z.pic().rank();

  BlowupDiagram d;
  d.X = X;
  d.Z = Z;
  d.c = c;
  d.omega_iota = omega_iota;

  d.U = SchemeNode::create("U", PicLattice::create("Pic(U)", X.pic().generators()), X.regular(), X.gorenstein());
  d.Bl = SchemeNode::create("Bl", PicLattice::create("Pic(Bl)", with_extra(X.pic().generators(), "O(E)")),
                            X.regular(), X.gorenstein());
  d.E = SchemeNode::create("E", PicLattice::create("Pic(E)", with_extra(Z.pic().generators(), "O_E(-1)")),
                           Z.regular(), Z.gorenstein() && X.gorenstein());

  d.oE = last_generator_multiple(d.Bl.pic(), 1);
  d.oE_restricted = last_generator_multiple(d.E.pic(), 1);

  IntMatrix iota_t_matrix(rz + 1, rx + 1);
  for (std::size_t r = 0; r < rz; ++r)
    for (std::size_t col = 0; col < rx; ++col) iota_t_matrix(r, col) = iota_pullback.matrix()(r, col);
  iota_t_matrix(rz, rx) = 1;

  d.iota = MorphismData::make(symbols::iota, Z, X, MorphismKind::RegularClosedImmersion, iota_pullback, -c, omega_iota);
  d.upsilon = MorphismData::make(symbols::upsilon, d.U, X, MorphismKind::OpenImmersion,
                                 LatticeHom::identity_between(X.pic(), d.U.pic()), 0, PicElement::zero(d.U.pic()));
  d.pi = MorphismData::make(symbols::pi, d.Bl, X, MorphismKind::BlowDown,
                            LatticeHom(X.pic(), d.Bl.pic(), stacked_identity(rx)), 0,
                            last_generator_multiple(d.Bl.pic(), c - 1));
  d.iota_t = MorphismData::make(symbols::iota_t, d.E, d.Bl, MorphismKind::RegularClosedImmersion,
                                LatticeHom(d.Bl.pic(), d.E.pic(), iota_t_matrix), -1,
                                last_generator_multiple(d.E.pic(), 1));
  d.pi_t = MorphismData::make(symbols::pi_t, d.E, Z, MorphismKind::ProjectiveBundle,
                              LatticeHom(Z.pic(), d.E.pic(), stacked_identity(rz)), c - 1,
                              extend(d.E.pic(), -omega_iota, c));
  d.upsilon_t = MorphismData::make(symbols::upsilon_t, d.U, d.Bl, MorphismKind::OpenImmersion,
                                   LatticeHom(d.Bl.pic(), d.U.pic(), projection_drop_last(rx)), 0,
                                   PicElement::zero(d.U.pic()));
  validate_diagram(d);
  return d;
}

void validate_diagram(const BlowupDiagram& d) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::Validation, "blow-up diagram: " + what);
  };
  const std::size_t rx = d.X.pic().rank();
  const std::size_t rz = d.Z.pic().rank();
  check(d.c >= 2, "codimension c >= 2 required");
  check(d.Bl.pic().rank() == rx + 1, "rank Pic(Bl) must be rank Pic(X) + 1");
  check(d.E.pic().rank() == rz + 1, "rank Pic(E) must be rank Pic(Z) + 1");
  check(d.U.pic().rank() == rx, "Pic(U) must have the rank of Pic(X)");

  check(d.pi.pullback.matrix() == stacked_identity(rx), "pi* must be [I; 0]");
  check(d.pi_t.pullback.matrix() == stacked_identity(rz), "pi~* must be [I; 0]");
  check(d.upsilon.pullback.matrix().is_identity(), "upsilon* must be the identity");
  check(d.upsilon_t.pullback.matrix() == projection_drop_last(rx), "upsilon~* must be [I 0]");
  for (std::size_t r = 0; r <= rz; ++r)
    for (std::size_t col = 0; col <= rx; ++col) {
      Integer expected = 0;
      if (r < rz && col < rx) expected = d.iota.pullback.matrix()(r, col);
      if (r == rz && col == rx) expected = 1;
      check(d.iota_t.pullback.matrix()(r, col) == expected, "iota~* must be block-diagonal(iota*, 1)");
    }

  check(d.iota_t.pullback.apply(d.oE) == d.oE_restricted, "iota~*(O(E)) must be O_E(-1)");
  check(d.upsilon_t.pullback.apply(d.oE).is_zero(), "O(E) must restrict to the trivial bundle on U");

  check(d.pi.omega == last_generator_multiple(d.Bl.pic(), d.c - 1), "omega_pi must be (0, c-1)");
  check(d.pi_t.omega == extend(d.E.pic(), -d.omega_iota, d.c), "omega_pi~ must be (-omega_iota, c)");
  check(d.iota_t.omega == last_generator_multiple(d.E.pic(), 1), "omega_iota~ must be (0, 1)");
  check(d.iota.omega == d.omega_iota, "omega_iota mismatch");

  check(d.pi.relative_dim == 0 && d.pi_t.relative_dim == d.c - 1 && d.iota.relative_dim == -d.c &&
            d.iota_t.relative_dim == -1 && d.upsilon.relative_dim == 0 && d.upsilon_t.relative_dim == 0,
        "relative dimensions must be dim pi = 0, dim pi~ = c-1, dim iota = -c, dim iota~ = -1");

  const PicElement lhs = d.pi_t.omega + d.pi_t.pullback.apply(d.omega_iota);
  const PicElement rhs = d.iota_t.omega + d.iota_t.pullback.apply(d.pi.omega);
  check(lhs == rhs, "omega_pi~ + pi~*(omega_iota) must equal omega_iota~ + iota~*(omega_pi)");
  check(lhs == last_generator_multiple(d.E.pic(), d.c), "both composites must equal (0, c) in Pic(E)");
}

// --------------------------------------------------------------- hypothesis

HypothesisData attach_hypothesis(const BlowupDiagram& d, const SchemeNode& Y,
                                 const LatticeHom& alpha_pullback,
                                 const LatticeHom& alpha_t_pullback, std::int64_t fiber_dim) {
  if (!(alpha_pullback.source() == Y.pic()) || !(alpha_pullback.target() == d.U.pic()))
    fail(ErrorKind::Structural, "alpha* must map Pic(" + Y.name() + ") to Pic(U)");
  if (!(alpha_t_pullback.source() == Y.pic()) || !(alpha_t_pullback.target() == d.Bl.pic()))
    fail(ErrorKind::Structural, "alpha~* must map Pic(" + Y.name() + ") to Pic(Bl)");
  if (fiber_dim < 0) fail(ErrorKind::Domain, "affine bundle fiber dimension must be non-negative");

  auto inverse = alpha_pullback.matrix().inverse();
  if (!inverse)
    fail(ErrorKind::Domain, "alpha*: Pic(Y) -> Pic(U) must be invertible over the integers "
                            "(an affine bundle induces an isomorphism on Picard groups)");

  if (!(compose(d.upsilon_t.pullback, alpha_t_pullback) == alpha_pullback))
    fail(ErrorKind::Validation, "alpha~* must be of the form (1; lambda): upsilon~* alpha~* = alpha* fails, "
                                "the restriction of alpha~ to U must be alpha");

  HypothesisData h;
  h.Y = Y;
  h.fiber_dim = fiber_dim;
  h.alpha = MorphismData::make(symbols::alpha, d.U, Y, MorphismKind::AffineBundle, alpha_pullback, fiber_dim,
                               PicElement::zero(d.U.pic()), true, fiber_dim);
  h.alpha_t = MorphismData::make(symbols::alpha_t, d.Bl, Y, MorphismKind::Auxiliary, alpha_t_pullback, fiber_dim,
                                 PicElement::zero(d.Bl.pic()));
  h.alpha_inverse = LatticeHom(d.U.pic(), Y.pic(), *inverse);

  // alpha~* (alpha*)^-1 upsilon*, then keep the O(E) row.
  const LatticeHom circumvolant = compose(alpha_t_pullback, compose(h.alpha_inverse, d.upsilon.pullback));
  const std::size_t rx = d.X.pic().rank();
  IntMatrix lambda_row(1, rx);
  for (std::size_t col = 0; col < rx; ++col) lambda_row(0, col) = circumvolant.matrix()(rx, col);
  h.lambda = LatticeHom(d.X.pic(), PicLattice::create("Z", {"1"}), lambda_row);
  validate_hypothesis(d, h);
  return h;
}

void validate_hypothesis(const BlowupDiagram& d, const HypothesisData& h) {
  if (!h.alpha.pullback.matrix().inverse())
    fail(ErrorKind::Validation, "hypothesis: alpha* is not invertible");
  if (!(compose(d.upsilon_t.pullback, h.alpha_t.pullback) == h.alpha.pullback))
    fail(ErrorKind::Validation, "hypothesis: upsilon~* alpha~* != alpha*");
  if (!compose(h.alpha.pullback, h.alpha_inverse).matrix().is_identity())
    fail(ErrorKind::Validation, "hypothesis: stored inverse of alpha* is wrong");
  for (std::size_t k = 0; k < d.X.pic().rank(); ++k) {
    const PicElement L = PicElement::basis(d.X.pic(), k);
    (void)lambda_of(d, h, L);
  }
}

Integer lambda_of(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L) {
  if (!(L.lattice() == d.X.pic()))
    fail(ErrorKind::Structural, "lambda is defined on Pic(" + d.X.name() + "), got an element of " +
                                    L.lattice().name());
  const PicElement onU = d.upsilon.pullback.apply(L);
  const PicElement onBl = h.alpha_t.pullback.apply(h.alpha_inverse.apply(onU));
  for (std::size_t k = 0; k < L.size(); ++k)
    if (onBl[k] != L[k])
      fail(ErrorKind::Validation, "alpha~*(alpha*)^-1 upsilon*(L) = " + onBl.to_string() +
                                      " does not have Pic(X)-component L = " + L.to_string());
  const Integer lam = onBl[L.size()];
  if (h.lambda.apply(L)[0] != lam)
    fail(ErrorKind::Internal, "stored lambda row disagrees with direct evaluation");
  return lam;
}

// ------------------------------------------------------------ twist algebra

std::optional<PicElement> pushforward_twist_target(const MorphismData& f, const PicElement& M) {
  if (!(M.lattice() == f.source.pic()))
    fail(ErrorKind::Structural, "push-forward along " + f.name + " starts from Pic(" + f.source.name() +
                                    "), got an element of " + M.lattice().name());
  const PicElement N = M - f.omega;
  const IntMatrix& A = f.pullback.matrix();
  const std::size_t rows = A.rows();
  const std::size_t cols = A.cols();

  // Look for a coordinate left inverse: a unit row e_j for every column j.
  std::vector<std::size_t> pick(cols, rows);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t r = 0; r < rows && pick[j] == rows; ++r) {
      bool unit = A(r, j) == 1;
      for (std::size_t k = 0; k < cols && unit; ++k)
        if (k != j && A(r, k) != 0) unit = false;
      if (unit) pick[j] = r;
    }
  bool have_left_inverse = true;
  for (auto p : pick)
    if (p == rows) have_left_inverse = false;

  if (have_left_inverse) {
    std::vector<Integer> c(cols);
    for (std::size_t j = 0; j < cols; ++j) c[j] = N[pick[j]];
    PicElement L(f.target.pic(), std::move(c));
    if (equal_mod2(f.pullback.apply(L), N)) return L;
    return std::nullopt;
  }

  auto x = solve_mod2(A, N.coords());
  if (!x) return std::nullopt;
  std::vector<Integer> c(x->begin(), x->end());
  return PicElement(f.target.pic(), std::move(c));
}

DualizingClass shriek(const MorphismData& f, const DualizingClass& K) {
  if (!(K.scheme == f.target))
    fail(ErrorKind::Structural, f.name + "^! needs a dualizing class on " + f.target.name() + ", got one on " +
                                    K.scheme.name());
  return DualizingClass(f.source, f.pullback.apply(K.bundle) + f.omega, K.shift + f.relative_dim);
}

DualizingClass derived_pullback(const MorphismData& f, const DualizingClass& K) {
  if (!(K.scheme == f.target))
    fail(ErrorKind::Structural, "L" + f.name + "* needs a dualizing class on " + f.target.name() + ", got one on " +
                                    K.scheme.name());
  return DualizingClass(f.source, f.pullback.apply(K.bundle), K.shift);
}

bool picard_sequence_exact(const BlowupDiagram& d) {
  const LatticeHom& restrict = d.upsilon_t.pullback;
  if (!restrict.apply(d.oE).is_zero()) return false;
  // The kernel of an integer matrix is saturated, so a rank-one kernel
  // containing a primitive vector is generated by it.
  return kernel_rank(restrict) == 1 && is_primitive(d.oE);
}

// -------------------------------------------------------------- Grassmannian

GrassmannianInstance grassmannian_instance(std::int64_t d, std::int64_t n, const Integer& lambda_row,
                                           const Integer& omega_iota_coeff) {
  if (d < 2)
    fail(ErrorKind::Domain, "Grassmannian family needs d >= 2 so that codim Gr_d(n-1) = d >= 2 (got d = " +
                                std::to_string(d) + ")");
  if (d > n - 2)
    fail(ErrorKind::Domain, "Grassmannian family needs d <= n-2 (got d = " + std::to_string(d) +
                                ", n = " + std::to_string(n) + ")");
  auto gr = [](std::int64_t k, std::int64_t m) {
    return "Gr(" + std::to_string(k) + "," + std::to_string(m) + ")";
  };
  const std::int64_t c = d * (n - d) - d * (n - 1 - d);
  const std::int64_t fiber_dim = n - d;

  const SchemeNode X = SchemeNode::create(gr(d, n), PicLattice::create("Pic(" + gr(d, n) + ")", {"O(1)"}), true, true);
  const SchemeNode Z =
      SchemeNode::create(gr(d, n - 1), PicLattice::create("Pic(" + gr(d, n - 1) + ")", {"O(1)"}), true, true);
  const SchemeNode Y =
      SchemeNode::create(gr(d - 1, n - 1), PicLattice::create("Pic(" + gr(d - 1, n - 1) + ")", {"O(1)"}), true, true);

  GrassmannianInstance inst;
  inst.d = d;
  inst.n = n;
  inst.diagram = build_blowup(X, Z, c, LatticeHom(X.pic(), Z.pic(), IntMatrix{{1}}),
                              PicElement(Z.pic(), std::vector<Integer>{omega_iota_coeff}));
  IntMatrix alpha_t(2, 1);
  alpha_t(0, 0) = 1;
  alpha_t(1, 0) = lambda_row;
  inst.hypothesis = attach_hypothesis(inst.diagram, Y, LatticeHom(Y.pic(), inst.diagram.U.pic(), IntMatrix{{1}}),
                                      LatticeHom(Y.pic(), inst.diagram.Bl.pic(), alpha_t), fiber_dim);
  return inst;
}

}  // namespace wittcalc

#include "wittcalc/dichotomy.hpp"

#include "wittcalc/errors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wittcalc {

// ------------------------------------------------------------------ WittRef

WittRef WittRef::locally_free(SchemeNode scheme, std::int64_t degree, PicElement twist,
                              std::optional<SchemeNode> support) {
  if (!(twist.lattice() == scheme.pic()))
    fail(ErrorKind::Structural, "twist from " + twist.lattice().name() + " on scheme " + scheme.name());
  WittRef r;
  r.scheme = std::move(scheme);
  r.degree = degree;
  r.twist = std::move(twist);
  r.support = std::move(support);
  return r;
}

WittRef WittRef::coherent(std::int64_t degree, DualizingClass twist, std::optional<SchemeNode> support) {
  WittRef r;
  r.scheme = twist.scheme;
  r.degree = degree;
  r.twist = std::move(twist);
  r.support = std::move(support);
  return r;
}

const PicElement& WittRef::bundle() const {
  if (const auto* p = std::get_if<PicElement>(&twist)) return *p;
  return std::get<DualizingClass>(twist).bundle;
}

const DualizingClass& WittRef::dualizing() const {
  if (const auto* k = std::get_if<DualizingClass>(&twist)) return *k;
  fail(ErrorKind::Structural, "W^" + std::to_string(degree) + "(" + scheme.name() + ") is not a coherent group");
}

bool WittRef::operator==(const WittRef& rhs) const {
  if (!(scheme == rhs.scheme) || degree != rhs.degree || support.has_value() != rhs.support.has_value())
    return false;
  if (support && !(*support == *rhs.support)) return false;
  if (twist.index() != rhs.twist.index()) return false;
  if (is_coherent()) return dualizing() == rhs.dualizing();
  return std::get<PicElement>(twist) == std::get<PicElement>(rhs.twist);
}

namespace {

std::int64_t fold4(std::int64_t i) { return ((i % 4) + 4) % 4; }

}  // namespace

std::string WittRef::to_string(bool fold_degrees) const {
  std::string out = is_coherent() ? "W̃^" : "W^";
  out += std::to_string(fold_degrees ? fold4(degree) : degree);
  if (support) out += "_" + support->name();
  out += "(" + scheme.name() + ", ";
  out += is_coherent() ? dualizing().to_string() : std::get<PicElement>(twist).to_string();
  out += ")";
  return out;
}

// ------------------------------------------------------------ steps/recipes

const char* to_string(StepOp op) {
  switch (op) {
    case StepOp::Pullback: return "pullback";
    case StepOp::ShriekPullback: return "shriek-pullback";
    case StepOp::Pushforward: return "pushforward";
    case StepOp::Periodicity: return "periodicity";
    case StepOp::Devissage: return "devissage";
    case StepOp::InversePullback: return "inverse-pullback";
    case StepOp::Boundary: return "boundary";
  }
  return "unknown";
}

const char* to_string(RecipeKind kind) { return kind == RecipeKind::Section ? "section" : "connecting"; }

std::string RecipeStep::symbol() const {
  const std::string name = morphism ? morphism->name : "";
  switch (op) {
    case StepOp::Pullback:
    case StepOp::ShriekPullback: return name + "*";
    case StepOp::InversePullback: return "(" + name + "*)⁻¹";
    case StepOp::Pushforward:
    case StepOp::Devissage: return name + "_*";
    case StepOp::Boundary: return "∂";
    case StepOp::Periodicity: return "";
  }
  return "";
}

std::string Recipe::composition() const {
  std::string out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const std::string s = it->symbol();
    if (s.empty()) continue;
    if (!out.empty()) out += " ∘ ";
    out += s;
  }
  return out;
}

// ---------------------------------------------------------------- classify

namespace {

PicElement head_block(const PicElement& M, const PicLattice& target) {
  std::vector<Integer> c(M.coords().begin(), M.coords().end() - 1);
  return PicElement(target, std::move(c));
}

PicElement with_last(const PicLattice& l, const PicElement& block, const Integer& k) {
  std::vector<Integer> c = block.coords();
  c.push_back(k);
  return PicElement(l, std::move(c));
}

}  // namespace

Classification classify(const BlowupDiagram& d, const PicElement& M) {
  if (!(M.lattice() == d.Bl.pic()))
    fail(ErrorKind::Structural, "classify expects a twist in Pic(Bl), got one in " + M.lattice().name());
  Classification out;
  out.L = head_block(M, d.X.pic());
  out.ell = M[M.size() - 1];
  if (is_even(out.ell - (d.c - 1))) {
    out.which = Case::A;
    out.target_scheme = d.X;
    out.target_twist = out.L;
    out.degree_offset = 0;
  } else {
    out.which = Case::B;
    out.target_scheme = d.Z;
    out.target_twist = d.omega_iota + d.iota.pullback.apply(out.L);
    out.degree_offset = 1 - d.c;
  }
  return out;
}

CoherentClassification classify_coherent(const BlowupDiagram& d, const DualizingClass& K_X,
                                         const DualizingClass& K) {
  if (!(K_X.scheme == d.X)) fail(ErrorKind::Structural, "K_X must be a dualizing class on " + d.X.name());
  if (!(K.scheme == d.Bl)) fail(ErrorKind::Structural, "K must be a dualizing class on Bl");
  const DualizingClass base = shriek(d.pi, K_X);
  if (K.shift != base.shift)
    fail(ErrorKind::Validation, "K and pi^!(K_X) have shifts " + std::to_string(K.shift) + " and " +
                                    std::to_string(base.shift) +
                                    "; dualizing complexes on Bl differ only by a line bundle, so the shifts must agree");
  const PicElement diff = K.bundle - base.bundle;
  CoherentClassification out;
  out.L = head_block(diff, d.X.pic());
  out.ell = diff[diff.size() - 1];
  const DualizingClass twisted(d.X, K_X.bundle + out.L, K_X.shift);
  if (is_even(out.ell)) {
    out.which = Case::A;
    out.target = twisted;
    out.degree_offset = 0;
  } else {
    out.which = Case::B;
    out.target = shriek(d.iota, twisted);
    out.degree_offset = 1;
  }
  return out;
}

// ------------------------------------------------------------ justifications

namespace just {
const char* inverse_alpha =
    "alpha is an affine bundle, so alpha* is an isomorphism on Witt groups (homotopy invariance)";
const char* pull_alpha_t = "pull-back along alpha~ carries the twist to alpha~*(-)";
const char* pull_iota_t = "pull-back along iota~ restricts the twist from Bl to E";
const char* periodicity = "W^i(X, M) = W^i(X, M (x) N^2): twists matter only modulo squares";
const char* push_pi =
    "pi_*: W^{i+dim pi}(Bl, omega_pi (x) pi*L) -> W^i(X, L) with omega_pi = O(E)^(c-1), dim pi = 0";
const char* push_pi_t =
    "pi~_*: W^{i+c-1}(E, omega_pi~ (x) pi~*N) -> W^i(Z, N) with omega_pi~ = (-omega_iota, c)";
const char* devissage =
    "iota_*: W^{i-c}(Z, omega_iota (x) L|Z) -> W^i_Z(X, L) is an isomorphism (devissage)";
const char* coh_pull_alpha_t = "derived pull-back along the Tor-finite alpha~: L alpha~*(K_Y)";
const char* coh_pull_iota_t = "derived pull-back along iota~: L iota~*(-)";
const char* coh_periodicity =
    "W~^i(X, K) = W~^i(X, K (x) N^2) and W~^i(X, K[1]) = W~^{i+1}(X, K)";
const char* coh_push = "proper push-forward f_*: W~^i(source, f^!K) -> W~^i(target, K)";
const char* coh_devissage = "iota_*: W~^i(Z, iota^!K) -> W~^i_Z(X, K) is an isomorphism (devissage)";
const char* coh_restrict_open = "restriction to the open U: upsilon~^! = upsilon~* on dualizing complexes";
const char* boundary = "connecting homomorphism of the localization sequence for Z in X with open complement U";
const char* coh_iota_t_shriek =
    "iota~^!(-) = iota~*O(E)[-1] (x) L iota~*(-), so L iota~*(O(E) (x) K_Bl) = iota~^!K_Bl[1] = pi~^!iota^!K_X[1]";
}  // namespace just

// ---------------------------------------------------------------- compilers

namespace {

RecipeStep step(StepOp op, std::optional<MorphismData> f, WittRef from, WittRef to, std::string why) {
  RecipeStep s;
  s.op = op;
  s.morphism = std::move(f);
  s.from = std::move(from);
  s.to = std::move(to);
  s.justification = std::move(why);
  return s;
}

void require_regular(const BlowupDiagram& d, const HypothesisData& h, const char* what) {
  for (const SchemeNode* s : {&d.X, &h.Y, &d.Z})
    if (!s->regular())
      fail(ErrorKind::Assumption, std::string(what) + " needs X, Y and Z flagged regular; " + s->name() +
                                      " is not");
}

void certify(const Recipe& r, const BlowupDiagram& d) {
  const auto problems = check_recipe(r, d);
  if (!problems.empty()) fail(ErrorKind::Internal, "compiled recipe failed its own check: " + problems.front());
}

std::vector<std::string> regular_assumptions() {
  return {"X regular", "Y regular", "Z regular", "Pic(U) = Pic(X) via upsilon*",
          "alpha: U -> Y affine bundle inducing Pic(Y) = Pic(U)"};
}

// Steps 1-2 shared by both regular recipes: W^i(U, L|U) -> W^i(Bl, (L, lambda)).
std::vector<RecipeStep> regular_prefix(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L,
                                       std::int64_t i) {
  const PicElement onU = d.upsilon.pullback.apply(L);
  const PicElement onY = h.alpha_inverse.apply(onU);
  const WittRef r0 = WittRef::locally_free(d.U, i, onU);
  const WittRef r1 = WittRef::locally_free(h.Y, i, onY);
  const WittRef r2 = WittRef::locally_free(d.Bl, i, h.alpha_t.pullback.apply(onY));
  return {step(StepOp::InversePullback, h.alpha, r0, r1, just::inverse_alpha),
          step(StepOp::Pullback, h.alpha_t, r1, r2, just::pull_alpha_t)};
}

}  // namespace

Recipe compile_section(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L, std::int64_t i) {
  const Integer lam = lambda_of(d, h, L);
  if (!is_even(lam - (d.c - 1)))
    fail(ErrorKind::Precondition, "section recipe needs lambda(L) = c - 1 mod 2; lambda(L) = " +
                                      wittcalc::to_string(lam) + ", c = " + std::to_string(d.c));
  require_regular(d, h, "section recipe");

  Recipe r;
  r.kind = RecipeKind::Section;
  r.assumptions = regular_assumptions();
  r.steps = regular_prefix(d, h, L, i);
  const WittRef& r2 = r.steps.back().to;
  const WittRef r3 = WittRef::locally_free(d.Bl, i, d.pi.omega + d.pi.pullback.apply(L));
  const WittRef r4 = WittRef::locally_free(d.X, i - d.pi.relative_dim, L);
  r.steps.push_back(step(StepOp::Periodicity, std::nullopt, r2, r3, just::periodicity));
  r.steps.push_back(step(StepOp::Pushforward, d.pi, r3, r4, just::push_pi));
  certify(r, d);
  return r;
}

Recipe compile_connecting(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L,
                          std::int64_t i) {
  const Integer lam = lambda_of(d, h, L);
  if (!is_even(lam - d.c))
    fail(ErrorKind::Precondition, "connecting recipe needs lambda(L) = c mod 2; lambda(L) = " +
                                      wittcalc::to_string(lam) + ", c = " + std::to_string(d.c));
  require_regular(d, h, "connecting recipe");

  Recipe r;
  r.kind = RecipeKind::Connecting;
  r.assumptions = regular_assumptions();
  r.steps = regular_prefix(d, h, L, i);
  const WittRef r2 = r.steps.back().to;
  const WittRef r3 = WittRef::locally_free(d.E, i, d.iota_t.pullback.apply(r2.bundle()));

  const PicElement N = d.omega_iota + d.iota.pullback.apply(L);
  const PicElement pushed_from = d.pi_t.omega + d.pi_t.pullback.apply(N);
  const PicElement expected = with_last(d.E.pic(), d.iota.pullback.apply(L), Integer(d.c));
  if (!(pushed_from == expected))
    fail(ErrorKind::Internal, "omega_pi~ + pi~*(omega_iota + iota*L) = " + pushed_from.to_string() +
                                  " differs from (iota*L, c) = " + expected.to_string());
  const WittRef r4 = WittRef::locally_free(d.E, i, pushed_from);
  const WittRef r5 = WittRef::locally_free(d.Z, i - d.pi_t.relative_dim, N);
  const WittRef r6 = WittRef::locally_free(d.X, r5.degree - d.iota.relative_dim, L, d.Z);

  r.steps.push_back(step(StepOp::Pullback, d.iota_t, r2, r3, just::pull_iota_t));
  r.steps.push_back(step(StepOp::Periodicity, std::nullopt, r3, r4, just::periodicity));
  r.steps.push_back(step(StepOp::Pushforward, d.pi_t, r4, r5, just::push_pi_t));
  r.steps.push_back(step(StepOp::Devissage, d.iota, r5, r6, just::devissage));
  certify(r, d);
  return r;
}

Recipe compile_regular(const BlowupDiagram& d, const HypothesisData& h, const PicElement& L, std::int64_t i) {
  if (is_even(lambda_of(d, h, L) - (d.c - 1))) return compile_section(d, h, L, i);
  return compile_connecting(d, h, L, i);
}

NonRegularResult compile_nonregular(const BlowupDiagram& d, const HypothesisData& h, const DualizingClass& K_X,
                                    const DualizingClass& K_Y, const NonRegularHypotheses& flags,
                                    std::int64_t i) {
  if (!flags.a_dualizing_on_y)
    fail(ErrorKind::Assumption, "hypothesis (a) not asserted: K_Y must be dualizing on Y with alpha*K_Y = K_U");
  if (!flags.b_homotopy_invariance)
    fail(ErrorKind::Assumption, "hypothesis (b) not asserted: alpha* must be an isomorphism on coherent Witt groups");
  if (!flags.c_tor_finite)
    fail(ErrorKind::Assumption, "hypothesis (c) not asserted: alpha~ must have finite Tor-dimension");
  if (!flags.d_picard_sequence)
    fail(ErrorKind::Assumption, "hypothesis (d) not asserted: Z -> Pic(Bl) -> Pic(U) must be exact");
  if (!picard_sequence_exact(d))
    fail(ErrorKind::Assumption, "hypothesis (d) fails: the kernel of upsilon~* is not generated by O(E)");
  if (!h.alpha_t.tor_finite)
    fail(ErrorKind::Assumption, "hypothesis (c) fails: alpha~ is not flagged Tor-finite");
  if (!(K_X.scheme == d.X)) fail(ErrorKind::Structural, "K_X must live on " + d.X.name());
  if (!(K_Y.scheme == h.Y)) fail(ErrorKind::Structural, "K_Y must live on " + h.Y.name());

  const DualizingClass K_U = shriek(d.upsilon, K_X);
  if (!(derived_pullback(h.alpha, K_Y) == K_U))
    fail(ErrorKind::Validation, "alpha*K_Y = " + derived_pullback(h.alpha, K_Y).to_string() +
                                    " differs from K_U = " + K_U.to_string() + " (hypothesis (a))");

  const DualizingClass pulled = derived_pullback(h.alpha_t, K_Y);
  const DualizingClass K_Bl = shriek(d.pi, K_X);
  if (pulled.shift != K_Bl.shift)
    fail(ErrorKind::Validation, "L alpha~*K_Y and pi^!K_X differ by a shifted line bundle whose shift " +
                                    std::to_string(pulled.shift - K_Bl.shift) +
                                    " must vanish (it is trivial on U)");
  const PicElement diff = pulled.bundle - K_Bl.bundle;
  for (std::size_t k = 0; k + 1 < diff.size(); ++k)
    if (diff[k] != 0)
      fail(ErrorKind::Validation, "L alpha~*K_Y - pi^!K_X = " + diff.to_string() +
                                      " has a non-zero Pic(X) component; it must be a multiple of O(E)");
  NonRegularResult out;
  out.n = diff[diff.size() - 1];

  Recipe& r = out.recipe;
  r.assumptions = {"(a) K_Y dualizing on Y with alpha*K_Y = K_U",
                   "(b) homotopy invariance of coherent Witt groups along alpha (not verified)",
                   "(c) alpha~ of finite Tor-dimension",
                   "(d) Z -> Pic(Bl) -> Pic(U) exact (verified by kernel computation)"};
  const WittRef r0 = WittRef::coherent(i, K_U);
  const WittRef r1 = WittRef::coherent(i, K_Y);
  const WittRef r2 = WittRef::coherent(i, pulled);
  r.steps.push_back(step(StepOp::InversePullback, h.alpha, r0, r1, just::inverse_alpha));
  r.steps.push_back(step(StepOp::Pullback, h.alpha_t, r1, r2, just::coh_pull_alpha_t));

  if (is_even(out.n)) {
    r.kind = RecipeKind::Section;
    const WittRef r3 = WittRef::coherent(i, K_Bl);
    const WittRef r4 = WittRef::coherent(i, K_X);
    r.steps.push_back(step(StepOp::Periodicity, std::nullopt, r2, r3, just::coh_periodicity));
    r.steps.push_back(step(StepOp::Pushforward, d.pi, r3, r4, just::coh_push));
  } else {
    r.kind = RecipeKind::Connecting;
    const DualizingClass on_Z = shriek(d.iota, K_X);
    const WittRef r3 = WittRef::coherent(i, derived_pullback(d.iota_t, pulled));
    const WittRef r4 = WittRef::coherent(i + 1, shriek(d.pi_t, on_Z));
    const WittRef r5 = WittRef::coherent(i + 1, on_Z);
    const WittRef r6 = WittRef::coherent(i + 1, K_X, d.Z);
    r.steps.push_back(step(StepOp::Pullback, d.iota_t, r2, r3, just::coh_pull_iota_t));
    r.steps.push_back(step(StepOp::Periodicity, std::nullopt, r3, r4, just::coh_periodicity));
    r.steps.push_back(step(StepOp::Pushforward, d.pi_t, r4, r5, just::coh_push));
    r.steps.push_back(step(StepOp::Devissage, d.iota, r5, r6, just::coh_devissage));
  }
  certify(r, d);
  return out;
}

Recipe main_lemma_recipe(const BlowupDiagram& d, const DualizingClass& K_X, MainLemmaVariant variant,
                         std::int64_t i) {
  if (!(K_X.scheme == d.X)) fail(ErrorKind::Structural, "K_X must live on " + d.X.name());
  const DualizingClass K_Bl = shriek(d.pi, K_X);
  Recipe r;
  r.kind = RecipeKind::Connecting;
  r.assumptions = {"K_Bl = pi^!K_X", "E -> Z projective bundle of rank c - 1"};
  if (variant == MainLemmaVariant::A) {
    const WittRef r0 = WittRef::coherent(i, K_Bl);
    const WittRef r1 = WittRef::coherent(i, shriek(d.upsilon_t, K_Bl));
    const WittRef r2 = WittRef::coherent(i + 1, K_X, d.Z);
    r.steps.push_back(step(StepOp::ShriekPullback, d.upsilon_t, r0, r1, just::coh_restrict_open));
    r.steps.push_back(step(StepOp::Boundary, d.upsilon, r1, r2, just::boundary));
    r.vanishes = true;
  } else {
    const DualizingClass start(d.Bl, K_Bl.bundle + d.oE, K_Bl.shift);
    const DualizingClass on_Z = shriek(d.iota, K_X);
    const WittRef r0 = WittRef::coherent(i, start);
    const WittRef r1 = WittRef::coherent(i, derived_pullback(d.iota_t, start));
    const WittRef r2 = WittRef::coherent(i + 1, shriek(d.pi_t, on_Z));
    const WittRef r3 = WittRef::coherent(i + 1, on_Z);
    const WittRef r4 = WittRef::coherent(i + 1, K_X, d.Z);
    r.steps.push_back(step(StepOp::Pullback, d.iota_t, r0, r1, just::coh_pull_iota_t));
    r.steps.push_back(step(StepOp::Periodicity, std::nullopt, r1, r2, just::coh_periodicity));
    r.steps.push_back(step(StepOp::Pushforward, d.pi_t, r2, r3, just::coh_push));
    r.steps.push_back(step(StepOp::Devissage, d.iota, r3, r4, just::coh_devissage));
  }
  certify(r, d);
  return r;
}

std::vector<LesEntry> les_table(const BlowupDiagram& d, const PicElement& L, std::int64_t i_from,
                                std::int64_t i_to) {
  if (!(L.lattice() == d.X.pic()))
    fail(ErrorKind::Structural, "les_table expects L in Pic(" + d.X.name() + ")");
  if (i_from > i_to) fail(ErrorKind::Domain, "les_table needs i_from <= i_to");
  const PicElement onU = d.upsilon.pullback.apply(L);
  const PicElement onZ = d.omega_iota + d.iota.pullback.apply(L);
  std::vector<LesEntry> out;
  for (std::int64_t i = i_from; i <= i_to; ++i) {
    out.push_back({WittRef::locally_free(d.X, i, L), "υ*", std::nullopt});
    out.push_back({WittRef::locally_free(d.U, i, onU), "∂′", std::nullopt});
    out.push_back({WittRef::locally_free(d.Z, i + 1 - d.c, onZ), "ι_*",
                   WittRef::locally_free(d.X, i + 1, L, d.Z)});
  }
  return out;
}

}  // namespace wittcalc

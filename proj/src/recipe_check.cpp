// Independent recipe checker. It re-derives every step contract from the
// morphism data alone and never calls into the compiler.

#include "wittcalc/dichotomy.hpp"

#include "wittcalc/errors.hpp"

#include <string>
#include <vector>

namespace wittcalc {

namespace {

bool even_difference(const PicElement& a, const PicElement& b) {
  return a.lattice() == b.lattice() && equal_mod2(a, b);
}

bool same_support(const WittRef& a, const WittRef& b) {
  if (a.support.has_value() != b.support.has_value()) return false;
  return !a.support || *a.support == *b.support;
}

// Returns an empty string when the step is sound.
std::string check_step(const RecipeStep& s, const BlowupDiagram& d) {
  const WittRef& from = s.from;
  const WittRef& to = s.to;
  if (from.is_coherent() != to.is_coherent()) return "mixes coherent and locally free groups";
  const bool coh = from.is_coherent();

  if (s.op == StepOp::Periodicity) {
    if (s.morphism) return "periodicity carries no morphism";
    if (!(from.scheme == to.scheme) || !same_support(from, to)) return "periodicity changes the scheme";
    if (!even_difference(from.bundle(), to.bundle())) return "twist difference is not even";
    if (coh) {
      if (from.degree + from.dualizing().shift != to.degree + to.dualizing().shift)
        return "degree + shift not preserved";
    } else if (from.degree != to.degree) {
      return "degree changed";
    }
    return {};
  }

  if (!s.morphism) return std::string(to_string(s.op)) + " needs a morphism";
  const MorphismData& f = *s.morphism;

  switch (s.op) {
    case StepOp::InversePullback: {
      if (!(from.scheme == f.source) || !(to.scheme == f.target)) return "inverse pull-back goes source -> target";
      if (from.support || to.support || from.degree != to.degree) return "degree or support changed";
      if (coh) {
        if (!(derived_pullback(f, to.dualizing()) == from.dualizing())) return "f*(to) != from";
      } else if (!(f.pullback.apply(to.bundle()) == from.bundle())) {
        return "f*(to) != from";
      }
      return {};
    }
    case StepOp::Pullback: {
      if (!(from.scheme == f.target) || !(to.scheme == f.source)) return "pull-back goes target -> source";
      if (from.support || to.support || from.degree != to.degree) return "degree or support changed";
      if (coh) {
        if (!(derived_pullback(f, from.dualizing()) == to.dualizing())) return "to != Lf*(from)";
      } else if (!(f.pullback.apply(from.bundle()) == to.bundle())) {
        return "to != f*(from)";
      }
      return {};
    }
    case StepOp::ShriekPullback: {
      if (!coh) return "shriek pull-back needs coherent groups";
      if (!(from.scheme == f.target) || !(to.scheme == f.source)) return "pull-back goes target -> source";
      if (from.support || to.support || from.degree != to.degree) return "degree or support changed";
      if (!(shriek(f, from.dualizing()) == to.dualizing())) return "to != f^!(from)";
      return {};
    }
    case StepOp::Pushforward: {
      if (!(from.scheme == f.source) || !(to.scheme == f.target)) return "push-forward goes source -> target";
      if (from.support || to.support) return "push-forward with supports";
      if (coh) {
        if (from.degree != to.degree) return "coherent push-forward changes the degree";
        if (!(shriek(f, to.dualizing()) == from.dualizing())) return "from != f^!(to)";
        return {};
      }
      if (from.degree != to.degree + f.relative_dim) return "from.degree != to.degree + dim f";
      const PicElement expected = f.omega + f.pullback.apply(to.bundle());
      if (!even_difference(from.bundle(), expected)) return "from twist != omega_f + f*(to) mod 2";
      if (!(from.bundle() == expected)) return "from twist != omega_f + f*(to) exactly";
      return {};
    }
    case StepOp::Devissage: {
      if (!(f.source == d.Z) || !(f.target == d.X)) return "devissage runs along iota: Z -> X";
      if (!(from.scheme == d.Z) || from.support) return "devissage starts on Z without supports";
      if (!(to.scheme == d.X) || !to.support || !(*to.support == d.Z)) return "devissage ends in W_Z(X)";
      if (coh) {
        if (from.degree != to.degree) return "coherent devissage changes the degree";
        if (!(shriek(f, to.dualizing()) == from.dualizing())) return "from != iota^!(to)";
        return {};
      }
      if (from.degree != to.degree - d.c) return "devissage degree is not i - c -> i";
      if (!(from.bundle() == d.omega_iota + f.pullback.apply(to.bundle())))
        return "from twist != omega_iota + iota*(to)";
      return {};
    }
    case StepOp::Boundary: {
      if (!(f.source == d.U) || !(f.target == d.X)) return "boundary belongs to the open immersion U -> X";
      if (!(from.scheme == d.U) || from.support) return "boundary starts on U";
      if (!(to.scheme == d.X) || !to.support || !(*to.support == d.Z)) return "boundary ends in W_Z(X)";
      if (to.degree != from.degree + 1) return "boundary raises the degree by one";
      if (coh) {
        if (!(shriek(f, to.dualizing()) == from.dualizing())) return "from != upsilon^!(to)";
      } else if (!(f.pullback.apply(to.bundle()) == from.bundle())) {
        return "from != upsilon*(to)";
      }
      return {};
    }
    case StepOp::Periodicity: break;
  }
  return {};
}

}  // namespace

std::vector<std::string> check_recipe(const Recipe& r, const BlowupDiagram& d) {
  std::vector<std::string> problems;
  if (r.steps.empty()) {
    problems.push_back("recipe has no steps");
    return problems;
  }
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const RecipeStep& s = r.steps[k];
    std::string why;
    try {
      why = check_step(s, d);
    } catch (const Error& e) {
      why = e.what();
    }
    if (!why.empty())
      problems.push_back("step " + std::to_string(k + 1) + " (" + to_string(s.op) + "): " + why);
    if (k + 1 < r.steps.size() && !(s.to == r.steps[k + 1].from))
      problems.push_back("steps " + std::to_string(k + 1) + " and " + std::to_string(k + 2) + " do not compose");
  }

  const WittRef& first = r.steps.front().from;
  const WittRef& last = r.steps.back().to;
  if (first.support || (!(first.scheme == d.U) && !(first.scheme == d.Bl)))
    problems.push_back("recipe must start on U or Bl without supports");
  if (r.kind == RecipeKind::Section) {
    if (!(last.scheme == d.X) || last.support) problems.push_back("section must end in W(X) without supports");
    if (last.degree != first.degree) problems.push_back("section must preserve the degree");
  } else {
    if (!(last.scheme == d.X) || !last.support || !(*last.support == d.Z))
      problems.push_back("connecting recipe must end in W_Z(X)");
    if (last.degree != first.degree + 1) problems.push_back("connecting recipe must raise the degree by one");
  }
  if (first.scheme == d.U && !last.is_coherent() && !(d.upsilon.pullback.apply(last.bundle()) == first.bundle()))
    problems.push_back("start twist is not the restriction of the end twist to U");
  return problems;
}

}  // namespace wittcalc

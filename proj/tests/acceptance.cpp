// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "support.hpp"

#include "cli.hpp"
#include "wittcalc/dichotomy.hpp"
#include "wittcalc/divisor.hpp"
#include "wittcalc/errors.hpp"
#include "wittcalc/io.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace wittcalc;
using namespace wittcalc::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::size_t checks = 0;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // <= 0: no time limit
  std::function<void(Outcome&)> body;
};

PolyMatrix diag(const PolyRing& ring, const std::vector<std::string>& entries) {
  PolyMatrix m(entries.size(), entries.size(), PolyElement(ring, 0));
  for (std::size_t k = 0; k < entries.size(); ++k) m(k, k) = PolyElement::parse(ring, entries[k]);
  return m;
}

const std::vector<std::pair<std::string, std::string>>& divisor_grid() {
  static const std::vector<std::pair<std::string, std::string>> g = {
      {"Z", "2"},      {"Z[x]", "2"}, {"Z[x]", "x"},   {"Z[x]", "x*y"},   {"Z[x]", "x+1"},
      {"Z[x,y]", "2"}, {"Z[x,y]", "x"}, {"Z[x,y]", "x*y"}, {"Z[x,y]", "x+1"},
  };
  return g;
}

bool model_exists(const std::string& ring, const std::string& t) {
  try {
    DivisorModel::parse(ring, t);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// -------------------------------------------------------------- criteria

void dichotomy_exhaustive(Outcome& o) {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    for (std::int64_t c = 2; c <= 6; ++c)
      for (long ell = -3; ell <= 3; ++ell) {
        const auto rx = static_cast<std::size_t>(uniform(rng, 1, 3));
        const auto rz = static_cast<std::size_t>(uniform(rng, 0, 3));
        const auto X = SchemeNode::create("X", PicLattice::create("Pic(X)", gen_names("H", rx)), true, true);
        const auto Z = SchemeNode::create("Z", PicLattice::create("Pic(Z)", gen_names("h", rz)), true, true);
        const auto d = build_blowup(X, Z, c, LatticeHom(X.pic(), Z.pic(), random_matrix(rng, rz, rx)),
                                    random_element(rng, Z.pic()));
        const PicElement L = random_element(rng, X.pic());
        std::vector<Integer> coords = L.coords();
        coords.push_back(ell);
        const auto cl = classify(d, PicElement(d.Bl.pic(), coords));
        std::ostringstream at;
        at << "seed " << seed << " c=" << c << " ell=" << ell;
        o.expect((cl.which == Case::A) == parity_case_a(ell, c), "parity mismatch at " + at.str());
        o.expect(cl.L == L && cl.ell == ell, "decomposition mismatch at " + at.str());
        o.expect(cl.target_scheme == (cl.which == Case::A ? d.X : d.Z), "wrong target scheme at " + at.str());
      }
  }
}

void canonical_consistency(Outcome& o) {
  Rng rng(2000);
  for (int k = 0; k < 100; ++k) {
    const auto d = random_diagram(rng);
    const PicElement lhs = d.pi_t.omega + d.pi_t.pullback.apply(d.omega_iota);
    const PicElement rhs = d.iota_t.omega + d.iota_t.pullback.apply(d.pi.omega);
    o.expect(lhs == rhs, "canonical classes differ on diagram " + std::to_string(k));
  }
  for (int k = 0; k < 100; ++k) {
    const auto d = random_diagram(rng);
    const DualizingClass K = random_dualizing(rng, d.X);
    o.expect(shriek(d.iota_t, shriek(d.pi, K)) == shriek(d.pi_t, shriek(d.iota, K)),
             "shriek paths differ on class " + std::to_string(k));
  }
}

void recipe_soundness(Outcome& o) {
  Rng rng(3000);
  for (int k = 0; k < 200; ++k) {
    const auto inst = random_instance(rng);
    const PicElement L = random_element(rng, inst.d.X.pic());
    const std::int64_t i = uniform(rng, -4, 4);
    int succeeded = 0;
    std::optional<Recipe> got;
    for (int which = 0; which < 2; ++which) {
      try {
        got = which == 0 ? compile_section(inst.d, inst.h, L, i) : compile_connecting(inst.d, inst.h, L, i);
        ++succeeded;
      } catch (const Error&) {
      }
    }
    const std::string at = "tuple " + std::to_string(k);
    o.expect(succeeded == 1, "exactly one compiler should succeed at " + at);
    if (succeeded != 1) continue;
    const auto violations = check_recipe(*got, inst.d);
    o.expect(violations.empty(), "checker: " + (violations.empty() ? std::string() : violations.front()) + " at " + at);
    const long lam = static_cast<long>(lambda_oracle(inst, L));
    o.expect((got->kind == RecipeKind::Section) == parity_case_a(lam, inst.d.c), "kind vs lambda parity at " + at);
    if (got->kind == RecipeKind::Connecting) {
      o.expect(got->steps[4].to.degree == i - inst.d.c + 1, "push-forward degree at " + at);
      o.expect(got->steps[5].to.degree == i + 1 && got->steps[5].to.support.has_value(),
               "supports degree at " + at);
    } else {
      o.expect(got->steps.back().to.degree == i, "section degree at " + at);
    }
  }
}

void regular_nonregular_agreement(Outcome& o) {
  Rng rng(4000);
  const NonRegularHypotheses flags{true, true, true, true};
  for (int k = 0; k < 100; ++k) {
    const auto inst = random_instance(rng);
    const PicElement L = random_element(rng, inst.d.X.pic());
    const DualizingClass K_X(inst.d.X, L, 0);
    const DualizingClass K_Y(inst.h.Y, PicElement(inst.h.Y.pic(), inst.alpha_inv_oracle.apply(L.coords())), 0);
    const auto out = compile_nonregular(inst.d, inst.h, K_X, K_Y, flags);
    const Integer lam = lambda_oracle(inst, L);
    const std::string at = "instance " + std::to_string(k);
    o.expect(out.n == lam - inst.d.c + 1, "n != lambda - c + 1 at " + at);
    o.expect(out.recipe.kind == compile_regular(inst.d, inst.h, L, 0).kind, "kinds disagree at " + at);
  }
}

void koszul_reproduction(Outcome& o) {
  for (const auto& [ring, t] : divisor_grid()) {
    if (!model_exists(ring, t)) continue;
    const auto m = DivisorModel::parse(ring, t);
    const std::string at = ring + " t=" + t;
    const SymmetricPair a = symmetric_cone(divisor_pair(m)).pair;
    const SymmetricPair b = koszul_pushforward_unit(m).pair;
    o.expect(pair_to_json(a).dump() == pair_to_json(b).dump(), "serializations differ for " + at);
    o.expect(b.form.at(1) == diag(m.ring, {"-1"}) && b.form.at(0) == diag(m.ring, {"1"}),
             "form components are not (-1, 1) for " + at);
    const PolyMatrix tm = PolyMatrix::scalar(1, m.t);
    o.expect(b.complex.d(1) == tm, "differential is not (t) for " + at);
    // Dual side: d^_0 = (-1)^0 d_1^T = (t), and the shifted dual by 1 carries -t.
    o.expect(dual(b.complex).d(0) == tm.transpose(), "dual differential for " + at);
    o.expect(shifted_dual(b.complex, 1).d(1) == tm.transpose().scaled(-1L), "shifted dual differential for " + at);
  }
}

void factorization_identity(Outcome& o) {
  for (const auto& [ring, t] : divisor_grid()) {
    if (!model_exists(ring, t)) continue;
    const auto m = DivisorModel::parse(ring, t);
    const std::string at = ring + " t=" + t;
    auto run = [&](const SymmetricPair& phi, const std::string& what) {
      const auto f = verify_factorization(m, phi);
      o.expect(f.passed, "factorization fails for " + what + " over " + at +
                             (f.first_failure() ? " (" + f.first_failure()->name + ")" : ""));
      o.expect(verify_restriction(m, phi).passed, "restriction fails for " + what + " over " + at);
    };
    for (std::size_t k = 1; k <= 4; ++k)
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::vector<std::string> entries;
        for (std::size_t j = 0; j < k; ++j) entries.push_back((mask >> j) & 1u ? "-1" : "1");
        run(form_in_degree_zero(diag(m.ring, entries)), "diag of rank " + std::to_string(k));
      }
    for (std::size_t r : {1u, 2u}) run(hyperbolic(ChainComplex(m.ring, {{0, r}}), 0), "hyperbolic");
  }
}

void chain_core(Outcome& o) {
  const PolyRing ring = PolyRing::parse("Z[x,y]");
  Rng rng(7000);
  for (int k = 0; k < 500; ++k) {
    const std::string at = "instance " + std::to_string(k);
    const ChainComplex p = random_complex(rng, ring), q = random_complex(rng, ring), r = random_complex(rng, ring);
    const std::int64_t s = uniform(rng, -3, 3);
    // Construction throws unless d o d = 0.
    try {
      (void)dual(p);
      (void)shift(p, s);
      (void)shifted_dual(q, s);
      (void)tensor(p, q);
      (void)direct_sum(p, q);
      (void)cone(ChainMap::identity(p));
    } catch (const Error& e) {
      o.expect(false, std::string("d o d != 0: ") + e.what() + " at " + at);
    }

    const ChainComplex dd = dual(dual(p));
    bool involution = dd.ranks() == p.ranks() && double_dual_identification(p).commutes();
    for (const auto& [n, d] : p.differentials()) involution = involution && dd.d(n) == d.scaled(-1L);
    o.expect(involution, "dual involution at " + at);

    std::map<std::int64_t, PolyMatrix> f, finv;
    for (const auto& [n, rk] : p.ranks()) {
      f.emplace(n, random_poly_unimodular(rng, ring, rk));
      finv.emplace(n, *inverse_unimodular(f.at(n)));
    }
    std::map<std::int64_t, PolyMatrix> dq;
    for (const auto& [n, d] : p.differentials()) dq.emplace(n, f.at(n - 1) * d * finv.at(n));
    const ChainComplex target(ring, p.ranks(), dq);
    const ChainComplex c = cone(ChainMap::make(p, target, f));
    std::map<std::int64_t, PolyMatrix> h;
    for (std::int64_t n = c.min_degree() - 1; n <= c.max_degree(); ++n) {
      PolyMatrix m(c.rank(n + 1), c.rank(n), PolyElement(ring, 0));
      if (finv.count(n)) m.set_block(target.rank(n + 1), 0, finv.at(n));
      h.emplace(n, std::move(m));
    }
    o.expect(is_contracting_homotopy(c, h), "cone of isomorphism not contracted at " + at);

    const ChainMap assoc = tensor_associator(p, q, r);
    o.expect(assoc.commutes() && assoc.source == tensor(tensor(p, q), r) && assoc.target == tensor(p, tensor(q, r)),
             "tensor associativity at " + at);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void grassmannian_sweep(Outcome& o) {
  const std::string section = "composition: π_* ∘ α̃* ∘ (α*)⁻¹\n";
  const std::string connecting = "composition: ι_* ∘ π̃_* ∘ ι̃* ∘ α̃* ∘ (α*)⁻¹\n";
  for (std::int64_t d = 2; d <= 3; ++d)
    for (std::int64_t n = d + 2; n <= 8; ++n)
      for (int lam = 0; lam <= 1; ++lam) {
        const std::string tag = "d" + std::to_string(d) + "_n" + std::to_string(n) + "_lambda" + std::to_string(lam);
        std::ostringstream out, err;
        const int rc = cli::run_cli({"grassmannian", "--d", std::to_string(d), "--n", std::to_string(n), "--lambda",
                                     std::to_string(lam), "--omega-iota", "1"},
                                    out, err);
        o.expect(rc == 0, "CLI exit " + std::to_string(rc) + " for " + tag + ": " + err.str());
        // c = d for Gr_d(n-1) in Gr_d(n); section iff lambda = c - 1 mod 2.
        const bool is_section = parity_case_a(lam, d);
        const std::string& expected = is_section ? section : connecting;
        o.expect(out.str().find(expected) != std::string::npos, "composition line for " + tag);
        const std::string golden = read_file(std::string(WITTCALC_GOLDEN_DIR) + "/gr_" + tag + ".txt");
        o.expect(!golden.empty() && out.str() == golden, "output differs from golden file for " + tag);
      }
  std::ostringstream out, err;
  const int rc = cli::run_cli({"grassmannian", "--sweep", "d=2..3,n=4..8", "--lambda", "0..1", "--omega-iota", "1"},
                              out, err);
  o.expect(rc == 0 && out.str() == read_file(std::string(WITTCALC_GOLDEN_DIR) + "/sweep.txt"),
           "sweep output differs from golden file");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "dichotomy exhaustiveness", 1.0, dichotomy_exhaustive},
      {2, "canonical-class consistency", 1.0, canonical_consistency},
      {3, "recipe soundness", 2.0, recipe_soundness},
      {4, "regular/non-regular agreement", 0.0, regular_nonregular_agreement},
      {5, "Koszul push-forward reproduction", 0.0, koszul_reproduction},
      {6, "factorization identity", 10.0, factorization_identity},
      {7, "chain-algebra core", 10.0, chain_core},
      {8, "Grassmannian sweep goldens", 0.0, grassmannian_sweep},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) o.expect(false, "time limit exceeded");
    all = all && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << o.checks
              << " checks, " << std::fixed << std::setprecision(3) << secs << " s";
    if (c.limit_seconds > 0) std::cout << " < " << std::setprecision(1) << c.limit_seconds << " s";
    std::cout << "]";
    if (!o.ok) std::cout << " -- " << o.detail;
    std::cout << "\n";
  }
  return all ? 0 : 1;
}

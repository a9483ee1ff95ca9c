#include "cli.hpp"

#include "wittcalc/dichotomy.hpp"
#include "wittcalc/divisor.hpp"
#include "wittcalc/errors.hpp"
#include "wittcalc/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace wittcalc::cli {
namespace {

struct Report {
  json j;
  std::string text;
  std::string markdown;
};

struct Common {
  std::string format = "text";
  std::string out_path;
  bool fold = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<Integer> parse_coords(const std::string& text, const std::string& what) {
  std::vector<Integer> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const bool ok = !item.empty() &&
                    std::all_of(item.begin() + (item[0] == '-' || item[0] == '+' ? 1 : 0), item.end(),
                                [](char ch) { return ch >= '0' && ch <= '9'; }) &&
                    item.find_first_of("0123456789") != std::string::npos;
    if (!ok) fail(ErrorKind::Parse, "malformed integer '" + item + "' in " + what);
    coords.emplace_back(item[0] == '+' ? item.substr(1) : item);
  }
  if (coords.empty()) fail(ErrorKind::Parse, "empty coordinate list in " + what);
  return coords;
}

PicElement parse_twist(const PicLattice& lattice, const std::string& text, const std::string& what) {
  auto coords = parse_coords(text, what);
  if (coords.size() != lattice.rank())
    fail(ErrorKind::Parse, what + " needs " + std::to_string(lattice.rank()) + " coordinates on " +
                               lattice.name() + ", got " + std::to_string(coords.size()));
  return PicElement(lattice, std::move(coords));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

LoadedDiagram load(const std::string& path) { return build(parse_config_text(read_file(path))); }

const HypothesisData& need_hypothesis(const LoadedDiagram& l) {
  if (!l.hypothesis) fail(ErrorKind::Assumption, "config has no 'hypothesis' block (the A*-bundle U -> Y is required)");
  return *l.hypothesis;
}

void check_or_fail(const Recipe& r, const BlowupDiagram& d) {
  const auto violations = check_recipe(r, d);
  if (!violations.empty()) fail(ErrorKind::Internal, "emitted recipe failed the step checker: " + violations.front());
}

Report recipe_report(const Recipe& r, bool fold) {
  return {recipe_to_json(r, fold), recipe_to_text(r, fold), recipe_to_markdown(r, fold)};
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return r.j.dump(2) + "\n";
  if (format == "markdown") return r.markdown;
  return r.text;
}

json error_json(const std::string& kind, const std::string& message, int code) {
  json j;
  j["schema"] = kReportSchema;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  return j;
}

// ------------------------------------------------------------------ commands

Report do_validate(const std::string& path) {
  const LoadedDiagram l = load(path);
  validate_diagram(l.diagram);
  if (l.hypothesis) validate_hypothesis(l.diagram, *l.hypothesis);
  const bool exact = picard_sequence_exact(l.diagram);
  Report r;
  r.j["schema"] = kReportSchema;
  r.j["command"] = "validate";
  r.j["name"] = l.config.name ? json(*l.config.name) : json(nullptr);
  r.j["c"] = l.diagram.c;
  r.j["schemes"] = json::object();
  std::vector<SchemeNode> nodes = {l.diagram.X, l.diagram.Z, l.diagram.U, l.diagram.Bl, l.diagram.E};
  if (l.hypothesis) nodes.push_back(l.hypothesis->Y);
  for (const auto& s : nodes)
    r.j["schemes"][s.name()] = {{"rank", s.pic().rank()}, {"regular", s.regular()}, {"gorenstein", s.gorenstein()}};
  r.j["hypothesis"] = l.hypothesis.has_value();
  r.j["picard_sequence_exact"] = exact;
  r.j["valid"] = true;

  std::ostringstream t, m;
  t << "valid: " << (l.config.name ? *l.config.name : path) << "\n"
    << "c: " << l.diagram.c << "\n"
    << "hypothesis: " << (l.hypothesis ? "yes" : "no") << "\n"
    << "picard sequence exact: " << (exact ? "yes" : "no") << "\n";
  m << "| field | value |\n|---|---|\n"
    << "| valid | yes |\n| c | " << l.diagram.c << " |\n"
    << "| hypothesis | " << (l.hypothesis ? "yes" : "no") << " |\n"
    << "| picard sequence exact | " << (exact ? "yes" : "no") << " |\n";
  r.text = t.str();
  r.markdown = m.str();
  return r;
}

Report do_classify(const std::string& path, const std::string& twist, std::int64_t degree, bool fold) {
  const LoadedDiagram l = load(path);
  const PicElement M = parse_twist(l.diagram.Bl.pic(), twist, "--twist");
  const Classification c = classify(l.diagram, M);
  const WittRef from = WittRef::locally_free(l.diagram.Bl, degree, M);
  const WittRef to = WittRef::locally_free(c.target_scheme, degree + c.degree_offset, c.target_twist);
  const std::string which = c.which == Case::A ? "A" : "B";
  Report r;
  r.j["schema"] = kReportSchema;
  r.j["command"] = "classify";
  r.j["case"] = which;
  r.j["L"] = pic_to_json(c.L);
  r.j["ell"] = integer_to_json(c.ell);
  r.j["from"] = witt_ref_to_json(from, fold);
  r.j["to"] = witt_ref_to_json(to, fold);
  r.j["degree_offset"] = c.degree_offset;
  r.text = "case: " + which + "\nell: " + c.ell.str() + "\n" + from.to_string(fold) + " ≅ " + to.to_string(fold) + "\n";
  r.markdown = "| case | ell | isomorphism |\n|---|---|---|\n| " + which + " | " + c.ell.str() + " | " +
               from.to_string(fold) + " ≅ " + to.to_string(fold) + " |\n";
  return r;
}

struct RecipeOptions {
  std::string twist;
  std::int64_t degree = 0;
  bool nonregular = false;
  std::string main_lemma;
  std::string kx, ky;
  std::int64_t kx_shift = 0, ky_shift = 0;
  std::string assume;
};

NonRegularHypotheses parse_assume(const std::string& s) {
  NonRegularHypotheses f;
  for (char ch : s) {
    switch (ch) {
      case 'a': f.a_dualizing_on_y = true; break;
      case 'b': f.b_homotopy_invariance = true; break;
      case 'c': f.c_tor_finite = true; break;
      case 'd': f.d_picard_sequence = true; break;
      case ',': case ' ': break;
      default: fail(ErrorKind::Parse, std::string("--assume takes letters from 'abcd', got '") + ch + "'");
    }
  }
  return f;
}

Report do_recipe(const std::string& path, const RecipeOptions& o, bool fold) {
  const LoadedDiagram l = load(path);
  const BlowupDiagram& d = l.diagram;
  if (!o.main_lemma.empty()) {
    if (o.main_lemma != "A" && o.main_lemma != "B") fail(ErrorKind::Parse, "--main-lemma takes A or B");
    if (o.kx.empty()) fail(ErrorKind::Parse, "--main-lemma needs --kx");
    const DualizingClass K_X(d.X, parse_twist(d.X.pic(), o.kx, "--kx"), o.kx_shift);
    const Recipe r = main_lemma_recipe(d, K_X, o.main_lemma == "A" ? MainLemmaVariant::A : MainLemmaVariant::B,
                                       o.degree);
    return recipe_report(r, fold);
  }
  const HypothesisData& h = need_hypothesis(l);
  if (o.nonregular) {
    if (o.kx.empty() || o.ky.empty()) fail(ErrorKind::Parse, "--nonregular needs --kx and --ky");
    const DualizingClass K_X(d.X, parse_twist(d.X.pic(), o.kx, "--kx"), o.kx_shift);
    const DualizingClass K_Y(h.Y, parse_twist(h.Y.pic(), o.ky, "--ky"), o.ky_shift);
    const NonRegularResult res = compile_nonregular(d, h, K_X, K_Y, parse_assume(o.assume), o.degree);
    check_or_fail(res.recipe, d);
    Report r = recipe_report(res.recipe, fold);
    r.j["n"] = integer_to_json(res.n);
    r.text = "n: " + res.n.str() + "\n" + r.text;
    r.markdown = "n = " + res.n.str() + "\n\n" + r.markdown;
    return r;
  }
  if (o.twist.empty()) fail(ErrorKind::Parse, "recipe needs --twist");
  const Recipe r = compile_regular(d, h, parse_twist(d.X.pic(), o.twist, "--twist"), o.degree);
  check_or_fail(r, d);
  return recipe_report(r, fold);
}

Report do_les(const std::string& path, const std::string& twist, std::int64_t from, std::int64_t to, bool fold) {
  if (from > to) fail(ErrorKind::Parse, "--from must not exceed --to");
  const LoadedDiagram l = load(path);
  const auto table = les_table(l.diagram, parse_twist(l.diagram.X.pic(), twist, "--twist"), from, to);
  Report r;
  r.j["schema"] = kReportSchema;
  r.j["command"] = "les";
  r.j["entries"] = json::array();
  std::ostringstream t, m;
  m << "| group | arrow | dévissage |\n|---|---|---|\n";
  for (const auto& e : table) {
    json je;
    je["group"] = witt_ref_to_json(e.ref, fold);
    je["arrow"] = e.arrow;
    je["devissage"] = e.devissage ? witt_ref_to_json(*e.devissage, fold) : json(nullptr);
    r.j["entries"].push_back(je);
    t << e.ref.to_string(fold);
    if (e.devissage) t << " ≅ " << e.devissage->to_string(fold);
    t << "\n  --" << e.arrow << "-->\n";
    m << "| " << e.ref.to_string(fold) << " | " << e.arrow << " | "
      << (e.devissage ? e.devissage->to_string(fold) : "") << " |\n";
  }
  r.text = t.str();
  r.markdown = m.str();
  return r;
}

struct GrassmannianOptions {
  std::int64_t d = 2, n = 5;
  std::string lambda = "0";
  std::string omega_iota = "1";
  std::string twist = "1";
  std::int64_t degree = 0;
  std::string emit;
  std::string sweep;
};

struct SweepTask {
  std::int64_t d, n;
  Integer lambda;
};

std::vector<SweepTask> sweep_tasks(const std::string& spec, std::pair<std::int64_t, std::int64_t> lambdas) {
  std::optional<std::pair<std::int64_t, std::int64_t>> dr, nr;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Parse, "--sweep items look like d=2..4, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const auto range = parse_range(trim(item.substr(eq + 1)));
    if (key == "d") dr = range;
    else if (key == "n") nr = range;
    else fail(ErrorKind::Parse, "--sweep keys are d and n, got '" + key + "'");
  }
  if (!dr || !nr) fail(ErrorKind::Parse, "--sweep needs both d and n ranges");
  std::vector<SweepTask> tasks;
  for (std::int64_t d = dr->first; d <= dr->second; ++d)
    for (std::int64_t n = nr->first; n <= nr->second; ++n) {
      if (d < 2 || n < d + 2) continue;
      for (std::int64_t lam = lambdas.first; lam <= lambdas.second; ++lam) tasks.push_back({d, n, Integer(lam)});
    }
  return tasks;
}

Report grassmannian_one(std::int64_t d, std::int64_t n, const Integer& lam, const Integer& omega,
                        const std::string& twist, std::int64_t degree, bool fold) {
  const GrassmannianInstance g = grassmannian_instance(d, n, lam, omega);
  const Recipe r = compile_regular(g.diagram, g.hypothesis, parse_twist(g.diagram.X.pic(), twist, "--twist"), degree);
  check_or_fail(r, g.diagram);
  return recipe_report(r, fold);
}

Report do_grassmannian(const GrassmannianOptions& o, bool fold) {
  const Integer omega = parse_coords(o.omega_iota, "--omega-iota").front();
  if (o.sweep.empty()) {
    const Integer lam = parse_coords(o.lambda, "--lambda").front();
    if (!o.emit.empty()) write_file(o.emit, config_to_json(grassmannian_config(o.d, o.n, lam, omega)).dump(2) + "\n");
    return grassmannian_one(o.d, o.n, lam, omega, o.twist, o.degree, fold);
  }
  if (!o.emit.empty()) fail(ErrorKind::Parse, "--emit cannot be combined with --sweep");
  const auto tasks = sweep_tasks(o.sweep, parse_range(o.lambda));

  std::vector<Report> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
      try {
        results[k] = grassmannian_one(tasks[k].d, tasks[k].n, tasks[k].lambda, omega, o.twist, o.degree, fold);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t nthreads =
      std::min<std::size_t>(tasks.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Report r;
  r.j["schema"] = kReportSchema;
  r.j["command"] = "grassmannian-sweep";
  r.j["instances"] = json::array();
  std::ostringstream t, m;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const std::string head = "Gr(" + std::to_string(tasks[k].d) + "," + std::to_string(tasks[k].n) +
                             ") lambda=" + tasks[k].lambda.str();
    r.j["instances"].push_back({{"d", tasks[k].d},
                                {"n", tasks[k].n},
                                {"lambda", integer_to_json(tasks[k].lambda)},
                                {"recipe", results[k].j}});
    t << "# " << head << "\n" << results[k].text << "\n";
    m << "## " << head << "\n\n" << results[k].markdown << "\n";
  }
  r.text = t.str();
  r.markdown = m.str();
  return r;
}

Report do_verify_koszul(const std::string& ring_text, const std::string& t_text, const std::string& form_text,
                        bool& passed) {
  const DivisorModel m = DivisorModel::parse(ring_text, t_text);
  const SymmetricPair phi = parse_form(m.ring, form_text);
  const FactorizationReport f = verify_factorization(m, phi);
  const RestrictionReport res = verify_restriction(m, phi);
  passed = f.passed && res.passed;
  Report r;
  r.j["schema"] = kReportSchema;
  r.j["command"] = "verify-koszul";
  r.j["ring"] = m.ring.to_string();
  r.j["t"] = m.t.to_string();
  r.j["form"] = form_text;
  r.j["passed"] = passed;
  r.j["factorization"] = factorization_to_json(f);
  r.j["restriction"] = restriction_to_json(res);

  std::ostringstream t, md;
  t << (passed ? "PASS" : "FAIL") << " verify-koszul ring=" << m.ring.to_string() << " t=" << m.t.to_string()
    << " form=" << form_text << "\n";
  t << "factorization: " << (f.passed ? "pass" : "fail")
    << " (phi nondegenerate: " << (f.phi_nondegenerate ? "yes" : "no")
    << ", literal equality: " << (f.literal_equal ? "yes" : "no") << ")\n";
  md << "| check | result | detail |\n|---|---|---|\n";
  for (const auto& b : f.blocks) {
    t << "  " << (b.ok ? "ok   " : "FAIL ") << b.name;
    if (!b.detail.empty()) t << ": " << b.detail;
    t << "\n";
    md << "| " << b.name << " | " << (b.ok ? "ok" : "FAIL") << " | " << b.detail << " |\n";
  }
  t << "restriction: " << (res.passed ? "pass" : "fail") << " (isometric: " << (res.isometric ? "yes" : "no");
  if (res.cone_contractible_on_u) t << ", cone contractible on U: " << (*res.cone_contractible_on_u ? "yes" : "no");
  t << ")\n";
  md << "| restriction | " << (res.passed ? "ok" : "FAIL") << " | isometric: " << (res.isometric ? "yes" : "no")
     << " |\n";
  r.text = t.str();
  r.markdown = md.str();
  return r;
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::Parse || kind == ErrorKind::Io ? 2 : 1; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Witt-group recipe calculator for blow-up squares", "wittcalc"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"text", "json", "markdown"}));
    sub->add_option("--out", common.out_path, "Write the report to a file");
    sub->add_flag("--fold-degrees", common.fold, "Render degrees mod 4");
  };

  std::string config;
  std::string twist;
  std::int64_t degree = 0;

  auto* validate = app.add_subcommand("validate", "Parse and validate a diagram config");
  validate->add_option("config", config, "Config JSON")->required();
  add_common(validate);

  auto* cls = app.add_subcommand("classify", "Classify a twist on the blow-up");
  cls->add_option("config", config, "Config JSON")->required();
  cls->add_option("--twist", twist, "Pic(Bl) coordinates, comma separated")->required();
  cls->add_option("--degree", degree, "Shift i");
  add_common(cls);

  RecipeOptions ro;
  auto* rec = app.add_subcommand("recipe", "Compile the recipe for a twist on X");
  rec->add_option("config", config, "Config JSON")->required();
  rec->add_option("--twist", ro.twist, "Pic(X) coordinates, comma separated");
  rec->add_option("--degree", ro.degree, "Shift i");
  rec->add_flag("--nonregular", ro.nonregular, "Use dualizing classes K_X, K_Y");
  rec->add_option("--main-lemma", ro.main_lemma, "A or B");
  rec->add_option("--kx", ro.kx, "Bundle of K_X");
  rec->add_option("--kx-shift", ro.kx_shift, "Shift of K_X");
  rec->add_option("--ky", ro.ky, "Bundle of K_Y");
  rec->add_option("--ky-shift", ro.ky_shift, "Shift of K_Y");
  rec->add_option("--assume", ro.assume, "Granted non-regular hypotheses, e.g. abcd");
  add_common(rec);

  std::int64_t from = 0, to = 0;
  auto* les = app.add_subcommand("les", "Localization long exact sequence table");
  les->add_option("config", config, "Config JSON")->required();
  les->add_option("--twist", twist, "Pic(X) coordinates")->required();
  les->add_option("--from", from, "First degree");
  les->add_option("--to", to, "Last degree");
  add_common(les);

  GrassmannianOptions go;
  auto* gr = app.add_subcommand("grassmannian", "Grassmannian instance X = Gr(d,n), Z = Gr(d,n-1)");
  gr->add_option("--d", go.d, "d");
  gr->add_option("--n", go.n, "n");
  gr->add_option("--lambda", go.lambda, "lambda(O(1)); a range a..b under --sweep");
  gr->add_option("--omega-iota", go.omega_iota, "omega_iota coefficient");
  gr->add_option("--twist", go.twist, "Pic(X) coordinate of L");
  gr->add_option("--degree", go.degree, "Shift i");
  gr->add_option("--emit", go.emit, "Write the instance config to a file");
  gr->add_option("--sweep", go.sweep, "d=2..4,n=5..8");
  add_common(gr);

  std::string ring, t, form;
  auto* vk = app.add_subcommand("verify-koszul", "Check the divisor factorization identities");
  vk->add_option("--ring", ring, "Z, Z[x], Z[x,y], ...")->required();
  vk->add_option("--t", t, "Equation of the divisor")->required();
  vk->add_option("--form", form, "diag(..), hyperbolic(n) or matrix([[..]])")->required();
  add_common(vk);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    if (common.format == "json")
      out << error_json("parse", e.what(), 2).dump(2) << "\n";
    else
      err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Report report;
    int status = 0;
    if (*validate) report = do_validate(config);
    else if (*cls) report = do_classify(config, twist, degree, common.fold);
    else if (*rec) report = do_recipe(config, ro, common.fold);
    else if (*les) report = do_les(config, twist, from, to, common.fold);
    else if (*gr) report = do_grassmannian(go, common.fold);
    else {
      bool passed = false;
      report = do_verify_koszul(ring, t, form, passed);
      status = passed ? 0 : 1;
    }
    const std::string rendered = render(report, common.format);
    if (common.out_path.empty())
      out << rendered;
    else
      write_file(common.out_path, rendered);
    return status;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    if (common.format == "json")
      out << error_json(to_string(e.kind()), e.what(), code).dump(2) << "\n";
    else
      err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    if (common.format == "json")
      out << error_json("internal", e.what(), 1).dump(2) << "\n";
    else
      err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wittcalc::cli

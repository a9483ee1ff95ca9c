#include "wittcalc/io.hpp"

#include "wittcalc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

namespace wittcalc {

// ------------------------------------------------------------------ scalars

json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return json(static_cast<std::int64_t>(v));
  return json(to_string(v));
}

Integer integer_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t k = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (k == s.size()) fail(ErrorKind::Parse, where + ": expected an integer, got \"" + s + "\"");
    for (std::size_t i = k; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        fail(ErrorKind::Parse, where + ": expected an integer, got \"" + s + "\"");
    return Integer(s[0] == '+' ? s.substr(1) : s);
  }
  fail(ErrorKind::Parse, where + ": expected an integer");
}

json pic_to_json(const PicElement& v) {
  json out = json::array();
  for (const auto& c : v.coords()) out.push_back(integer_to_json(c));
  return out;
}

// ------------------------------------------------------------------- config

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorKind::Parse, where + ": expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) fail(ErrorKind::Parse, "unknown field '" + (where.empty() ? k : where + "." + k) + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorKind::Parse, "missing field '" + (where.empty() ? key : where + "." + key) + "'");
  return *it;
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

std::int64_t get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::Parse, where + ": expected an integer");
  return j.get<std::int64_t>();
}

SchemeSpec parse_scheme(const json& j, const std::string& where) {
  reject_unknown(j, {"name", "generators", "regular", "gorenstein"}, where);
  SchemeSpec s;
  const json& name = require(j, "name", where);
  if (!name.is_string()) fail(ErrorKind::Parse, join(where, "name") + ": expected a string");
  s.name = name.get<std::string>();
  const json& gens = require(j, "generators", where);
  if (!gens.is_array()) fail(ErrorKind::Parse, join(where, "generators") + ": expected an array of strings");
  for (const auto& g : gens) {
    if (!g.is_string()) fail(ErrorKind::Parse, join(where, "generators") + ": expected an array of strings");
    s.generators.push_back(g.get<std::string>());
  }
  if (auto it = j.find("regular"); it != j.end()) {
    if (!it->is_boolean()) fail(ErrorKind::Parse, join(where, "regular") + ": expected a boolean");
    s.regular = it->get<bool>();
  }
  s.gorenstein = s.regular;
  if (auto it = j.find("gorenstein"); it != j.end()) {
    if (!it->is_boolean()) fail(ErrorKind::Parse, join(where, "gorenstein") + ": expected a boolean");
    s.gorenstein = it->get<bool>();
  }
  return s;
}

IntMatrix parse_matrix(const json& j, std::size_t cols_if_empty, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::Parse, where + ": expected an array of rows");
  std::vector<std::vector<Integer>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) fail(ErrorKind::Parse, where + ": row " + std::to_string(r) + " is not an array");
    std::vector<Integer> row;
    for (std::size_t c = 0; c < j[r].size(); ++c)
      row.push_back(integer_from_json(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorKind::Parse, where + ": rows have different lengths");
    rows.push_back(std::move(row));
  }
  return IntMatrix::from_rows(rows, cols_if_empty);
}

json scheme_to_json(const SchemeSpec& s) {
  return json{{"name", s.name}, {"generators", s.generators}, {"regular", s.regular}, {"gorenstein", s.gorenstein}};
}

json matrix_to_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

void check_shape(const IntMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || (rows > 0 && m.cols() != cols))
    fail(ErrorKind::Structural, what + " must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace

DiagramConfig parse_config(const json& j) {
  reject_unknown(j, {"name", "schemes", "c", "iota_pullback", "omega_iota", "hypothesis"}, "");
  DiagramConfig c;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) fail(ErrorKind::Parse, "name: expected a string");
    c.name = it->get<std::string>();
  }
  const json& schemes = require(j, "schemes", "");
  reject_unknown(schemes, {"X", "Z"}, "schemes");
  c.X = parse_scheme(require(schemes, "X", "schemes"), "schemes.X");
  c.Z = parse_scheme(require(schemes, "Z", "schemes"), "schemes.Z");
  c.c = get_int(require(j, "c", ""), "c");
  c.iota_pullback = parse_matrix(require(j, "iota_pullback", ""), c.X.generators.size(), "iota_pullback");
  const json& om = require(j, "omega_iota", "");
  if (!om.is_array()) fail(ErrorKind::Parse, "omega_iota: expected an integer array");
  for (std::size_t k = 0; k < om.size(); ++k)
    c.omega_iota.push_back(integer_from_json(om[k], "omega_iota[" + std::to_string(k) + "]"));
  if (auto it = j.find("hypothesis"); it != j.end()) {
    const json& h = *it;
    reject_unknown(h, {"Y", "alpha_pullback", "alpha_tilde_pullback", "fiber_dim"}, "hypothesis");
    HypothesisSpec hs;
    hs.Y = parse_scheme(require(h, "Y", "hypothesis"), "hypothesis.Y");
    hs.alpha_pullback =
        parse_matrix(require(h, "alpha_pullback", "hypothesis"), hs.Y.generators.size(), "hypothesis.alpha_pullback");
    hs.alpha_tilde_pullback = parse_matrix(require(h, "alpha_tilde_pullback", "hypothesis"), hs.Y.generators.size(),
                                           "hypothesis.alpha_tilde_pullback");
    hs.fiber_dim = get_int(require(h, "fiber_dim", "hypothesis"), "hypothesis.fiber_dim");
    c.hypothesis = std::move(hs);
  }
  return c;
}

DiagramConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json config_to_json(const DiagramConfig& c) {
  json out;
  if (c.name) out["name"] = *c.name;
  out["schemes"] = json{{"X", scheme_to_json(c.X)}, {"Z", scheme_to_json(c.Z)}};
  out["c"] = c.c;
  out["iota_pullback"] = matrix_to_json(c.iota_pullback);
  json om = json::array();
  for (const auto& v : c.omega_iota) om.push_back(integer_to_json(v));
  out["omega_iota"] = om;
  if (c.hypothesis) {
    out["hypothesis"] = json{{"Y", scheme_to_json(c.hypothesis->Y)},
                             {"alpha_pullback", matrix_to_json(c.hypothesis->alpha_pullback)},
                             {"alpha_tilde_pullback", matrix_to_json(c.hypothesis->alpha_tilde_pullback)},
                             {"fiber_dim", c.hypothesis->fiber_dim}};
  }
  return out;
}

LoadedDiagram build(const DiagramConfig& c) {
  auto node = [](const SchemeSpec& s) {
    return SchemeNode::create(s.name, PicLattice::create("Pic(" + s.name + ")", s.generators), s.regular,
                              s.gorenstein);
  };
  const SchemeNode X = node(c.X);
  const SchemeNode Z = node(c.Z);
  check_shape(c.iota_pullback, Z.pic().rank(), X.pic().rank(), "iota_pullback (rank Z x rank X)");
  if (c.omega_iota.size() != Z.pic().rank())
    fail(ErrorKind::Structural, "omega_iota must have " + std::to_string(Z.pic().rank()) + " coordinates");
  IntMatrix iota = c.iota_pullback;
  if (iota.rows() == 0) iota = IntMatrix(0, X.pic().rank());
  LoadedDiagram out;
  out.config = c;
  out.diagram = build_blowup(X, Z, c.c, LatticeHom(X.pic(), Z.pic(), iota), PicElement(Z.pic(), c.omega_iota));
  if (c.hypothesis) {
    const HypothesisSpec& h = *c.hypothesis;
    const SchemeNode Y = node(h.Y);
    const std::size_t rx = X.pic().rank(), ry = Y.pic().rank();
    check_shape(h.alpha_pullback, rx, ry, "hypothesis.alpha_pullback (rank X x rank Y)");
    check_shape(h.alpha_tilde_pullback, rx + 1, ry, "hypothesis.alpha_tilde_pullback ((rank X + 1) x rank Y)");
    IntMatrix a = h.alpha_pullback;
    if (a.rows() == 0) a = IntMatrix(0, ry);
    out.hypothesis = attach_hypothesis(out.diagram, Y, LatticeHom(Y.pic(), out.diagram.U.pic(), a),
                                       LatticeHom(Y.pic(), out.diagram.Bl.pic(), h.alpha_tilde_pullback),
                                       h.fiber_dim);
  }
  return out;
}

DiagramConfig grassmannian_config(std::int64_t d, std::int64_t n, const Integer& lambda_row,
                                  const Integer& omega_iota_coeff) {
  // Validates the parameters exactly as the in-memory instance does.
  (void)grassmannian_instance(d, n, lambda_row, omega_iota_coeff);
  auto gr = [](std::int64_t k, std::int64_t m) {
    return "Gr(" + std::to_string(k) + "," + std::to_string(m) + ")";
  };
  DiagramConfig c;
  c.name = "grassmannian d=" + std::to_string(d) + " n=" + std::to_string(n);
  c.X = {gr(d, n), {"O(1)"}, true, true};
  c.Z = {gr(d, n - 1), {"O(1)"}, true, true};
  c.c = d;
  c.iota_pullback = IntMatrix{{1}};
  c.omega_iota = {omega_iota_coeff};
  HypothesisSpec h;
  h.Y = {gr(d - 1, n - 1), {"O(1)"}, true, true};
  h.alpha_pullback = IntMatrix{{1}};
  h.alpha_tilde_pullback = IntMatrix(2, 1);
  h.alpha_tilde_pullback(0, 0) = 1;
  h.alpha_tilde_pullback(1, 0) = lambda_row;
  h.fiber_dim = n - d;
  c.hypothesis = h;
  return c;
}

// ------------------------------------------------------------------ recipes

json witt_ref_to_json(const WittRef& r, bool fold_degrees) {
  json out;
  out["scheme"] = r.scheme.name();
  out["degree"] = fold_degrees ? ((r.degree % 4) + 4) % 4 : r.degree;
  if (r.is_coherent()) {
    out["twist"] = json{{"bundle", pic_to_json(r.dualizing().bundle)}, {"shift", r.dualizing().shift}};
  } else {
    out["twist"] = pic_to_json(r.bundle());
  }
  if (r.support) out["support"] = r.support->name();
  out["text"] = r.to_string(fold_degrees);
  return out;
}

json recipe_to_json(const Recipe& r, bool fold_degrees) {
  json out;
  out["schema"] = kReportSchema;
  out["kind"] = to_string(r.kind);
  out["composition"] = r.composition();
  out["vanishes"] = r.vanishes;
  out["assumptions"] = r.assumptions;
  json steps = json::array();
  for (const auto& s : r.steps) {
    json js;
    js["op"] = to_string(s.op);
    js["morphism"] = s.morphism ? json(s.morphism->name) : json(nullptr);
    js["symbol"] = s.symbol();
    js["from"] = witt_ref_to_json(s.from, fold_degrees);
    js["to"] = witt_ref_to_json(s.to, fold_degrees);
    js["justification"] = s.justification;
    steps.push_back(std::move(js));
  }
  out["steps"] = std::move(steps);
  return out;
}

namespace {

std::string step_label(const RecipeStep& s) {
  const std::string sym = s.symbol();
  return std::string(to_string(s.op)) + (sym.empty() ? "" : " " + sym);
}

}  // namespace

std::string recipe_to_text(const Recipe& r, bool fold_degrees) {
  std::ostringstream os;
  os << "kind: " << to_string(r.kind) << (r.vanishes ? " (vanishes)" : "") << "\n";
  os << "composition: " << r.composition() << "\n";
  os << "steps:\n";
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const RecipeStep& s = r.steps[k];
    os << "  " << (k + 1) << ". " << step_label(s) << ": " << s.from.to_string(fold_degrees) << " -> "
       << s.to.to_string(fold_degrees) << "\n";
    os << "     " << s.justification << "\n";
  }
  os << "assumptions:\n";
  for (const auto& a : r.assumptions) os << "  - " << a << "\n";
  return os.str();
}

std::string recipe_to_markdown(const Recipe& r, bool fold_degrees) {
  std::ostringstream os;
  os << "**" << to_string(r.kind) << "**" << (r.vanishes ? " (vanishes)" : "") << ": `" << r.composition()
     << "`\n\n";
  os << "| # | step | from | to | reason |\n|---|---|---|---|---|\n";
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const RecipeStep& s = r.steps[k];
    os << "| " << (k + 1) << " | " << step_label(s) << " | `" << s.from.to_string(fold_degrees) << "` | `"
       << s.to.to_string(fold_degrees) << "` | " << s.justification << " |\n";
  }
  os << "\nAssumptions: ";
  for (std::size_t k = 0; k < r.assumptions.size(); ++k) os << (k ? "; " : "") << r.assumptions[k];
  os << "\n";
  return os.str();
}

// ------------------------------------------------------------------- chains

namespace {

json poly_matrix_to_json(const PolyMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json complex_to_json(const ChainComplex& c) {
  json out;
  out["ring"] = c.ring().to_string();
  json ranks = json::object();
  for (const auto& [n, r] : c.ranks()) ranks[std::to_string(n)] = r;
  out["ranks"] = ranks;
  json d = json::object();
  for (const auto& [n, m] : c.differentials()) d[std::to_string(n)] = poly_matrix_to_json(m);
  out["differentials"] = d;
  return out;
}

json pair_to_json(const SymmetricPair& p) {
  json out;
  out["complex"] = complex_to_json(p.complex);
  out["twist"] = p.twist.to_string();
  out["shift"] = p.shift;
  out["epsilon"] = p.epsilon;
  json f = json::object();
  for (const auto& [n, m] : p.form.components) f[std::to_string(n)] = poly_matrix_to_json(m);
  out["form"] = f;
  return out;
}

json factorization_to_json(const FactorizationReport& r) {
  json out;
  out["passed"] = r.passed;
  out["phi_nondegenerate"] = r.phi_nondegenerate;
  out["literal_equal"] = r.literal_equal;
  json blocks = json::array();
  for (const auto& b : r.blocks) blocks.push_back(json{{"name", b.name}, {"ok", b.ok}, {"detail", b.detail}});
  out["blocks"] = blocks;
  return out;
}

json restriction_to_json(const RestrictionReport& r) {
  json out;
  out["passed"] = r.passed;
  out["isometric"] = r.isometric;
  out["cone_contractible_on_u"] = r.cone_contractible_on_u ? json(*r.cone_contractible_on_u) : json(nullptr);
  return out;
}

// -------------------------------------------------------------------- forms

namespace {

std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unwrap(const std::string& s, char open, char close, const std::string& what) {
  const std::string t = strip(s);
  if (t.size() < 2 || t.front() != open || t.back() != close)
    fail(ErrorKind::Parse, what + ": expected " + std::string(1, open) + "..." + std::string(1, close));
  return t.substr(1, t.size() - 2);
}

SymmetricPair symmetric_or_antisymmetric(const PolyMatrix& m) {
  if (m.transpose() == m) return form_in_degree_zero(m, 1);
  if (m.transpose() == -m) return form_in_degree_zero(m, -1);
  fail(ErrorKind::Validation, "form matrix is neither symmetric nor antisymmetric");
}

}  // namespace

SymmetricPair parse_form(const PolyRing& ring, const std::string& text) {
  const std::string s = strip(text);
  const PolyElement zero(ring, 0);
  auto call = [&](const std::string& name) -> std::optional<std::string> {
    if (s.rfind(name + "(", 0) != 0) return std::nullopt;
    return unwrap(s.substr(name.size()), '(', ')', name);
  };
  if (auto args = call("diag")) {
    const auto parts = split_top_level(*args);
    PolyMatrix m(parts.size(), parts.size(), zero);
    for (std::size_t k = 0; k < parts.size(); ++k) m(k, k) = PolyElement::parse(ring, parts[k]);
    return form_in_degree_zero(m, 1);
  }
  if (auto args = call("hyperbolic")) {
    const std::string a = strip(*args);
    if (a.empty() || a.size() > 3 || !std::all_of(a.begin(), a.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      fail(ErrorKind::Parse, "hyperbolic(rank): rank must be a small even integer");
    const std::size_t rank = std::stoul(a);
    if (rank == 0 || rank % 2) fail(ErrorKind::Domain, "hyperbolic forms have positive even rank");
    const std::size_t h = rank / 2;
    PolyMatrix m(rank, rank, zero);
    for (std::size_t k = 0; k < h; ++k) {
      m(k, h + k) = zero.one_like();
      m(h + k, k) = zero.one_like();
    }
    return form_in_degree_zero(m, 1);
  }
  if (auto args = call("matrix")) {
    const auto rows = split_top_level(unwrap(*args, '[', ']', "matrix"));
    std::vector<std::vector<PolyElement>> entries;
    for (const auto& row : rows) {
      std::vector<PolyElement> r;
      for (const auto& e : split_top_level(unwrap(row, '[', ']', "matrix row"))) r.push_back(PolyElement::parse(ring, e));
      if (!entries.empty() && r.size() != entries.front().size())
        fail(ErrorKind::Parse, "matrix rows have different lengths");
      entries.push_back(std::move(r));
    }
    PolyMatrix m(entries.size(), entries.empty() ? 0 : entries.front().size(), zero);
    for (std::size_t r = 0; r < entries.size(); ++r)
      for (std::size_t c = 0; c < entries[r].size(); ++c) m(r, c) = entries[r][c];
    return symmetric_or_antisymmetric(m);
  }
  fail(ErrorKind::Parse, "form must be diag(...), hyperbolic(n) or matrix([[...]]), got '" + text + "'");
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  const std::string s = strip(text);
  auto to_int = [&](const std::string& part) -> std::int64_t {
    const std::string p = strip(part);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(p, &used);
      if (used != p.size()) throw std::invalid_argument(p);
      return v;
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "bad range '" + text + "'");
    }
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::int64_t v = to_int(s);
    return {v, v};
  }
  const auto lo = to_int(s.substr(0, dots));
  const auto hi = to_int(s.substr(dots + 2));
  if (lo > hi) fail(ErrorKind::Parse, "empty range '" + text + "'");
  return {lo, hi};
}

}  // namespace wittcalc

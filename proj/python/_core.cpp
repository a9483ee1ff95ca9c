#include "cli.hpp"

#include "wittcalc/dichotomy.hpp"
#include "wittcalc/divisor.hpp"
#include "wittcalc/errors.hpp"
#include "wittcalc/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace wittcalc;

namespace {

std::string grassmannian_recipe(std::int64_t d, std::int64_t n, long lambda_row, long omega_iota, long twist,
                                std::int64_t degree, bool fold) {
  const GrassmannianInstance g = grassmannian_instance(d, n, Integer(lambda_row), Integer(omega_iota));
  const Recipe r = compile_regular(g.diagram, g.hypothesis, Integer(twist) * PicElement::basis(g.diagram.X.pic(), 0),
                                   degree);
  const auto violations = check_recipe(r, g.diagram);
  if (!violations.empty()) fail(ErrorKind::Internal, violations.front());
  return recipe_to_json(r, fold).dump();
}

std::string verify_koszul(const std::string& ring, const std::string& t, const std::string& form) {
  const DivisorModel m = DivisorModel::parse(ring, t);
  const SymmetricPair phi = parse_form(m.ring, form);
  const FactorizationReport f = verify_factorization(m, phi);
  const RestrictionReport res = verify_restriction(m, phi);
  json j;
  j["schema"] = kReportSchema;
  j["passed"] = f.passed && res.passed;
  j["factorization"] = factorization_to_json(f);
  j["restriction"] = restriction_to_json(res);
  return j.dump();
}

std::string koszul_pushforward(const std::string& ring, const std::string& t) {
  return pair_to_json(koszul_pushforward_unit(DivisorModel::parse(ring, t)).pair).dump();
}

std::string symmetric_cone_of_divisor(const std::string& ring, const std::string& t) {
  return pair_to_json(symmetric_cone(divisor_pair(DivisorModel::parse(ring, t))).pair).dump();
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int rc;
  {
    py::gil_scoped_release release;
    rc = cli::run_cli(args, out, err);
  }
  return py::make_tuple(rc, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "WittError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.attr("REPORT_SCHEMA") = kReportSchema;
  m.def("run", &run, py::arg("args"));
  m.def("grassmannian_recipe", &grassmannian_recipe, py::arg("d"), py::arg("n"), py::arg("lambda_row"),
        py::arg("omega_iota") = 1, py::arg("twist") = 1, py::arg("degree") = 0, py::arg("fold_degrees") = false);
  m.def("verify_koszul", &verify_koszul, py::arg("ring"), py::arg("t"), py::arg("form"));
  m.def("koszul_pushforward", &koszul_pushforward, py::arg("ring"), py::arg("t"));
  m.def("symmetric_cone_of_divisor", &symmetric_cone_of_divisor, py::arg("ring"), py::arg("t"));
}

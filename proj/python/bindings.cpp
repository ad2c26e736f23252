#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "dyadcert/codec.hpp"
#include "dyadcert/errors.hpp"

namespace py = pybind11;
using namespace dyadcert;
using codec::Json;

namespace {

Json Parse(const std::string& text, const char* what) { return codec::ParseDocument(text, what); }

std::tuple<int, std::string, std::string> RunCli(const std::vector<std::string>& argv,
                                                 const std::optional<std::string>& stdin_doc) {
  std::string out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::Run(argv, stdin_doc ? &*stdin_doc : nullptr, out, err);
  }
  return {code, out, err};
}

std::string SetMeasure(const std::string& set) { return lambda(codec::SetFrom(Parse(set, "set"), "set")).str(); }

std::string SetPhi(const std::string& set, unsigned m) {
  return phi(codec::SetFrom(Parse(set, "set"), "set"), m).str();
}

std::string SetPsi(const std::string& a, const std::string& b, unsigned m) {
  return psi(codec::SetFrom(Parse(a, "a"), "a"), codec::SetFrom(Parse(b, "b"), "b"), m).str();
}

std::string CertifyFamily(const std::string& family, const std::string& epsilon, unsigned min_level) {
  const auto fam = codec::FamilyFrom(Parse(family, "family"), "family");
  const PropTLevel lvl = find_prop_t_level(fam, Rational::Parse(epsilon), min_level);
  return codec::ToJson(lvl.certificate).dump();
}

std::string BuildTau(const std::string& elements, unsigned n, const std::string& epsilon) {
  const auto elems = codec::FamilyFrom(Parse(elements, "elements"), "elements");
  return codec::ToJson(build_tau(elems, n, Rational::Parse(epsilon))).dump();
}

std::string SolveInstance(const std::string& instance, std::uint64_t seed) {
  const TalagrandInstance inst = codec::InstanceFrom(Parse(instance, "instance"));
  return codec::ToJson(solve(inst, seed, SearchBudget{})).dump();
}

std::string ValidateQuadruple(const std::string& quadruple, const std::string& context) {
  const GoodQuadruple e = codec::QuadrupleFrom(Parse(quadruple, "quadruple"));
  const QuadrupleContext ctx = codec::ContextFrom(Parse(context, "context"));
  return codec::ToJson(validate_good_quadruple(e, ctx)).dump();
}

}  // namespace

PYBIND11_MODULE(_dyadcert, m) {
  m.doc() = "Exact dyadic clopen-set certificates";
  m.attr("__version__") = cli::kVersion;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ScaleError>(m, "ScaleError", PyExc_MemoryError);
  py::register_exception<CheckFailure>(m, "CheckFailure", PyExc_RuntimeError);

  m.def("run", &RunCli, py::arg("argv"), py::arg("stdin") = py::none(),
        "Run the command line tool in-process; returns (exit_code, stdout, stderr).");
  m.def("set_lambda", &SetMeasure, py::arg("set"));
  m.def("set_phi", &SetPhi, py::arg("set"), py::arg("m"));
  m.def("set_psi", &SetPsi, py::arg("a"), py::arg("b"), py::arg("m"));
  m.def("certify", &CertifyFamily, py::arg("family"), py::arg("epsilon"), py::arg("min_level") = 0);
  m.def("build_tau", &BuildTau, py::arg("elements"), py::arg("n"), py::arg("epsilon"));
  m.def("solve", &SolveInstance, py::arg("instance"), py::arg("seed") = 0);
  m.def("validate_quadruple", &ValidateQuadruple, py::arg("quadruple"), py::arg("context"));
  m.def("n_zero", [](unsigned t, const std::string& eta) { return n_zero(t, Rational::Parse(eta)); },
        py::arg("t"), py::arg("eta"));
  m.def("pz_zeta", [](const std::string& xi) { return pz_zeta(Rational::Parse(xi)).str(); }, py::arg("xi"));
}

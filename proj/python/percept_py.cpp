#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "percept/abstraction.hpp"
#include "percept/cli.hpp"
#include "percept/errors.hpp"
#include "percept/gaussian.hpp"
#include "percept/perception.hpp"
#include "percept/profile.hpp"
#include "percept/report.hpp"
#include "percept/sampler.hpp"

namespace py = pybind11;
using namespace percept;

namespace {

GaussianDist gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  std::vector<std::string> vars;
  for (Eigen::Index i = 0; i < mean.size(); ++i) vars.push_back("x" + std::to_string(i));
  return GaussianDist::create(vars, mean, cov);
}

InterventionSet grid_or_plan(const ReceiverProfile& p, const std::optional<std::string>& grid) {
  return grid ? cli::parse_grid(*grid) : profile_interventions(p);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Causal perception analysis for linear-Gaussian receiver models";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Run one CLI command; returns (exit code, stdout, stderr).");

  m.def("normalize_profile", [](const std::string& doc) { return serialize_profile(parse_profile(doc)); },
        py::arg("document"), "Parse, validate and re-serialize a profile document.");

  m.def("factorization", [](const std::string& doc) {
    const auto scm = assemble_high_level(parse_profile(doc));
    return render_factorization(scm.graph(), factorize(scm.graph()));
  }, py::arg("document"));

  m.def("compare_json", [](const std::string& a, const std::string& b, std::optional<std::string> grid,
                           const std::string& metric, double ridge, const std::string& agg, double epsilon) {
    const auto pa = parse_profile(a), pb = parse_profile(b);
    const auto rep = causal_perception(pa, pb, grid_or_plan(pa, grid), Metric::parse(metric, ridge),
                                       parse_aggregation(agg), epsilon);
    return render_report(rep, Format::kJson);
  }, py::arg("a"), py::arg("b"), py::arg("grid") = py::none(), py::arg("metric") = "w2",
     py::arg("ridge") = 1e-9, py::arg("agg") = "max", py::arg("epsilon") = 0.01);

  m.def("consistency_json", [](const std::string& doc, std::optional<std::string> tau, double tol,
                               const std::string& omega, std::optional<std::string> grid) {
    auto p = parse_profile(doc);
    if (tau) p.tau = parse_tau(*tau);
    const auto rep = check_exact_transformation(p, grid_or_plan(p, grid), Metric::w2(), tol,
                                                OmegaRule::parse(omega));
    return render_report(rep, Format::kJson);
  }, py::arg("document"), py::arg("tau") = py::none(), py::arg("tol") = 1e-9,
     py::arg("omega") = "equal-split", py::arg("grid") = py::none());

  m.def("sample", [](const std::string& doc, std::size_t n, std::uint64_t seed, unsigned workers) {
    const auto s = sample(assemble_high_level(parse_profile(doc)), n, seed, workers);
    return py::make_tuple(s.variables, Eigen::MatrixXd(s.rows));
  }, py::arg("document"), py::arg("n"), py::arg("seed") = 0, py::arg("workers") = 1);

  m.def("wasserstein2", [](const Eigen::VectorXd& m1, const Eigen::MatrixXd& c1, const Eigen::VectorXd& m2,
                           const Eigen::MatrixXd& c2) { return wasserstein2(gaussian(m1, c1), gaussian(m2, c2)); },
        py::arg("mean_p"), py::arg("cov_p"), py::arg("mean_q"), py::arg("cov_q"));

  m.def("kl_divergence", [](const Eigen::VectorXd& m1, const Eigen::MatrixXd& c1, const Eigen::VectorXd& m2,
                            const Eigen::MatrixXd& c2, double ridge) {
    return kl_divergence(gaussian(m1, c1), gaussian(m2, c2), ridge);
  }, py::arg("mean_p"), py::arg("cov_p"), py::arg("mean_q"), py::arg("cov_q"), py::arg("ridge") = 0.0);

  m.def("check_conjunction", [](double pj, double pa, double pb) {
    const auto v = check_conjunction(pj, pa, pb);
    return py::make_tuple(v.violated, v.margin);
  }, py::arg("p_joint"), py::arg("p_a"), py::arg("p_b"));
}

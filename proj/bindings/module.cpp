#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaussbound/bound_result.hpp"
#include "gaussbound/cgf.hpp"
#include "gaussbound/config.hpp"
#include "gaussbound/gaussian.hpp"
#include "gaussbound/mc_oracle.hpp"
#include "gaussbound/optim1d.hpp"
#include "gaussbound/problem.hpp"
#include "gaussbound/scalar_bounds.hpp"
#include "gaussbound/sweep.hpp"
#include "gaussbound/vector_bounds.hpp"

namespace py = pybind11;
using namespace gaussbound;

namespace {

std::string sweep_csv_from_config(const std::string& text,
                                  const std::vector<std::string>& overrides) {
  const ConfigResult result = parse_sweep_config(text, overrides);
  if (!result.ok()) {
    std::string msg = "invalid config:";
    for (const auto& d : result.diagnostics) msg += "\n  " + d;
    throw std::invalid_argument(msg);
  }
  return write_csv(run_sweep(*result.config));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalization-error bounds for Gaussian location problems";

  py::class_<ScalarGaussian>(m, "ScalarGaussian")
      .def(py::init<double, double>(), py::arg("mean") = 0.0, py::arg("variance") = 1.0)
      .def_readwrite("mean", &ScalarGaussian::mean)
      .def_readwrite("variance", &ScalarGaussian::variance)
      .def("degenerate", &ScalarGaussian::degenerate)
      .def("__repr__", [](const ScalarGaussian& g) {
        return "ScalarGaussian(mean=" + std::to_string(g.mean) +
               ", variance=" + std::to_string(g.variance) + ")";
      });

  py::class_<MultivariateGaussian>(m, "MultivariateGaussian")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("mean"), py::arg("covariance"))
      .def_readonly("mean", &MultivariateGaussian::mean)
      .def_readonly("covariance", &MultivariateGaussian::covariance)
      .def_readonly("degenerate", &MultivariateGaussian::degenerate)
      .def("dim", &MultivariateGaussian::dim);

  m.def("kl_scalar", &kl_scalar, py::arg("p"), py::arg("q"));
  m.def("kl_mvn", &kl_mvn, py::arg("p"), py::arg("q"));

  py::class_<ScalarLocationProblem>(m, "ScalarLocationProblem")
      .def(py::init([](double mean, double variance, std::vector<double> weights,
                       double noise_variance) {
             ScalarLocationProblem p{mean, variance, std::move(weights), noise_variance};
             validate(p);
             return p;
           }),
           py::arg("mean"), py::arg("variance"), py::arg("weights"),
           py::arg("noise_variance") = 0.0)
      .def_readonly("mean", &ScalarLocationProblem::mean)
      .def_readonly("variance", &ScalarLocationProblem::variance)
      .def_readonly("weights", &ScalarLocationProblem::weights)
      .def_readonly("noise_variance", &ScalarLocationProblem::noise_variance)
      .def_property_readonly("n", &ScalarLocationProblem::n)
      .def_static("uniform", &ScalarLocationProblem::uniform, py::arg("n"), py::arg("mean") = 0.0,
                  py::arg("variance") = 1.0, py::arg("noise_variance") = 0.0)
      .def_static("one_hot", &ScalarLocationProblem::one_hot, py::arg("n"), py::arg("mean") = 0.0,
                  py::arg("variance") = 1.0, py::arg("noise_variance") = 0.0, py::arg("hot") = 0);

  py::class_<VectorLocationProblem>(m, "VectorLocationProblem")
      .def(py::init([](Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                       std::vector<double> weights, double noise_variance,
                       Eigen::MatrixXd loss_metric) {
             VectorLocationProblem p{std::move(mean), std::move(covariance), std::move(weights),
                                     noise_variance, std::move(loss_metric)};
             validate(p);
             return p;
           }),
           py::arg("mean"), py::arg("covariance"), py::arg("weights"),
           py::arg("noise_variance"), py::arg("loss_metric"))
      .def_readonly("mean", &VectorLocationProblem::mean)
      .def_readonly("covariance", &VectorLocationProblem::covariance)
      .def_readonly("weights", &VectorLocationProblem::weights)
      .def_readonly("noise_variance", &VectorLocationProblem::noise_variance)
      .def_readonly("loss_metric", &VectorLocationProblem::loss_metric)
      .def_property_readonly("d", &VectorLocationProblem::d)
      .def_property_readonly("n", &VectorLocationProblem::n)
      .def_static("uniform", &VectorLocationProblem::uniform, py::arg("n"), py::arg("mean"),
                  py::arg("covariance"), py::arg("noise_variance"), py::arg("loss_metric"));

  m.def("reference_variance", &reference_variance, py::arg("p"), py::arg("i"));
  m.def("reference_covariance", &reference_covariance, py::arg("p"), py::arg("i"));
  m.def("mi_weighted_average_scalar", &mi_weighted_average_scalar, py::arg("p"), py::arg("i"));
  m.def("mi_full_sample_scalar", &mi_full_sample_scalar, py::arg("p"));

  py::class_<CgfSpec>(m, "CgfSpec")
      .def(py::init([](std::function<double(double)> evaluate, double domain_upper) {
             return CgfSpec{std::move(evaluate), domain_upper};
           }),
           py::arg("evaluate"), py::arg("domain_upper") = kInf)
      .def_readonly("domain_upper", &CgfSpec::domain_upper)
      .def("__call__", [](const CgfSpec& c, double lam) { return c.evaluate(lam); });

  m.def("quadratic_cgf", &quadratic_cgf, py::arg("coefficient"));
  m.def("affine_gaussian_cgf", &affine_gaussian_cgf, py::arg("slope"), py::arg("q"));

  py::class_<InfResult>(m, "InfResult")
      .def_readonly("minimizer", &InfResult::minimizer)
      .def_readonly("value", &InfResult::value)
      .def_readonly("converged", &InfResult::converged)
      .def_readonly("iterations", &InfResult::iterations)
      .def_readonly("boundary", &InfResult::boundary)
      .def_readonly("finite", &InfResult::finite)
      .def("__repr__", [](const InfResult& r) {
        return "InfResult(minimizer=" + std::to_string(r.minimizer) +
               ", value=" + std::to_string(r.value) + ")";
      });

  m.def("inverse_legendre_dual", &inverse_legendre_dual, py::arg("cgf"), py::arg("y"));
  m.def("minimize_bound_objective", &minimize_bound_objective, py::arg("kl"), py::arg("cgf"));

  py::class_<BoundResult>(m, "BoundResult")
      .def_readonly("value", &BoundResult::value)
      .def_property_readonly("family",
                             [](const BoundResult& r) { return std::string(to_string(r.family)); })
      .def_readonly("per_index_lambda", &BoundResult::per_index_lambda)
      .def_readonly("finite", &BoundResult::finite)
      .def_readonly("converged", &BoundResult::converged)
      .def("__repr__", [](const BoundResult& r) {
        return "BoundResult(family=" + std::string(to_string(r.family)) +
               ", value=" + std::to_string(r.value) + ")";
      });

  m.def("posterior_w_given_zi", &posterior_w_given_zi, py::arg("p"), py::arg("i"), py::arg("z"));
  m.def("reference_q", &reference_q, py::arg("p"), py::arg("i"));
  m.def("kl_p_q", &kl_p_q, py::arg("p"), py::arg("i"), py::arg("z"));
  m.def("cgf_conditional", &cgf_conditional, py::arg("p"), py::arg("i"), py::arg("z"),
        py::arg("lambda_"));
  m.def("expected_kl", &expected_kl, py::arg("p"), py::arg("i"));
  m.def("expected_cgf_coeff", &expected_cgf_coeff, py::arg("p"), py::arg("i"));
  m.def("lambda_star", &lambda_star, py::arg("p"), py::arg("i"));
  m.def("true_gen_error", &true_gen_error, py::arg("p"));

  m.def("bound_theorem1", &bound_theorem1, py::arg("p"));
  m.def("bound_cor1_first", &bound_cor1_first, py::arg("p"));
  m.def("bound_cor1_second", &bound_cor1_second, py::arg("p"));
  m.def("bound_cor2_first", &bound_cor2_first, py::arg("p"), py::arg("samples") = 200000,
        py::arg("seed") = 1);
  m.def("bound_cor3_first", &bound_cor3_first, py::arg("p"));
  m.def("bound_cor3_second", &bound_cor3_second, py::arg("p"));
  m.def("bound_cor4", py::overload_cast<const ScalarLocationProblem&>(&bound_cor4), py::arg("p"));
  m.def("bound_cor4",
        py::overload_cast<const ScalarLocationProblem&, double, int>(&bound_cor4), py::arg("p"),
        py::arg("proxy"), py::arg("quad_points") = 64);
  m.def("bound_cor4",
        py::overload_cast<const ScalarLocationProblem&, const std::function<double(int, double)>&,
                          int>(&bound_cor4),
        py::arg("p"), py::arg("proxy"), py::arg("quad_points") = 64);
  m.def("bound_eq_mib_first", &bound_eq_mib_first, py::arg("p"));
  m.def("bound_eq_mib_second", &bound_eq_mib_second, py::arg("p"));
  m.def("bound_xu_raginsky", &bound_xu_raginsky, py::arg("p"), py::arg("proxy"));
  m.def("bound_bu", &bound_bu, py::arg("p"), py::arg("proxy"));

  py::class_<EigenDecomposition>(m, "EigenDecomposition")
      .def_readonly("eigenvalues", &EigenDecomposition::eigenvalues)
      .def_readonly("eigenvectors", &EigenDecomposition::eigenvectors);
  m.def("eigendecompose", &eigendecompose, py::arg("m"));
  m.def("expected_kl_vec", &expected_kl_vec, py::arg("p"), py::arg("i"));
  m.def("expected_cgf_coeff_vec", &expected_cgf_coeff_vec, py::arg("p"), py::arg("i"));
  m.def("bound_direct_vec", &bound_direct_vec, py::arg("p"));
  m.def("bound_decomposed_vec", &bound_decomposed_vec, py::arg("p"));
  m.def("true_gen_error_vec", &true_gen_error_vec, py::arg("p"));

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("mean", &McEstimate::mean)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("n_samples", &McEstimate::n_samples)
      .def_readonly("seed", &McEstimate::seed)
      .def_readonly("rng", &McEstimate::rng)
      .def("__repr__", [](const McEstimate& e) {
        return "McEstimate(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) + ")";
      });

  py::class_<AffineStatistic>(m, "AffineStatistic")
      .def(py::init<double, double>(), py::arg("slope") = 1.0, py::arg("intercept") = 0.0)
      .def_readwrite("slope", &AffineStatistic::slope)
      .def_readwrite("intercept", &AffineStatistic::intercept);

  py::class_<DvCheckRow>(m, "DvCheckRow")
      .def_readonly("lambda_", &DvCheckRow::lambda)
      .def_readonly("lhs", &DvCheckRow::lhs)
      .def_readonly("rhs", &DvCheckRow::rhs)
      .def_readonly("std_error", &DvCheckRow::std_error)
      .def_readonly("holds", &DvCheckRow::holds);

  m.def("mc_gen_error_scalar", &mc_gen_error_scalar, py::arg("p"), py::arg("n_samples"),
        py::arg("seed"));
  m.def("mc_gen_error_scalar_naive", &mc_gen_error_scalar_naive, py::arg("p"),
        py::arg("n_samples"), py::arg("seed"));
  m.def("mc_gen_error_vec", &mc_gen_error_vec, py::arg("p"), py::arg("n_samples"),
        py::arg("seed"));
  m.def("mc_cgf", &mc_cgf, py::arg("p"), py::arg("i"), py::arg("z"), py::arg("lambda_"),
        py::arg("n_samples"), py::arg("seed"));
  m.def("mc_cgf_vec", &mc_cgf_vec, py::arg("p"), py::arg("i"), py::arg("z"), py::arg("lambda_"),
        py::arg("n_samples"), py::arg("seed"));
  m.def(
      "mc_dv_check",
      [](const ScalarGaussian& p, const ScalarGaussian& q, const AffineStatistic& f,
         const std::vector<double>& lambdas, std::uint64_t n_samples, std::uint64_t seed) {
        return mc_dv_check(p, q, f, lambdas, n_samples, seed);
      },
      py::arg("p"), py::arg("q"), py::arg("f"), py::arg("lambdas"), py::arg("n_samples"),
      py::arg("seed"));

  m.def("sweep_csv_from_config", &sweep_csv_from_config, py::arg("text"),
        py::arg("overrides") = std::vector<std::string>{});
}

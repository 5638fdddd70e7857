#include "gaussbound/problem.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace gaussbound {

namespace {

constexpr double kSimplexTol = 1e-12;

void check_weights(std::span<const double> w) {
  if (w.empty()) throw std::invalid_argument("weights: must be non-empty (n >= 1)");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw std::invalid_argument("weights: entries must be non-negative and finite");
    sum += x;
  }
  if (sum != 0.0 && std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("weights: must sum to 1 within 1e-12 (or be all zero)");
}

bool is_uniform(std::span<const double> w, double tol) {
  const double target = 1.0 / static_cast<double>(w.size());
  for (double x : w)
    if (std::abs(x - target) > tol) return false;
  return true;
}

void check_spd(const Eigen::MatrixXd& m, const std::string& name) {
  if (m.rows() != m.cols()) throw std::invalid_argument(name + ": must be square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument(name + ": must be symmetric within 1e-12 relative tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * hi))
    throw std::invalid_argument(name + ": must be positive definite (smallest eigenvalue > 1e-12 * largest)");
}

}  // namespace

ScalarLocationProblem ScalarLocationProblem::uniform(int n, double mean, double variance,
                                                     double noise_variance) {
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  ScalarLocationProblem p;
  p.mean = mean;
  p.variance = variance;
  p.noise_variance = noise_variance;
  p.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  return p;
}

ScalarLocationProblem ScalarLocationProblem::one_hot(int n, double mean, double variance,
                                                     double noise_variance, int hot) {
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  if (hot < 0 || hot >= n) throw std::out_of_range("hot: index out of range");
  ScalarLocationProblem p;
  p.mean = mean;
  p.variance = variance;
  p.noise_variance = noise_variance;
  p.weights.assign(static_cast<std::size_t>(n), 0.0);
  p.weights[static_cast<std::size_t>(hot)] = 1.0;
  return p;
}

VectorLocationProblem VectorLocationProblem::uniform(int n, Eigen::VectorXd mean,
                                                     Eigen::MatrixXd covariance,
                                                     double noise_variance,
                                                     Eigen::MatrixXd loss_metric) {
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  VectorLocationProblem p;
  p.mean = std::move(mean);
  p.covariance = std::move(covariance);
  p.noise_variance = noise_variance;
  p.loss_metric = std::move(loss_metric);
  p.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  return p;
}

void validate(const ScalarLocationProblem& p) {
  if (!std::isfinite(p.mean)) throw std::invalid_argument("mean: must be finite");
  if (!(p.variance > 0.0) || !std::isfinite(p.variance))
    throw std::invalid_argument("variance: must be positive and finite");
  if (!(p.noise_variance >= 0.0) || !std::isfinite(p.noise_variance))
    throw std::invalid_argument("noise_variance: must be non-negative and finite");
  check_weights(p.weights);
}

void validate(const VectorLocationProblem& p) {
  const int d = p.d();
  if (d < 1) throw std::invalid_argument("mean: dimension must be >= 1");
  if (!p.mean.allFinite()) throw std::invalid_argument("mean: must be finite");
  if (!(p.noise_variance >= 0.0) || !std::isfinite(p.noise_variance))
    throw std::invalid_argument("noise_variance: must be non-negative and finite");
  if (p.covariance.rows() != d || p.covariance.cols() != d)
    throw std::invalid_argument("covariance: dimensions must match mean");
  if (p.loss_metric.rows() != d || p.loss_metric.cols() != d)
    throw std::invalid_argument("loss_metric: dimensions must match mean");
  if (!p.covariance.allFinite()) throw std::invalid_argument("covariance: must be finite");
  if (!p.loss_metric.allFinite()) throw std::invalid_argument("loss_metric: must be finite");
  check_spd(p.covariance, "covariance");
  check_spd(p.loss_metric, "loss_metric");
  check_weights(p.weights);
}

bool uniform_weights(const ScalarLocationProblem& p, double tol) {
  return is_uniform(p.weights, tol);
}

bool uniform_weights(const VectorLocationProblem& p, double tol) {
  return is_uniform(p.weights, tol);
}

double weight_sum(const ScalarLocationProblem& p) {
  double s = 0.0;
  for (double x : p.weights) s += x;
  return s;
}

double weight_sum_sq(const ScalarLocationProblem& p) {
  double s = 0.0;
  for (double x : p.weights) s += x * x;
  return s;
}

double weight_sum_sq(const VectorLocationProblem& p) {
  double s = 0.0;
  for (double x : p.weights) s += x * x;
  return s;
}

double reference_variance(const ScalarLocationProblem& p, int i) {
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
  const double wi = p.weights[static_cast<std::size_t>(i)];
  // Clamp: rounding in sum_sq - wi^2 must not turn an exact zero negative.
  const double rest = std::max(0.0, weight_sum_sq(p) - wi * wi);
  return rest * p.variance + p.noise_variance;
}

Eigen::MatrixXd reference_covariance(const VectorLocationProblem& p, int i) {
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
  const double wi = p.weights[static_cast<std::size_t>(i)];
  const double rest = std::max(0.0, weight_sum_sq(p) - wi * wi);
  const int d = p.d();
  return rest * p.covariance + p.noise_variance * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace gaussbound

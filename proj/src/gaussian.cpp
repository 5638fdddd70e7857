#include "gaussbound/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gaussbound/cgf.hpp"

namespace gaussbound {

MultivariateGaussian::MultivariateGaussian(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), covariance(std::move(cov_in)) {
  const int d = dim();
  if (d < 1) throw std::invalid_argument("mean: dimension must be >= 1");
  if (covariance.rows() != d || covariance.cols() != d)
    throw std::invalid_argument("covariance: dimensions must match mean");
  if (!mean.allFinite() || !covariance.allFinite())
    throw std::invalid_argument("mean/covariance: must be finite");
  const double scale = std::max(covariance.cwiseAbs().maxCoeff(), 1e-300);
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("covariance: must be symmetric within 1e-12 relative tolerance");
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -1e-12 * std::max(hi, 0.0))
    throw std::invalid_argument("covariance: must be positive semi-definite");
  degenerate = lo <= 1e-12 * std::max(hi, 0.0);
}

double kl_scalar(const ScalarGaussian& p, const ScalarGaussian& q) {
  if (!(p.variance >= 0.0) || !(q.variance >= 0.0) || !std::isfinite(p.mean) ||
      !std::isfinite(q.mean) || !std::isfinite(p.variance) || !std::isfinite(q.variance))
    throw std::invalid_argument("kl_scalar: means must be finite, variances non-negative");
  if (q.degenerate()) {
    // KL against a point mass is 0 only if p is the same point mass.
    return (p.degenerate() && p.mean == q.mean) ? 0.0 : kInf;
  }
  if (p.degenerate()) return kInf;
  const double d = p.mean - q.mean;
  return 0.5 * (p.variance / q.variance + d * d / q.variance - 1.0 +
                std::log(q.variance / p.variance));
}

double kl_mvn(const MultivariateGaussian& p, const MultivariateGaussian& q) {
  const int d = p.dim();
  if (d != q.dim()) throw std::invalid_argument("kl_mvn: dimension mismatch");
  if (p.degenerate || q.degenerate) return kInf;
  Eigen::LLT<Eigen::MatrixXd> lq(q.covariance);
  if (lq.info() != Eigen::Success) return kInf;
  Eigen::LLT<Eigen::MatrixXd> lp(p.covariance);
  if (lp.info() != Eigen::Success) return kInf;

  const double trace = lq.solve(p.covariance).trace();
  const Eigen::VectorXd delta = q.mean - p.mean;
  const double quad = delta.dot(lq.solve(delta));
  double logdet_q = 0.0, logdet_p = 0.0;
  for (int k = 0; k < d; ++k) {
    logdet_q += 2.0 * std::log(lq.matrixLLT()(k, k));
    logdet_p += 2.0 * std::log(lp.matrixLLT()(k, k));
  }
  return 0.5 * (trace + quad - d + logdet_q - logdet_p);
}

double mi_weighted_average_scalar(const ScalarLocationProblem& p, int i) {
  validate(p);
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
  const double wi = p.weights[static_cast<std::size_t>(i)];
  if (wi == 0.0) return 0.0;
  const double cond = reference_variance(p, i);
  const double marginal = cond + wi * wi * p.variance;
  if (cond == 0.0) return kInf;
  return 0.5 * std::log(marginal / cond);
}

double mi_full_sample_scalar(const ScalarLocationProblem& p) {
  validate(p);
  if (weight_sum(p) == 0.0) return 0.0;
  if (p.noise_variance == 0.0) return kInf;
  const double marginal = weight_sum_sq(p) * p.variance + p.noise_variance;
  return 0.5 * std::log(marginal / p.noise_variance);
}

CgfSpec quadratic_cgf(double coefficient) {
  if (!(coefficient >= 0.0) || !std::isfinite(coefficient))
    throw std::invalid_argument("quadratic_cgf: coefficient must be non-negative and finite");
  CgfSpec s;
  s.evaluate = [coefficient](double lambda) { return coefficient * lambda * lambda; };
  s.domain_upper = kInf;
  return s;
}

CgfSpec affine_gaussian_cgf(double slope, const ScalarGaussian& q) {
  if (!(q.variance >= 0.0)) throw std::invalid_argument("affine_gaussian_cgf: variance must be non-negative");
  return quadratic_cgf(0.5 * slope * slope * q.variance);
}

}  // namespace gaussbound

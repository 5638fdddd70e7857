#pragma once

#include <limits>

#include <Eigen/Dense>

#include "gaussbound/problem.hpp"

namespace gaussbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Scalar normal law. variance == 0 denotes a point mass and flags degeneracy.
struct ScalarGaussian {
  double mean = 0.0;
  double variance = 1.0;

  bool degenerate() const { return variance == 0.0; }
};

// Multivariate normal law. The constructor symmetrises the covariance, rejects
// inputs that are asymmetric beyond 1e-12 (relative to the largest entry) or
// have an eigenvalue below -1e-12 * lambda_max, and flags near-zero eigenvalues
// as degeneracy.
struct MultivariateGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  bool degenerate = false;

  MultivariateGaussian() = default;
  MultivariateGaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  int dim() const { return static_cast<int>(mean.size()); }
};

// KL(p || q) in nats. Degenerate q (or degenerate p) yields +infinity rather
// than an exception; q.variance < 0 or p.variance < 0 is an input error.
double kl_scalar(const ScalarGaussian& p, const ScalarGaussian& q);

// KL(p || q) in nats for multivariate normals. Dimension mismatch is an input
// error; a singular q.covariance (or degenerate p) yields +infinity.
double kl_mvn(const MultivariateGaussian& p, const MultivariateGaussian& q);

// I(W; Z_i) for the weighted-average estimator, in nats:
// 0.5 * ln(Var(W) / Var(W | Z_i)). Returns 0 when weights[i] == 0 and
// +infinity when the conditional variance is zero with weights[i] > 0.
double mi_weighted_average_scalar(const ScalarLocationProblem& p, int i);

// I(W; Z_1..n) = 0.5 * ln(Var(W) / noise_variance). +infinity when
// noise_variance == 0 with data-dependent weights (W is a deterministic map
// of the sample), 0 when all weights vanish.
double mi_full_sample_scalar(const ScalarLocationProblem& p);

}  // namespace gaussbound

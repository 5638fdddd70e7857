#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gaussbound {

// Gaussian location learning problem: n i.i.d. samples Z_i ~ N(mean, variance),
// estimator W = sum_i weights[i] * Z_i + N(0, noise_variance), squared loss.
//
// Weights are either a point on the probability simplex (sum within 1e-12 of 1)
// or identically zero, the latter modelling a data-independent rule.
struct ScalarLocationProblem {
  double mean = 0.0;
  double variance = 1.0;
  std::vector<double> weights;
  double noise_variance = 0.0;

  int n() const { return static_cast<int>(weights.size()); }

  static ScalarLocationProblem uniform(int n, double mean = 0.0, double variance = 1.0,
                                       double noise_variance = 0.0);
  // All weight on index `hot`.
  static ScalarLocationProblem one_hot(int n, double mean = 0.0, double variance = 1.0,
                                       double noise_variance = 0.0, int hot = 0);
};

// Multivariate variant: Z_i ~ N(mean, covariance) in R^d, loss |x - z|^2 measured
// in the metric of the symmetric positive definite matrix `loss_metric`.
struct VectorLocationProblem {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::vector<double> weights;
  double noise_variance = 0.0;
  Eigen::MatrixXd loss_metric;

  int d() const { return static_cast<int>(mean.size()); }
  int n() const { return static_cast<int>(weights.size()); }

  static VectorLocationProblem uniform(int n, Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                                       double noise_variance, Eigen::MatrixXd loss_metric);
};

// Throw std::invalid_argument naming the offending field and constraint.
void validate(const ScalarLocationProblem& p);
void validate(const VectorLocationProblem& p);

bool uniform_weights(const ScalarLocationProblem& p, double tol = 1e-12);
bool uniform_weights(const VectorLocationProblem& p, double tol = 1e-12);

double weight_sum(const ScalarLocationProblem& p);
double weight_sum_sq(const ScalarLocationProblem& p);
double weight_sum_sq(const VectorLocationProblem& p);

// Variance of W given Z_i, which is also the variance of the index-i reference law:
// (sum_j w_j^2 - w_i^2) * variance + noise_variance. Zero is a valid degenerate value.
double reference_variance(const ScalarLocationProblem& p, int i);

// Matrix analogue: (sum_j w_j^2 - w_i^2) * covariance + noise_variance * I.
Eigen::MatrixXd reference_covariance(const VectorLocationProblem& p, int i);

}  // namespace gaussbound

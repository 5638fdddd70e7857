#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussbound/gaussian.hpp"
#include "gaussbound/problem.hpp"

namespace gaussbound {

// Estimate with its Monte-Carlo standard error. Runs are reproducible:
// identical seed and configuration give bit-identical results regardless of
// thread count (fixed block size, per-block derived seeds, fixed-order
// combination of block partials).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string rng;
};

// Expected generalization error by simulation, using the conditional
// expectation of the population loss given W as a variance reducer:
// gap = variance + (W - mean)^2 - empirical loss. Requires n_samples >= 100.
McEstimate mc_gen_error_scalar(const ScalarLocationProblem& p, std::uint64_t n_samples,
                               std::uint64_t seed);

// Same estimand with a fresh test draw instead of the conditional expectation;
// exists to quantify what the reduction buys.
McEstimate mc_gen_error_scalar_naive(const ScalarLocationProblem& p, std::uint64_t n_samples,
                                     std::uint64_t seed);

// Multivariate analogue: gap = tr(A Sigma) + |W - mean|_A^2 - empirical loss.
McEstimate mc_gen_error_vec(const VectorLocationProblem& p, std::uint64_t n_samples,
                            std::uint64_t seed);

// Centered CGF ln E[e^{lambda F}] - lambda E[F] of the loss-difference
// statistic F under the index-i reference law, estimated with a max-shifted
// log-sum-exp and a delta-method standard error. Requires n_samples >= 10000.
// lambda == 0 returns 0 exactly.
McEstimate mc_cgf(const ScalarLocationProblem& p, int i, double z, double lambda,
                  std::uint64_t n_samples, std::uint64_t seed);

McEstimate mc_cgf_vec(const VectorLocationProblem& p, int i, const Eigen::VectorXd& z,
                      double lambda, std::uint64_t n_samples, std::uint64_t seed);

// F = slope * W + intercept, the statistic shape whose change-of-measure
// inequality is tight at the optimal lambda.
struct AffineStatistic {
  double slope = 1.0;
  double intercept = 0.0;
};

struct DvCheckRow {
  double lambda = 0.0;
  double lhs = 0.0;       // lambda * E_P[F], estimated
  double rhs = 0.0;       // KL(P||Q) + ln E_Q[e^{lambda F}], estimated
  double std_error = 0.0; // combined std error of lhs and rhs
  bool holds = false;     // lhs <= rhs + 3 * std_error
};

// Empirical check of the change-of-measure inequality for each lambda, with
// independent sample streams for the two sides. Requires n_samples >= 100.
std::vector<DvCheckRow> mc_dv_check(const ScalarGaussian& p, const ScalarGaussian& q,
                                    const AffineStatistic& f, std::span<const double> lambdas,
                                    std::uint64_t n_samples, std::uint64_t seed);

}  // namespace gaussbound

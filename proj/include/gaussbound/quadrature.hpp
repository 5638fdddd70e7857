#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gaussbound {

// Gauss-Hermite rule for the weight e^{-x^2} (physicists' convention),
// computed by the Golub-Welsch tridiagonal eigensolve. Nodes ascend.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite(int points);

// E[h(X)] for X ~ N(mean, variance), approximated with `points` Hermite nodes.
// Exact for polynomial h of degree < 2 * points; variance == 0 evaluates h(mean).
double expect_normal(double mean, double variance, const std::function<double(double)>& h,
                     int points = 64);

}  // namespace gaussbound

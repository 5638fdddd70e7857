#include "gaussbound/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gaussbound {

GaussHermiteRule gauss_hermite(int points) {
  if (points < 1) throw std::invalid_argument("gauss_hermite: points must be >= 1");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come from
  // the first components of the eigenvectors.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(points);
  const double total = std::sqrt(std::numbers::pi);
  for (int k = 0; k < points; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = total * v0 * v0;
  }
  return rule;
}

double expect_normal(double mean, double variance, const std::function<double(double)>& h,
                     int points) {
  if (!(variance >= 0.0)) throw std::invalid_argument("expect_normal: variance must be non-negative");
  if (variance == 0.0) return h(mean);
  const GaussHermiteRule rule = gauss_hermite(points);
  const double scale = std::sqrt(2.0 * variance);
  const double norm = std::sqrt(std::numbers::pi);
  double acc = 0.0;
  for (int k = 0; k < points; ++k)
    acc += rule.weights[k] * h(mean + scale * rule.nodes[k]);
  return acc / norm;
}

}  // namespace gaussbound

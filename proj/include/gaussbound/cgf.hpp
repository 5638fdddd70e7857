#pragma once

#include <functional>

#include "gaussbound/gaussian.hpp"

namespace gaussbound {

// Centered cumulant generating function lambda -> ln E[e^{lambda F}] - lambda E[F].
// evaluate(0) == 0 and evaluate is convex and non-negative on [0, domain_upper);
// evaluate returns +infinity outside the domain. domain_upper is the exclusive
// supremum of feasible lambda (+infinity when the CGF is everywhere finite).
struct CgfSpec {
  std::function<double(double)> evaluate;
  double domain_upper = kInf;
};

// coefficient * lambda^2, defined on all of R+.
CgfSpec quadratic_cgf(double coefficient);

// Centered CGF of the affine statistic F = slope * W + intercept under W ~ q:
// slope^2 * q.variance / 2 * lambda^2. The intercept cancels.
CgfSpec affine_gaussian_cgf(double slope, const ScalarGaussian& q);

}  // namespace gaussbound

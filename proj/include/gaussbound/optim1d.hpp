#pragma once

#include "gaussbound/cgf.hpp"

namespace gaussbound {

// Result of a 1-d infimum over lambda in (0, domain_upper).
struct InfResult {
  double minimizer = 0.0;
  double value = 0.0;
  // Tolerance reached within the iteration budget. When false, `value` is the
  // best objective value seen and remains a valid upper bound on the infimum
  // up to evaluation error.
  bool converged = false;
  int iterations = 0;
  // Objective decreases toward the lambda -> 0 edge; no interior minimizer.
  // The reported value is the objective at a small probe lambda.
  bool boundary = false;
  // False when the input level y was infinite (value is then +infinity).
  bool finite = true;
};

// inf over lambda in (0, domain_upper) of (y + cgf(lambda)) / lambda, the
// inverse of the Legendre dual of the centered CGF.
//
// Requires y >= 0. y == 0 short-circuits to a boundary result probed at
// lambda = 1e-8 (the infimum is the lambda -> 0 limit). Infinite y yields an
// infinite-value result with finite == false. The search brackets outward from
// lambda = 1, clamps to 0.999999 * domain_upper, then refines by golden
// section to relative tolerance 1e-10 (at most 200 iterations) with a final
// parabolic vertex polish for minimizer accuracy near the flat minimum.
InfResult inverse_legendre_dual(const CgfSpec& cgf, double y);

// Same infimum with y = kl; the change-of-measure bound objective.
InfResult minimize_bound_objective(double kl, const CgfSpec& cgf);

}  // namespace gaussbound

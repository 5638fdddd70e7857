#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "gaussbound/bound_result.hpp"
#include "gaussbound/cgf.hpp"
#include "gaussbound/gaussian.hpp"
#include "gaussbound/optim1d.hpp"
#include "gaussbound/problem.hpp"

namespace gaussbound {

// Thrown when a bound family is asked for outside the regime it is derived in
// (e.g. a uniform-weights-only family with non-uniform weights).
struct UnsupportedConfiguration : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// --- Per-index conditional quantities (indices are 0-based) ---

// Law of W given Z_i = z: N(mean + w_i (z - mean), reference_variance(i)).
ScalarGaussian posterior_w_given_zi(const ScalarLocationProblem& p, int i, double z);

// Index-i reference law N(mean, reference_variance(i)); degenerate when the
// reference variance is zero.
ScalarGaussian reference_q(const ScalarLocationProblem& p, int i);

// KL(posterior || reference) = w_i^2 (z - mean)^2 / (2 v_i); +infinity when
// v_i == 0 with w_i > 0, 0 when w_i == 0.
double kl_p_q(const ScalarLocationProblem& p, int i, double z);

// Centered CGF of the loss difference statistic under the reference law:
// 2 lambda^2 (z - mean)^2 v_i.
double cgf_conditional(const ScalarLocationProblem& p, int i, double z, double lambda);

// E_z[kl_p_q] = w_i^2 variance / (2 v_i).
double expected_kl(const ScalarLocationProblem& p, int i);

// Coefficient c_i with E_z[cgf_conditional] = c_i lambda^2: 2 variance * v_i.
double expected_cgf_coeff(const ScalarLocationProblem& p, int i);

// Closed-form minimizer w_i / (2 v_i) of (expected_kl + c_i lambda^2) / lambda.
// Returns 0 when w_i == 0 (no interior minimizer), +infinity when v_i == 0
// with w_i > 0.
double lambda_star(const ScalarLocationProblem& p, int i);

// Exact expected generalization error: 2 variance / n for simplex weights
// (independent of the weights and the noise), 0 for the all-zero rule.
double true_gen_error(const ScalarLocationProblem& p);

// --- Bound families ---
// Every function validates its problem, returns +infinity results (finite ==
// false) instead of throwing when a divergence is infinite, and throws
// UnsupportedConfiguration outside a family's derivation regime.

// Exact per-index change-of-measure bound, optimized per index:
// (1/n) sum_i 2 sqrt(expected_kl_i * c_i) = 2 variance / n for simplex weights.
BoundResult bound_theorem1(const ScalarLocationProblem& p);

// Same value through the expectation-first relaxation; kept as its own entry
// point because reports track the two families separately.
BoundResult bound_cor1_first(const ScalarLocationProblem& p);

// Single shared lambda for the summed objective:
// (1/n) inf_lambda (sum_i expected_kl_i + lambda^2 sum_i c_i) / lambda.
BoundResult bound_cor1_second(const ScalarLocationProblem& p);

// Shared lambda inside the expectation over the sample,
// E_z[(1/n) inf_lambda (sum_i kl_i(z_i) + lambda^2 sum_i 2 (z_i - mean)^2 v_i) / lambda].
// Exact (2 variance / n) for uniform weights; otherwise estimated by a seeded
// deterministic Monte-Carlo average over the squared-Gaussian coordinates.
BoundResult bound_cor2_first(const ScalarLocationProblem& p, std::uint64_t samples = 200000,
                             std::uint64_t seed = 1);

// Mutual-information variant with the quadratic reference CGF. Uniform weights
// only. At noise_variance == 0 equals (2 variance / n) sqrt(ln(n/(n-1)) (n-1)).
// Note: this closed form undershoots the true generalization error by design
// of its constant; it is reported, not certified, as an upper bound.
BoundResult bound_cor3_first(const ScalarLocationProblem& p);

// Mutual-information variant with the exact chi-square-type CGF of the loss
// difference. Uniform weights with noise_variance == 0 only.
BoundResult bound_cor3_second(const ScalarLocationProblem& p);

// Sub-Gaussian proxy bound (1/n) sum_i E_z[2 sqrt(kl_i(z) * proxy(i, z))] with
// the exact conditional proxies 2 (z - mean)^2 v_i; equals 2 variance / n.
BoundResult bound_cor4(const ScalarLocationProblem& p);

// Caller-supplied proxy version, integrated per index with Gauss-Hermite
// quadrature. proxy(i, z) must be non-negative wherever it is evaluated.
BoundResult bound_cor4(const ScalarLocationProblem& p,
                       const std::function<double(int, double)>& proxy, int quad_points = 64);

// Constant proxy convenience overload.
BoundResult bound_cor4(const ScalarLocationProblem& p, double proxy, int quad_points = 64);

// Single-lambda equal-weight variants of the two mutual-information bounds;
// for uniform weights the shared optimum coincides with the per-index one.
BoundResult bound_eq_mib_first(const ScalarLocationProblem& p);
BoundResult bound_eq_mib_second(const ScalarLocationProblem& p);

// Full-sample mutual information baseline sqrt(2 proxy / n * I(W; Z_1..n)).
// Vacuous (+infinity) when the full-sample information diverges.
BoundResult bound_xu_raginsky(const ScalarLocationProblem& p, double proxy);

// Per-index mutual information baseline (1/n) sum_i sqrt(2 proxy * I(W; Z_i)).
BoundResult bound_bu(const ScalarLocationProblem& p, double proxy);

}  // namespace gaussbound

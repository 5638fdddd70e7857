#include "gaussbound/scalar_bounds.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gaussbound/quadrature.hpp"
#include "gaussbound/rng.hpp"
#include "gaussbound/summation.hpp"

namespace gaussbound {

namespace {

void check_index(const ScalarLocationProblem& p, int i) {
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
}

// Per-index quantities without re-validating the problem; ssq = sum_j w_j^2.
double ref_var_raw(const ScalarLocationProblem& p, double ssq, int i) {
  const double wi = p.weights[static_cast<std::size_t>(i)];
  return std::max(0.0, ssq - wi * wi) * p.variance + p.noise_variance;
}

double expected_kl_raw(const ScalarLocationProblem& p, double ssq, int i) {
  const double wi = p.weights[static_cast<std::size_t>(i)];
  if (wi == 0.0) return 0.0;
  const double v = ref_var_raw(p, ssq, i);
  if (v == 0.0) return kInf;
  return wi * wi * p.variance / (2.0 * v);
}

double coeff_raw(const ScalarLocationProblem& p, double ssq, int i) {
  return 2.0 * p.variance * ref_var_raw(p, ssq, i);
}

BoundResult infinite_result(BoundFamily family, std::vector<double> lambdas) {
  BoundResult r;
  r.value = kInf;
  r.family = family;
  r.finite = false;
  r.per_index_lambda = std::move(lambdas);
  return r;
}

// (1/n) sum_i inf_lambda (expected_kl_i + c_i lambda^2) / lambda, each infimum
// taken by the 1-d optimizer. Zero-weight indices contribute exactly zero (the
// infimum in the lambda -> 0 limit), keeping zero-padded weight vectors tight.
BoundResult per_index_quadratic_bound(const ScalarLocationProblem& p, BoundFamily family) {
  validate(p);
  const int n = p.n();
  const double ssq = weight_sum_sq(p);
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  std::vector<double> lambdas(static_cast<std::size_t>(n), 0.0);
  bool infinite = false;
  bool converged = true;
  for (int i = 0; i < n; ++i) {
    const double ekl = expected_kl_raw(p, ssq, i);
    if (ekl == 0.0) continue;
    if (std::isinf(ekl)) {
      infinite = true;
      lambdas[static_cast<std::size_t>(i)] = kInf;
      continue;
    }
    const InfResult res = minimize_bound_objective(ekl, quadratic_cgf(coeff_raw(p, ssq, i)));
    terms[static_cast<std::size_t>(i)] = res.value;
    lambdas[static_cast<std::size_t>(i)] = res.minimizer;
    converged = converged && res.converged;
  }
  if (infinite) return infinite_result(family, std::move(lambdas));
  BoundResult r;
  r.value = pairwise_sum(terms) / n;
  r.family = family;
  r.per_index_lambda = std::move(lambdas);
  r.converged = converged;
  return r;
}

void check_proxy_value(double proxy) {
  if (std::isnan(proxy) || proxy < 0.0)
    throw std::invalid_argument("proxy: must be non-negative");
}

}  // namespace

ScalarGaussian posterior_w_given_zi(const ScalarLocationProblem& p, int i, double z) {
  validate(p);
  check_index(p, i);
  const double wi = p.weights[static_cast<std::size_t>(i)];
  return {p.mean + wi * (z - p.mean), reference_variance(p, i)};
}

ScalarGaussian reference_q(const ScalarLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  return {p.mean, reference_variance(p, i)};
}

double kl_p_q(const ScalarLocationProblem& p, int i, double z) {
  validate(p);
  check_index(p, i);
  const double wi = p.weights[static_cast<std::size_t>(i)];
  if (wi == 0.0) return 0.0;
  const double v = reference_variance(p, i);
  if (v == 0.0) return kInf;
  const double d = z - p.mean;
  return wi * wi * d * d / (2.0 * v);
}

double cgf_conditional(const ScalarLocationProblem& p, int i, double z, double lambda) {
  validate(p);
  check_index(p, i);
  const double d = z - p.mean;
  return 2.0 * lambda * lambda * d * d * reference_variance(p, i);
}

double expected_kl(const ScalarLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  return expected_kl_raw(p, weight_sum_sq(p), i);
}

double expected_cgf_coeff(const ScalarLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  return coeff_raw(p, weight_sum_sq(p), i);
}

double lambda_star(const ScalarLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  const double wi = p.weights[static_cast<std::size_t>(i)];
  if (wi == 0.0) return 0.0;
  const double v = reference_variance(p, i);
  if (v == 0.0) return kInf;
  return wi / (2.0 * v);
}

double true_gen_error(const ScalarLocationProblem& p) {
  validate(p);
  if (weight_sum(p) == 0.0) return 0.0;
  return 2.0 * p.variance / p.n();
}

BoundResult bound_theorem1(const ScalarLocationProblem& p) {
  return per_index_quadratic_bound(p, BoundFamily::Theorem1);
}

BoundResult bound_cor1_first(const ScalarLocationProblem& p) {
  return per_index_quadratic_bound(p, BoundFamily::Cor1First);
}

BoundResult bound_cor1_second(const ScalarLocationProblem& p) {
  validate(p);
  const int n = p.n();
  const double ssq = weight_sum_sq(p);
  std::vector<double> ekls(static_cast<std::size_t>(n));
  std::vector<double> coeffs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ekls[static_cast<std::size_t>(i)] = expected_kl_raw(p, ssq, i);
    coeffs[static_cast<std::size_t>(i)] = coeff_raw(p, ssq, i);
    if (std::isinf(ekls[static_cast<std::size_t>(i)]))
      return infinite_result(BoundFamily::Cor1Second, {kInf});
  }
  const double total_kl = pairwise_sum(ekls);
  const double total_coeff = pairwise_sum(coeffs);
  if (total_kl == 0.0) {  // all-zero weights: data-independent rule, zero bound
    BoundResult r;
    r.family = BoundFamily::Cor1Second;
    r.per_index_lambda = std::vector<double>{0.0};
    return r;
  }
  const InfResult res = minimize_bound_objective(total_kl, quadratic_cgf(total_coeff));
  BoundResult r;
  r.value = res.value / n;
  r.family = BoundFamily::Cor1Second;
  r.per_index_lambda = std::vector<double>{res.minimizer};
  r.converged = res.converged;
  return r;
}

BoundResult bound_cor2_first(const ScalarLocationProblem& p, std::uint64_t samples,
                             std::uint64_t seed) {
  validate(p);
  const int n = p.n();
  const double ssq = weight_sum_sq(p);
  std::vector<double> kl_slope(static_cast<std::size_t>(n));
  std::vector<double> cgf_slope(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double wi = p.weights[static_cast<std::size_t>(i)];
    const double v = ref_var_raw(p, ssq, i);
    if (v == 0.0 && wi > 0.0) return infinite_result(BoundFamily::Cor2First, {});
    kl_slope[static_cast<std::size_t>(i)] = (wi == 0.0) ? 0.0 : wi * wi / (2.0 * v);
    cgf_slope[static_cast<std::size_t>(i)] = 2.0 * v;
  }
  BoundResult r;
  r.family = BoundFamily::Cor2First;
  if (uniform_weights(p)) {
    // Both linear forms under the square root are proportional to the same
    // chi-square sum, so the shared-lambda infimum integrates exactly.
    r.value = true_gen_error(p);
    return r;
  }
  if (samples == 0) throw std::invalid_argument("samples: must be positive");
  // E over z of (2/n) sqrt((sum_i kl_slope_i x_i)(sum_i cgf_slope_i x_i)) with
  // x_i = (z_i - mean)^2; seeded block-wise mean, combined in block order.
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> block_sums(blocks, 0.0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::mt19937_64 eng(rng::derive(seed, b));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::uint64_t count = std::min(kBlock, samples - b * kBlock);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double y = 0.0, c = 0.0;
      for (int i = 0; i < n; ++i) {
        const double u = normal(eng);
        const double x = p.variance * u * u;
        y += kl_slope[static_cast<std::size_t>(i)] * x;
        c += cgf_slope[static_cast<std::size_t>(i)] * x;
      }
      acc += 2.0 * std::sqrt(y * c) / n;
    }
    block_sums[b] = acc;
  }
  r.value = pairwise_sum(block_sums) / static_cast<double>(samples);
  return r;
}

BoundResult bound_cor3_first(const ScalarLocationProblem& p) {
  validate(p);
  if (!uniform_weights(p))
    throw UnsupportedConfiguration("bound_cor3_first: requires uniform weights");
  const int n = p.n();
  const double info = mi_weighted_average_scalar(p, 0);
  if (std::isinf(info))
    return infinite_result(BoundFamily::Cor3First,
                           std::vector<double>(static_cast<std::size_t>(n), kInf));
  const double c = 2.0 * p.variance * reference_variance(p, 0);
  const InfResult res = minimize_bound_objective(info, quadratic_cgf(c));
  BoundResult r;
  r.value = res.value;  // identical across indices, so the average is one term
  r.family = BoundFamily::Cor3First;
  r.per_index_lambda = std::vector<double>(static_cast<std::size_t>(n), res.minimizer);
  r.converged = res.converged;
  return r;
}

BoundResult bound_cor3_second(const ScalarLocationProblem& p) {
  validate(p);
  if (!uniform_weights(p))
    throw UnsupportedConfiguration("bound_cor3_second: requires uniform weights");
  if (p.noise_variance != 0.0)
    throw UnsupportedConfiguration("bound_cor3_second: requires zero noise_variance");
  const int n = p.n();
  const double info = mi_weighted_average_scalar(p, 0);
  if (std::isinf(info))
    return infinite_result(BoundFamily::Cor3Second,
                           std::vector<double>(static_cast<std::size_t>(n), kInf));
  const double s2 = p.variance;
  // Exact centered CGF of the loss difference for the uniform average:
  // lambda s2 - ln(1 + 2 lambda s2 - 4 lambda^2 s2^2 / n) / 2, finite while the
  // log argument stays positive.
  CgfSpec cgf;
  cgf.domain_upper = n * (1.0 + std::sqrt(1.0 + 4.0 / n)) / (4.0 * s2);
  cgf.evaluate = [s2, n](double lambda) {
    const double arg = 1.0 + 2.0 * lambda * s2 - 4.0 * lambda * lambda * s2 * s2 / n;
    if (arg <= 0.0) return kInf;
    return lambda * s2 - 0.5 * std::log(arg);
  };
  const InfResult res = minimize_bound_objective(info, cgf);
  BoundResult r;
  r.value = res.value;
  r.family = BoundFamily::Cor3Second;
  r.per_index_lambda = std::vector<double>(static_cast<std::size_t>(n), res.minimizer);
  r.converged = res.converged;
  return r;
}

BoundResult bound_cor4(const ScalarLocationProblem& p) {
  validate(p);
  const int n = p.n();
  const double ssq = weight_sum_sq(p);
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double wi = p.weights[static_cast<std::size_t>(i)];
    if (wi == 0.0) continue;
    if (ref_var_raw(p, ssq, i) == 0.0) return infinite_result(BoundFamily::Cor4, {});
    // E_z[2 sqrt(kl(z) * proxy(z))] with proxy(z) = 2 (z - mean)^2 v_i:
    // the reference variance cancels and the integrand is 2 w_i (z - mean)^2.
    terms[static_cast<std::size_t>(i)] = 2.0 * wi * p.variance;
  }
  BoundResult r;
  r.value = pairwise_sum(terms) / n;
  r.family = BoundFamily::Cor4;
  return r;
}

BoundResult bound_cor4(const ScalarLocationProblem& p,
                       const std::function<double(int, double)>& proxy, int quad_points) {
  validate(p);
  if (!proxy) throw std::invalid_argument("proxy: must be callable");
  if (quad_points < 1) throw std::invalid_argument("quad_points: must be >= 1");
  const int n = p.n();
  const double ssq = weight_sum_sq(p);
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double wi = p.weights[static_cast<std::size_t>(i)];
    if (wi == 0.0) continue;
    const double v = ref_var_raw(p, ssq, i);
    if (v == 0.0) return infinite_result(BoundFamily::Cor4, {});
    const double kl_slope = wi * wi / (2.0 * v);
    const double term = expect_normal(
        p.mean, p.variance,
        [&](double z) {
          const double s = proxy(i, z);
          if (std::isnan(s) || s < 0.0)
            throw std::invalid_argument("proxy: must be non-negative");
          const double d = z - p.mean;
          return 2.0 * std::sqrt(kl_slope * d * d * s);
        },
        quad_points);
    terms[static_cast<std::size_t>(i)] = term;
  }
  BoundResult r;
  r.value = pairwise_sum(terms) / n;
  r.family = BoundFamily::Cor4;
  return r;
}

BoundResult bound_cor4(const ScalarLocationProblem& p, double proxy, int quad_points) {
  check_proxy_value(proxy);
  return bound_cor4(
      p, [proxy](int, double) { return proxy; }, quad_points);
}

BoundResult bound_eq_mib_first(const ScalarLocationProblem& p) {
  validate(p);
  if (!uniform_weights(p))
    throw UnsupportedConfiguration("bound_eq_mib_first: requires uniform weights");
  // With identical per-index terms the shared-lambda optimum coincides with
  // the per-index one; only the family label differs.
  BoundResult r = bound_cor3_first(p);
  r.family = BoundFamily::EqMibFirst;
  return r;
}

BoundResult bound_eq_mib_second(const ScalarLocationProblem& p) {
  validate(p);
  if (!uniform_weights(p))
    throw UnsupportedConfiguration("bound_eq_mib_second: requires uniform weights");
  BoundResult r = bound_cor3_second(p);
  r.family = BoundFamily::EqMibSecond;
  return r;
}

BoundResult bound_xu_raginsky(const ScalarLocationProblem& p, double proxy) {
  validate(p);
  check_proxy_value(proxy);
  BoundResult r;
  r.family = BoundFamily::XuRaginsky;
  if (proxy == 0.0) return r;
  const double info = mi_full_sample_scalar(p);
  if (std::isinf(info)) return infinite_result(BoundFamily::XuRaginsky, {});
  r.value = std::sqrt(2.0 * proxy / p.n() * info);
  return r;
}

BoundResult bound_bu(const ScalarLocationProblem& p, double proxy) {
  validate(p);
  check_proxy_value(proxy);
  const int n = p.n();
  BoundResult r;
  r.family = BoundFamily::BuEtAl;
  if (proxy == 0.0) return r;
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double info = mi_weighted_average_scalar(p, i);
    if (std::isinf(info)) return infinite_result(BoundFamily::BuEtAl, {});
    terms[static_cast<std::size_t>(i)] = std::sqrt(2.0 * proxy * info);
  }
  r.value = pairwise_sum(terms) / n;
  return r;
}

}  // namespace gaussbound

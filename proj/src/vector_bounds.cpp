#include "gaussbound/vector_bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gaussbound/cgf.hpp"
#include "gaussbound/gaussian.hpp"
#include "gaussbound/optim1d.hpp"
#include "gaussbound/summation.hpp"

namespace gaussbound {

namespace {

void check_index(const VectorLocationProblem& p, int i) {
  if (i < 0 || i >= p.n()) throw std::out_of_range("i: index out of range");
}

// tr(M^{-1} Sigma) via LLT solve; +infinity when M is not positive definite.
double trace_solve(const Eigen::MatrixXd& m, const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return kInf;
  return llt.solve(sigma).trace();
}

double expected_kl_vec_raw(const VectorLocationProblem& p, int i) {
  const double wi = p.weights[static_cast<std::size_t>(i)];
  if (wi == 0.0) return 0.0;
  const double t = trace_solve(reference_covariance(p, i), p.covariance);
  if (std::isinf(t)) return kInf;
  return 0.5 * wi * wi * t;
}

double expected_cgf_coeff_vec_raw(const VectorLocationProblem& p, int i) {
  const Eigen::MatrixXd m = reference_covariance(p, i);
  return 2.0 * (p.loss_metric * m * p.loss_metric * p.covariance).trace();
}

BoundResult infinite_result(BoundFamily family, std::vector<double> lambdas) {
  BoundResult r;
  r.value = kInf;
  r.family = family;
  r.finite = false;
  r.per_index_lambda = std::move(lambdas);
  return r;
}

}  // namespace

EigenDecomposition eigendecompose(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix: must be square");
  if (m.rows() < 1) throw std::invalid_argument("matrix: must be non-empty");
  if (!m.allFinite()) throw std::invalid_argument("matrix: must be finite");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix: must be symmetric within 1e-12 relative tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  const int d = static_cast<int>(m.rows());
  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  // Eigen returns ascending order; reverse to descending and fix signs so the
  // first component with |x| > 1e-12 * max|column| is positive.
  for (int j = 0; j < d; ++j) {
    const int src = d - 1 - j;
    out.eigenvalues[j] = es.eigenvalues()[src];
    Eigen::VectorXd col = es.eigenvectors().col(src);
    const double cmax = col.cwiseAbs().maxCoeff();
    for (int k = 0; k < d; ++k) {
      if (std::abs(col[k]) > 1e-12 * cmax) {
        if (col[k] < 0.0) col = -col;
        break;
      }
    }
    out.eigenvectors.col(j) = col;
  }
  return out;
}

double expected_kl_vec(const VectorLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  return expected_kl_vec_raw(p, i);
}

double expected_cgf_coeff_vec(const VectorLocationProblem& p, int i) {
  validate(p);
  check_index(p, i);
  return expected_cgf_coeff_vec_raw(p, i);
}

BoundResult bound_direct_vec(const VectorLocationProblem& p) {
  validate(p);
  const int n = p.n();
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  std::vector<double> lambdas(static_cast<std::size_t>(n), 0.0);
  bool infinite = false;
  bool converged = true;
  for (int i = 0; i < n; ++i) {
    const double ekl = expected_kl_vec_raw(p, i);
    if (ekl == 0.0) continue;
    if (std::isinf(ekl)) {
      infinite = true;
      lambdas[static_cast<std::size_t>(i)] = kInf;
      continue;
    }
    const InfResult res =
        minimize_bound_objective(ekl, quadratic_cgf(expected_cgf_coeff_vec_raw(p, i)));
    terms[static_cast<std::size_t>(i)] = res.value;
    lambdas[static_cast<std::size_t>(i)] = res.minimizer;
    converged = converged && res.converged;
  }
  if (infinite) return infinite_result(BoundFamily::DirectVec, std::move(lambdas));
  BoundResult r;
  r.value = pairwise_sum(terms) / n;
  r.family = BoundFamily::DirectVec;
  r.per_index_lambda = std::move(lambdas);
  r.converged = converged;
  return r;
}

BoundResult bound_decomposed_vec(const VectorLocationProblem& p) {
  validate(p);
  const int n = p.n();
  const int d = p.d();
  const EigenDecomposition eig = eigendecompose(p.loss_metric);
  // s_j = u_j^T Sigma u_j; diagonal of the covariance in the loss eigenbasis.
  const Eigen::MatrixXd rotated =
      eig.eigenvectors.transpose() * p.covariance * eig.eigenvectors;
  const double ssq = weight_sum_sq(p);
  std::vector<double> terms(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), 0.0);
  std::vector<double> lambdas(terms.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const double wi = p.weights[static_cast<std::size_t>(i)];
    if (wi == 0.0) continue;
    const double rest = std::max(0.0, ssq - wi * wi);
    for (int j = 0; j < d; ++j) {
      const double s = rotated(j, j);
      const double t = rest * s + p.noise_variance;
      const std::size_t k =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j);
      if (t == 0.0) {
        // kl_ij = w_i^2 s / (2 t) diverges for s > 0 (Sigma is SPD, so s > 0).
        return infinite_result(BoundFamily::DecomposedVec, std::move(lambdas));
      }
      // Analytic quadratic-CGF optimum 2 sqrt(kl_ij * c_ij) with
      // kl_ij = w_i^2 s / (2 t) and c_ij = 2 l_j^2 t s.
      terms[k] = 2.0 * wi * eig.eigenvalues[j] * s;
      lambdas[k] = wi / (2.0 * t * eig.eigenvalues[j]);
    }
  }
  BoundResult r;
  r.value = pairwise_sum(terms) / n;
  r.family = BoundFamily::DecomposedVec;
  r.per_index_lambda = std::move(lambdas);
  return r;
}

double true_gen_error_vec(const VectorLocationProblem& p) {
  validate(p);
  double wsum = 0.0;
  for (double w : p.weights) wsum += w;
  if (wsum == 0.0) return 0.0;
  return 2.0 * (p.loss_metric * p.covariance).trace() / p.n();
}

}  // namespace gaussbound

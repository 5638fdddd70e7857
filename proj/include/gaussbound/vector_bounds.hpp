#pragma once

#include <Eigen/Dense>

#include "gaussbound/bound_result.hpp"
#include "gaussbound/problem.hpp"

namespace gaussbound {

// Symmetric eigendecomposition with eigenvalues sorted descending and each
// eigenvector's sign fixed so its first non-negligible component is positive.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns, same order as eigenvalues
};

// Requires a symmetric input (within 1e-12 relative to the largest entry).
EigenDecomposition eigendecompose(const Eigen::MatrixXd& m);

// E[KL] per index: w_i^2 / 2 * tr(M_i^{-1} Sigma) with M_i the index-i
// reference covariance, evaluated with an SPD solve (never an explicit
// inverse). Returns 0 for zero-weight indices and +infinity when M_i is
// singular with w_i > 0.
double expected_kl_vec(const VectorLocationProblem& p, int i);

// Coefficient c_i with E[CGF] = c_i lambda^2: 2 tr(A M_i A Sigma).
double expected_cgf_coeff_vec(const VectorLocationProblem& p, int i);

// (1/n) sum_i inf_lambda (expected_kl_vec_i + c_i lambda^2) / lambda, each
// infimum taken by the 1-d optimizer.
BoundResult bound_direct_vec(const VectorLocationProblem& p);

// Eigenbasis split of the loss metric: with A = U diag(l) U^T,
// s_j = u_j^T Sigma u_j and t_ij = (sum w^2 - w_i^2) s_j + noise_variance, the
// per-(i, j) optimized term is 2 w_i l_j s_j and the total is
// 2 tr(A Sigma) / n for simplex weights, which matches the true error exactly.
// per_index_lambda holds the (i, j) minimizers flattened index-major.
BoundResult bound_decomposed_vec(const VectorLocationProblem& p);

// Exact expected generalization error 2 tr(A Sigma) / n (0 for the all-zero
// weight rule).
double true_gen_error_vec(const VectorLocationProblem& p);

}  // namespace gaussbound

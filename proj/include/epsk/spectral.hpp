#ifndef EPSK_SPECTRAL_HPP
#define EPSK_SPECTRAL_HPP

#include <Eigen/Dense>

#include "epsk/phi.hpp"

namespace epsk {

using Matrix = Eigen::MatrixXd;

// Thin SVD A = U diag(sigma) V^T with sigma nonincreasing and nonnegative
// (tiny negatives clamped to 0). Matrices with more rows than columns are
// handled by factoring the transpose, matching the n1 <= n2 convention.
struct SvdTriple {
  Matrix U;               // rows x k
  Eigen::VectorXd sigma;  // k = min(rows, cols), nonincreasing
  Matrix V;               // cols x k
};

SvdTriple svd(const Matrix& X);

// sum_i psi*(rho sigma_i(X)); convex and orthogonally invariant.
double theta_rho(const Matrix& X, const PhiSpec& phi, double rho);

// rho ||X||_* - theta_rho(X); in [0, min(n1,n2)], equals rank(X) once every
// nonzero singular value clears phi'_-(1)/rho.
double rank_surrogate(const Matrix& X, const PhiSpec& phi, double rho);

// Zeroes singular values with rho sigma_i <= phi'_-(1).
Matrix truncate_matrix(const Matrix& X, const PhiSpec& phi, double rho);

// Entrywise truncation: |Y_ij| if rho |Y_ij| > phi'_-(1), else 0. The
// magnitude form follows the source rule verbatim; keep_sign restores the
// entry signs (test-only variant).
Matrix truncate_entries(const Matrix& Y, const PhiSpec& phi, double rho,
                        bool keep_sign = false);

// Exact-penalty threshold for the rank-regularized problem:
// phi'_-(1) (1 - t_star) nu L_f / (1 - t_zero).
double threshold_rank_regularized(const PhiSpec& phi, double nu, double L_f);

// Threshold for the joint rank + zero-norm regularized problem:
// phi'_-(1) (1 - t_star) nu L_f / ((1 - t_zero) min(1, lambda)).
double threshold_joint_regularized(const PhiSpec& phi, double nu, double L_f,
                                   double lambda);

// rho ||X||_* - sum psi*(rho sigma_i(X))
//   + rho lambda ||Y||_1 - lambda sum psi*(rho |Y_ij|).
double joint_surrogate(const Matrix& X, const Matrix& Y, const PhiSpec& phi,
                       double rho, double lambda);

// Simultaneous rank-and-sparsity surrogate. The printed form carries
// coefficient rho on ||X||_1 with lambda only on the entrywise psi* sum;
// lambda_symmetric switches to the rho*lambda variant. Both are exposed
// because the two displays in the source disagree.
double simultaneous_surrogate(const Matrix& X, const PhiSpec& phi, double rho,
                              double lambda, bool lambda_symmetric = false);

// argmin_Z 0.5 ||Z - X||_F^2 + tau ||Z||_* s.t. ||Z|| <= gamma1:
// per singular value, sigma -> min(max(sigma - tau, 0), gamma1).
Matrix prox_nuclear_spectral_box(const Matrix& X, double tau, double gamma1);

// Entrywise argmin 0.5 (z - y)^2 + w |z| on [-gamma2, gamma2]:
// soft-threshold then clip.
Matrix prox_weighted_l1_box(const Matrix& Y, const Matrix& weights,
                            double gamma2);

// W = U diag(w) V^T with w_i = psi_star_subgrad(rho sigma_i(X)); an element
// of the subdifferential of X -> sum psi*(rho sigma_i(X)) scaled by 1/rho,
// satisfying sum phi(sigma_i(W)) - rho <X, W> = -theta_rho(X).
Matrix subgrad_spectral(const Matrix& X, const PhiSpec& phi, double rho);

// S_ij = psi_star_subgrad(rho |Y_ij|); entries in [0, 1].
Matrix subgrad_entrywise(const Matrix& Y, const PhiSpec& phi, double rho);

// Count of sigma_i >= rel_tol * sigma_1.
int numerical_rank(const Matrix& X, double rel_tol = 1e-6);

}  // namespace epsk

#endif  // EPSK_SPECTRAL_HPP

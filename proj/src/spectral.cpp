#include "epsk/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "epsk/errors.hpp"

namespace epsk {

namespace {

// dgesdd on a column-major copy; economy-size factors.
SvdTriple svd_tall_or_square(const Matrix& X) {
  const lapack_int m = static_cast<lapack_int>(X.rows());
  const lapack_int n = static_cast<lapack_int>(X.cols());
  const lapack_int k = std::min(m, n);
  Matrix A = X;  // dgesdd destroys its input
  SvdTriple out;
  out.U.resize(m, k);
  out.sigma.resize(k);
  Matrix Vt(k, n);
  const lapack_int info = LAPACKE_dgesdd(
      LAPACK_COL_MAJOR, 'S', m, n, A.data(), m, out.sigma.data(),
      out.U.data(), m, Vt.data(), k);
  if (info != 0) throw SvdFailure("dgesdd failed, info=" + std::to_string(info));
  out.V = Vt.transpose();
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i)
    out.sigma[i] = std::max(out.sigma[i], 0.0);
  return out;
}

}  // namespace

SvdTriple svd(const Matrix& X) {
  if (X.rows() <= X.cols()) return svd_tall_or_square(X);
  SvdTriple t = svd_tall_or_square(X.transpose());
  std::swap(t.U, t.V);
  return t;
}

double theta_rho(const Matrix& X, const PhiSpec& phi, double rho) {
  if (!(rho > 0.0)) throw DomainError("theta_rho: rho must be > 0");
  const Eigen::VectorXd s = svd(X).sigma;
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    total += psi_star(phi, rho * s[i]);
  return total;
}

double rank_surrogate(const Matrix& X, const PhiSpec& phi, double rho) {
  if (!(rho > 0.0)) throw DomainError("rank_surrogate: rho must be > 0");
  const Eigen::VectorXd s = svd(X).sigma;
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double u = rho * s[i];
    total += u - psi_star(phi, u);
  }
  return total;
}

Matrix truncate_matrix(const Matrix& X, const PhiSpec& phi, double rho) {
  if (!(rho > 0.0)) throw DomainError("truncate_matrix: rho must be > 0");
  SvdTriple t = svd(X);
  for (Eigen::Index i = 0; i < t.sigma.size(); ++i)
    if (rho * t.sigma[i] <= phi.d_minus_1) t.sigma[i] = 0.0;
  return t.U * t.sigma.asDiagonal() * t.V.transpose();
}

Matrix truncate_entries(const Matrix& Y, const PhiSpec& phi, double rho,
                        bool keep_sign) {
  if (!(rho > 0.0)) throw DomainError("truncate_entries: rho must be > 0");
  Matrix out(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const double a = std::abs(Y(i, j));
      out(i, j) = rho * a > phi.d_minus_1 ? (keep_sign ? Y(i, j) : a) : 0.0;
    }
  return out;
}

double threshold_rank_regularized(const PhiSpec& phi, double nu, double L_f) {
  if (!(nu > 0.0) || !(L_f > 0.0))
    throw DomainError("threshold: nu and L_f must be > 0");
  return phi.d_minus_1 * (1.0 - phi.t_star) * nu * L_f / (1.0 - phi.t_zero);
}

double threshold_joint_regularized(const PhiSpec& phi, double nu, double L_f,
                                   double lambda) {
  if (!(lambda > 0.0)) throw DomainError("threshold: lambda must be > 0");
  return threshold_rank_regularized(phi, nu, L_f) / std::min(1.0, lambda);
}

double joint_surrogate(const Matrix& X, const Matrix& Y, const PhiSpec& phi,
                       double rho, double lambda) {
  if (!(rho > 0.0) || !(lambda > 0.0))
    throw DomainError("joint_surrogate: rho and lambda must be > 0");
  double entry_term = 0.0;
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const double u = rho * std::abs(Y(i, j));
      entry_term += u - psi_star(phi, u);
    }
  return rank_surrogate(X, phi, rho) + lambda * entry_term;
}

double simultaneous_surrogate(const Matrix& X, const PhiSpec& phi, double rho,
                              double lambda, bool lambda_symmetric) {
  if (!(rho > 0.0) || !(lambda > 0.0))
    throw DomainError("simultaneous_surrogate: rho and lambda must be > 0");
  const double l1_coeff = lambda_symmetric ? rho * lambda : rho;
  double entry_term = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double a = std::abs(X(i, j));
      entry_term += l1_coeff * a - lambda * psi_star(phi, rho * a);
    }
  return rank_surrogate(X, phi, rho) + entry_term;
}

namespace {

// Fast path for the singular-value transform sigma -> min(max(sigma-tau,0),
// gamma1) on larger matrices: a symmetric divide-and-conquer eig of the Gram
// matrix gives the right singular vectors, and only the surviving directions
// (sigma > tau) are reconstructed. Exact in exact arithmetic: with X =
// U diag(sigma) V^T, X V diag(w/sigma) V^T = U diag(w) V^T.
Matrix prox_nuclear_gram(const Matrix& X, double tau, double gamma1) {
  const bool tall = X.rows() >= X.cols();
  const Matrix G = tall ? Matrix(X.transpose() * X) : Matrix(X * X.transpose());
  const lapack_int n = static_cast<lapack_int>(G.rows());
  Matrix V = G;  // dsyevd overwrites with eigenvectors
  Eigen::VectorXd eig(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, V.data(), n, eig.data());
  if (info != 0) throw SvdFailure("dsyevd failed, info=" + std::to_string(info));

  // Eigenvalues come back ascending; collect directions with sigma > tau.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (std::sqrt(std::max(eig[i], 0.0)) > tau)
      keep.push_back(i);
    else
      break;
  }
  if (keep.empty()) return Matrix::Zero(X.rows(), X.cols());

  const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  Matrix Vk(n, k);
  Eigen::VectorXd ratio(k);  // w / sigma, in (0, 1]
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index i = keep[static_cast<size_t>(j)];
    const double s = std::sqrt(std::max(eig[i], 0.0));
    const double w = std::min(std::max(s - tau, 0.0), gamma1);
    Vk.col(j) = V.col(i);
    ratio[j] = w / s;
  }
  if (tall) return (X * Vk) * ratio.asDiagonal() * Vk.transpose();
  return Vk * ratio.asDiagonal() * (Vk.transpose() * X);
}

}  // namespace

Matrix prox_nuclear_spectral_box(const Matrix& X, double tau, double gamma1) {
  if (tau < 0.0) throw DomainError("prox_nuclear_spectral_box: tau >= 0");
  if (!(gamma1 > 0.0)) throw DomainError("prox_nuclear_spectral_box: gamma1 > 0");
  // The Gram route squares the condition number; restrict it to sizes where
  // it pays off and thresholds far above the squared-precision noise floor.
  const Eigen::Index small_dim = std::min(X.rows(), X.cols());
  if (small_dim >= 64 && tau > 1e-6 * (1.0 + X.norm()))
    return prox_nuclear_gram(X, tau, gamma1);
  SvdTriple t = svd(X);
  for (Eigen::Index i = 0; i < t.sigma.size(); ++i)
    t.sigma[i] = std::min(std::max(t.sigma[i] - tau, 0.0), gamma1);
  return t.U * t.sigma.asDiagonal() * t.V.transpose();
}

Matrix prox_weighted_l1_box(const Matrix& Y, const Matrix& weights,
                            double gamma2) {
  if (Y.rows() != weights.rows() || Y.cols() != weights.cols())
    throw DimensionMismatch("prox_weighted_l1_box: shape mismatch");
  if (!(gamma2 > 0.0)) throw DomainError("prox_weighted_l1_box: gamma2 > 0");
  Matrix out(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const double w = weights(i, j);
      if (w < 0.0) throw DomainError("prox_weighted_l1_box: negative weight");
      const double y = Y(i, j);
      const double soft = std::copysign(std::max(std::abs(y) - w, 0.0), y);
      out(i, j) = std::clamp(soft, -gamma2, gamma2);
    }
  return out;
}

Matrix subgrad_spectral(const Matrix& X, const PhiSpec& phi, double rho) {
  if (!(rho > 0.0)) throw DomainError("subgrad_spectral: rho must be > 0");
  SvdTriple t = svd(X);
  for (Eigen::Index i = 0; i < t.sigma.size(); ++i)
    t.sigma[i] = psi_star_subgrad(phi, rho * t.sigma[i]);
  return t.U * t.sigma.asDiagonal() * t.V.transpose();
}

Matrix subgrad_entrywise(const Matrix& Y, const PhiSpec& phi, double rho) {
  if (!(rho > 0.0)) throw DomainError("subgrad_entrywise: rho must be > 0");
  Matrix out(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
      out(i, j) = psi_star_subgrad(phi, rho * std::abs(Y(i, j)));
  return out;
}

int numerical_rank(const Matrix& X, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("numerical_rank: rel_tol > 0");
  const Eigen::VectorXd s = svd(X).sigma;
  if (s.size() == 0 || s[0] <= 0.0) return 0;
  const double cut = rel_tol * s[0];
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] >= cut) ++r;
  return r;
}

}  // namespace epsk

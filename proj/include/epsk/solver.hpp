#ifndef EPSK_SOLVER_HPP
#define EPSK_SOLVER_HPP

#include <string>
#include <vector>

#include "epsk/spectral.hpp"

namespace epsk {

// Multi-stage convex relaxation for the low-rank plus sparse decomposition
//   min nu/2 ||X + Y - M||_F^2 + rank(X) + lambda ||Y||_0
//   s.t. ||X|| <= gamma1, ||Y||_inf <= gamma2.
// Each stage solves a convex subproblem by an accelerated proximal gradient
// method, then refreshes the spectral / entrywise subgradient weights.

struct DecompositionInstance {
  Matrix M;
  double gamma1 = 1.0;  // spectral-ball radius
  double gamma2 = 1.0;  // entrywise-box radius
  double lambda = 1.0;  // zero-norm weight
  double nu = 1.0;      // loss weight; only rescales reported objectives

  void validate() const;
};

struct Schedule {
  int n = 0;                   // dimension driving the mu_k scaling
  double lambda1 = 1.0;
  double mu1 = 0.0;            // 0.5 lambda1 / sqrt(n)
  double lambda_mult = 20.0;   // min(max(20, 0.45 n / 8), 100), applies k >= 2
  double tau2 = 0.8;
  double tau_rest = 0.35;      // k >= 3
  double rho_scale = 10.0;     // rho_1 = 10 / ||X^1||
  double rho_tilde_scale = 10.0 / 9.0;  // rho~_1 = 10 / (9 ||Y^1||_inf)
  double rho_tilde_growth = 10.0 / 9.0;
  // Applied (repeatedly) to lambda_k, mu_k, and the stop threshold when the
  // first stage collapses an iterate to zero; see gep_mscra. Two decades per
  // retry leave the rescued scale comfortably non-marginal.
  double stage1_rescale_factor = 0.01;
  double stop_tol = 0.02;      // coefficient on ||M||_F in the stopping rule
  int rank_stable_window = 3;
  double rank_rel_tol = 1e-6;
  int max_outer = 50;

  double lambda_at(int k) const { return k <= 1 ? lambda1 : lambda_mult * lambda1; }
  double mu_at(int k) const;
};

Schedule default_schedule(int n);

struct SolverOptions {
  double inner_tol = 1e-6;
  int inner_max = 500;
};

struct ApgResult {
  Matrix X;
  Matrix Y;
  int iters = 0;
  bool converged = false;
  double fp_residual = 0.0;  // prox-gradient fixed-point residual at exit
  double objective = 0.0;
};

// One convex subproblem:
//   min 0.5 ||X + Y - M||_F^2 + lambda_k (||X||_* - <W_prev, X>)
//       + mu_k <E - S_prev, |Y|>   s.t. ||X|| <= gamma1, ||Y||_inf <= gamma2.
// Requires ||W_prev|| <= 1 and S_prev entries in [0, 1]. Optional warm start.
ApgResult apg_subproblem(const Matrix& M, const Matrix& W_prev,
                         const Matrix& S_prev, double lambda_k, double mu_k,
                         double gamma1, double gamma2,
                         const SolverOptions& opts,
                         const Matrix* X_start = nullptr,
                         const Matrix* Y_start = nullptr);

struct SolverReport {
  Matrix X_hat;
  Matrix Y_hat;
  Matrix W_final;  // last spectral subgradient (for certificate checks)
  Matrix S_final;  // last entrywise subgradient
  int outer_iters = 0;
  int inner_iters_total = 0;
  int final_rank = 0;
  int final_sparsity = 0;
  std::vector<double> residual_history;  // ||X^k + Y^k - M||_F^2 per stage
  std::vector<int> rank_history;
  double wall_time_seconds = 0.0;
  bool converged = false;
  bool degenerate_rho = false;  // ||X^1|| or ||Y^1||_inf was ~0
  double rho1 = 0.0;
  double rho_tilde_final = 0.0;
  double final_fp_residual = 0.0;

  std::string to_json() const;
};

SolverReport gep_mscra(const DecompositionInstance& instance,
                       const PhiSpec& phi, const Schedule& schedule,
                       const SolverOptions& opts = {});

// Sparsity counterpart of numerical_rank: entries with |Y_ij| > rel_tol * max|Y|.
int numerical_sparsity(const Matrix& Y, double rel_tol = 1e-6);

}  // namespace epsk

#endif  // EPSK_SOLVER_HPP

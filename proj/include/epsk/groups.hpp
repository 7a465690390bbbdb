#ifndef EPSK_GROUPS_HPP
#define EPSK_GROUPS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "epsk/phi.hpp"

namespace epsk {

// Group zero-norm machinery: group norms, the surrogate penalty built from
// psi*, truncation, and the exact-penalty thresholds.

// Partition of {0,...,n-1} into disjoint nonempty groups, with the p-norm
// (p in {1, 2, inf}) used inside each group.
struct GroupPartition {
  int n = 0;
  std::vector<std::vector<int>> groups;
  double p = 2.0;  // 1, 2, or +infinity

  // Validated constructor: groups must be disjoint, nonempty, and cover
  // {0,...,n-1} exactly.
  static GroupPartition make(int n, std::vector<std::vector<int>> groups,
                             double p);
  static GroupPartition singletons(int n, double p = 2.0);
  int group_count() const { return static_cast<int>(groups.size()); }
};

struct GroupSurrogateParams {
  PhiSpec phi;
  double rho = 1.0;  // penalty parameter
  double nu = 1.0;   // regularization weight (regularized variant)
};

// (||x_{J_1}||_p, ..., ||x_{J_m}||_p).
Eigen::VectorXd group_norms(const Eigen::VectorXd& x,
                            const GroupPartition& partition);

// Number of groups with ||x_{J_i}||_p > tol.
int group_zero_norm(const Eigen::VectorXd& x, const GroupPartition& partition,
                    double tol = 0.0);

// sum_i [ rho ||x_{J_i}||_p - psi*(rho ||x_{J_i}||_p) ]; lies in [0, m] and
// equals the group zero-norm once every active group clears phi'_-(1)/rho.
double surrogate_penalty_term(const Eigen::VectorXd& x,
                              const GroupPartition& partition,
                              const PhiSpec& phi, double rho);

// Zeroes every group with rho ||x_{J_i}||_p <= phi'_-(1).
Eigen::VectorXd truncate_vector(const Eigen::VectorXd& x,
                                const GroupPartition& partition,
                                const PhiSpec& phi, double rho);

// Exact-penalty threshold for the constrained (min-form) problem:
// phi'_-(1) / alpha.
double threshold_min_variant(const PhiSpec& phi, double alpha);

// Exact-penalty threshold for the regularized problem:
// phi'_-(1) (1 - t_star) beta nu L_f / (1 - t_zero), with
// beta = max(1, max_i |J_i|^{(p-2)/(2p)}).
double threshold_regularized_variant(const PhiSpec& phi, double nu,
                                     double L_f,
                                     const GroupPartition& partition);

// nu f(x) + surrogate_penalty_term(x); f is evaluated by the caller.
double regularized_surrogate_objective(const Eigen::VectorXd& x,
                                       double f_value,
                                       const GroupSurrogateParams& params,
                                       const GroupPartition& partition);

// JSON round-trip: {"n": int, "groups": [[int]], "p": 1|2|"inf"}.
std::string partition_to_json(const GroupPartition& partition);
GroupPartition partition_from_json(const std::string& json_text);

}  // namespace epsk

#endif  // EPSK_GROUPS_HPP

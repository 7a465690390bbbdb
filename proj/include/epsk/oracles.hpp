#ifndef EPSK_ORACLES_HPP
#define EPSK_ORACLES_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "epsk/groups.hpp"
#include "epsk/phi.hpp"

namespace epsk {

// Brute-force reference implementations. These exist to validate the closed
// forms and the desk-scale global-minimizer equivalences; none of them are
// used on any production code path.

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int points = 1001;
};

// sup_{t in [0,1]} { s t - phi(t) } by ternary search (the objective is
// concave in t, so unimodal search is exact up to tol).
double conjugate_by_search(const PhiSpec& phi, double s, double tol = 1e-12);

// Grid minimum of phi(t) + rho_omega (1 - t) over [0,1].
double scalar_min_by_grid(const PhiSpec& phi, double rho_omega,
                          const GridSpec& grid);

// Gridded argmin over x in [-box, box] of 0.5 (x-y)^2 + weight |x|.
double prox_by_grid(double weight, double y, double box, const GridSpec& grid);

enum class SupportLoss { HalfSquared, L2 };

struct SupportMinResult {
  std::vector<int> support;  // active group indices
  int count = 0;
};

// min ||G(x)||_0 s.t. f(x) <= delta by enumerating all 2^m group supports
// and solving a ridge-regularized least-squares problem on each (m <= 12).
SupportMinResult brute_force_support_min(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         double delta,
                                         const GroupPartition& partition,
                                         SupportLoss loss = SupportLoss::HalfSquared);

struct SurrogateMinResult {
  Eigen::VectorXd argmin;
  double value = 0.0;
};

// Exhaustive grid minimum of an arbitrary objective over a box (dim <= 3).
SurrogateMinResult brute_force_surrogate_min(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const GridSpec& grid_per_coordinate, int dim);

}  // namespace epsk

#endif  // EPSK_ORACLES_HPP

#include "epsk/oracles.hpp"

#include <cmath>

#include "epsk/errors.hpp"

namespace epsk {

double conjugate_by_search(const PhiSpec& phi, double s, double tol) {
  if (!(tol > 0.0)) throw InvalidParameter("conjugate_by_search: tol > 0");
  const auto g = [&](double t) { return s * t - phi_eval(phi, t); };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2))
      lo = m1;
    else
      hi = m2;
  }
  const double mid = 0.5 * (lo + hi);
  return std::max({g(lo), g(mid), g(hi)});
}

namespace {
void check_grid(const GridSpec& grid) {
  if (!(grid.lo <= grid.hi) || grid.points < 2)
    throw InvalidParameter("grid needs lo <= hi and at least 2 points");
}
}  // namespace

double scalar_min_by_grid(const PhiSpec& phi, double rho_omega,
                          const GridSpec& grid) {
  check_grid(grid);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.points; ++i) {
    const double t = static_cast<double>(i) / (grid.points - 1);
    best = std::min(best, phi_eval(phi, t) + rho_omega * (1.0 - t));
  }
  return best;
}

double prox_by_grid(double weight, double y, double box, const GridSpec& grid) {
  check_grid(grid);
  if (weight < 0.0) throw DomainError("prox_by_grid: weight must be >= 0");
  if (!(box > 0.0)) throw DomainError("prox_by_grid: box must be > 0");
  double best_x = -box;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.points; ++i) {
    const double x =
        -box + 2.0 * box * static_cast<double>(i) / (grid.points - 1);
    const double val = 0.5 * (x - y) * (x - y) + weight * std::abs(x);
    if (val < best_val) {
      best_val = val;
      best_x = x;
    }
  }
  return best_x;
}

SupportMinResult brute_force_support_min(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         double delta,
                                         const GroupPartition& partition,
                                         SupportLoss loss) {
  if (A.cols() != partition.n)
    throw DimensionMismatch("brute_force_support_min: A.cols() != n");
  if (A.rows() != b.size())
    throw DimensionMismatch("brute_force_support_min: A.rows() != len(b)");
  const int m = partition.group_count();
  if (m > 12)
    throw InvalidParameter("brute_force_support_min: enumeration bound m <= 12");

  const auto feasible = [&](const Eigen::VectorXd& x) {
    const double r = (A * x - b).norm();
    const double f = loss == SupportLoss::HalfSquared ? 0.5 * r * r : r;
    return f <= delta + 1e-12;
  };

  SupportMinResult best;
  best.count = -1;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int count = __builtin_popcount(mask);
    if (best.count >= 0 && count >= best.count) continue;
    std::vector<int> cols;
    std::vector<int> support;
    for (int i = 0; i < m; ++i) {
      if (!(mask & (1u << i))) continue;
      support.push_back(i);
      for (int idx : partition.groups[static_cast<size_t>(i)])
        cols.push_back(idx);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(partition.n);
    if (!cols.empty()) {
      Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(cols.size()));
      for (size_t k = 0; k < cols.size(); ++k)
        As.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
      // Normal equations with a tiny ridge to absorb rank deficiency.
      const Eigen::MatrixXd G =
          As.transpose() * As +
          1e-12 * Eigen::MatrixXd::Identity(As.cols(), As.cols());
      const Eigen::VectorXd xs = G.ldlt().solve(As.transpose() * b);
      for (size_t k = 0; k < cols.size(); ++k)
        x[cols[k]] = xs[static_cast<Eigen::Index>(k)];
    }
    if (feasible(x)) {
      best.support = std::move(support);
      best.count = count;
    }
  }
  if (best.count < 0)
    throw Infeasible("brute_force_support_min: no support meets delta");
  return best;
}

SurrogateMinResult brute_force_surrogate_min(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const GridSpec& grid, int dim) {
  if (dim < 1 || dim > 3)
    throw InvalidParameter("brute_force_surrogate_min: dim must be in [1,3]");
  const auto coord = [&](int i) {
    return grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) /
                         (grid.points - 1);
  };
  SurrogateMinResult best;
  best.value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x(dim);
  const int n1 = grid.points;
  const int n2 = dim >= 2 ? grid.points : 1;
  const int n3 = dim >= 3 ? grid.points : 1;
  for (int i = 0; i < n1; ++i) {
    x[0] = coord(i);
    for (int j = 0; j < n2; ++j) {
      if (dim >= 2) x[1] = coord(j);
      for (int k = 0; k < n3; ++k) {
        if (dim >= 3) x[2] = coord(k);
        const double val = objective(x);
        if (val < best.value) {
          best.value = val;
          best.argmin = x;
        }
      }
    }
  }
  return best;
}

}  // namespace epsk

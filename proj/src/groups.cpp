#include "epsk/groups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epsk/errors.hpp"
#include "json.hpp"

namespace epsk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double pnorm(const Eigen::VectorXd& v, double p) {
  if (p == 1.0) return v.lpNorm<1>();
  if (p == 2.0) return v.norm();
  return v.lpNorm<Eigen::Infinity>();
}
}  // namespace

GroupPartition GroupPartition::make(int n, std::vector<std::vector<int>> groups,
                                    double p) {
  if (n <= 0) throw InvalidParameter("partition: n must be positive");
  if (!(p == 1.0 || p == 2.0 || p == kInf))
    throw InvalidParameter("partition: p must be 1, 2, or inf");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  int covered = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidParameter("partition: empty group");
    for (int idx : g) {
      if (idx < 0 || idx >= n)
        throw InvalidParameter("partition: index out of range");
      if (seen[static_cast<size_t>(idx)])
        throw InvalidParameter("partition: groups not disjoint");
      seen[static_cast<size_t>(idx)] = 1;
      ++covered;
    }
  }
  if (covered != n) throw InvalidParameter("partition: groups do not cover");
  GroupPartition part;
  part.n = n;
  part.groups = std::move(groups);
  part.p = p;
  return part;
}

GroupPartition GroupPartition::singletons(int n, double p) {
  std::vector<std::vector<int>> groups;
  groups.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) groups.push_back({i});
  return make(n, std::move(groups), p);
}

Eigen::VectorXd group_norms(const Eigen::VectorXd& x,
                            const GroupPartition& partition) {
  if (x.size() != partition.n)
    throw DimensionMismatch("group_norms: len(x) != n");
  Eigen::VectorXd out(partition.group_count());
  for (int i = 0; i < partition.group_count(); ++i) {
    const auto& g = partition.groups[static_cast<size_t>(i)];
    Eigen::VectorXd sub(g.size());
    for (size_t k = 0; k < g.size(); ++k) sub[static_cast<Eigen::Index>(k)] = x[g[k]];
    out[i] = pnorm(sub, partition.p);
  }
  return out;
}

int group_zero_norm(const Eigen::VectorXd& x, const GroupPartition& partition,
                    double tol) {
  const Eigen::VectorXd norms = group_norms(x, partition);
  return static_cast<int>((norms.array() > tol).count());
}

double surrogate_penalty_term(const Eigen::VectorXd& x,
                              const GroupPartition& partition,
                              const PhiSpec& phi, double rho) {
  const Eigen::VectorXd norms = group_norms(x, partition);
  double total = 0.0;
  for (int i = 0; i < norms.size(); ++i) {
    const double s = rho * norms[i];
    total += s - psi_star(phi, s);
  }
  return total;
}

Eigen::VectorXd truncate_vector(const Eigen::VectorXd& x,
                                const GroupPartition& partition,
                                const PhiSpec& phi, double rho) {
  const Eigen::VectorXd norms = group_norms(x, partition);
  Eigen::VectorXd out = x;
  for (int i = 0; i < partition.group_count(); ++i) {
    if (rho * norms[i] > phi.d_minus_1) continue;
    for (int idx : partition.groups[static_cast<size_t>(i)]) out[idx] = 0.0;
  }
  return out;
}

double threshold_min_variant(const PhiSpec& phi, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("threshold: alpha must be > 0");
  return phi.d_minus_1 / alpha;
}

double threshold_regularized_variant(const PhiSpec& phi, double nu,
                                     double L_f,
                                     const GroupPartition& partition) {
  if (!(nu > 0.0) || !(L_f > 0.0))
    throw DomainError("threshold: nu and L_f must be > 0");
  double beta = 1.0;
  if (partition.p > 2.0) {
    size_t max_size = 0;
    for (const auto& g : partition.groups) max_size = std::max(max_size, g.size());
    const double expo =
        partition.p == kInf ? 0.5 : (partition.p - 2.0) / (2.0 * partition.p);
    beta = std::max(1.0, std::pow(static_cast<double>(max_size), expo));
  }
  return phi.d_minus_1 * (1.0 - phi.t_star) * beta * nu * L_f /
         (1.0 - phi.t_zero);
}

double regularized_surrogate_objective(const Eigen::VectorXd& x,
                                       double f_value,
                                       const GroupSurrogateParams& params,
                                       const GroupPartition& partition) {
  return params.nu * f_value +
         surrogate_penalty_term(x, partition, params.phi, params.rho);
}

std::string partition_to_json(const GroupPartition& partition) {
  nlohmann::json j;
  j["n"] = partition.n;
  j["groups"] = partition.groups;
  if (partition.p == kInf)
    j["p"] = "inf";
  else
    j["p"] = partition.p;
  return j.dump();
}

GroupPartition partition_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("partition JSON parse error: ") + e.what());
  }
  double p;
  if (j["p"].is_string()) {
    if (j["p"].get<std::string>() != "inf")
      throw InvalidParameter("partition JSON: p must be 1, 2, or \"inf\"");
    p = kInf;
  } else {
    p = j["p"].get<double>();
  }
  return GroupPartition::make(j["n"].get<int>(),
                              j["groups"].get<std::vector<std::vector<int>>>(),
                              p);
}

}  // namespace epsk

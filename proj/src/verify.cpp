#include "epsk/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "epsk/experiments.hpp"
#include "epsk/groups.hpp"
#include "epsk/oracles.hpp"
#include "epsk/phi.hpp"
#include "epsk/rng.hpp"
#include "epsk/solver.hpp"
#include "epsk/spectral.hpp"

namespace epsk {

namespace {

std::vector<PhiSpec> all_kinds() {
  return {make_phi(PhiKind::Linear),
          make_phi(PhiKind::PowerQ, {0.5, 0.5}),
          make_phi(PhiKind::Log, {0.5}),
          make_phi(PhiKind::Arctan, {0.5}),
          make_phi(PhiKind::Scad, {3.7})};
}

void run_check(VerifyReport& report, const std::string& name, double tol,
               const std::function<double(std::string&)>& worst_deviation) {
  CheckResult r;
  r.name = name;
  try {
    std::string detail;
    r.deviation = worst_deviation(detail);
    r.passed = r.deviation <= tol;
    if (!r.passed) r.detail = detail.empty() ? "deviation above tolerance" : detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.deviation = std::numeric_limits<double>::infinity();
    r.detail = e.what();
  }
  report.checks.push_back(std::move(r));
}

double check_conjugates(std::string& detail) {
  double worst = 0.0;
  for (const PhiSpec& phi : all_kinds()) {
    for (double s = -3.0; s <= 8.0; s += 0.0625) {
      const double closed = psi_star(phi, s);
      const double searched = conjugate_by_search(phi, s);
      const double dev = std::abs(closed - searched);
      if (dev > worst) {
        worst = dev;
        detail = std::string(phi_kind_name(phi.kind)) + " at s=" +
                 std::to_string(s);
      }
    }
  }
  return worst;
}

double check_subgradients(std::string& detail) {
  // t = psi_star_subgrad(s) must attain the sup defining psi*(s).
  double worst = 0.0;
  for (const PhiSpec& phi : all_kinds()) {
    for (double s = -3.0; s <= 8.0; s += 0.0625) {
      const double t = psi_star_subgrad(phi, s);
      double dev = std::max(0.0, std::max(-t, t - 1.0));
      dev = std::max(dev, std::abs(s * t - phi_eval(phi, t) - psi_star(phi, s)));
      if (dev > worst) {
        worst = dev;
        detail = std::string(phi_kind_name(phi.kind)) + " at s=" +
                 std::to_string(s);
      }
    }
  }
  return worst;
}

double check_scalar_penalty(std::string& detail) {
  // rho_omega - psi*(rho_omega) against a grid minimum, plus the exact-one
  // regime rho_omega > phi'_-(1).
  double worst = 0.0;
  GridSpec grid{0.0, 1.0, 20001};
  for (const PhiSpec& phi : all_kinds()) {
    for (double w = 0.0; w <= 6.0; w += 0.125) {
      const double closed = scalar_penalty_value(phi, w);
      const double gridded = scalar_min_by_grid(phi, w, grid);
      double dev = std::abs(closed - gridded);
      if (w > phi.d_minus_1 + 1e-9) dev = std::max(dev, std::abs(closed - 1.0));
      if (dev > worst) {
        worst = dev;
        detail = std::string(phi_kind_name(phi.kind)) + " at rho*omega=" +
                 std::to_string(w);
      }
    }
  }
  return worst;
}

double check_rng_determinism(std::string&) {
  CounterRng a(42, 7), b(42, 7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() != b.next_u64()) worst = 1.0;
  }
  CounterRng c(42, 8);
  bool differs = false;
  CounterRng a2(42, 7);
  for (int i = 0; i < 16; ++i)
    if (a2.next_u64() != c.next_u64()) differs = true;
  if (!differs) worst = 1.0;
  return worst;
}

double check_group_surrogate(std::string& detail) {
  // Penalty term within [0, m] and equal to the group zero-norm once active
  // groups clear phi'_-(1)/rho.
  double worst = 0.0;
  CounterRng rng(11, 0);
  for (const PhiSpec& phi : all_kinds()) {
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      GroupPartition part = GroupPartition::make(6, {{0, 1}, {2, 3, 4}, {5}}, p);
      Eigen::VectorXd x(6);
      for (int i = 0; i < 6; ++i) x(i) = rng.next_uniform(-2.0, 2.0);
      const double rho = 4.0 * phi.d_minus_1 /
                         std::max(group_norms(x, part).minCoeff(), 1e-3);
      const double term = surrogate_penalty_term(x, part, phi, rho);
      const int zn = group_zero_norm(x, part, 1e-12);
      double dev = std::max(0.0, std::max(-term, term - part.group_count()));
      dev = std::max(dev, std::abs(term - zn));
      if (dev > worst) {
        worst = dev;
        detail = std::string(phi_kind_name(phi.kind)) + " p=" + std::to_string(p);
      }
    }
  }
  return worst;
}

double check_matrix_proxes(std::string& detail) {
  // The two prox maps against their scalar optimality conditions / grid search.
  double worst = 0.0;
  CounterRng rng(99, 0);
  Matrix X(5, 4);
  for (int i = 0; i < X.size(); ++i) X(i / 4, i % 4) = rng.next_normal();
  const double tau = 0.7, g1 = 1.1;
  const Matrix Z = prox_nuclear_spectral_box(X, tau, g1);
  const Eigen::VectorXd sx = svd(X).sigma, sz = svd(Z).sigma;
  for (int i = 0; i < sz.size(); ++i) {
    const double expect = std::min(std::max(sx(i) - tau, 0.0), g1);
    worst = std::max(worst, std::abs(sz(i) - expect));
  }
  if (worst > 0) detail = "spectral prox singular values";

  Matrix Y(3, 3), Wt(3, 3);
  for (int i = 0; i < 9; ++i) {
    Y(i / 3, i % 3) = rng.next_uniform(-3.0, 3.0);
    Wt(i / 3, i % 3) = rng.next_uniform(0.0, 1.5);
  }
  const double g2 = 1.8;
  const Matrix P = prox_weighted_l1_box(Y, Wt, g2);
  GridSpec grid{0.0, 1.0, 40001};
  for (int i = 0; i < 9; ++i) {
    const double ref = prox_by_grid(Wt(i / 3, i % 3), Y(i / 3, i % 3), g2, grid);
    const double dev = std::abs(P(i / 3, i % 3) - ref);
    if (dev > worst) {
      worst = dev;
      detail = "entrywise prox cell " + std::to_string(i);
    }
  }
  return worst;
}

double check_rank_surrogate(std::string& detail) {
  // rank_surrogate in [0, min(n1,n2)] and exact for large rho.
  double worst = 0.0;
  CounterRng rng(123, 0);
  Matrix A = Matrix::Zero(6, 5);
  Eigen::VectorXd u(6), v(5);
  for (int i = 0; i < 6; ++i) u(i) = rng.next_normal();
  for (int i = 0; i < 5; ++i) v(i) = rng.next_normal();
  A += u * v.transpose();
  for (int i = 0; i < 6; ++i) u(i) = rng.next_normal();
  for (int i = 0; i < 5; ++i) v(i) = rng.next_normal();
  A += u * v.transpose();  // rank 2 a.s.
  for (const PhiSpec& phi : all_kinds()) {
    const Eigen::VectorXd s = svd(A).sigma;
    double smin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > 1e-9) smin = std::min(smin, s(i));
    const double rho = 2.0 * phi.d_minus_1 / smin;
    const double val = rank_surrogate(A, phi, rho);
    const double dev = std::abs(val - 2.0);
    if (dev > worst) {
      worst = dev;
      detail = phi_kind_name(phi.kind);
    }
  }
  return worst;
}

double check_apg_certificate(std::string& detail) {
  CounterRng rng(7, 0);
  const int n = 12;
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.next_normal();
  const Matrix W = Matrix::Zero(n, n), S = Matrix::Zero(n, n);
  SolverOptions opts;
  const ApgResult res =
      apg_subproblem(M, W, S, 1.0, 0.5 / std::sqrt(double(n)), 10.0, 10.0, opts);
  if (!res.converged) {
    detail = "subproblem did not converge";
    return 1.0;
  }
  const double scale = 1.0 + std::hypot(res.X.norm(), res.Y.norm());
  return res.fp_residual / (opts.inner_tol * scale);
}

double check_solver_recovery(std::string& detail) {
  ExperimentConfig cfg;
  cfg.n = 40;
  cfg.r = 2;
  cfg.rho_s = 0.05;
  cfg.sigma = 0.01;
  cfg.trials = 1;
  cfg.seed = 3;
  cfg.phi = make_phi(PhiKind::Scad, {3.7});
  const std::vector<TrialRecord> recs = run_trials(cfg);
  const TrialRecord& r = recs.at(0);
  if (r.status != "ok" && r.status != "degenerate_rho") {
    detail = r.status;
    return 1.0;
  }
  double dev = std::abs(double(r.rank_hat - r.true_rank));
  if (r.rms_x > 0.01) {
    dev = std::max(dev, r.rms_x);
    detail = "rms_x=" + std::to_string(r.rms_x);
  }
  if (dev > 0 && detail.empty())
    detail = "rank_hat=" + std::to_string(r.rank_hat);
  return dev;
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name
        << "  (deviation " << c.deviation << ")";
    if (!c.passed && !c.detail.empty()) out << "  -- " << c.detail;
    out << '\n';
  }
  out << (all_passed() ? "all checks passed" : "CHECKS FAILED") << '\n';
  return out.str();
}

std::string VerifyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["deviation"] = c.deviation;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(j);
  }
  nlohmann::json root;
  root["checks"] = arr;
  root["all_passed"] = all_passed();
  return root.dump(2);
}

VerifyReport verify_suite(VerifyLevel level) {
  VerifyReport report;
  run_check(report, "conjugate closed forms vs unimodal search", 1e-8,
            check_conjugates);
  run_check(report, "conjugate subgradient attains the sup", 1e-8,
            check_subgradients);
  run_check(report, "scalar penalty value vs grid minimum", 1e-6,
            check_scalar_penalty);
  run_check(report, "seeded rng streams reproduce and separate", 0.0,
            check_rng_determinism);
  run_check(report, "group surrogate matches group zero-norm at large rho",
            1e-9, check_group_surrogate);
  run_check(report, "prox maps match scalar references", 1e-4,
            check_matrix_proxes);
  run_check(report, "rank surrogate exact at large rho", 1e-9,
            check_rank_surrogate);
  if (level == VerifyLevel::Full) {
    run_check(report, "inner solver fixed-point certificate", 1.0,
              check_apg_certificate);
    run_check(report, "decomposition recovers planted rank", 0.0,
              check_solver_recovery);
  }
  return report;
}

}  // namespace epsk

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epsk/errors.hpp"
#include "epsk/phi.hpp"
#include "epsk/rng.hpp"
#include "epsk/solver.hpp"

using namespace epsk;

namespace {
Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.next_normal();
  return m;
}

double subproblem_objective(const Matrix& X, const Matrix& Y, const Matrix& M,
                            const Matrix& W, const Matrix& S, double lambda_k,
                            double mu_k) {
  const Eigen::VectorXd sig = svd(X).sigma;
  const double nuclear = sig.sum();
  const double inner_w = (W.array() * X.array()).sum();
  const double weighted_l1 =
      ((Matrix::Ones(S.rows(), S.cols()) - S).array() * Y.array().abs()).sum();
  return 0.5 * (X + Y - M).squaredNorm() + lambda_k * (nuclear - inner_w) +
         mu_k * weighted_l1;
}
}  // namespace

TEST_CASE("default schedule pins the published multipliers") {
  const Schedule s100 = default_schedule(100);
  CHECK(s100.lambda1 == 1.0);
  CHECK(s100.mu1 == doctest::Approx(0.5 / 10.0));
  CHECK(s100.lambda_mult == doctest::Approx(20.0));  // max(20, 5.625)
  const Schedule s400 = default_schedule(400);
  CHECK(s400.lambda_mult == doctest::Approx(22.5));  // 0.45 * 400 / 8
  const Schedule s10000 = default_schedule(10000);
  CHECK(s10000.lambda_mult == doctest::Approx(100.0));  // capped
  CHECK(s400.lambda_at(1) == doctest::Approx(1.0));
  CHECK(s400.lambda_at(2) == doctest::Approx(22.5));
  CHECK(s400.lambda_at(7) == doctest::Approx(22.5));
  CHECK(s400.mu_at(1) == doctest::Approx(0.5 / 20.0));
  CHECK(s400.mu_at(2) == doctest::Approx(0.8 * 22.5 / 20.0));
  CHECK(s400.mu_at(3) == doctest::Approx(0.35 * 22.5 / 20.0));
  CHECK_THROWS_AS(default_schedule(0), InvalidParameter);
}

TEST_CASE("apg subproblem: zero data stays at zero") {
  const int n = 6;
  const Matrix Z = Matrix::Zero(n, n);
  const ApgResult r = apg_subproblem(Z, Z, Z, 1.0, 0.1, 1.0, 1.0, {});
  CHECK(r.X.norm() == 0.0);
  CHECK(r.Y.norm() == 0.0);
  CHECK(r.converged);
}

TEST_CASE("apg subproblem: 1x1 closed form") {
  // min 0.5 (x + y - 2)^2 + |x| + |y| over |x|<=10, |y|<=10.
  // Optimum: x + y = 1 with value 0.5 + 1 = 1.5 (any split on [0,1]).
  Matrix M(1, 1), Z(1, 1);
  M << 2.0;
  Z << 0.0;
  const ApgResult r = apg_subproblem(M, Z, Z, 1.0, 1.0, 10.0, 10.0, {});
  CHECK(std::abs(r.objective - 1.5) <= 1e-6);
  CHECK(std::abs(r.X(0, 0) + r.Y(0, 0) - 1.0) <= 1e-5);
}

TEST_CASE("apg subproblem: heavy nuclear weight kills X") {
  const Matrix M = random_matrix(8, 8, 111);
  const Matrix Z = Matrix::Zero(8, 8);
  const double lambda_big = 2.0 * M.norm();  // exceeds the spectral norm
  const ApgResult r =
      apg_subproblem(M, Z, Z, lambda_big, lambda_big, 10.0, 10.0, {});
  CHECK(r.X.norm() <= 1e-8);
  CHECK(r.Y.norm() <= 1e-8);
}

TEST_CASE("apg subproblem: feasibility, optimality, warm start") {
  const Matrix M = random_matrix(10, 12, 113);
  Matrix W = Matrix::Zero(10, 12);
  Matrix S = Matrix::Zero(10, 12);
  // A valid subgradient pair with ||W|| <= 1 and S in [0,1].
  W(0, 0) = 0.5;
  S(1, 1) = 0.7;
  const double gamma1 = 0.8, gamma2 = 0.3;
  SolverOptions opts;
  opts.inner_tol = 1e-9;
  opts.inner_max = 2000;
  const ApgResult r = apg_subproblem(M, W, S, 0.4, 0.2, gamma1, gamma2, opts);
  CHECK(svd(r.X).sigma[0] <= gamma1 + 1e-8);
  CHECK(r.Y.array().abs().maxCoeff() <= gamma2 + 1e-8);
  CHECK(r.fp_residual <= 1e-6);
  // The reported objective matches an independent evaluation.
  CHECK(std::abs(r.objective -
                 subproblem_objective(r.X, r.Y, M, W, S, 0.4, 0.2)) <= 1e-8);
  // No feasible perturbation along random directions improves the objective
  // (first-order check of the returned minimizer).
  CounterRng rng(117, 0);
  for (int d = 0; d < 10; ++d) {
    Matrix DX = 1e-4 * random_matrix(10, 12, 500 + d);
    Matrix DY = 1e-4 * random_matrix(10, 12, 600 + d);
    Matrix X2 = r.X + DX;
    Matrix Y2 = (r.Y + DY).cwiseMax(-gamma2).cwiseMin(gamma2);
    if (svd(X2).sigma[0] > gamma1) continue;
    CHECK(subproblem_objective(X2, Y2, M, W, S, 0.4, 0.2) >=
          r.objective - 1e-7);
  }
  // Warm start at the solution converges immediately-ish.
  const ApgResult r2 =
      apg_subproblem(M, W, S, 0.4, 0.2, gamma1, gamma2, opts, &r.X, &r.Y);
  CHECK(r2.iters <= r.iters);
  CHECK(std::abs(r2.objective - r.objective) <= 1e-7);
}

TEST_CASE("apg subproblem rejects invalid weights") {
  const Matrix M = random_matrix(4, 4, 119);
  const Matrix Z = Matrix::Zero(4, 4);
  Matrix Wbad = Matrix::Zero(4, 4);
  Wbad(0, 0) = 1.5;  // spectral norm > 1
  CHECK_THROWS_AS(apg_subproblem(M, Wbad, Z, 1.0, 1.0, 1.0, 1.0, {}),
                  DomainError);
  Matrix Sbad = Matrix::Zero(4, 4);
  Sbad(0, 0) = -0.1;
  CHECK_THROWS_AS(apg_subproblem(M, Z, Sbad, 1.0, 1.0, 1.0, 1.0, {}),
                  DomainError);
  Matrix Sbad2 = Matrix::Zero(4, 4);
  Sbad2(1, 1) = 1.2;
  CHECK_THROWS_AS(apg_subproblem(M, Z, Sbad2, 1.0, 1.0, 1.0, 1.0, {}),
                  DomainError);
}

TEST_CASE("instance validation") {
  DecompositionInstance inst;
  inst.M = Matrix();
  CHECK_THROWS_AS(inst.validate(), InvalidParameter);
  inst.M = Matrix::Zero(3, 3);
  inst.gamma1 = 0.0;
  CHECK_THROWS_AS(inst.validate(), InvalidParameter);
  inst.gamma1 = 1.0;
  inst.gamma2 = -1.0;
  CHECK_THROWS_AS(inst.validate(), InvalidParameter);
  inst.gamma2 = 1.0;
  CHECK_NOTHROW(inst.validate());
}

TEST_CASE("full solver: zero input terminates at zero") {
  DecompositionInstance inst;
  inst.M = Matrix::Zero(10, 10);
  inst.gamma1 = 1.0;
  inst.gamma2 = 1.0;
  const PhiSpec phi = make_phi(PhiKind::Scad, {3.7});
  const SolverReport rep = gep_mscra(inst, phi, default_schedule(10));
  CHECK(rep.X_hat.norm() == 0.0);
  CHECK(rep.Y_hat.norm() == 0.0);
  CHECK(rep.final_rank == 0);
  CHECK(rep.final_sparsity == 0);
}

TEST_CASE("full solver: determinism and certificate invariants") {
  const int n = 24;
  const Matrix L = random_matrix(n, 2, 131) * random_matrix(2, n, 132);
  Matrix Ysp = Matrix::Zero(n, n);
  CounterRng rng(133, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (rng.next_double() < 0.05) Ysp(i, j) = rng.next_uniform(-5.0, 5.0);
  DecompositionInstance inst;
  inst.M = L + Ysp + 0.01 * random_matrix(n, n, 134);
  inst.gamma1 = 10.0 * L.norm();
  inst.gamma2 = 10.0 * Ysp.array().abs().maxCoeff();
  const PhiSpec phi = make_phi(PhiKind::Scad, {3.7});
  const Schedule sched = default_schedule(n);

  const SolverReport a = gep_mscra(inst, phi, sched);
  const SolverReport b = gep_mscra(inst, phi, sched);
  // Bitwise deterministic.
  CHECK((a.X_hat - b.X_hat).norm() == 0.0);
  CHECK((a.Y_hat - b.Y_hat).norm() == 0.0);
  CHECK(a.outer_iters == b.outer_iters);

  // Feasibility.
  CHECK(svd(a.X_hat).sigma[0] <= inst.gamma1 + 1e-8);
  CHECK(a.Y_hat.array().abs().maxCoeff() <= inst.gamma2 + 1e-8);
  // Weight matrices stay in their prescribed sets.
  CHECK(svd(a.W_final).sigma[0] <= 1.0 + 1e-10);
  CHECK(a.S_final.minCoeff() >= 0.0);
  CHECK(a.S_final.maxCoeff() <= 1.0);
  // The last subproblem met its relative fixed-point tolerance.
  const double sol_scale =
      1.0 + std::sqrt(a.X_hat.squaredNorm() + a.Y_hat.squaredNorm());
  CHECK(a.final_fp_residual <= 1e-6 * sol_scale);
  // History bookkeeping is consistent.
  CHECK(static_cast<int>(a.residual_history.size()) == a.outer_iters);
  CHECK(a.rho1 > 0.0);
  CHECK(a.rank_history.back() == a.final_rank);
}

TEST_CASE("full solver recovers an easy planted decomposition") {
  const int n = 30;
  const Matrix L = random_matrix(n, 2, 141) * random_matrix(2, n, 142);
  Matrix Ysp = Matrix::Zero(n, n);
  CounterRng rng(143, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (rng.next_double() < 0.05) Ysp(i, j) = rng.next_uniform(-5.0, 5.0);
  DecompositionInstance inst;
  inst.M = L + Ysp;  // noiseless
  inst.gamma1 = 10.0 * L.norm();
  inst.gamma2 = 10.0 * Ysp.array().abs().maxCoeff();
  const PhiSpec phi = make_phi(PhiKind::Scad, {3.7});
  const SolverReport rep = gep_mscra(inst, phi, default_schedule(n));
  CHECK(rep.final_rank == 2);
  const double rms_x = (rep.X_hat - L).norm() / n;
  CHECK(rms_x <= 1e-1);
}

TEST_CASE("numerical sparsity") {
  Matrix Y = Matrix::Zero(4, 4);
  CHECK(numerical_sparsity(Y) == 0);
  Y(0, 0) = 2.0;
  Y(1, 2) = -1e-3;
  Y(3, 3) = 1e-9;
  CHECK(numerical_sparsity(Y) == 2);
  CHECK(numerical_sparsity(Y, 1e-12) == 3);
}

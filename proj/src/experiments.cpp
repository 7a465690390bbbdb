#include "epsk/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epsk/errors.hpp"
#include "epsk/rng.hpp"
#include "epsk/spectral.hpp"

namespace epsk {

namespace {

double operator_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  const Eigen::VectorXd s = svd(A).sigma;
  return s.size() > 0 ? s(0) : 0.0;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n <= 0) throw InvalidParameter("experiment: n must be positive");
  if (r < 0 || r > n) throw InvalidParameter("experiment: need 0 <= r <= n");
  if (rho_s < 0.0 || rho_s > 1.0)
    throw InvalidParameter("experiment: rho_s must lie in [0,1]");
  if (sigma < 0.0) throw InvalidParameter("experiment: sigma must be >= 0");
  if (trials <= 0) throw InvalidParameter("experiment: trials must be positive");
  if (lambda <= 0.0) throw InvalidParameter("experiment: lambda must be positive");
  if (max_outer <= 0) throw InvalidParameter("experiment: max_outer must be positive");
  if (sigma == 0.0 && !sigma_n_override)
    throw InvalidParameter(
        "experiment: sigma = 0 requires an explicit factor std-dev "
        "(sigma_n_override)");
  if (sigma_n_override && *sigma_n_override <= 0.0)
    throw InvalidParameter("experiment: sigma_n_override must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("experiment config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("r")) c.r = j.at("r").get<int>();
    if (j.contains("rho_s")) c.rho_s = j.at("rho_s").get<double>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output_path = j.at("output").get<std::string>();
    if (j.contains("sigma_n")) c.sigma_n_override = j.at("sigma_n").get<double>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
    if (j.contains("max_outer")) c.max_outer = j.at("max_outer").get<int>();
    if (j.contains("phi")) {
      c.phi = phi_from_json(j.at("phi").dump());
    } else {
      c.phi = make_phi(PhiKind::Scad, {3.7});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("experiment config: bad field: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["r"] = r;
  j["rho_s"] = rho_s;
  j["sigma"] = sigma;
  j["trials"] = trials;
  j["seed"] = seed;
  j["lambda"] = lambda;
  j["max_outer"] = max_outer;
  if (!output_path.empty()) j["output"] = output_path;
  if (sigma_n_override) j["sigma_n"] = *sigma_n_override;
  j["phi"] = nlohmann::json::parse(phi_to_json(phi));
  return j.dump(2);
}

GeneratedInstance generate_instance(const ExperimentConfig& config, int trial) {
  config.validate();
  if (trial < 0) throw InvalidParameter("generate_instance: trial must be >= 0");
  const int n = config.n;
  const int r = config.r;
  const double sigma_n =
      config.sigma_n_override ? *config.sigma_n_override
                              : std::sqrt(10.0 * config.sigma / std::sqrt(double(n)));

  const std::uint64_t base = mix_seed(config.seed, std::uint64_t(trial));
  CounterRng rng_factors(base, 0);
  CounterRng rng_sparse(base, 1);
  CounterRng rng_noise(base, 2);

  Matrix R(n, r), L(n, r);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) R(i, k) = sigma_n * rng_factors.next_normal();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) L(i, k) = sigma_n * rng_factors.next_normal();

  GeneratedInstance out;
  out.M_R = R * L.transpose();

  out.M_S = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rng_sparse.next_double() < config.rho_s)
        out.M_S(i, j) = rng_sparse.next_uniform(-5.0, 5.0);

  out.M = out.M_R + out.M_S;
  if (config.sigma > 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.M(i, j) += config.sigma * rng_noise.next_normal();
  }
  return out;
}

BoxRadii box_radii(const Matrix& M_R, const Matrix& M_S) {
  BoxRadii out;
  const double op = operator_norm(M_R);
  const double sup = M_S.size() > 0 ? M_S.cwiseAbs().maxCoeff() : 0.0;
  if (op > 0.0) {
    out.gamma1 = 10.0 * op;
  } else {
    out.gamma1 = 10.0;
    out.flagged = true;
  }
  if (sup > 0.0) {
    out.gamma2 = 10.0 * sup;
  } else {
    out.gamma2 = 10.0;
    out.flagged = true;
  }
  return out;
}

std::pair<double, double> rms_errors(const Matrix& X_hat, const Matrix& Y_hat,
                                     const Matrix& M_R, const Matrix& M_S,
                                     int n) {
  if (n <= 0) throw InvalidParameter("rms_errors: n must be positive");
  if (X_hat.rows() != M_R.rows() || X_hat.cols() != M_R.cols() ||
      Y_hat.rows() != M_S.rows() || Y_hat.cols() != M_S.cols())
    throw DimensionMismatch("rms_errors: estimate/truth shapes differ");
  return {(X_hat - M_R).norm() / double(n), (Y_hat - M_S).norm() / double(n)};
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config) {
  config.validate();
  std::vector<TrialRecord> records;
  records.reserve(std::size_t(config.trials));
  for (int t = 0; t < config.trials; ++t) {
    TrialRecord rec;
    rec.trial_index = t;
    try {
      const GeneratedInstance inst = generate_instance(config, t);
      rec.true_rank = config.r;
      rec.true_sparsity = int((inst.M_S.array() != 0.0).count());

      const BoxRadii radii = box_radii(inst.M_R, inst.M_S);
      DecompositionInstance prob;
      prob.M = inst.M;
      prob.gamma1 = radii.gamma1;
      prob.gamma2 = radii.gamma2;
      prob.lambda = config.lambda;
      Schedule sched = default_schedule(config.n);
      sched.max_outer = config.max_outer;

      const auto t0 = std::chrono::steady_clock::now();
      const SolverReport rep = gep_mscra(prob, config.phi, sched, SolverOptions{});
      const auto t1 = std::chrono::steady_clock::now();

      const auto [ex, ey] =
          rms_errors(rep.X_hat, rep.Y_hat, inst.M_R, inst.M_S, config.n);
      rec.rms_x = ex;
      rec.rms_y = ey;
      rec.rank_hat = rep.final_rank;
      rec.sparsity_hat = rep.final_sparsity;
      rec.outer_iters = rep.outer_iters;
      rec.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
      rec.status = rep.degenerate_rho ? "degenerate_rho" : "ok";
    } catch (const std::exception& e) {
      rec.status = std::string("failed: ") + e.what();
    }
    records.push_back(rec);
  }

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw IoError("run_trials: cannot open " + config.output_path);
    out << trials_to_csv(records, config);
    if (!out) throw IoError("run_trials: write failed for " + config.output_path);
  }
  return records;
}

std::string trials_to_csv(const std::vector<TrialRecord>& records,
                          const ExperimentConfig& config) {
  std::ostringstream out;
  out.precision(10);
  out << "trial,n,r,rho_s,sigma,rms_x,rms_y,rank_hat,sparsity_hat,"
         "true_rank,true_sparsity,outer_iters,wall_time_s,status\n";
  double sx = 0, sy = 0, srank = 0, ssp = 0, strsp = 0, sit = 0, st = 0;
  int ok = 0;
  for (const TrialRecord& r : records) {
    std::string status = r.status;
    for (char& c : status)
      if (c == ',' || c == '\n') c = ';';
    out << r.trial_index << ',' << config.n << ',' << config.r << ','
        << config.rho_s << ',' << config.sigma << ',' << r.rms_x << ','
        << r.rms_y << ',' << r.rank_hat << ',' << r.sparsity_hat << ','
        << r.true_rank << ',' << r.true_sparsity << ',' << r.outer_iters << ','
        << r.wall_time_seconds << ',' << status << '\n';
    if (r.status == "ok" || r.status == "degenerate_rho") {
      sx += r.rms_x;
      sy += r.rms_y;
      srank += r.rank_hat;
      ssp += r.sparsity_hat;
      strsp += r.true_sparsity;
      sit += r.outer_iters;
      st += r.wall_time_seconds;
      ++ok;
    }
  }
  if (ok > 0) {
    const double d = double(ok);
    out << "avg," << config.n << ',' << config.r << ',' << config.rho_s << ','
        << config.sigma << ',' << sx / d << ',' << sy / d << ',' << srank / d
        << ',' << ssp / d << ',' << config.r << ',' << strsp / d << ','
        << sit / d << ',' << st / d
        << ",avg_over_" << ok << "_trials\n";
  }
  return out.str();
}

}  // namespace epsk

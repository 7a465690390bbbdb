#ifndef EPSK_EXPERIMENTS_HPP
#define EPSK_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsk/phi.hpp"
#include "epsk/solver.hpp"

namespace epsk {

// Synthetic low-rank plus sparse study: M = M_R + M_S + M_0 with
// M_R = R L^T (factor entries N(0, sigma_n^2), sigma_n^2 = 10 sigma / sqrt(n)),
// M_S Bernoulli(rho_s) x Uniform[-5,5], and Gaussian noise M_0 ~ N(0, sigma^2).

struct ExperimentConfig {
  int n = 100;
  int r = 10;
  double rho_s = 0.1;
  double sigma = 0.1;
  int trials = 10;
  std::uint64_t seed = 1;
  PhiSpec phi;  // defaults to Scad a = 3.7 when parsed from JSON without "phi"
  std::string output_path;
  // sigma = 0 collapses sigma_n^2 = 10 sigma / sqrt(n); noiseless runs must
  // supply the factor std-dev explicitly.
  std::optional<double> sigma_n_override;
  double lambda = 1.0;
  int max_outer = 50;

  void validate() const;
  static ExperimentConfig from_json(const std::string& json_text);
  std::string to_json() const;
};

struct GeneratedInstance {
  Matrix M;
  Matrix M_R;
  Matrix M_S;
};

// Deterministic per (seed, trial): each component draws from its own
// substream so the pieces are independent.
GeneratedInstance generate_instance(const ExperimentConfig& config, int trial);

// gamma1 = 10 ||M_R||, gamma2 = 10 ||M_S||_inf; degenerate inputs fall back
// to 10 and are flagged by the caller-visible bool.
struct BoxRadii {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  bool flagged = false;
};
BoxRadii box_radii(const Matrix& M_R, const Matrix& M_S);

// (||X_hat - M_R||_F / n, ||Y_hat - M_S||_F / n).
std::pair<double, double> rms_errors(const Matrix& X_hat, const Matrix& Y_hat,
                                     const Matrix& M_R, const Matrix& M_S,
                                     int n);

struct TrialRecord {
  int trial_index = 0;
  double rms_x = 0.0;
  double rms_y = 0.0;
  int rank_hat = 0;
  int sparsity_hat = 0;
  int true_rank = 0;
  int true_sparsity = 0;
  int outer_iters = 0;
  double wall_time_seconds = 0.0;
  std::string status = "ok";
};

// One row per trial plus an averages row (over trials with status ok),
// written to config.output_path when nonempty.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config);

std::string trials_to_csv(const std::vector<TrialRecord>& records,
                          const ExperimentConfig& config);

}  // namespace epsk

#endif  // EPSK_EXPERIMENTS_HPP

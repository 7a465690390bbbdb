// Command-line front end; talks to the library exclusively through the C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "epsk.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitBadInput = 2;

int exit_code_for(epsk_status status) {
  switch (status) {
    case EPSK_OK:
      return kExitOk;
    case EPSK_ERR_NULL_ARGUMENT:
    case EPSK_ERR_INVALID_PARAMETER:
    case EPSK_ERR_VALIDATION:
    case EPSK_ERR_DOMAIN:
    case EPSK_ERR_DIMENSION:
    case EPSK_ERR_IO:
      return kExitBadInput;
    default:
      return kExitCheckFailure;
  }
}

int report_failure(epsk_status status, const std::string& where) {
  std::cerr << "error: " << where << ": " << epsk_last_error() << "\n";
  return exit_code_for(status);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void set_threads(int threads) {
  if (threads <= 0) return;
  const std::string v = std::to_string(threads);
  setenv("OPENBLAS_NUM_THREADS", v.c_str(), 1);
  setenv("OMP_NUM_THREADS", v.c_str(), 1);
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(read_text_file(path));
}

// Stock generator when the config carries none.
nlohmann::json phi_json_from_config(const nlohmann::json& cfg) {
  if (cfg.contains("phi")) return cfg.at("phi");
  return {{"kind", "scad"}, {"params", {{"a", 3.7}}}};
}

int write_handle(epsk_matrix* m, const std::string& path) {
  if (!m || path.empty()) return kExitOk;
  const epsk_status st = epsk_matrix_write(m, path.c_str());
  if (st != EPSK_OK) return report_failure(st, "writing " + path);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_generate(const std::string& config_path, std::uint64_t seed,
                 bool seed_set, int trial, const std::string& output) {
  nlohmann::json cfg = load_config(config_path);
  if (seed_set) cfg["seed"] = seed;
  cfg.erase("output");  // the experiment CSV path is not meaningful here
  const std::string cfg_text = cfg.dump();

  epsk_matrix* M = nullptr;
  epsk_matrix* MR = nullptr;
  epsk_matrix* MS = nullptr;
  const epsk_status st = epsk_generate(cfg_text.c_str(), trial, &M, &MR, &MS);
  if (st != EPSK_OK) return report_failure(st, "generate");

  const std::string prefix = output.empty() ? "instance" : output;
  int rc = write_handle(M, prefix + "_M.csv");
  if (rc == kExitOk) rc = write_handle(MR, prefix + "_low_rank.csv");
  if (rc == kExitOk) rc = write_handle(MS, prefix + "_sparse.csv");
  epsk_matrix_free(M);
  epsk_matrix_free(MR);
  epsk_matrix_free(MS);
  return rc;
}

int cmd_solve(const std::string& config_path, const std::string& input,
              const std::string& output) {
  nlohmann::json cfg = load_config(config_path);
  const std::string phi_text = phi_json_from_config(cfg).dump();
  cfg.erase("phi");
  const std::string opts_text = cfg.dump();

  epsk_matrix* M = nullptr;
  epsk_status st = epsk_matrix_read(input.c_str(), &M);
  if (st != EPSK_OK) return report_failure(st, "reading " + input);

  epsk_phi* phi = nullptr;
  st = epsk_phi_create(phi_text.c_str(), &phi);
  if (st != EPSK_OK) {
    epsk_matrix_free(M);
    return report_failure(st, "generator config");
  }

  epsk_matrix* X = nullptr;
  epsk_matrix* Y = nullptr;
  char* report = nullptr;
  st = epsk_solve(M, opts_text.c_str(), phi, &X, &Y, &report);
  epsk_matrix_free(M);
  epsk_phi_free(phi);
  if (st != EPSK_OK) return report_failure(st, "solve");

  int rc = kExitOk;
  if (output.empty()) {
    std::cout << report << "\n";
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot open " << output << "\n";
      rc = kExitBadInput;
    } else {
      out << report << "\n";
      std::cout << "wrote " << output << "\n";
      const std::string stem =
          output.size() > 5 && output.ends_with(".json")
              ? output.substr(0, output.size() - 5)
              : output;
      if (rc == kExitOk) rc = write_handle(X, stem + "_low_rank.csv");
      if (rc == kExitOk) rc = write_handle(Y, stem + "_sparse.csv");
    }
  }
  epsk_string_free(report);
  epsk_matrix_free(X);
  epsk_matrix_free(Y);
  return rc;
}

int cmd_experiment(const std::string& config_path, std::uint64_t seed,
                   bool seed_set, const std::string& output) {
  nlohmann::json cfg = load_config(config_path);
  if (seed_set) cfg["seed"] = seed;
  if (!output.empty()) cfg["output"] = output;
  const std::string cfg_text = cfg.dump();

  char* csv = nullptr;
  const epsk_status st = epsk_experiment(cfg_text.c_str(), &csv);
  if (st != EPSK_OK) return report_failure(st, "experiment");
  if (output.empty()) {
    std::cout << csv;
  } else {
    std::cout << "wrote " << output << "\n";
  }
  epsk_string_free(csv);
  return kExitOk;
}

int cmd_verify(const std::string& level, const std::string& output) {
  char* report = nullptr;
  int all_passed = 0;
  const epsk_status st =
      epsk_verify(level == "full" ? 1 : 0, &report, &all_passed);
  if (st != EPSK_OK) return report_failure(st, "verify");

  const nlohmann::json j = nlohmann::json::parse(report);
  for (const auto& c : j.at("checks")) {
    std::cout << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << "  "
              << c.at("name").get<std::string>() << "  (deviation "
              << c.at("deviation").get<double>() << ")";
    if (c.contains("detail"))
      std::cout << "  -- " << c.at("detail").get<std::string>();
    std::cout << "\n";
  }
  std::cout << (all_passed ? "all checks passed" : "CHECKS FAILED") << "\n";

  if (!output.empty()) {
    std::ofstream out(output);
    if (out) {
      out << report << "\n";
    } else {
      std::cerr << "error: cannot open " << output << "\n";
      epsk_string_free(report);
      return kExitBadInput;
    }
  }
  epsk_string_free(report);
  return all_passed ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Low-rank plus sparse decomposition via multi-stage convex relaxation"};
  app.require_subcommand(1);

  std::string config_path, output, level = "fast";
  std::uint64_t seed = 0;
  int threads = 1;
  int trial = 0;

  app.add_option("--threads", threads, "BLAS thread count (default 1)");

  auto* gen = app.add_subcommand(
      "generate", "Generate a synthetic low-rank + sparse instance");
  auto* gen_seed = gen->add_option("--seed", seed, "Seed override");
  gen->add_option("--config", config_path, "Config JSON path");
  gen->add_option("--trial", trial, "Trial index (default 0)");
  gen->add_option("--output", output, "Output file prefix");

  auto* solve = app.add_subcommand("solve", "Decompose one matrix");
  solve->add_option("--config", config_path,
                    "Config JSON (phi + solver options)");
  std::string input;
  solve->add_option("--input", input, "Input matrix (.csv or binary)")
      ->required();
  solve->add_option("--output", output, "Report JSON path");

  auto* exp = app.add_subcommand("experiment", "Run seeded trials, emit CSV");
  exp->add_option("--config", config_path, "Config JSON path");
  auto* exp_seed = exp->add_option("--seed", seed, "Seed override");
  exp->add_option("--output", output, "CSV output path");

  auto* ver = app.add_subcommand("verify", "Run the self-check suite");
  ver->add_option("--level", level, "fast|full")
      ->check(CLI::IsMember({"fast", "full"}));
  ver->add_option("--output", output, "JSON report path");

  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  try {
    if (gen->parsed())
      return cmd_generate(config_path, seed, gen_seed->count() > 0, trial,
                          output);
    if (solve->parsed()) return cmd_solve(config_path, input, output);
    if (exp->parsed())
      return cmd_experiment(config_path, seed, exp_seed->count() > 0, output);
    if (ver->parsed()) return cmd_verify(level, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

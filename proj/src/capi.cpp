#include "epsk.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <utility>

#include <json.hpp>

#include "epsk/errors.hpp"
#include "epsk/experiments.hpp"
#include "epsk/matrix_io.hpp"
#include "epsk/phi.hpp"
#include "epsk/solver.hpp"
#include "epsk/verify.hpp"

struct epsk_phi {
  epsk::PhiSpec spec;
};

struct epsk_matrix {
  epsk::Matrix m;
};

namespace {

thread_local std::string g_last_error;

epsk_status fail(epsk_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
epsk_status guarded(Fn&& fn) {
  try {
    fn();
    return EPSK_OK;
  } catch (const epsk::InvalidParameter& e) {
    return fail(EPSK_ERR_INVALID_PARAMETER, e.what());
  } catch (const epsk::ValidationFailure& e) {
    return fail(EPSK_ERR_VALIDATION, e.what());
  } catch (const epsk::DomainError& e) {
    return fail(EPSK_ERR_DOMAIN, e.what());
  } catch (const epsk::DimensionMismatch& e) {
    return fail(EPSK_ERR_DIMENSION, e.what());
  } catch (const epsk::Infeasible& e) {
    return fail(EPSK_ERR_INFEASIBLE, e.what());
  } catch (const epsk::SvdFailure& e) {
    return fail(EPSK_ERR_SVD, e.what());
  } catch (const epsk::IoError& e) {
    return fail(EPSK_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EPSK_ERR_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return fail(EPSK_ERR_UNKNOWN, e.what());
  } catch (...) {
    return fail(EPSK_ERR_UNKNOWN, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

epsk_status require(bool ok, const char* what) {
  return ok ? EPSK_OK : fail(EPSK_ERR_NULL_ARGUMENT, what);
}

}  // namespace

extern "C" {

const char* epsk_last_error(void) { return g_last_error.c_str(); }

void epsk_string_free(char* s) { delete[] s; }

epsk_status epsk_phi_create(const char* json, epsk_phi** out) {
  if (epsk_status s = require(json && out, "epsk_phi_create: null argument"))
    return s;
  *out = nullptr;
  return guarded([&] { *out = new epsk_phi{epsk::phi_from_json(json)}; });
}

epsk_status epsk_phi_eval(const epsk_phi* phi, double t, double* out) {
  if (epsk_status s = require(phi && out, "epsk_phi_eval: null argument"))
    return s;
  return guarded([&] { *out = epsk::phi_eval(phi->spec, t); });
}

epsk_status epsk_phi_conjugate(const epsk_phi* phi, double s, double* out) {
  if (epsk_status st = require(phi && out, "epsk_phi_conjugate: null argument"))
    return st;
  return guarded([&] { *out = epsk::psi_star(phi->spec, s); });
}

epsk_status epsk_phi_conjugate_subgrad(const epsk_phi* phi, double s,
                                       double* out) {
  if (epsk_status st =
          require(phi && out, "epsk_phi_conjugate_subgrad: null argument"))
    return st;
  return guarded([&] { *out = epsk::psi_star_subgrad(phi->spec, s); });
}

epsk_status epsk_phi_info(const epsk_phi* phi, char** json_out) {
  if (epsk_status s = require(phi && json_out, "epsk_phi_info: null argument"))
    return s;
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(epsk::phi_to_json(phi->spec));
    j["t_star"] = phi->spec.t_star;
    j["d_minus_1"] = phi->spec.d_minus_1;
    j["t_zero"] = phi->spec.t_zero;
    *json_out = dup_string(j.dump(2));
  });
}

void epsk_phi_free(epsk_phi* phi) { delete phi; }

epsk_status epsk_matrix_create(int64_t rows, int64_t cols,
                               const double* row_major, epsk_matrix** out) {
  if (epsk_status s =
          require(row_major && out, "epsk_matrix_create: null argument"))
    return s;
  if (rows <= 0 || cols <= 0)
    return fail(EPSK_ERR_INVALID_PARAMETER,
                "epsk_matrix_create: dimensions must be positive");
  *out = nullptr;
  return guarded([&] {
    auto* h = new epsk_matrix;
    h->m.resize(rows, cols);
    for (int64_t i = 0; i < rows; ++i)
      for (int64_t j = 0; j < cols; ++j) h->m(i, j) = row_major[i * cols + j];
    *out = h;
  });
}

epsk_status epsk_matrix_read(const char* path, epsk_matrix** out) {
  if (epsk_status s = require(path && out, "epsk_matrix_read: null argument"))
    return s;
  *out = nullptr;
  return guarded([&] { *out = new epsk_matrix{epsk::read_matrix(path)}; });
}

epsk_status epsk_matrix_write(const epsk_matrix* m, const char* path) {
  if (epsk_status s = require(m && path, "epsk_matrix_write: null argument"))
    return s;
  return guarded([&] { epsk::write_matrix(m->m, path); });
}

epsk_status epsk_matrix_dims(const epsk_matrix* m, int64_t* rows,
                             int64_t* cols) {
  if (epsk_status s =
          require(m && rows && cols, "epsk_matrix_dims: null argument"))
    return s;
  *rows = m->m.rows();
  *cols = m->m.cols();
  return EPSK_OK;
}

epsk_status epsk_matrix_copy_data(const epsk_matrix* m, double* buffer) {
  if (epsk_status s =
          require(m && buffer, "epsk_matrix_copy_data: null argument"))
    return s;
  const int64_t rows = m->m.rows(), cols = m->m.cols();
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) buffer[i * cols + j] = m->m(i, j);
  return EPSK_OK;
}

void epsk_matrix_free(epsk_matrix* m) { delete m; }

epsk_status epsk_generate(const char* config_json, int trial,
                          epsk_matrix** M_out, epsk_matrix** low_rank_out,
                          epsk_matrix** sparse_out) {
  if (epsk_status s = require(config_json, "epsk_generate: null config"))
    return s;
  return guarded([&] {
    const epsk::ExperimentConfig cfg =
        epsk::ExperimentConfig::from_json(config_json);
    epsk::GeneratedInstance inst = epsk::generate_instance(cfg, trial);
    if (M_out) *M_out = new epsk_matrix{std::move(inst.M)};
    if (low_rank_out) *low_rank_out = new epsk_matrix{std::move(inst.M_R)};
    if (sparse_out) *sparse_out = new epsk_matrix{std::move(inst.M_S)};
  });
}

epsk_status epsk_solve(const epsk_matrix* M, const char* options_json,
                       const epsk_phi* phi, epsk_matrix** low_rank_out,
                       epsk_matrix** sparse_out, char** report_json_out) {
  if (epsk_status s = require(M && phi, "epsk_solve: null argument")) return s;
  return guarded([&] {
    nlohmann::json opts = nlohmann::json::object();
    if (options_json && options_json[0] != '\0') {
      try {
        opts = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::exception& e) {
        throw epsk::InvalidParameter(std::string("solve options: bad JSON: ") +
                                     e.what());
      }
    }
    epsk::DecompositionInstance inst;
    inst.M = M->m;
    const double op_norm = epsk::svd(inst.M).sigma(0);
    const double sup_norm = inst.M.cwiseAbs().maxCoeff();
    inst.gamma1 =
        opts.value("gamma1", op_norm > 0.0 ? 10.0 * op_norm : 10.0);
    inst.gamma2 =
        opts.value("gamma2", sup_norm > 0.0 ? 10.0 * sup_norm : 10.0);
    inst.lambda = opts.value("lambda", 1.0);
    inst.nu = opts.value("nu", 1.0);
    epsk::Schedule sched =
        epsk::default_schedule(int(std::max(M->m.rows(), M->m.cols())));
    sched.max_outer = opts.value("max_outer", sched.max_outer);
    epsk::SolverOptions sopts;
    sopts.inner_tol = opts.value("inner_tol", sopts.inner_tol);
    sopts.inner_max = opts.value("inner_max", sopts.inner_max);

    epsk::SolverReport rep = epsk::gep_mscra(inst, phi->spec, sched, sopts);
    if (report_json_out) *report_json_out = dup_string(rep.to_json());
    if (low_rank_out) *low_rank_out = new epsk_matrix{std::move(rep.X_hat)};
    if (sparse_out) *sparse_out = new epsk_matrix{std::move(rep.Y_hat)};
  });
}

epsk_status epsk_experiment(const char* config_json, char** csv_out) {
  if (epsk_status s = require(config_json, "epsk_experiment: null config"))
    return s;
  return guarded([&] {
    const epsk::ExperimentConfig cfg =
        epsk::ExperimentConfig::from_json(config_json);
    const std::vector<epsk::TrialRecord> recs = epsk::run_trials(cfg);
    if (csv_out) *csv_out = dup_string(epsk::trials_to_csv(recs, cfg));
  });
}

epsk_status epsk_verify(int full, char** report_json_out,
                        int* all_passed_out) {
  return guarded([&] {
    const epsk::VerifyReport report = epsk::verify_suite(
        full ? epsk::VerifyLevel::Full : epsk::VerifyLevel::Fast);
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    if (all_passed_out) *all_passed_out = report.all_passed() ? 1 : 0;
  });
}

}  // extern "C"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "epsk.h"

TEST_CASE("phi lifecycle, evaluation, and info") {
  epsk_phi* phi = nullptr;
  REQUIRE(epsk_phi_create(R"({"kind":"scad","params":{"a":3.7}})", &phi) ==
          EPSK_OK);
  REQUIRE(phi != nullptr);

  double v = -1.0;
  CHECK(epsk_phi_eval(phi, 1.0, &v) == EPSK_OK);
  CHECK(std::abs(v - 1.0) <= 1e-14);

  CHECK(epsk_phi_conjugate(phi, 0.4, &v) == EPSK_OK);
  CHECK(std::abs(v) <= 1e-14);  // below the kink the conjugate vanishes

  CHECK(epsk_phi_conjugate_subgrad(phi, 5.0, &v) == EPSK_OK);
  CHECK(v == 1.0);

  char* info = nullptr;
  CHECK(epsk_phi_info(phi, &info) == EPSK_OK);
  REQUIRE(info != nullptr);
  const std::string text(info);
  CHECK(text.find("scad") != std::string::npos);
  CHECK(text.find("t_star") != std::string::npos);
  epsk_string_free(info);
  epsk_phi_free(phi);
}

TEST_CASE("null arguments and bad JSON set statuses and messages") {
  CHECK(epsk_phi_create(nullptr, nullptr) == EPSK_ERR_NULL_ARGUMENT);
  epsk_phi* phi = nullptr;
  CHECK(epsk_phi_create("{oops", &phi) == EPSK_ERR_INVALID_PARAMETER);
  CHECK(phi == nullptr);
  CHECK(std::strlen(epsk_last_error()) > 0);
  CHECK(epsk_phi_create(R"({"kind":"scad","params":{"a":0.5}})", &phi) ==
        EPSK_ERR_INVALID_PARAMETER);

  REQUIRE(epsk_phi_create(R"({"kind":"linear"})", &phi) == EPSK_OK);
  double v;
  CHECK(epsk_phi_eval(nullptr, 0.5, &v) == EPSK_ERR_NULL_ARGUMENT);
  CHECK(epsk_phi_eval(phi, 0.5, nullptr) == EPSK_ERR_NULL_ARGUMENT);
  // Out-of-domain evaluation on the restricted families.
  epsk_phi* lg = nullptr;
  REQUIRE(epsk_phi_create(R"({"kind":"log","params":{"eps":0.5}})", &lg) ==
          EPSK_OK);
  CHECK(epsk_phi_eval(lg, 1.7, &v) == EPSK_ERR_DOMAIN);
  epsk_phi_free(lg);
  epsk_phi_free(phi);
  epsk_phi_free(nullptr);  // no-op
}

TEST_CASE("matrix round trip through memory and files") {
  const std::vector<double> data = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  epsk_matrix* m = nullptr;
  REQUIRE(epsk_matrix_create(2, 3, data.data(), &m) == EPSK_OK);
  int64_t rows = 0, cols = 0;
  CHECK(epsk_matrix_dims(m, &rows, &cols) == EPSK_OK);
  CHECK(rows == 2);
  CHECK(cols == 3);
  std::vector<double> back(6, 0.0);
  CHECK(epsk_matrix_copy_data(m, back.data()) == EPSK_OK);
  CHECK(back == data);

  const char* path = "/tmp/epsk_capi_roundtrip.csv";
  CHECK(epsk_matrix_write(m, path) == EPSK_OK);
  epsk_matrix* m2 = nullptr;
  REQUIRE(epsk_matrix_read(path, &m2) == EPSK_OK);
  std::vector<double> back2(6, 0.0);
  CHECK(epsk_matrix_copy_data(m2, back2.data()) == EPSK_OK);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(back2[i] - data[i]) <= 1e-12);
  epsk_matrix_free(m2);
  epsk_matrix_free(m);

  epsk_matrix* missing = nullptr;
  CHECK(epsk_matrix_read("/tmp/epsk_does_not_exist.csv", &missing) ==
        EPSK_ERR_IO);
  CHECK(epsk_matrix_create(0, 3, data.data(), &m) ==
        EPSK_ERR_INVALID_PARAMETER);
}

TEST_CASE("generate is deterministic and components decompose") {
  const char* cfg =
      R"({"n": 20, "r": 2, "rho_s": 0.1, "sigma": 0.1, "seed": 9})";
  epsk_matrix *M = nullptr, *L = nullptr, *S = nullptr;
  REQUIRE(epsk_generate(cfg, 0, &M, &L, &S) == EPSK_OK);
  epsk_matrix* M2 = nullptr;
  REQUIRE(epsk_generate(cfg, 0, &M2, nullptr, nullptr) == EPSK_OK);
  std::vector<double> a(400), b(400);
  CHECK(epsk_matrix_copy_data(M, a.data()) == EPSK_OK);
  CHECK(epsk_matrix_copy_data(M2, b.data()) == EPSK_OK);
  CHECK(a == b);
  epsk_matrix_free(M);
  epsk_matrix_free(M2);
  epsk_matrix_free(L);
  epsk_matrix_free(S);

  CHECK(epsk_generate(R"({"n": -5})", 0, &M, nullptr, nullptr) ==
        EPSK_ERR_INVALID_PARAMETER);
  // All outputs skipped: just validates the config.
  CHECK(epsk_generate(cfg, 0, nullptr, nullptr, nullptr) == EPSK_OK);
  CHECK(epsk_generate(nullptr, 0, &M, nullptr, nullptr) ==
        EPSK_ERR_NULL_ARGUMENT);
}

TEST_CASE("solve smoke test on a planted instance") {
  const char* cfg =
      R"({"n": 24, "r": 2, "rho_s": 0.05, "sigma": 0.01, "seed": 21})";
  epsk_matrix *M = nullptr, *L = nullptr, *S = nullptr;
  REQUIRE(epsk_generate(cfg, 0, &M, &L, &S) == EPSK_OK);

  epsk_phi* phi = nullptr;
  REQUIRE(epsk_phi_create(R"({"kind":"scad","params":{"a":3.7}})", &phi) ==
          EPSK_OK);

  epsk_matrix *X = nullptr, *Y = nullptr;
  char* report = nullptr;
  REQUIRE(epsk_solve(M, "{}", phi, &X, &Y, &report) == EPSK_OK);
  REQUIRE(report != nullptr);
  const std::string rep(report);
  CHECK(rep.find("final_rank") != std::string::npos);
  CHECK(rep.find("outer_iters") != std::string::npos);
  int64_t rows = 0, cols = 0;
  CHECK(epsk_matrix_dims(X, &rows, &cols) == EPSK_OK);
  CHECK(rows == 24);
  CHECK(cols == 24);
  epsk_string_free(report);
  epsk_matrix_free(X);
  epsk_matrix_free(Y);

  CHECK(epsk_solve(nullptr, "{}", phi, &X, &Y, nullptr) ==
        EPSK_ERR_NULL_ARGUMENT);
  CHECK(epsk_solve(M, "{not json", phi, &X, &Y, nullptr) ==
        EPSK_ERR_INVALID_PARAMETER);
  epsk_phi_free(phi);
  epsk_matrix_free(M);
  epsk_matrix_free(L);
  epsk_matrix_free(S);
}

TEST_CASE("experiment driver returns a CSV") {
  const char* cfg =
      R"({"n": 20, "r": 2, "rho_s": 0.05, "sigma": 0.1, "trials": 1,
          "seed": 33})";
  char* csv = nullptr;
  REQUIRE(epsk_experiment(cfg, &csv) == EPSK_OK);
  REQUIRE(csv != nullptr);
  const std::string text(csv);
  CHECK(text.rfind("trial,", 0) == 0);
  CHECK(text.find("\navg,") != std::string::npos);
  epsk_string_free(csv);
}

TEST_CASE("fast verify passes through the C boundary") {
  char* report = nullptr;
  int ok = 0;
  REQUIRE(epsk_verify(0, &report, &ok) == EPSK_OK);
  REQUIRE(report != nullptr);
  CHECK(ok == 1);
  CHECK(std::string(report).find("checks") != std::string::npos);
  epsk_string_free(report);
}

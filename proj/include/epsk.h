#ifndef EPSK_H
#define EPSK_H

/* C interface to the surrogate-penalty / low-rank-plus-sparse library.
 *
 * All functions return an epsk_status; EPSK_OK means success. On failure a
 * human-readable message is stored per thread and readable through
 * epsk_last_error(). Strings returned through char** are heap-allocated and
 * must be released with epsk_string_free(); handles with their _free().
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  EPSK_OK = 0,
  EPSK_ERR_NULL_ARGUMENT = 1,
  EPSK_ERR_INVALID_PARAMETER = 2,
  EPSK_ERR_VALIDATION = 3,
  EPSK_ERR_DOMAIN = 4,
  EPSK_ERR_DIMENSION = 5,
  EPSK_ERR_INFEASIBLE = 6,
  EPSK_ERR_SVD = 7,
  EPSK_ERR_IO = 8,
  EPSK_ERR_UNKNOWN = 9
} epsk_status;

typedef struct epsk_phi epsk_phi;
typedef struct epsk_matrix epsk_matrix;

/* Last error message on the calling thread ("" when none). The pointer is
 * owned by the library and valid until the next failing call on the thread. */
const char* epsk_last_error(void);

void epsk_string_free(char* s);

/* --- generator family ---------------------------------------------------
 * JSON shape: {"kind": "linear"|"powerq"|"log"|"arctan"|"scad",
 *              "params": {"eps": .., "q": .., "a": ..}} (params per kind). */
epsk_status epsk_phi_create(const char* json, epsk_phi** out);
epsk_status epsk_phi_eval(const epsk_phi* phi, double t, double* out);
/* Conjugate of the [0,1]-restricted generator, and the smallest maximizer
 * (a subgradient of the conjugate, always in [0,1]). */
epsk_status epsk_phi_conjugate(const epsk_phi* phi, double s, double* out);
epsk_status epsk_phi_conjugate_subgrad(const epsk_phi* phi, double s,
                                       double* out);
/* Kind, parameters, and cached constants (t_star, left derivative at 1,
 * t_zero) as JSON. */
epsk_status epsk_phi_info(const epsk_phi* phi, char** json_out);
void epsk_phi_free(epsk_phi* phi);

/* --- matrices -------------------------------------------------------- */
epsk_status epsk_matrix_create(int64_t rows, int64_t cols,
                               const double* row_major, epsk_matrix** out);
/* ".csv" -> text format ("rows,cols" header line), else binary. */
epsk_status epsk_matrix_read(const char* path, epsk_matrix** out);
epsk_status epsk_matrix_write(const epsk_matrix* m, const char* path);
epsk_status epsk_matrix_dims(const epsk_matrix* m, int64_t* rows,
                             int64_t* cols);
/* Copies rows*cols doubles, row-major, into caller-owned buffer. */
epsk_status epsk_matrix_copy_data(const epsk_matrix* m, double* buffer);
void epsk_matrix_free(epsk_matrix* m);

/* --- synthetic instances ----------------------------------------------
 * config JSON: {"n", "r", "rho_s", "sigma", "trials", "seed", "sigma_n",
 * "lambda", "max_outer", "phi", "output"} (all optional except the
 * constraint sigma > 0 or sigma_n present). Outputs may be NULL to skip. */
epsk_status epsk_generate(const char* config_json, int trial,
                          epsk_matrix** M_out, epsk_matrix** low_rank_out,
                          epsk_matrix** sparse_out);

/* --- decomposition solver ----------------------------------------------
 * options JSON (all optional): {"gamma1", "gamma2", "lambda", "nu",
 * "max_outer", "inner_tol", "inner_max"}. gamma1/gamma2 default to
 * 10 ||M|| and 10 ||M||_inf. Any output may be NULL to skip. */
epsk_status epsk_solve(const epsk_matrix* M, const char* options_json,
                       const epsk_phi* phi, epsk_matrix** low_rank_out,
                       epsk_matrix** sparse_out, char** report_json_out);

/* --- experiment driver: per-trial CSV plus averages row ---------------- */
epsk_status epsk_experiment(const char* config_json, char** csv_out);

/* --- self checks: full != 0 adds the slow solver checks ----------------- */
epsk_status epsk_verify(int full, char** report_json_out, int* all_passed_out);

#ifdef __cplusplus
}
#endif

#endif /* EPSK_H */

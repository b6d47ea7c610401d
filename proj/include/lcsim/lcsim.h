#ifndef LCSIM_LCSIM_H
#define LCSIM_LCSIM_H

/* C interface to the liquid-crystal Couette flow simulator.
 *
 * Every function returns an lcsim_status. On failure a message is available
 * from lcsim_last_error() until the next call on the same thread. Handles are
 * opaque and must be released with the matching _free function. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(LCSIM_BUILDING_LIBRARY)
#    define LCSIM_API __declspec(dllexport)
#  else
#    define LCSIM_API __declspec(dllimport)
#  endif
#else
#  define LCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcsim_status {
  LCSIM_OK = 0,
  LCSIM_ERR_VALIDATION = 2,
  LCSIM_BLOWUP = 3,
  LCSIM_ERR_IO = 4,
  LCSIM_ERR_FORMAT = 5,
  LCSIM_ERR_NUMERICAL = 6,
  LCSIM_ERR_INTERNAL = 7,
  LCSIM_ERR_NULL_ARG = 8,
  LCSIM_ERR_BUFFER_TOO_SMALL = 9
} lcsim_status;

typedef enum lcsim_verdict {
  LCSIM_HEALTHY = 0,
  LCSIM_WARNING = 1,
  LCSIM_BLOWN_UP = 2
} lcsim_verdict;

typedef struct lcsim_config lcsim_config;
typedef struct lcsim_sim lcsim_sim;

typedef struct lcsim_run_summary {
  lcsim_verdict verdict;
  lcsim_verdict worst_verdict;
  long steps;
  double t_final;          /* rescaled time */
  double t_final_original; /* t_final / A */
  double initial_grad_n;
  double peak_grad_n;
  double t_of_peak;
  double peak_Y_d13;
  double E_final;
  double K;
  int e_le_2K_throughout;
  int x_terms_monotone;
  double max_sphere_deviation;
  double total_remap_loss;
} lcsim_run_summary;

typedef struct lcsim_diag_row {
  double t;
  double Y_d13, Y_hess_d13, Y_omega;
  double X_d13[4], X_hess[4], X_omega[4];
  double E_t;
  double sup_grad_n;
  double max_div_u;
  double min_abs_n;
  double remap_loss;
  lcsim_verdict verdict;
} lcsim_diag_row;

typedef struct lcsim_data_params {
  double theta;
  double lambda;
  double N;
  double eps;
  double m;
  double delta;
  double C_cal;
} lcsim_data_params;

typedef struct lcsim_linear_report {
  double exponent_k;
  double exponent_nu;
  double prefactor_c;
  double damping_slope;
  double solver_max_rel_error;
  double solver_seconds;
  int dissipation_ok;
  int damping_ok;
  int solver_ok;
} lcsim_linear_report;

typedef struct lcsim_checkpoint_info {
  unsigned version;
  unsigned nx;
  unsigned ny;
  double t;
  double shear_time;
} lcsim_checkpoint_info;

LCSIM_API const char* lcsim_version(void);
LCSIM_API const char* lcsim_last_error(void);
LCSIM_API const char* lcsim_verdict_name(lcsim_verdict v);

/* Configuration */
LCSIM_API lcsim_status lcsim_config_load(const char* path, lcsim_config** out);
LCSIM_API lcsim_status lcsim_config_parse(const char* text, lcsim_config** out);
/* Sets one dotted key; the whole configuration is re-validated. */
LCSIM_API lcsim_status lcsim_config_set(lcsim_config* cfg, const char* key, const char* value);
/* Writes the key = value form. *needed receives the size including the NUL. */
LCSIM_API lcsim_status lcsim_config_serialize(const lcsim_config* cfg, char* buf, size_t cap,
                                              size_t* needed);
LCSIM_API void lcsim_config_free(lcsim_config* cfg);

/* Whole runs. lcsim_run and lcsim_resume return LCSIM_BLOWUP (with the summary
 * filled in) when the run ended in blow-up. summary may be NULL. */
LCSIM_API lcsim_status lcsim_run(const lcsim_config* cfg, const char* out_dir,
                                 lcsim_run_summary* summary);
LCSIM_API lcsim_status lcsim_resume(const char* checkpoint_path, double t_end,
                                    lcsim_run_summary* summary);
/* lambdas may be NULL with n_lambdas = 0 to use the configured value. */
LCSIM_API lcsim_status lcsim_sweep(const lcsim_config* cfg, const double* amplitudes,
                                   size_t n_amplitudes, const double* lambdas, size_t n_lambdas,
                                   int jobs, const char* out_dir);
LCSIM_API lcsim_status lcsim_linear_verify(const char* out_dir, lcsim_linear_report* report);
LCSIM_API lcsim_status lcsim_data_report(const lcsim_data_params* params, char* json_buf,
                                         size_t cap, size_t* needed);
LCSIM_API void lcsim_data_params_default(lcsim_data_params* params);

/* Step-by-step control */
LCSIM_API lcsim_status lcsim_sim_create(const lcsim_config* cfg, lcsim_sim** out);
/* Integrates to t_end. Returns LCSIM_BLOWUP once the run has blown up. */
LCSIM_API lcsim_status lcsim_sim_advance(lcsim_sim* sim, double t_end);
LCSIM_API lcsim_status lcsim_sim_time(const lcsim_sim* sim, double* t);
/* Latest diagnostics row (the t = 0 row before any advance). */
LCSIM_API lcsim_status lcsim_sim_last_row(lcsim_sim* sim, lcsim_diag_row* row);
LCSIM_API lcsim_status lcsim_sim_save_checkpoint(const lcsim_sim* sim, const char* path);
LCSIM_API void lcsim_sim_free(lcsim_sim* sim);

LCSIM_API lcsim_status lcsim_checkpoint_info_read(const char* path, lcsim_checkpoint_info* info);

#ifdef __cplusplus
}
#endif

#endif

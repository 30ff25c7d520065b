/* C interface to the mzisense library. Every call returns an mzi_status;
 * on failure mzi_last_error() holds a message for the calling thread. */
#ifndef MZI_MZI_H
#define MZI_MZI_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef MZI_BUILDING_LIBRARY
#    define MZI_API __declspec(dllexport)
#  else
#    define MZI_API __declspec(dllimport)
#  endif
#else
#  define MZI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mzi_status {
  MZI_OK = 0,
  MZI_INVALID_ARGUMENT = 1,
  MZI_SOLVER_FAILURE = 2,
  MZI_INTEGRATION_FAILURE = 3,
  MZI_UNDEFINED_CORRELATION = 4,
  MZI_UNSUPPORTED_REGIME = 5,
  MZI_INVALID_STEP = 6,
  MZI_PARSE_ERROR = 7,
  MZI_IO_ERROR = 8,
  MZI_INTERNAL_ERROR = 99
} mzi_status;

typedef enum mzi_command {
  MZI_CMD_STEADY = 0, /* sweep over the configured axes (or a single point) */
  MZI_CMD_G2MAP = 1,  /* g2(0) over delta x phi */
  MZI_CMD_G2TAU = 2,
  MZI_CMD_OPTIMAL = 3,
  MZI_CMD_GYRO = 4,
  MZI_CMD_THERMO = 5
} mzi_command;

typedef enum mzi_port { MZI_PORT_MAIN = 0, MZI_PORT_COMPLEMENT = 1 } mzi_port;

/* Parameters in units of kappa; delta2 = delta1 + delta. */
typedef struct mzi_params {
  double delta1;
  double delta;
  double u;
  double eps;
  double kappa1;
  double kappa2;
  double phi;
} mzi_params;

typedef struct mzi_diagnostics {
  int n_max;
  double residual;
  double trace_error;
  double hermiticity_error;
  double min_eigenvalue;
  double boundary_population;
} mzi_diagnostics;

typedef struct mzi_config mzi_config;
typedef struct mzi_table mzi_table;
typedef struct mzi_report mzi_report;
typedef struct mzi_solution mzi_solution;

MZI_API const char* mzi_version(void);
MZI_API const char* mzi_status_name(mzi_status status);
/* Message of the last failed call on this thread, "" if none. */
MZI_API const char* mzi_last_error(void);

MZI_API void mzi_params_default(mzi_params* out);

/* Configuration (key = value text, see README). */
MZI_API mzi_status mzi_config_parse(const char* text, mzi_config** out);
MZI_API mzi_status mzi_config_load(const char* path, mzi_config** out);
MZI_API mzi_status mzi_config_default(mzi_config** out);
/* "section.key", value as it would appear in a file. */
MZI_API mzi_status mzi_config_set(mzi_config* cfg, const char* dotted_key, const char* value);
MZI_API void mzi_config_free(mzi_config* cfg);

MZI_API mzi_status mzi_run(const mzi_config* cfg, mzi_command command, mzi_table** out);

MZI_API size_t mzi_table_rows(const mzi_table* t);
MZI_API size_t mzi_table_columns(const mzi_table* t);
MZI_API const char* mzi_table_column_name(const mzi_table* t, size_t column);
/* Numeric cell; the status column is available through mzi_table_status. */
MZI_API mzi_status mzi_table_value(const mzi_table* t, size_t row, size_t column, double* out);
MZI_API const char* mzi_table_status(const mzi_table* t, size_t row);
/* path "-" writes to stdout. */
MZI_API mzi_status mzi_table_write_csv(const mzi_table* t, const char* path);
MZI_API void mzi_table_free(mzi_table* t);

MZI_API mzi_status mzi_validate(int n_max, double dissipator_scale, int threads,
                                mzi_report** out);
MZI_API size_t mzi_report_count(const mzi_report* r);
MZI_API const char* mzi_report_name(const mzi_report* r, size_t i);
MZI_API int mzi_report_passed(const mzi_report* r, size_t i);
MZI_API double mzi_report_measured(const mzi_report* r, size_t i);
MZI_API double mzi_report_expected(const mzi_report* r, size_t i);
MZI_API double mzi_report_tolerance(const mzi_report* r, size_t i);
MZI_API const char* mzi_report_detail(const mzi_report* r, size_t i);
MZI_API int mzi_report_all_passed(const mzi_report* r);
MZI_API mzi_status mzi_report_write(const mzi_report* r, const char* path);
MZI_API void mzi_report_free(mzi_report* r);

/* Single steady state. */
MZI_API mzi_status mzi_solve(const mzi_params* p, int n_max, mzi_solution** out);
/* Output of the solved state for an arbitrary phase (phi only enters the detector). */
MZI_API mzi_status mzi_solution_intensity(const mzi_solution* s, double phi, mzi_port port,
                                          double* out);
MZI_API mzi_status mzi_solution_g2(const mzi_solution* s, double phi, mzi_port port, double* out);
MZI_API mzi_status mzi_solution_g2_tau(const mzi_solution* s, double phi, mzi_port port,
                                       const double* taus, size_t n, double* out);
MZI_API mzi_status mzi_solution_diagnostics(const mzi_solution* s, mzi_diagnostics* out);
MZI_API void mzi_solution_free(mzi_solution* s);

MZI_API mzi_status mzi_optimal_detuning(double u, double* negative, double* positive);
MZI_API mzi_status mzi_optimal_phase(double u, double delta, double* out);
MZI_API mzi_status mzi_analytic_g2(const mzi_params* p, double* out);
MZI_API mzi_status mzi_analytic_intensity(const mzi_params* p, double* out);
MZI_API mzi_status mzi_sagnac_phase(double area, double lambda0, double omega, double* out);
MZI_API mzi_status mzi_thermal_detuning(double delta_t, double* out);

#ifdef __cplusplus
}
#endif

#endif

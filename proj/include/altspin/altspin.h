#ifndef ALTSPIN_ALTSPIN_H
#define ALTSPIN_ALTSPIN_H

/* C interface to the altspin engine. Objects are opaque handles released by
 * their *_free function. Every call returns an altspin_status; on failure
 * altspin_last_error() describes the problem (per thread). Complex arrays
 * are interleaved (re, im) doubles. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ALTSPIN_API __declspec(dllexport)
#else
#define ALTSPIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum altspin_status {
  ALTSPIN_OK = 0,
  ALTSPIN_ERR_PARAMETER = 1,
  ALTSPIN_ERR_CAPABILITY = 2,
  ALTSPIN_ERR_CONVERGENCE = 3,
  ALTSPIN_ERR_DIMENSION = 4,
  ALTSPIN_ERR_IO = 5,
  ALTSPIN_ERR_CONFIG = 6,
  ALTSPIN_ERR_INTERNAL = 7
} altspin_status;

typedef struct altspin_params {
  int n;
  double lambda;
  double delta;
  double b;
} altspin_params;

typedef struct altspin_operator altspin_operator;
typedef struct altspin_state altspin_state;
typedef struct altspin_density altspin_density;
typedef struct altspin_quench altspin_quench;

/* Receives one line of text (no trailing newline). */
typedef void (*altspin_line_fn)(const char* line, void* user);

ALTSPIN_API const char* altspin_version(void);
ALTSPIN_API const char* altspin_last_error(void);
ALTSPIN_API const char* altspin_status_name(altspin_status status);

/* Operators. mz selects a magnetization sector; full_space ignores mz. */
ALTSPIN_API altspin_status altspin_hamiltonian(const altspin_params* p, int mz, int full_space, altspin_operator** out);
ALTSPIN_API altspin_status altspin_operator_dim(const altspin_operator* op, size_t* dim);
ALTSPIN_API altspin_status altspin_operator_apply(const altspin_operator* op, const double* in, double* out, size_t dim);
/* k lowest eigenvalues by Lanczos, ascending. */
ALTSPIN_API altspin_status altspin_operator_lowest(const altspin_operator* op, int k, double tol, uint64_t seed,
                                                   double* values);
ALTSPIN_API void altspin_operator_free(altspin_operator* op);

/* States. */
ALTSPIN_API altspin_status altspin_ground_state(const altspin_params* p, altspin_state** out, double* e0, double* gap,
                                                int* degeneracy);
ALTSPIN_API altspin_status altspin_neel_state(int n, altspin_state** out);
ALTSPIN_API altspin_status altspin_state_dim(const altspin_state* s, size_t* dim);
ALTSPIN_API altspin_status altspin_state_amplitudes(const altspin_state* s, double* out, size_t dim);
/* Magnetization of the state's sector; ALTSPIN_ERR_PARAMETER for full-space states. */
ALTSPIN_API altspin_status altspin_state_mz(const altspin_state* s, int* mz);
/* full_mode != 0 searches every bipartition (n <= 10). */
ALTSPIN_API altspin_status altspin_state_ggm(const altspin_state* s, int full_mode, double* value);
ALTSPIN_API altspin_status altspin_state_reduce(const altspin_state* s, const int* sites, size_t count,
                                                altspin_density** out);
ALTSPIN_API void altspin_state_free(altspin_state* s);

/* Mixed states. Sites are 1-based. */
ALTSPIN_API altspin_status altspin_thermal_reduced(const altspin_params* p, double beta, const int* sites, size_t count,
                                                   altspin_density** out);
ALTSPIN_API altspin_status altspin_density_dim(const altspin_density* rho, size_t* dim);
ALTSPIN_API altspin_status altspin_density_matrix(const altspin_density* rho, double* out, size_t dim);
ALTSPIN_API altspin_status altspin_density_entropy(const altspin_density* rho, double* value);
ALTSPIN_API altspin_status altspin_density_log_negativity(const altspin_density* rho, double* value);
ALTSPIN_API altspin_status altspin_density_czz(const altspin_density* rho, double* value);
ALTSPIN_API void altspin_density_free(altspin_density* rho);

/* Sudden quench of psi0 under H(final). */
ALTSPIN_API altspin_status altspin_quench_create(const altspin_state* psi0, const altspin_params* final_params,
                                                 altspin_quench** out);
ALTSPIN_API altspin_status altspin_quench_echo(const altspin_quench* q, double t, double* echo);
ALTSPIN_API altspin_status altspin_quench_state(const altspin_quench* q, double t, altspin_state** out);
ALTSPIN_API void altspin_quench_free(altspin_quench* q);

/* Scans. Unset overrides: NULL strings, zero n/workers, has_seed == 0. */
typedef struct altspin_run_options {
  const char* experiment;
  int n;
  int workers;
  const char* out;
  int resume;
  int has_seed;
  uint64_t seed;
} altspin_run_options;

ALTSPIN_API altspin_status altspin_scan_run(const char* config_path, const altspin_run_options* opt,
                                            altspin_line_fn log, void* user);
/* *ok is 1 when the result passes; problems are reported through `log`. */
ALTSPIN_API altspin_status altspin_validate(const char* csv_path, altspin_line_fn log, void* user, int* ok);
/* *failures counts failed checks; one line per check goes to `log`. */
ALTSPIN_API altspin_status altspin_oracle(int n, uint64_t seed, altspin_line_fn log, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif /* ALTSPIN_ALTSPIN_H */

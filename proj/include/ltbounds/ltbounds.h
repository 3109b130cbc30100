#ifndef LTBOUNDS_LTBOUNDS_H
#define LTBOUNDS_LTBOUNDS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LTB_API __declspec(dllexport)
#else
#define LTB_API __attribute__((visibility("default")))
#endif

/* Status codes. Every fallible call returns one; details are available from
   ltb_last_error() on the calling thread until the next failing call. */
typedef enum ltb_status {
  LTB_OK = 0,
  LTB_ERR_DOMAIN = 1,
  LTB_ERR_VALIDATION = 2,
  LTB_ERR_PARSE = 3,
  LTB_ERR_NO_SIGN_CHANGE = 4,
  LTB_ERR_NO_CONVERGENCE = 5,
  LTB_ERR_SIZE_LIMIT = 6,
  LTB_ERR_UNSUPPORTED = 7,
  LTB_ERR_INVALID_ARGUMENT = 8,
  LTB_ERR_IO = 9,
  LTB_ERR_INTERNAL = 100
} ltb_status;

LTB_API const char* ltb_version(void);
LTB_API const char* ltb_status_name(ltb_status status);
LTB_API const char* ltb_last_error(void);
/* 1-based position of the last parse error; 0 when unknown. */
LTB_API void ltb_last_parse_position(int* line, int* column);

/* ---- constants ---- */

typedef struct ltb_constants {
  double x0;
  double kappa;
  double gamma_star;
  double x_phi;
  double c_phi;
  double p_phi;
  double p0;
  double gamma0;
} ltb_constants;

LTB_API ltb_status ltb_get_constants(ltb_constants* out);
LTB_API ltb_status ltb_delta1(double p, double* out);
LTB_API ltb_status ltb_bessel_i0_scaled(double z, double* out);
LTB_API ltb_status ltb_alpha_star(double* alpha, double* value);

/* ---- distributions ---- */

typedef struct ltb_distribution ltb_distribution;

LTB_API ltb_status ltb_distribution_from_atoms(const double* values, const double* probs,
                                               size_t count, ltb_distribution** out);
/* {"atoms":[{"x":..,"p":..},...]} */
LTB_API ltb_status ltb_distribution_from_json(const char* text, ltb_distribution** out);
LTB_API ltb_status ltb_distribution_two_point(double p, ltb_distribution** out);
LTB_API ltb_status ltb_distribution_three_point(double p, ltb_distribution** out);
LTB_API void ltb_distribution_free(ltb_distribution* d);
LTB_API size_t ltb_distribution_size(const ltb_distribution* d);
LTB_API ltb_status ltb_distribution_atom(const ltb_distribution* d, size_t index, double* value,
                                         double* prob);
LTB_API ltb_status ltb_distribution_variance(const ltb_distribution* d, double* out);

/* sup_x |P(S_n < x B_n) - Phi(x)| for n i.i.d. copies, by exact convolution. */
LTB_API ltb_status ltb_uniform_distance(const ltb_distribution* d, int n, double* out);

/* ---- weight functions ---- */

typedef enum ltb_weight_kind {
  LTB_WEIGHT_GSTAR = 0,
  LTB_WEIGHT_GC = 1,
  LTB_WEIGHT_G0 = 2,
  LTB_WEIGHT_G1 = 3
} ltb_weight_kind;

typedef struct ltb_weight ltb_weight;
typedef double (*ltb_weight_fn)(double u, void* user);

LTB_API ltb_status ltb_weight_canonical(ltb_weight_kind kind, ltb_weight** out);
/* The callback must stay valid for the lifetime of the handle. */
LTB_API ltb_status ltb_weight_custom(ltb_weight_fn fn, void* user, ltb_weight** out);
LTB_API void ltb_weight_free(ltb_weight* g);
LTB_API const char* ltb_weight_name(const ltb_weight* g);

/* ---- fractions ---- */

typedef enum ltb_fraction_type { LTB_ESSEEN = 0, LTB_ROZOVSKII = 1 } ltb_fraction_type;

typedef struct ltb_fraction_result {
  double value;
  double attained_z;
  const char* location; /* static string */
} ltb_fraction_result;

/* epsilon may be INFINITY; gamma must be finite. */
LTB_API ltb_status ltb_fraction(ltb_fraction_type type, const ltb_distribution* d, int n,
                                const ltb_weight* g, double epsilon, double gamma,
                                ltb_fraction_result* out);
LTB_API ltb_status ltb_fraction_closed_form(ltb_fraction_type type, const ltb_weight* g, double p,
                                            int n, double epsilon, double gamma, double* out);
LTB_API ltb_status ltb_lindeberg_fraction(const ltb_distribution* d, int n, double z, double* out);

/* ---- bounds ---- */

typedef enum ltb_k_function {
  LTB_K_E0 = 0,
  LTB_K_R0 = 1,
  LTB_K_ESTAR = 2,
  LTB_K_RSTAR = 3,
  LTB_K_E1 = 4,
  LTB_K_R1 = 5
} ltb_k_function;

typedef struct ltb_bound {
  const char* target;  /* static string */
  const char* kind;    /* "upper" or "lower" */
  double epsilon;
  double gamma;
  double value;
  int has_witness;
  double witness_p;
  const char* formula; /* owned by the list */
} ltb_bound;

typedef struct ltb_bound_list ltb_bound_list;

/* Every bound for (epsilon, gamma); both may be INFINITY. The two-sided
   asymptotically exact pairs come last as lower/upper entries. */
LTB_API ltb_status ltb_bounds_compute(double epsilon, double gamma, ltb_bound_list** out);
LTB_API size_t ltb_bound_list_size(const ltb_bound_list* list);
LTB_API ltb_status ltb_bound_list_get(const ltb_bound_list* list, size_t index, ltb_bound* out);
LTB_API void ltb_bound_list_free(ltb_bound_list* list);

LTB_API ltb_status ltb_k_function_eval(ltb_k_function which, double p, double epsilon, double gamma,
                                       double* out);
LTB_API ltb_status ltb_aex_upper(ltb_fraction_type type, double epsilon, double gamma, double* out);
LTB_API ltb_status ltb_abe_lower_esseen(double gamma, double* value, double* witness_p);
LTB_API ltb_status ltb_abe_lower_rozovskii(double epsilon, double gamma, double* value);

/* ---- tables ---- */

/* Cells of the incomplete-gamma upper bound table. */
LTB_API size_t ltb_aex_table_size(ltb_fraction_type type);
LTB_API ltb_status ltb_aex_table_cell(ltb_fraction_type type, size_t index, double* epsilon,
                                      double* gamma);
LTB_API size_t ltb_abe_table_size(void);
LTB_API ltb_status ltb_abe_table_gamma(size_t index, double* gamma);

typedef struct ltb_reference_cell {
  double epsilon;        /* 0 when epsilon_zero_plus */
  double gamma;          /* NaN when gamma_is_star or gamma_any */
  double value;
  int epsilon_zero_plus;
  int gamma_is_star;
  int gamma_any;
} ltb_reference_cell;

/* which: 1 = Esseen-type constants, 2 = Rozovskii-type constants. */
LTB_API size_t ltb_reference_table_size(int which);
LTB_API ltb_status ltb_reference_table_cell(int which, size_t index, ltb_reference_cell* out);

/* ---- experiments ---- */

typedef struct ltb_report ltb_report;

LTB_API ltb_status ltb_experiment_esseen(double p, const int* n_values, size_t count,
                                         ltb_report** out);
LTB_API ltb_status ltb_experiment_bessel(double alpha, const int* n_values, size_t count,
                                         ltb_report** out);
LTB_API size_t ltb_report_size(const ltb_report* r);
LTB_API ltb_status ltb_report_row(const ltb_report* r, size_t index, int* n, double* observed);
LTB_API double ltb_report_target(const ltb_report* r);
LTB_API double ltb_report_tail_error(const ltb_report* r);
/* CSV text owned by the report. */
LTB_API const char* ltb_report_csv(const ltb_report* r);
LTB_API void ltb_report_free(ltb_report* r);

typedef struct ltb_fuzz_config {
  int lattice;
  int real_valued;
  int two_point;
  int three_point;
  int max_n;
  int max_n_real;
  int check_properties;
} ltb_fuzz_config;

typedef struct ltb_fuzz_violation {
  int trial;
  uint64_t sub_seed;
  const char* family;
  const char* what;
  const char* distribution_json;
  int n;
} ltb_fuzz_violation;

typedef struct ltb_fuzz_max {
  const char* constant;
  double ratio;
  double reference;
  int trial;
} ltb_fuzz_max;

typedef struct ltb_fuzz_report ltb_fuzz_report;

LTB_API void ltb_fuzz_config_default(ltb_fuzz_config* out);
/* config may be NULL for defaults. */
LTB_API ltb_status ltb_fuzz_run(uint64_t seed, int trials, const ltb_fuzz_config* config,
                                ltb_fuzz_report** out);
LTB_API size_t ltb_fuzz_violation_count(const ltb_fuzz_report* r);
LTB_API ltb_status ltb_fuzz_violation_get(const ltb_fuzz_report* r, size_t index,
                                          ltb_fuzz_violation* out);
LTB_API size_t ltb_fuzz_max_count(const ltb_fuzz_report* r);
LTB_API ltb_status ltb_fuzz_max_get(const ltb_fuzz_report* r, size_t index, ltb_fuzz_max* out);
LTB_API size_t ltb_fuzz_property_count(const ltb_fuzz_report* r);
LTB_API ltb_status ltb_fuzz_property_get(const ltb_fuzz_report* r, size_t index, const char** name,
                                         int* checks);
LTB_API size_t ltb_fuzz_record_count(const ltb_fuzz_report* r);
LTB_API const char* ltb_fuzz_csv(const ltb_fuzz_report* r);
LTB_API void ltb_fuzz_report_free(ltb_fuzz_report* r);

#ifdef __cplusplus
}
#endif

#endif

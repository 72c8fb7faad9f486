#ifndef HESSMETRIC_H
#define HESSMETRIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HM_API __declspec(dllexport)
#else
#define HM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hm_status {
    HM_OK = 0,
    HM_ERR_DOMAIN = 1,
    HM_ERR_CONVEXITY = 2,
    HM_ERR_BOUNDARY = 3,
    HM_ERR_COORDINATE = 4,
    HM_ERR_MEMBERSHIP = 5,
    HM_ERR_UNBOUNDED_MASS = 6,
    HM_ERR_ARITY = 7,
    HM_ERR_ITERATION = 8,
    HM_ERR_PARSE = 9,
    HM_ERR_USAGE = 10,
    HM_ERR_INVALID_ARGUMENT = 11,
    HM_ERR_INTERNAL = 12,
    HM_ERR_NULL_POINTER = 13
} hm_status;

typedef struct hm_profile hm_profile;
typedef struct hm_measure hm_measure;
typedef struct hm_geodesic hm_geodesic;
typedef struct hm_report hm_report;

/* Zero or negative fields mean "use the default". */
typedef struct hm_options {
    uint64_t seed;
    int resolution;
    double tolerance;
    int n;
    int jmax;
    int tmax;
} hm_options;

HM_API const char* hm_version(void);
HM_API const char* hm_status_name(hm_status status);
/* Message of the last failed call on this thread; empty after a successful call. */
HM_API const char* hm_last_error(void);
HM_API void hm_string_free(char* s);
HM_API void hm_options_init(hm_options* options);

/* Profiles: convex nondecreasing piecewise-linear g(tau) with g(0) = 0 in coordinate (n, q). */
HM_API hm_status hm_profile_create(int n, int q, const double* breakpoints, size_t breakpoint_count,
                                   const double* slopes, size_t slope_count, hm_profile** out);
HM_API hm_status hm_profile_from_json(const char* json, hm_profile** out);
HM_API hm_status hm_profile_to_json(const hm_profile* profile, char** out);
HM_API hm_status hm_profile_clone(const hm_profile* profile, hm_profile** out);
HM_API void hm_profile_free(hm_profile* profile);
HM_API hm_status hm_profile_size(const hm_profile* profile, size_t* breakpoint_count);
/* Copies breakpoints (size entries) and slopes (size + 1 entries); either pointer may be NULL. */
HM_API hm_status hm_profile_data(const hm_profile* profile, double* breakpoints, double* slopes);
HM_API hm_status hm_profile_evaluate(const hm_profile* profile, double tau, double* out);
HM_API hm_status hm_profile_combine(double alpha, const hm_profile* g1, double beta, const hm_profile* g2,
                                    hm_profile** out);
HM_API hm_status hm_profile_reparameterize(const hm_profile* profile, int q_to, int resolution, hm_profile** out);

/* Hessian measures. */
HM_API hm_status hm_hessian_constant(int n, int m, double* out);
HM_API hm_status hm_hessian_measure(const hm_profile* profile, int n, int m, hm_measure** out);
HM_API hm_status hm_measure_create(const double* taus, const double* masses, size_t count, hm_measure** out);
HM_API void hm_measure_free(hm_measure* measure);
HM_API hm_status hm_measure_size(const hm_measure* measure, size_t* count);
HM_API hm_status hm_measure_atom(const hm_measure* measure, size_t index, double* tau, double* mass);
HM_API hm_status hm_measure_total(const hm_measure* measure, double* out);

/* Energies and the metric. A NULL weight means the zero profile. */
HM_API hm_status hm_e1_energy(const hm_profile* profile, int n, int m, double* out);
HM_API hm_status hm_energy(const hm_profile* u, const hm_profile* weight, int n, int m, double* out);
HM_API hm_status hm_aubin_I(const hm_profile* psi1, const hm_profile* psi2, int n, int m, double* out);
HM_API hm_status hm_metric(const hm_profile* u, const hm_profile* v, const hm_profile* weight, int n, int m,
                           double* out);
HM_API hm_status hm_norm_energy_difference(const hm_profile* u, const hm_profile* v, int n, int m, double* out);
HM_API hm_status hm_rooftop(const hm_profile* u, const hm_profile* v, hm_profile** out);
HM_API hm_status hm_capacity_ball(double r, int n, int m, double* out);

/* Envelope solvers. */
HM_API hm_status hm_dirichlet_solve(const hm_measure* mu, int n, int m, hm_profile** out);
/* j_final may be NULL. */
HM_API hm_status hm_envelope_hte(const hm_profile* u, const hm_profile* v, int n, int m, hm_profile** out,
                                 double* j_final);

/* Weak geodesics. */
HM_API hm_status hm_geodesic_create(const hm_profile* u0, const hm_profile* u1, int n, int m, int resolution,
                                    hm_geodesic** out);
HM_API hm_status hm_geodesic_eval(const hm_geodesic* geodesic, double t, hm_profile** out);
HM_API void hm_geodesic_free(hm_geodesic* geodesic);

/* Harness: scenario commands, example reproduction, property suite. */
HM_API hm_status hm_run_command(const char* command, const char* scenario_path, const hm_options* options,
                                hm_report** out);
HM_API hm_status hm_run_scenario_text(const char* command, const char* scenario_json, const hm_options* options,
                                      hm_report** out);
HM_API hm_status hm_reproduce(const char* example_id, const hm_options* options, hm_report** out);
HM_API hm_status hm_selftest(const hm_options* options, hm_report** out);
/* Number of registered example ids, and the id at an index. */
HM_API size_t hm_example_count(void);
HM_API const char* hm_example_id(size_t index);

HM_API int hm_report_all_pass(const hm_report* report);
HM_API size_t hm_report_row_count(const hm_report* report);
HM_API size_t hm_report_failure_count(const hm_report* report);
/* Borrowed strings stay valid until the report is freed. Any output pointer may be NULL. */
HM_API hm_status hm_report_row(const hm_report* report, size_t index, const char** quantity, const char** inputs,
                               const char** status, double* actual);
/* format is "csv" or "json"; the CSV form holds only the check rows. */
HM_API hm_status hm_report_to_string(const hm_report* report, const char* format, char** out);
HM_API hm_status hm_report_write(const hm_report* report, const char* out_dir, const char* format);
HM_API void hm_report_free(hm_report* report);

#ifdef __cplusplus
}
#endif

#endif

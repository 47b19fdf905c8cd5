/*
 * C interface to the p-Slepian Cameron-Martin library.
 *
 * Objects are opaque handles created by *_create / *_parse functions and
 * released with the matching *_destroy. Every fallible call returns a
 * psl_status; on failure psl_last_error() holds a one-line message for the
 * calling thread. Output arrays are caller-owned; lengths are checked.
 *
 * Paths on [p,1] are arrays of psl_grid_window_nodes() values at t_k..t_m.
 * Functions on [0,1] are arrays of psl_grid_cells() cell values.
 */
#ifndef PSLEPIAN_H
#define PSLEPIAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PSLEPIAN_BUILDING)
#    define PSL_API __declspec(dllexport)
#  else
#    define PSL_API __declspec(dllimport)
#  endif
#else
#  define PSL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psl_status {
    PSL_OK = 0,
    PSL_ERR_INVALID_ARGUMENT = 1, /* precondition violated: off-grid p, bad lengths, malformed input */
    PSL_ERR_NUMERICAL = 2,        /* factorization or solve failed */
    PSL_ERR_IO = 3,
    PSL_ERR_INTERNAL = 4
} psl_status;

typedef enum psl_variant { PSL_VARIANT_PAPER = 0, PSL_VARIANT_CORRECTED = 1 } psl_variant;
typedef enum psl_sampler { PSL_SAMPLER_DIFF = 0, PSL_SAMPLER_EXACT = 1 } psl_sampler;
typedef enum psl_statistic { PSL_STAT_SUPNORM = 0, PSL_STAT_ENDPOINT = 1 } psl_statistic;
typedef enum psl_qp_method { PSL_QP_ELIMINATE = 0, PSL_QP_KKT = 1 } psl_qp_method;

/* bit flags for psl_power */
#define PSL_POWER_DIRECT 1
#define PSL_POWER_REWEIGHTED 2

/* functionals for psl_change_of_measure */
typedef enum psl_functional {
    PSL_FUNC_ENDPOINT = 0, /* w(1) */
    PSL_FUNC_NODE_MAX = 1, /* max over window nodes */
    PSL_FUNC_CROSSING = 2  /* 1{max >= level} */
} psl_functional;

typedef struct psl_grid psl_grid;
typedef struct psl_source psl_source;
typedef struct psl_shift psl_shift;

typedef struct psl_mc_config {
    uint64_t seed;
    size_t n;
    unsigned workers; /* result does not depend on this */
    psl_sampler sampler;
} psl_mc_config;

typedef struct psl_mc_estimate {
    double mean;
    double std_error;
    size_t n;
    uint64_t seed;
} psl_mc_estimate;

typedef struct psl_log_density_result {
    double quadratic;
    double linear;
    double log_density;
    psl_variant variant;
} psl_log_density_result;

typedef struct psl_condition_a_summary {
    double max_abs;
    double se_at_max;
    double max_se;
    double mean_offset;
    size_t argmax;
} psl_condition_a_summary;

typedef double (*psl_path_functional)(const double* w, size_t n, void* user);

PSL_API const char* psl_version(void);
PSL_API const char* psl_last_error(void);

/* grid */
PSL_API psl_status psl_grid_create(int m, double p, psl_grid** out);
PSL_API void psl_grid_destroy(psl_grid* grid);
PSL_API int psl_grid_cells(const psl_grid* grid);
PSL_API int psl_grid_lag_cells(const psl_grid* grid);
PSL_API double psl_grid_p(const psl_grid* grid);
PSL_API size_t psl_grid_window_nodes(const psl_grid* grid);

/* generators f on [0,1] */
PSL_API psl_status psl_source_create(const psl_grid* grid, const double* cells, size_t n, psl_source** out);
/* const:<v> | linear:<slope> | random:<seed> | path to a "t_left,value" csv */
PSL_API psl_status psl_source_parse(const psl_grid* grid, const char* text, psl_source** out);
PSL_API void psl_source_destroy(psl_source* src);
PSL_API psl_status psl_source_scalars(const psl_source* src, double* sfp, double* delta);
PSL_API psl_status psl_source_norm_sq(const psl_source* src, psl_variant variant, double* out);
PSL_API psl_status psl_source_fstar(const psl_source* src, double* out_cells, size_t n);
PSL_API psl_status psl_source_qp(const psl_source* src, psl_qp_method method, double* out_cells, size_t n,
                                 double* value, double* residual);
PSL_API psl_status psl_source_feasibility(const psl_source* src, const double* g_cells, size_t n,
                                          double* residual);
PSL_API psl_status psl_source_to_shift(const psl_source* src, psl_shift** out);

/* shifts h = c + int_p^t g on [p,1] */
PSL_API psl_status psl_shift_create(const psl_grid* grid, double c, const double* g_cells, size_t n,
                                    psl_shift** out);
PSL_API psl_status psl_shift_from_nodes(const psl_grid* grid, const double* h_nodes, size_t n, psl_shift** out);
/* const:<c> | c:<c> | linear:<slope> | mixed:<c>,<slope> | path to a "t,value" csv */
PSL_API psl_status psl_shift_parse(const psl_grid* grid, const char* text, psl_shift** out);
PSL_API void psl_shift_destroy(psl_shift* shift);
PSL_API psl_status psl_shift_coordinates(const psl_shift* shift, double* c, double* sg);
PSL_API psl_status psl_shift_nodes(const psl_shift* shift, double* out, size_t n);
PSL_API psl_status psl_shift_norm_sq(const psl_shift* shift, psl_variant variant, double* out);
PSL_API psl_status psl_shift_fd_norm_sq(const psl_shift* shift, double* out);
PSL_API psl_status psl_z_eval(const psl_shift* shift, const double* w, size_t n, psl_variant variant, double* out);
PSL_API psl_status psl_log_density(const psl_shift* shift, const double* w, size_t n, psl_variant variant,
                                   psl_log_density_result* out);
PSL_API psl_status psl_fd_log_lr(const psl_shift* shift, const double* w, size_t n, double* out);

/* simulation: out holds cfg->n paths of window_nodes values, path-major */
PSL_API psl_status psl_simulate(const psl_grid* grid, const psl_mc_config* cfg, double* out, size_t n_values);
/* unit-lag Slepian on [1, 1/p] at u_i = i/k, i = k..m (window_nodes values) */
PSL_API psl_status psl_simulate_unit_slepian(const psl_grid* grid, uint64_t seed, uint64_t stream, double* out,
                                             size_t n);
/* y(u/b) = (1/sqrt p) nabla_p B at u/b = x(u) for x at u_i = i/k, i = k..m, b = m/k in (1,2] */
PSL_API psl_status psl_scale_slepian(int k, int m, const double* x, size_t n, double* out);
PSL_API double psl_slepian_cov(double s, double t, double p);

/* verification */
PSL_API psl_status psl_mc_expectation(const psl_grid* grid, psl_path_functional fn, void* user,
                                      const psl_mc_config* cfg, psl_mc_estimate* out);
/* per_node may be NULL; otherwise cap >= window_nodes */
PSL_API psl_status psl_verify_condition_a(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                                          psl_condition_a_summary* summary, psl_mc_estimate* per_node, size_t cap);
PSL_API psl_status psl_verify_isometry(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                                       psl_mc_estimate* second_moment, double* target);
PSL_API psl_status psl_verify_density_norm(const psl_shift* shift, psl_variant variant, const psl_mc_config* cfg,
                                           psl_mc_estimate* out);
PSL_API psl_status psl_change_of_measure(const psl_shift* shift, psl_functional fn, double level,
                                         const psl_mc_config* cfg, psl_mc_estimate* direct,
                                         psl_mc_estimate* reweighted);

/* applications */
PSL_API psl_status psl_cross_plain(const psl_grid* grid, double u, const psl_mc_config* cfg, psl_mc_estimate* out,
                                   int* rare_event);
PSL_API psl_status psl_cross_is(const psl_shift* tilt, double u, const psl_mc_config* cfg, psl_mc_estimate* out,
                                int* rare_event);
/* methods: PSL_POWER_DIRECT | PSL_POWER_REWEIGHTED; unused outputs may be NULL */
PSL_API psl_status psl_power(const psl_shift* shift, psl_statistic stat, double alpha, const psl_mc_config* cfg,
                             int methods, double* critical, psl_mc_estimate* direct, psl_mc_estimate* reweighted);

/* csv (17 significant digits; header row; '#' comment lines ignored on read) */
/* values holds n_paths paths of node_count values each; window != 0 selects [p,1] */
PSL_API psl_status psl_write_paths_csv(const char* file, const psl_grid* grid, int window, const double* values,
                                       size_t n_paths, const char* comment);
PSL_API psl_status psl_write_function_csv(const char* file, const psl_grid* grid, const double* cells, size_t n,
                                          const char* comment);
PSL_API psl_status psl_read_path_csv(const char* file, const psl_grid* grid, int window, double* out, size_t n);
/* unit-lag path "u,value" at u_i = i/k, i = k..m of `grid` (b = 1/p) */
PSL_API psl_status psl_read_unit_lag_csv(const char* file, const psl_grid* grid, double* out, size_t n);
/* unit-lag path written at u_i = i/k */
PSL_API psl_status psl_write_unit_lag_csv(const char* file, const psl_grid* grid, const double* values, size_t n,
                                          const char* comment);

#ifdef __cplusplus
}
#endif

#endif /* PSLEPIAN_H */

/* measureq - probability measure quantization by attraction-repulsion
 * energies, with Fourier cross-validation, deterministic tilings and
 * total-variation regularization.
 *
 * C interface: opaque handles plus status codes. Every function that can
 * fail returns mq_status; details for the most recent failure on the
 * calling thread are available from mq_last_error().
 */
#ifndef MEASUREQ_H
#define MEASUREQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MEASUREQ_API __declspec(dllexport)
#else
#define MEASUREQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mq_status {
  MQ_OK = 0,
  MQ_ERR_INVALID_ARGUMENT = 1,
  MQ_ERR_DIM_MISMATCH = 2,
  MQ_ERR_NON_FINITE = 3,
  MQ_ERR_DOMAIN = 4,
  MQ_ERR_UNSUPPORTED_DIM = 5,
  MQ_ERR_MALFORMED_INPUT = 6,
  MQ_ERR_IO = 7,
  MQ_ERR_NOT_CONVERGED = 8,
  MQ_ERR_LINE_SEARCH = 9,
  MQ_ERR_MIXED_REPRESENTATION = 10,
  MQ_ERR_TOO_FEW_POINTS = 11,
  MQ_ERR_SINGULAR_AT_ZERO = 12,
  MQ_ERR_DEGENERATE_MASS = 13,
  MQ_ERR_INTERNAL = 99
} mq_status;

MEASUREQ_API const char* mq_version(void);
MEASUREQ_API const char* mq_status_name(mq_status s);
/* Detail message for the last failure on this thread. */
MEASUREQ_API const char* mq_last_error(void);

/* A probability measure: either N equal-weight points or a density on a
 * regular box grid (d <= 2 for grids). */
typedef struct mq_measure mq_measure;

enum { MQ_MEASURE_PARTICLES = 0, MQ_MEASURE_GRID = 1 };

MEASUREQ_API mq_status mq_measure_from_points(int dim, const double* coords,
                                              int n, mq_measure** out);
MEASUREQ_API mq_status mq_measure_grid(int dim, const double* lo, const double* hi,
                                       const int* cells, const double* values,
                                       mq_measure** out);
MEASUREQ_API mq_status mq_measure_builtin(const char* name, uint64_t seed,
                                          mq_measure** out);
MEASUREQ_API mq_status mq_measure_read_csv(const char* path, mq_measure** out);
MEASUREQ_API mq_status mq_measure_write_csv(const mq_measure* m, const char* path);
/* PGM P2/P5, maxval <= 65535; darker pixels carry more mass. An image with
 * zero total intensity falls back to the uniform density and sets
 * *uniform_fallback (which may be NULL) to 1. */
MEASUREQ_API mq_status mq_measure_from_pgm(const char* path, mq_measure** out,
                                           int* uniform_fallback);
MEASUREQ_API void mq_measure_free(mq_measure* m);
MEASUREQ_API mq_status mq_measure_copy(const mq_measure* m, mq_measure** out);

MEASUREQ_API int mq_measure_kind(const mq_measure* m);
MEASUREQ_API int mq_measure_dim(const mq_measure* m);
/* Particle accessors. */
MEASUREQ_API int mq_particles_count(const mq_measure* m);
MEASUREQ_API mq_status mq_particles_coords(const mq_measure* m, double* out);
/* Grid accessors. */
MEASUREQ_API mq_status mq_grid_shape(const mq_measure* m, int* cells, double* lo,
                                     double* hi);
MEASUREQ_API mq_status mq_grid_values(const mq_measure* m, double* out);

MEASUREQ_API mq_status mq_sample_empirical(const mq_measure* omega, int n,
                                           uint64_t seed, mq_measure** out);
MEASUREQ_API mq_status mq_moment(const mq_measure* m, double order, double* out);
MEASUREQ_API mq_status mq_char_function(const mq_measure* m, const double* xi,
                                        int dim, double* re, double* im);
MEASUREQ_API mq_status mq_wasserstein1_1d(const mq_measure* a, const mq_measure* b,
                                          double* out);

/* ---- power kernels and estimation kernels ---- */

MEASUREQ_API mq_status mq_power_eval(double q, const double* x, int dim,
                                     double* out);
MEASUREQ_API mq_status mq_dq_constant(int dim, double q, double* out);
MEASUREQ_API mq_status mq_generalized_ft(int dim, double q, const double* xi,
                                         double* out);

enum { MQ_KERNEL_TRIANGULAR = 0, MQ_KERNEL_GAUSSIAN = 1 };
MEASUREQ_API mq_status mq_estimation_kernel_eval(int kernel, double x,
                                                 double* value, double* derivative);

/* ---- energies ---- */

typedef struct mq_energy_report {
  double attraction;  /* V */
  double repulsion;   /* W */
  double total;       /* E = V + W */
  double symmetrized; /* valid when has_symmetrized */
  double fourier;     /* valid when has_fourier */
  double tv;          /* valid when has_tv */
  int has_symmetrized;
  int has_fourier;
  int has_tv;
} mq_energy_report;

typedef struct mq_fourier_quad {
  double xi_min;        /* default 1e-6 */
  double xi_max;        /* default 1e6 */
  int nodes_per_decade; /* default 32, minimum 8 */
} mq_fourier_quad;

MEASUREQ_API void mq_fourier_quad_init(mq_fourier_quad* quad);

MEASUREQ_API mq_status mq_particle_energy(const mq_measure* x, const mq_measure* omega,
                                          double qa, double qr,
                                          mq_energy_report* out);
MEASUREQ_API mq_status mq_particle_gradient(const mq_measure* x,
                                            const mq_measure* omega, double qa,
                                            double qr, double* grad);
MEASUREQ_API mq_status mq_symmetrized_energy(const mq_measure* mu,
                                             const mq_measure* omega, double q,
                                             double* out);
MEASUREQ_API mq_status mq_fourier_energy(const mq_measure* mu, const mq_measure* omega,
                                         double q, const mq_fourier_quad* quad,
                                         double* out);
/* Dense M x M matrix, row-major, for a 1D grid measure. */
MEASUREQ_API mq_status mq_grid_quadratic_matrix(const mq_measure* grid, double q,
                                                double* out);

/* ---- tilings ---- */

typedef struct mq_tiling mq_tiling;

MEASUREQ_API mq_status mq_tiling_build(const mq_measure* omega_grid, int n,
                                       mq_tiling** out);
MEASUREQ_API void mq_tiling_free(mq_tiling* t);
MEASUREQ_API int mq_tiling_size(const mq_tiling* t);
MEASUREQ_API int mq_tiling_dim(const mq_tiling* t);
MEASUREQ_API int64_t mq_tiling_n_tilde(const mq_tiling* t);
/* Column tile counts (2D); in 1D a single entry N. Returns the count of
 * entries written (cap at cap). */
MEASUREQ_API int mq_tiling_axis_counts(const mq_tiling* t, int* out, int cap);
MEASUREQ_API mq_status mq_tiling_tile(const mq_tiling* t, int k, int* index,
                                      double* lo, double* hi, double* mass);

enum { MQ_RULE_CENTER = 0, MQ_RULE_MASS_CENTROID = 1 };
MEASUREQ_API mq_status mq_tiling_points(const mq_tiling* t, int rule,
                                        mq_measure** out);
MEASUREQ_API mq_status mq_tiling_write_csv(const mq_tiling* t, const char* path);

/* ---- total variation ---- */

typedef struct mq_tv_estimate {
  double value;
  int infinite;
  double bandwidth; /* < 0 when not applicable */
} mq_tv_estimate;

MEASUREQ_API mq_status mq_kernel_tv(const mq_measure* particles, double h,
                                    int kernel, mq_tv_estimate* out);
MEASUREQ_API mq_status mq_pointdiff_tv(const mq_measure* particles,
                                       mq_tv_estimate* out);
MEASUREQ_API mq_status mq_grid_tv(const mq_measure* grid, mq_tv_estimate* out);
MEASUREQ_API double mq_bandwidth_schedule(int64_t n, int d);

/* ---- solvers ---- */

enum { MQ_TV_NONE = 0, MQ_TV_KERNEL = 1, MQ_TV_POINTDIFF = 2 };
enum { MQ_INIT_TILING = 0, MQ_INIT_RANDOM = 1 };

typedef struct mq_solver_config {
  int max_iters;
  double grad_tol;      /* < 0: automatic */
  double step_init;
  double armijo_c;
  double armijo_shrink;
  double lambda;
  int tv_method;        /* MQ_TV_* */
  double tv_smoothing;  /* < 0: automatic */
  double tv_bandwidth;  /* < 0: bandwidth schedule */
  int tv_kernel;        /* MQ_KERNEL_* */
  int init;             /* MQ_INIT_* */
  uint64_t seed;
  double fista_lipschitz; /* <= 0: power-iteration estimate */
} mq_solver_config;

MEASUREQ_API void mq_solver_config_init(mq_solver_config* cfg);

typedef struct mq_trace mq_trace;

MEASUREQ_API void mq_trace_free(mq_trace* t);
MEASUREQ_API int mq_trace_length(const mq_trace* t);
MEASUREQ_API mq_status mq_trace_entry(const mq_trace* t, int i, int* iter,
                                      double* objective, double* residual,
                                      double* step);
MEASUREQ_API const char* mq_trace_termination(const mq_trace* t);
MEASUREQ_API int mq_trace_converged(const mq_trace* t);
MEASUREQ_API mq_status mq_trace_write_csv(const mq_trace* t, const char* path);

/* Returns MQ_ERR_NOT_CONVERGED / MQ_ERR_LINE_SEARCH with outputs still
 * populated when the iteration stopped without meeting its tolerance. */
MEASUREQ_API mq_status mq_minimize_particles(const mq_measure* omega, int n,
                                             double qa, double qr,
                                             const mq_solver_config* cfg,
                                             const mq_measure* init_points,
                                             mq_measure** out, mq_trace** trace);
MEASUREQ_API mq_status mq_minimize_grid(const mq_measure* w, double q,
                                        const mq_solver_config* cfg,
                                        mq_measure** out, mq_trace** trace);

/* ---- rendering ---- */

/* White canvas with one black pixel per point; points are given in unit
 * box coordinates and scaled to width x height. */
MEASUREQ_API mq_status mq_write_points_pgm(const char* path, int width, int height,
                                           const mq_measure* points);

#ifdef __cplusplus
}
#endif

#endif /* MEASUREQ_H */

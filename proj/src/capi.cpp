#include "measureq.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "builtins.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "measure.hpp"
#include "pgm.hpp"
#include "pointio.hpp"
#include "solver.hpp"
#include "tiling.hpp"
#include "tv.hpp"

struct mq_measure {
  mq::Measure m;
};

struct mq_tiling {
  mq::Tiling t;
};

struct mq_trace {
  mq::SolverTrace t;
};

namespace {

thread_local std::string g_last_error;

mq_status map_code(mq::ErrorCode c) {
  switch (c) {
    case mq::ErrorCode::ok: return MQ_OK;
    case mq::ErrorCode::invalid_argument: return MQ_ERR_INVALID_ARGUMENT;
    case mq::ErrorCode::dim_mismatch: return MQ_ERR_DIM_MISMATCH;
    case mq::ErrorCode::non_finite: return MQ_ERR_NON_FINITE;
    case mq::ErrorCode::domain_error: return MQ_ERR_DOMAIN;
    case mq::ErrorCode::unsupported_dim: return MQ_ERR_UNSUPPORTED_DIM;
    case mq::ErrorCode::malformed_input: return MQ_ERR_MALFORMED_INPUT;
    case mq::ErrorCode::io_error: return MQ_ERR_IO;
    case mq::ErrorCode::not_converged: return MQ_ERR_NOT_CONVERGED;
    case mq::ErrorCode::line_search_failed: return MQ_ERR_LINE_SEARCH;
    case mq::ErrorCode::mixed_representation: return MQ_ERR_MIXED_REPRESENTATION;
    case mq::ErrorCode::too_few_points: return MQ_ERR_TOO_FEW_POINTS;
    case mq::ErrorCode::singular_at_zero: return MQ_ERR_SINGULAR_AT_ZERO;
    case mq::ErrorCode::degenerate_mass: return MQ_ERR_DEGENERATE_MASS;
    default: return MQ_ERR_INTERNAL;
  }
}

template <typename F>
mq_status wrap(F&& body) {
  try {
    return body();
  } catch (const mq::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MQ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MQ_ERR_INTERNAL;
  }
}

mq_status arg_error(const char* what) {
  g_last_error = what;
  return MQ_ERR_INVALID_ARGUMENT;
}

const mq::ParticleMeasure* as_particles(const mq_measure* m) {
  return std::get_if<mq::ParticleMeasure>(&m->m);
}

const mq::GridDensity* as_grid(const mq_measure* m) {
  return std::get_if<mq::GridDensity>(&m->m);
}

mq::EstimationKernel kernel_from_int(int k) {
  if (k == MQ_KERNEL_TRIANGULAR) return mq::EstimationKernel::triangular;
  if (k == MQ_KERNEL_GAUSSIAN) return mq::EstimationKernel::gaussian;
  mq::fail(mq::ErrorCode::invalid_argument, "unknown estimation kernel id");
}

mq::SolverConfig config_from_c(const mq_solver_config* cfg) {
  mq::SolverConfig out;
  if (!cfg) return out;
  out.max_iters = cfg->max_iters;
  out.grad_tol = cfg->grad_tol;
  out.step_init = cfg->step_init;
  out.armijo_c = cfg->armijo_c;
  out.armijo_shrink = cfg->armijo_shrink;
  out.lambda = cfg->lambda;
  switch (cfg->tv_method) {
    case MQ_TV_KERNEL: out.tv_method = mq::TvMethod::kernel_estimate; break;
    case MQ_TV_POINTDIFF: out.tv_method = mq::TvMethod::point_difference; break;
    case MQ_TV_NONE: out.tv_method = mq::TvMethod::none; break;
    default:
      mq::fail(mq::ErrorCode::invalid_argument, "unknown tv_method id");
  }
  out.tv_smoothing = cfg->tv_smoothing;
  out.tv_bandwidth = cfg->tv_bandwidth;
  out.tv_kernel = kernel_from_int(cfg->tv_kernel);
  out.init = cfg->init == MQ_INIT_RANDOM ? mq::InitKind::random : mq::InitKind::tiling;
  out.seed = cfg->seed;
  out.fista_lipschitz = cfg->fista_lipschitz;
  return out;
}

mq_status finish_solve(const mq::SolverTrace& trace, mq_trace** trace_out) {
  if (trace_out) *trace_out = new mq_trace{trace};
  if (trace.converged) return MQ_OK;
  g_last_error = "solver stopped: " + trace.termination;
  return trace.termination == "line_search_failed" ? MQ_ERR_LINE_SEARCH
                                                   : MQ_ERR_NOT_CONVERGED;
}

}  // namespace

extern "C" {

const char* mq_version(void) { return "1.0.0"; }

const char* mq_status_name(mq_status s) {
  switch (s) {
    case MQ_OK: return "ok";
    case MQ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MQ_ERR_DIM_MISMATCH: return "dim_mismatch";
    case MQ_ERR_NON_FINITE: return "non_finite";
    case MQ_ERR_DOMAIN: return "domain_error";
    case MQ_ERR_UNSUPPORTED_DIM: return "unsupported_dim";
    case MQ_ERR_MALFORMED_INPUT: return "malformed_input";
    case MQ_ERR_IO: return "io_error";
    case MQ_ERR_NOT_CONVERGED: return "not_converged";
    case MQ_ERR_LINE_SEARCH: return "line_search_failed";
    case MQ_ERR_MIXED_REPRESENTATION: return "mixed_representation";
    case MQ_ERR_TOO_FEW_POINTS: return "too_few_points";
    case MQ_ERR_SINGULAR_AT_ZERO: return "singular_at_zero";
    case MQ_ERR_DEGENERATE_MASS: return "degenerate_mass";
    default: return "internal_error";
  }
}

const char* mq_last_error(void) { return g_last_error.c_str(); }

mq_status mq_measure_from_points(int dim, const double* coords, int n,
                                 mq_measure** out) {
  if (!coords || !out || n < 1) return arg_error("null/empty input");
  return wrap([&] {
    std::vector<double> c(coords, coords + static_cast<size_t>(n) * dim);
    *out = new mq_measure{mq::from_points(dim, c)};
    return MQ_OK;
  });
}

mq_status mq_measure_grid(int dim, const double* lo, const double* hi,
                          const int* cells, const double* values,
                          mq_measure** out) {
  if (!lo || !hi || !cells || !values || !out) return arg_error("null input");
  return wrap([&] {
    if (dim < 1 || dim > 2)
      mq::fail(mq::ErrorCode::unsupported_dim, "grid dim must be 1 or 2");
    std::array<double, 2> alo{lo[0], dim > 1 ? lo[1] : 0.0};
    std::array<double, 2> ahi{hi[0], dim > 1 ? hi[1] : 1.0};
    std::array<int, 2> ac{cells[0], dim > 1 ? cells[1] : 1};
    size_t count = static_cast<size_t>(ac[0]) * (dim > 1 ? ac[1] : 1);
    std::vector<double> v(values, values + count);
    *out = new mq_measure{mq::GridDensity(dim, alo, ahi, ac, std::move(v))};
    return MQ_OK;
  });
}

mq_status mq_measure_builtin(const char* name, uint64_t seed, mq_measure** out) {
  if (!name || !out) return arg_error("null input");
  return wrap([&] {
    *out = new mq_measure{mq::builtin_density(name, seed)};
    return MQ_OK;
  });
}

mq_status mq_measure_read_csv(const char* path, mq_measure** out) {
  if (!path || !out) return arg_error("null input");
  return wrap([&] {
    *out = new mq_measure{mq::read_points_csv(path)};
    return MQ_OK;
  });
}

mq_status mq_measure_write_csv(const mq_measure* m, const char* path) {
  if (!m || !path) return arg_error("null input");
  return wrap([&] {
    const auto* p = as_particles(m);
    if (!p)
      mq::fail(mq::ErrorCode::invalid_argument,
               "CSV export is defined for particle measures");
    mq::write_points_csv(path, *p);
    return MQ_OK;
  });
}

mq_status mq_measure_from_pgm(const char* path, mq_measure** out,
                              int* uniform_fallback) {
  if (!path || !out) return arg_error("null input");
  return wrap([&] {
    bool fb = false;
    mq::PgmImage img = mq::read_pgm_file(path);
    *out = new mq_measure{mq::grid_from_image(img, &fb)};
    if (uniform_fallback) *uniform_fallback = fb ? 1 : 0;
    return MQ_OK;
  });
}

void mq_measure_free(mq_measure* m) { delete m; }

mq_status mq_measure_copy(const mq_measure* m, mq_measure** out) {
  if (!m || !out) return arg_error("null input");
  *out = new mq_measure{m->m};
  return MQ_OK;
}

int mq_measure_kind(const mq_measure* m) {
  return m && as_grid(m) ? MQ_MEASURE_GRID : MQ_MEASURE_PARTICLES;
}

int mq_measure_dim(const mq_measure* m) { return m ? mq::measure_dim(m->m) : 0; }

int mq_particles_count(const mq_measure* m) {
  const auto* p = m ? as_particles(m) : nullptr;
  return p ? p->size() : 0;
}

mq_status mq_particles_coords(const mq_measure* m, double* out) {
  if (!m || !out) return arg_error("null input");
  const auto* p = as_particles(m);
  if (!p) return arg_error("measure is not a particle set");
  std::memcpy(out, p->coords().data(), p->coords().size() * sizeof(double));
  return MQ_OK;
}

mq_status mq_grid_shape(const mq_measure* m, int* cells, double* lo, double* hi) {
  if (!m) return arg_error("null input");
  const auto* g = as_grid(m);
  if (!g) return arg_error("measure is not a grid density");
  for (int a = 0; a < g->dim(); ++a) {
    if (cells) cells[a] = g->cells()[a];
    if (lo) lo[a] = g->lo()[a];
    if (hi) hi[a] = g->hi()[a];
  }
  return MQ_OK;
}

mq_status mq_grid_values(const mq_measure* m, double* out) {
  if (!m || !out) return arg_error("null input");
  const auto* g = as_grid(m);
  if (!g) return arg_error("measure is not a grid density");
  std::memcpy(out, g->values().data(), g->values().size() * sizeof(double));
  return MQ_OK;
}

mq_status mq_sample_empirical(const mq_measure* omega, int n, uint64_t seed,
                              mq_measure** out) {
  if (!omega || !out) return arg_error("null input");
  return wrap([&] {
    const auto* g = as_grid(omega);
    if (!g)
      mq::fail(mq::ErrorCode::invalid_argument,
               "sampling draws from a grid density");
    *out = new mq_measure{mq::sample_empirical(*g, n, seed)};
    return MQ_OK;
  });
}

mq_status mq_moment(const mq_measure* m, double order, double* out) {
  if (!m || !out) return arg_error("null input");
  return wrap([&] {
    *out = mq::moment(m->m, order);
    return MQ_OK;
  });
}

mq_status mq_char_function(const mq_measure* m, const double* xi, int dim,
                           double* re, double* im) {
  if (!m || !xi || !re || !im) return arg_error("null input");
  return wrap([&] {
    auto v = mq::char_function(m->m, xi, dim);
    *re = v.real();
    *im = v.imag();
    return MQ_OK;
  });
}

mq_status mq_wasserstein1_1d(const mq_measure* a, const mq_measure* b, double* out) {
  if (!a || !b || !out) return arg_error("null input");
  return wrap([&] {
    *out = mq::wasserstein1_1d(a->m, b->m);
    return MQ_OK;
  });
}

mq_status mq_power_eval(double q, const double* x, int dim, double* out) {
  if (!x || !out || dim < 1) return arg_error("null/empty input");
  return wrap([&] {
    *out = mq::power_eval(q, x, dim);
    return MQ_OK;
  });
}

mq_status mq_dq_constant(int dim, double q, double* out) {
  if (!out) return arg_error("null input");
  return wrap([&] {
    *out = mq::dq_constant(dim, q);
    return MQ_OK;
  });
}

mq_status mq_generalized_ft(int dim, double q, const double* xi, double* out) {
  if (!xi || !out) return arg_error("null input");
  return wrap([&] {
    *out = mq::generalized_ft(dim, q, xi);
    return MQ_OK;
  });
}

mq_status mq_estimation_kernel_eval(int kernel, double x, double* value,
                                    double* derivative) {
  if (!value || !derivative) return arg_error("null input");
  return wrap([&] {
    auto kv = mq::estimation_kernel_eval(kernel_from_int(kernel), x);
    *value = kv.value;
    *derivative = kv.derivative;
    return MQ_OK;
  });
}

void mq_fourier_quad_init(mq_fourier_quad* quad) {
  if (!quad) return;
  quad->xi_min = 1e-6;
  quad->xi_max = 1e6;
  quad->nodes_per_decade = 32;
}

mq_status mq_particle_energy(const mq_measure* x, const mq_measure* omega,
                             double qa, double qr, mq_energy_report* out) {
  if (!x || !omega || !out) return arg_error("null input");
  return wrap([&] {
    const auto* p = as_particles(x);
    if (!p)
      mq::fail(mq::ErrorCode::invalid_argument, "x must be a particle measure");
    mq::PowerKernel k(p->dim(), qa, qr);
    mq::EnergyReport rep = mq::particle_energy(*p, omega->m, k);
    *out = {};
    out->attraction = rep.attraction;
    out->repulsion = rep.repulsion;
    out->total = rep.total;
    return MQ_OK;
  });
}

mq_status mq_particle_gradient(const mq_measure* x, const mq_measure* omega,
                               double qa, double qr, double* grad) {
  if (!x || !omega || !grad) return arg_error("null input");
  return wrap([&] {
    const auto* p = as_particles(x);
    if (!p)
      mq::fail(mq::ErrorCode::invalid_argument, "x must be a particle measure");
    mq::PowerKernel k(p->dim(), qa, qr);
    auto g = mq::particle_gradient(*p, omega->m, k);
    std::memcpy(grad, g.data(), g.size() * sizeof(double));
    return MQ_OK;
  });
}

mq_status mq_symmetrized_energy(const mq_measure* mu, const mq_measure* omega,
                                double q, double* out) {
  if (!mu || !omega || !out) return arg_error("null input");
  return wrap([&] {
    *out = mq::symmetrized_energy(mu->m, omega->m, q);
    return MQ_OK;
  });
}

mq_status mq_fourier_energy(const mq_measure* mu, const mq_measure* omega, double q,
                            const mq_fourier_quad* quad, double* out) {
  if (!mu || !omega || !out) return arg_error("null input");
  return wrap([&] {
    mq::FourierQuadrature fq;
    if (quad) {
      fq.xi_min = quad->xi_min;
      fq.xi_max = quad->xi_max;
      fq.nodes_per_decade = quad->nodes_per_decade;
    }
    *out = mq::fourier_energy(mu->m, omega->m, q, fq);
    return MQ_OK;
  });
}

mq_status mq_grid_quadratic_matrix(const mq_measure* grid, double q, double* out) {
  if (!grid || !out) return arg_error("null input");
  return wrap([&] {
    const auto* g = as_grid(grid);
    if (!g)
      mq::fail(mq::ErrorCode::invalid_argument, "measure is not a grid density");
    auto a = mq::grid_quadratic_matrix(*g, q);
    std::memcpy(out, a.data(), a.size() * sizeof(double));
    return MQ_OK;
  });
}

mq_status mq_tiling_build(const mq_measure* omega_grid, int n, mq_tiling** out) {
  if (!omega_grid || !out) return arg_error("null input");
  return wrap([&] {
    const auto* g = as_grid(omega_grid);
    if (!g)
      mq::fail(mq::ErrorCode::invalid_argument,
               "tilings are built from grid densities");
    *out = new mq_tiling{mq::Tiling(*g, n)};
    return MQ_OK;
  });
}

void mq_tiling_free(mq_tiling* t) { delete t; }

int mq_tiling_size(const mq_tiling* t) { return t ? t->t.size() : 0; }

int mq_tiling_dim(const mq_tiling* t) { return t ? t->t.dim() : 0; }

int64_t mq_tiling_n_tilde(const mq_tiling* t) { return t ? t->t.n_tilde() : 0; }

int mq_tiling_axis_counts(const mq_tiling* t, int* out, int cap) {
  if (!t || !out) return 0;
  int n = static_cast<int>(t->t.axis_counts().size());
  int w = n < cap ? n : cap;
  for (int i = 0; i < w; ++i) out[i] = t->t.axis_counts()[i];
  return w;
}

mq_status mq_tiling_tile(const mq_tiling* t, int k, int* index, double* lo,
                         double* hi, double* mass) {
  if (!t) return arg_error("null input");
  if (k < 0 || k >= t->t.size()) return arg_error("tile index out of range");
  const mq::Tile& tile = t->t.tiles()[k];
  for (int a = 0; a < t->t.dim(); ++a) {
    if (index) index[a] = tile.index[a];
    if (lo) lo[a] = tile.lo[a];
    if (hi) hi[a] = tile.hi[a];
  }
  if (mass) *mass = tile.mass;
  return MQ_OK;
}

mq_status mq_tiling_points(const mq_tiling* t, int rule, mq_measure** out) {
  if (!t || !out) return arg_error("null input");
  return wrap([&] {
    mq::PointRule r = rule == MQ_RULE_MASS_CENTROID ? mq::PointRule::mass_centroid
                                                    : mq::PointRule::center;
    *out = new mq_measure{mq::tiling_points(t->t, r)};
    return MQ_OK;
  });
}

mq_status mq_tiling_write_csv(const mq_tiling* t, const char* path) {
  if (!t || !path) return arg_error("null input");
  return wrap([&] {
    std::string csv = mq::tiling_to_csv(t->t);
    FILE* f = std::fopen(path, "wb");
    if (!f) mq::fail(mq::ErrorCode::io_error, "cannot open tile CSV for writing");
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    return MQ_OK;
  });
}

mq_status mq_kernel_tv(const mq_measure* particles, double h, int kernel,
                       mq_tv_estimate* out) {
  if (!particles || !out) return arg_error("null input");
  return wrap([&] {
    const auto* p = as_particles(particles);
    if (!p)
      mq::fail(mq::ErrorCode::invalid_argument, "kernel TV acts on particles");
    mq::TVEstimate tv = mq::kernel_tv(*p, h, kernel_from_int(kernel));
    out->value = tv.value;
    out->infinite = tv.infinite ? 1 : 0;
    out->bandwidth = tv.bandwidth.value_or(-1.0);
    return MQ_OK;
  });
}

mq_status mq_pointdiff_tv(const mq_measure* particles, mq_tv_estimate* out) {
  if (!particles || !out) return arg_error("null input");
  return wrap([&] {
    const auto* p = as_particles(particles);
    if (!p)
      mq::fail(mq::ErrorCode::invalid_argument,
               "point-difference TV acts on particles");
    mq::TVEstimate tv = mq::pointdiff_tv_1d(*p);
    out->value = tv.value;
    out->infinite = tv.infinite ? 1 : 0;
    out->bandwidth = -1.0;
    return MQ_OK;
  });
}

mq_status mq_grid_tv(const mq_measure* grid, mq_tv_estimate* out) {
  if (!grid || !out) return arg_error("null input");
  return wrap([&] {
    const auto* g = as_grid(grid);
    if (!g) mq::fail(mq::ErrorCode::invalid_argument, "grid TV acts on grids");
    mq::TVEstimate tv = mq::grid_tv(*g);
    out->value = tv.value;
    out->infinite = tv.infinite ? 1 : 0;
    out->bandwidth = -1.0;
    return MQ_OK;
  });
}

double mq_bandwidth_schedule(int64_t n, int d) {
  try {
    return mq::bandwidth_schedule(n, d);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1.0;
  }
}

void mq_solver_config_init(mq_solver_config* cfg) {
  if (!cfg) return;
  mq::SolverConfig d;
  cfg->max_iters = d.max_iters;
  cfg->grad_tol = d.grad_tol;
  cfg->step_init = d.step_init;
  cfg->armijo_c = d.armijo_c;
  cfg->armijo_shrink = d.armijo_shrink;
  cfg->lambda = d.lambda;
  cfg->tv_method = MQ_TV_NONE;
  cfg->tv_smoothing = d.tv_smoothing;
  cfg->tv_bandwidth = d.tv_bandwidth;
  cfg->tv_kernel = MQ_KERNEL_TRIANGULAR;
  cfg->init = MQ_INIT_TILING;
  cfg->seed = 0;
  cfg->fista_lipschitz = 0.0;
}

void mq_trace_free(mq_trace* t) { delete t; }

int mq_trace_length(const mq_trace* t) {
  return t ? static_cast<int>(t->t.entries.size()) : 0;
}

mq_status mq_trace_entry(const mq_trace* t, int i, int* iter, double* objective,
                         double* residual, double* step) {
  if (!t) return arg_error("null input");
  if (i < 0 || i >= static_cast<int>(t->t.entries.size()))
    return arg_error("trace index out of range");
  const mq::TraceEntry& e = t->t.entries[i];
  if (iter) *iter = e.iter;
  if (objective) *objective = e.objective;
  if (residual) *residual = e.residual;
  if (step) *step = e.step;
  return MQ_OK;
}

const char* mq_trace_termination(const mq_trace* t) {
  return t ? t->t.termination.c_str() : "";
}

int mq_trace_converged(const mq_trace* t) {
  return t && t->t.converged ? 1 : 0;
}

mq_status mq_trace_write_csv(const mq_trace* t, const char* path) {
  if (!t || !path) return arg_error("null input");
  return wrap([&] {
    std::string csv = mq::trace_to_csv(t->t);
    FILE* f = std::fopen(path, "wb");
    if (!f) mq::fail(mq::ErrorCode::io_error, "cannot open trace CSV for writing");
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
    return MQ_OK;
  });
}

mq_status mq_minimize_particles(const mq_measure* omega, int n, double qa, double qr,
                                const mq_solver_config* cfg,
                                const mq_measure* init_points, mq_measure** out,
                                mq_trace** trace) {
  if (!omega || !out) return arg_error("null input");
  return wrap([&]() -> mq_status {
    mq::SolverConfig c = config_from_c(cfg);
    mq::PowerKernel k(mq::measure_dim(omega->m), qa, qr);
    const mq::ParticleMeasure* init = nullptr;
    if (init_points) {
      init = as_particles(init_points);
      if (!init)
        mq::fail(mq::ErrorCode::invalid_argument, "init must be particles");
    }
    auto [points, tr] = mq::minimize_particles(omega->m, n, k, c, init);
    *out = new mq_measure{std::move(points)};
    return finish_solve(tr, trace);
  });
}

mq_status mq_minimize_grid(const mq_measure* w, double q,
                           const mq_solver_config* cfg, mq_measure** out,
                           mq_trace** trace) {
  if (!w || !out) return arg_error("null input");
  return wrap([&]() -> mq_status {
    const auto* g = as_grid(w);
    if (!g)
      mq::fail(mq::ErrorCode::invalid_argument, "grid solver needs a grid datum");
    mq::SolverConfig c = config_from_c(cfg);
    auto [u, tr] = mq::minimize_grid(*g, q, c);
    *out = new mq_measure{std::move(u)};
    return finish_solve(tr, trace);
  });
}

mq_status mq_write_points_pgm(const char* path, int width, int height,
                              const mq_measure* points) {
  if (!path || !points || width < 1 || height < 1)
    return arg_error("null/empty input");
  return wrap([&] {
    const auto* p = as_particles(points);
    if (!p || p->dim() != 2)
      mq::fail(mq::ErrorCode::invalid_argument, "preview needs 2D particles");
    mq::PgmImage img;
    img.width = width;
    img.height = height;
    img.maxval = 255;
    img.pixels.assign(static_cast<size_t>(width) * height, 255);
    for (int i = 0; i < p->size(); ++i) {
      int px = static_cast<int>(p->point(i)[0] * width);
      int py = static_cast<int>(p->point(i)[1] * height);
      px = std::min(std::max(px, 0), width - 1);
      py = std::min(std::max(py, 0), height - 1);
      img.pixels[px + static_cast<size_t>(width) * py] = 0;
    }
    mq::write_pgm_file(path, img);
    return MQ_OK;
  });
}

}  // extern "C"

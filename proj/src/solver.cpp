#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "tiling.hpp"

namespace mq {

namespace {

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double support_scale(const Measure& omega) {
  std::array<double, 2> lo, hi;
  support_box(omega, lo, hi);
  double d2 = 0.0;
  for (int a = 0; a < measure_dim(omega); ++a) {
    double s = hi[a] - lo[a];
    d2 += s * s;
  }
  double d = std::sqrt(d2);
  return d > 0.0 ? d : 1.0;
}

ParticleMeasure initial_points(const Measure& omega, int n, const SolverConfig& cfg) {
  if (std::holds_alternative<GridDensity>(omega)) {
    const auto& g = std::get<GridDensity>(omega);
    if (cfg.init == InitKind::random) return sample_empirical(g, n, cfg.seed);
    Tiling t(g, n);
    return tiling_points(t, PointRule::center);
  }
  // Particle datum: reuse its atoms cyclically (deterministic), or draw
  // atom indices at random.
  const auto& p = std::get<ParticleMeasure>(omega);
  std::vector<double> coords;
  coords.reserve(static_cast<size_t>(n) * p.dim());
  if (cfg.init == InitKind::random) {
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < n; ++i) {
      int j = static_cast<int>(rng() % p.size());
      for (int a = 0; a < p.dim(); ++a) coords.push_back(p.point(j)[a]);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < p.dim(); ++a) coords.push_back(p.point(i % p.size())[a]);
  }
  return ParticleMeasure(p.dim(), std::move(coords));
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) fail(ErrorCode::invalid_argument, "max_iters must be >= 1");
  if (!(step_init > 0.0)) fail(ErrorCode::invalid_argument, "step_init must be > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    fail(ErrorCode::invalid_argument, "armijo_c must lie in (0,1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    fail(ErrorCode::invalid_argument, "armijo_shrink must lie in (0,1)");
  if (lambda < 0.0) fail(ErrorCode::invalid_argument, "lambda must be >= 0");
}

std::string trace_to_csv(const SolverTrace& t) {
  std::ostringstream out;
  out << "# iter,objective,residual,step terminated=" << t.termination << "\n";
  char buf[128];
  for (const TraceEntry& e : t.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", e.iter, e.objective,
                  e.residual, e.step);
    out << buf;
  }
  return out.str();
}

std::pair<ParticleMeasure, SolverTrace> minimize_particles(
    const Measure& omega, int n, const PowerKernel& kernel,
    const SolverConfig& cfg, const ParticleMeasure* init_points) {
  cfg.validate();
  if (n < 1) fail(ErrorCode::invalid_argument, "particle count must be >= 1");
  int d = measure_dim(omega);
  if (cfg.lambda > 0.0 && cfg.tv_method == TvMethod::point_difference && d != 1)
    fail(ErrorCode::unsupported_dim, "point-difference TV needs d = 1");
  if (cfg.lambda > 0.0 && cfg.tv_method == TvMethod::grid)
    fail(ErrorCode::invalid_argument, "grid TV does not apply to particles");

  ParticleMeasure x = init_points ? *init_points : initial_points(omega, n, cfg);
  if (x.size() != n || x.dim() != d)
    fail(ErrorCode::dim_mismatch, "init points shape mismatch");

  double scale = support_scale(omega);
  double grad_tol = cfg.grad_tol >= 0.0 ? cfg.grad_tol : 1e-8 * n;
  double eps_tv = cfg.tv_smoothing >= 0.0 ? cfg.tv_smoothing : 1e-6 * scale;
  double h = cfg.tv_bandwidth > 0.0 ? cfg.tv_bandwidth : bandwidth_schedule(n, d);
  bool with_tv = cfg.lambda > 0.0 && cfg.tv_method != TvMethod::none;

  auto objective = [&](const ParticleMeasure& pts, std::vector<double>* grad) {
    EnergyReport rep = particle_energy(pts, omega, kernel);
    double f = rep.total;
    if (grad) *grad = particle_gradient(pts, omega, kernel);
    if (with_tv) {
      if (cfg.tv_method == TvMethod::point_difference) {
        TvValueGrad tv = pointdiff_tv_value_grad(pts, eps_tv);
        if (tv.infinite) return std::numeric_limits<double>::infinity();
        f += cfg.lambda * tv.value;
        if (grad)
          for (size_t i = 0; i < grad->size(); ++i)
            (*grad)[i] += cfg.lambda * tv.grad[i];
      } else {
        TvValueGrad tv = kernel_tv_value_grad(pts, h, cfg.tv_kernel, eps_tv);
        f += cfg.lambda * tv.value;
        if (grad)
          for (size_t i = 0; i < grad->size(); ++i)
            (*grad)[i] += cfg.lambda * tv.grad[i];
      }
    }
    return f;
  };

  SolverTrace trace;
  std::vector<double> coords(x.coords());
  std::vector<double> grad;
  double f = objective(x, &grad);
  double last_step = 0.0;
  int stall = 0;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    double gn = l2_norm(grad);
    trace.entries.push_back({iter, f, gn, last_step});
    if (gn <= grad_tol) {
      trace.termination = "grad_tol";
      trace.converged = true;
      break;
    }
    double s = cfg.step_init;
    bool accepted = false;
    std::vector<double> trial(coords.size());
    double f_trial = 0.0;
    while (s > 1e-20) {
      for (size_t i = 0; i < coords.size(); ++i) trial[i] = coords[i] - s * grad[i];
      ParticleMeasure cand(d, trial);
      f_trial = objective(cand, nullptr);
      if (f_trial <= f - cfg.armijo_c * s * gn * gn) {
        accepted = true;
        break;
      }
      s *= cfg.armijo_shrink;
    }
    if (!accepted) {
      trace.termination = "line_search_failed";
      trace.converged = false;
      break;
    }
    double decrease = f - f_trial;
    coords = trial;
    x = ParticleMeasure(d, coords);
    f = objective(x, &grad);
    last_step = s;
    stall = decrease <= 1e-15 * std::max(1.0, std::abs(f)) ? stall + 1 : 0;
    if (stall >= 5) {
      trace.entries.push_back({static_cast<int>(trace.entries.size()), f,
                               l2_norm(grad), last_step});
      trace.termination = "stalled";
      trace.converged = true;
      break;
    }
  }
  if (trace.termination.empty()) {
    trace.termination = "max_iters";
    trace.converged = false;
  }
  return {x, trace};
}

std::vector<double> project_simplex(std::vector<double> v, double target) {
  if (!(target > 0.0)) fail(ErrorCode::invalid_argument, "simplex sum must be > 0");
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  bool nonneg = std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  if (nonneg && std::abs(sum - target) <= 1e-12 * std::max(1.0, target)) return v;

  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cums = 0.0, tau = 0.0;
  int rho = 0;
  for (size_t k = 0; k < u.size(); ++k) {
    cums += u[k];
    double t = (cums - target) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) {
      rho = static_cast<int>(k + 1);
      tau = t;
    }
  }
  for (auto& x : v) x = std::max(0.0, x - tau);
  return v;
}

double projected_gradient_norm(const std::vector<double>& u,
                               const std::vector<double>& grad,
                               double active_tol) {
  size_t m = u.size();
  // Minimize |d + g|^2 over {sum d = 0, d_i >= 0 where u_i is active}:
  // active coordinates whose multiplier would push inward get pinned to 0.
  std::vector<bool> pinned(m, false);
  for (int rounds = 0; rounds < 64; ++rounds) {
    double mean = 0.0;
    int free_count = 0;
    for (size_t i = 0; i < m; ++i) {
      if (pinned[i]) continue;
      mean += grad[i];
      ++free_count;
    }
    if (free_count == 0) return 0.0;
    mean /= free_count;
    bool changed = false;
    for (size_t i = 0; i < m; ++i) {
      if (pinned[i] || u[i] > active_tol) continue;
      if (-(grad[i] - mean) < 0.0) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (!changed) {
      double norm2 = 0.0;
      for (size_t i = 0; i < m; ++i) {
        if (pinned[i]) continue;
        double di = -(grad[i] - mean);
        norm2 += di * di;
      }
      return std::sqrt(norm2);
    }
  }
  return l2_norm(grad);  // conservative fallback
}

namespace {

struct GridObjective {
  const std::vector<double>& a;  // dense M x M
  const std::vector<double>& w;
  double lambda;
  double eps;
  int m;

  void matvec(const std::vector<double>& v, std::vector<double>& out) const {
    for (int i = 0; i < m; ++i) {
      const double* row = a.data() + static_cast<size_t>(i) * m;
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += row[j] * v[j];
      out[i] = s;
    }
  }

  double value(const std::vector<double>& u, std::vector<double>* grad) const {
    std::vector<double> diff(m);
    for (int i = 0; i < m; ++i) diff[i] = u[i] - w[i];
    std::vector<double> ad(m);
    matvec(diff, ad);
    double f = 0.0;
    for (int i = 0; i < m; ++i) f += diff[i] * ad[i];
    if (grad) {
      grad->assign(m, 0.0);
      for (int i = 0; i < m; ++i) (*grad)[i] = 2.0 * ad[i];
    }
    if (lambda > 0.0) {
      for (int i = 0; i + 1 < m; ++i) {
        double s = u[i + 1] - u[i];
        double phi = eps > 0.0 ? std::sqrt(s * s + eps * eps) : std::abs(s);
        f += lambda * phi;
        if (grad) {
          double dphi = eps > 0.0 ? s / phi : (s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0));
          (*grad)[i + 1] += lambda * dphi;
          (*grad)[i] -= lambda * dphi;
        }
      }
    }
    return f;
  }
};

// Largest eigenvalue of the quadratic part restricted to zero-sum vectors.
double quadratic_lipschitz(const GridObjective& obj) {
  int m = obj.m;
  std::vector<double> v(m), av(m);
  for (int i = 0; i < m; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  auto project0 = [&](std::vector<double>& z) {
    double mean = std::accumulate(z.begin(), z.end(), 0.0) / m;
    for (auto& x : z) x -= mean;
  };
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    project0(v);
    double nv = l2_norm(v);
    if (nv == 0.0) break;
    for (auto& x : v) x /= nv;
    obj.matvec(v, av);
    for (auto& x : av) x *= 2.0;
    project0(av);
    lam = std::inner_product(v.begin(), v.end(), av.begin(), 0.0);
    v = av;
  }
  return std::abs(lam);
}

}  // namespace

std::pair<GridDensity, SolverTrace> minimize_grid(const GridDensity& w, double q,
                                                  const SolverConfig& cfg) {
  cfg.validate();
  if (w.dim() != 1) fail(ErrorCode::unsupported_dim, "grid solver is 1D only");
  int m = w.cells()[0];
  double h = w.cell_width(0);
  std::vector<double> a = grid_quadratic_matrix(w, q);

  double range = *std::max_element(w.values().begin(), w.values().end()) -
                 *std::min_element(w.values().begin(), w.values().end());
  double eps = cfg.tv_smoothing >= 0.0 ? cfg.tv_smoothing
                                       : 1e-3 * std::max(range, 1e-6);
  GridObjective obj{a, w.values(), cfg.lambda, eps, m};

  double lips = cfg.fista_lipschitz > 0.0 ? cfg.fista_lipschitz
                                          : 1.2 * quadratic_lipschitz(obj);
  if (cfg.lambda > 0.0 && eps > 0.0) lips += 4.0 * cfg.lambda / eps;
  if (!(lips > 0.0)) lips = 1.0;
  double step = 1.0 / lips;

  double target = std::accumulate(w.values().begin(), w.values().end(), 0.0);
  std::vector<double> u = project_simplex(w.values(), target);
  std::vector<double> y = u, grad(m), z(m);
  double t_acc = 1.0;
  double f_u = obj.value(u, nullptr);
  double wmax = 1.0 + *std::max_element(w.values().begin(), w.values().end());
  double resid_tol = cfg.grad_tol >= 0.0 ? cfg.grad_tol : 1e-12 * wmax;
  double resid_floor = 1e-6 * wmax;

  SolverTrace trace;
  int stall = 0;
  double resid = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    obj.value(y, &grad);
    for (int i = 0; i < m; ++i) z[i] = y[i] - step * grad[i];
    z = project_simplex(std::move(z), target);
    resid = 0.0;
    for (int i = 0; i < m; ++i) resid = std::max(resid, std::abs(z[i] - y[i]));

    double f_z = obj.value(z, nullptr);
    // Monotone variant: keep the better of the accelerated candidate and
    // the previous iterate.
    std::vector<double> u_next;
    double f_next;
    if (f_z <= f_u) {
      u_next = z;
      f_next = f_z;
    } else {
      u_next = u;
      f_next = f_u;
    }
    trace.entries.push_back({iter, f_next, resid, step});

    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc));
    for (int i = 0; i < m; ++i)
      y[i] = u_next[i] + (t_acc / t_next) * (z[i] - u_next[i]) +
             ((t_acc - 1.0) / t_next) * (u_next[i] - u[i]);
    double decrease = f_u - f_next;
    u = std::move(u_next);
    f_u = f_next;
    t_acc = t_next;

    if (resid <= resid_tol) {
      trace.termination = "residual_tol";
      trace.converged = true;
      break;
    }
    stall = decrease <= 1e-16 * std::max(1.0, std::abs(f_u)) ? stall + 1 : 0;
    if (stall >= 50 && resid <= resid_floor) {
      trace.termination = "stalled";
      trace.converged = true;
      break;
    }
  }
  if (trace.termination.empty()) {
    trace.converged = resid <= resid_floor;
    trace.termination = trace.converged ? "max_iters" : "not_converged";
  }

  // Re-normalize the projected masses exactly before constructing the grid.
  double mass = std::accumulate(u.begin(), u.end(), 0.0) * h;
  if (mass > 0.0)
    for (auto& x : u) x /= mass;
  GridDensity result(1, w.lo(), w.hi(), {m, 1}, std::move(u));
  return {result, trace};
}

}  // namespace mq

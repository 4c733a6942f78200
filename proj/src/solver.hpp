#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "kernels.hpp"
#include "measure.hpp"
#include "tv.hpp"

namespace mq {

enum class InitKind { tiling, random };

struct SolverConfig {
  int max_iters = 20000;
  double grad_tol = -1.0;       // < 0: auto, 1e-8 * N for particles
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double lambda = 0.0;
  TvMethod tv_method = TvMethod::none;
  double tv_smoothing = -1.0;   // < 0: auto (1e-6 * scale for particles)
  double tv_bandwidth = -1.0;   // < 0: bandwidth_schedule(N, d)
  EstimationKernel tv_kernel = EstimationKernel::triangular;
  InitKind init = InitKind::tiling;
  std::uint64_t seed = 0;
  double fista_lipschitz = 0.0;  // <= 0: power-iteration estimate

  void validate() const;
};

struct TraceEntry {
  int iter;
  double objective;
  double residual;  // gradient norm (particles) / prox-mapping norm (grid)
  double step;
};

struct SolverTrace {
  std::vector<TraceEntry> entries;
  std::string termination;
  bool converged = false;
};

std::string trace_to_csv(const SolverTrace& t);

// Gradient descent with Armijo backtracking on E_N + lambda * TV.
// init_points overrides cfg.init when provided.
std::pair<ParticleMeasure, SolverTrace> minimize_particles(
    const Measure& omega, int n, const PowerKernel& kernel,
    const SolverConfig& cfg, const ParticleMeasure* init_points = nullptr);

// Accelerated projected gradient (monotone FISTA) for the grid form:
// (u-w)^T A (u-w) + lambda * sum |u_{i+1} - u_i|  over the scaled simplex
// {u >= 0, sum u_i h_c = 1}; TV smoothed when the smoothing parameter > 0.
std::pair<GridDensity, SolverTrace> minimize_grid(const GridDensity& w, double q,
                                                  const SolverConfig& cfg);

// Euclidean projection onto {v >= 0, sum v = target}; exact sort-based rule.
// Already-feasible inputs are returned unchanged.
std::vector<double> project_simplex(std::vector<double> v, double target);

// Norm of the steepest feasible descent direction at u: the negative
// gradient projected onto {d : sum d = 0, d_i >= 0 where u_i = 0}.
double projected_gradient_norm(const std::vector<double>& u,
                               const std::vector<double>& grad,
                               double active_tol = 1e-12);

}  // namespace mq

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "solver.hpp"
#include "builtins.hpp"

using namespace mq;

namespace {

GridDensity uniform_grid(int cells) {
  std::vector<double> v(cells, 1.0);
  return GridDensity(1, {0, 0}, {1, 1}, {cells, 1}, std::move(v));
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.values().size(); ++i)
    s += std::abs(a.values()[i] - b.values()[i]);
  return s * a.cell_volume();
}

}  // namespace

TEST_CASE("single point slides to the atom") {
  SolverConfig cfg;
  cfg.max_iters = 500;
  ParticleMeasure init(1, {0.7});
  auto [x, trace] = minimize_particles(Measure(ParticleMeasure(1, {0.0})), 1,
                                       PowerKernel(1, 1.5, 1.5), cfg, &init);
  CHECK(std::abs(x.point(0)[0]) < 1e-4);
  CHECK(trace.converged);
}

TEST_CASE("two points on the uniform density match a grid-search oracle") {
  GridDensity omega = uniform_grid(1024);
  SolverConfig cfg;
  cfg.max_iters = 4000;
  PowerKernel k(1, 1.0, 1.0);
  auto [x, trace] = minimize_particles(Measure(omega), 2, k, cfg);

  std::vector<double> pts(x.coords());
  std::sort(pts.begin(), pts.end());
  CHECK(pts[0] + pts[1] == doctest::Approx(1.0).epsilon(1e-3));  // symmetric pair

  double solved = particle_energy(x, Measure(omega), k).total;

  // Independent oracle: exhaustive search over a 200 x 200 placement grid.
  double best = 1e100;
  int g = 200;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) {
      double a = (i + 0.5) / g, b = (j + 0.5) / g;
      double e =
          particle_energy(ParticleMeasure(1, {a, b}), Measure(omega), k).total;
      best = std::min(best, e);
    }
  CHECK(std::abs(solved - best) <= 1e-2);
  CHECK(solved <= best + 1e-4);  // the solver should not lose to the grid
}

TEST_CASE("trace objective is nonincreasing and deterministic") {
  GridDensity omega = uniform_grid(256);
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.lambda = 1e-3;
  cfg.tv_method = TvMethod::point_difference;
  PowerKernel k(1, 1.5, 1.5);
  auto [x1, t1] = minimize_particles(Measure(omega), 6, k, cfg);
  auto [x2, t2] = minimize_particles(Measure(omega), 6, k, cfg);
  CHECK(x1.coords() == x2.coords());
  REQUIRE(t1.entries.size() == t2.entries.size());
  for (size_t i = 0; i < t1.entries.size(); ++i)
    CHECK(t1.entries[i].objective == t2.entries[i].objective);
  for (size_t i = 1; i < t1.entries.size(); ++i)
    CHECK(t1.entries[i].objective <= t1.entries[i - 1].objective + 1e-15);
}

TEST_CASE("kernel-TV regularized solve runs and stays monotone") {
  GridDensity omega = uniform_grid(128);
  SolverConfig cfg;
  cfg.max_iters = 120;
  cfg.lambda = 1e-4;
  cfg.tv_method = TvMethod::kernel_estimate;
  auto [x, trace] = minimize_particles(Measure(omega), 8, PowerKernel(1, 1.5, 1.5),
                                       cfg);
  CHECK(x.size() == 8);
  for (size_t i = 1; i < trace.entries.size(); ++i)
    CHECK(trace.entries[i].objective <= trace.entries[i - 1].objective + 1e-15);
}

TEST_CASE("random init is reproducible per seed") {
  GridDensity omega = uniform_grid(128);
  SolverConfig cfg;
  cfg.max_iters = 50;
  cfg.init = InitKind::random;
  cfg.seed = 123;
  PowerKernel k(1, 1.5, 1.5);
  auto [a, ta] = minimize_particles(Measure(omega), 5, k, cfg);
  auto [b, tb] = minimize_particles(Measure(omega), 5, k, cfg);
  CHECK(a.coords() == b.coords());
  cfg.seed = 124;
  auto [c, tc] = minimize_particles(Measure(omega), 5, k, cfg);
  CHECK(a.coords() != c.coords());
}

TEST_CASE("simplex projection") {
  // Idempotence: a feasible vector comes back bit-identically.
  std::vector<double> feasible{0.2, 0.3, 0.5};
  auto out = project_simplex(feasible, 1.0);
  CHECK(out == feasible);
  auto twice = project_simplex(project_simplex({0.9, -0.4, 1.7}, 1.0), 1.0);
  auto once = project_simplex({0.9, -0.4, 1.7}, 1.0);
  CHECK(twice == once);

  // Projection lands on the simplex and clips negatives.
  auto p = project_simplex({2.0, -1.0, 0.5}, 1.0);
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : p) CHECK(v >= 0.0);
  // Known value: projecting (2, 0.5) mass onto sum 1 splits the surplus.
  CHECK(p[1] == 0.0);
  CHECK(p[0] - p[2] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("grid solver with lambda 0 recovers the datum") {
  auto spike = std::get<GridDensity>(builtin_density("spike"));
  SolverConfig cfg;
  auto [u, trace] = minimize_grid(spike, 1.0, cfg);
  CHECK(trace.converged);
  CHECK(l1_distance(u, spike) <= 1e-4);

  // KKT probe: the projected quadratic gradient vanishes at the solution.
  auto a = grid_quadratic_matrix(spike, 1.0);
  int m = spike.cells()[0];
  std::vector<double> grad(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j)
      s += a[static_cast<size_t>(i) * m + j] * (u.values()[j] - spike.values()[j]);
    grad[i] = 2.0 * s;
  }
  CHECK(projected_gradient_norm(u.values(), grad) <= 1e-6 * 40.0);
}

TEST_CASE("grid solver leaves the uniform datum unchanged for any lambda") {
  GridDensity w = uniform_grid(64);
  for (double lambda : {0.0, 1e-6, 1e-2}) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    auto [u, trace] = minimize_grid(w, 1.0, cfg);
    CHECK(l1_distance(u, w) <= 1e-9);
  }
}

TEST_CASE("large lambda flattens the spike datum") {
  auto spike = std::get<GridDensity>(builtin_density("spike"));
  SolverConfig cfg;
  cfg.lambda = 1000.0;
  cfg.max_iters = 20000;
  auto [u, trace] = minimize_grid(spike, 1.0, cfg);
  CHECK(grid_tv(u).value <= 0.01 * grid_tv(spike).value);
}

TEST_CASE("grid solver trace is monotone") {
  auto spike = std::get<GridDensity>(builtin_density("spike"));
  SolverConfig cfg;
  cfg.lambda = 1e-5;
  cfg.max_iters = 3000;
  auto [u, trace] = minimize_grid(spike, 1.0, cfg);
  for (size_t i = 1; i < trace.entries.size(); ++i)
    CHECK(trace.entries[i].objective <= trace.entries[i - 1].objective + 1e-14);
}

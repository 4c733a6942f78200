#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "measureq.h"

namespace {

std::string tmp_path(const char* name) {
  return std::string("capi_") + name;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(mq_version()).find('.') != std::string::npos);
  CHECK(std::string(mq_status_name(MQ_OK)) == "ok");
  CHECK(std::string(mq_status_name(MQ_ERR_DIM_MISMATCH)) == "dim_mismatch");
}

TEST_CASE("null arguments are rejected, not crashed on") {
  CHECK(mq_measure_from_points(1, nullptr, 3, nullptr) == MQ_ERR_INVALID_ARGUMENT);
  CHECK(mq_moment(nullptr, 1.0, nullptr) == MQ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mq_last_error()).size() > 0);
}

TEST_CASE("measure lifecycle and accessors") {
  double coords[4] = {0.0, 0.0, 1.0, 1.0};
  mq_measure* m = nullptr;
  REQUIRE(mq_measure_from_points(2, coords, 2, &m) == MQ_OK);
  CHECK(mq_measure_kind(m) == MQ_MEASURE_PARTICLES);
  CHECK(mq_measure_dim(m) == 2);
  CHECK(mq_particles_count(m) == 2);
  double back[4] = {0};
  CHECK(mq_particles_coords(m, back) == MQ_OK);
  CHECK(back[2] == 1.0);
  mq_measure_free(m);

  double nan_coords[1] = {std::nan("")};
  mq_measure* bad = nullptr;
  CHECK(mq_measure_from_points(1, nan_coords, 1, &bad) == MQ_ERR_NON_FINITE);
}

TEST_CASE("builtin data, moments and wasserstein through the C surface") {
  mq_measure* u = nullptr;
  REQUIRE(mq_measure_builtin("uniform1d", 0, &u) == MQ_OK);
  CHECK(mq_measure_kind(u) == MQ_MEASURE_GRID);
  double m1 = 0.0;
  CHECK(mq_moment(u, 1.0, &m1) == MQ_OK);
  CHECK(m1 == doctest::Approx(0.5).epsilon(1e-6));

  double half = 0.5;
  mq_measure* d = nullptr;
  REQUIRE(mq_measure_from_points(1, &half, 1, &d) == MQ_OK);
  double w1 = 0.0;
  CHECK(mq_wasserstein1_1d(u, d, &w1) == MQ_OK);
  CHECK(w1 == doctest::Approx(0.25).epsilon(1e-9));

  mq_measure* unknown = nullptr;
  CHECK(mq_measure_builtin("no-such", 0, &unknown) == MQ_ERR_INVALID_ARGUMENT);

  mq_measure_free(d);
  mq_measure_free(u);
}

TEST_CASE("kernel constants through the C surface") {
  double dq = 0.0;
  REQUIRE(mq_dq_constant(1, 1.0, &dq) == MQ_OK);
  CHECK(dq == doctest::Approx(1.0 / (2.0 * 3.14159265358979323846)));
  CHECK(mq_dq_constant(1, 2.5, &dq) == MQ_ERR_DOMAIN);

  double xi = 1.0, ft = 0.0;
  REQUIRE(mq_generalized_ft(1, 1.0, &xi, &ft) == MQ_OK);
  CHECK(ft == doctest::Approx(-2.0));
  double zero = 0.0;
  CHECK(mq_generalized_ft(1, 1.0, &zero, &ft) == MQ_ERR_SINGULAR_AT_ZERO);

  double v = 0.0, dv = 0.0;
  REQUIRE(mq_estimation_kernel_eval(MQ_KERNEL_TRIANGULAR, 0.5, &v, &dv) == MQ_OK);
  CHECK(v == doctest::Approx(0.5));
  CHECK(dv == -1.0);
}

TEST_CASE("energies through the C surface") {
  double xs[2] = {0.0, 1.0};
  mq_measure* x = nullptr;
  REQUIRE(mq_measure_from_points(1, xs, 2, &x) == MQ_OK);
  mq_measure* omega = nullptr;
  REQUIRE(mq_measure_copy(x, &omega) == MQ_OK);

  mq_energy_report rep{};
  REQUIRE(mq_particle_energy(x, omega, 1.0, 1.0, &rep) == MQ_OK);
  CHECK(rep.attraction == doctest::Approx(0.5));
  CHECK(rep.repulsion == doctest::Approx(-0.25));
  CHECK(rep.total == doctest::Approx(0.25));

  double sym = -1.0;
  REQUIRE(mq_symmetrized_energy(x, omega, 1.0, &sym) == MQ_OK);
  CHECK(sym == doctest::Approx(0.0));

  double fe = -1.0;
  REQUIRE(mq_fourier_energy(x, omega, 1.0, nullptr, &fe) == MQ_OK);
  CHECK(std::abs(fe) <= 1e-6);

  double grad[2] = {0, 0};
  REQUIRE(mq_particle_gradient(x, omega, 1.5, 1.5, grad) == MQ_OK);

  mq_measure_free(omega);
  mq_measure_free(x);
}

TEST_CASE("tiling through the C surface") {
  mq_measure* u2 = nullptr;
  REQUIRE(mq_measure_builtin("uniform2d", 0, &u2) == MQ_OK);
  mq_tiling* t = nullptr;
  REQUIRE(mq_tiling_build(u2, 5, &t) == MQ_OK);
  CHECK(mq_tiling_size(t) == 5);
  CHECK(mq_tiling_n_tilde(t) == 2);
  int counts[4] = {0};
  REQUIRE(mq_tiling_axis_counts(t, counts, 4) == 2);
  CHECK(counts[0] == 3);
  CHECK(counts[1] == 2);

  int index[2];
  double lo[2], hi[2], mass = 0.0;
  REQUIRE(mq_tiling_tile(t, 0, index, lo, hi, &mass) == MQ_OK);
  CHECK(mass == doctest::Approx(0.2).epsilon(1e-6));

  mq_measure* pts = nullptr;
  REQUIRE(mq_tiling_points(t, MQ_RULE_CENTER, &pts) == MQ_OK);
  CHECK(mq_particles_count(pts) == 5);

  mq_measure_free(pts);
  mq_tiling_free(t);
  mq_measure_free(u2);
}

TEST_CASE("tv through the C surface") {
  double xs[3] = {0.0, 0.5, 1.0};
  mq_measure* x = nullptr;
  REQUIRE(mq_measure_from_points(1, xs, 3, &x) == MQ_OK);
  mq_tv_estimate tv{};
  REQUIRE(mq_pointdiff_tv(x, &tv) == MQ_OK);
  CHECK(tv.value == doctest::Approx(4.0 / 3));
  REQUIRE(mq_kernel_tv(x, 0.1, MQ_KERNEL_TRIANGULAR, &tv) == MQ_OK);
  CHECK(tv.value == doctest::Approx(20.0));
  CHECK(mq_bandwidth_schedule(1000, 1) == doctest::Approx(0.1));
  mq_measure_free(x);

  double twin[2] = {0.25, 0.25};
  mq_measure* dupe = nullptr;
  REQUIRE(mq_measure_from_points(1, twin, 2, &dupe) == MQ_OK);
  REQUIRE(mq_pointdiff_tv(dupe, &tv) == MQ_OK);
  CHECK(tv.infinite == 1);
  mq_measure_free(dupe);
}

TEST_CASE("solvers and traces through the C surface") {
  mq_measure* omega = nullptr;
  REQUIRE(mq_measure_builtin("uniform1d", 0, &omega) == MQ_OK);

  mq_solver_config cfg;
  mq_solver_config_init(&cfg);
  cfg.max_iters = 400;
  mq_measure* points = nullptr;
  mq_trace* trace = nullptr;
  mq_status s = mq_minimize_particles(omega, 4, 1.5, 1.5, &cfg, nullptr, &points,
                                      &trace);
  CHECK((s == MQ_OK || s == MQ_ERR_NOT_CONVERGED));
  REQUIRE(points != nullptr);
  REQUIRE(trace != nullptr);
  CHECK(mq_particles_count(points) == 4);
  CHECK(mq_trace_length(trace) >= 1);
  int iter = -1;
  double obj = 0.0, res = 0.0, step = 0.0;
  REQUIRE(mq_trace_entry(trace, 0, &iter, &obj, &res, &step) == MQ_OK);
  CHECK(iter == 0);
  std::string trace_csv = tmp_path("trace.csv");
  CHECK(mq_trace_write_csv(trace, trace_csv.c_str()) == MQ_OK);
  std::remove(trace_csv.c_str());
  mq_trace_free(trace);
  mq_measure_free(points);

  mq_measure* spike = nullptr;
  REQUIRE(mq_measure_builtin("spike", 0, &spike) == MQ_OK);
  mq_measure* u = nullptr;
  mq_trace* gtrace = nullptr;
  REQUIRE(mq_minimize_grid(spike, 1.0, &cfg, &u, &gtrace) == MQ_OK);
  CHECK(mq_trace_converged(gtrace) == 1);
  int cells[2] = {0, 0};
  REQUIRE(mq_grid_shape(u, cells, nullptr, nullptr) == MQ_OK);
  CHECK(cells[0] == 200);
  mq_trace_free(gtrace);
  mq_measure_free(u);
  mq_measure_free(spike);
  mq_measure_free(omega);
}

TEST_CASE("csv round trip through the C surface") {
  double xs[4] = {0.125, 0.25, 0.375, 0.5};
  mq_measure* x = nullptr;
  REQUIRE(mq_measure_from_points(1, xs, 4, &x) == MQ_OK);
  std::string path = tmp_path("points.csv");
  REQUIRE(mq_measure_write_csv(x, path.c_str()) == MQ_OK);
  mq_measure* back = nullptr;
  REQUIRE(mq_measure_read_csv(path.c_str(), &back) == MQ_OK);
  REQUIRE(mq_particles_count(back) == 4);
  double out[4];
  REQUIRE(mq_particles_coords(back, out) == MQ_OK);
  for (int i = 0; i < 4; ++i) CHECK(out[i] == xs[i]);
  std::remove(path.c_str());
  mq_measure_free(back);
  mq_measure_free(x);

  mq_measure* missing = nullptr;
  CHECK(mq_measure_read_csv("no/such/file.csv", &missing) == MQ_ERR_IO);
}

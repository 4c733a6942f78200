#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "tiling.hpp"
#include "tv.hpp"

using namespace mq;

namespace {

ParticleMeasure atoms(std::vector<double> xs) {
  return ParticleMeasure(1, std::move(xs));
}

GridDensity bump_grid(int cells) {
  std::vector<double> v(cells);
  for (int i = 0; i < cells; ++i) {
    double x = (i + 0.5) / cells;
    double s = std::sin(3.14159265358979323846 * x);
    v[i] = 2.0 * s * s;
  }
  double mass = 0.0;
  for (double x : v) mass += x / cells;
  for (auto& x : v) x /= mass;
  return GridDensity(1, {0, 0}, {1, 1}, {cells, 1}, std::move(v));
}

}  // namespace

TEST_CASE("kernel TV examples") {
  CHECK(kernel_tv(atoms({0.0}), 1.0, EstimationKernel::triangular).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(kernel_tv(atoms({0.0, 10.0}), 0.1, EstimationKernel::triangular).value ==
        doctest::Approx(20.0).epsilon(1e-12));
  // Overlapping bumps cancel variation.
  double overlap =
      kernel_tv(atoms({0.0, 0.75}), 0.75, EstimationKernel::triangular).value;
  CHECK(overlap < 2.0 / 0.75 - 1e-6);
  CHECK_THROWS_AS(kernel_tv(atoms({0.0}), 0.0, EstimationKernel::triangular), Error);
}

TEST_CASE("isolated points give exactly |K'|_1 / h") {
  std::mt19937_64 rng(3);
  for (auto k : {EstimationKernel::triangular, EstimationKernel::gaussian}) {
    double h = 0.05;
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i)
      xs.push_back(i * 10.0 + static_cast<double>(rng() % 100) / 100.0);
    double expected = estimation_kernel_derivative_mass(k) / h;
    double got = kernel_tv(atoms(xs), h, k).value;
    // Gaussian bumps overlap at 1e-300 level; both kernels hit 1e-9 here.
    CHECK(std::abs(got - expected) <= 1e-9 * expected);
  }
}

TEST_CASE("pointdiff TV examples") {
  CHECK(pointdiff_tv_1d(atoms({0.0, 1.0})).value == doctest::Approx(1.0));
  CHECK(pointdiff_tv_1d(atoms({0.0, 0.5, 1.0})).value ==
        doctest::Approx(4.0 / 3).epsilon(1e-15));
  auto inf = pointdiff_tv_1d(atoms({0.0, 0.0}));
  CHECK(inf.infinite);
  CHECK(std::isinf(inf.value));
  CHECK_THROWS_AS(pointdiff_tv_1d(atoms({0.0})), Error);
}

TEST_CASE("pointdiff TV invariances") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng() % 6);
    std::vector<double> xs;
    for (int i = 0; i < n; ++i)
      xs.push_back(static_cast<double>(rng() % 100000) / 1000.0 + i * 1e-3);
    double base = pointdiff_tv_1d(atoms(xs)).value;

    std::vector<double> shuffled(xs);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(pointdiff_tv_1d(atoms(shuffled)).value == base);

    std::vector<double> shifted(xs);
    for (auto& x : shifted) x += 17.25;
    CHECK(pointdiff_tv_1d(atoms(shifted)).value ==
          doctest::Approx(base).epsilon(1e-12));

    double s = 0.5 + static_cast<double>(rng() % 400) / 100.0;
    std::vector<double> scaled(xs);
    for (auto& x : scaled) x *= s;
    CHECK(pointdiff_tv_1d(atoms(scaled)).value ==
          doctest::Approx(base / s).epsilon(1e-12));
  }
}

TEST_CASE("grid TV examples") {
  GridDensity flat(1, {0, 0}, {1, 1}, {8, 1}, std::vector<double>(8, 1.0));
  CHECK(grid_tv(flat).value == 0.0);

  // Step of height 5 over the middle half: up 5, down 5.
  std::vector<double> step{0, 0, 5, 5, 5, 5, 0, 0};
  double mass = 0.0;
  for (double x : step) mass += x / 8;
  for (auto& x : step) x /= mass;
  double height = step[2];
  GridDensity s(1, {0, 0}, {1, 1}, {8, 1}, std::move(step));
  CHECK(grid_tv(s).value == doctest::Approx(2.0 * height).epsilon(1e-12));

  // Single-cell spike of height a contributes 2a.
  std::vector<double> spike(9, 0.1);
  spike[4] = 9.0 - 0.8;
  double smass = 0.0;
  for (double x : spike) smass += x / 9;
  for (auto& x : spike) x /= smass;
  double a = spike[4] - spike[3];
  GridDensity sp(1, {0, 0}, {1, 1}, {9, 1}, std::move(spike));
  CHECK(grid_tv(sp).value == doctest::Approx(2.0 * a).epsilon(1e-12));
}

TEST_CASE("grid TV in 2D is the anisotropic sum") {
  // 2x2 grid, one loaded cell: per axis one |up| + one |down| weighted by
  // the transverse width.
  std::vector<double> v{4.0, 0.0, 0.0, 0.0};
  GridDensity g(2, {0, 0}, {1, 1}, {2, 2}, std::move(v));
  // x-differences: |0-4| * hy; y-differences: |0-4| * hx; each 4*0.5 = 2.
  CHECK(grid_tv(g).value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("bandwidth schedule") {
  CHECK(bandwidth_schedule(1000, 1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(bandwidth_schedule(1, 1) == 1.0);
  CHECK(bandwidth_schedule(1, 4) == 1.0);
  CHECK(bandwidth_schedule(100000, 2) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("pointdiff TV of quantile points stays below the true variation") {
  GridDensity bump = bump_grid(4096);
  double truth = 4.0;  // variation of 2 sin^2(pi x)
  double prev_err = 1e9;
  for (int n : {16, 64, 256}) {
    Tiling t(bump, n);
    auto pts = tiling_points(t, PointRule::center);
    double v = pointdiff_tv_1d(pts).value;
    // The grid discretization of the bump perturbs the variation at 1e-8.
    CHECK(v <= truth + 1e-6);
    double err = std::abs(v - truth);
    CHECK(err <= prev_err + 1e-12);
    prev_err = err;
  }
}

TEST_CASE("triangular kernel TV gradient matches finite differences") {
  std::mt19937_64 rng(7);
  double h = 0.3, eps = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);
    std::vector<double> xs;
    for (int i = 0; i < n; ++i)
      xs.push_back(static_cast<double>(rng() % 997) / 997.0 * 2.0);
    ParticleMeasure x(1, xs);
    auto vg = kernel_tv_value_grad(x, h, EstimationKernel::triangular, eps);
    for (int i = 0; i < n; ++i) {
      double step = 1e-7;
      std::vector<double> up(xs), dn(xs);
      up[i] += step;
      dn[i] -= step;
      double fu = kernel_tv_value_grad(ParticleMeasure(1, up), h,
                                       EstimationKernel::triangular, eps).value;
      double fd = kernel_tv_value_grad(ParticleMeasure(1, dn), h,
                                       EstimationKernel::triangular, eps).value;
      double fdg = (fu - fd) / (2.0 * step);
      CHECK(vg.grad[i] == doctest::Approx(fdg).epsilon(1e-4));
    }
  }
}

TEST_CASE("gaussian kernel TV gradient matches finite differences") {
  double h = 0.25, eps = 1e-4;
  std::vector<double> xs{0.1, 0.62, 1.4};
  ParticleMeasure x(1, xs);
  auto vg = kernel_tv_value_grad(x, h, EstimationKernel::gaussian, eps);
  for (size_t i = 0; i < xs.size(); ++i) {
    double step = 1e-6;
    std::vector<double> up(xs), dn(xs);
    up[i] += step;
    dn[i] -= step;
    double fu =
        kernel_tv_value_grad(ParticleMeasure(1, up), h, EstimationKernel::gaussian, eps)
            .value;
    double fd =
        kernel_tv_value_grad(ParticleMeasure(1, dn), h, EstimationKernel::gaussian, eps)
            .value;
    CHECK(vg.grad[i] == doctest::Approx((fu - fd) / (2.0 * step)).epsilon(1e-4));
  }
}

TEST_CASE("pointdiff TV gradient matches finite differences") {
  std::vector<double> xs{0.05, 0.4, 0.55, 0.9};
  ParticleMeasure x(1, xs);
  double eps = 1e-6;
  auto vg = pointdiff_tv_value_grad(x, eps);
  for (size_t i = 0; i < xs.size(); ++i) {
    double step = 1e-7;
    std::vector<double> up(xs), dn(xs);
    up[i] += step;
    dn[i] -= step;
    double fu = pointdiff_tv_value_grad(ParticleMeasure(1, up), eps).value;
    double fd = pointdiff_tv_value_grad(ParticleMeasure(1, dn), eps).value;
    CHECK(vg.grad[i] == doctest::Approx((fu - fd) / (2.0 * step)).epsilon(1e-5));
  }
}

TEST_CASE("2D kernel TV: single bump matches the radial integral") {
  // For one tensor-triangular bump, TV = (1/h^2) * integral |grad K2| over
  // the unit square support; compare against a direct fine quadrature.
  double h = 0.5;
  ParticleMeasure x(2, {0.0, 0.0});
  double tv = kernel_tv(x, h, EstimationKernel::triangular).value;
  long n = 400;
  double sum = 0.0, d = 2.0 / n;
  for (long iy = 0; iy < n; ++iy)
    for (long ix = 0; ix < n; ++ix) {
      double u = -1.0 + (ix + 0.5) * d;
      double v = -1.0 + (iy + 0.5) * d;
      auto ku = estimation_kernel_eval(EstimationKernel::triangular, u);
      auto kv = estimation_kernel_eval(EstimationKernel::triangular, v);
      double gx = ku.derivative * kv.value;
      double gy = ku.value * kv.derivative;
      sum += std::hypot(gx, gy) * d * d;
    }
  double expected = sum / (h * h);
  CHECK(tv == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("2D kernel TV gradient matches finite differences") {
  std::vector<double> xs{0.2, 0.3, 0.8, 0.7, 0.5, 0.1};
  ParticleMeasure x(2, xs);
  double h = 0.4, eps = 1e-3;
  auto vg = kernel_tv_value_grad(x, h, EstimationKernel::gaussian, eps);
  for (size_t i = 0; i < xs.size(); ++i) {
    double step = 1e-6;
    std::vector<double> up(xs), dn(xs);
    up[i] += step;
    dn[i] -= step;
    double fu =
        kernel_tv_value_grad(ParticleMeasure(2, up), h, EstimationKernel::gaussian, eps)
            .value;
    double fd =
        kernel_tv_value_grad(ParticleMeasure(2, dn), h, EstimationKernel::gaussian, eps)
            .value;
    CHECK(vg.grad[i] == doctest::Approx((fu - fd) / (2.0 * step)).epsilon(1e-3));
  }
}

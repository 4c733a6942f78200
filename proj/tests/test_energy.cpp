#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "energy.hpp"

using namespace mq;

namespace {

ParticleMeasure atoms(std::vector<double> xs) {
  return ParticleMeasure(1, std::move(xs));
}

GridDensity uniform_grid(int cells, double lo, double hi) {
  std::vector<double> v(cells, 1.0 / (hi - lo));
  return GridDensity(1, {lo, 0.0}, {hi, 1.0}, {cells, 1}, std::move(v));
}

// Midpoints of N equal intervals of [0, n]: the quantile discretization of
// the uniform density used in the nonexistence example.
ParticleMeasure uniform_quantiles(int count, double length) {
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) xs[i] = (i + 0.5) * length / count;
  return atoms(std::move(xs));
}

std::vector<double> fd_gradient(const ParticleMeasure& x, const Measure& omega,
                                const PowerKernel& k, double step) {
  std::vector<double> g(x.coords().size());
  for (size_t i = 0; i < g.size(); ++i) {
    std::vector<double> up(x.coords()), dn(x.coords());
    up[i] += step;
    dn[i] -= step;
    double fu = particle_energy(ParticleMeasure(x.dim(), up), omega, k).total;
    double fd = particle_energy(ParticleMeasure(x.dim(), dn), omega, k).total;
    g[i] = (fu - fd) / (2.0 * step);
  }
  return g;
}

}  // namespace

TEST_CASE("particle energy examples") {
  PowerKernel k1(1, 1.0, 1.0);
  auto zero = particle_energy(atoms({0.0}), Measure(atoms({0.0})), k1);
  CHECK(zero.attraction == 0.0);
  CHECK(zero.repulsion == 0.0);
  CHECK(zero.total == 0.0);

  auto pair = particle_energy(atoms({0.0, 1.0}), Measure(atoms({0.0, 1.0})), k1);
  CHECK(pair.attraction == doctest::Approx(0.5));
  CHECK(pair.repulsion == doctest::Approx(-0.25));
  CHECK(pair.total == doctest::Approx(0.25));
}

TEST_CASE("report total equals V plus W") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xs;
    for (int i = 0; i < 5; ++i)
      xs.push_back(static_cast<double>(rng() % 1000) / 500.0);
    PowerKernel k(1, 1.2, 1.8);
    auto rep = particle_energy(atoms(xs), Measure(uniform_grid(64, 0, 1)), k);
    CHECK(rep.total ==
          doctest::Approx(rep.attraction + rep.repulsion).epsilon(1e-12));
  }
}

TEST_CASE("stretched-configuration repulsion matches the analytic value") {
  // W[uniform on [0,n]] = -n^{q_r} / ((q_r+1)(q_r+2)) for q_r = 1.5.
  PowerKernel k(1, 1.0, 1.5);
  GridDensity omega = uniform_grid(1024, -1.0, 0.0);
  for (double n : {1.0, 2.0, 4.0}) {
    auto rep = particle_energy(uniform_quantiles(64, n), Measure(omega), k);
    double analytic = -std::pow(n, 1.5) / (2.5 * 3.5);
    CHECK(std::abs(rep.repulsion - analytic) < 0.02 * std::abs(analytic));
  }
}

TEST_CASE("gradient examples") {
  PowerKernel k15(1, 1.5, 1.5);
  auto g0 = particle_gradient(atoms({0.0}), Measure(atoms({0.0})), k15);
  CHECK(g0[0] == 0.0);  // subgradient selection at the coincidence

  PowerKernel k2(1, 2.0, 2.0);
  auto g = particle_gradient(atoms({0.3}), Measure(atoms({0.0})), k2);
  CHECK(g[0] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + static_cast<int>(rng() % 2);
    int n = 2 + static_cast<int>(rng() % 4);
    std::vector<double> xs;
    for (int i = 0; i < n * d; ++i)
      xs.push_back(static_cast<double>(rng() % 1000) / 1000.0 + (i % n) * 0.7);
    ParticleMeasure x(d, xs);
    std::vector<double> om;
    for (int i = 0; i < 3 * d; ++i)
      om.push_back(static_cast<double>(rng() % 1000) / 1000.0 - 1.5);
    ParticleMeasure omega(d, om);
    PowerKernel k(d, 1.5, 1.5);
    auto g = particle_gradient(x, Measure(omega), k);
    auto fd = fd_gradient(x, Measure(omega), k, 1e-5);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      num += (g[i] - fd[i]) * (g[i] - fd[i]);
      den += fd[i] * fd[i];
    }
    CHECK(std::sqrt(num) <= 1e-5 * std::max(1.0, std::sqrt(den)));
  }
}

TEST_CASE("symmetrized energy examples") {
  CHECK(symmetrized_energy(Measure(atoms({0.0, 1.0})), Measure(atoms({0.0, 1.0})),
                           1.0) == doctest::Approx(0.0));
  CHECK(symmetrized_energy(Measure(atoms({0.0})), Measure(atoms({1.0})), 1.0) ==
        doctest::Approx(1.0));
  CHECK(symmetrized_energy(Measure(atoms({0.0, 1.0})), Measure(atoms({0.0})), 1.0) ==
        doctest::Approx(0.25));
  CHECK_THROWS_AS(symmetrized_energy(Measure(atoms({0.0})),
                                     Measure(uniform_grid(8, 0, 1)), 1.0),
                  Error);
}

TEST_CASE("fourier energy examples") {
  FourierQuadrature quad;
  CHECK(fourier_energy(Measure(atoms({0.25})), Measure(atoms({0.25})), 1.0, quad) ==
        doctest::Approx(0.0));
  double split = fourier_energy(Measure(atoms({0.0})), Measure(atoms({1.0})), 1.0,
                                quad);
  CHECK(std::abs(split - 1.0) <= 1e-3);
  double quarter = fourier_energy(Measure(atoms({0.0, 1.0})), Measure(atoms({0.0})),
                                  1.0, quad);
  CHECK(std::abs(quarter - 0.25) <= 1e-3);
  CHECK_THROWS_AS(
      fourier_energy(Measure(atoms({0.0})), Measure(atoms({1.0})), 2.0, quad),
      Error);
}

TEST_CASE("fourier energy against the spatial form on random pairs") {
  std::mt19937_64 rng(31);
  FourierQuadrature quad;
  for (int trial = 0; trial < 10; ++trial) {
    int nm = 2 + static_cast<int>(rng() % 7);
    int no = 2 + static_cast<int>(rng() % 7);
    std::vector<double> ms, os;
    for (int i = 0; i < nm; ++i)
      ms.push_back(static_cast<double>(rng() % 10000) / 10000.0);
    for (int i = 0; i < no; ++i)
      os.push_back(static_cast<double>(rng() % 10000) / 10000.0);
    for (double q : {1.0, 1.5}) {
      double spatial = symmetrized_energy(Measure(atoms(ms)), Measure(atoms(os)), q);
      double fourier = fourier_energy(Measure(atoms(ms)), Measure(atoms(os)), q, quad);
      CHECK(std::abs(fourier - spatial) <= 1e-3 * std::max(1.0, std::abs(spatial)));
    }
  }
}

TEST_CASE("decomposition E = Etilde + C") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> ms, os;
    for (int i = 0; i < 4; ++i)
      ms.push_back(static_cast<double>(rng() % 1000) / 250.0);
    for (int i = 0; i < 3; ++i)
      os.push_back(static_cast<double>(rng() % 1000) / 250.0);
    double q = 1.0 + static_cast<double>(rng() % 900) / 1000.0;
    PowerKernel k(1, q, q);
    auto mu = atoms(ms);
    auto om = atoms(os);
    double e = particle_energy(mu, Measure(om), k).total;
    double sym = symmetrized_energy(Measure(mu), Measure(om), q);
    // C = (1/2) double integral of psi against omega x omega.
    double c = 0.0;
    for (double a : os)
      for (double b : os) c += std::pow(std::abs(a - b), q);
    c *= 0.5 / (os.size() * os.size());
    CHECK(e - sym == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("symmetrized energy: nonnegative and translation invariant") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ms, os;
    for (int i = 0; i < 5; ++i)
      ms.push_back(static_cast<double>(rng() % 1000) / 500.0);
    for (int i = 0; i < 5; ++i)
      os.push_back(static_cast<double>(rng() % 1000) / 500.0);
    double q = 1.0 + static_cast<double>(rng() % 999) / 1000.0;
    double base = symmetrized_energy(Measure(atoms(ms)), Measure(atoms(os)), q);
    CHECK(base >= -1e-10);
    double t = static_cast<double>(rng() % 2000) / 100.0 - 10.0;
    std::vector<double> mt(ms), ot(os);
    for (auto& v : mt) v += t;
    for (auto& v : ot) v += t;
    double shifted = symmetrized_energy(Measure(atoms(mt)), Measure(atoms(ot)), q);
    CHECK(std::abs(shifted - base) <= 1e-10 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("fourier energy with a grid datum is nonnegative and small at omega") {
  FourierQuadrature quad;
  GridDensity u = uniform_grid(256, 0.0, 1.0);
  // Quantile midpoints approximate omega; energy must be small but >= 0.
  double e = fourier_energy(Measure(uniform_quantiles(64, 1.0)), Measure(u), 1.5,
                            quad);
  CHECK(e >= 0.0);
  CHECK(e < 1e-3);
}

TEST_CASE("grid quadratic matrix") {
  GridDensity g(1, {-0.5, 0}, {1.5, 1}, {2, 1}, {0.5, 0.5});
  // Centers at 0 and 1, cell width 1.
  auto a = grid_quadratic_matrix(g, 1.0);
  REQUIRE(a.size() == 4);
  double v[2] = {1.0, -1.0};
  double form = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) form += v[i] * a[i * 2 + j] * v[j];
  CHECK(form == doctest::Approx(1.0));

  double ones[2] = {1.0, 1.0};
  double cform = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) cform += ones[i] * a[i * 2 + j] * ones[j];
  CHECK(cform == doctest::Approx(-1.0));  // not PSD off the zero-sum subspace

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 3 + static_cast<int>(rng() % 14);
    std::vector<double> vals(m, 1.0);
    GridDensity gg(1, {0, 0}, {1, 1}, {m, 1}, std::move(vals));
    double q = 1.0 + static_cast<double>(rng() % 999) / 1000.0;
    auto mat = grid_quadratic_matrix(gg, q);
    std::vector<double> z(m);
    double mean = 0.0;
    for (int i = 0; i < m; ++i) {
      z[i] = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
      mean += z[i];
    }
    for (int i = 0; i < m; ++i) z[i] -= mean / m;
    double zform = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) zform += z[i] * mat[static_cast<size_t>(i) * m + j] * z[j];
    CHECK(zform >= -1e-10);
  }
}

TEST_CASE("moment bound diagnostic stays tame on sublevel samples") {
  // Sub-levels of the Fourier energy keep bounded r-th moments; probe with
  // quantile configurations of increasing size.
  FourierQuadrature quad;
  GridDensity omega = uniform_grid(256, 0.0, 1.0);
  for (int n : {8, 16, 32}) {
    auto mu = uniform_quantiles(n, 1.0);
    double e = fourier_energy(Measure(mu), Measure(omega), 1.5, quad);
    if (e <= 0.1) {
      double m = moment(Measure(mu), 0.5);
      CHECK(m <= 10.0);
    }
  }
}

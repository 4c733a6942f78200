#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mq {

namespace {

constexpr double kMassTolerance = 1e-9;

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; avoids the implementation-defined
  // std::uniform_real_distribution so streams are portable.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ParticleMeasure::ParticleMeasure(int dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ < 1) fail(ErrorCode::invalid_argument, "particle dim must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0)
    fail(ErrorCode::dim_mismatch, "coordinate count is not a multiple of dim");
  for (double c : coords_)
    if (!std::isfinite(c)) fail(ErrorCode::non_finite, "non-finite coordinate");
}

GridDensity::GridDensity(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
                         std::array<int, 2> cells, std::vector<double> values)
    : dim_(dim), lo_(lo), hi_(hi), cells_(cells), values_(std::move(values)) {
  if (dim_ < 1 || dim_ > 2) fail(ErrorCode::unsupported_dim, "grid dim must be 1 or 2");
  size_t expect = 1;
  for (int a = 0; a < dim_; ++a) {
    if (cells_[a] < 1) fail(ErrorCode::invalid_argument, "grid needs >= 1 cell per axis");
    if (!(hi_[a] > lo_[a]) || !std::isfinite(lo_[a]) || !std::isfinite(hi_[a]))
      fail(ErrorCode::invalid_argument, "grid box corners invalid");
    expect *= static_cast<size_t>(cells_[a]);
  }
  for (int a = dim_; a < 2; ++a) {
    lo_[a] = 0.0;
    hi_[a] = 1.0;
    cells_[a] = 1;
  }
  if (values_.size() != expect)
    fail(ErrorCode::dim_mismatch, "grid value count does not match cell layout");
  for (double v : values_) {
    if (!std::isfinite(v)) fail(ErrorCode::non_finite, "non-finite grid value");
    if (v < 0) fail(ErrorCode::invalid_argument, "grid values must be nonnegative");
  }
  double m = mass();
  if (std::abs(m - 1.0) > kMassTolerance)
    fail(ErrorCode::invalid_argument, "grid mass deviates from 1 beyond tolerance");
}

double GridDensity::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= cell_width(a);
  return v;
}

double GridDensity::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * cell_volume();
}

int measure_dim(const Measure& m) {
  return std::visit([](const auto& x) { return x.dim(); }, m);
}

std::string tv_method_name(TvMethod m) {
  switch (m) {
    case TvMethod::kernel_estimate: return "kernel-estimate";
    case TvMethod::point_difference: return "point-difference";
    case TvMethod::grid: return "grid";
    default: return "none";
  }
}

ParticleMeasure from_points(int dim, const std::vector<double>& coords) {
  return ParticleMeasure(dim, coords);
}

ParticleMeasure sample_empirical(const GridDensity& omega, int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_argument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  const auto& vals = omega.values();
  // CDF over cell masses.
  std::vector<double> cdf(vals.size());
  double acc = 0.0;
  double vol = omega.cell_volume();
  for (size_t i = 0; i < vals.size(); ++i) {
    acc += vals[i] * vol;
    cdf[i] = acc;
  }
  double total = acc;

  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) * omega.dim());
  for (int k = 0; k < n; ++k) {
    if (omega.dim() == 1) {
      double u = uniform01(rng) * total;
      size_t cell = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (cell >= vals.size()) cell = vals.size() - 1;
      double prev = cell == 0 ? 0.0 : cdf[cell - 1];
      double within = cdf[cell] > prev ? (u - prev) / (cdf[cell] - prev) : 0.5;
      out.push_back(omega.lo()[0] + (cell + within) * omega.cell_width(0));
    } else {
      double u = uniform01(rng) * total;
      size_t cell = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      if (cell >= vals.size()) cell = vals.size() - 1;
      int nx = omega.cells()[0];
      int ix = static_cast<int>(cell) % nx;
      int iy = static_cast<int>(cell) / nx;
      double ux = uniform01(rng);
      double uy = uniform01(rng);
      out.push_back(omega.lo()[0] + (ix + ux) * omega.cell_width(0));
      out.push_back(omega.lo()[1] + (iy + uy) * omega.cell_width(1));
    }
  }
  return ParticleMeasure(omega.dim(), std::move(out));
}

namespace {

double norm_of(const double* x, int d) {
  if (d == 1) return std::abs(x[0]);
  double n2 = 0.0;
  for (int a = 0; a < d; ++a) n2 += x[a] * x[a];
  return std::sqrt(n2);
}

}  // namespace

double moment(const Measure& m, double order) {
  if (order < 0) fail(ErrorCode::domain_error, "moment order must be >= 0");
  if (std::holds_alternative<ParticleMeasure>(m)) {
    const auto& p = std::get<ParticleMeasure>(m);
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i)
      s += std::pow(norm_of(p.point(i), p.dim()), order);
    return s * p.weight();
  }
  const auto& g = std::get<GridDensity>(m);
  double s = 0.0;
  double vol = g.cell_volume();
  if (g.dim() == 1) {
    for (int i = 0; i < g.cells()[0]; ++i)
      s += g.values()[i] * vol * std::pow(std::abs(g.center(0, i)), order);
  } else {
    int nx = g.cells()[0];
    for (int iy = 0; iy < g.cells()[1]; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        double c[2] = {g.center(0, ix), g.center(1, iy)};
        s += g.values()[ix + static_cast<size_t>(nx) * iy] * vol *
             std::pow(norm_of(c, 2), order);
      }
  }
  return s;
}

std::complex<double> char_function(const Measure& m, const double* xi, int dim) {
  for (int a = 0; a < dim; ++a)
    if (!std::isfinite(xi[a])) fail(ErrorCode::non_finite, "non-finite frequency");
  if (measure_dim(m) != dim) fail(ErrorCode::dim_mismatch, "frequency dim mismatch");
  double re = 0.0, im = 0.0;
  if (std::holds_alternative<ParticleMeasure>(m)) {
    const auto& p = std::get<ParticleMeasure>(m);
    for (int i = 0; i < p.size(); ++i) {
      double phase = 0.0;
      const double* x = p.point(i);
      for (int a = 0; a < dim; ++a) phase += x[a] * xi[a];
      re += std::cos(phase);
      im -= std::sin(phase);
    }
    double w = p.weight();
    return {re * w, im * w};
  }
  const auto& g = std::get<GridDensity>(m);
  double vol = g.cell_volume();
  if (g.dim() == 1) {
    for (int i = 0; i < g.cells()[0]; ++i) {
      double phase = g.center(0, i) * xi[0];
      double w = g.values()[i] * vol;
      re += w * std::cos(phase);
      im -= w * std::sin(phase);
    }
  } else {
    int nx = g.cells()[0];
    for (int iy = 0; iy < g.cells()[1]; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        double phase = g.center(0, ix) * xi[0] + g.center(1, iy) * xi[1];
        double w = g.values()[ix + static_cast<size_t>(nx) * iy] * vol;
        re += w * std::cos(phase);
        im -= w * std::sin(phase);
      }
  }
  return {re, im};
}

namespace {

// 1D CDF as a piecewise-linear function: breakpoints plus the CDF value
// reached at each breakpoint. Particles enter as zero-width jumps.
struct Cdf1D {
  std::vector<double> xs;      // breakpoints, ascending
  std::vector<double> after;   // F(x+) at each breakpoint
  bool linear_between;         // grids ramp between breakpoints, particles hold
};

Cdf1D cdf_of(const Measure& m) {
  Cdf1D c;
  if (std::holds_alternative<ParticleMeasure>(m)) {
    const auto& p = std::get<ParticleMeasure>(m);
    std::vector<double> xs(p.coords());
    std::sort(xs.begin(), xs.end());
    double w = p.weight();
    double acc = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      acc += w;
      if (!c.xs.empty() && xs[i] == c.xs.back()) {
        c.after.back() = acc;
      } else {
        c.xs.push_back(xs[i]);
        c.after.push_back(acc);
      }
    }
    c.linear_between = false;
  } else {
    const auto& g = std::get<GridDensity>(m);
    double acc = 0.0;
    double vol = g.cell_volume();
    c.xs.push_back(g.lo()[0]);
    c.after.push_back(0.0);
    for (int i = 0; i < g.cells()[0]; ++i) {
      acc += g.values()[i] * vol;
      c.xs.push_back(g.lo()[0] + (i + 1) * g.cell_width(0));
      c.after.push_back(acc);
    }
    c.linear_between = true;
  }
  return c;
}

// Evaluate F just left / right of x given the breakpoint table.
double cdf_eval(const Cdf1D& c, double x) {
  auto it = std::upper_bound(c.xs.begin(), c.xs.end(), x);
  if (it == c.xs.begin()) return 0.0;
  size_t idx = static_cast<size_t>(it - c.xs.begin()) - 1;
  double f0 = c.after[idx];
  if (!c.linear_between || idx + 1 >= c.xs.size()) return f0;
  double x0 = c.xs[idx], x1 = c.xs[idx + 1];
  double f1 = c.after[idx + 1];
  if (x >= x1) return f1;
  return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
}

}  // namespace

double wasserstein1_1d(const Measure& a, const Measure& b) {
  if (measure_dim(a) != 1 || measure_dim(b) != 1)
    fail(ErrorCode::dim_mismatch, "wasserstein1_1d requires 1D measures");
  Cdf1D fa = cdf_of(a), fb = cdf_of(b);
  std::vector<double> grid;
  grid.reserve(fa.xs.size() + fb.xs.size());
  grid.insert(grid.end(), fa.xs.begin(), fa.xs.end());
  grid.insert(grid.end(), fb.xs.begin(), fb.xs.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double total = 0.0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    double x0 = grid[i], x1 = grid[i + 1];
    // Both CDFs are linear strictly inside (x0, x1); jumps sit at the ends.
    double d0 = cdf_eval(fa, x0) - cdf_eval(fb, x0);
    double eps = (x1 - x0) * 1e-12;
    double d1 = cdf_eval(fa, x1 - eps) - cdf_eval(fb, x1 - eps);
    double len = x1 - x0;
    if (d0 * d1 >= 0.0) {
      total += 0.5 * (std::abs(d0) + std::abs(d1)) * len;
    } else {
      // Sign change: split at the root of the linear interpolant.
      double t = d0 / (d0 - d1);
      total += 0.5 * (std::abs(d0) * t + std::abs(d1) * (1.0 - t)) * len;
    }
  }
  return total;
}

void support_box(const Measure& m, std::array<double, 2>& lo, std::array<double, 2>& hi) {
  lo = {0.0, 0.0};
  hi = {0.0, 0.0};
  if (std::holds_alternative<ParticleMeasure>(m)) {
    const auto& p = std::get<ParticleMeasure>(m);
    for (int a = 0; a < p.dim(); ++a) {
      double mn = p.point(0)[a], mx = mn;
      for (int i = 1; i < p.size(); ++i) {
        mn = std::min(mn, p.point(i)[a]);
        mx = std::max(mx, p.point(i)[a]);
      }
      lo[a] = mn;
      hi[a] = mx;
    }
  } else {
    const auto& g = std::get<GridDensity>(m);
    for (int a = 0; a < g.dim(); ++a) {
      lo[a] = g.lo()[a];
      hi[a] = g.hi()[a];
    }
  }
}

}  // namespace mq

#include "tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mq {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// Mass-to-coordinate inversion for a piecewise-linear CDF given by cell
// masses over [lo, hi]. Plateaus resolve to the leftmost admissible cut.
struct LinearCdf {
  double lo, width;  // cell width
  std::vector<double> cum;  // cumulative mass after each cell

  double total() const { return cum.empty() ? 0.0 : cum.back(); }

  double invert(double level, bool* hit_plateau) const {
    if (level <= 0.0) return lo;
    if (level >= total()) {
      // Leftmost point where the full mass is reached.
      size_t i = cum.size();
      while (i > 1 && cum[i - 2] >= total()) --i;
      return lo + width * i;
    }
    size_t i = std::lower_bound(cum.begin(), cum.end(), level) - cum.begin();
    double prev = i == 0 ? 0.0 : cum[i - 1];
    double gain = cum[i] - prev;
    if (gain <= 0.0) {
      if (hit_plateau) *hit_plateau = true;
      return lo + width * i;
    }
    if (prev >= level) {
      // Level met exactly at the left edge of a plateau.
      if (hit_plateau) *hit_plateau = true;
      return lo + width * i;
    }
    return lo + width * (i + (level - prev) / gain);
  }
};

// Mass of omega restricted to [a, b] along x (1D: the plain interval mass).
double overlap_fraction(double cell_lo, double cell_hi, double a, double b) {
  double lo = std::max(cell_lo, a), hi = std::min(cell_hi, b);
  return hi > lo ? (hi - lo) / (cell_hi - cell_lo) : 0.0;
}

}  // namespace

TilingShape tiling_shape(std::int64_t n, int dim) {
  if (n < 1 || dim < 1) fail(ErrorCode::invalid_argument, "need n, dim >= 1");
  std::int64_t root = static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(n), 1.0 / dim)));
  while (root > 1 && ipow(root, dim) > n) --root;
  while (ipow(root + 1, dim) <= n) ++root;

  TilingShape s{root, 0, 0};
  for (int m = dim - 1; m >= 0; --m) {
    std::int64_t base = ipow(root, dim - m) * ipow(root + 1, m);
    if (base <= n) {
      s.m = m;
      s.l = n - base;
      break;
    }
  }
  return s;
}

std::int64_t axis_count(const TilingShape& shape, int axis, int dim) {
  if (axis < 0 || axis >= dim - 1)
    fail(ErrorCode::invalid_argument, "axis_count covers axes before the last");
  return axis < shape.m ? shape.n_tilde + 1 : shape.n_tilde;
}

std::vector<std::int64_t> last_axis_counts(const TilingShape& shape, int dim) {
  std::int64_t parents = 1;
  for (int k = 0; k < dim - 1; ++k) parents *= axis_count(shape, k, dim);
  std::vector<std::int64_t> counts(static_cast<size_t>(parents), shape.n_tilde);
  for (std::int64_t i = 0; i < shape.l; ++i) counts[i] = shape.n_tilde + 1;
  return counts;
}

Tiling::Tiling(const GridDensity& omega, int n) : omega_(omega) {
  if (n < 1) fail(ErrorCode::invalid_argument, "tile count must be >= 1");
  if (omega.dim() > 2)
    fail(ErrorCode::unsupported_dim, "tilings are built for d <= 2");
  TilingShape shape = tiling_shape(n, omega.dim());
  n_tilde_ = shape.n_tilde;
  double vol = omega.cell_volume();

  if (omega.dim() == 1) {
    LinearCdf cdf;
    cdf.lo = omega.lo()[0];
    cdf.width = omega.cell_width(0);
    cdf.cum.resize(omega.values().size());
    double acc = 0.0;
    for (size_t i = 0; i < omega.values().size(); ++i) {
      acc += omega.values()[i] * vol;
      cdf.cum[i] = acc;
    }
    double total = cdf.total();
    std::vector<double> cuts(n + 1);
    cuts[0] = omega.lo()[0];
    cuts[n] = omega.hi()[0];
    for (int k = 1; k < n; ++k)
      cuts[k] = cdf.invert(total * k / n, &plateau_warning_);
    for (int k = 0; k < n; ++k) {
      Tile t;
      t.index = {k + 1, 0};
      t.lo = {cuts[k], 0.0};
      t.hi = {cuts[k + 1], 0.0};
      double m = 0.0;
      for (size_t i = 0; i < omega.values().size(); ++i) {
        double cl = omega.lo()[0] + i * cdf.width;
        m += omega.values()[i] * vol *
             overlap_fraction(cl, cl + cdf.width, t.lo[0], t.hi[0]);
      }
      t.mass = m;
      tiles_.push_back(t);
    }
    counts_ = {n};
    return;
  }

  // 2D: cut the x-axis at marginal-CDF levels, then each column strip at
  // conditional-CDF levels, with column counts n_tilde or n_tilde + 1.
  int nx = omega.cells()[0], ny = omega.cells()[1];
  int n_cols = static_cast<int>(shape.m == 1 ? n_tilde_ + 1 : n_tilde_);
  counts_.resize(n_cols);
  for (int c = 0; c < n_cols; ++c)
    counts_[c] = static_cast<int>(c < shape.l ? n_tilde_ + 1 : n_tilde_);

  LinearCdf marginal;
  marginal.lo = omega.lo()[0];
  marginal.width = omega.cell_width(0);
  marginal.cum.resize(nx);
  double acc = 0.0;
  for (int ix = 0; ix < nx; ++ix) {
    double col = 0.0;
    for (int iy = 0; iy < ny; ++iy)
      col += omega.values()[ix + static_cast<size_t>(nx) * iy];
    acc += col * vol;
    marginal.cum[ix] = acc;
  }
  double total = marginal.total();

  std::vector<double> xcuts(n_cols + 1);
  xcuts[0] = omega.lo()[0];
  xcuts[n_cols] = omega.hi()[0];
  double level = 0.0;
  for (int c = 1; c < n_cols; ++c) {
    level += total * counts_[c - 1] / n;
    xcuts[c] = marginal.invert(level, &plateau_warning_);
  }

  for (int c = 0; c < n_cols; ++c) {
    double a = xcuts[c], b = xcuts[c + 1];
    LinearCdf cond;
    cond.lo = omega.lo()[1];
    cond.width = omega.cell_width(1);
    cond.cum.resize(ny);
    double cacc = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
      double row = 0.0;
      for (int ix = 0; ix < nx; ++ix) {
        double frac = overlap_fraction(omega.lo()[0] + ix * omega.cell_width(0),
                                       omega.lo()[0] + (ix + 1) * omega.cell_width(0),
                                       a, b);
        if (frac > 0.0)
          row += omega.values()[ix + static_cast<size_t>(nx) * iy] * frac;
      }
      cacc += row * vol;
      cond.cum[iy] = cacc;
    }
    double strip = cond.total();
    int rows = counts_[c];
    std::vector<double> ycuts(rows + 1);
    ycuts[0] = omega.lo()[1];
    ycuts[rows] = omega.hi()[1];
    for (int r = 1; r < rows; ++r)
      ycuts[r] = cond.invert(strip * r / rows, &plateau_warning_);
    for (int r = 0; r < rows; ++r) {
      Tile t;
      t.index = {c + 1, r + 1};
      t.lo = {a, ycuts[r]};
      t.hi = {b, ycuts[r + 1]};
      double m = 0.0;
      for (int iy = 0; iy < ny; ++iy) {
        double yl = omega.lo()[1] + iy * omega.cell_width(1);
        double fy = overlap_fraction(yl, yl + omega.cell_width(1), t.lo[1], t.hi[1]);
        if (fy <= 0.0) continue;
        for (int ix = 0; ix < nx; ++ix) {
          double xl = omega.lo()[0] + ix * omega.cell_width(0);
          double fx = overlap_fraction(xl, xl + omega.cell_width(0), a, b);
          if (fx > 0.0)
            m += omega.values()[ix + static_cast<size_t>(nx) * iy] * vol * fx * fy;
        }
      }
      t.mass = m;
      tiles_.push_back(t);
    }
  }
}

PointRule point_rule_from_name(const std::string& name) {
  if (name == "center") return PointRule::center;
  if (name == "mass-centroid" || name == "centroid") return PointRule::mass_centroid;
  fail(ErrorCode::invalid_argument, "unknown point rule '" + name + "'");
}

ParticleMeasure tiling_points(const Tiling& t, PointRule rule) {
  const GridDensity& g = t.source();
  int d = t.dim();
  std::vector<double> coords;
  coords.reserve(static_cast<size_t>(t.size()) * d);
  for (const Tile& tile : t.tiles()) {
    if (rule == PointRule::center) {
      for (int a = 0; a < d; ++a)
        coords.push_back(0.5 * (tile.lo[a] + tile.hi[a]));
      continue;
    }
    // Mass centroid of omega restricted to the tile; cells are uniform so
    // each contributes its overlap mass at the overlap rectangle center.
    double mass = 0.0;
    double cx[2] = {0.0, 0.0};
    int nx = g.cells()[0], ny = g.dim() == 2 ? g.cells()[1] : 1;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        double v = g.values()[ix + static_cast<size_t>(nx) * iy];
        if (v <= 0.0) continue;
        double m = v * g.cell_volume();
        double c[2];
        for (int a = 0; a < d; ++a) {
          int idx = a == 0 ? ix : iy;
          double cl = g.lo()[a] + idx * g.cell_width(a);
          double ch = cl + g.cell_width(a);
          double ol = std::max(cl, tile.lo[a]), oh = std::min(ch, tile.hi[a]);
          if (oh <= ol) {
            m = 0.0;
            break;
          }
          m *= (oh - ol) / (ch - cl);
          c[a] = 0.5 * (ol + oh);
        }
        if (m <= 0.0) continue;
        mass += m;
        for (int a = 0; a < d; ++a) cx[a] += m * c[a];
      }
    }
    for (int a = 0; a < d; ++a)
      coords.push_back(mass > 0.0 ? cx[a] / mass
                                  : 0.5 * (tile.lo[a] + tile.hi[a]));
  }
  return ParticleMeasure(d, std::move(coords));
}

std::string tiling_to_csv(const Tiling& t) {
  std::ostringstream out;
  out << "# dim=" << t.dim() << " n=" << t.size() << " n_tilde=" << t.n_tilde()
      << "\n";
  char buf[40];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << "," << buf;
  };
  for (const Tile& tile : t.tiles()) {
    out << tile.index[0];
    if (t.dim() == 2) out << "-" << tile.index[1];
    for (int a = 0; a < t.dim(); ++a) emit(tile.lo[a]);
    for (int a = 0; a < t.dim(); ++a) emit(tile.hi[a]);
    emit(tile.mass);
    out << "\n";
  }
  return out.str();
}

}  // namespace mq

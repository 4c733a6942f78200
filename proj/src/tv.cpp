#include "tv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mq {

namespace {

constexpr double kCoincidence = 1e-14;

double smooth_abs(double s, double eps) {
  return eps > 0.0 ? std::sqrt(s * s + eps * eps) : std::abs(s);
}

double smooth_abs_d(double s, double eps) {
  if (eps > 0.0) return s / std::sqrt(s * s + eps * eps);
  return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
}

// Breakpoints and slope deltas of Q_h' for the triangular kernel: the
// slope of the estimate is piecewise constant and jumps by
// (+1, -2, +1)/(N h^2) at x_i - h, x_i, x_i + h.
struct SlopeSweep {
  std::vector<double> pos;    // event positions, ascending, deduplicated
  std::vector<double> slope;  // slope on (pos[k], pos[k+1])
};

SlopeSweep triangular_slope_sweep(const ParticleMeasure& x, double h) {
  int n = x.size();
  std::vector<std::pair<double, double>> events;
  events.reserve(static_cast<size_t>(n) * 3);
  double unit = 1.0 / (n * h * h);
  for (int i = 0; i < n; ++i) {
    double xi = x.coords()[i];
    events.emplace_back(xi - h, unit);
    events.emplace_back(xi, -2.0 * unit);
    events.emplace_back(xi + h, unit);
  }
  std::sort(events.begin(), events.end());
  SlopeSweep sw;
  double running = 0.0;
  for (size_t k = 0; k < events.size();) {
    double p = events[k].first;
    double delta = 0.0;
    while (k < events.size() && events[k].first == p) {
      delta += events[k].second;
      ++k;
    }
    running += delta;
    sw.pos.push_back(p);
    sw.slope.push_back(running);
  }
  return sw;  // final slope returns to ~0 beyond the last event
}

double gaussian_density(const ParticleMeasure& x, double h, double t) {
  double q = 0.0;
  for (int i = 0; i < x.size(); ++i)
    q += estimation_kernel_eval(EstimationKernel::gaussian,
                                (t - x.coords()[i]) / h).value;
  return q / (x.size() * h);
}

double gaussian_density_slope(const ParticleMeasure& x, double h, double t) {
  double q = 0.0;
  for (int i = 0; i < x.size(); ++i)
    q += estimation_kernel_eval(EstimationKernel::gaussian,
                                (t - x.coords()[i]) / h).derivative;
  return q / (x.size() * h * h);
}

double kernel_tv_1d_gaussian(const ParticleMeasure& x, double h) {
  // TV of a smooth density equals the summed rises and falls between
  // critical points; bracket sign changes of Q' and bisect.
  auto [mn_it, mx_it] = std::minmax_element(x.coords().begin(), x.coords().end());
  double lo = *mn_it - 9.0 * h, hi = *mx_it + 9.0 * h;
  long samples = std::max<long>(64, 48L * x.size() + 64);
  double step = (hi - lo) / samples;
  std::vector<double> crit;
  double prev_t = lo;
  double prev_s = gaussian_density_slope(x, h, lo);
  for (long k = 1; k <= samples; ++k) {
    double t = lo + k * step;
    double s = gaussian_density_slope(x, h, t);
    if (prev_s == 0.0 || (prev_s > 0.0) != (s > 0.0)) {
      double a = prev_t, b = t, fa = prev_s;
      for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (a + b);
        double fm = gaussian_density_slope(x, h, m);
        if (fa * fm <= 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      crit.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_s = s;
  }
  double tv = 0.0;
  double last = 0.0;  // density vanishes at the padded ends
  for (double c : crit) {
    double q = gaussian_density(x, h, c);
    tv += std::abs(q - last);
    last = q;
  }
  tv += std::abs(last);
  return tv;
}

// Fine sampling lattice for the 2D kernel estimate (tensor-product factor
// kernels). Nodes sit on the absolute lattice step * k so the sampled
// functional does not drift when the point cloud moves.
struct FineGrid2D {
  double lo[2], step[2];
  int n[2];
  double pad;
  std::vector<double> q;  // density samples, x-fastest
};

FineGrid2D sample_density_2d(const ParticleMeasure& x, double h, EstimationKernel k) {
  double pad = (k == EstimationKernel::triangular ? 1.0 : 9.0) * h;
  FineGrid2D g;
  g.pad = pad;
  for (int a = 0; a < 2; ++a) {
    double mn = x.point(0)[a], mx = mn;
    for (int i = 1; i < x.size(); ++i) {
      mn = std::min(mn, x.point(i)[a]);
      mx = std::max(mx, x.point(i)[a]);
    }
    double step = h / 8.0;
    double span = (mx - mn) + 2.0 * pad;
    if (span / step > 4096.0) step = span / 4096.0;
    g.step[a] = step;
    g.lo[a] = step * std::floor((mn - pad) / step);
    double hi = step * std::ceil((mx + pad) / step);
    g.n[a] = static_cast<int>(std::lround((hi - g.lo[a]) / step)) + 1;
  }
  g.q.assign(static_cast<size_t>(g.n[0]) * g.n[1], 0.0);
  double norm = 1.0 / (x.size() * h * h);
  for (int i = 0; i < x.size(); ++i) {
    const double* p = x.point(i);
    int ix0 = std::max(0, (int)std::floor((p[0] - pad - g.lo[0]) / g.step[0]));
    int ix1 = std::min(g.n[0] - 1, (int)std::ceil((p[0] + pad - g.lo[0]) / g.step[0]));
    int iy0 = std::max(0, (int)std::floor((p[1] - pad - g.lo[1]) / g.step[1]));
    int iy1 = std::min(g.n[1] - 1, (int)std::ceil((p[1] + pad - g.lo[1]) / g.step[1]));
    for (int iy = iy0; iy <= iy1; ++iy) {
      double v = estimation_kernel_eval(k, (g.lo[1] + iy * g.step[1] - p[1]) / h).value;
      if (v == 0.0) continue;
      for (int ix = ix0; ix <= ix1; ++ix) {
        double u = estimation_kernel_eval(k, (g.lo[0] + ix * g.step[0] - p[0]) / h).value;
        if (u != 0.0)
          g.q[ix + static_cast<size_t>(g.n[0]) * iy] += norm * u * v;
      }
    }
  }
  return g;
}

double fine_grid_tv(const FineGrid2D& g, double eps) {
  double tv = 0.0;
  for (int iy = 0; iy + 1 < g.n[1]; ++iy)
    for (int ix = 0; ix + 1 < g.n[0]; ++ix) {
      size_t idx = ix + static_cast<size_t>(g.n[0]) * iy;
      double gx = (g.q[idx + 1] - g.q[idx]) / g.step[0];
      double gy = (g.q[idx + g.n[0]] - g.q[idx]) / g.step[1];
      tv += smooth_abs(std::hypot(gx, gy), eps) * g.step[0] * g.step[1];
    }
  return tv;
}

}  // namespace

TVEstimate kernel_tv(const ParticleMeasure& x, double h, EstimationKernel k) {
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "bandwidth must be positive");
  TVEstimate est;
  est.method = TvMethod::kernel_estimate;
  est.bandwidth = h;
  if (x.dim() == 1) {
    if (k == EstimationKernel::triangular) {
      SlopeSweep sw = triangular_slope_sweep(x, h);
      double tv = 0.0;
      for (size_t i = 0; i + 1 < sw.pos.size(); ++i)
        tv += std::abs(sw.slope[i]) * (sw.pos[i + 1] - sw.pos[i]);
      est.value = tv;
    } else {
      est.value = kernel_tv_1d_gaussian(x, h);
    }
    return est;
  }
  if (x.dim() != 2)
    fail(ErrorCode::unsupported_dim, "kernel TV supports d <= 2");
  est.value = fine_grid_tv(sample_density_2d(x, h, k), 0.0);
  return est;
}

TVEstimate pointdiff_tv_1d(const ParticleMeasure& x) {
  if (x.dim() != 1)
    fail(ErrorCode::dim_mismatch, "point-difference TV is 1D only");
  int n = x.size();
  if (n < 2) fail(ErrorCode::too_few_points, "need at least two points");
  std::vector<double> s(x.coords());
  std::sort(s.begin(), s.end());
  TVEstimate est;
  est.method = TvMethod::point_difference;
  for (int i = 0; i + 1 < n; ++i) {
    if (s[i + 1] - s[i] <= kCoincidence) {
      est.infinite = true;
      est.value = std::numeric_limits<double>::infinity();
      return est;
    }
  }
  double acc = 1.0 / (s[1] - s[0]) + 1.0 / (s[n - 1] - s[n - 2]);
  for (int i = 1; i + 1 < n; ++i)
    acc += std::abs(1.0 / (s[i + 1] - s[i]) - 1.0 / (s[i] - s[i - 1]));
  est.value = acc / n;
  return est;
}

TVEstimate grid_tv(const GridDensity& u) {
  TVEstimate est;
  est.method = TvMethod::grid;
  if (u.dim() == 1) {
    double acc = 0.0;
    for (int i = 0; i + 1 < u.cells()[0]; ++i)
      acc += std::abs(u.values()[i + 1] - u.values()[i]);
    est.value = acc;
    return est;
  }
  int nx = u.cells()[0], ny = u.cells()[1];
  double hx = u.cell_width(0), hy = u.cell_width(1);
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix + 1 < nx; ++ix)
      acc += std::abs(u.values()[ix + 1 + static_cast<size_t>(nx) * iy] -
                      u.values()[ix + static_cast<size_t>(nx) * iy]) * hy;
  for (int iy = 0; iy + 1 < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      acc += std::abs(u.values()[ix + static_cast<size_t>(nx) * (iy + 1)] -
                      u.values()[ix + static_cast<size_t>(nx) * iy]) * hx;
  est.value = acc;
  return est;
}

double bandwidth_schedule(std::int64_t n, int d) {
  if (n < 1 || d < 1) fail(ErrorCode::invalid_argument, "need n, d >= 1");
  return std::pow(static_cast<double>(n), -1.0 / (2.0 * d + 1.0));
}

TvValueGrad kernel_tv_value_grad(const ParticleMeasure& x, double h,
                                 EstimationKernel k, double eps) {
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "bandwidth must be positive");
  int n = x.size();
  TvValueGrad out;
  out.grad.assign(static_cast<size_t>(n) * x.dim(), 0.0);

  if (x.dim() == 1 && k == EstimationKernel::triangular) {
    SlopeSweep sw = triangular_slope_sweep(x, h);
    double tv = 0.0;
    for (size_t i = 0; i + 1 < sw.pos.size(); ++i)
      tv += smooth_abs(sw.slope[i], eps) * (sw.pos[i + 1] - sw.pos[i]);
    out.value = tv;
    // Moving a breakpoint b right by delta lengthens the segment left of b
    // and shortens the right one, so dTV/db = phi(S_left) - phi(S_right).
    auto slope_around = [&](double b, double& left, double& right) {
      size_t idx = std::lower_bound(sw.pos.begin(), sw.pos.end(), b) - sw.pos.begin();
      left = idx == 0 ? 0.0 : sw.slope[idx - 1];
      right = idx < sw.slope.size() ? sw.slope[idx] : 0.0;
    };
    for (int i = 0; i < n; ++i) {
      double xi = x.coords()[i];
      double g = 0.0;
      for (double b : {xi - h, xi, xi + h}) {
        double sl, sr;
        slope_around(b, sl, sr);
        g += smooth_abs(sl, eps) - smooth_abs(sr, eps);
      }
      out.grad[i] = g;
    }
    return out;
  }

  if (x.dim() == 1) {
    // Gaussian: differentiate the lattice-sampled integral; the sampled sum
    // is exactly the objective the solver sees.
    auto [mn_it, mx_it] = std::minmax_element(x.coords().begin(), x.coords().end());
    double step = h / 16.0;
    double lo = step * std::floor((*mn_it - 9.0 * h) / step);
    double hi = step * std::ceil((*mx_it + 9.0 * h) / step);
    long samples = std::lround((hi - lo) / step);
    if (samples > 400000) {
      step = (hi - lo) / 400000;
      samples = 400000;
    }
    double tv = 0.0;
    for (long s = 0; s <= samples; ++s) {
      double t = lo + s * step;
      double slope = gaussian_density_slope(x, h, t);
      tv += smooth_abs(slope, eps) * step;
      double phi_d = smooth_abs_d(slope, eps);
      for (int i = 0; i < n; ++i) {
        double u = (t - x.coords()[i]) / h;
        // d(slope)/dx_i = -K''(u) / (N h^3); K'' = (u^2 - 1) K for gaussian.
        double kpp = (u * u - 1.0) *
                     estimation_kernel_eval(EstimationKernel::gaussian, u).value;
        out.grad[i] += phi_d * (-kpp / (n * h * h * h)) * step;
      }
    }
    out.value = tv;
    return out;
  }

  if (x.dim() != 2)
    fail(ErrorCode::unsupported_dim, "kernel TV supports d <= 2");
  FineGrid2D g = sample_density_2d(x, h, k);
  out.value = fine_grid_tv(g, eps);

  // Backpropagate through the sampled sum: first the weight each density
  // sample receives from the cell differences, then through each bump.
  std::vector<double> node_coef(g.q.size(), 0.0);
  for (int iy = 0; iy + 1 < g.n[1]; ++iy)
    for (int ix = 0; ix + 1 < g.n[0]; ++ix) {
      size_t idx = ix + static_cast<size_t>(g.n[0]) * iy;
      double gx = (g.q[idx + 1] - g.q[idx]) / g.step[0];
      double gy = (g.q[idx + g.n[0]] - g.q[idx]) / g.step[1];
      double mag = std::hypot(gx, gy);
      double phi_d = smooth_abs_d(mag, eps);
      if (mag <= 0.0) continue;
      double area = g.step[0] * g.step[1];
      double wx = phi_d * (gx / mag) * area / g.step[0];
      double wy = phi_d * (gy / mag) * area / g.step[1];
      node_coef[idx] += -wx - wy;
      node_coef[idx + 1] += wx;
      node_coef[idx + g.n[0]] += wy;
    }
  double norm = 1.0 / (n * h * h);
  for (int i = 0; i < n; ++i) {
    const double* p = x.point(i);
    int ix0 = std::max(0, (int)std::floor((p[0] - g.pad - g.lo[0]) / g.step[0]));
    int ix1 = std::min(g.n[0] - 1, (int)std::ceil((p[0] + g.pad - g.lo[0]) / g.step[0]));
    int iy0 = std::max(0, (int)std::floor((p[1] - g.pad - g.lo[1]) / g.step[1]));
    int iy1 = std::min(g.n[1] - 1, (int)std::ceil((p[1] + g.pad - g.lo[1]) / g.step[1]));
    for (int iy = iy0; iy <= iy1; ++iy) {
      double py = g.lo[1] + iy * g.step[1];
      auto ky = estimation_kernel_eval(k, (py - p[1]) / h);
      if (ky.value == 0.0 && ky.derivative == 0.0) continue;
      for (int ix = ix0; ix <= ix1; ++ix) {
        size_t idx = ix + static_cast<size_t>(g.n[0]) * iy;
        double coef = node_coef[idx];
        if (coef == 0.0) continue;
        double px = g.lo[0] + ix * g.step[0];
        auto kx = estimation_kernel_eval(k, (px - p[0]) / h);
        out.grad[2 * i] += coef * norm * (-kx.derivative / h) * ky.value;
        out.grad[2 * i + 1] += coef * norm * kx.value * (-ky.derivative / h);
      }
    }
  }
  return out;
}

TvValueGrad pointdiff_tv_value_grad(const ParticleMeasure& x, double eps) {
  if (x.dim() != 1)
    fail(ErrorCode::dim_mismatch, "point-difference TV is 1D only");
  int n = x.size();
  if (n < 2) fail(ErrorCode::too_few_points, "need at least two points");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return x.coords()[a] < x.coords()[b]; });

  TvValueGrad out;
  out.grad.assign(n, 0.0);
  std::vector<double> d(n - 1), dgrad(n - 1, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    d[i] = x.coords()[order[i + 1]] - x.coords()[order[i]];
    if (d[i] <= kCoincidence) {
      out.infinite = true;
      out.value = std::numeric_limits<double>::infinity();
      std::fill(out.grad.begin(), out.grad.end(), 0.0);
      return out;
    }
  }
  double acc = 1.0 / d[0] + 1.0 / d[n - 2];
  dgrad[0] -= 1.0 / (d[0] * d[0]);
  dgrad[n - 2] -= 1.0 / (d[n - 2] * d[n - 2]);
  for (int i = 1; i + 1 < n; ++i) {
    double gap = 1.0 / d[i] - 1.0 / d[i - 1];
    acc += smooth_abs(gap, eps);
    double phi_d = smooth_abs_d(gap, eps);
    dgrad[i] += phi_d * (-1.0 / (d[i] * d[i]));
    dgrad[i - 1] += phi_d * (1.0 / (d[i - 1] * d[i - 1]));
  }
  out.value = acc / n;
  for (int i = 0; i + 1 < n; ++i) {
    out.grad[order[i + 1]] += dgrad[i] / n;
    out.grad[order[i]] -= dgrad[i] / n;
  }
  return out;
}

}  // namespace mq

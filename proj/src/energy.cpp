#include "energy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace mq {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist(const double* a, const double* b, int d) {
  double n2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double t = a[k] - b[k];
    n2 += t * t;
  }
  return std::sqrt(n2);
}

void check_dims(int a, int b) {
  if (a != b) fail(ErrorCode::dim_mismatch, "measure dimensions differ");
}

// Applies f(point, mass) over the atoms or cells of a measure.
template <typename F>
void for_each_mass(const Measure& m, F&& f) {
  if (std::holds_alternative<ParticleMeasure>(m)) {
    const auto& p = std::get<ParticleMeasure>(m);
    double w = p.weight();
    for (int i = 0; i < p.size(); ++i) f(p.point(i), w);
  } else {
    const auto& g = std::get<GridDensity>(m);
    double vol = g.cell_volume();
    if (g.dim() == 1) {
      for (int i = 0; i < g.cells()[0]; ++i) {
        double c = g.center(0, i);
        f(&c, g.values()[i] * vol);
      }
    } else {
      int nx = g.cells()[0];
      for (int iy = 0; iy < g.cells()[1]; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          double c[2] = {g.center(0, ix), g.center(1, iy)};
          f(c, g.values()[ix + static_cast<size_t>(nx) * iy] * vol);
        }
    }
  }
}

}  // namespace

void FourierQuadrature::validate() const {
  if (!(xi_min > 0.0) || !(xi_min < xi_max))
    fail(ErrorCode::invalid_argument, "need 0 < xi_min < xi_max");
  if (nodes_per_decade < 8)
    fail(ErrorCode::invalid_argument, "need nodes_per_decade >= 8");
}

EnergyReport particle_energy(const ParticleMeasure& x, const Measure& omega,
                             const PowerKernel& kernel) {
  check_dims(x.dim(), measure_dim(omega));
  if (x.dim() != kernel.dim)
    fail(ErrorCode::dim_mismatch, "kernel dimension mismatch");
  int n = x.size();
  int d = x.dim();

  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* xi = x.point(i);
    for_each_mass(omega, [&](const double* y, double mass) {
      v += mass * std::pow(dist(xi, y, d), kernel.q_attract);
    });
  }
  v /= n;

  double w = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      w += std::pow(dist(x.point(i), x.point(j), d), kernel.q_repulse);
  w *= -1.0 / (static_cast<double>(n) * n);

  EnergyReport rep;
  rep.attraction = v;
  rep.repulsion = w;
  rep.total = v + w;
  return rep;
}

std::vector<double> particle_gradient(const ParticleMeasure& x, const Measure& omega,
                                      const PowerKernel& kernel, double eps_sing) {
  check_dims(x.dim(), measure_dim(omega));
  int n = x.size();
  int d = x.dim();
  double qa = kernel.q_attract;
  double qr = kernel.q_repulse;
  std::vector<double> grad(static_cast<size_t>(n) * d, 0.0);

  for (int i = 0; i < n; ++i) {
    const double* xi = x.point(i);
    double* gi = grad.data() + static_cast<size_t>(i) * d;
    for_each_mass(omega, [&](const double* y, double mass) {
      double r = dist(xi, y, d);
      if (r <= eps_sing) return;  // 0 is in the subdifferential at the kink
      double s = mass * qa * std::pow(r, qa - 2.0);
      for (int k = 0; k < d; ++k) gi[k] += s * (xi[k] - y[k]);
    });
    for (int k = 0; k < d; ++k) gi[k] /= n;
  }

  double inv_n2 = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double* xi = x.point(i);
    double* gi = grad.data() + static_cast<size_t>(i) * d;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* xj = x.point(j);
      double r = dist(xi, xj, d);
      if (r <= eps_sing) continue;
      double s = qr * std::pow(r, qr - 2.0) * inv_n2;
      for (int k = 0; k < d; ++k) gi[k] -= s * (xi[k] - xj[k]);
    }
  }
  return grad;
}

double symmetrized_energy(const Measure& mu, const Measure& omega, double q) {
  check_dims(measure_dim(mu), measure_dim(omega));
  bool mu_p = std::holds_alternative<ParticleMeasure>(mu);
  bool om_p = std::holds_alternative<ParticleMeasure>(omega);
  if (mu_p != om_p)
    fail(ErrorCode::mixed_representation,
         "symmetrized energy needs both measures in the same representation");
  int d = measure_dim(mu);

  // -(1/2) [ T(mu,mu) - 2 T(mu,omega) + T(omega,omega) ]
  auto cross = [&](const Measure& a, const Measure& b) {
    double s = 0.0;
    for_each_mass(a, [&](const double* pa, double wa) {
      for_each_mass(b, [&](const double* pb, double wb) {
        s += wa * wb * std::pow(dist(pa, pb, d), q);
      });
    });
    return s;
  };
  double t_mm = cross(mu, mu);
  double t_mo = cross(mu, omega);
  double t_oo = cross(omega, omega);
  return -0.5 * (t_mm - 2.0 * t_mo + t_oo);
}

namespace {

// Composite Simpson nodes/weights for integrating F over [a, b] with an
// even number of subintervals.
void simpson_append(std::vector<double>& nodes, std::vector<double>& weights,
                    double a, double b, long segments) {
  if (!(b > a)) return;
  if (segments < 2) segments = 2;
  if (segments % 2) ++segments;
  double h = (b - a) / segments;
  for (long i = 0; i <= segments; ++i) {
    double w = (i == 0 || i == segments) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    nodes.push_back(a + i * h);
    weights.push_back(w * h / 3.0);
  }
}

struct RadialRule {
  std::vector<double> r;
  std::vector<double> w;  // weights for the plain dr integral
};

// Radial quadrature in three pieces: a log-spaced head resolving the
// power singularity, a linear mid-section fine enough for the pairwise
// oscillation frequencies (~diam), and a log-spaced tail where the
// oscillatory part has decayed below the smooth average.
RadialRule radial_rule(const FourierQuadrature& quad, double diam,
                       double points_per_period, double resolved_span) {
  quad.validate();
  double d_eff = std::max(diam, 1e-12);
  double a = quad.xi_min;
  double b = quad.xi_max;
  double osc_resolved = 0.1 * quad.nodes_per_decade / d_eff;
  double xi_a = std::clamp(osc_resolved, a, b);
  double xi_b = std::clamp(resolved_span / d_eff, xi_a, b);

  RadialRule rule;
  auto log_piece = [&](double lo, double hi) {
    if (!(hi > lo)) return;
    double decades = std::log10(hi / lo);
    long seg = static_cast<long>(std::ceil(decades * quad.nodes_per_decade));
    // Integrate in t = log(xi): dx = e^t dt.
    std::vector<double> tn, tw;
    simpson_append(tn, tw, std::log(lo), std::log(hi), seg);
    for (size_t i = 0; i < tn.size(); ++i) {
      double xi = std::exp(tn[i]);
      rule.r.push_back(xi);
      rule.w.push_back(tw[i] * xi);
    }
  };
  log_piece(a, xi_a);
  if (xi_b > xi_a) {
    double step = 2.0 * kPi / (points_per_period * d_eff);
    long seg = static_cast<long>(std::ceil((xi_b - xi_a) / step));
    seg = std::min(seg, 400000L);
    simpson_append(rule.r, rule.w, xi_a, xi_b, seg);
  }
  log_piece(xi_b, b);
  return rule;
}

}  // namespace

double fourier_energy(const Measure& mu, const Measure& omega, double q,
                      const FourierQuadrature& quad) {
  int d = measure_dim(mu);
  check_dims(d, measure_dim(omega));
  if (d > 2) fail(ErrorCode::unsupported_dim, "Fourier energy supports d <= 2");
  if (!(q >= 1.0 && q < 2.0))
    fail(ErrorCode::domain_error, "Fourier energy needs q in [1,2)");

  std::array<double, 2> lo_m, hi_m, lo_o, hi_o;
  support_box(mu, lo_m, hi_m);
  support_box(omega, lo_o, hi_o);
  double diam2 = 0.0;
  for (int a = 0; a < d; ++a) {
    double span = std::max(hi_m[a], hi_o[a]) - std::min(lo_m[a], lo_o[a]);
    diam2 += span * span;
  }
  double diam = std::sqrt(diam2);

  double dq = dq_constant(d, q);
  if (d == 1) {
    RadialRule rule = radial_rule(quad, diam, 32.0, 2000.0);
    double acc = 0.0;
    for (size_t i = 0; i < rule.r.size(); ++i) {
      double xi = rule.r[i];
      std::complex<double> diff =
          char_function(mu, &xi, 1) - char_function(omega, &xi, 1);
      acc += rule.w[i] * std::norm(diff) * std::pow(xi, -1.0 - q);
    }
    return std::max(0.0, 2.0 * dq * acc);  // both half-lines by symmetry
  }

  RadialRule rule = radial_rule(quad, diam, 16.0, 200.0);
  constexpr int kAngular = 64;
  double acc = 0.0;
  for (size_t i = 0; i < rule.r.size(); ++i) {
    double r = rule.r[i];
    double ring = 0.0;
    for (int k = 0; k < kAngular; ++k) {
      double theta = 2.0 * kPi * k / kAngular;
      double xi[2] = {r * std::cos(theta), r * std::sin(theta)};
      std::complex<double> diff =
          char_function(mu, xi, 2) - char_function(omega, xi, 2);
      ring += std::norm(diff);
    }
    ring *= 2.0 * kPi / kAngular;
    acc += rule.w[i] * ring * std::pow(r, -1.0 - q);
  }
  return std::max(0.0, dq * acc);
}

std::vector<double> grid_quadratic_matrix(const GridDensity& g, double q) {
  if (g.dim() != 1)
    fail(ErrorCode::unsupported_dim, "quadratic matrix is 1D only");
  int m = g.cells()[0];
  double h = g.cell_width(0);
  std::vector<double> a(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = -0.5 * h * h * std::pow(std::abs(g.center(0, i) - g.center(0, j)), q);
      a[static_cast<size_t>(i) * m + j] = v;
      a[static_cast<size_t>(j) * m + i] = v;
    }
  }
  return a;
}

}  // namespace mq

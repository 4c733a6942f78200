#include "kernels.hpp"

#include <cmath>

namespace mq {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

PowerKernel::PowerKernel(int d, double qa, double qr)
    : dim(d), q_attract(qa), q_repulse(qr) {
  if (d < 1) fail(ErrorCode::invalid_argument, "kernel dim must be >= 1");
  if (!(qa >= 1.0 && qa <= 2.0) || !(qr >= 1.0 && qr <= 2.0))
    fail(ErrorCode::domain_error, "power exponents must lie in [1,2]");
}

double PowerKernel::fourier_exponent() const {
  if (q_attract != q_repulse)
    fail(ErrorCode::domain_error,
         "Fourier representation needs q_a = q_r");
  if (q_attract >= 2.0)
    fail(ErrorCode::domain_error, "Fourier representation needs q < 2");
  return q_attract;
}

double power_eval(double q, const double* x, int dim) {
  double n2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(x[a])) fail(ErrorCode::non_finite, "non-finite argument");
    n2 += x[a] * x[a];
  }
  if (n2 == 0.0) return 0.0;
  return std::pow(std::sqrt(n2), q);
}

double dq_constant(int dim, double q) {
  if (dim < 1) fail(ErrorCode::invalid_argument, "dim must be >= 1");
  if (!(q > 0.0 && q < 2.0))
    fail(ErrorCode::domain_error, "dq_constant needs 0 < q < 2");
  // Gamma(-q/2) is negative on (0,2), which makes the quotient positive.
  double num = std::pow(2.0, q + 0.5 * dim) * std::tgamma(0.5 * (dim + q));
  double den = 2.0 * std::tgamma(-0.5 * q);
  return -std::pow(kTwoPi, -0.5 * dim) * num / den;
}

double generalized_ft(int dim, double q, const double* xi) {
  double n2 = 0.0;
  for (int a = 0; a < dim; ++a) n2 += xi[a] * xi[a];
  if (n2 == 0.0)
    fail(ErrorCode::singular_at_zero, "generalized transform is singular at xi = 0");
  double dq = dq_constant(dim, q);
  return -2.0 * std::pow(kTwoPi, dim) * dq * std::pow(std::sqrt(n2), -dim - q);
}

EstimationKernel estimation_kernel_from_name(const std::string& name) {
  if (name == "triangular") return EstimationKernel::triangular;
  if (name == "gaussian") return EstimationKernel::gaussian;
  fail(ErrorCode::invalid_argument, "unknown estimation kernel '" + name + "'");
}

KernelEval estimation_kernel_eval(EstimationKernel k, double x) {
  if (k == EstimationKernel::triangular) {
    double ax = std::abs(x);
    if (ax >= 1.0) return {0.0, 0.0};
    if (x == 0.0) return {1.0, 0.0};
    return {1.0 - ax, x < 0.0 ? 1.0 : -1.0};
  }
  // Standard Gaussian, sigma = 1.
  double v = std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
  return {v, -x * v};
}

double estimation_kernel_derivative_mass(EstimationKernel k) {
  if (k == EstimationKernel::triangular) return 2.0;
  return std::sqrt(2.0 / kPi);
}

}  // namespace mq

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kernels.hpp"
#include "measure.hpp"

namespace mq {

struct TVEstimate {
  double value = 0.0;
  bool infinite = false;
  TvMethod method = TvMethod::none;
  std::optional<double> bandwidth;
};

// Total variation of the kernel density estimate K_h * mu_N.
// 1D: exact (triangular: piecewise-constant slope sweep; gaussian: critical
// points by bisection). 2D: fine-grid forward differences of |grad Q_h|.
TVEstimate kernel_tv(const ParticleMeasure& x, double h, EstimationKernel k);

// 1D piecewise-constant embedding: reciprocal spacings of the sorted
// points; infinite when two points coincide (within 1e-14).
TVEstimate pointdiff_tv_1d(const ParticleMeasure& x);

// 1D: sum of |u_{i+1} - u_i| (dimensionless); 2D: anisotropic sum of axis
// differences weighted by the transverse cell width.
TVEstimate grid_tv(const GridDensity& u);

// h(N) = N^{-1/(2d+1)}: h -> 0 while h^{2d} N -> infinity.
double bandwidth_schedule(std::int64_t n, int d);

// Smoothed TV value/gradient pairs for the particle solver; |s| is
// replaced by sqrt(s^2 + eps^2) when eps > 0.
struct TvValueGrad {
  double value = 0.0;
  std::vector<double> grad;  // n*dim, zero when value is infinite
  bool infinite = false;
};

TvValueGrad kernel_tv_value_grad(const ParticleMeasure& x, double h,
                                 EstimationKernel k, double eps);
TvValueGrad pointdiff_tv_value_grad(const ParticleMeasure& x, double eps);

}  // namespace mq

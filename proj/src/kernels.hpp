#pragma once

#include <string>

#include "errors.hpp"

namespace mq {

// Power interaction kernel |x|^q with separate attraction / repulsion
// exponents, both restricted to [1,2]. Fourier-side operations require
// q_a = q_r = q with q < 2 strictly.
struct PowerKernel {
  int dim;
  double q_attract;
  double q_repulse;

  PowerKernel(int d, double qa, double qr);
  bool symmetric() const { return q_attract == q_repulse; }
  // Common exponent for Fourier-representation work; rejects q_a != q_r
  // and the q = 2 boundary.
  double fourier_exponent() const;
};

double power_eval(double q, const double* x, int dim);

// D_q = -(2 pi)^{-d/2} 2^{q+d/2} Gamma((d+q)/2) / (2 Gamma(-q/2)), > 0 on (0,2).
double dq_constant(int dim, double q);

// psi_hat(xi) = -2 (2 pi)^d D_q |xi|^{-d-q}, always negative.
double generalized_ft(int dim, double q, const double* xi);

enum class EstimationKernel { triangular, gaussian };

EstimationKernel estimation_kernel_from_name(const std::string& name);

struct KernelEval {
  double value;
  double derivative;
};

// 1D density-estimation kernel and its derivative; multidimensional
// kernels are assembled as tensor products by the TV module.
// Triangular kinks at {-1, 0, 1} report derivative 0.
KernelEval estimation_kernel_eval(EstimationKernel k, double x);

// Total variation of the kernel itself: integral of |K'|.
double estimation_kernel_derivative_mass(EstimationKernel k);

}  // namespace mq

#pragma once

#include <vector>

#include "kernels.hpp"
#include "measure.hpp"

namespace mq {

// Truncated frequency-domain quadrature for the Fourier energy form.
// 1D uses a log-spaced composite rule densified where the integrand
// oscillates; 2D adds a 64-node angular trapezoid on circles.
struct FourierQuadrature {
  double xi_min = 1e-6;
  double xi_max = 1e6;
  int nodes_per_decade = 32;

  void validate() const;
};

// E = V + W for N particles against the datum omega.
// V integrates exactly over particle omegas and by cell-midpoint
// quadrature over grids.
EnergyReport particle_energy(const ParticleMeasure& x, const Measure& omega,
                             const PowerKernel& kernel);

// d(E)/dx_i, flattened row-major. Pairs (and point/quadrature-node pairs)
// closer than eps_sing contribute zero (subgradient selection at the kink).
std::vector<double> particle_gradient(const ParticleMeasure& x, const Measure& omega,
                                      const PowerKernel& kernel,
                                      double eps_sing = 1e-12);

// -(1/2) double integral of |y-x|^q against the signed measure mu - omega.
// Requires both measures discrete or both gridded.
double symmetrized_energy(const Measure& mu, const Measure& omega, double q);

// D_q * integral of |mu_hat - omega_hat|^2 |xi|^{-d-q} over the truncated
// domain; nonnegative.
double fourier_energy(const Measure& mu, const Measure& omega, double q,
                      const FourierQuadrature& quad = {});

// Dense symmetric matrix A with A_ij = -(1/2) h_c^2 |c_i - c_j|^q for a 1D
// grid, so that (u-w)^T A (u-w) is the midpoint discretization of the
// symmetrized energy in density units. PSD on zero-sum vectors only.
std::vector<double> grid_quadratic_matrix(const GridDensity& g, double q);

}  // namespace mq

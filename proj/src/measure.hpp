#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace mq {

// N equal-weight points in R^d, stored as a flat row-major array.
class ParticleMeasure {
 public:
  ParticleMeasure(int dim, std::vector<double> coords);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(coords_.size()) / dim_; }
  double weight() const { return 1.0 / size(); }
  const std::vector<double>& coords() const { return coords_; }
  const double* point(int i) const { return coords_.data() + static_cast<size_t>(i) * dim_; }

 private:
  int dim_;
  std::vector<double> coords_;
};

// Nonnegative density values on a regular box grid (d = 1 or 2).
// Mass of a cell is value * cell_volume; total mass must be 1.
// 2D values are stored x-fastest: index = ix + cells[0] * iy.
class GridDensity {
 public:
  GridDensity(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
              std::array<int, 2> cells, std::vector<double> values);

  int dim() const { return dim_; }
  const std::array<double, 2>& lo() const { return lo_; }
  const std::array<double, 2>& hi() const { return hi_; }
  const std::array<int, 2>& cells() const { return cells_; }
  const std::vector<double>& values() const { return values_; }

  double cell_width(int axis) const {
    return (hi_[axis] - lo_[axis]) / cells_[axis];
  }
  double cell_volume() const;
  // Center coordinate of cell index along an axis.
  double center(int axis, int i) const {
    return lo_[axis] + (i + 0.5) * cell_width(axis);
  }
  double mass() const;

 private:
  int dim_;
  std::array<double, 2> lo_, hi_;
  std::array<int, 2> cells_;
  std::vector<double> values_;
};

using Measure = std::variant<ParticleMeasure, GridDensity>;

int measure_dim(const Measure& m);

enum class TvMethod { none, kernel_estimate, point_difference, grid };

std::string tv_method_name(TvMethod m);

struct EnergyReport {
  double attraction = 0.0;   // V
  double repulsion = 0.0;    // W
  double total = 0.0;        // E = V + W
  std::optional<double> symmetrized;  // E-tilde
  std::optional<double> fourier;      // E-hat
  std::optional<double> tv;
  TvMethod tv_method = TvMethod::none;
};

ParticleMeasure from_points(int dim, const std::vector<double>& coords);

// N i.i.d. draws from omega; inverse-CDF in 1D, cell-then-uniform in 2D.
// Deterministic for a fixed seed.
ParticleMeasure sample_empirical(const GridDensity& omega, int n, std::uint64_t seed);

double moment(const Measure& m, double order);

std::complex<double> char_function(const Measure& m, const double* xi, int dim);

// Exact L1 distance between the CDFs of two 1D measures.
double wasserstein1_1d(const Measure& a, const Measure& b);

// Support bounding box (particles: tight box around the points).
void support_box(const Measure& m, std::array<double, 2>& lo, std::array<double, 2>& hi);

}  // namespace mq

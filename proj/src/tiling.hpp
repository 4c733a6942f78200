#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "measure.hpp"

namespace mq {

// Shape bookkeeping for equal-mass tilings in any dimension:
// N = n_tilde^{d-m} (n_tilde+1)^m + l with the stated ranges for m and l.
struct TilingShape {
  std::int64_t n_tilde;
  int m;
  std::int64_t l;
};

TilingShape tiling_shape(std::int64_t n, int dim);

// Slice count along axis k (0-based) above the last axis; the last axis
// splits into l parents of n_tilde+1 leaves (lexicographically first) and
// the rest with n_tilde.
std::int64_t axis_count(const TilingShape& shape, int axis, int dim);
std::vector<std::int64_t> last_axis_counts(const TilingShape& shape, int dim);

struct Tile {
  std::array<int, 2> index;  // 1-based multi-index (axis 1 unused in 1D)
  std::array<double, 2> lo, hi;
  double mass;
};

// Equal-mass axis-aligned tiling of a grid density (d <= 2), built by
// piecewise-linear CDF inversion with the leftmost rule on plateaus.
class Tiling {
 public:
  Tiling(const GridDensity& omega, int n);

  int dim() const { return omega_.dim(); }
  int size() const { return static_cast<int>(tiles_.size()); }
  std::int64_t n_tilde() const { return n_tilde_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  // Tiles per column in 2D ({N} in 1D).
  const std::vector<int>& axis_counts() const { return counts_; }
  const GridDensity& source() const { return omega_; }
  bool plateau_warning() const { return plateau_warning_; }

 private:
  GridDensity omega_;
  std::int64_t n_tilde_;
  std::vector<Tile> tiles_;
  std::vector<int> counts_;
  bool plateau_warning_ = false;
};

enum class PointRule { center, mass_centroid };

PointRule point_rule_from_name(const std::string& name);

// One representative point per tile.
ParticleMeasure tiling_points(const Tiling& t, PointRule rule);

std::string tiling_to_csv(const Tiling& t);

}  // namespace mq

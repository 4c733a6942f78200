#include "builtins.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace mq {

namespace {

GridDensity interval_density(int cells, double lo, double hi,
                             std::vector<double> values) {
  double vol = (hi - lo) / cells;
  double mass = 0.0;
  for (double v : values) mass += v * vol;
  for (auto& v : values) v /= mass;
  return GridDensity(1, {lo, 0.0}, {hi, 1.0}, {cells, 1}, std::move(values));
}

std::vector<double> block_values(int cells) {
  // 5 * 1_{[0.2, 0.4]} on [0,1]; 200 cells align the edges exactly.
  std::vector<double> v(cells, 0.0);
  for (int i = 0; i < cells; ++i) {
    double c = (i + 0.5) / cells;
    if (c > 0.2 && c < 0.4) v[i] = 5.0;
  }
  return v;
}

double gauss_draw(std::mt19937_64& rng) {
  // Box-Muller on explicit 53-bit uniforms, portable across platforms.
  double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

Measure builtin_density(const std::string& name, std::uint64_t seed) {
  if (name == "uniform1d") {
    return interval_density(1024, 0.0, 1.0, std::vector<double>(1024, 1.0));
  }
  if (name == "uniform2d") {
    int n = 64;
    return GridDensity(2, {0.0, 0.0}, {1.0, 1.0}, {n, n},
                       std::vector<double>(static_cast<size_t>(n) * n, 1.0));
  }
  if (name == "delta0") {
    return ParticleMeasure(1, {0.0});
  }
  if (name == "spike") {
    // omega_1 = 4*1_{[0.2,0.4]} + 40*1_{[0.6,0.605]}; mass is exactly 1.
    int cells = 200;
    std::vector<double> v(cells, 0.0);
    for (int i = 0; i < cells; ++i) {
      double c = (i + 0.5) / cells;
      if (c > 0.2 && c < 0.4) v[i] = 4.0;
      if (c > 0.6 && c < 0.605) v[i] = 40.0;
    }
    return interval_density(cells, 0.0, 1.0, std::move(v));
  }
  if (name == "block") {
    return interval_density(200, 0.0, 1.0, block_values(200));
  }
  if (name == "block-noise") {
    int cells = 200;
    std::vector<double> v = block_values(cells);
    std::mt19937_64 rng(seed);
    for (auto& x : v) x += std::max(0.0, gauss_draw(rng));
    return interval_density(cells, 0.0, 1.0, std::move(v));
  }
  fail(ErrorCode::invalid_argument, "unknown builtin density '" + name + "'");
}

bool is_builtin_density(const std::string& name) {
  static const char* names[] = {"uniform1d", "uniform2d", "delta0",
                                "spike",     "block",     "block-noise"};
  return std::any_of(std::begin(names), std::end(names),
                     [&](const char* n) { return name == n; });
}

}  // namespace mq

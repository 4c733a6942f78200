#pragma once

#include <cstdint>
#include <string>

#include "measure.hpp"

namespace mq {

// Named data sets so every experiment is runnable without external files:
//   uniform1d        uniform density on [0,1], 1024 cells
//   uniform2d        uniform density on [0,1]^2, 64x64 cells
//   delta0           unit point mass at the origin (1D)
//   spike            4 on [0.2,0.4] plus 40 on [0.6,0.605], 200 cells
//   block            5 on [0.2,0.4], 200 cells
//   block-noise      block plus clipped Gaussian noise, renormalized
Measure builtin_density(const std::string& name, std::uint64_t seed = 0);

bool is_builtin_density(const std::string& name);

}  // namespace mq

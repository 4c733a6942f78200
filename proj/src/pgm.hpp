#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "measure.hpp"

namespace mq {

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major, top row first
};

// P2 (ASCII) and P5 (binary) readers, maxval <= 65535.
PgmImage parse_pgm(const unsigned char* data, size_t size);
PgmImage read_pgm_file(const std::string& path);

// Binary P5 writer, 8-bit.
void write_pgm_file(const std::string& path, const PgmImage& img);

// Inverted-intensity density on [0,1]^2: darker pixels carry more mass.
// A zero-intensity-sum image falls back to the uniform density;
// *uniform_fallback (optional) reports when that happened.
GridDensity grid_from_image(const PgmImage& img, bool* uniform_fallback = nullptr);

}  // namespace mq

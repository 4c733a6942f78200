#include "pgm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

namespace mq {

namespace {

struct Tokenizer {
  const unsigned char* data;
  size_t size;
  size_t pos = 0;

  // Skips whitespace and '#' comments (which run to end of line).
  void skip_separators() {
    while (pos < size) {
      if (std::isspace(data[pos])) {
        ++pos;
      } else if (data[pos] == '#') {
        while (pos < size && data[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  long next_int() {
    skip_separators();
    if (pos >= size || !std::isdigit(data[pos]))
      fail(ErrorCode::malformed_input, "PGM: expected integer token");
    long v = 0;
    while (pos < size && std::isdigit(data[pos])) {
      v = v * 10 + (data[pos] - '0');
      if (v > 1000000000L) fail(ErrorCode::malformed_input, "PGM: integer overflow");
      ++pos;
    }
    return v;
  }
};

}  // namespace

PgmImage parse_pgm(const unsigned char* data, size_t size) {
  if (size < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    fail(ErrorCode::malformed_input, "PGM: missing P2/P5 magic");
  bool binary = data[1] == '5';
  Tokenizer tok{data, size, 2};

  PgmImage img;
  img.width = static_cast<int>(tok.next_int());
  img.height = static_cast<int>(tok.next_int());
  img.maxval = static_cast<int>(tok.next_int());
  if (img.width < 1 || img.height < 1)
    fail(ErrorCode::malformed_input, "PGM: nonpositive dimensions");
  if (img.maxval < 1 || img.maxval > 65535)
    fail(ErrorCode::malformed_input, "PGM: maxval out of range");
  size_t count = static_cast<size_t>(img.width) * img.height;
  img.pixels.resize(count);

  if (binary) {
    // Exactly one whitespace byte separates the header from raster data.
    if (tok.pos >= size || !std::isspace(data[tok.pos]))
      fail(ErrorCode::malformed_input, "PGM: missing raster separator");
    ++tok.pos;
    int bytes = img.maxval > 255 ? 2 : 1;
    if (size - tok.pos < count * bytes)
      fail(ErrorCode::malformed_input, "PGM: truncated raster");
    for (size_t i = 0; i < count; ++i) {
      if (bytes == 1) {
        img.pixels[i] = data[tok.pos + i];
      } else {
        img.pixels[i] = static_cast<std::uint16_t>(
            (data[tok.pos + 2 * i] << 8) | data[tok.pos + 2 * i + 1]);
      }
    }
  } else {
    for (size_t i = 0; i < count; ++i) {
      long v = tok.next_int();
      if (v < 0 || v > img.maxval)
        fail(ErrorCode::malformed_input, "PGM: sample exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  for (auto p : img.pixels)
    if (p > img.maxval) fail(ErrorCode::malformed_input, "PGM: sample exceeds maxval");
  return img;
}

PgmImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return parse_pgm(buf.data(), buf.size());
}

void write_pgm_file(const std::string& path, const PgmImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (auto p : img.pixels) {
    unsigned char b = static_cast<unsigned char>(
        img.maxval == 255 ? p : (p * 255L) / img.maxval);
    out.put(static_cast<char>(b));
  }
  if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

GridDensity grid_from_image(const PgmImage& img, bool* uniform_fallback) {
  size_t count = img.pixels.size();
  std::vector<double> vals(count);
  double sum = 0.0;
  for (size_t i = 0; i < count; ++i) {
    vals[i] = static_cast<double>(img.maxval - img.pixels[i]);
    sum += vals[i];
  }
  bool fallback = sum <= 0.0;
  if (uniform_fallback) *uniform_fallback = fallback;
  double vol = 1.0 / (static_cast<double>(img.width) * img.height);
  if (fallback) {
    std::fill(vals.begin(), vals.end(), 1.0);
  } else {
    for (auto& v : vals) v /= sum * vol;
  }
  return GridDensity(2, {0.0, 0.0}, {1.0, 1.0}, {img.width, img.height},
                     std::move(vals));
}

}  // namespace mq

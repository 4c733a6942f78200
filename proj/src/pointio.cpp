#include "pointio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mq {

std::string points_to_csv(const ParticleMeasure& p) {
  std::ostringstream out;
  out << "# dim=" << p.dim() << " n=" << p.size() << "\n";
  char buf[40];
  for (int i = 0; i < p.size(); ++i) {
    for (int a = 0; a < p.dim(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.point(i)[a]);
      out << (a ? "," : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

ParticleMeasure points_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = -1;
  std::vector<double> coords;
  while (std::getline(in, line)) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::vector<double> row;
    size_t pos = start;
    while (pos <= line.size()) {
      size_t comma = line.find(',', pos);
      std::string field = line.substr(pos, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - pos);
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str())
        fail(ErrorCode::malformed_input, "points CSV: bad number '" + field + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (dim < 0) dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != dim)
      fail(ErrorCode::malformed_input, "points CSV: inconsistent column count");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim < 1 || coords.empty())
    fail(ErrorCode::malformed_input, "points CSV: no points found");
  return ParticleMeasure(dim, std::move(coords));
}

void write_points_csv(const std::string& path, const ParticleMeasure& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out << points_to_csv(p);
  if (!out) fail(ErrorCode::io_error, "write failed for " + path);
}

ParticleMeasure read_points_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return points_from_csv(ss.str());
}

}  // namespace mq

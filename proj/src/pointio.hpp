#pragma once

#include <string>

#include "measure.hpp"

namespace mq {

// Point-list CSV: '#'-prefixed header carrying dim and N, then one point
// per line with comma-separated coordinates.
std::string points_to_csv(const ParticleMeasure& p);
ParticleMeasure points_from_csv(const std::string& text);

void write_points_csv(const std::string& path, const ParticleMeasure& p);
ParticleMeasure read_points_csv(const std::string& path);

}  // namespace mq

#pragma once

#include <stdexcept>
#include <string>

namespace mq {

// Error codes shared with the C API (see include/measureq.h).
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  dim_mismatch = 2,
  non_finite = 3,
  domain_error = 4,
  unsupported_dim = 5,
  malformed_input = 6,
  io_error = 7,
  not_converged = 8,
  line_search_failed = 9,
  mixed_representation = 10,
  too_few_points = 11,
  singular_at_zero = 12,
  degenerate_mass = 13,
  internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mq

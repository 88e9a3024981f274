#pragma once

#include <stdexcept>
#include <string>

namespace riemap {

// Mirrors riemap_status in riemap.h; the C layer maps one onto the other.
enum class ErrorCode {
  invalid_argument = 1,
  policy_mismatch = 2,
  nonzero_constant = 3,
  index_out_of_range = 4,
  not_univalent = 5,
  non_finite = 6,
  parse_error = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace riemap

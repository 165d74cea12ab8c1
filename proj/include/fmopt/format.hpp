#pragma once

#include <charconv>
#include <string>

#include "fmopt/errors.hpp"

namespace fmopt {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::NumericFailure, "format_double failed");
  }
  return std::string(buf, ptr);
}

}  // namespace fmopt

#include "parse_util.hpp"

#include <cstdio>

namespace viscowave::detail {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace viscowave::detail

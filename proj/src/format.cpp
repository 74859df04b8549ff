#include "haarwalk/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace haarwalk {

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", t);
  return buf;
}

std::string format_sci(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return std::strtod(buf, nullptr);
}

}  // namespace haarwalk

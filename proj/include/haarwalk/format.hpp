#pragma once

#include <string>

namespace haarwalk {

/// Fixed-point with 9 decimals, used for every time column.
std::string format_time(double t);
/// Scientific notation with 12 significant digits.
std::string format_sci(double x);
/// x rounded to 12 significant digits, so that JSON serialization (shortest
/// round-trip) prints at most 12 of them.
double round12(double x);

}  // namespace haarwalk

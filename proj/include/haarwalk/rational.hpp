#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace haarwalk {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A real number that is either known exactly as a rational or flagged as
/// irrational by the caller. `approx` is always usable for simulation;
/// classification only ever looks at `exact`.
struct ExactReal {
  std::optional<Rational> exact;
  double approx = 0.0;

  static ExactReal rational(const Rational& q);
  static ExactReal irrational(double value);

  bool is_rational() const { return exact.has_value(); }
  double value() const { return approx; }
};

/// Parses "p/q", "p", or a finite decimal such as "-0.25" into lowest terms.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

Integer numerator_of(const Rational& q);
Integer denominator_of(const Rational& q);
Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);

/// Converts to int64 or throws std::overflow_error.
std::int64_t to_int64(const Integer& n);

}  // namespace haarwalk

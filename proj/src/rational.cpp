#include "haarwalk/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace haarwalk {

ExactReal ExactReal::rational(const Rational& q) {
  return ExactReal{q, to_double(q)};
}

ExactReal ExactReal::irrational(double value) {
  return ExactReal{std::nullopt, value};
}

namespace {

Integer parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    }
  }
  return Integer(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(s.substr(0, slash), text);
    const Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    const Integer whole = int_part.empty() ? Integer(0) : parse_integer(int_part, text);
    const Integer frac = frac_part.empty() ? Integer(0) : parse_integer(frac_part, text);
    Integer scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(parse_integer(s, text));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  const Integer den = denominator_of(q);
  if (den == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

std::int64_t to_int64(const Integer& n) {
  if (n > std::numeric_limits<std::int64_t>::max() ||
      n < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer " + n.str() + " does not fit in 64 bits");
  }
  return n.convert_to<std::int64_t>();
}

}  // namespace haarwalk

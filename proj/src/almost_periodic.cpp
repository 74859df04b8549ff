#include "haarwalk/almost_periodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace haarwalk {

std::complex<double> TrigPolynomial::operator()(double y) const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms) s += t.coefficient * std::polar(1.0, t.frequency * y);
  return s;
}

void validate(const TrigPolynomial& f) {
  std::vector<double> freq;
  for (const auto& t : f.terms) {
    if (!std::isfinite(t.frequency) || !std::isfinite(t.coefficient.real()) ||
        !std::isfinite(t.coefficient.imag())) {
      throw std::invalid_argument("trigonometric polynomial has a non-finite entry");
    }
    freq.push_back(t.frequency);
  }
  std::sort(freq.begin(), freq.end());
  if (std::adjacent_find(freq.begin(), freq.end()) != freq.end()) {
    throw std::invalid_argument("frequencies must be pairwise distinct");
  }
}

TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("trigonometric polynomial must be a JSON array");
  TrigPolynomial f;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("lambda") || !e.contains("re")) {
      throw std::invalid_argument("each term needs \"lambda\" and \"re\"");
    }
    const double im = e.contains("im") ? e.at("im").get<double>() : 0.0;
    f.terms.push_back({e.at("lambda").get<double>(), {e.at("re").get<double>(), im}});
  }
  validate(f);
  return f;
}

nlohmann::ordered_json to_json(const TrigPolynomial& f) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& t : f.terms) {
    j.push_back({{"lambda", t.frequency}, {"re", t.coefficient.real()}, {"im", t.coefficient.imag()}});
  }
  return j;
}

std::complex<double> mean_value(const TrigPolynomial& f) {
  for (const auto& t : f.terms)
    if (t.frequency == 0.0) return t.coefficient;
  return 0.0;
}

TrigPolynomial translate(const TrigPolynomial& f, double shift) {
  TrigPolynomial g = f;
  for (auto& t : g.terms) t.coefficient *= std::polar(1.0, t.frequency * shift);
  return g;
}

std::complex<double> path_average(const TrigPolynomial& f, const RealLevyPath& path, double horizon,
                                  Execution exec) {
  validate(f);
  if (!(horizon > 0.0) || horizon > path.horizon) {
    throw std::invalid_argument("averaging horizon must lie in (0, path horizon]");
  }
  std::complex<double> s = 0.0;
  for (const auto& t : f.terms) {
    s += t.frequency == 0.0 ? t.coefficient : t.coefficient * average_exponential(path, t.frequency, horizon, exec);
  }
  return s;
}

std::string limit_status(const RationalTriple& triple) {
  validate(triple);
  if (triple.sigma2 > 0) return "A(f)";
  if (triple.nu.size() <= 1) return "degenerate: limit not A(f)";
  for (const auto& a : triple.nu)
    if (!a.location.is_rational()) return "A(f)";
  return "degenerate: limit not A(f)";
}

}  // namespace haarwalk

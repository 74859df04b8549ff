#include "doctest.h"

#include <cmath>

#include "haarwalk/almost_periodic.hpp"

using namespace haarwalk;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// 2 + cos y + cos(sqrt 2 y).
TrigPolynomial example() {
  TrigPolynomial f;
  f.terms = {{0.0, 2.0}, {1.0, 0.5}, {-1.0, 0.5}, {kSqrt2, 0.5}, {-kSqrt2, 0.5}};
  return f;
}

RationalTriple rt(ExactReal beta, Rational sigma2, std::vector<RationalAtom> nu) {
  RationalTriple t;
  t.beta = beta;
  t.sigma2 = sigma2;
  t.nu = std::move(nu);
  return t;
}

}  // namespace

TEST_CASE("evaluation, mean value and translation") {
  const auto f = example();
  for (double y : {0.0, 0.3, -2.5, 17.0}) {
    const auto v = f(y);
    CHECK(v.real() == doctest::Approx(2 + std::cos(y) + std::cos(kSqrt2 * y)));
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(translate(f, 0.7)(y) - f(y + 0.7)) < 1e-12);
  }
  CHECK(mean_value(f) == std::complex<double>(2.0));
  CHECK(mean_value(TrigPolynomial{{{1.0, 3.0}}}) == std::complex<double>(0.0));
}

TEST_CASE("validation and JSON") {
  CHECK_THROWS(validate(TrigPolynomial{{{1.0, 1.0}, {1.0, 2.0}}}));
  CHECK_THROWS(validate(TrigPolynomial{{{NAN, 1.0}}}));
  const auto j = nlohmann::json::parse(R"([{"lambda": 0, "re": 2}, {"lambda": 1.5, "re": 0.5, "im": -1}])");
  const auto f = trig_polynomial_from_json(j);
  REQUIRE(f.terms.size() == 2);
  CHECK(f.terms[1].coefficient == std::complex<double>(0.5, -1.0));
  const auto back = trig_polynomial_from_json(nlohmann::json::parse(to_json(f).dump()));
  CHECK(back.terms[1].frequency == 1.5);
  CHECK_THROWS(trig_polynomial_from_json(nlohmann::json::parse(R"({"lambda": 1})")));
  CHECK_THROWS(trig_polynomial_from_json(nlohmann::json::parse(R"([{"re": 1}])")));
}

TEST_CASE("path average on a pure drift has a closed form") {
  LevyTriple t;
  t.beta = 0.37;
  const auto path = simulate_real_levy(t, 50.0, 0.0, 1);
  const double T = 40.0, v = 0.37;
  const double expected = 2 + std::sin(v * T) / (v * T) + std::sin(kSqrt2 * v * T) / (kSqrt2 * v * T);
  CHECK(path_average(example(), path, T).real() == doctest::Approx(expected).epsilon(1e-10));
  CHECK_THROWS(path_average(example(), path, 60.0));
  CHECK_THROWS(path_average(example(), path, 0.0));
}

TEST_CASE("path average on a grid path equals the step-function integral") {
  LevyTriple t;
  t.sigma2 = 1.0;
  const double dt = 0.01, T = 10.0;
  const auto path = simulate_real_levy(t, T, dt, 3);
  const auto f = example();
  // The continuous part is held on [i dt, (i+1) dt), so one value per cell is exact.
  std::complex<double> riemann = 0.0;
  const std::size_t cells = static_cast<std::size_t>(std::llround(T / dt));
  for (std::size_t i = 0; i < cells; ++i) riemann += f(path.value_at((i + 0.5) * dt)) * dt;
  riemann /= T;
  CHECK(std::abs(path_average(f, path, T, Execution::Serial) - riemann) < 1e-9);
  CHECK(std::abs(path_average(f, path, T, Execution::Serial) - path_average(f, path, T, Execution::Parallel)) < 1e-12);
}

TEST_CASE("limit status") {
  CHECK(limit_status(rt(ExactReal::rational(0), 1, {})) == "A(f)");
  CHECK(limit_status(rt(ExactReal::rational(1), 0, {})) == "degenerate: limit not A(f)");
  CHECK(limit_status(rt(ExactReal::rational(0), 0, {{ExactReal::rational(1), 1}})) == "degenerate: limit not A(f)");
  CHECK(limit_status(rt(ExactReal::rational(0), 0,
                        {{ExactReal::rational(1), 1}, {ExactReal::rational(Rational(1, 3)), 2}})) ==
        "degenerate: limit not A(f)");
  CHECK(limit_status(rt(ExactReal::rational(0), 0,
                        {{ExactReal::rational(1), 1}, {ExactReal::irrational(kSqrt2), 1}})) == "A(f)");
}

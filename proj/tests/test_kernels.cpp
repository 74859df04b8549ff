#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "haarwalk/kernels.hpp"
#include "haarwalk/occupation.hpp"

using namespace haarwalk;

namespace {

// Midpoint rule for int_0^dur exp(i lambda (y + v s)) ds.
std::complex<double> quadrature(double lambda, double dur, double y, double v) {
  const int n = 200000;
  std::complex<double> s = 0.0;
  const double h = dur / n;
  for (int i = 0; i < n; ++i) s += std::polar(1.0, lambda * (y + v * (i + 0.5) * h));
  return s * h;
}

}  // namespace

TEST_CASE("segment integral matches quadrature") {
  for (auto [lambda, dur, y, v] : {std::tuple{6.28, 1.5, 0.2, 0.7}, std::tuple{-12.0, 0.3, 0.9, -2.0},
                                   std::tuple{1.0, 2.0, 0.0, 0.0}, std::tuple{31.4, 0.01, 0.5, 1e-12}}) {
    const auto exact = kernels::segment_exponential(lambda, dur, y, v);
    CHECK(std::abs(exact - quadrature(lambda, dur, y, v)) < 1e-8);
  }
}

TEST_CASE("histogram of a linear segment matches fine sampling") {
  const auto part = make_torus_partition(7, 1, Rational(-1, 30));
  std::vector<double> bins(7, 0.0);
  const double dur = 3.3, y = 0.81, v = -1.37;
  kernels::add_segment_to_histogram(part, bins, dur, y, v);
  std::vector<double> oracle(7, 0.0);
  const int n = 2000000;
  for (int i = 0; i < n; ++i) oracle[part.axis_bin(fractional_part(y + v * (i + 0.5) * dur / n))] += dur / n;
  for (int b = 0; b < 7; ++b) CHECK(bins[b] == doctest::Approx(oracle[b]).epsilon(1e-5));
}

TEST_CASE("serial and parallel kernels agree") {
  const LevyTriple exact{0.3, 0.0, {{0.61, 1.0}, {-0.2, 0.5}}};
  const LevyTriple brownian{0.0, 1.0, {{0.5, 0.2}}};
  const std::vector<double> lambdas = {2 * std::numbers::pi, 4 * std::numbers::pi, 1.0, std::sqrt(2.0)};
  const auto part = make_torus_partition(100);
  for (const auto& t : {exact, brownian}) {
    const auto p = simulate_real_levy(t, 2000.0, 0.01, 21);
    const auto s = kernels::exponential_integrals_serial(p, lambdas, 0.0, p.horizon);
    const auto q = kernels::exponential_integrals_parallel(p, lambdas, 0.0, p.horizon);
    for (std::size_t k = 0; k < lambdas.size(); ++k) CHECK(std::abs(s[k] - q[k]) < 1e-9);
    const auto hs = kernels::torus_histogram_serial(p, part, 0.0, p.horizon);
    const auto hp = kernels::torus_histogram_parallel(p, part, 0.0, p.horizon);
    double total = 0.0;
    for (std::size_t b = 0; b < hs.size(); ++b) {
      CHECK(hs[b] == doctest::Approx(hp[b]).epsilon(1e-10));
      total += hp[b];
    }
    CHECK(total == doctest::Approx(p.horizon).epsilon(1e-12));
  }
}

TEST_CASE("parallel kernel output does not depend on the thread count") {
  const auto p = simulate_real_levy(LevyTriple{0.1, 0.5, {{0.37, 2.0}}}, 1000.0, 0.01, 4);
  const std::vector<double> lambdas = {2 * std::numbers::pi};
  const auto part = make_torus_partition(50);
  setenv("HAARWALK_THREADS", "1", 1);
  const auto a = kernels::exponential_integrals_parallel(p, lambdas, 0.0, p.horizon);
  const auto ha = kernels::torus_histogram_parallel(p, part, 0.0, p.horizon);
  setenv("HAARWALK_THREADS", "4", 1);
  const auto b = kernels::exponential_integrals_parallel(p, lambdas, 0.0, p.horizon);
  const auto hb = kernels::torus_histogram_parallel(p, part, 0.0, p.horizon);
  unsetenv("HAARWALK_THREADS");
  CHECK(a == b);
  CHECK(ha == hb);
  CHECK(kernels::thread_limit() >= 1);
}

#include "doctest.h"

#include <cmath>
#include <sstream>

#include "haarwalk/finite_groups.hpp"
#include "haarwalk/levy.hpp"

using namespace haarwalk;

TEST_CASE("triple validation") {
  CHECK_THROWS_AS(validate(LevyTriple{0.0, -1.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyTriple{0.0, 0.0, {{0.0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyTriple{0.0, 0.0, {{0.5, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyTriple{0.0, 0.0, {{0.5, 1.0}, {0.5, 2.0}}}), std::invalid_argument);
  CHECK_NOTHROW(validate(LevyTriple{0.0, 1.0, {{0.5, 1.0}, {2.0, 2.0}}}));
}

TEST_CASE("path drift removes the compensator of small jumps only") {
  const LevyTriple t{1.0, 0.0, {{0.5, 2.0}, {-0.25, 4.0}, {3.0, 1.0}}};
  CHECK(path_drift(t) == doctest::Approx(1.0 - 1.0 + 1.0));
  CHECK(total_jump_rate(t) == 7.0);

  RationalTriple r;
  r.beta = ExactReal::rational(Rational(1, 2));
  r.nu = {{ExactReal::rational(Rational(1, 2)), 1}, {ExactReal::rational(2), 3}};
  CHECK(*exact_path_drift(r) == 0);
  r.nu.push_back({ExactReal::irrational(0.3), 1});
  CHECK_FALSE(exact_path_drift(r).has_value());
  r.nu.back().location = ExactReal::irrational(1.5);
  CHECK(exact_path_drift(r).has_value());
  r.beta = ExactReal::irrational(0.7);
  CHECK_FALSE(exact_path_drift(r).has_value());
}

TEST_CASE("compound Poisson jump count is Poisson(rate * T)") {
  const LevyTriple t{0.0, 0.0, {{0.3, 1.5}, {-0.7, 0.5}}};
  const auto p = simulate_real_levy(t, 10000.0, 0.0, 11);
  const double n = static_cast<double>(p.jump_times.size());
  CHECK(std::abs(n - 20000.0) < 5.0 * std::sqrt(20000.0));
  CHECK(p.exact);
  for (std::size_t i = 1; i < p.jump_times.size(); ++i) REQUIRE(p.jump_times[i] > p.jump_times[i - 1]);
  CHECK(p.jump_times.back() <= p.horizon);
  // Mark frequencies follow the masses.
  std::size_t big = 0;
  for (std::size_t j = 0; j < p.jump_times.size(); ++j) big += p.jump_size(j) > 0 ? 1 : 0;
  CHECK(static_cast<double>(big) / n == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("exact paths are piecewise linear with the path drift") {
  const LevyTriple t{0.5, 0.0, {{0.25, 2.0}}};
  const auto p = simulate_real_levy(t, 50.0, 0.0, 3, 0.125);
  CHECK(p.drift == doctest::Approx(0.0));
  CHECK(p.value_at(0.0) == 0.125);
  for (double s : {0.3, 7.7, 21.0, 49.9}) {
    CHECK(p.value_at(s) == doctest::Approx(0.125 + p.jump_level(s)));
  }
  const auto q = simulate_real_levy(LevyTriple{0.2, 0.0, {}}, 10.0, 0.0, 1);
  CHECK(q.value_at(10.0) == doctest::Approx(2.0));
  CHECK(q.jump_times.empty());
}

TEST_CASE("Brownian grid increments have variance sigma^2 dt") {
  const auto p = simulate_real_levy(LevyTriple{0.0, 4.0, {}}, 1000.0, 0.01, 8);
  REQUIRE_FALSE(p.exact);
  CHECK(p.grid.size() == 100001);
  CHECK(p.grid[0] == 0.0);
  double s2 = 0.0;
  for (std::size_t i = 1; i < p.grid.size(); ++i) s2 += std::pow(p.grid[i] - p.grid[i - 1], 2);
  CHECK(s2 / 100000.0 == doctest::Approx(0.04).epsilon(0.02));
  // Left-endpoint hold between grid points.
  CHECK(p.value_at(0.015) == p.value_at(0.01));
}

TEST_CASE("simulation is deterministic in the seed") {
  const LevyTriple t{0.0, 1.0, {{0.5, 1.0}}};
  const auto a = simulate_real_levy(t, 100.0, 0.01, 42);
  const auto b = simulate_real_levy(t, 100.0, 0.01, 42);
  const auto c = simulate_real_levy(t, 100.0, 0.01, 43);
  CHECK(a.grid == b.grid);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.grid != c.grid);
}

TEST_CASE("torus projection, affine and geometric transforms") {
  const LevyTriple t{0.0, 0.0, {{0.7, 3.0}}};
  const auto p = simulate_real_levy(t, 20.0, 0.0, 5);
  const auto tp = project_to_torus(p);
  for (double s = 0.0; s < 20.0; s += 0.37) {
    const double v = tp.value_at(s);
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    CHECK(v == doctest::Approx(fractional_part(p.value_at(s))));
  }
  const auto a = affine_transform(p, 1.0, -2.0, 0.5);
  CHECK(a.value_at(13.3) == doctest::Approx(1.0 - 2.0 * p.value_at(13.3) + 0.5 * 13.3));
  const auto g = geometric_transform(p, 3.0, 0.5, -0.1);
  CHECK(g.value_at(4.2) == doctest::Approx(3.0 * std::exp(0.5 * p.value_at(4.2) - 0.42)));
  const auto lt = g.log_torus(10);
  CHECK(lt.value_at(4.2) == doctest::Approx(fractional_part(std::log10(g.value_at(4.2)))));
  CHECK_THROWS(geometric_transform(p, 0.0, 1.0, 0.0));
  CHECK_THROWS(geometric_transform(p, 1.0, 0.0, 0.0));
}

TEST_CASE("group jump paths and partial products share the mark stream") {
  const auto s3 = CompactGroup::finite(symmetric3_table());
  const StepDistribution steps(s3, {{FiniteElement{1}, 1.0}, {FiniteElement{3}, 2.0}});
  const auto path = simulate_jump_levy_group(s3, steps, 2.0, 100.0, 9, FiniteElement{0});
  CHECK_NOTHROW(path.validate());
  const auto prods = partial_products(s3, steps, path.states.size(), 9, FiniteElement{0});
  CHECK(prods == path.states);
  const auto cut = path.truncated(50.0);
  CHECK(cut.horizon == 50.0);
  CHECK(cut.times.size() <= path.times.size());
  if (!cut.times.empty()) CHECK(cut.times.back() <= 50.0);
}

TEST_CASE("sequence paths hold y_n on [n-1, n)") {
  const auto z5 = CompactGroup::finite(cyclic_table(5));
  const std::vector<GroupPoint> seq = {FiniteElement{1}, FiniteElement{2}, FiniteElement{4}};
  const auto p = sequence_path(z5, seq);
  CHECK(p.horizon == 3.0);
  CHECK(std::get<FiniteElement>(p.value_at(0.5)).index == 1);
  CHECK(std::get<FiniteElement>(p.value_at(1.0)).index == 2);
  CHECK(std::get<FiniteElement>(p.value_at(2.9)).index == 4);
}

TEST_CASE("step distributions") {
  const auto z4 = CompactGroup::finite(cyclic_table(4));
  CHECK_THROWS(StepDistribution(z4, {}));
  CHECK_THROWS(StepDistribution(z4, {{FiniteElement{1}, 0.0}}));
  CHECK_THROWS(StepDistribution(z4, {{FiniteElement{9}, 1.0}}));
  const StepDistribution d(z4, {{FiniteElement{1}, 1.0}, {FiniteElement{2}, 3.0}});
  CHECK(d.probability(1) == 0.75);
}

TEST_CASE("path CSV export") {
  const auto p = simulate_real_levy(LevyTriple{0.0, 0.0, {{0.5, 1.0}}}, 5.0, 0.0, 2);
  std::ostringstream out;
  write_path_csv(out, p, true);
  const auto text = out.str();
  CHECK(text.rfind("jump_time,", 0) == 0);
  const auto z3 = CompactGroup::finite(cyclic_table(3));
  std::ostringstream out2;
  write_path_csv(out2, sequence_path(z3, {FiniteElement{1}, FiniteElement{2}}));
  CHECK(out2.str().rfind("jump_time,state\n0.000000000,", 0) == 0);
}

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarwalk/occupation.hpp"

namespace haarwalk {

/// Outcome of one uniformity test. `pass` is statistic <= threshold.
/// `expect_pass` records what the limit-measure prediction says the outcome
/// should be; a run is consistent when the two agree.
struct TestReport {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool expect_pass = true;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  double horizon = 0.0;

  bool consistent() const { return pass == expect_pass; }
};

TestReport make_report(std::string test, double statistic, double threshold,
                       nlohmann::ordered_json params, std::uint64_t seed, double horizon,
                       bool expect_pass = true);
/// {test, statistic, threshold, verdict, params, seed, T}; numbers rounded to
/// 12 significant digits.
nlohmann::ordered_json to_json(const TestReport& report);

/// max_k |S_k(T_final) - target_k|. Targets default to 0 (the Haar integral
/// of every non-trivial torus or SO(3) character).
double weyl_statistic(const std::vector<CharacterSeries>& series,
                      std::span<const std::complex<double>> targets = {});

struct WeightedPoint {
  double x;
  double weight;
};

/// sup_x |F(x) - x| for the weighted empirical CDF of points in [0, 1), over
/// both one-sided limits at every sample point. Throws on empty input or
/// negative weights.
double star_discrepancy_1d(std::span<const WeightedPoint> samples);

/// (1/2) sum_i |occ_i - target_i|.
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_to_target(const OccupationMeasure& occ, std::span<const double> target);

/// Base-b significand: 0 for y == 0, otherwise |y| b^-floor(log_b |y|) in [1, b).
double significand(double y, int base);

struct WeightedValue {
  double y;
  double weight;
};

struct BenfordResult {
  double statistic = 0.0;  ///< sup over the s-grid of |F(s) - log_b s|
  double zero_mass = 0.0;  ///< weight carried by y == 0
};

/// Grid used by the Benford statistic: s_i = b^(i/1000), i = 0..999, i.e.
/// the points i/1000 in log_b scale.
inline constexpr std::size_t kBenfordGrid = 1000;

BenfordResult benford_statistic(std::span<const WeightedValue> values, int base);
/// Same statistic when the occupation of <log_b |X_t|> is already known.
/// Zero values of X correspond to mass at 0 (log_b 0 := 0).
BenfordResult benford_statistic(const OccupationCdf& log_occupation, int base);

/// Mass of each leading digit d = 1..b-1, i.e. of S_b in [d, d+1).
std::vector<double> leading_digit_frequencies(const OccupationCdf& log_occupation, int base);
OccupationCdf log_significand_cdf(std::span<const WeightedValue> values, int base);

}  // namespace haarwalk

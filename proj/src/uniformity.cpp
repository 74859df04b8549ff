#include "haarwalk/uniformity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haarwalk/format.hpp"

namespace haarwalk {

TestReport make_report(std::string test, double statistic, double threshold,
                       nlohmann::ordered_json params, std::uint64_t seed, double horizon,
                       bool expect_pass) {
  TestReport r;
  r.test = std::move(test);
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.expect_pass = expect_pass;
  r.params = std::move(params);
  r.seed = seed;
  r.horizon = horizon;
  return r;
}

nlohmann::ordered_json to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["test"] = report.test;
  j["statistic"] = round12(report.statistic);
  j["threshold"] = round12(report.threshold);
  j["verdict"] = report.pass ? "pass" : "fail";
  j["expected"] = report.expect_pass ? "pass" : "fail";
  j["params"] = report.params;
  j["seed"] = report.seed;
  j["T"] = round12(report.horizon);
  return j;
}

double weyl_statistic(const std::vector<CharacterSeries>& series,
                      std::span<const std::complex<double>> targets) {
  if (series.empty()) throw std::invalid_argument("weyl statistic needs at least one series");
  if (!targets.empty() && targets.size() != series.size()) {
    throw std::invalid_argument("one target per character series expected");
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].values.empty()) throw std::invalid_argument("character series has no checkpoints");
    const std::complex<double> target = targets.empty() ? 0.0 : targets[k];
    stat = std::max(stat, std::abs(series[k].values.back() - target));
  }
  return stat;
}

double star_discrepancy_1d(std::span<const WeightedPoint> samples) {
  if (samples.empty()) throw std::invalid_argument("star discrepancy of an empty sample");
  OccupationCdf cdf;
  cdf.atoms.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.weight >= 0.0)) throw std::invalid_argument("sample weights must be nonnegative");
    if (!(s.x >= 0.0 && s.x < 1.0)) throw std::invalid_argument("sample points must lie in [0, 1)");
    cdf.atoms.push_back({s.x, s.weight});
  }
  return cdf.star_discrepancy();
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total variation needs vectors of equal length");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::min(0.5 * s, 1.0);
}

double tv_to_target(const OccupationMeasure& occ, std::span<const double> target) {
  return tv_distance(occ.masses, target);
}

double significand(double y, int base) {
  if (base < 2) throw std::invalid_argument("significand base must be at least 2");
  if (y == 0.0) return 0.0;
  const double b = static_cast<double>(base);
  const double a = std::abs(y);
  const double k = std::floor(std::log(a) / std::log(b));
  double s = a / std::pow(b, k);
  if (s >= b) s /= b;
  if (s < 1.0) s *= b;
  return s;
}

OccupationCdf log_significand_cdf(std::span<const WeightedValue> values, int base) {
  const double ln_b = std::log(static_cast<double>(base));
  OccupationCdf cdf;
  for (const auto& v : values) {
    if (!(v.weight >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    const double s = significand(v.y, base);
    const double u = s == 0.0 ? 0.0 : std::clamp(std::log(s) / ln_b, 0.0, std::nextafter(1.0, 0.0));
    cdf.atoms.push_back({u, v.weight});
  }
  return cdf;
}

namespace {

BenfordResult benford_from_cdf(const OccupationCdf& cdf, int base, double zero_mass) {
  if (base < 2) throw std::invalid_argument("significand base must be at least 2");
  std::vector<double> grid(kBenfordGrid);
  for (std::size_t i = 0; i < kBenfordGrid; ++i) grid[i] = static_cast<double>(i) / kBenfordGrid;
  const auto F = cdf.cdf_at(grid);
  BenfordResult r;
  r.zero_mass = zero_mass;
  for (std::size_t i = 0; i < kBenfordGrid; ++i) r.statistic = std::max(r.statistic, std::abs(F[i] - grid[i]));
  return r;
}

}  // namespace

BenfordResult benford_statistic(std::span<const WeightedValue> values, int base) {
  if (base < 2) throw std::invalid_argument("significand base must be at least 2");
  double zero = 0.0;
  for (const auto& v : values) {
    if (v.y == 0.0) zero += v.weight;
  }
  return benford_from_cdf(log_significand_cdf(values, base), base, zero);
}

BenfordResult benford_statistic(const OccupationCdf& log_occupation, int base) {
  return benford_from_cdf(log_occupation, base, 0.0);
}

std::vector<double> leading_digit_frequencies(const OccupationCdf& log_occupation, int base) {
  if (base < 2) throw std::invalid_argument("significand base must be at least 2");
  const double ln_b = std::log(static_cast<double>(base));
  std::vector<double> edges;
  for (int d = 1; d <= base; ++d) {
    const double u = d == base ? 1.0 : std::log(static_cast<double>(d)) / ln_b;
    edges.push_back(std::nextafter(u, 0.0));
  }
  edges[0] = -1.0;  // F(0-) = 0
  const auto F = log_occupation.cdf_at(edges);
  std::vector<double> freq;
  for (int d = 1; d < base; ++d) freq.push_back(F[static_cast<std::size_t>(d)] - F[static_cast<std::size_t>(d) - 1]);
  return freq;
}

}  // namespace haarwalk

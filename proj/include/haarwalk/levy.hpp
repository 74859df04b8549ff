#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "haarwalk/group.hpp"
#include "haarwalk/rational.hpp"

namespace haarwalk {

// ---------------------------------------------------------------------------
// Characteristic triples
// ---------------------------------------------------------------------------

struct LevyAtom {
  double location = 0.0;  ///< jump size, nonzero
  double mass = 0.0;      ///< jump rate, positive
};

/// (beta, sigma^2, nu) with nu a finite atomic jump measure. The drift beta is
/// the Levy-Khintchine coefficient, i.e. it carries the compensator of the
/// jumps inside (-1, 1); see path_drift.
struct LevyTriple {
  double beta = 0.0;
  double sigma2 = 0.0;
  std::vector<LevyAtom> nu;
};

/// Throws std::invalid_argument for sigma2 < 0, an atom at 0, a nonpositive
/// mass, repeated locations or non-finite numbers.
void validate(const LevyTriple& triple);
double total_jump_rate(const LevyTriple& triple);

/// Linear drift of the simulated path: beta - sum over |x| < 1 of x * nu({x}).
double path_drift(const LevyTriple& triple);

struct RationalAtom {
  ExactReal location;
  Rational mass;
};

/// Exact counterpart of LevyTriple used by the classifier. Locations and beta
/// may be flagged irrational; masses and sigma2 are always rational.
struct RationalTriple {
  ExactReal beta = ExactReal::rational(0);
  Rational sigma2 = 0;
  std::vector<RationalAtom> nu;
};

void validate(const RationalTriple& triple);
LevyTriple to_levy_triple(const RationalTriple& triple);

/// path_drift in exact arithmetic, or nullopt when beta or an atom inside
/// (-1, 1) is flagged irrational.
std::optional<Rational> exact_path_drift(const RationalTriple& triple);

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// Real-valued Levy path: a continuous part plus a ledger of jumps.
///
/// Exact paths (sigma2 == 0) are piecewise linear,
///   Y_t = initial + drift * t + jump_level(t),
/// with no discretization. Otherwise the continuous part drift*t + sigma*B_t
/// is sampled on the grid i*dt and held constant on [i*dt, (i+1)*dt):
///   Y_t = initial + grid[floor(t/dt)] + jump_level(t).
/// jump_level(t) is the sum of all jumps at times <= t (right-continuous).
struct RealLevyPath {
  double horizon = 0.0;
  double initial = 0.0;
  double drift = 0.0;
  double sigma = 0.0;
  double dt = 0.0;  ///< 0 for exact paths
  bool exact = true;
  std::vector<double> grid;         ///< continuous part at i*dt, grid[0] == 0
  std::vector<double> jump_times;   ///< strictly increasing, in (0, horizon]
  std::vector<double> jump_levels;  ///< cumulative jump sum after each jump

  double value_at(double t) const;
  /// Sum of jumps at times <= t.
  double jump_level(double t) const;
  /// Continuous part (without initial value) at time t.
  double continuous_part(double t) const;
  std::size_t grid_index(double t) const;
  double jump_size(std::size_t j) const;
};

/// Simulates Y with Y_0 = initial: compound Poisson jumps at total rate
/// sum(m_j), each of size x_j with probability m_j / rate, plus drift
/// path_drift(triple) and, when sigma2 > 0, sigma * Brownian motion on a
/// grid of step dt (left-endpoint hold). dt is ignored when sigma2 == 0.
RealLevyPath simulate_real_levy(const LevyTriple& triple, double horizon, double dt,
                                std::uint64_t seed, double initial = 0.0);

/// Pointwise fractional part of a real Levy path; keeps the exactness flag.
struct TorusLevyPath {
  RealLevyPath lifted;

  double value_at(double t) const { return fractional_part(lifted.value_at(t)); }
  double horizon() const { return lifted.horizon; }
  bool exact() const { return lifted.exact; }
};

TorusLevyPath project_to_torus(RealLevyPath path);

/// offset + scale * Y_t + rate * t as a new path. On grid paths the rate term
/// is folded into the grid (held at left endpoints like the rest of the
/// continuous part).
RealLevyPath affine_transform(const RealLevyPath& path, double offset, double scale, double rate);

/// X_t = a * exp(c * Y_t + d * t).
struct GeometricPath {
  double a = 1.0;
  RealLevyPath exponent;  ///< c * Y_t + d * t

  double value_at(double t) const;
  double horizon() const { return exponent.horizon; }
  /// <log_b |X_t|> = <log_b|a| + (c Y_t + d t) / ln b> as a torus path.
  TorusLevyPath log_torus(int base) const;
};

/// Throws std::invalid_argument when a == 0 or c == 0.
GeometricPath geometric_transform(const RealLevyPath& path, double a, double c, double d);

/// Piecewise-constant group path: initial on [0, times[0]), states[i] on
/// [times[i], times[i+1]), the last state up to the horizon.
struct JumpPath {
  CompactGroup group;
  GroupPoint initial;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<GroupPoint> states;

  const GroupPoint& value_at(double t) const;
  /// Restriction to [0, t]; jumps after t are dropped.
  JumpPath truncated(double t) const;
  /// Checks time ordering, horizon and membership of every state.
  void validate() const;
};

/// Values on the grid 0, dt, 2dt, ...; the horizon is (size - 1) * dt.
template <class Value>
struct GridPath {
  double dt = 0.0;
  std::vector<Value> values;

  double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

/// Finite step law on a group; probabilities are renormalized to sum to 1.
class StepDistribution {
 public:
  StepDistribution(const CompactGroup& group, std::vector<std::pair<GroupPoint, double>> atoms);

  std::size_t size() const { return points_.size(); }
  const GroupPoint& point(std::size_t i) const { return points_[i]; }
  double probability(std::size_t i) const { return probs_[i]; }
  const std::vector<GroupPoint>& points() const { return points_; }
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<GroupPoint> points_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// X_t = X_0 xi_1 ... xi_{N_t} with N a rate-lambda Poisson clock.
JumpPath simulate_jump_levy_group(const CompactGroup& group, const StepDistribution& steps,
                                  double rate, double horizon, std::uint64_t seed,
                                  const GroupPoint& initial);

/// X_0 xi_1 ... xi_n for n = 1..count. Uses the same mark stream as
/// simulate_jump_levy_group, so for equal seeds the jump path visits exactly
/// these states in order.
std::vector<GroupPoint> partial_products(const CompactGroup& group, const StepDistribution& steps,
                                         std::size_t count, std::uint64_t seed,
                                         const GroupPoint& initial);

/// The step function t -> y_{floor(t) + 1} on [0, N) for a sequence y_1..y_N.
JumpPath sequence_path(const CompactGroup& group, const std::vector<GroupPoint>& sequence);

GridPath<GroupPoint> sample_on_grid(const JumpPath& path, double dt);
GridPath<double> sample_on_grid(const RealLevyPath& path, double dt);

// ---------------------------------------------------------------------------
// CSV export: header row, times fixed-point with 9 decimals, values with 12
// significant digits.
// ---------------------------------------------------------------------------

void write_path_csv(std::ostream& out, const GridPath<double>& path);
/// jump_time,state ledger; the first row is time 0 with the initial state.
void write_path_csv(std::ostream& out, const JumpPath& path);
/// Ledger for exact paths, t,value grid for grid paths. With `torus` set the
/// values are reduced mod 1.
void write_path_csv(std::ostream& out, const RealLevyPath& path, bool torus = false);

}  // namespace haarwalk

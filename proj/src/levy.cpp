#include "haarwalk/levy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "haarwalk/format.hpp"

namespace haarwalk {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

// Stream ids for derive_seed: the jump clock and the jump marks are separate
// engines so the mark sequence does not depend on the horizon.
constexpr std::uint64_t kClockStream = 0;
constexpr std::uint64_t kMarkStream = 1;
constexpr std::uint64_t kBrownianStream = 2;

}  // namespace

// ---------------------------------------------------------------------------

void validate(const LevyTriple& triple) {
  require_finite(triple.beta, "beta");
  require_finite(triple.sigma2, "sigma2");
  if (triple.sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  std::set<double> seen;
  for (const auto& atom : triple.nu) {
    require_finite(atom.location, "jump location");
    require_finite(atom.mass, "jump mass");
    if (atom.location == 0.0) throw std::invalid_argument("jump measure must not charge 0");
    if (!(atom.mass > 0.0)) throw std::invalid_argument("jump masses must be positive");
    if (!seen.insert(atom.location).second) {
      throw std::invalid_argument("jump locations must be pairwise distinct");
    }
  }
}

double total_jump_rate(const LevyTriple& triple) {
  double rate = 0.0;
  for (const auto& atom : triple.nu) rate += atom.mass;
  return rate;
}

double path_drift(const LevyTriple& triple) {
  double drift = triple.beta;
  for (const auto& atom : triple.nu) {
    if (std::abs(atom.location) < 1.0) drift -= atom.location * atom.mass;
  }
  return drift;
}

void validate(const RationalTriple& triple) {
  if (triple.sigma2 < 0) throw std::invalid_argument("sigma2 must be nonnegative");
  for (std::size_t i = 0; i < triple.nu.size(); ++i) {
    const auto& atom = triple.nu[i];
    if (atom.mass <= 0) throw std::invalid_argument("jump masses must be positive");
    if (atom.location.is_rational() ? *atom.location.exact == 0 : atom.location.approx == 0.0) {
      throw std::invalid_argument("jump measure must not charge 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto& other = triple.nu[j].location;
      const bool same = atom.location.is_rational() && other.is_rational()
                            ? *atom.location.exact == *other.exact
                            : atom.location.approx == other.approx;
      if (same) throw std::invalid_argument("jump locations must be pairwise distinct");
    }
  }
}

LevyTriple to_levy_triple(const RationalTriple& triple) {
  validate(triple);
  LevyTriple out{triple.beta.value(), to_double(triple.sigma2), {}};
  for (const auto& atom : triple.nu) out.nu.push_back({atom.location.value(), to_double(atom.mass)});
  return out;
}

std::optional<Rational> exact_path_drift(const RationalTriple& triple) {
  if (!triple.beta.is_rational()) return std::nullopt;
  Rational drift = *triple.beta.exact;
  for (const auto& atom : triple.nu) {
    if (atom.location.is_rational()) {
      const Rational& x = *atom.location.exact;
      if (x > -1 && x < 1) drift -= x * atom.mass;
    } else if (std::abs(atom.location.approx) < 1.0) {
      return std::nullopt;
    }
  }
  return drift;
}

// ---------------------------------------------------------------------------

std::size_t RealLevyPath::grid_index(double t) const {
  if (grid.empty()) return 0;
  double q = std::floor(t / dt);
  if (q < 0.0) q = 0.0;
  auto i = static_cast<std::size_t>(q);
  if (i > 0 && static_cast<double>(i) * dt > t) --i;
  if (static_cast<double>(i + 1) * dt <= t) ++i;
  return std::min(i, grid.size() - 1);
}

double RealLevyPath::jump_level(double t) const {
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  if (it == jump_times.begin()) return 0.0;
  return jump_levels[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

double RealLevyPath::continuous_part(double t) const {
  return exact ? drift * t : grid[grid_index(t)];
}

double RealLevyPath::value_at(double t) const {
  if (t < 0.0 || t > horizon) throw std::out_of_range("time outside path horizon");
  return initial + continuous_part(t) + jump_level(t);
}

double RealLevyPath::jump_size(std::size_t j) const {
  return j == 0 ? jump_levels[0] : jump_levels[j] - jump_levels[j - 1];
}

RealLevyPath simulate_real_levy(const LevyTriple& triple, double horizon, double dt,
                                std::uint64_t seed, double initial) {
  validate(triple);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  RealLevyPath path;
  path.horizon = horizon;
  path.initial = initial;
  path.drift = path_drift(triple);
  path.sigma = std::sqrt(triple.sigma2);
  path.exact = triple.sigma2 == 0.0;

  const double rate = total_jump_rate(triple);
  if (rate > 0.0) {
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& atom : triple.nu) cumulative.push_back(acc += atom.mass / rate);
    Rng clock(derive_seed(seed, kClockStream));
    Rng marks(derive_seed(seed, kMarkStream));
    double t = clock.exponential(rate);
    double level = 0.0;
    while (t <= horizon) {
      const double u = marks.uniform();
      auto j = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                        cumulative.begin());
      j = std::min(j, triple.nu.size() - 1);
      level += triple.nu[j].location;
      path.jump_times.push_back(t);
      path.jump_levels.push_back(level);
      t += clock.exponential(rate);
    }
  }

  if (!path.exact) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive when sigma2 > 0");
    path.dt = dt;
    const auto steps = static_cast<std::size_t>(std::floor(horizon / dt));
    path.grid.resize(steps + 1);
    Rng brownian(derive_seed(seed, kBrownianStream));
    const double scale = path.sigma * std::sqrt(dt);
    double b = 0.0;
    path.grid[0] = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
      b += scale * brownian.normal();
      path.grid[i] = path.drift * (static_cast<double>(i) * dt) + b;
    }
  }
  return path;
}

TorusLevyPath project_to_torus(RealLevyPath path) { return TorusLevyPath{std::move(path)}; }

RealLevyPath affine_transform(const RealLevyPath& path, double offset, double scale, double rate) {
  RealLevyPath out = path;
  out.initial = offset + scale * path.initial;
  out.drift = scale * path.drift + rate;
  out.sigma = std::abs(scale) * path.sigma;
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    out.grid[i] = scale * path.grid[i] + rate * (static_cast<double>(i) * path.dt);
  }
  for (double& level : out.jump_levels) level *= scale;
  return out;
}

double GeometricPath::value_at(double t) const { return a * std::exp(exponent.value_at(t)); }

TorusLevyPath GeometricPath::log_torus(int base) const {
  if (base < 2) throw std::invalid_argument("significand base must be at least 2");
  const double ln_b = std::log(static_cast<double>(base));
  return project_to_torus(affine_transform(exponent, std::log(std::abs(a)) / ln_b, 1.0 / ln_b, 0.0));
}

GeometricPath geometric_transform(const RealLevyPath& path, double a, double c, double d) {
  if (a == 0.0) throw std::invalid_argument("geometric transform needs a != 0");
  if (c == 0.0) throw std::invalid_argument("geometric transform needs c != 0");
  return GeometricPath{a, affine_transform(path, 0.0, c, d)};
}

// ---------------------------------------------------------------------------

const GroupPoint& JumpPath::value_at(double t) const {
  if (t < 0.0 || t > horizon) throw std::out_of_range("time outside path horizon");
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return initial;
  return states[static_cast<std::size_t>(it - times.begin()) - 1];
}

JumpPath JumpPath::truncated(double t) const {
  if (!(t > 0.0) || t > horizon) throw std::out_of_range("truncation time outside (0, horizon]");
  JumpPath out{group, initial, t, {}, {}};
  const auto n = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
  out.times.assign(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(n));
  out.states.assign(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void JumpPath::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("jump path horizon must be positive");
  if (times.size() != states.size()) throw std::invalid_argument("jump times and states differ in length");
  if (!contains(group, initial)) throw std::invalid_argument("initial state is not a group element");
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > prev) || times[i] > horizon) {
      throw std::invalid_argument("jump times must be strictly increasing in (0, horizon]");
    }
    if (!contains(group, states[i])) throw std::invalid_argument("jump state is not a group element");
    prev = times[i];
  }
}

StepDistribution::StepDistribution(const CompactGroup& group,
                                   std::vector<std::pair<GroupPoint, double>> atoms) {
  if (atoms.empty()) throw std::invalid_argument("step distribution is empty");
  double total = 0.0;
  for (auto& [point, p] : atoms) {
    if (!contains(group, point)) throw std::invalid_argument("step is not an element of " + group.name());
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("step probabilities must be positive");
    total += p;
  }
  double acc = 0.0;
  for (auto& [point, p] : atoms) {
    points_.push_back(point);
    probs_.push_back(p / total);
    cumulative_.push_back(acc += p / total);
  }
}

std::size_t StepDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto j = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                          cumulative_.begin());
  return std::min(j, points_.size() - 1);
}

JumpPath simulate_jump_levy_group(const CompactGroup& group, const StepDistribution& steps,
                                  double rate, double horizon, std::uint64_t seed,
                                  const GroupPoint& initial) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("jump rate must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  if (!contains(group, initial)) throw std::invalid_argument("initial state is not a group element");
  JumpPath path{group, initial, horizon, {}, {}};
  Rng clock(derive_seed(seed, kClockStream));
  Rng marks(derive_seed(seed, kMarkStream));
  GroupPoint state = initial;
  double t = clock.exponential(rate);
  while (t <= horizon) {
    state = multiply(group, state, steps.point(steps.sample(marks)));
    path.times.push_back(t);
    path.states.push_back(state);
    t += clock.exponential(rate);
  }
  return path;
}

std::vector<GroupPoint> partial_products(const CompactGroup& group, const StepDistribution& steps,
                                         std::size_t count, std::uint64_t seed,
                                         const GroupPoint& initial) {
  if (!contains(group, initial)) throw std::invalid_argument("initial state is not a group element");
  Rng marks(derive_seed(seed, kMarkStream));
  std::vector<GroupPoint> out;
  out.reserve(count);
  GroupPoint state = initial;
  for (std::size_t n = 0; n < count; ++n) {
    state = multiply(group, state, steps.point(steps.sample(marks)));
    out.push_back(state);
  }
  return out;
}

JumpPath sequence_path(const CompactGroup& group, const std::vector<GroupPoint>& sequence) {
  if (sequence.empty()) throw std::invalid_argument("sequence is empty");
  JumpPath path{group, sequence.front(), static_cast<double>(sequence.size()), {}, {}};
  path.times.reserve(sequence.size() - 1);
  path.states.reserve(sequence.size() - 1);
  for (std::size_t n = 1; n < sequence.size(); ++n) {
    path.times.push_back(static_cast<double>(n));
    path.states.push_back(sequence[n]);
  }
  return path;
}

GridPath<GroupPoint> sample_on_grid(const JumpPath& path, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  GridPath<GroupPoint> grid{dt, {}};
  const auto steps = static_cast<std::size_t>(std::floor(path.horizon / dt));
  grid.values.reserve(steps + 1);
  std::size_t j = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    while (j < path.times.size() && path.times[j] <= t) ++j;
    grid.values.push_back(j == 0 ? path.initial : path.states[j - 1]);
  }
  return grid;
}

GridPath<double> sample_on_grid(const RealLevyPath& path, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  GridPath<double> grid{dt, {}};
  const auto steps = static_cast<std::size_t>(std::floor(path.horizon / dt));
  grid.values.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    grid.values.push_back(path.value_at(std::min(static_cast<double>(i) * dt, path.horizon)));
  }
  return grid;
}

// ---------------------------------------------------------------------------

void write_path_csv(std::ostream& out, const GridPath<double>& path) {
  out << "t,value\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    out << format_time(static_cast<double>(i) * path.dt) << ',' << format_sci(path.values[i]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const JumpPath& path) {
  out << "jump_time,state\n";
  out << format_time(0.0) << ',' << point_label(path.group, path.initial) << '\n';
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    out << format_time(path.times[i]) << ',' << point_label(path.group, path.states[i]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const RealLevyPath& path, bool torus) {
  auto shown = [torus](double y) { return format_sci(torus ? fractional_part(y) : y); };
  if (path.exact) {
    out << "jump_time,state\n";
    out << format_time(0.0) << ',' << shown(path.initial) << '\n';
    for (std::size_t j = 0; j < path.jump_times.size(); ++j) {
      const double t = path.jump_times[j];
      out << format_time(t) << ',' << shown(path.initial + path.drift * t + path.jump_levels[j]) << '\n';
    }
    return;
  }
  out << "t,value\n";
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    const double t = static_cast<double>(i) * path.dt;
    out << format_time(t) << ',' << shown(path.initial + path.grid[i] + path.jump_level(t)) << '\n';
  }
}

}  // namespace haarwalk

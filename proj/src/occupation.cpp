#include "haarwalk/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "haarwalk/format.hpp"
#include "haarwalk/kernels.hpp"

namespace haarwalk {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t angle_bin(const AnglePartition& p, double theta) {
  const auto b = static_cast<std::size_t>(theta / kPi * static_cast<double>(p.bins));
  return std::min(b, p.bins - 1);
}

double torus_frequency_1d(const CharacterIndex& index) {
  const auto* k = std::get_if<TorusFrequency>(&index);
  if (!k || k->k.size() != 1) throw std::invalid_argument("torus path characters need a 1-d frequency");
  return 2.0 * kPi * static_cast<double>(k->k[0]);
}

void require_horizon(double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("path horizon must be positive");
}

std::vector<double> checked_checkpoints(const std::vector<double>& checkpoints, double horizon) {
  double prev = 0.0;
  for (double c : checkpoints) {
    if (!(c > prev)) throw std::invalid_argument("checkpoints must be positive and increasing");
    if (c > horizon) throw std::out_of_range("checkpoint beyond path horizon");
    prev = c;
  }
  return checkpoints;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t TorusPartition::axis_bin(double x) const {
  const double u = (x - offset_value) * static_cast<double>(bins);
  auto i = static_cast<std::size_t>(std::floor(u));
  return i >= bins ? i - bins : i;
}

double TorusPartition::left_edge(std::size_t i) const {
  return fractional_part(offset_value + static_cast<double>(i) / static_cast<double>(bins));
}

TorusPartition make_torus_partition(std::size_t bins, std::size_t dim, const Rational& offset) {
  if (bins < 1) throw std::invalid_argument("bin count must be at least 1");
  if (dim < 1) throw std::invalid_argument("torus dimension must be positive");
  if (offset > 0 || offset <= Rational(-1, static_cast<long long>(bins))) {
    throw std::invalid_argument("partition offset must lie in (-1/B, 0]");
  }
  TorusPartition p;
  p.bins = bins;
  p.dim = dim;
  p.offset = offset;
  p.offset_value = to_double(offset);
  return p;
}

Partition default_partition(const CompactGroup& group) {
  switch (group.family()) {
    case Family::Torus: return make_torus_partition(group.partition_hint(), group.dimension());
    case Family::FiniteTable: return ElementPartition{group.table().order()};
    case Family::Rotation3D: return AnglePartition{group.partition_hint()};
  }
  return ElementPartition{};
}

void check_compatible(const Partition& partition, const CompactGroup& group) {
  const bool ok = std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TorusPartition>) {
          return group.family() == Family::Torus && p.dim == group.dimension() && p.bins >= 1;
        } else if constexpr (std::is_same_v<P, ElementPartition>) {
          return group.family() == Family::FiniteTable && p.order == group.table().order();
        } else {
          return group.family() == Family::Rotation3D && p.bins >= 1;
        }
      },
      partition);
  if (!ok) throw std::invalid_argument("partition does not match " + group.name());
}

std::size_t bin_count(const Partition& partition) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TorusPartition>) {
          std::size_t n = 1;
          for (std::size_t i = 0; i < p.dim; ++i) {
            if (n > (std::size_t{1} << 26) / p.bins) throw std::invalid_argument("torus partition too fine");
            n *= p.bins;
          }
          return n;
        } else if constexpr (std::is_same_v<P, ElementPartition>) {
          return p.order;
        } else {
          return p.bins;
        }
      },
      partition);
}

std::size_t bin_of(const Partition& partition, const GroupPoint& g) {
  return std::visit(
      [&](const auto& p) -> std::size_t {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TorusPartition>) {
          const auto& x = std::get<TorusPoint>(g).coords;
          std::size_t b = 0;
          for (std::size_t i = 0; i < p.dim; ++i) b = b * p.bins + p.axis_bin(x.at(i));
          return b;
        } else if constexpr (std::is_same_v<P, ElementPartition>) {
          return std::get<FiniteElement>(g).index;
        } else {
          return angle_bin(p, rotation_angle(std::get<Quaternion>(g)));
        }
      },
      partition);
}

std::string bin_label(const Partition& partition, const CompactGroup& group, std::size_t bin) {
  return std::visit(
      [&](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TorusPartition>) {
          std::string label;
          std::size_t rest = bin;
          std::vector<std::size_t> idx(p.dim);
          for (std::size_t i = p.dim; i-- > 0;) {
            idx[i] = rest % p.bins;
            rest /= p.bins;
          }
          for (std::size_t i = 0; i < p.dim; ++i) {
            label += (i ? ";" : "") + format_time(p.left_edge(idx[i]));
          }
          return label;
        } else if constexpr (std::is_same_v<P, ElementPartition>) {
          return group.table().label(bin);
        } else {
          return format_time(kPi * static_cast<double>(bin) / static_cast<double>(p.bins));
        }
      },
      partition);
}

std::vector<double> haar_masses(const Partition& partition) {
  const std::size_t n = bin_count(partition);
  if (const auto* p = std::get_if<AnglePartition>(&partition)) {
    std::vector<double> out(n);
    auto cdf = [](double t) { return (t - std::sin(t)) / kPi; };
    for (std::size_t b = 0; b < n; ++b) {
      const double lo = kPi * static_cast<double>(b) / static_cast<double>(p->bins);
      const double hi = kPi * static_cast<double>(b + 1) / static_cast<double>(p->bins);
      out[b] = cdf(hi) - cdf(lo);
    }
    return out;
  }
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

// ---------------------------------------------------------------------------

double OccupationMeasure::total_mass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

OccupationMeasure merge(const OccupationMeasure& a, const OccupationMeasure& b) {
  if (a.masses.size() != b.masses.size()) throw std::invalid_argument("cannot merge different partitions");
  OccupationMeasure out = a;
  out.total_time = a.total_time + b.total_time;
  const double wa = a.total_time / out.total_time;
  const double wb = b.total_time / out.total_time;
  for (std::size_t i = 0; i < out.masses.size(); ++i) out.masses[i] = wa * a.masses[i] + wb * b.masses[i];
  return out;
}

// ---------------------------------------------------------------------------

std::complex<double> integrate_jump_path(const JumpPath& path, const CharacterIndex& index) {
  require_horizon(path.horizon);
  validate_character(path.group, index);
  return integrate_jump_path_with(path, [&](const GroupPoint& g) {
    return character_eval(path.group, index, g);
  });
}

std::complex<double> integrate_jump_path(const JumpPath& path, const BinIndicator& bin) {
  require_horizon(path.horizon);
  check_compatible(bin.partition, path.group);
  return integrate_jump_path_with(path, [&](const GroupPoint& g) {
    return bin_of(bin.partition, g) == bin.bin ? 1.0 : 0.0;
  });
}

OccupationMeasure occupation_histogram(const JumpPath& path, const Partition& partition) {
  require_horizon(path.horizon);
  check_compatible(partition, path.group);
  OccupationMeasure occ{partition, std::vector<double>(bin_count(partition), 0.0), path.horizon,
                        haar_masses(partition)};
  double start = 0.0;
  const GroupPoint* state = &path.initial;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    occ.masses[bin_of(partition, *state)] += path.times[i] - start;
    start = path.times[i];
    state = &path.states[i];
  }
  occ.masses[bin_of(partition, *state)] += path.horizon - start;
  for (double& m : occ.masses) m /= path.horizon;
  return occ;
}

std::vector<CharacterSeries> character_series(const JumpPath& path,
                                              const std::vector<CharacterIndex>& indices,
                                              const std::vector<double>& checkpoints) {
  require_horizon(path.horizon);
  checked_checkpoints(checkpoints, path.horizon);
  for (const auto& index : indices) validate_character(path.group, index);

  std::vector<CharacterSeries> out;
  for (const auto& index : indices) out.push_back({index, checkpoints, {}});
  std::vector<std::complex<double>> sums(indices.size());
  std::vector<std::complex<double>> phi(indices.size());
  auto evaluate = [&](const GroupPoint& g) {
    for (std::size_t k = 0; k < indices.size(); ++k) phi[k] = character_eval(path.group, indices[k], g);
  };

  // Same accumulation order as integrate_jump_path_with on a truncated path:
  // whole segments first, then the partial segment ending at the checkpoint.
  double start = 0.0;
  std::size_t next = 0;
  evaluate(path.initial);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const double cp = checkpoints[c];
    while (next < path.times.size() && path.times[next] <= cp) {
      for (std::size_t k = 0; k < indices.size(); ++k) sums[k] += (path.times[next] - start) * phi[k];
      start = path.times[next];
      evaluate(path.states[next]);
      ++next;
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
      out[k].values.push_back((sums[k] + (cp - start) * phi[k]) / cp);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::complex<double> integrate_grid_path(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                         const CharacterIndex& index) {
  validate_character(group, index);
  return integrate_grid_path_with(path, [&](const GroupPoint& g) { return character_eval(group, index, g); });
}

std::complex<double> integrate_grid_path(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                         const BinIndicator& bin) {
  check_compatible(bin.partition, group);
  return integrate_grid_path_with(path, [&](const GroupPoint& g) {
    return bin_of(bin.partition, g) == bin.bin ? 1.0 : 0.0;
  });
}

OccupationMeasure occupation_histogram(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                       const Partition& partition) {
  check_compatible(partition, group);
  if (path.values.size() < 2 || !(path.dt > 0.0)) {
    throw std::invalid_argument("grid path needs at least two points and dt > 0");
  }
  OccupationMeasure occ{partition, std::vector<double>(bin_count(partition), 0.0), path.horizon(),
                        haar_masses(partition)};
  const double w = 1.0 / static_cast<double>(path.values.size() - 1);
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) occ.masses[bin_of(partition, path.values[i])] += w;
  return occ;
}

// ---------------------------------------------------------------------------

std::complex<double> integrate_torus_path(const TorusLevyPath& path, const CharacterIndex& index,
                                          Execution exec) {
  return average_exponential(path.lifted, torus_frequency_1d(index), path.horizon(), exec);
}

std::complex<double> integrate_torus_path(const TorusLevyPath& path, const BinIndicator& bin,
                                          Execution exec) {
  const auto* p = std::get_if<TorusPartition>(&bin.partition);
  if (!p || p->dim != 1) throw std::invalid_argument("torus path bins need a 1-d torus partition");
  const auto occ = occupation_histogram(path, *p, exec);
  return occ.masses.at(bin.bin);
}

OccupationMeasure occupation_histogram(const TorusLevyPath& path, const TorusPartition& partition,
                                       Execution exec) {
  require_horizon(path.horizon());
  if (partition.dim != 1) throw std::invalid_argument("torus Levy paths are one-dimensional");
  auto bins = exec == Execution::Serial
                  ? kernels::torus_histogram_serial(path.lifted, partition, 0.0, path.horizon())
                  : kernels::torus_histogram_parallel(path.lifted, partition, 0.0, path.horizon());
  for (double& b : bins) b /= path.horizon();
  return OccupationMeasure{partition, std::move(bins), path.horizon(), haar_masses(partition)};
}

std::vector<CharacterSeries> character_series(const TorusLevyPath& path,
                                              const std::vector<CharacterIndex>& indices,
                                              const std::vector<double>& checkpoints, Execution exec) {
  require_horizon(path.horizon());
  checked_checkpoints(checkpoints, path.horizon());
  std::vector<double> lambdas;
  for (const auto& index : indices) lambdas.push_back(torus_frequency_1d(index));

  std::vector<CharacterSeries> out;
  for (const auto& index : indices) out.push_back({index, checkpoints, {}});
  std::vector<std::complex<double>> sums(indices.size());
  double start = 0.0;
  for (double cp : checkpoints) {
    const auto part = exec == Execution::Serial
                          ? kernels::exponential_integrals_serial(path.lifted, lambdas, start, cp)
                          : kernels::exponential_integrals_parallel(path.lifted, lambdas, start, cp);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      sums[k] += part[k];
      out[k].values.push_back(sums[k] / cp);
    }
    start = cp;
  }
  return out;
}

std::complex<double> average_exponential(const RealLevyPath& path, double lambda, double horizon,
                                         Execution exec) {
  require_horizon(horizon);
  if (horizon > path.horizon) throw std::out_of_range("averaging horizon exceeds path horizon");
  const double lambdas[] = {lambda};
  const auto sums = exec == Execution::Serial
                        ? kernels::exponential_integrals_serial(path, lambdas, 0.0, horizon)
                        : kernels::exponential_integrals_parallel(path, lambdas, 0.0, horizon);
  return sums[0] / horizon;
}

// ---------------------------------------------------------------------------

void OccupationCdf::scale(double factor) {
  for (auto& a : atoms) a.mass *= factor;
  for (auto& p : pieces) p.density *= factor;
  uniform_density *= factor;
}

double OccupationCdf::total_mass() const {
  double m = uniform_density;
  for (const auto& a : atoms) m += a.mass;
  for (const auto& p : pieces) m += p.density * (p.hi - p.lo);
  return m;
}

namespace {

struct CdfEvent {
  double x;
  double jump;
  double slope;
};

std::vector<CdfEvent> cdf_events(const OccupationCdf& cdf) {
  std::vector<CdfEvent> events;
  events.reserve(cdf.atoms.size() + 2 * cdf.pieces.size());
  for (const auto& a : cdf.atoms) events.push_back({a.x, a.mass, 0.0});
  for (const auto& p : cdf.pieces) {
    events.push_back({p.lo, 0.0, p.density});
    events.push_back({p.hi, 0.0, -p.density});
  }
  std::sort(events.begin(), events.end(), [](const CdfEvent& a, const CdfEvent& b) { return a.x < b.x; });
  return events;
}

}  // namespace

std::vector<double> OccupationCdf::cdf_at(std::span<const double> queries) const {
  const auto events = cdf_events(*this);
  std::vector<double> out;
  out.reserve(queries.size());
  double F = 0.0, pos = 0.0, slope = uniform_density;
  std::size_t e = 0;
  for (double u : queries) {
    while (e < events.size() && events[e].x <= u) {
      F += slope * (events[e].x - pos);
      pos = events[e].x;
      F += events[e].jump;
      slope += events[e].slope;
      ++e;
    }
    out.push_back(u < 0.0 ? 0.0 : F + slope * (u - pos));
  }
  return out;
}

double OccupationCdf::star_discrepancy() const {
  const auto events = cdf_events(*this);
  double F = 0.0, pos = 0.0, slope = uniform_density, D = 0.0;
  std::size_t e = 0;
  while (e < events.size()) {
    const double x = events[e].x;
    F += slope * (x - pos);
    pos = x;
    D = std::max(D, std::abs(F - x));
    while (e < events.size() && events[e].x == x) {
      F += events[e].jump;
      slope += events[e].slope;
      ++e;
    }
    D = std::max(D, std::abs(F - x));
  }
  F += slope * (1.0 - pos);
  D = std::max(D, std::abs(F - 1.0));
  return std::min(D, 1.0);
}

OccupationCdf occupation_cdf(const TorusLevyPath& path) {
  require_horizon(path.horizon());
  OccupationCdf cdf;
  kernels::for_each_segment(path.lifted, 0.0, path.horizon(), [&](double, double duration, double y, double v) {
    const double x = fractional_part(y);
    if (v == 0.0) {
      cdf.atoms.push_back({x, duration});
      return;
    }
    const double speed = std::abs(v);
    const double length = speed * duration;
    const double wraps = std::floor(length);
    cdf.uniform_density += duration * (wraps / length);
    const double rest = length - wraps;
    if (rest <= 0.0) return;
    const double lo = v > 0.0 ? x : fractional_part(x - rest);
    const double density = 1.0 / speed;
    if (lo + rest <= 1.0) {
      cdf.pieces.push_back({lo, lo + rest, density});
    } else {
      cdf.pieces.push_back({lo, 1.0, density});
      cdf.pieces.push_back({0.0, lo + rest - 1.0, density});
    }
  });
  cdf.scale(1.0 / path.horizon());
  return cdf;
}

OccupationCdf occupation_cdf(const JumpPath& path, std::size_t axis) {
  require_horizon(path.horizon);
  if (path.group.family() != Family::Torus || axis >= path.group.dimension()) {
    throw std::invalid_argument("occupation CDF needs a torus path and a valid axis");
  }
  OccupationCdf cdf;
  double start = 0.0;
  const GroupPoint* state = &path.initial;
  auto coord = [axis](const GroupPoint* g) { return std::get<TorusPoint>(*g).coords[axis]; };
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    cdf.atoms.push_back({coord(state), path.times[i] - start});
    start = path.times[i];
    state = &path.states[i];
  }
  cdf.atoms.push_back({coord(state), path.horizon - start});
  cdf.scale(1.0 / path.horizon);
  return cdf;
}

}  // namespace haarwalk

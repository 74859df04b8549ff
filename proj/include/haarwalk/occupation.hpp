#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "haarwalk/group.hpp"
#include "haarwalk/levy.hpp"
#include "haarwalk/rational.hpp"

namespace haarwalk {

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// B equal bins per axis of T^d. Bin i of an axis is
/// [offset + i/B, offset + (i+1)/B) mod 1 with offset in (-1/B, 0].
struct TorusPartition {
  std::size_t bins = 1000;
  std::size_t dim = 1;
  Rational offset = 0;
  double offset_value = 0.0;

  std::size_t axis_bin(double x) const;
  /// Left edge of bin i in [0, 1) (offset applied, reduced mod 1).
  double left_edge(std::size_t i) const;
};

/// One bin per group element.
struct ElementPartition {
  std::size_t order = 0;
};

/// Equal bins of the rotation angle over [0, pi].
struct AnglePartition {
  std::size_t bins = 90;
};

using Partition = std::variant<TorusPartition, ElementPartition, AnglePartition>;

/// Throws std::invalid_argument for bins < 1 or an offset outside (-1/B, 0].
TorusPartition make_torus_partition(std::size_t bins, std::size_t dim = 1, const Rational& offset = 0);
Partition default_partition(const CompactGroup& group);
/// Throws std::invalid_argument when the partition does not fit the group.
void check_compatible(const Partition& partition, const CompactGroup& group);
std::size_t bin_count(const Partition& partition);
std::size_t bin_of(const Partition& partition, const GroupPoint& g);
std::string bin_label(const Partition& partition, const CompactGroup& group, std::size_t bin);
/// Haar measure of every bin. For angle bins this is the integral of the
/// Haar angle density (1 - cos theta) / pi over the bin.
std::vector<double> haar_masses(const Partition& partition);

/// Indicator of one bin, usable wherever a character is.
struct BinIndicator {
  Partition partition;
  std::size_t bin = 0;
};

// ---------------------------------------------------------------------------
// Occupation data
// ---------------------------------------------------------------------------

/// Normalized occupation measure Lambda_T(B) = (1/T) Leb{t < T : X_t in B}
/// over the bins of a partition. `reference` holds the Haar mass of each bin.
struct OccupationMeasure {
  Partition partition;
  std::vector<double> masses;
  double total_time = 0.0;
  std::vector<double> reference;

  double total_mass() const;
};

/// Occupation over the concatenation of two disjoint time ranges: the
/// time-weighted average of the masses. Associative and commutative.
OccupationMeasure merge(const OccupationMeasure& a, const OccupationMeasure& b);

/// Running time averages S_k(T_i) = (1/T_i) int_0^{T_i} phi_k(X_t) dt.
struct CharacterSeries {
  CharacterIndex index;
  std::vector<double> checkpoints;
  std::vector<std::complex<double>> values;
};

// ---------------------------------------------------------------------------
// Piecewise-constant group paths (exact)
// ---------------------------------------------------------------------------

/// (1/T) sum_i dt_i phi(x_i) over the segments [0, t1), [t1, t2), ..., [tn, T].
template <class F>
std::complex<double> integrate_jump_path_with(const JumpPath& path, F&& phi) {
  std::complex<double> sum = 0.0;
  double start = 0.0;
  const GroupPoint* state = &path.initial;
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    sum += (path.times[i] - start) * std::complex<double>(phi(*state));
    start = path.times[i];
    state = &path.states[i];
  }
  sum += (path.horizon - start) * std::complex<double>(phi(*state));
  return sum / path.horizon;
}

std::complex<double> integrate_jump_path(const JumpPath& path, const CharacterIndex& index);
std::complex<double> integrate_jump_path(const JumpPath& path, const BinIndicator& bin);

OccupationMeasure occupation_histogram(const JumpPath& path, const Partition& partition);

/// One pass over the path; each checkpoint value equals integrate_jump_path
/// on the path truncated at that checkpoint, bit for bit.
std::vector<CharacterSeries> character_series(const JumpPath& path,
                                              const std::vector<CharacterIndex>& indices,
                                              const std::vector<double>& checkpoints);

// ---------------------------------------------------------------------------
// Grid paths (left-endpoint Riemann sums)
// ---------------------------------------------------------------------------

/// (sum_{i<n} phi(x_i) dt) / (n dt). Bias is O(sqrt(dt)) for Brownian paths.
template <class V, class F>
std::complex<double> integrate_grid_path_with(const GridPath<V>& path, F&& phi) {
  if (path.values.size() < 2 || !(path.dt > 0.0)) {
    throw std::invalid_argument("grid path needs at least two points and dt > 0");
  }
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
    sum += std::complex<double>(phi(path.values[i]));
  }
  return sum * path.dt / path.horizon();
}

std::complex<double> integrate_grid_path(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                         const CharacterIndex& index);
std::complex<double> integrate_grid_path(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                         const BinIndicator& bin);
OccupationMeasure occupation_histogram(const GridPath<GroupPoint>& path, const CompactGroup& group,
                                       const Partition& partition);

// ---------------------------------------------------------------------------
// Torus-projected Levy paths (exact when sigma2 == 0, Riemann otherwise)
// ---------------------------------------------------------------------------

/// Selects the segment kernel: the serial reference or the chunked OpenMP
/// kernel. Both give the same values up to rounding; the parallel kernel
/// uses a fixed chunk layout so its output does not depend on thread count.
enum class Execution { Serial, Parallel };

std::complex<double> integrate_torus_path(const TorusLevyPath& path, const CharacterIndex& index,
                                          Execution exec = Execution::Parallel);
std::complex<double> integrate_torus_path(const TorusLevyPath& path, const BinIndicator& bin,
                                          Execution exec = Execution::Parallel);
OccupationMeasure occupation_histogram(const TorusLevyPath& path, const TorusPartition& partition,
                                       Execution exec = Execution::Parallel);
std::vector<CharacterSeries> character_series(const TorusLevyPath& path,
                                              const std::vector<CharacterIndex>& indices,
                                              const std::vector<double>& checkpoints,
                                              Execution exec = Execution::Parallel);

/// (1/T) int_0^T exp(i lambda Y_t) dt on the lifted real path.
std::complex<double> average_exponential(const RealLevyPath& path, double lambda, double horizon,
                                         Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Exact occupation distribution on [0, 1)
// ---------------------------------------------------------------------------

/// A measure on [0, 1) made of point masses, constant-density pieces and a
/// uniform floor. This is exactly the occupation measure of a piecewise
/// linear torus path; star discrepancy and CDF queries on it are exact.
struct OccupationCdf {
  struct Atom {
    double x;
    double mass;
  };
  struct Piece {
    double lo;
    double hi;
    double density;
  };
  std::vector<Atom> atoms;
  std::vector<Piece> pieces;
  double uniform_density = 0.0;

  /// Scales every mass by `factor`.
  void scale(double factor);
  double total_mass() const;
  /// F(u) = mass of [0, u] for each u in `queries` (must be sorted).
  std::vector<double> cdf_at(std::span<const double> queries) const;
  /// sup over x of |mass[0, x) - x| and |mass[0, x] - x|.
  double star_discrepancy() const;
};

OccupationCdf occupation_cdf(const TorusLevyPath& path);
/// Time-weighted occupation of one coordinate of a torus jump path.
OccupationCdf occupation_cdf(const JumpPath& path, std::size_t axis = 0);

}  // namespace haarwalk

#pragma once

// Segment kernels over real Levy paths.
//
// A path restricted to [t0, t1) is a sequence of segments on which
// Y_t = y + v (t - start): linear between jumps for exact paths (v = drift),
// constant between grid points and jumps for grid paths (v = 0). Every
// occupation quantity is a sum over segments, so each kernel exists twice:
//
//   *_serial    one pass over [t0, t1); the reference implementation
//   *_parallel  [t0, t1) cut into a fixed number of equal time chunks,
//               chunks reduced with OpenMP, partial results combined in
//               chunk order (deterministic for any thread count)

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "haarwalk/levy.hpp"
#include "haarwalk/occupation.hpp"

namespace haarwalk::kernels {

inline constexpr std::size_t kDefaultChunks = 64;

/// Calls f(start, duration, y, velocity) for each segment of [t0, t1).
template <class F>
void for_each_segment(const RealLevyPath& path, double t0, double t1, F&& f);

/// Integral over one segment of exp(i lambda Y_t).
std::complex<double> segment_exponential(double lambda, double duration, double y, double velocity);

/// int_{t0}^{t1} exp(i lambda_k Y_t) dt for every frequency (unnormalized).
std::vector<std::complex<double>> exponential_integrals_serial(const RealLevyPath& path,
                                                               std::span<const double> lambdas,
                                                               double t0, double t1);
std::vector<std::complex<double>> exponential_integrals_parallel(const RealLevyPath& path,
                                                                 std::span<const double> lambdas,
                                                                 double t0, double t1,
                                                                 std::size_t chunks = kDefaultChunks);

/// Time spent by <Y_t> in each bin of a 1-d torus partition (unnormalized).
std::vector<double> torus_histogram_serial(const RealLevyPath& path, const TorusPartition& partition,
                                           double t0, double t1);
std::vector<double> torus_histogram_parallel(const RealLevyPath& path, const TorusPartition& partition,
                                             double t0, double t1, std::size_t chunks = kDefaultChunks);

/// Adds the time spent on [t0, t1) to a 1-d histogram; exact for linear motion.
void add_segment_to_histogram(const TorusPartition& partition, std::vector<double>& bins,
                              double duration, double y, double velocity);

/// Thread count used by the parallel kernels and replica sweeps: the
/// HAARWALK_THREADS environment variable when set, else the OpenMP default.
int thread_limit();

// ---------------------------------------------------------------------------

template <class F>
void for_each_segment(const RealLevyPath& path, double t0, double t1, F&& f) {
  if (!(t1 > t0)) return;
  const auto& times = path.jump_times;
  const auto& levels = path.jump_levels;
  const std::size_t jumps = times.size();
  std::size_t j = static_cast<std::size_t>(
      std::upper_bound(times.begin(), times.end(), t0) - times.begin());
  double level = j == 0 ? 0.0 : levels[j - 1];
  double t = t0;

  if (path.exact) {
    while (t < t1) {
      const double next = (j < jumps && times[j] < t1) ? times[j] : t1;
      if (next > t) f(t, next - t, path.initial + path.drift * t + level, path.drift);
      if (next >= t1) break;
      level = levels[j];
      ++j;
      t = next;
    }
    return;
  }

  std::size_t i = path.grid_index(t0);
  const std::size_t last = path.grid.size() - 1;
  while (t < t1) {
    const double cell_end = i < last ? static_cast<double>(i + 1) * path.dt : t1;
    const double jump_at = j < jumps ? times[j] : t1;
    const double next = std::min({cell_end, jump_at, t1});
    if (next > t) f(t, next - t, path.initial + path.grid[i] + level, 0.0);
    if (next >= t1) break;
    if (j < jumps && times[j] == next) {
      level = levels[j];
      ++j;
    }
    if (i < last && cell_end == next) ++i;
    t = next;
  }
}

}  // namespace haarwalk::kernels

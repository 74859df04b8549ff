#include "haarwalk/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <string>

namespace haarwalk::kernels {

namespace {

double chunk_boundary(double t0, double t1, std::size_t c, std::size_t chunks) {
  if (c == chunks) return t1;
  return t0 + (t1 - t0) * (static_cast<double>(c) / static_cast<double>(chunks));
}

// Adds `time_per_length` per unit arc length over the arc [start, start + length)
// of the circle (length < 1), split across bins.
void add_arc(const TorusPartition& partition, std::vector<double>& bins, double start, double length,
             double time_per_length) {
  const auto B = static_cast<double>(partition.bins);
  double pos = fractional_part(start - partition.offset_value) * B;
  double remaining = length * B;
  auto i = static_cast<std::size_t>(pos);
  if (i >= partition.bins) i = 0, pos = 0.0;
  const double weight = time_per_length / B;
  while (remaining > 0.0) {
    const double room = static_cast<double>(i + 1) - pos;
    const double take = std::min(room, remaining);
    bins[i] += take * weight;
    remaining -= take;
    ++i;
    pos = static_cast<double>(i);
    if (i == partition.bins) {
      i = 0;
      pos = 0.0;
    }
  }
}

}  // namespace

int thread_limit() {
  if (const char* env = std::getenv("HAARWALK_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

std::complex<double> segment_exponential(double lambda, double duration, double y, double velocity) {
  const double half = 0.5 * lambda * velocity * duration;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return duration * sinc * std::polar(1.0, lambda * (y + 0.5 * velocity * duration));
}

std::vector<std::complex<double>> exponential_integrals_serial(const RealLevyPath& path,
                                                               std::span<const double> lambdas,
                                                               double t0, double t1) {
  std::vector<std::complex<double>> sums(lambdas.size());
  for_each_segment(path, t0, t1, [&](double, double duration, double y, double v) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      sums[k] += segment_exponential(lambdas[k], duration, y, v);
    }
  });
  return sums;
}

std::vector<std::complex<double>> exponential_integrals_parallel(const RealLevyPath& path,
                                                                 std::span<const double> lambdas,
                                                                 double t0, double t1,
                                                                 std::size_t chunks) {
  const std::size_t K = lambdas.size();
  std::vector<std::complex<double>> partial(chunks * K);
  const auto n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (long long c = 0; c < n; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const auto part = exponential_integrals_serial(path, lambdas, chunk_boundary(t0, t1, cc, chunks),
                                                   chunk_boundary(t0, t1, cc + 1, chunks));
    std::copy(part.begin(), part.end(), partial.begin() + static_cast<std::ptrdiff_t>(cc * K));
  }
  std::vector<std::complex<double>> sums(K);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t k = 0; k < K; ++k) sums[k] += partial[c * K + k];
  return sums;
}

void add_segment_to_histogram(const TorusPartition& partition, std::vector<double>& bins,
                              double duration, double y, double velocity) {
  const double x = fractional_part(y);
  if (velocity == 0.0) {
    bins[partition.axis_bin(x)] += duration;
    return;
  }
  const double speed = std::abs(velocity);
  const double time_per_length = 1.0 / speed;
  const double length = speed * duration;
  const double wraps = std::floor(length);
  if (wraps > 0.0) {
    const double per_bin = duration * (wraps / length) / static_cast<double>(partition.bins);
    for (double& b : bins) b += per_bin;
  }
  const double rest = length - wraps;
  if (rest > 0.0) {
    const double start = velocity > 0.0 ? x : fractional_part(x - rest);
    add_arc(partition, bins, start, rest, time_per_length);
  }
}

std::vector<double> torus_histogram_serial(const RealLevyPath& path, const TorusPartition& partition,
                                           double t0, double t1) {
  std::vector<double> bins(partition.bins, 0.0);
  for_each_segment(path, t0, t1, [&](double, double duration, double y, double v) {
    add_segment_to_histogram(partition, bins, duration, y, v);
  });
  return bins;
}

std::vector<double> torus_histogram_parallel(const RealLevyPath& path, const TorusPartition& partition,
                                             double t0, double t1, std::size_t chunks) {
  const std::size_t B = partition.bins;
  std::vector<double> partial(chunks * B, 0.0);
  const auto n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static) num_threads(thread_limit())
  for (long long c = 0; c < n; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    const auto part = torus_histogram_serial(path, partition, chunk_boundary(t0, t1, cc, chunks),
                                             chunk_boundary(t0, t1, cc + 1, chunks));
    std::copy(part.begin(), part.end(), partial.begin() + static_cast<std::ptrdiff_t>(cc * B));
  }
  std::vector<double> bins(B, 0.0);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t b = 0; b < B; ++b) bins[b] += partial[c * B + b];
  return bins;
}

}  // namespace haarwalk::kernels

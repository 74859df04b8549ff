#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace haarwalk {

/// Seeded random source used by every simulator in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Variates are produced by the transforms below rather than by the
/// <random> distribution classes (whose algorithms are implementation-defined),
/// so a given seed yields the same stream on every toolchain:
///   uniform      (u64 >> 11) * 2^-53, in [0, 1)
///   exponential  -log1p(-u) / rate
///   normal       Box-Muller on two uniforms, second variate cached
///   index(n)     rejection sampling on the raw 64-bit output
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double exponential(double rate);
  double normal();
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 mix of (seed, stream); used to give independent sub-streams
/// (jump clock, jump marks, Brownian increments) their own engines.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace haarwalk

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "haarwalk/group.hpp"
#include "haarwalk/levy.hpp"
#include "haarwalk/occupation.hpp"
#include "haarwalk/rational.hpp"

namespace haarwalk {

enum class VerdictKind { HaarOnG, UniformOnLattice, UniformOnSubgroup, PointMass };

std::string to_string(VerdictKind kind);

/// Predicted almost-sure limit of the occupation measures: Haar measure on
/// the whole group, or Haar measure on the closed subgroup generated by the
/// supports of the increments (translated by the starting point).
///
/// On the torus the lattice verdict describes the points shift + j/m,
/// j = 0..m-1, with m minimal; a point mass is the m = 1 case. On a finite
/// group the subgroup verdict lists the elements of H (sorted) and the limit
/// is uniform on the coset start * H.
struct Verdict {
  VerdictKind kind = VerdictKind::HaarOnG;
  std::int64_t modulus = 1;
  std::vector<std::size_t> subgroup;
  Rational torus_shift = 0;
  std::size_t element_shift = 0;
  std::string provenance;
  /// False when the translate of a lattice verdict is not known exactly;
  /// the limit measure is then left unspecified.
  bool support_known = true;

  bool is_haar() const { return kind == VerdictKind::HaarOnG; }
};

/// Least m with every atom in (1/m)Z: the lcm of the reduced denominators.
/// nullopt when any atom is flagged irrational; 1 for an empty list.
std::optional<std::int64_t> minimal_lattice_modulus(std::span<const ExactReal> atoms);

/// <Y_t> for Y with characteristic triple `triple` and Y_0 = shift. Haar
/// unless sigma2 == 0, nu lives on a lattice (1/m)Z, and the path drift
/// vanishes (the beta identity, evaluated exactly); then uniform on the
/// minimal lattice, or a point mass when m == 1.
Verdict classify_torus_triple(const RationalTriple& triple, const Rational& shift = 0);

/// Data for the Benford criterion of X_t = a exp(c Y_t + d t) in base b,
/// already expressed on the significand torus <log_b |X_t|>:
///  - jump locations q_j = x_j |c| / ln b (exact or flagged irrational),
///    with the original masses,
///  - drift of (c Y_t + d t) / ln b, i.e. (c * path_drift(Y) + d) / ln b,
///  - sigma2 of Y (only its vanishing matters),
///  - sign of c (jumps on the torus are sign(c) * q_j).
struct BenfordInput {
  std::vector<RationalAtom> jumps;
  Rational sigma2 = 0;
  ExactReal drift = ExactReal::rational(0);
  int c_sign = 1;
  int base = 10;
};

/// Builds BenfordInput from the triple of Y and the ratios c / ln b and
/// d / ln b. Products and sums stay exact only when every factor is exact.
BenfordInput benford_input(const RationalTriple& triple, const ExactReal& c_over_ln_b,
                           const ExactReal& d_over_ln_b, int base);

/// Benford (HaarOnG on the significand torus) or not, by delegating the
/// transformed torus triple to classify_torus_triple. Note the delegation
/// includes the drift condition of the torus criterion.
Verdict classify_benford(const BenfordInput& input);

/// Closure of S under multiplication: the union of all S^n, n >= 1. For a
/// finite group this is the subgroup generated by S. Returned sorted.
std::vector<std::size_t> subgroup_closure_finite(const FiniteTable& table, std::span<const std::size_t> support);

/// Criterion for xi_1 ... xi_n on a finite group: Haar iff
/// the closure of the step support is the whole group.
Verdict classify_iid_finite(const CompactGroup& group, std::span<const std::size_t> support,
                            std::size_t start = 0);

/// i.i.d. rotations of T^1 by the given steps: Haar iff some step is
/// irrational; otherwise uniform on (1/m)Z / Z with m the lcm of the step
/// denominators.
Verdict classify_iid_torus(std::span<const ExactReal> steps, const Rational& shift = 0);

/// log_b |x| as an exact rational, or nullopt when it is irrational: |x| must
/// be a product of the primes of b with exponents proportional to b's.
/// Throws std::invalid_argument for x == 0 or b < 2.
std::optional<Rational> rational_log(const Rational& x, int base);

/// A 1-d torus partition with B bins whose edges avoid every lattice point
/// of the verdict: offset -r/B with r = 1/(2m') placed between the
/// forbidden offsets, m' = m / gcd(m, B) (a half-bin shift when m | B).
/// Haar verdicts get offset 0.
TorusPartition aligned_partition(std::size_t bins, const Verdict& verdict);

/// Limit measure as a probability vector over the partition's bins. Throws
/// std::invalid_argument when a lattice point lies on a bin boundary or the
/// partition does not fit the group.
std::vector<double> predicted_limit_measure(const Verdict& verdict, const CompactGroup& group,
                                            const Partition& partition);

/// Bins that carry the predicted limit measure (support bins).
std::vector<std::size_t> predicted_support_bins(const Verdict& verdict, const CompactGroup& group,
                                                const Partition& partition);

/// {kind, m?, subgroup?, point?, limit_measure, provenance}.
nlohmann::ordered_json to_json(const Verdict& verdict, const CompactGroup& group, const Partition& partition);

}  // namespace haarwalk

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "haarwalk/rng.hpp"

namespace haarwalk {

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// Point of T^d; every coordinate is kept in [0, 1).
struct TorusPoint {
  std::vector<double> coords;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Element of a finite group given by its multiplication table.
struct FiniteElement {
  std::size_t index = 0;
  friend bool operator==(const FiniteElement&, const FiniteElement&) = default;
};

/// Unit quaternion representing a rotation of R^3. Normal form: unit norm and
/// the first nonzero component among (w, x, y, z) is positive.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

using GroupPoint = std::variant<TorusPoint, FiniteElement, Quaternion>;

// ---------------------------------------------------------------------------
// Finite groups
// ---------------------------------------------------------------------------

/// Raised when a multiplication table is not a group. `axiom` names the
/// violated property and `witness` holds the offending element indices
/// (a triple for associativity, a pair for closure, a single element for
/// inverses, empty when no identity exists).
class GroupAxiomError : public std::invalid_argument {
 public:
  GroupAxiomError(std::string axiom, std::vector<std::size_t> witness, const std::string& what)
      : std::invalid_argument(what), axiom_(std::move(axiom)), witness_(std::move(witness)) {}

  const std::string& axiom() const { return axiom_; }
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  std::string axiom_;
  std::vector<std::size_t> witness_;
};

/// Validated multiplication table. Construct through make_finite_table.
class FiniteTable {
 public:
  std::size_t order() const { return order_; }
  std::size_t identity() const { return identity_; }
  std::size_t product(std::size_t a, std::size_t b) const { return table_[a * order_ + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const std::string& label(std::size_t a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(const std::string& label) const;
  /// Row-major n x n table.
  const std::vector<std::size_t>& table() const { return table_; }

 private:
  friend FiniteTable make_finite_table(const std::vector<std::vector<std::size_t>>& rows,
                                       std::vector<std::string> labels);
  std::size_t order_ = 0;
  std::size_t identity_ = 0;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverse_;
  std::vector<std::string> labels_;
};

/// Checks closure, associativity (all n^3 triples), identity and inverses,
/// in that order, and throws GroupAxiomError on the first violation.
/// Empty `labels` defaults to "0", "1", ...
FiniteTable make_finite_table(const std::vector<std::vector<std::size_t>>& rows,
                              std::vector<std::string> labels = {});

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

enum class Family { Torus, FiniteTable, Rotation3D };

class CompactGroup {
 public:
  static CompactGroup torus(std::size_t dim, std::size_t partition_hint = 1000);
  static CompactGroup finite(FiniteTable table);
  static CompactGroup rotation3d(std::size_t partition_hint = 90);

  Family family() const { return family_; }
  /// Torus dimension; 0 for the other families.
  std::size_t dimension() const { return dim_; }
  /// Throws std::logic_error unless family() == Family::FiniteTable.
  const FiniteTable& table() const;
  /// Default bin count for occupation histograms (per dimension on tori).
  std::size_t partition_hint() const { return partition_hint_; }
  std::string name() const;

 private:
  CompactGroup() = default;
  Family family_ = Family::Torus;
  std::size_t dim_ = 0;
  std::shared_ptr<const FiniteTable> table_;
  std::size_t partition_hint_ = 0;
};

/// Thrown when a point does not belong to the group it is used with.
class FamilyMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

GroupPoint identity(const CompactGroup& group);
/// True when `g` has the group's family, shape and normal form.
bool contains(const CompactGroup& group, const GroupPoint& g);
/// Brings a point into the family's normal form (reduce mod 1, renormalize,
/// fix quaternion sign). Idempotent.
GroupPoint normal_form(const CompactGroup& group, GroupPoint g);

GroupPoint multiply(const CompactGroup& group, const GroupPoint& g, const GroupPoint& h);
GroupPoint inverse(const CompactGroup& group, const GroupPoint& g);

/// Bi-invariant metric: max circle distance over coordinates (torus),
/// discrete metric (finite), rotation angle of g h^-1 in [0, pi] (SO(3)).
double distance(const CompactGroup& group, const GroupPoint& g, const GroupPoint& h);

/// One Haar-distributed point. SO(3) uses a normalized 4-vector of i.i.d.
/// standard normals.
GroupPoint haar_sample(const CompactGroup& group, Rng& rng);

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

/// Character x -> exp(2 pi i k.x) of T^d.
struct TorusFrequency {
  std::vector<std::int64_t> k;
  friend bool operator==(const TorusFrequency&, const TorusFrequency&) = default;
};
/// Indicator function of one element of a finite group.
struct ElementIndicator {
  std::size_t element = 0;
  friend bool operator==(const ElementIndicator&, const ElementIndicator&) = default;
};
/// Character chi_k(theta) = sin((2k+1) theta / 2) / sin(theta / 2) of the
/// spin-k irreducible representation of SO(3), k in {1, 2, 3}.
struct RotationCharacter {
  int spin = 1;
  friend bool operator==(const RotationCharacter&, const RotationCharacter&) = default;
};

using CharacterIndex = std::variant<TorusFrequency, ElementIndicator, RotationCharacter>;

/// Throws std::invalid_argument when `index` is not valid for `group`.
void validate_character(const CompactGroup& group, const CharacterIndex& index);
std::complex<double> character_eval(const CompactGroup& group, const CharacterIndex& index,
                                    const GroupPoint& g);
/// Integral of the test function against Haar measure.
std::complex<double> haar_integral(const CompactGroup& group, const CharacterIndex& index);
/// sup |phi| over the group.
double sup_norm(const CompactGroup& group, const CharacterIndex& index);
std::string character_label(const CompactGroup& group, const CharacterIndex& index);

/// Default non-trivial test family: torus frequencies with entries in
/// [-K, K] (first nonzero entry positive), every non-identity element
/// indicator (finite), or spins 1..min(K, 3) (SO(3)).
std::vector<CharacterIndex> nontrivial_characters(const CompactGroup& group, int K);

// ---------------------------------------------------------------------------
// Small helpers shared across modules
// ---------------------------------------------------------------------------

/// x - floor(x), mapped into [0, 1) even when rounding would produce 1.
double fractional_part(double x);
/// Circle distance min(|x - y|, 1 - |x - y|) for x, y in [0, 1).
double circle_distance(double x, double y);
/// Rotation angle in [0, pi] of a unit quaternion.
double rotation_angle(const Quaternion& q);
Quaternion axis_angle(double ax, double ay, double az, double angle);

std::string point_label(const CompactGroup& group, const GroupPoint& g);

}  // namespace haarwalk

#include "haarwalk/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace haarwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string witness_string(const std::vector<std::size_t>& w) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < w.size(); ++i) out << (i ? ", " : "") << w[i];
  out << ")";
  return out.str();
}

[[noreturn]] void axiom_failure(const std::string& axiom, std::vector<std::size_t> witness,
                                const std::string& detail) {
  std::string what = "group axiom violated: " + axiom;
  if (!witness.empty()) what += " at witness " + witness_string(witness);
  if (!detail.empty()) what += ": " + detail;
  throw GroupAxiomError(axiom, std::move(witness), what);
}

Quaternion quat_product(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion quat_normal_form(Quaternion q) {
  const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("degenerate quaternion");
  q.w /= n;
  q.x /= n;
  q.y /= n;
  q.z /= n;
  const double lead = q.w != 0.0 ? q.w : q.x != 0.0 ? q.x : q.y != 0.0 ? q.y : q.z;
  if (lead < 0.0) q = {-q.w, -q.x, -q.y, -q.z};
  if (q.w == 0.0) q.w = 0.0;  // drop negative zero
  return q;
}

bool quat_is_normal(const Quaternion& q) {
  const double n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) return false;
  const double lead = q.w != 0.0 ? q.w : q.x != 0.0 ? q.x : q.y != 0.0 ? q.y : q.z;
  return lead > 0.0;
}

const TorusPoint& as_torus(const CompactGroup& group, const GroupPoint& g) {
  const auto* p = std::get_if<TorusPoint>(&g);
  if (!p || p->coords.size() != group.dimension()) {
    throw FamilyMismatch("point is not on " + group.name());
  }
  return *p;
}

std::size_t as_element(const CompactGroup& group, const GroupPoint& g) {
  const auto* p = std::get_if<FiniteElement>(&g);
  if (!p || p->index >= group.table().order()) {
    throw FamilyMismatch("point is not an element of " + group.name());
  }
  return p->index;
}

const Quaternion& as_rotation(const GroupPoint& g) {
  const auto* p = std::get_if<Quaternion>(&g);
  if (!p) throw FamilyMismatch("point is not a rotation");
  return *p;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::size_t> FiniteTable::find(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

FiniteTable make_finite_table(const std::vector<std::vector<std::size_t>>& rows,
                              std::vector<std::string> labels) {
  const std::size_t n = rows.size();
  if (n == 0) axiom_failure("nonempty", {}, "table has no elements");
  for (std::size_t a = 0; a < n; ++a) {
    if (rows[a].size() != n) {
      axiom_failure("shape", {a}, "row " + std::to_string(a) + " has " +
                                      std::to_string(rows[a].size()) + " entries, expected " +
                                      std::to_string(n));
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (rows[a][b] >= n) {
        axiom_failure("closure", {a, b},
                      "product index " + std::to_string(rows[a][b]) + " out of range");
      }
    }
  }
  if (labels.empty()) {
    for (std::size_t a = 0; a < n; ++a) labels.push_back(std::to_string(a));
  }
  if (labels.size() != n) {
    axiom_failure("shape", {}, "expected " + std::to_string(n) + " labels, got " +
                                   std::to_string(labels.size()));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = rows[a][b];
      for (std::size_t c = 0; c < n; ++c) {
        if (rows[ab][c] != rows[a][rows[b][c]]) {
          axiom_failure("associativity", {a, b, c}, "(ab)c != a(bc)");
        }
      }
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = rows[e][g] == g && rows[g][e] == g;
    if (ok) identity = e;
  }
  if (!identity) axiom_failure("identity", {}, "no two-sided identity element");
  std::vector<std::size_t> inv(n);
  for (std::size_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n && !found; ++b) {
      if (rows[a][b] == *identity && rows[b][a] == *identity) {
        inv[a] = b;
        found = true;
      }
    }
    if (!found) axiom_failure("inverse", {a}, "element has no two-sided inverse");
  }

  FiniteTable t;
  t.order_ = n;
  t.identity_ = *identity;
  t.table_.reserve(n * n);
  for (const auto& row : rows) t.table_.insert(t.table_.end(), row.begin(), row.end());
  t.inverse_ = std::move(inv);
  t.labels_ = std::move(labels);
  return t;
}

// ---------------------------------------------------------------------------

CompactGroup CompactGroup::torus(std::size_t dim, std::size_t partition_hint) {
  if (dim == 0) throw std::invalid_argument("torus dimension must be positive");
  if (partition_hint == 0) throw std::invalid_argument("partition hint must be positive");
  CompactGroup g;
  g.family_ = Family::Torus;
  g.dim_ = dim;
  g.partition_hint_ = partition_hint;
  return g;
}

CompactGroup CompactGroup::finite(FiniteTable table) {
  CompactGroup g;
  g.family_ = Family::FiniteTable;
  g.partition_hint_ = table.order();
  g.table_ = std::make_shared<const FiniteTable>(std::move(table));
  return g;
}

CompactGroup CompactGroup::rotation3d(std::size_t partition_hint) {
  if (partition_hint == 0) throw std::invalid_argument("partition hint must be positive");
  CompactGroup g;
  g.family_ = Family::Rotation3D;
  g.partition_hint_ = partition_hint;
  return g;
}

const FiniteTable& CompactGroup::table() const {
  if (family_ != Family::FiniteTable) throw std::logic_error(name() + " has no multiplication table");
  return *table_;
}

std::string CompactGroup::name() const {
  switch (family_) {
    case Family::Torus: return "T^" + std::to_string(dim_);
    case Family::FiniteTable: return "finite group of order " + std::to_string(table_->order());
    case Family::Rotation3D: return "SO(3)";
  }
  return "?";
}

// ---------------------------------------------------------------------------

double fractional_part(double x) {
  const double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double circle_distance(double x, double y) {
  const double d = std::abs(x - y);
  return std::min(d, 1.0 - d);
}

double rotation_angle(const Quaternion& q) {
  const double v = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  return 2.0 * std::atan2(v, std::abs(q.w));
}

Quaternion axis_angle(double ax, double ay, double az, double angle) {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  if (!(n > 0.0)) throw std::invalid_argument("rotation axis must be nonzero");
  const double s = std::sin(angle / 2.0) / n;
  return quat_normal_form({std::cos(angle / 2.0), ax * s, ay * s, az * s});
}

GroupPoint identity(const CompactGroup& group) {
  switch (group.family()) {
    case Family::Torus: return TorusPoint{std::vector<double>(group.dimension(), 0.0)};
    case Family::FiniteTable: return FiniteElement{group.table().identity()};
    case Family::Rotation3D: return Quaternion{};
  }
  return {};
}

bool contains(const CompactGroup& group, const GroupPoint& g) {
  switch (group.family()) {
    case Family::Torus: {
      const auto* p = std::get_if<TorusPoint>(&g);
      if (!p || p->coords.size() != group.dimension()) return false;
      return std::all_of(p->coords.begin(), p->coords.end(),
                         [](double x) { return x >= 0.0 && x < 1.0; });
    }
    case Family::FiniteTable: {
      const auto* p = std::get_if<FiniteElement>(&g);
      return p && p->index < group.table().order();
    }
    case Family::Rotation3D: {
      const auto* p = std::get_if<Quaternion>(&g);
      return p && quat_is_normal(*p);
    }
  }
  return false;
}

GroupPoint normal_form(const CompactGroup& group, GroupPoint g) {
  switch (group.family()) {
    case Family::Torus: {
      auto* p = std::get_if<TorusPoint>(&g);
      if (!p || p->coords.size() != group.dimension()) throw FamilyMismatch("point is not on " + group.name());
      for (double& x : p->coords) x = fractional_part(x);
      return g;
    }
    case Family::FiniteTable:
      as_element(group, g);
      return g;
    case Family::Rotation3D:
      return quat_normal_form(as_rotation(g));
  }
  return g;
}

GroupPoint multiply(const CompactGroup& group, const GroupPoint& g, const GroupPoint& h) {
  switch (group.family()) {
    case Family::Torus: {
      const auto& a = as_torus(group, g);
      const auto& b = as_torus(group, h);
      TorusPoint r{std::vector<double>(a.coords.size())};
      for (std::size_t i = 0; i < a.coords.size(); ++i) {
        r.coords[i] = fractional_part(a.coords[i] + b.coords[i]);
      }
      return r;
    }
    case Family::FiniteTable:
      return FiniteElement{group.table().product(as_element(group, g), as_element(group, h))};
    case Family::Rotation3D:
      return quat_normal_form(quat_product(as_rotation(g), as_rotation(h)));
  }
  return g;
}

GroupPoint inverse(const CompactGroup& group, const GroupPoint& g) {
  switch (group.family()) {
    case Family::Torus: {
      TorusPoint r = as_torus(group, g);
      for (double& x : r.coords) x = fractional_part(-x);
      return r;
    }
    case Family::FiniteTable:
      return FiniteElement{group.table().inverse(as_element(group, g))};
    case Family::Rotation3D: {
      const Quaternion& q = as_rotation(g);
      return quat_normal_form({q.w, -q.x, -q.y, -q.z});
    }
  }
  return g;
}

double distance(const CompactGroup& group, const GroupPoint& g, const GroupPoint& h) {
  switch (group.family()) {
    case Family::Torus: {
      const auto& a = as_torus(group, g);
      const auto& b = as_torus(group, h);
      double d = 0.0;
      for (std::size_t i = 0; i < a.coords.size(); ++i) {
        d = std::max(d, circle_distance(a.coords[i], b.coords[i]));
      }
      return d;
    }
    case Family::FiniteTable:
      return as_element(group, g) == as_element(group, h) ? 0.0 : 1.0;
    case Family::Rotation3D: {
      const Quaternion& a = as_rotation(g);
      const Quaternion& b = as_rotation(h);
      return rotation_angle(quat_product(a, {b.w, -b.x, -b.y, -b.z}));
    }
  }
  return 0.0;
}

GroupPoint haar_sample(const CompactGroup& group, Rng& rng) {
  switch (group.family()) {
    case Family::Torus: {
      TorusPoint p{std::vector<double>(group.dimension())};
      for (double& x : p.coords) x = rng.uniform();
      return p;
    }
    case Family::FiniteTable:
      return FiniteElement{rng.index(group.table().order())};
    case Family::Rotation3D: {
      Quaternion q;
      double n2 = 0.0;
      do {
        q = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
      } while (n2 < 1e-300);
      return quat_normal_form(q);
    }
  }
  return identity(group);
}

// ---------------------------------------------------------------------------

void validate_character(const CompactGroup& group, const CharacterIndex& index) {
  switch (group.family()) {
    case Family::Torus: {
      const auto* k = std::get_if<TorusFrequency>(&index);
      if (!k || k->k.size() != group.dimension()) {
        throw std::invalid_argument("torus character needs a frequency vector of length " +
                                    std::to_string(group.dimension()));
      }
      return;
    }
    case Family::FiniteTable: {
      const auto* k = std::get_if<ElementIndicator>(&index);
      if (!k || k->element >= group.table().order()) {
        throw std::invalid_argument("finite-group test function must be an element indicator");
      }
      return;
    }
    case Family::Rotation3D: {
      const auto* k = std::get_if<RotationCharacter>(&index);
      if (!k || k->spin < 1 || k->spin > 3) {
        throw std::invalid_argument("SO(3) character spin must be 1, 2 or 3");
      }
      return;
    }
  }
}

std::complex<double> character_eval(const CompactGroup& group, const CharacterIndex& index,
                                    const GroupPoint& g) {
  validate_character(group, index);
  switch (group.family()) {
    case Family::Torus: {
      const auto& k = std::get<TorusFrequency>(index).k;
      const auto& x = as_torus(group, g).coords;
      double phase = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) {
        // Reduce each term mod 1 before scaling so large k stay accurate.
        phase += fractional_part(static_cast<double>(k[i]) * x[i]);
      }
      phase = fractional_part(phase);
      return std::polar(1.0, kTwoPi * phase);
    }
    case Family::FiniteTable:
      return as_element(group, g) == std::get<ElementIndicator>(index).element ? 1.0 : 0.0;
    case Family::Rotation3D: {
      const int k = std::get<RotationCharacter>(index).spin;
      const double theta = rotation_angle(as_rotation(g));
      const double s = std::sin(theta / 2.0);
      if (std::abs(s) < 1e-8) return static_cast<double>(2 * k + 1);
      return std::sin((2 * k + 1) * theta / 2.0) / s;
    }
  }
  return 0.0;
}

std::complex<double> haar_integral(const CompactGroup& group, const CharacterIndex& index) {
  validate_character(group, index);
  switch (group.family()) {
    case Family::Torus: {
      const auto& k = std::get<TorusFrequency>(index).k;
      return std::all_of(k.begin(), k.end(), [](auto v) { return v == 0; }) ? 1.0 : 0.0;
    }
    case Family::FiniteTable:
      return 1.0 / static_cast<double>(group.table().order());
    case Family::Rotation3D:
      return 0.0;
  }
  return 0.0;
}

double sup_norm(const CompactGroup& group, const CharacterIndex& index) {
  validate_character(group, index);
  if (group.family() == Family::Rotation3D) {
    return 2.0 * std::get<RotationCharacter>(index).spin + 1.0;
  }
  return 1.0;
}

std::string character_label(const CompactGroup& group, const CharacterIndex& index) {
  validate_character(group, index);
  switch (group.family()) {
    case Family::Torus: {
      const auto& k = std::get<TorusFrequency>(index).k;
      std::string s;
      for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ";" : "") + std::to_string(k[i]);
      return s;
    }
    case Family::FiniteTable:
      return group.table().label(std::get<ElementIndicator>(index).element);
    case Family::Rotation3D:
      return std::to_string(std::get<RotationCharacter>(index).spin);
  }
  return {};
}

std::vector<CharacterIndex> nontrivial_characters(const CompactGroup& group, int K) {
  std::vector<CharacterIndex> out;
  switch (group.family()) {
    case Family::Torus: {
      if (K < 1) throw std::invalid_argument("character range K must be at least 1");
      const std::size_t d = group.dimension();
      std::vector<std::int64_t> k(d, -K);
      while (true) {
        // keep one representative of each +-k pair: first nonzero entry positive
        const auto nz = std::find_if(k.begin(), k.end(), [](auto v) { return v != 0; });
        if (nz != k.end() && *nz > 0) out.push_back(TorusFrequency{k});
        std::size_t i = d;
        while (i > 0 && k[i - 1] == K) k[--i] = -K;
        if (i == 0) break;
        ++k[i - 1];
      }
      // Order by max-norm then lexicographically so k = 1..K come first in 1-d.
      std::stable_sort(out.begin(), out.end(), [](const CharacterIndex& a, const CharacterIndex& b) {
        auto norm = [](const CharacterIndex& c) {
          std::int64_t m = 0;
          for (auto v : std::get<TorusFrequency>(c).k) m = std::max<std::int64_t>(m, v < 0 ? -v : v);
          return m;
        };
        return norm(a) < norm(b);
      });
      return out;
    }
    case Family::FiniteTable: {
      const auto& t = group.table();
      for (std::size_t a = 0; a < t.order(); ++a) {
        if (a != t.identity()) out.push_back(ElementIndicator{a});
      }
      return out;
    }
    case Family::Rotation3D:
      for (int k = 1; k <= std::clamp(K, 1, 3); ++k) out.push_back(RotationCharacter{k});
      return out;
  }
  return out;
}

std::string point_label(const CompactGroup& group, const GroupPoint& g) {
  std::ostringstream out;
  out.precision(12);
  switch (group.family()) {
    case Family::Torus: {
      const auto& x = as_torus(group, g).coords;
      for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ";" : "") << std::scientific << x[i];
      return out.str();
    }
    case Family::FiniteTable:
      return group.table().label(as_element(group, g));
    case Family::Rotation3D: {
      const Quaternion& q = as_rotation(g);
      out << std::scientific << q.w << ';' << q.x << ';' << q.y << ';' << q.z;
      return out.str();
    }
  }
  return {};
}

}  // namespace haarwalk

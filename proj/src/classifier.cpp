#include "haarwalk/classifier.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "haarwalk/format.hpp"

namespace haarwalk {

namespace {

Rational frac(const Rational& q) {
  const Integer n = numerator_of(q);
  const Integer d = denominator_of(q);
  Integer r = n % d;
  if (r < 0) r += d;
  return Rational(r, d);
}

Integer floor_of(const Rational& q) {
  const Integer n = numerator_of(q);
  const Integer d = denominator_of(q);
  Integer f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

std::vector<Rational> lattice_points(const Verdict& v) {
  std::vector<Rational> pts;
  const std::int64_t m = v.kind == VerdictKind::PointMass ? 1 : v.modulus;
  for (std::int64_t j = 0; j < m; ++j) pts.push_back(frac(v.torus_shift + Rational(j, m)));
  return pts;
}

bool is_lattice_kind(const Verdict& v, const CompactGroup& group) {
  return group.family() == Family::Torus &&
         (v.kind == VerdictKind::UniformOnLattice || v.kind == VerdictKind::PointMass);
}

Verdict haar(std::string why) {
  Verdict v;
  v.kind = VerdictKind::HaarOnG;
  v.provenance = std::move(why);
  return v;
}

ExactReal times(const ExactReal& a, const ExactReal& b) {
  if (a.is_rational() && b.is_rational()) return ExactReal::rational(*a.exact * *b.exact);
  if ((a.is_rational() && *a.exact == 0) || (b.is_rational() && *b.exact == 0)) return ExactReal::rational(0);
  return ExactReal::irrational(a.approx * b.approx);
}

ExactReal plus(const ExactReal& a, const ExactReal& b) {
  if (a.is_rational() && b.is_rational()) return ExactReal::rational(*a.exact + *b.exact);
  return ExactReal::irrational(a.approx + b.approx);
}

}  // namespace

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::HaarOnG: return "HaarOnG";
    case VerdictKind::UniformOnLattice: return "UniformOnLattice";
    case VerdictKind::UniformOnSubgroup: return "UniformOnSubgroup";
    case VerdictKind::PointMass: return "PointMass";
  }
  return "unknown";
}

std::optional<std::int64_t> minimal_lattice_modulus(std::span<const ExactReal> atoms) {
  Integer m = 1;
  for (const auto& a : atoms) {
    if (!a.is_rational()) return std::nullopt;
    m = lcm(m, denominator_of(*a.exact));
  }
  return to_int64(m);
}

Verdict classify_torus_triple(const RationalTriple& triple, const Rational& shift) {
  validate(triple);
  if (triple.sigma2 > 0) return haar("sigma2 = " + to_string(triple.sigma2) + " > 0");

  std::vector<ExactReal> locations;
  for (const auto& a : triple.nu) locations.push_back(a.location);
  const auto m = minimal_lattice_modulus(locations);
  if (!m) return haar("sigma2 = 0; nu has an irrational atom, so it is not carried by any lattice (1/m)Z");

  const auto drift = exact_path_drift(triple);
  if (!drift) return haar("sigma2 = 0; nu on (1/" + std::to_string(*m) + ")Z; drift irrational");
  if (*drift != 0) {
    return haar("sigma2 = 0; nu on (1/" + std::to_string(*m) + ")Z; beta - sum_{|x|<1} x nu({x}) = " +
                to_string(*drift) + " != 0");
  }

  Verdict v;
  v.modulus = *m;
  v.torus_shift = frac(shift);
  const std::string base = "sigma2 = 0; beta = sum_{|x|<1} x nu({x}); ";
  if (*m == 1) {
    v.kind = VerdictKind::PointMass;
    v.provenance = base + (triple.nu.empty() ? "no jumps" : "nu on Z") + "; path stays at its start mod 1";
  } else {
    v.kind = VerdictKind::UniformOnLattice;
    v.provenance = base + "minimal lattice (1/" + std::to_string(*m) + ")Z";
  }
  return v;
}

BenfordInput benford_input(const RationalTriple& triple, const ExactReal& c_over_ln_b,
                           const ExactReal& d_over_ln_b, int base) {
  validate(triple);
  if (c_over_ln_b.value() == 0.0) throw std::invalid_argument("c must be nonzero");
  BenfordInput in;
  in.base = base;
  in.sigma2 = triple.sigma2;
  in.c_sign = c_over_ln_b.value() > 0.0 ? 1 : -1;
  const ExactReal abs_c = c_over_ln_b.is_rational() ? ExactReal::rational(abs(*c_over_ln_b.exact))
                                                   : ExactReal::irrational(std::abs(c_over_ln_b.approx));
  for (const auto& a : triple.nu) in.jumps.push_back({times(a.location, abs_c), a.mass});

  const auto drift = exact_path_drift(triple);
  const ExactReal y_drift =
      drift ? ExactReal::rational(*drift) : ExactReal::irrational(path_drift(to_levy_triple(triple)));
  in.drift = plus(times(c_over_ln_b, y_drift), d_over_ln_b);
  return in;
}

Verdict classify_benford(const BenfordInput& input) {
  if (input.base < 2) throw std::invalid_argument("base must be at least 2");
  // Torus triple of <log_b |X_t|> (start irrelevant for the Haar question).
  RationalTriple torus;
  torus.sigma2 = input.sigma2;
  ExactReal compensator = ExactReal::rational(0);
  for (const auto& j : input.jumps) {
    ExactReal loc = j.location;
    if (input.c_sign < 0) {
      loc = loc.is_rational() ? ExactReal::rational(-*loc.exact) : ExactReal::irrational(-loc.approx);
    }
    if (std::abs(loc.value()) < 1.0) compensator = plus(compensator, times(loc, ExactReal::rational(j.mass)));
    torus.nu.push_back({loc, j.mass});
  }
  torus.beta = plus(input.drift, compensator);
  Verdict v = classify_torus_triple(torus);
  const std::string b = std::to_string(input.base);
  v.provenance = (v.is_haar() ? "Benford in base " + b : "not Benford in base " + b) +
                 " (<log_b |X_t|> is " + to_string(v.kind) + "): " + v.provenance;
  return v;
}

std::vector<std::size_t> subgroup_closure_finite(const FiniteTable& table, std::span<const std::size_t> support) {
  if (support.empty()) throw std::invalid_argument("step support is empty");
  std::vector<char> seen(table.order(), 0);
  std::deque<std::size_t> queue;
  for (auto s : support) {
    if (s >= table.order()) throw std::invalid_argument("support element out of range");
    if (!seen[s]) seen[s] = 1, queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (auto s : support) {
      const std::size_t y = table.product(x, s);
      if (!seen[y]) seen[y] = 1, queue.push_back(y);
    }
  }
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) h.push_back(i);
  if (!seen[table.identity()]) throw std::logic_error("closure misses the identity");
  for (auto x : h)
    if (!seen[table.inverse(x)]) throw std::logic_error("closure is not closed under inverses");
  return h;
}

Verdict classify_iid_finite(const CompactGroup& group, std::span<const std::size_t> support, std::size_t start) {
  if (group.family() != Family::FiniteTable) throw FamilyMismatch("finite-group criterion needs a table group");
  const auto& table = group.table();
  if (start >= table.order()) throw std::invalid_argument("start element out of range");
  Verdict v;
  v.subgroup = subgroup_closure_finite(table, support);
  v.element_shift = start;
  const std::string size = std::to_string(v.subgroup.size());
  if (v.subgroup.size() == table.order()) {
    v.kind = VerdictKind::HaarOnG;
    v.provenance = "steps generate the whole group (order " + size + ")";
  } else if (v.subgroup.size() == 1) {
    v.kind = VerdictKind::PointMass;
    v.provenance = "steps are concentrated on the identity";
  } else {
    v.kind = VerdictKind::UniformOnSubgroup;
    v.provenance = "steps generate a proper subgroup of order " + size + " in a group of order " +
                   std::to_string(table.order());
  }
  return v;
}

Verdict classify_iid_torus(std::span<const ExactReal> steps, const Rational& shift) {
  if (steps.empty()) throw std::invalid_argument("step support is empty");
  const auto m = minimal_lattice_modulus(steps);
  if (!m) return haar("some step is irrational");
  Verdict v;
  v.modulus = *m;
  v.torus_shift = frac(shift);
  v.kind = *m == 1 ? VerdictKind::PointMass : VerdictKind::UniformOnLattice;
  v.provenance = "all steps in (1/" + std::to_string(*m) + ")Z";
  return v;
}

std::optional<Rational> rational_log(const Rational& x, int base) {
  if (x == 0) throw std::invalid_argument("log of zero");
  if (base < 2) throw std::invalid_argument("base must be at least 2");
  Integer num = abs(numerator_of(x));
  Integer den = denominator_of(x);
  std::optional<Rational> ratio;
  int b = base;
  for (int p = 2; b > 1; ++p) {
    if (b % p != 0) continue;
    int e = 0;
    while (b % p == 0) b /= p, ++e;
    std::int64_t f = 0;
    while (num % p == 0) num /= p, ++f;
    while (den % p == 0) den /= p, --f;
    const Rational r(f, e);
    if (ratio && *ratio != r) return std::nullopt;
    ratio = r;
  }
  if (num != 1 || den != 1) return std::nullopt;
  return ratio;
}

TorusPartition aligned_partition(std::size_t bins, const Verdict& verdict) {
  if (bins < 1) throw std::invalid_argument("bin count must be at least 1");
  if (verdict.kind != VerdictKind::UniformOnLattice && verdict.kind != VerdictKind::PointMass) {
    return make_torus_partition(bins, 1);
  }
  const std::int64_t m = verdict.kind == VerdictKind::PointMass ? 1 : verdict.modulus;
  const Integer B = bins;
  const Integer mp = Integer(m) / gcd(Integer(m), B);
  // Lattice points land on edges for r in frac(-shift*B) + (1/m')Z; take the
  // midpoint of a gap, kept in [0, 1).
  const Rational step(Integer(1), mp);
  Rational first = frac(-verdict.torus_shift * Rational(B));
  first -= step * Rational(floor_of(first / step));
  Rational r = first + step / 2;
  if (r >= 1) r -= step;
  return make_torus_partition(bins, 1, -r / Rational(B));
}

std::vector<std::size_t> predicted_support_bins(const Verdict& verdict, const CompactGroup& group,
                                                const Partition& partition) {
  check_compatible(partition, group);
  if (!verdict.support_known) throw std::invalid_argument("the support of this verdict is only known up to a translate");
  std::vector<std::size_t> bins;
  if (is_lattice_kind(verdict, group)) {
    const auto& p = std::get<TorusPartition>(partition);
    if (p.dim != 1) throw std::invalid_argument("lattice verdicts live on the one-dimensional torus");
    for (const auto& x : lattice_points(verdict)) {
      const Rational u = (x - p.offset) * Rational(Integer(p.bins));
      if (denominator_of(u) == 1) {
        throw std::invalid_argument("lattice point " + to_string(x) + " lies on a bin boundary");
      }
      Integer b = floor_of(u) % Integer(p.bins);
      if (b < 0) b += p.bins;
      bins.push_back(static_cast<std::size_t>(to_int64(b)));
    }
  } else if (group.family() == Family::FiniteTable) {
    const auto& t = group.table();
    if (verdict.kind == VerdictKind::HaarOnG) {
      for (std::size_t i = 0; i < t.order(); ++i) bins.push_back(i);
    } else {
      const auto& h = verdict.subgroup.empty() ? std::vector<std::size_t>{t.identity()} : verdict.subgroup;
      for (auto x : h) bins.push_back(t.product(verdict.element_shift, x));
    }
  } else if (verdict.kind == VerdictKind::HaarOnG) {
    const auto masses = haar_masses(partition);
    for (std::size_t i = 0; i < masses.size(); ++i)
      if (masses[i] > 0.0) bins.push_back(i);
  } else {
    throw std::invalid_argument("verdict " + to_string(verdict.kind) + " does not apply to " + group.name());
  }
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  return bins;
}

std::vector<double> predicted_limit_measure(const Verdict& verdict, const CompactGroup& group,
                                            const Partition& partition) {
  check_compatible(partition, group);
  if (verdict.kind == VerdictKind::HaarOnG) return haar_masses(partition);
  std::vector<double> out(bin_count(partition), 0.0);
  if (is_lattice_kind(verdict, group)) {
    const auto pts = lattice_points(verdict);
    const auto& p = std::get<TorusPartition>(partition);
    for (const auto& x : pts) {
      Verdict single;
      single.kind = VerdictKind::PointMass;
      single.torus_shift = x;
      const auto b = predicted_support_bins(single, group, p);
      out[b.front()] += 1.0 / static_cast<double>(pts.size());
    }
    return out;
  }
  const auto bins = predicted_support_bins(verdict, group, partition);
  for (auto b : bins) out[b] = 1.0 / static_cast<double>(bins.size());
  return out;
}

nlohmann::ordered_json to_json(const Verdict& verdict, const CompactGroup& group, const Partition& partition) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(verdict.kind);
  if (verdict.kind == VerdictKind::UniformOnLattice) j["m"] = verdict.modulus;
  if (group.family() == Family::FiniteTable && verdict.kind != VerdictKind::HaarOnG) {
    nlohmann::ordered_json h = nlohmann::ordered_json::array();
    for (auto x : verdict.subgroup) h.push_back(group.table().label(x));
    j["subgroup"] = h;
  }
  if (verdict.kind == VerdictKind::PointMass && verdict.support_known) {
    if (group.family() == Family::Torus) {
      j["point"] = to_string(verdict.torus_shift);
    } else if (group.family() == Family::FiniteTable) {
      j["point"] = group.table().label(verdict.element_shift);
    }
  }
  nlohmann::ordered_json limit = nlohmann::ordered_json::array();
  const auto masses = verdict.support_known ? predicted_limit_measure(verdict, group, partition)
                                            : std::vector<double>{};
  for (std::size_t b = 0; b < masses.size(); ++b) {
    if (masses[b] > 0.0) {
      limit.push_back({{"bin_index", b}, {"bin_label", bin_label(partition, group, b)}, {"mass", round12(masses[b])}});
    }
  }
  j["limit_measure"] = limit;
  j["provenance"] = verdict.provenance;
  return j;
}

}  // namespace haarwalk

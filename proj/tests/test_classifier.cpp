#include "doctest.h"

#include <cmath>
#include <set>

#include "haarwalk/classifier.hpp"
#include "haarwalk/finite_groups.hpp"

#include "fixture_io.hpp"

using namespace haarwalk;

namespace {

ExactReal q(const char* s) { return ExactReal::rational(parse_rational(s)); }
ExactReal irr(double x) { return ExactReal::irrational(x); }

RationalTriple triple(ExactReal beta, const char* sigma2, std::vector<RationalAtom> nu) {
  RationalTriple t;
  t.beta = beta;
  t.sigma2 = parse_rational(sigma2);
  t.nu = std::move(nu);
  return t;
}

// Union of S, S^2, ..., S^n as sets of products; n = |G| suffices.
std::vector<std::size_t> brute_closure(const FiniteTable& t, const std::vector<std::size_t>& s) {
  std::set<std::size_t> all(s.begin(), s.end()), layer(s.begin(), s.end());
  for (std::size_t n = 1; n < t.order(); ++n) {
    std::set<std::size_t> next;
    for (auto a : layer)
      for (auto b : s) next.insert(t.product(a, b));
    all.insert(next.begin(), next.end());
    layer = next;
  }
  return {all.begin(), all.end()};
}

}  // namespace

TEST_CASE("fixture triples match their hand-evaluated conditions") {
  const auto doc = testing_io::read_json(std::string(HAARWALK_FIXTURES) + "/triples.json");
  REQUIRE(doc.at("triples").size() >= 20);
  for (const auto& row : doc.at("triples")) {
    CAPTURE(row.dump());
    const auto t = testing_io::triple_from(row);
    const auto v = classify_torus_triple(t);
    CHECK(to_string(v.kind) == testing_io::expected_kind(row));
    CHECK(to_string(v.kind) == row.at("kind").get<std::string>());
    if (row.contains("m")) CHECK(v.modulus == row.at("m").get<long long>());
    std::vector<ExactReal> atoms;
    for (const auto& a : t.nu) atoms.push_back(a.location);
    const auto m = minimal_lattice_modulus(atoms);
    if (row.at("lattice").is_null()) {
      CHECK_FALSE(m.has_value());
    } else {
      CHECK(*m == row.at("lattice").get<long long>());
    }
    CHECK_FALSE(v.provenance.empty());
  }
}

TEST_CASE("lattice modulus") {
  CHECK(*minimal_lattice_modulus(std::vector<ExactReal>{}) == 1);
  CHECK(*minimal_lattice_modulus(std::vector<ExactReal>{q("1/4"), q("-5/6"), q("3")}) == 12);
  CHECK(*minimal_lattice_modulus(std::vector<ExactReal>{q("2/4")}) == 2);
  CHECK_FALSE(minimal_lattice_modulus(std::vector<ExactReal>{q("1/2"), irr(0.3)}).has_value());
}

TEST_CASE("lattice verdict keeps the start as translate") {
  const auto v = classify_torus_triple(triple(q("0"), "0", {}), parse_rational("7/3"));
  CHECK(v.kind == VerdictKind::PointMass);
  CHECK(v.torus_shift == parse_rational("1/3"));
  const auto w = classify_torus_triple(triple(q("1/2"), "0", {{q("1/2"), 1}}), parse_rational("-1/4"));
  CHECK(w.kind == VerdictKind::UniformOnLattice);
  CHECK(w.torus_shift == parse_rational("3/4"));
}

TEST_CASE("invalid triples are rejected") {
  CHECK_THROWS(classify_torus_triple(triple(q("0"), "-1", {})));
  CHECK_THROWS(classify_torus_triple(triple(q("0"), "0", {{q("0"), 1}})));
  CHECK_THROWS(classify_torus_triple(triple(q("0"), "0", {{q("1/2"), 0}})));
}

TEST_CASE("iid torus steps") {
  CHECK(classify_iid_torus(std::vector<ExactReal>{q("1/2"), q("1/3")}).modulus == 6);
  CHECK(classify_iid_torus(std::vector<ExactReal>{q("1/2"), q("1/3")}).kind == VerdictKind::UniformOnLattice);
  CHECK(classify_iid_torus(std::vector<ExactReal>{q("2")}).kind == VerdictKind::PointMass);
  CHECK(classify_iid_torus(std::vector<ExactReal>{q("1/2"), irr(0.618)}).is_haar());
  CHECK_THROWS(classify_iid_torus(std::vector<ExactReal>{}));
}

TEST_CASE("closure agrees with products of bounded length") {
  Rng rng(17);
  for (const char* name : {"Z6", "Z12", "S3", "D4", "Q8", "A4"}) {
    const auto t = builtin_table(name);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < t.order(); ++i)
        if (rng.uniform() < 0.2) s.push_back(i);
      if (s.empty()) s.push_back(rng.index(t.order()));
      CAPTURE(name);
      CHECK(subgroup_closure_finite(t, s) == brute_closure(t, s));
    }
  }
  CHECK_THROWS(subgroup_closure_finite(builtin_table("S3"), std::vector<std::size_t>{}));
  CHECK_THROWS(subgroup_closure_finite(builtin_table("S3"), std::vector<std::size_t>{6}));
}

TEST_CASE("finite-group verdicts") {
  const auto s3 = CompactGroup::finite(builtin_table("S3"));
  const auto& t = s3.table();
  const std::size_t tr = *t.find("(12)"), cyc = *t.find("(123)");
  CHECK(classify_iid_finite(s3, std::vector<std::size_t>{tr, cyc}).is_haar());
  const auto sub = classify_iid_finite(s3, std::vector<std::size_t>{tr});
  CHECK(sub.kind == VerdictKind::UniformOnSubgroup);
  CHECK(sub.subgroup == std::vector<std::size_t>{t.identity(), tr});
  CHECK(classify_iid_finite(s3, std::vector<std::size_t>{cyc}).subgroup.size() == 3);
  CHECK(classify_iid_finite(s3, std::vector<std::size_t>{t.identity()}).kind == VerdictKind::PointMass);

  // Coset start * H carries the limit.
  const auto coset = classify_iid_finite(s3, std::vector<std::size_t>{cyc}, tr);
  const auto mass = predicted_limit_measure(coset, s3, default_partition(s3));
  double total = 0;
  for (std::size_t g = 0; g < 6; ++g) {
    total += mass[g];
    const bool in_h = g == t.identity() || g == cyc || g == t.product(cyc, cyc);
    CHECK(mass[t.product(tr, g)] == doctest::Approx(in_h ? 1.0 / 3 : 0.0));
  }
  CHECK(total == doctest::Approx(1.0));

  const auto z6 = CompactGroup::finite(cyclic_table(6));
  const auto v = classify_iid_finite(z6, std::vector<std::size_t>{2});
  CHECK(v.subgroup == std::vector<std::size_t>{0, 2, 4});
  CHECK_THROWS_AS(classify_iid_finite(CompactGroup::torus(1), std::vector<std::size_t>{0}), FamilyMismatch);
}

TEST_CASE("rational logarithms") {
  CHECK(*rational_log(8, 2) == 3);
  CHECK(*rational_log(Rational(1, 100), 10) == -2);
  CHECK(*rational_log(-1000, 10) == 3);
  CHECK(*rational_log(4, 8) == Rational(2, 3));
  CHECK(*rational_log(2, 4) == Rational(1, 2));
  CHECK(*rational_log(1, 7) == 0);
  CHECK(*rational_log(36, 6) == 2);
  CHECK_FALSE(rational_log(2, 10).has_value());
  CHECK_FALSE(rational_log(3, 2).has_value());
  CHECK_FALSE(rational_log(12, 6).has_value());
  CHECK_FALSE(rational_log(Rational(3, 2), 6).has_value());
  CHECK_THROWS(rational_log(0, 10));
  CHECK_THROWS(rational_log(2, 1));
}

TEST_CASE("aligned partitions avoid every lattice point") {
  const auto torus = CompactGroup::torus(1);
  Verdict v;
  v.kind = VerdictKind::UniformOnLattice;
  v.modulus = 2;
  const auto p = aligned_partition(10, v);
  const auto mass = predicted_limit_measure(v, torus, p);
  CHECK(mass[0] == 0.5);
  CHECK(mass[5] == 0.5);
  CHECK(predicted_support_bins(v, torus, p) == std::vector<std::size_t>{0, 5});

  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Verdict w;
    w.modulus = 1 + static_cast<std::int64_t>(rng.index(24));
    w.kind = w.modulus == 1 ? VerdictKind::PointMass : VerdictKind::UniformOnLattice;
    w.torus_shift = Rational(static_cast<long long>(rng.index(97)), 97);
    const std::size_t bins = 1 + rng.index(40);
    const auto part = aligned_partition(bins, w);
    CAPTURE(w.modulus);
    CAPTURE(bins);
    const auto m = predicted_limit_measure(w, torus, part);
    double total = 0;
    for (double x : m) total += x;
    CHECK(total == doctest::Approx(1.0));
    // Every lattice point sits strictly inside a bin, at least half a gap from its edges.
    for (std::int64_t j = 0; j < w.modulus; ++j) {
      const double x = std::fmod(to_double(w.torus_shift) + static_cast<double>(j) / w.modulus, 1.0);
      const double u = (x - part.offset_value) * static_cast<double>(bins);
      const double dist = std::abs(u - std::round(u));
      CHECK(dist > 1e-9);
      CHECK(m[part.axis_bin(x)] > 0.0);
    }
  }

  Verdict point;
  point.kind = VerdictKind::PointMass;
  CHECK_THROWS_WITH_AS(predicted_limit_measure(point, torus, make_torus_partition(10)),
                       doctest::Contains("bin boundary"), std::invalid_argument);
  CHECK(aligned_partition(10, Verdict{}).offset == 0);
}

TEST_CASE("verdict JSON") {
  const auto torus = CompactGroup::torus(1);
  const auto v = classify_torus_triple(triple(q("1/3"), "0", {{q("1/3"), 1}}));
  const auto j = to_json(v, torus, aligned_partition(30, v));
  CHECK(j["kind"] == "UniformOnLattice");
  CHECK(j["m"] == 3);
  CHECK(j["limit_measure"].size() == 3);
  CHECK(j["provenance"].get<std::string>().find("(1/3)Z") != std::string::npos);

  const auto s3 = CompactGroup::finite(builtin_table("S3"));
  const auto sub = classify_iid_finite(s3, std::vector<std::size_t>{*s3.table().find("(12)")});
  const auto k = to_json(sub, s3, default_partition(s3));
  CHECK(k["subgroup"] == nlohmann::ordered_json::array({"e", "(12)"}));
}

TEST_CASE("Benford criterion") {
  const auto ln10 = std::log(10.0);
  // Geometric Brownian motion with drift.
  const auto gbm = triple(q("1/10"), "1", {});
  CHECK(classify_benford(benford_input(gbm, irr(1 / ln10), irr(0.05 / ln10), 10)).is_haar());

  // 10^{N_t}: significand stays 1.
  const auto poisson = triple(q("0"), "0", {{q("1"), 1}});
  const auto p1 = classify_benford(benford_input(poisson, q("1"), q("0"), 10));
  CHECK(p1.kind == VerdictKind::PointMass);
  CHECK(p1.provenance.find("not Benford") != std::string::npos);

  // 10^{N_t / 2}: two significands.
  const auto p2 = classify_benford(benford_input(poisson, q("1/2"), q("0"), 10));
  CHECK(p2.kind == VerdictKind::UniformOnLattice);
  CHECK(p2.modulus == 2);
  CHECK(classify_benford(benford_input(poisson, q("-1/2"), q("0"), 10)).modulus == 2);

  // A deterministic exponential rate breaks the lattice.
  CHECK(classify_benford(benford_input(poisson, q("1"), irr(1 / ln10), 10)).is_haar());
  CHECK(classify_benford(benford_input(poisson, q("1"), q("1/3"), 10)).is_haar());

  // e^{N_t}: jumps 1/ln 10 are irrational.
  CHECK(classify_benford(benford_input(poisson, irr(1 / ln10), q("0"), 10)).is_haar());

  // Small rational jumps of Y: compensated drift vanishes on the significand torus.
  const auto small = triple(q("1/4"), "0", {{q("1/4"), 1}});
  CHECK(classify_benford(benford_input(small, q("1"), q("0"), 10)).modulus == 4);

  CHECK_THROWS(benford_input(poisson, q("0"), q("0"), 10));
  BenfordInput bad;
  bad.base = 1;
  CHECK_THROWS(classify_benford(bad));
}

// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "haarwalk/almost_periodic.hpp"
#include "haarwalk/classifier.hpp"
#include "haarwalk/experiment.hpp"
#include "haarwalk/finite_groups.hpp"
#include "haarwalk/occupation.hpp"

#include "fixture_io.hpp"

using namespace haarwalk;
using nlohmann::json;

namespace {

const std::string kFixtures = HAARWALK_FIXTURES;
const std::string kConfigs = kFixtures + "/configs/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

ExperimentConfig config(const std::string& file, std::initializer_list<std::string> sets = {}) {
  json doc = testing_io::read_json(kConfigs + file);
  for (const auto& s : sets) apply_override(doc, s);
  return config_from_json(doc);
}

const TestReport& find_test(const RunResult& r, const std::string& name) {
  for (const auto& t : r.tests)
    if (t.test == name) return t;
  throw std::runtime_error("report has no test \"" + name + "\"");
}

// Acceptance runs, kept for the determinism check.
std::map<std::string, std::pair<ExperimentConfig, RunResult>> g_runs;

const RunResult& run(const std::string& key, const ExperimentConfig& cfg) {
  auto r = run_experiment(cfg);
  return g_runs.insert_or_assign(key, std::make_pair(cfg, std::move(r))).first->second.second;
}

// Bitmask closure: S, S^2, ... up to length |G|.
std::uint32_t brute_closure(const FiniteTable& t, std::uint32_t s) {
  std::uint32_t all = s, layer = s;
  for (std::size_t n = 1; n < t.order(); ++n) {
    std::uint32_t next = 0;
    for (std::size_t a = 0; a < t.order(); ++a) {
      if (!(layer >> a & 1)) continue;
      for (std::size_t b = 0; b < t.order(); ++b)
        if (s >> b & 1) next |= 1u << t.product(a, b);
    }
    all |= next;
    layer = next;
  }
  return all;
}

Outcome classifier_exactness() {
  std::vector<std::string> names;
  for (int n = 1; n <= 12; ++n) names.push_back("Z" + std::to_string(n));
  for (const char* s : {"S3", "D4", "Q8", "A4"}) names.push_back(s);
  std::size_t checked = 0, agree = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& name : names) {
    const auto group = CompactGroup::finite(builtin_table(name));
    const auto& t = group.table();
    for (std::uint32_t mask = 1; mask < (1u << t.order()); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < t.order(); ++i)
        if (mask >> i & 1) s.push_back(i);
      const auto v = classify_iid_finite(group, s);
      const std::uint32_t h = brute_closure(t, mask);
      const auto size = static_cast<std::size_t>(std::popcount(h));
      const VerdictKind kind = size == t.order() ? VerdictKind::HaarOnG
                               : size == 1       ? VerdictKind::PointMass
                                                 : VerdictKind::UniformOnSubgroup;
      std::uint32_t got = 0;
      for (auto x : v.subgroup) got |= 1u << x;
      ++checked;
      if (v.kind == kind && got == h) ++agree;
    }
  }
  const double secs = seconds_since(t0);
  return {agree == checked && secs < 1.0,
          std::to_string(agree) + "/" + std::to_string(checked) + " subsets agree, " + fmt("%.3f s", secs)};
}

Outcome triple_table() {
  const auto doc = testing_io::read_json(kFixtures + "/triples.json");
  std::size_t n = 0, agree = 0;
  for (const auto& row : doc.at("triples")) {
    const auto v = classify_torus_triple(testing_io::triple_from(row));
    bool ok = to_string(v.kind) == testing_io::expected_kind(row);
    if (v.kind == VerdictKind::UniformOnLattice) ok = ok && v.modulus == row.at("lattice").get<long long>();
    ++n;
    agree += ok ? 1 : 0;
  }
  return {n >= 20 && agree == n, std::to_string(agree) + "/" + std::to_string(n) + " triples agree"};
}

Outcome golden_rotation() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& r = run("golden_rotation", config("golden_rotation.json"));
  const double secs = seconds_since(t0);
  const double w = find_test(r, "weyl").statistic, d = find_test(r, "discrepancy").statistic;
  return {w < 0.02 && d < 0.02 && secs < 10.0,
          "max|S_k| " + fmt("%.2e", w) + ", D* " + fmt("%.2e", d) + ", " + fmt("%.2f s", secs)};
}

Outcome lattice() {
  RationalTriple triple;
  triple.beta = ExactReal::rational(Rational(1, 2));
  triple.nu = {{ExactReal::rational(Rational(1, 2)), 1}};
  const auto verdict = classify_torus_triple(triple);
  const auto partition = aligned_partition(1000, verdict);
  const auto path = project_to_torus(simulate_real_levy(to_levy_triple(triple), 1e4, 0.0, 42));
  const auto occ = occupation_histogram(path, partition);
  const std::size_t b0 = partition.axis_bin(0.0), b1 = partition.axis_bin(0.5);
  const double m0 = occ.masses[b0], m1 = occ.masses[b1];
  const bool ok = verdict.kind == VerdictKind::UniformOnLattice && verdict.modulus == 2 && b0 != b1 &&
                  std::abs(m0 + m1 - 1.0) <= 1e-12 && std::abs(m0 - 0.5) < 0.03 && std::abs(m1 - 0.5) < 0.03;
  // Same run through the pipeline for the determinism check.
  const auto& r = run("lattice_half", config("lattice_half.json"));
  return {ok && r.pass(), "masses " + fmt("%.4f", m0) + " + " + fmt("%.4f", m1) + ", off-support " +
                              fmt("%.1e", 1.0 - m0 - m1)};
}

Outcome brownian() {
  const auto& r = run("brownian_torus", config("brownian_torus.json"));
  const double d = find_test(r, "discrepancy").statistic;
  return {d < 0.02, "D* " + fmt("%.2e", d)};
}

Outcome benford() {
  const auto& gbm = run("gbm_benford", config("gbm_benford.json"));
  const auto& poisson = run("poisson_benford", config("poisson_benford.json"));
  const auto& powers = run("powers_of_two", config("powers_of_two.json"));
  const double g = find_test(gbm, "benford").statistic;
  const double p = find_test(poisson, "benford").statistic;
  const double f1 = find_test(powers, "first_digit").params.at("frequencies").at(0).get<double>();
  const bool ok = g < 0.01 && p > 0.3 && std::abs(f1 - std::log10(2.0)) < 0.01;
  return {ok, "GBM " + fmt("%.2e", g) + ", Poisson " + fmt("%.3f", p) + ", 2^n digit-1 freq " + fmt("%.4f", f1)};
}

Outcome finite_groups() {
  const auto& gen = run("s3_generating", config("s3_generating.json"));
  const auto& sub = run("s3_transposition", config("s3_transposition.json"));
  const auto& haar = run("s3_transposition_haar", config("s3_transposition.json", {"target=\"haar\""}));
  const double a = find_test(gen, "tv").statistic, b = find_test(sub, "tv").statistic,
               c = find_test(haar, "tv").statistic;
  return {a < 0.02 && b < 0.02 && c >= 0.45, "TV uniform " + fmt("%.2e", a) + ", TV subgroup " + fmt("%.2e", b) +
                                                 ", TV S3 " + fmt("%.3f", c)};
}

Outcome almost_periodic() {
  LevyTriple t;
  t.sigma2 = 1.0;
  const auto path = simulate_real_levy(t, 1e4, 1e-3, 42);
  const double r2 = std::sqrt(2.0);
  TrigPolynomial f;
  f.terms = {{0.0, 2.0}, {1.0, 0.5}, {-1.0, 0.5}, {r2, 0.5}, {-r2, 0.5}};
  const double err = std::abs(path_average(f, path, 1e4) - 2.0);
  return {err < 0.05, "|average - 2| " + fmt("%.2e", err)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::complex<double> riemann_oracle(const JumpPath& path, const CharacterIndex& chi, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(path.horizon / dt));
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += character_eval(path.group, chi, path.value_at(i * dt));
  return s / static_cast<double>(n);
}

Outcome oracles() {
  // Jump-path integration against a left Riemann sum with dt = 1e-4; each
  // jump moves the sum by at most 2 dt / T.
  const auto s3 = CompactGroup::finite(symmetric3_table());
  const auto t2 = CompactGroup::torus(2);
  const auto q8 = CompactGroup::finite(quaternion8_table());
  std::size_t within = 0;
  double worst_norm = 0.0;
  Rng pick(2024);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
    const double rate = 0.5 + 2.5 * pick.uniform();
    JumpPath p = [&] {
      switch (i % 3) {
        case 0: {
          const StepDistribution d(s3, {{FiniteElement{1}, 1.0}, {FiniteElement{3}, 2.0}});
          return simulate_jump_levy_group(s3, d, rate, 20.0, seed, FiniteElement{0});
        }
        case 1: {
          const StepDistribution d(q8, {{FiniteElement{2}, 1.0}, {FiniteElement{4}, 1.0}});
          return simulate_jump_levy_group(q8, d, rate, 20.0, seed, FiniteElement{0});
        }
        default: {
          const StepDistribution d(t2, {{TorusPoint{{pick.uniform(), pick.uniform()}}, 1.0},
                                        {TorusPoint{{pick.uniform(), pick.uniform()}}, 1.0}});
          return simulate_jump_levy_group(t2, d, rate, 20.0, seed, TorusPoint{{0.0, 0.0}});
        }
      }
    }();
    const auto chars = nontrivial_characters(p.group, 2);
    const auto& chi = chars[pick.index(chars.size())];
    const double bound = 2.0 * static_cast<double>(p.times.size()) * 1e-4 / p.horizon + 1e-12;
    if (std::abs(integrate_jump_path(p, chi) - riemann_oracle(p, chi, 1e-4)) <= bound) ++within;
    worst_norm = std::max(worst_norm, std::abs(occupation_histogram(p, default_partition(p.group)).total_mass() - 1.0));

    LevyTriple lt;
    lt.beta = pick.uniform() - 0.5;
    lt.sigma2 = i % 2 ? 0.0 : pick.uniform();
    lt.nu = {{0.1 + pick.uniform(), 0.5 + pick.uniform()}};
    const auto tp = project_to_torus(simulate_real_levy(lt, 50.0, 1e-3, seed));
    for (auto exec : {Execution::Serial, Execution::Parallel}) {
      worst_norm = std::max(worst_norm, std::abs(occupation_histogram(tp, make_torus_partition(97), exec).total_mass() - 1.0));
    }
    worst_norm = std::max(worst_norm, std::abs(occupation_cdf(tp).total_mass() - 1.0));
  }

  // Determinism: rerun every acceptance configuration and compare the files.
  const auto root = std::filesystem::temp_directory_path() / "haarwalk_acceptance";
  std::filesystem::remove_all(root);
  std::size_t identical = 0;
  for (const auto& [key, entry] : g_runs) {
    write_outputs(entry.second, root / key / "a");
    write_outputs(run_experiment(entry.first), root / key / "b");
    bool same = true;
    for (const auto& f : std::filesystem::directory_iterator(root / key / "a")) {
      const auto other = root / key / "b" / f.path().filename();
      same = same && std::filesystem::exists(other) && slurp(f.path()) == slurp(other);
    }
    identical += same ? 1 : 0;
  }
  std::filesystem::remove_all(root);

  const bool ok = within == 100 && worst_norm <= 1e-9 && identical == g_runs.size();
  return {ok, std::to_string(within) + "/100 paths within bound, max |mass - 1| " + fmt("%.1e", worst_norm) + ", " +
                  std::to_string(identical) + "/" + std::to_string(g_runs.size()) + " configs byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classifier exactness on finite groups", classifier_exactness},
      {"torus triple criterion table", triple_table},
      {"irrational rotation, T=1e5", golden_rotation},
      {"lattice degeneracy, T=1e4", lattice},
      {"Brownian torus, T=1e4", brownian},
      {"Benford: GBM, Poisson, powers of two", benford},
      {"finite-group verification on S3", finite_groups},
      {"almost-periodic average on a Brownian path", almost_periodic},
      {"oracle equivalence, normalization, determinism", oracles},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

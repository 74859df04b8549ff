#include "haarwalk/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "haarwalk/almost_periodic.hpp"
#include "haarwalk/classifier.hpp"
#include "haarwalk/finite_groups.hpp"
#include "haarwalk/format.hpp"
#include "haarwalk/kernels.hpp"
#include "haarwalk/levy.hpp"
#include "haarwalk/occupation.hpp"

namespace haarwalk {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const std::vector<std::string> kKinds = {"simulate", "classify", "verify", "benford", "sweep"};

// ---------------------------------------------------------------------------
// Scalar parsing
// ---------------------------------------------------------------------------

ExactReal exact_value(const json& j, const std::string& what) {
  if (j.is_string()) {
    try {
      return ExactReal::rational(parse_rational(j.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      fail(what + ": " + e.what());
    }
  }
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? ExactReal::rational(Rational(j.get<std::uint64_t>()))
                                  : ExactReal::rational(Rational(j.get<std::int64_t>()));
  }
  if (j.is_object() && j.size() == 1 && j.contains("irrational") && j.at("irrational").is_number()) {
    const double v = j.at("irrational").get<double>();
    if (!std::isfinite(v)) fail(what + ": irrational value must be finite");
    return ExactReal::irrational(v);
  }
  if (j.is_number_float()) {
    fail(what + " is a floating-point number (" + j.dump() +
         "); write it as a rational string such as \"1/2\" or flag it as {\"irrational\": value}");
  }
  fail(what + ": expected a rational string, an integer or {\"irrational\": value}, got " + j.dump());
}

Rational rational_value(const json& j, const std::string& what) {
  const auto v = exact_value(j, what);
  if (!v.is_rational()) fail(what + " must be rational");
  return *v.exact;
}

// Plain real number: JSON number, rational string or flagged irrational.
double real_value(const json& j, const std::string& what) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(what + " must be finite");
    return v;
  }
  return exact_value(j, what).value();
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

// ---------------------------------------------------------------------------
// Groups and processes
// ---------------------------------------------------------------------------

CompactGroup make_group(const ExperimentConfig& cfg) {
  const json g = cfg.group;
  const std::string family = field(g, "family", "group").get<std::string>();
  if (family == "torus") {
    const auto dim = g.value("dim", 1);
    if (dim < 1 || dim > 16) fail("group.dim must lie in [1, 16]");
    return CompactGroup::torus(static_cast<std::size_t>(dim), cfg.bins ? cfg.bins : 1000);
  }
  if (family == "finite") {
    if (g.contains("builtin")) return CompactGroup::finite(builtin_table(g.at("builtin").get<std::string>()));
    if (g.contains("table")) return CompactGroup::finite(finite_table_from_json(g.at("table")));
    if (g.contains("table_file")) return CompactGroup::finite(load_finite_table(g.at("table_file").get<std::string>()));
    fail("finite group needs \"builtin\", \"table\" or \"table_file\"");
  }
  if (family == "rotation3d") return CompactGroup::rotation3d(cfg.bins ? cfg.bins : 90);
  fail("unknown group family \"" + family + "\" (torus, finite, rotation3d)");
}

std::string process_type(const ExperimentConfig& cfg) {
  if (!cfg.process.is_object()) fail("config needs a \"process\" object");
  return field(cfg.process, "type", "process").get<std::string>();
}

RationalTriple parse_triple(const json& p) {
  RationalTriple t;
  if (p.contains("beta")) t.beta = exact_value(p.at("beta"), "beta");
  if (p.contains("sigma2")) t.sigma2 = rational_value(p.at("sigma2"), "sigma2");
  if (p.contains("nu")) {
    if (!p.at("nu").is_array()) fail("nu must be an array of {\"x\", \"mass\"}");
    for (const auto& a : p.at("nu")) {
      t.nu.push_back({exact_value(field(a, "x", "nu atom"), "nu atom x"),
                      rational_value(field(a, "mass", "nu atom"), "nu atom mass")});
    }
  }
  try {
    validate(t);
  } catch (const std::invalid_argument& e) {
    fail(std::string("invalid triple: ") + e.what());
  }
  return t;
}

Rational torus_start(const ExperimentConfig& cfg) {
  if (cfg.initial.empty()) return 0;
  try {
    return parse_rational(cfg.initial);
  } catch (const std::invalid_argument& e) {
    fail("initial: " + std::string(e.what()));
  }
}

std::size_t element_start(const ExperimentConfig& cfg, const FiniteTable& table) {
  if (cfg.initial.empty()) return table.identity();
  if (auto i = table.find(cfg.initial)) return *i;
  fail("initial: no element labelled \"" + cfg.initial + "\"");
}

GroupPoint start_point(const ExperimentConfig& cfg, const CompactGroup& group) {
  switch (group.family()) {
    case Family::Torus: {
      const double x = fractional_part(to_double(torus_start(cfg)));
      return TorusPoint{std::vector<double>(group.dimension(), x)};
    }
    case Family::FiniteTable: return FiniteElement{element_start(cfg, group.table())};
    case Family::Rotation3D:
      if (!cfg.initial.empty()) fail("initial is not supported on rotation3d (starts at the identity)");
      return Quaternion{};
  }
  return identity(group);
}

struct StepSpec {
  std::vector<std::pair<GroupPoint, double>> atoms;
  std::vector<std::size_t> elements;    // finite groups
  std::vector<ExactReal> torus_steps;   // one-dimensional torus
  double rate = 1.0;
  bool discrete = false;
};

StepSpec parse_steps(const json& p, const CompactGroup& group) {
  StepSpec s;
  s.rate = p.contains("rate") ? real_value(p.at("rate"), "rate") : 1.0;
  s.discrete = p.value("discrete", false);
  if (!(s.rate > 0.0)) fail("rate must be positive");
  const auto& support = field(p, "support", "steps process");
  if (!support.is_array() || support.empty()) fail("steps support must be a non-empty array");
  for (const auto& e : support) {
    const auto& step = field(e, "step", "support entry");
    const double prob = e.contains("p") ? to_double(rational_value(e.at("p"), "p")) : 1.0;
    if (!(prob > 0.0)) fail("step probabilities must be positive");
    GroupPoint g;
    switch (group.family()) {
      case Family::Torus: {
        std::vector<ExactReal> coords;
        if (step.is_array()) {
          for (const auto& c : step) coords.push_back(exact_value(c, "torus step"));
        } else {
          coords.push_back(exact_value(step, "torus step"));
        }
        if (coords.size() != group.dimension()) fail("torus step has the wrong dimension");
        TorusPoint t;
        for (const auto& c : coords) t.coords.push_back(fractional_part(c.value()));
        if (group.dimension() == 1) s.torus_steps.push_back(coords[0]);
        g = t;
        break;
      }
      case Family::FiniteTable: {
        const auto& table = group.table();
        std::size_t idx = 0;
        if (step.is_string()) {
          const auto found = table.find(step.get<std::string>());
          if (!found) fail("no element labelled \"" + step.get<std::string>() + "\"");
          idx = *found;
        } else if (step.is_number_unsigned() || (step.is_number_integer() && step.get<std::int64_t>() >= 0)) {
          idx = step.get<std::size_t>();
          if (idx >= table.order()) fail("step index out of range");
        } else {
          fail("finite-group steps are element labels or indices");
        }
        s.elements.push_back(idx);
        g = FiniteElement{idx};
        break;
      }
      case Family::Rotation3D: {
        const auto& axis = field(step, "axis", "rotation step");
        if (!axis.is_array() || axis.size() != 3) fail("rotation axis needs three components");
        g = axis_angle(real_value(axis[0], "axis"), real_value(axis[1], "axis"), real_value(axis[2], "axis"),
                       real_value(field(step, "angle", "rotation step"), "angle"));
        break;
      }
    }
    s.atoms.emplace_back(std::move(g), prob);
  }
  return s;
}

// c / ln b and d / ln b. Rational c, d != 0 give irrational ratios because
// ln b is irrational for integer b >= 2.
ExactReal ratio_to_ln_b(const json& j, const std::string& what, int base) {
  const double ln_b = std::log(static_cast<double>(base));
  if (j.is_object() && j.contains("ln_b_multiple")) return exact_value(j.at("ln_b_multiple"), what);
  const ExactReal v = j.is_number_float() ? ExactReal::irrational(j.get<double>()) : exact_value(j, what);
  if (v.is_rational() && *v.exact == 0) return ExactReal::rational(0);
  return ExactReal::irrational(v.value() / ln_b);
}

double ratio_value(const json& j, const std::string& what, int base) {
  if (j.is_object() && j.contains("ln_b_multiple")) {
    return exact_value(j.at("ln_b_multiple"), what).value() * std::log(static_cast<double>(base));
  }
  return real_value(j, what);
}

int base_of(const json& p) {
  const int b = p.value("base", 10);
  if (b < 2) fail("base must be at least 2");
  return b;
}

struct GeometricSpec {
  RationalTriple triple;
  double a = 1.0;
  double c = 1.0;
  double d = 0.0;
  ExactReal c_ratio = ExactReal::rational(1);
  ExactReal d_ratio = ExactReal::rational(0);
  std::optional<Rational> shift;  // <log_b |a|> when known exactly
  int base = 10;
};

GeometricSpec parse_geometric(const json& p) {
  GeometricSpec g;
  g.base = base_of(p);
  g.triple = parse_triple(field(p, "triple", "geometric process"));
  const json a = p.value("a", json(1));
  g.a = real_value(a, "a");
  if (g.a == 0.0) fail("a must be nonzero");
  if (!a.is_number_float() && exact_value(a, "a").is_rational()) {
    if (auto l = rational_log(*exact_value(a, "a").exact, g.base)) g.shift = *l;
  }
  const json c = p.value("c", json(1));
  const json d = p.value("d", json(0));
  g.c = ratio_value(c, "c", g.base);
  g.d = ratio_value(d, "d", g.base);
  if (g.c == 0.0) fail("c must be nonzero");
  g.c_ratio = ratio_to_ln_b(c, "c", g.base);
  g.d_ratio = ratio_to_ln_b(d, "d", g.base);
  return g;
}

struct ProductSpec {
  std::vector<std::pair<GroupPoint, double>> atoms;  // log_b |xi| on T^1
  std::vector<ExactReal> logs;
  int base = 10;
};

ProductSpec parse_product(const json& p) {
  ProductSpec s;
  s.base = base_of(p);
  const auto& support = field(p, "support", "product process");
  if (!support.is_array() || support.empty()) fail("product support must be a non-empty array");
  for (const auto& e : support) {
    ExactReal l;
    if (e.contains("log_b")) {
      l = exact_value(e.at("log_b"), "log_b");
    } else {
      const Rational xi = rational_value(field(e, "xi", "support entry"), "xi");
      if (xi == 0) fail("xi must be nonzero");
      const auto exact = rational_log(xi, s.base);
      l = exact ? ExactReal::rational(*exact)
                : ExactReal::irrational(std::log(std::abs(to_double(xi))) / std::log(static_cast<double>(s.base)));
    }
    const double prob = e.contains("p") ? to_double(rational_value(e.at("p"), "p")) : 1.0;
    if (!(prob > 0.0)) fail("probabilities must be positive");
    s.logs.push_back(l);
    s.atoms.emplace_back(TorusPoint{{fractional_part(l.value())}}, prob);
  }
  return s;
}

std::size_t sequence_length(const ExperimentConfig& cfg) {
  if (cfg.T != std::floor(cfg.T) || cfg.T < 1.0) fail("discrete-time processes need an integer T >= 1");
  return static_cast<std::size_t>(cfg.T);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::optional<Verdict> classify_config(const ExperimentConfig& cfg, const CompactGroup& group) {
  const std::string type = process_type(cfg);
  if (type == "levy_triple") {
    if (group.family() != Family::Torus || group.dimension() != 1) {
      fail("levy_triple processes live on the one-dimensional torus");
    }
    return classify_torus_triple(parse_triple(cfg.process), torus_start(cfg));
  }
  if (type == "steps") {
    const auto s = parse_steps(cfg.process, group);
    if (group.family() == Family::FiniteTable) {
      return classify_iid_finite(group, s.elements, element_start(cfg, group.table()));
    }
    if (group.family() == Family::Torus && group.dimension() == 1) {
      return classify_iid_torus(s.torus_steps, torus_start(cfg));
    }
    return std::nullopt;
  }
  if (type == "geometric") {
    const auto g = parse_geometric(cfg.process);
    Verdict v = classify_benford(benford_input(g.triple, g.c_ratio, g.d_ratio, g.base));
    if (g.shift) {
      Integer q = numerator_of(*g.shift) / denominator_of(*g.shift);
      if (Rational(q) > *g.shift) q -= 1;
      v.torus_shift = *g.shift - Rational(q);
    } else if (!v.is_haar()) {
      v.support_known = false;
      v.provenance += "; support translated by <log_b |a|>, which is not known exactly";
    }
    return v;
  }
  if (type == "product") {
    const auto s = parse_product(cfg.process);
    Verdict v = classify_iid_torus(s.logs);
    v.provenance = std::string(v.is_haar() ? "Benford" : "not Benford") + " in base " +
                   std::to_string(s.base) + ": log_b |xi| " + v.provenance;
    return v;
  }
  fail("unknown process type \"" + type + "\" (levy_triple, steps, geometric, product)");
}

Partition partition_for(const CompactGroup& group, const ExperimentConfig& cfg, const Verdict* verdict) {
  if (group.family() == Family::Torus && group.dimension() == 1 && verdict && verdict->support_known) {
    return aligned_partition(cfg.bins ? cfg.bins : 1000, *verdict);
  }
  return default_partition(group);
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

using SimPath = std::variant<TorusLevyPath, JumpPath>;

SimPath simulate(const ExperimentConfig& cfg, const CompactGroup& group) {
  const std::string type = process_type(cfg);
  if (type == "levy_triple") {
    if (group.family() != Family::Torus || group.dimension() != 1) {
      fail("levy_triple processes live on the one-dimensional torus");
    }
    const auto t = to_levy_triple(parse_triple(cfg.process));
    return project_to_torus(simulate_real_levy(t, cfg.T, cfg.dt, cfg.seed, to_double(torus_start(cfg))));
  }
  if (type == "steps") {
    const auto s = parse_steps(cfg.process, group);
    const StepDistribution dist(group, s.atoms);
    const GroupPoint x0 = start_point(cfg, group);
    if (s.discrete) {
      return sequence_path(group, partial_products(group, dist, sequence_length(cfg), cfg.seed, x0));
    }
    return simulate_jump_levy_group(group, dist, s.rate, cfg.T, cfg.seed, x0);
  }
  if (type == "geometric") {
    const auto g = parse_geometric(cfg.process);
    const auto y = simulate_real_levy(to_levy_triple(g.triple), cfg.T, cfg.dt, cfg.seed);
    return geometric_transform(y, g.a, g.c, g.d).log_torus(g.base);
  }
  if (type == "product") {
    const auto s = parse_product(cfg.process);
    const auto t1 = CompactGroup::torus(1);
    const StepDistribution dist(t1, s.atoms);
    return sequence_path(t1, partial_products(t1, dist, sequence_length(cfg), cfg.seed, identity(t1)));
  }
  fail("unknown process type \"" + type + "\"");
}

const CompactGroup& path_group(const SimPath& path, const CompactGroup& fallback) {
  if (const auto* j = std::get_if<JumpPath>(&path)) return j->group;
  return fallback;
}

double horizon_of(const SimPath& path) {
  return std::visit([](const auto& p) {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, JumpPath>) return p.horizon;
    else return p.horizon();
  }, path);
}

OccupationMeasure occupation(const SimPath& path, const Partition& partition) {
  if (const auto* t = std::get_if<TorusLevyPath>(&path)) return occupation_histogram(*t, std::get<TorusPartition>(partition));
  return occupation_histogram(std::get<JumpPath>(path), partition);
}

std::vector<CharacterSeries> series(const SimPath& path, const std::vector<CharacterIndex>& chars,
                                    const std::vector<double>& checkpoints) {
  if (const auto* t = std::get_if<TorusLevyPath>(&path)) return character_series(*t, chars, checkpoints);
  return character_series(std::get<JumpPath>(path), chars, checkpoints);
}

OccupationCdf torus_cdf(const SimPath& path, std::size_t axis) {
  if (const auto* t = std::get_if<TorusLevyPath>(&path)) return occupation_cdf(*t);
  return occupation_cdf(std::get<JumpPath>(path), axis);
}

std::vector<double> checkpoints_for(const ExperimentConfig& cfg, double horizon) {
  std::vector<double> cps = cfg.checkpoints;
  if (cps.empty()) {
    for (int i = 0; i < 20; ++i) cps.push_back(horizon * std::pow(10.0, -3.0 + 3.0 * i / 19.0));
  }
  cps.back() = std::min(cps.back(), horizon);
  if (cps.back() < horizon) cps.push_back(horizon);
  return cps;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string seed_line(std::uint64_t seed) { return "# haarwalk seed=" + std::to_string(seed) + "\n"; }

std::string occupation_csv(const OccupationMeasure& occ, const CompactGroup& group, std::uint64_t seed) {
  std::ostringstream out;
  out << seed_line(seed) << "bin_index,bin_label,mass\n";
  for (std::size_t b = 0; b < occ.masses.size(); ++b) {
    out << b << ',' << bin_label(occ.partition, group, b) << ',' << format_sci(occ.masses[b]) << '\n';
  }
  return out.str();
}

std::string series_csv(const std::vector<CharacterSeries>& all, const CompactGroup& group, std::uint64_t seed) {
  std::ostringstream out;
  out << seed_line(seed) << "k,T,re,im,abs\n";
  for (const auto& s : all) {
    const std::string k = character_label(group, s.index);
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
      const auto v = s.values[i];
      out << k << ',' << format_time(s.checkpoints[i]) << ',' << format_sci(v.real()) << ','
          << format_sci(v.imag()) << ',' << format_sci(std::abs(v)) << '\n';
    }
  }
  return out.str();
}

std::string path_csv(const SimPath& path, std::uint64_t seed) {
  std::ostringstream out;
  out << seed_line(seed);
  if (const auto* t = std::get_if<TorusLevyPath>(&path)) {
    write_path_csv(out, t->lifted, true);
  } else {
    write_path_csv(out, std::get<JumpPath>(path));
  }
  return out.str();
}

ojson verdict_json(const std::optional<Verdict>& v, const CompactGroup& group, const Partition& partition) {
  if (!v) return nullptr;
  return to_json(*v, group, partition);
}

ojson report_json(const std::string& command, const ExperimentConfig& cfg, const std::string& group_name,
                  const ojson& classification, const std::vector<TestReport>& tests) {
  ojson r;
  r["command"] = command;
  r["seed"] = cfg.seed;
  r["T"] = round12(cfg.T);
  r["group"] = group_name;
  r["classification"] = classification;
  ojson t = ojson::array();
  bool pass = true;
  for (const auto& x : tests) {
    t.push_back(to_json(x));
    pass = pass && x.pass;
  }
  r["tests"] = t;
  r["pass"] = pass;
  return r;
}

// ---------------------------------------------------------------------------
// Tests against the predicted or Haar limit
// ---------------------------------------------------------------------------

std::vector<TestReport> verdict_tests(const ExperimentConfig& cfg, const CompactGroup& group, const SimPath& path,
                                      const Verdict& limit, bool expect_pass,
                                      const std::vector<CharacterSeries>& all_series,
                                      const OccupationMeasure& occ) {
  std::vector<TestReport> tests;
  const double T = horizon_of(path);
  const auto& th = cfg.thresholds;
  auto add = [&](std::string name, double stat, double threshold, ojson params) {
    tests.push_back(make_report(std::move(name), stat, threshold, std::move(params), cfg.seed, T, expect_pass));
  };

  switch (group.family()) {
    case Family::Torus:
      if (limit.is_haar()) {
        add("weyl", weyl_statistic(all_series), th.weyl, {{"K", cfg.K}, {"characters", all_series.size()}});
        for (std::size_t axis = 0; axis < group.dimension(); ++axis) {
          const std::string name = group.dimension() == 1 ? "discrepancy" : "discrepancy_axis" + std::to_string(axis);
          add(name, torus_cdf(path, axis).star_discrepancy(), th.discrepancy, {{"axis", axis}});
        }
      } else {
        const auto predicted = predicted_limit_measure(limit, group, occ.partition);
        const auto support = predicted_support_bins(limit, group, occ.partition);
        double off = 0.0;
        for (std::size_t b = 0; b < occ.masses.size(); ++b) {
          if (!std::binary_search(support.begin(), support.end(), b)) off += occ.masses[b];
        }
        double dev = 0.0;
        for (auto b : support) dev = std::max(dev, std::abs(occ.masses[b] - predicted[b]));
        const std::int64_t m = limit.kind == VerdictKind::PointMass ? 1 : limit.modulus;
        add("off_support_mass", off, 0.0, {{"support_bins", support.size()}, {"bins", occ.masses.size()}});
        add("lattice_point_mass", dev, th.lattice_mass, {{"m", m}});
      }
      break;
    case Family::FiniteTable: {
      const auto target = predicted_limit_measure(limit, group, occ.partition);
      add("tv", tv_to_target(occ, target), th.tv,
          {{"target", limit.is_haar() ? "haar" : to_string(limit.kind)}, {"order", group.table().order()}});
      break;
    }
    case Family::Rotation3D: {
      add("weyl", weyl_statistic(all_series), th.weyl, {{"spins", all_series.size()}});
      add("tv", tv_to_target(occ, haar_masses(occ.partition)), th.tv,
          {{"target", "haar"}, {"angle_bins", occ.masses.size()}});
      break;
    }
  }
  return tests;
}

Verdict haar_verdict() {
  Verdict v;
  v.provenance = "target set to Haar measure";
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail("config must be a JSON object");
  static const std::vector<std::string> known = {"kind", "group", "process", "T", "dt", "checkpoints", "K",
                                                 "bins", "seed", "replicas", "out_dir", "initial", "target",
                                                 "sweep_of", "thresholds"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("unknown config field \"" + key + "\"");
  }
  ExperimentConfig c;
  try {
    c.kind = doc.value("kind", c.kind);
    if (doc.contains("group")) c.group = doc.at("group");
    if (doc.contains("process")) c.process = doc.at("process");
    c.T = doc.value("T", c.T);
    c.dt = doc.value("dt", c.dt);
    c.checkpoints = doc.value("checkpoints", c.checkpoints);
    c.K = doc.value("K", c.K);
    c.bins = doc.value("bins", c.bins);
    c.seed = doc.value("seed", c.seed);
    c.replicas = doc.value("replicas", c.replicas);
    c.out_dir = doc.value("out_dir", c.out_dir);
    c.initial = doc.value("initial", c.initial);
    c.target = doc.value("target", c.target);
    c.sweep_of = doc.value("sweep_of", c.sweep_of);
    if (doc.contains("thresholds")) {
      const auto& t = doc.at("thresholds");
      if (!t.is_object()) fail("thresholds must be an object");
      auto& th = c.thresholds;
      for (const auto& [key, value] : t.items()) {
        double* slot = key == "weyl" ? &th.weyl
                       : key == "discrepancy" ? &th.discrepancy
                       : key == "tv" ? &th.tv
                       : key == "benford" ? &th.benford
                       : key == "first_digit" ? &th.first_digit
                       : key == "lattice_mass" ? &th.lattice_mass
                                               : nullptr;
        if (!slot) fail("unknown threshold \"" + key + "\"");
        *slot = value.get<double>();
        if (!(*slot >= 0.0) || !std::isfinite(*slot)) fail("threshold " + key + " must be a finite number >= 0");
      }
    }
  } catch (const json::exception& e) {
    fail(std::string("config type error: ") + e.what());
  }
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) fail("unknown kind \"" + c.kind + "\"");
  if (!(c.T > 0.0) || !std::isfinite(c.T) || c.T > 1e9) fail("T must lie in (0, 1e9]");
  if (!(c.dt > 0.0) || c.dt > c.T) fail("dt must lie in (0, T]");
  if (c.T / c.dt > 2e9) fail("T / dt exceeds 2e9 grid points");
  if (c.K < 1 || c.K > 64) fail("K must lie in [1, 64]");
  if (c.replicas < 1 || c.replicas > 100000) fail("replicas must lie in [1, 100000]");
  for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
    const double t = c.checkpoints[i];
    if (!(t > 0.0) || t > c.T) fail("checkpoints must lie in (0, T]");
    if (i > 0 && !(t > c.checkpoints[i - 1])) fail("checkpoints must be strictly increasing");
  }
  if (c.target != "predicted" && c.target != "haar") fail("target must be \"predicted\" or \"haar\"");
  if (c.sweep_of != "verify" && c.sweep_of != "benford") fail("sweep_of must be \"verify\" or \"benford\"");
  if (!c.group.is_object()) fail("group must be an object");
  return c;
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["kind"] = c.kind;
  j["group"] = c.group;
  j["process"] = c.process;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["checkpoints"] = c.checkpoints;
  j["K"] = c.K;
  j["bins"] = c.bins;
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["out_dir"] = c.out_dir;
  j["initial"] = c.initial;
  j["target"] = c.target;
  j["sweep_of"] = c.sweep_of;
  j["thresholds"] = {{"weyl", c.thresholds.weyl},       {"discrepancy", c.thresholds.discrepancy},
                     {"tv", c.thresholds.tv},           {"benford", c.thresholds.benford},
                     {"first_digit", c.thresholds.first_digit}, {"lattice_mass", c.thresholds.lattice_mass}};
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail("--set expects key=value, got \"" + assignment + "\"");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) fail("--set key has an empty path component: \"" + key + "\"");
    if (!node->is_object()) {
      if (!node->is_null()) fail("--set path \"" + key + "\" runs through a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

bool RunResult::pass() const {
  return std::all_of(tests.begin(), tests.end(), [](const TestReport& t) { return t.pass; });
}

RunResult run_classify(const ExperimentConfig& cfg) {
  const auto group = make_group(cfg);
  const auto verdict = classify_config(cfg, group);
  if (!verdict) fail("no classifier for this group and process (" + group.name() + ")");
  const std::string type = process_type(cfg);
  // Benford verdicts describe the significand torus, not the configured group.
  const bool on_t1 = type == "geometric" || type == "product";
  const auto g = on_t1 ? CompactGroup::torus(1, cfg.bins ? cfg.bins : 1000) : group;
  const auto partition = partition_for(g, cfg, &*verdict);
  RunResult r;
  r.report = report_json("classify", cfg, g.name(), to_json(*verdict, g, partition), {});
  r.report.erase("tests");
  r.report.erase("pass");
  return r;
}

RunResult run_simulate(const ExperimentConfig& cfg) {
  const auto group = make_group(cfg);
  const auto path = simulate(cfg, group);
  const auto& g = path_group(path, group.family() == Family::Torus ? group : CompactGroup::torus(1));
  const auto partition = partition_for(g, cfg, nullptr);
  const auto occ = occupation(path, partition);
  const auto cps = checkpoints_for(cfg, horizon_of(path));
  const auto s = series(path, nontrivial_characters(g, cfg.K), cps);
  RunResult r;
  r.report = report_json("simulate", cfg, g.name(), nullptr, {});
  r.report.erase("pass");
  r.report["occupation_total_mass"] = round12(occ.total_mass());
  if (const auto* j = std::get_if<JumpPath>(&path)) r.report["jumps"] = j->times.size();
  if (const auto* t = std::get_if<TorusLevyPath>(&path)) r.report["jumps"] = t->lifted.jump_times.size();
  r.occupation_csv = occupation_csv(occ, g, cfg.seed);
  r.series_csv = series_csv(s, g, cfg.seed);
  r.path_csv = path_csv(path, cfg.seed);
  return r;
}

RunResult run_verify(const ExperimentConfig& cfg, bool emit_path) {
  const std::string type = process_type(cfg);
  if (type == "geometric" || type == "product") return run_benford(cfg, emit_path);
  const auto group = make_group(cfg);
  const auto verdict = classify_config(cfg, group);
  if (!verdict && cfg.target != "haar") {
    fail("no classifier for this group and process (" + group.name() + "); set target to \"haar\" to test against Haar measure");
  }
  const Verdict limit = cfg.target == "haar" ? haar_verdict() : *verdict;
  const bool expect_pass = cfg.target == "predicted" || (verdict && verdict->is_haar());
  const auto path = simulate(cfg, group);
  const auto partition = partition_for(group, cfg, &limit);
  const auto occ = occupation(path, partition);
  const auto cps = checkpoints_for(cfg, horizon_of(path));
  const auto s = series(path, nontrivial_characters(group, cfg.K), cps);
  RunResult r;
  r.tests = verdict_tests(cfg, group, path, limit, expect_pass, s, occ);
  const auto classification = verdict ? verdict_json(verdict, group, partition_for(group, cfg, &*verdict)) : ojson();
  r.report = report_json("verify", cfg, group.name(), classification, r.tests);
  r.occupation_csv = occupation_csv(occ, group, cfg.seed);
  r.series_csv = series_csv(s, group, cfg.seed);
  if (emit_path) r.path_csv = path_csv(path, cfg.seed);
  return r;
}

RunResult run_benford(const ExperimentConfig& cfg, bool emit_path) {
  const std::string type = process_type(cfg);
  if (type != "geometric" && type != "product") fail("benford needs a geometric or product process");
  const auto group = make_group(cfg);
  const auto verdict = classify_config(cfg, group);
  const int base = base_of(cfg.process);
  const auto t1 = CompactGroup::torus(1, cfg.bins ? cfg.bins : 1000);
  const auto path = simulate(cfg, t1);
  const auto cdf = torus_cdf(path, 0);

  const bool expect_pass = verdict->is_haar();
  const double T = horizon_of(path);
  std::vector<TestReport> tests;
  const auto stat = benford_statistic(cdf, base);
  tests.push_back(make_report("benford", stat.statistic, cfg.thresholds.benford,
                              {{"base", base}, {"grid", kBenfordGrid}, {"zero_mass", stat.zero_mass}}, cfg.seed, T,
                              expect_pass));
  const auto freq = leading_digit_frequencies(cdf, base);
  double dev = 0.0;
  ojson fj = ojson::array();
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double d = static_cast<double>(i + 1);
    dev = std::max(dev, std::abs(freq[i] - std::log1p(1.0 / d) / std::log(static_cast<double>(base))));
    fj.push_back(round12(freq[i]));
  }
  tests.push_back(make_report("first_digit", dev, cfg.thresholds.first_digit,
                              {{"base", base}, {"frequencies", fj}}, cfg.seed, T, expect_pass));

  const auto partition = partition_for(t1, cfg, verdict->support_known ? &*verdict : nullptr);
  const auto occ = occupation(path, partition);
  const auto s = series(path, nontrivial_characters(t1, cfg.K), checkpoints_for(cfg, T));
  RunResult r;
  r.tests = tests;
  r.report = report_json("benford", cfg, "significand torus T^1 (log base " + std::to_string(base) + ")",
                         to_json(*verdict, t1, partition), r.tests);
  r.occupation_csv = occupation_csv(occ, t1, cfg.seed);
  r.series_csv = series_csv(s, t1, cfg.seed);
  if (emit_path) r.path_csv = path_csv(path, cfg.seed);
  return r;
}

RunResult run_sweep(const ExperimentConfig& cfg) {
  const auto R = static_cast<long long>(cfg.replicas);
  std::vector<RunResult> runs(cfg.replicas);
  std::vector<std::exception_ptr> errors(cfg.replicas);
  // Replica-level parallelism; kernels inside a replica see a nested region
  // and run on one thread with the same chunk layout.
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_limit())
  for (long long i = 0; i < R; ++i) {
    try {
      ExperimentConfig c = cfg;
      c.seed = cfg.seed + static_cast<std::uint64_t>(i);
      c.kind = cfg.sweep_of;
      runs[static_cast<std::size_t>(i)] = cfg.sweep_of == "benford" ? run_benford(c) : run_verify(c);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunResult r;
  ojson agg = ojson::array();
  bool pass = true;
  for (std::size_t k = 0; k < runs[0].tests.size(); ++k) {
    const auto& first = runs[0].tests[k];
    double sum = 0.0;
    double mx = 0.0;
    std::size_t passes = 0;
    ojson per = ojson::array();
    for (const auto& run : runs) {
      const auto& t = run.tests.at(k);
      sum += t.statistic;
      mx = std::max(mx, t.statistic);
      passes += t.pass ? 1 : 0;
      per.push_back(round12(t.statistic));
    }
    const double mean = sum / static_cast<double>(runs.size());
    r.tests.push_back(make_report(first.test, mx, first.threshold, first.params, cfg.seed, first.horizon,
                                  first.expect_pass));
    agg.push_back({{"test", first.test},
                   {"mean", round12(mean)},
                   {"max", round12(mx)},
                   {"threshold", round12(first.threshold)},
                   {"passes", passes},
                   {"replicas", runs.size()},
                   {"statistics", per}});
    pass = pass && passes == runs.size();
  }
  r.report["command"] = "sweep";
  r.report["seed"] = cfg.seed;
  r.report["replicas"] = cfg.replicas;
  r.report["T"] = round12(cfg.T);
  r.report["classification"] = runs[0].report.at("classification");
  r.report["tests"] = agg;
  r.report["pass"] = pass;
  return r;
}

RunResult run_experiment(const ExperimentConfig& cfg, bool emit_path) {
  if (cfg.kind == "classify") return run_classify(cfg);
  if (cfg.kind == "simulate") return run_simulate(cfg);
  if (cfg.kind == "verify") return run_verify(cfg, emit_path);
  if (cfg.kind == "benford") return run_benford(cfg, emit_path);
  return run_sweep(cfg);
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    if (text.empty()) return;
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.json", result.report.dump(2) + "\n");
  write("occupation.csv", result.occupation_csv);
  write("series.csv", result.series_csv);
  write("path.csv", result.path_csv);
}

}  // namespace haarwalk

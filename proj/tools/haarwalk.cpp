// haarwalk: classify, simulate and verify uniform distribution of Levy
// process paths on compact groups.
//
// Exit codes: 0 all tests pass, 1 a statistical test failed, 2 usage or
// validation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "haarwalk/experiment.hpp"

namespace {

constexpr int kUsageError = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
  bool emit_path = false;
  bool quiet = false;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "experiment config (JSON)");
  sub->add_option("--seed", opt.seed, "override the config seed");
  sub->add_option("--out-dir", opt.out_dir, "output directory (default: config out_dir)");
  sub->add_option("--set", opt.sets, "override a config field, e.g. --set process.beta=1/2")->take_all();
  sub->add_flag("--emit-path", opt.emit_path, "also write path.csv");
  sub->add_flag("-q,--quiet", opt.quiet, "do not print the report");
}

int run(const std::string& command, const Options& opt) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw haarwalk::ConfigError("cannot open config " + opt.config);
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw haarwalk::ConfigError("config " + opt.config + " is not valid JSON: " + e.what());
    }
  }
  for (const auto& s : opt.sets) haarwalk::apply_override(doc, s);
  if (doc.is_object()) doc["kind"] = command;
  auto cfg = haarwalk::config_from_json(doc);
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;

  const auto result = haarwalk::run_experiment(cfg, opt.emit_path);
  haarwalk::write_outputs(result, cfg.out_dir);
  if (!opt.quiet) std::cout << result.report.dump(2) << "\n";
  return result.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy processes on compact groups: uniform distribution of paths"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "predict the limit of the occupation measures"},
      {"simulate", "simulate a path and write occupation, series and path CSVs"},
      {"verify", "simulate and test the occupation against the predicted limit"},
      {"benford", "test the significands of a geometric process or product sequence"},
      {"sweep", "repeat verify over seeds seed..seed+replicas-1 and aggregate"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsageError;
}

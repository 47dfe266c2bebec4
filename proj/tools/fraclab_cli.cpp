// fraclab: command-line front end.
//
//   fraclab count     --sites 12 --walls 4,8 --region 3:9 [--diagram]
//   fraclab lattice   --sites 400 --walls 100,300 --xi 8 --delta-t 0.1 --window 20:180
//   fraclab continuum --profile tanh --phi0 1 --xi 2
//   fraclab fock      --modes 2 --state "b:1;a:1"
//   fraclab converge  --config sweep.conf
//
// Exit status: 0 success, 2 config error, 3 numerical failure, 4 invariant
// violation.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/runner.hpp"

namespace {

using fraclab::runner::Command;

struct Subcommand {
  Command command;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  bool diagram = false;
};

void add_string(Subcommand& sub, const std::string& key, const std::string& help) {
  sub.app->add_option("--" + key, sub.values[key], help);
}

int fail(fraclab::ErrorCategory category, const std::string& code, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = code;
  err["message"] = message;
  err["exit_code"] = static_cast<int>(category);
  std::cerr << err.dump() << "\n";
  return static_cast<int>(category);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton charge fractionalization laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string emit = "";
  std::string config_path;
  int jobs = 0;
  app.add_option("--emit", emit, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", jobs, "Concurrent sweep rows")->check(CLI::PositiveNumber);
  app.add_option("--config", config_path, "key=value or JSON config file");

  std::vector<Subcommand> subs;
  subs.reserve(5);

  subs.push_back({Command::Count, app.add_subcommand("count", "Bond counting with domain walls")});
  add_string(subs.back(), "sites", "Number of sites");
  add_string(subs.back(), "walls", "Comma-separated wall sites");
  add_string(subs.back(), "region", "Counting region lo:hi (inclusive)");
  add_string(subs.back(), "vacuum", "Left vacuum A|B");
  subs.back().app->add_flag("--diagram", subs.back().diagram, "Include ASCII bond diagrams");

  const std::vector<std::pair<std::string, std::string>> lattice_keys{
      {"sites", "Number of sites N"},
      {"t0", "Base hopping"},
      {"delta-t", "Dimerization amplitude"},
      {"xi", "Wall width (lattice spacings)"},
      {"walls", "Comma-separated wall sites"},
      {"wall-fractions", "Walls as fractions of N"},
      {"boundary", "ring|open"},
      {"occupancy", "empty|filled"},
      {"window", "Charge window lo:hi (inclusive)"},
      {"window-fractions", "Window as fractions of N"},
      {"vacuum", "Left vacuum A|B"},
      {"midgap-fraction", "Midgap threshold as a fraction of the gap"},
      {"subtraction", "counterterm|vacuum-chain"}};

  subs.push_back({Command::Lattice, app.add_subcommand("lattice", "Lattice spectrum and soliton charge")});
  for (const auto& [k, h] : lattice_keys) add_string(subs.back(), k, h);

  subs.push_back({Command::Continuum, app.add_subcommand("continuum", "Continuum zero mode and charge")});
  add_string(subs.back(), "profile", "tanh|table:<path>");
  add_string(subs.back(), "phi0", "Asymptotic phonon field");
  add_string(subs.back(), "xi", "Kink width");
  add_string(subs.back(), "L", "Half-length of the domain");
  add_string(subs.back(), "grid-step", "Grid spacing");

  subs.push_back({Command::Fock, app.add_subcommand("fock", "Second-quantized charge eigenvalues")});
  add_string(subs.back(), "modes", "Positive-energy mode count K");
  add_string(subs.back(), "state", "Occupations, e.g. b:1,3;d:2;a:1");
  add_string(subs.back(), "max-check-modes", "Largest K for the full algebra check");

  subs.push_back({Command::Converge, app.add_subcommand("converge", "Sweep N and xi, one CSV row per point")});
  for (const auto& [k, h] : lattice_keys) add_string(subs.back(), k, h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(fraclab::ErrorCategory::Config, "ConfigInvalid", e.what());
  }

  try {
    Subcommand* active = nullptr;
    for (auto& s : subs)
      if (s.app->parsed()) active = &s;

    fraclab::runner::ExperimentConfig cfg;
    cfg.command = active->command;
    if (!config_path.empty()) cfg = fraclab::runner::load_config_file(active->command, config_path);
    for (const auto& [k, v] : active->values) {
      if (active->app->get_option("--" + k)->count() > 0) cfg.values[k] = v;
    }
    if (active->diagram) cfg.values["diagram"] = "true";
    if (jobs > 0) cfg.values["jobs"] = std::to_string(jobs);
    if (emit.empty()) {
      const auto it = cfg.values.find("emit");
      emit = it != cfg.values.end() ? it->second
             : active->command == Command::Converge ? "csv" : "json";
    }
    cfg.values.erase("emit");
    if (emit != "json" && emit != "csv") {
      return fail(fraclab::ErrorCategory::Config, "ConfigInvalid", "emit must be json or csv");
    }

    const auto record = fraclab::runner::run(cfg);
    std::cout << fraclab::runner::emit(record, emit == "csv" ? fraclab::runner::Emit::Csv
                                                             : fraclab::runner::Emit::Json);
    return 0;
  } catch (const fraclab::Error& e) {
    return fail(e.category(), std::string(fraclab::to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return fail(fraclab::ErrorCategory::Numerical, "InternalError", e.what());
  }
}

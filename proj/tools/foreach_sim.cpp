#include <CLI11.hpp>
#include <iostream>

#include "foreach_crdt/harness.hpp"

namespace h = foreach_crdt::harness;

namespace {

#ifndef FOREACH_CRDT_SCENARIO_DIR
#define FOREACH_CRDT_SCENARIO_DIR "scenarios"
#endif

int emit(const h::Outcome& out, bool json) {
  if (json) {
    std::cout << out.report.dump(2) << '\n';
  } else {
    for (const auto& line : out.lines) std::cout << line << '\n';
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic multi-replica simulator for the list CRDT with for-each"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Print the full JSON report");

  h::ScenarioOptions scenario;
  scenario.dir = FOREACH_CRDT_SCENARIO_DIR;
  std::string scenario_log;
  auto* simulate = app.add_subcommand("simulate", "Run a scripted scenario");
  simulate->add_option("--scenario", scenario.name, "Scenario name")->required();
  simulate->add_option("--seed", scenario.seed, "Seed for the extra random schedules");
  simulate->add_option("--log", scenario_log, "Write the envelope log here");
  simulate->add_option("--scenario-dir", scenario.dir, "Directory holding scenario scripts");
  simulate->add_flag("--write-golden", scenario.write_golden, "Regenerate the golden file from the oracle");

  h::FuzzOptions fuzz;
  std::string fuzz_log;
  std::string inject;
  bool no_foreach = false;
  bool no_minimize = false;
  auto* fz = app.add_subcommand("fuzz", "Random workload convergence check");
  fz->add_option("--ops", fuzz.config.ops, "Operations to generate");
  fz->add_option("--replicas", fuzz.config.replicas, "Number of replicas");
  fz->add_option("--seed", fuzz.config.seed, "Seed");
  fz->add_option("--schedules", fuzz.config.schedules, "Random replay schedules");
  fz->add_option("--foreach-share", fuzz.config.foreach_share, "Fraction of for-each operations");
  fz->add_flag("--no-foreach", no_foreach, "Only insert, delete and apply");
  fz->add_flag("--no-minimize", no_minimize, "Skip minimizing a failing run");
  fz->add_option("--inject", inject, "Failure injection")->check(CLI::IsMember({"skip-buffer"}));
  fz->add_option("--log", fuzz_log, "Write the envelope log here");

  std::string replay_log;
  auto* rp = app.add_subcommand("replay", "Replay an envelope log");
  rp->add_option("--log", replay_log, "Envelope log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitUsage;
  }

  try {
    if (*simulate) {
      if (!scenario_log.empty()) scenario.log = scenario_log;
      return emit(h::run_scenario(scenario), json);
    }
    if (*fz) {
      fuzz.config.with_foreach = !no_foreach;
      fuzz.config.minimize = !no_minimize;
      fuzz.config.inject_skip_buffer = inject == "skip-buffer";
      if (!fuzz_log.empty()) fuzz.log = fuzz_log;
      return emit(h::fuzz(fuzz), json);
    }
    return emit(h::replay(replay_log), json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitFail;
  }
}

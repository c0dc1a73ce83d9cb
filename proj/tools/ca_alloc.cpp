#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ca/cli.hpp"

namespace {

// Raw option values for one subcommand. Subcommands must not share
// storage: CLI11 resets bound flags of subcommands that were not invoked.
struct Args {
  ca::RunConfig config;
  std::string scenario;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::string sweep;

  void bind(CLI::App& cmd) {
    cmd.add_option("scenario", scenario, "Scenario JSON file");
    cmd.add_option("--preset", config.preset, "Built-in scenario (section5)");
    cmd.add_option("--set-capacity", overrides, "Override a carrier capacity, <id>=<value>");
    cmd.add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
    cmd.add_option("--delta", config.delta, "Bid convergence threshold");
    cmd.add_option("--l1", config.l1, "Fluctuation step scale");
    cmd.add_option("--l2", config.l2, "Fluctuation decay constant");
    cmd.add_option("--max-iters", config.max_iters, "Outer iteration cap per dual ascent");
    cmd.add_flag("-v,--verbose", config.verbosity, "Print a summary");
  }

  ca::RunConfig finish() {
    if (!scenario.empty()) config.scenario_path = scenario;
    for (const auto& o : overrides) config.capacity_overrides.push_back(ca::parse_capacity_override(o));
    config.out_dir = out_dir;
    if (!sweep.empty()) config.sweep = ca::parse_sweep_spec(sweep);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carrier aggregation rate allocation"};
  app.require_subcommand(1);

  Args run_args;
  auto* run_cmd = app.add_subcommand("run", "Allocate once and write CSV results");
  run_args.bind(*run_cmd);

  Args sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one carrier's capacity");
  sweep_args.bind(*sweep_cmd);
  sweep_cmd->add_option("--sweep", sweep_args.sweep, "<id>=<start>:<stop>:<step>")->required();

  Args preset_args;
  std::string preset_name = "section5";
  auto* preset_cmd = app.add_subcommand("preset", "Print a built-in scenario as JSON");
  preset_cmd->add_option("name", preset_name, "Preset name")->capture_default_str();
  preset_cmd->add_option("--set-capacity", preset_args.overrides,
                         "Override a carrier capacity, <id>=<value>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ca::kExitOk : ca::kExitUsage;
  }

  try {
    if (*preset_cmd) {
      preset_args.config.preset = preset_name;
      std::cout << ca::serialize_scenario(ca::resolve_scenario(preset_args.finish())) << '\n';
      return ca::kExitOk;
    }
    if (*sweep_cmd) return ca::cmd_sweep(sweep_args.finish(), std::cout, std::cerr);
    return ca::cmd_run(run_args.finish(), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ca::exit_code_for(e);
  }
}

// macfeas: delay-feasibility checks and power planning for a Gaussian
// multiple-access channel.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "macfeas/commands.hpp"

namespace {

void emit(const macfeas::Report& r, bool as_json) {
  std::cout << (as_json ? r.json() : r.text());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay feasibility and power allocation for a Gaussian multiple-access channel"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string method = "auto";
  std::string mode;
  std::string out_path;
  std::size_t resolution = 16;
  bool as_json = false;
  macfeas::BenchOptions bench;

  auto* check = app.add_subcommand("check", "Test whether the required rates fit the capacity region");
  check->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  check->add_option("--method", method, "auto, brute, equal-power or sfm")
      ->check(CLI::IsMember({"auto", "brute", "equal-power", "sfm"}));
  check->add_flag("--json", as_json, "Print the report as JSON");

  auto* allocate = app.add_subcommand("allocate", "Reallocate power so the required rates fit");
  allocate->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  allocate->add_option("--mode", mode, "optimal or keep-sum")
      ->required()
      ->check(CLI::IsMember({"optimal", "keep-sum"}));
  allocate->add_flag("--json", as_json, "Print the report as JSON");

  auto* bench_cmd = app.add_subcommand("bench", "Time exhaustive and SFM membership checks");
  bench_cmd->add_option("--n", bench.ns, "User counts, comma separated")->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per user count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--brute-cap", bench.brute.max_users,
                        "Largest N for the exhaustive arm");
  bench_cmd->add_flag("--json", as_json, "Print the report as JSON");

  auto* region = app.add_subcommand("region", "Write capacity-region plot data (2 or 3 users)");
  region->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  region->add_option("--out", out_path, "Output file (tab separated)")->required();
  region->add_option("--resolution", resolution, "Samples per boundary edge")
      ->check(CLI::PositiveNumber);
  region->add_flag("--json", as_json, "Print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : macfeas::kExitUsage;
  }

  try {
    macfeas::Report report;
    if (*check) {
      report = macfeas::cmd_check(macfeas::load_scenario(scenario_path), macfeas::parse_method(method));
    } else if (*allocate) {
      report = macfeas::cmd_allocate(macfeas::load_scenario(scenario_path),
                                     macfeas::parse_allocate_mode(mode));
    } else if (*bench_cmd) {
      report = macfeas::cmd_bench(bench);
    } else {
      const auto sc = macfeas::load_scenario(scenario_path);
      std::ofstream out(out_path);
      if (!out) throw macfeas::UsageError("cannot write " + out_path);
      report = macfeas::cmd_region(sc, resolution, out);
      report.result["output"] = out_path;
    }
    emit(report, as_json);
    return report.exit_code;
  } catch (const macfeas::Error& e) {
    std::cerr << "macfeas: " << e.what() << '\n';
    return macfeas::kExitUsage;
  }
}

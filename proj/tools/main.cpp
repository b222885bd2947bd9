// Command-line front end: single runs, seeded campaigns, and offline
// telemetry checks. Exit codes: 0 pass, 1 constraint violation, 2 config
// error, 3 numerical divergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "boresight/campaign.hpp"
#include "boresight/errors.hpp"
#include "boresight/scenario.hpp"
#include "boresight/simulation.hpp"
#include "boresight/telemetry.hpp"

namespace {

using namespace boresight;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteState:
      return 3;
    case ErrorCode::OutsideDomain:
    case ErrorCode::RateLimitViolated:
    case ErrorCode::EnvelopeViolated:
      return 1;
    default:
      return 2;
  }
}

struct ScenarioSource {
  std::string preset_name;
  std::string config_path;

  ScenarioConfig resolve(const std::string& fallback_preset) const {
    if (!config_path.empty()) return load_config(config_path);
    if (!preset_name.empty()) return preset(preset_name);
    return preset(fallback_preset);
  }
};

int run_simulate(const ScenarioSource& source, double dt, double t_final,
                 const std::string& out_dir, bool no_disturbance, bool no_ppc) {
  ScenarioConfig cfg = source.resolve("two-cone");
  if (dt > 0.0) cfg.dt = dt;
  if (t_final > 0.0) cfg.t_final = t_final;
  if (no_disturbance) cfg.plant.disturbance_enabled = false;
  if (no_ppc) cfg.controller.ppc_enabled = false;

  Simulator sim(cfg);
  RunResult result = sim.run();

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_telemetry_csv(out_dir + "/telemetry.csv", result.telemetry);
    write_plot_data_csv(out_dir + "/plot_data.csv", result.telemetry);
    write_summary_json(out_dir + "/summary.json", result.summary);
  }
  std::cout << summary_to_json(result.summary) << std::endl;

  if (result.summary.first_violation) {
    return exit_code_for(result.summary.first_violation->code);
  }
  return 0;
}

int run_montecarlo(const ScenarioSource& source, int runs, std::uint64_t seed,
                   int jobs, const std::string& out_dir, bool no_disturbance) {
  ScenarioConfig cfg = source.resolve("monte-carlo");
  if (no_disturbance) cfg.plant.disturbance_enabled = false;

  CampaignReport report = monte_carlo(cfg, runs, seed, jobs, out_dir);
  if (!out_dir.empty()) {
    write_campaign_report(out_dir + "/report.json", report);
  }
  std::cout << campaign_report_to_json(report) << std::endl;

  if (report.all_pass) return 0;
  for (const CampaignRun& run : report.runs) {
    if (run.summary.first_violation) {
      return exit_code_for(run.summary.first_violation->code);
    }
  }
  return 1;
}

int run_check(const std::string& telemetry_path, const ScenarioSource& source) {
  ScenarioConfig cfg = source.resolve("monte-carlo");
  const std::vector<TelemetryRecord> records = read_telemetry_csv(telemetry_path);

  TelemetryLimits limits;
  limits.rate_limit = cfg.apf.rate_limit;
  limits.check_envelope = cfg.controller.ppc_enabled;
  const std::size_t zones = records.empty() ? 0 : records.front().zone_cos.size();
  if (zones != cfg.zones.size()) {
    std::cerr << "error: telemetry has " << zones << " zone columns but the scenario has "
              << cfg.zones.size() << " zones\n";
    return 2;
  }
  for (const ForbiddenZone& zone : cfg.zones) {
    limits.zone_boundaries.push_back(zone.boundary());
  }

  const std::vector<std::string> problems = check_telemetry(records, limits);
  for (const std::string& p : problems) std::cerr << p << '\n';
  std::cout << (problems.empty() ? "pass" : "fail") << " (" << records.size()
            << " records checked)" << std::endl;
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained boresight-alignment simulator"};
  app.require_subcommand(1);

  ScenarioSource source;
  double dt = 0.0;
  double t_final = 0.0;
  std::string out_dir;
  bool no_disturbance = false;
  bool no_ppc = false;
  int runs = 50;
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string telemetry_path;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario");
  simulate->add_option("--preset", source.preset_name,
                       "Scenario preset: two-cone, three-cone, monte-carlo");
  simulate->add_option("--config", source.config_path, "Scenario config file");
  simulate->add_option("--dt", dt, "Integration step [s]");
  simulate->add_option("--t-final", t_final, "Run duration [s]");
  simulate->add_option("--out", out_dir, "Output directory for telemetry/summary/plot files");
  simulate->add_flag("--no-disturbance", no_disturbance, "Disable the disturbance torque");
  simulate->add_flag("--no-ppc", no_ppc, "Drop the performance-envelope terms from the control law");

  CLI::App* montecarlo = app.add_subcommand("montecarlo", "Run a seeded campaign");
  montecarlo->add_option("--preset", source.preset_name, "Scenario preset (default monte-carlo)");
  montecarlo->add_option("--config", source.config_path, "Scenario config file");
  montecarlo->add_option("--runs", runs, "Number of runs");
  montecarlo->add_option("--seed", seed, "Master seed");
  montecarlo->add_option("--jobs", jobs, "Worker threads (default: hardware)");
  montecarlo->add_option("--out", out_dir, "Output directory for per-run files and the report");
  montecarlo->add_flag("--no-disturbance", no_disturbance, "Disable the disturbance torque");

  CLI::App* check = app.add_subcommand("check", "Re-run monitors over recorded telemetry");
  check->add_option("telemetry", telemetry_path, "Telemetry CSV file")->required();
  check->add_option("--preset", source.preset_name, "Scenario preset supplying the limits");
  check->add_option("--config", source.config_path, "Scenario config supplying the limits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(source, dt, t_final, out_dir, no_disturbance, no_ppc);
    }
    if (montecarlo->parsed()) {
      return run_montecarlo(source, runs, seed, jobs, out_dir, no_disturbance);
    }
    return run_check(telemetry_path, source);
  } catch (const boresight::Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

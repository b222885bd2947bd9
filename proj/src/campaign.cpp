#include "boresight/campaign.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "boresight/errors.hpp"
#include "boresight/telemetry.hpp"

namespace boresight {

CampaignReport monte_carlo(const ScenarioConfig& base, int n_runs,
                           std::uint64_t seed, int jobs,
                           const std::string& out_dir) {
  if (n_runs < 1) {
    throw Error(ErrorCode::ConfigInvalid, "campaign needs at least one run");
  }
  if (jobs < 1) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
  }

  CampaignReport report;
  report.seed = seed;
  report.runs.resize(n_runs);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int index = next.fetch_add(1);
      if (index >= n_runs) return;

      ScenarioConfig cfg = base;
      std::uint64_t stream = run_stream(seed, index);
      cfg.target = sample_target(stream);
      cfg.seed = seed;

      CampaignRun& slot = report.runs[index];
      slot.index = index;
      slot.target = cfg.target;
      try {
        Simulator sim(cfg);
        RunResult result = sim.run();
        slot.summary = std::move(result.summary);
        if (!out_dir.empty()) {
          char stem[32];
          std::snprintf(stem, sizeof stem, "run_%03d", index);
          const std::string prefix = out_dir + "/" + stem;
          write_telemetry_csv(prefix + ".csv", result.telemetry);
          write_plot_data_csv(prefix + "_plot.csv", result.telemetry);
          write_summary_json(prefix + "_summary.json", slot.summary);
        }
      } catch (const Error& e) {
        slot.summary.pass = false;
        slot.summary.first_violation = Violation{0.0, e.code(), e.what()};
      } catch (const std::exception& e) {
        slot.summary.pass = false;
        slot.summary.first_violation = Violation{0.0, ErrorCode::IoError, e.what()};
      }
    }
  };

  std::vector<std::thread> pool;
  for (int i = 0; i < jobs && i < n_runs; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  report.all_pass = true;
  report.worst_terminal_xe = 0.0;
  report.worst_terminal_deg = 0.0;
  report.max_eps = 0.0;
  report.min_zone_margin = std::numeric_limits<double>::infinity();
  for (const CampaignRun& run : report.runs) {
    report.all_pass = report.all_pass && run.summary.pass;
    report.worst_terminal_xe =
        std::max(report.worst_terminal_xe, run.summary.terminal_accuracy_xe);
    report.worst_terminal_deg =
        std::max(report.worst_terminal_deg, run.summary.terminal_accuracy_deg);
    report.max_eps = std::max(report.max_eps, run.summary.max_eps);
    report.min_zone_margin =
        std::min(report.min_zone_margin, run.summary.min_zone_margin);
  }
  return report;
}

std::string campaign_report_to_json(const CampaignReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["run_count"] = report.runs.size();
  j["all_pass"] = report.all_pass;
  j["worst_terminal_accuracy_xe"] = report.worst_terminal_xe;
  j["worst_terminal_accuracy_deg"] = report.worst_terminal_deg;
  j["max_eps_q"] = report.max_eps;
  j["min_zone_margin"] = report.min_zone_margin;
  nlohmann::json runs = nlohmann::json::array();
  for (const CampaignRun& run : report.runs) {
    nlohmann::json r = nlohmann::json::parse(summary_to_json(run.summary));
    r["index"] = run.index;
    r["target"] = {run.target.x(), run.target.y(), run.target.z()};
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  return j.dump(2);
}

void write_campaign_report(const std::string& path, const CampaignReport& report) {
  std::ofstream file(path);
  if (!file) {
    throw Error(ErrorCode::IoError, "cannot write campaign report '" + path + "'");
  }
  file << campaign_report_to_json(report) << '\n';
  if (!file) {
    throw Error(ErrorCode::IoError, "failed writing campaign report '" + path + "'");
  }
}

}  // namespace boresight

#pragma once

#include <string>
#include <vector>

#include "boresight/simulation.hpp"

namespace boresight {

struct CampaignRun {
  int index = 0;
  Vec3 target = Vec3::Zero();
  RunSummary summary;
};

struct CampaignReport {
  std::uint64_t seed = 0;
  std::vector<CampaignRun> runs;
  bool all_pass = false;
  double worst_terminal_xe = 0.0;
  double worst_terminal_deg = 0.0;
  double max_eps = 0.0;
  double min_zone_margin = 0.0;
};

// Seeded campaign: n_runs independent runs of the base scenario, each with a
// target resampled from its own generator stream. Runs execute on up to
// `jobs` threads; the report is assembled in run order so identical inputs
// give identical reports. Per-run failures are recorded, not thrown. When
// out_dir is non-empty, telemetry/plot/summary files are written per run.
CampaignReport monte_carlo(const ScenarioConfig& base, int n_runs,
                           std::uint64_t seed, int jobs,
                           const std::string& out_dir = "");

std::string campaign_report_to_json(const CampaignReport& report);
void write_campaign_report(const std::string& path, const CampaignReport& report);

}  // namespace boresight

#pragma once

#include <string>
#include <vector>

#include "boresight/simulation.hpp"

namespace boresight {

// Mercator projection of a unit vector: x = longitude [rad],
// y = ln tan(pi/4 + latitude/2).
struct MercatorPoint {
  double x = 0.0;
  double y = 0.0;
};

MercatorPoint mercator(const Vec3& unit);

// Telemetry CSV with a fixed column order
//   t, x_e, theta_deg, eps_q, rho_q, omega_q_raw, omega_q, w1..w3, u1..u3,
//   gamma_1..gamma_m, theta_eff_1..3, g_a, filt_err, V_omega, V_B
// written with 17 significant digits so parsing round-trips exactly.
void write_telemetry_csv(const std::string& path,
                         const std::vector<TelemetryRecord>& records);
std::vector<TelemetryRecord> read_telemetry_csv(const std::string& path);

// Boresight trajectory for plotting: unit vector and its Mercator image.
void write_plot_data_csv(const std::string& path,
                         const std::vector<TelemetryRecord>& records);

// JSON summary with keys: pass, terminal_accuracy_xe, terminal_accuracy_deg,
// max_abs_rate_dps, max_eps_q, min_zone_margin, freeze_intervals,
// first_violation (null when the run passed).
std::string summary_to_json(const RunSummary& summary);
void write_summary_json(const std::string& path, const RunSummary& summary);

// Offline monitor pass over recorded telemetry. Returns human-readable
// problem descriptions; empty means every record respects the constraints.
struct TelemetryLimits {
  double rate_limit = 0.0524;          // [rad/s]
  std::vector<double> zone_boundaries; // cos(min angle) per gamma column
  bool check_envelope = true;
};

std::vector<std::string> check_telemetry(const std::vector<TelemetryRecord>& records,
                                         const TelemetryLimits& limits);

}  // namespace boresight

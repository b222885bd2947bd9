#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boresight/adaptive_controller.hpp"
#include "boresight/rigid_body.hpp"

namespace boresight {

// Full description of one simulation run (or of a campaign's base case).
struct ScenarioConfig {
  std::string name = "custom";

  PlantParams plant;
  ApfGains apf;
  GovernorParams governor = GovernorParams::defaults_for(0.0524);
  ControllerGains controller;
  std::vector<ForbiddenZone> zones;

  Vec3 boresight_body = Vec3::UnitX();
  Vec3 target = Vec3::UnitX();
  Attitude initial_attitude;
  Vec3 initial_rate = Vec3::Zero();

  double t_final = 200.0;          // [s]
  double dt = 1e-3;                // [s]
  int output_decimation = 100;     // telemetry every N integration steps
  double terminal_window = 30.0;   // [s] accuracy averaged over the trailing window

  std::uint64_t seed = 1;          // master seed for target sampling
  int runs = 50;                   // campaign size

  ControlLayout layout() const;

  // Throws ConfigInvalid on violated hard requirements; prints a warning for
  // soft ones (adaptation-gain margin, near-antipodal target geometry).
  void validate() const;
};

// Named scenario presets: "two-cone", "three-cone", "monte-carlo".
// Throws UnknownPreset otherwise.
ScenarioConfig preset(const std::string& name);

// Deterministic 64-bit generator used for target sampling.
std::uint64_t splitmix64(std::uint64_t& state);

// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::uint64_t& state);

// Random target on a northern latitude circle (default 70 deg N):
// [cos(lat) cos(phi), cos(lat) sin(phi), sin(lat)] with phi uniform.
Vec3 sample_target(std::uint64_t& state, double latitude_deg = 70.0);

// Per-run generator state derived from a master seed and run index.
std::uint64_t run_stream(std::uint64_t master_seed, int run_index);

// Key/value config file with [section] headers; values in SI except keys
// suffixed _deg. See README for the schema.
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& config, const std::string& path);

}  // namespace boresight

#pragma once

#include <optional>
#include <vector>

#include "boresight/errors.hpp"
#include "boresight/scenario.hpp"

namespace boresight {

// Everything logged per decimated output step.
struct TelemetryRecord {
  double t = 0.0;
  double x_e = 0.0;
  double theta_deg = 0.0;
  double eps = 0.0;
  double rho = 0.0;
  double freeze_raw = 0.0;
  double freeze = 0.0;
  Vec3 w = Vec3::Zero();
  Vec3 u = Vec3::Zero();  // applied (saturated) torque
  std::vector<double> zone_cos;
  Vec3 theta_eff = Vec3::Zero();
  double filter_gain = 0.0;
  double filter_error = 0.0;
  double v_rate_barrier = 0.0;
  double v_blf = 0.0;
  Vec3 boresight_inertial = Vec3::Zero();  // for trajectory/plot export
};

struct Violation {
  double t = 0.0;
  ErrorCode code = ErrorCode::NonFiniteState;
  std::string detail;
};

// One maximal span with the freeze level pinned at 1, and how still the
// transformed error held across it.
struct FreezeInterval {
  double start = 0.0;
  double end = 0.0;
  double eps_ref = 0.0;
  double eps_drift = 0.0;  // max |eps - eps_ref| / max(eps_ref, tiny) inside
};

struct RunSummary {
  bool pass = false;
  double terminal_accuracy_xe = 0.0;   // mean x_e over the trailing window
  double terminal_accuracy_deg = 0.0;  // same, as a pointing angle
  double max_abs_rate_dps = 0.0;
  double max_eps = 0.0;
  double min_zone_margin = 0.0;        // min over time/zones of boundary - cos
  std::vector<FreezeInterval> freeze_intervals;
  std::optional<Violation> first_violation;

  // diagnostics
  double min_rho = 0.0;                // envelope stays above its terminal value
  double final_xe = 0.0;
  double max_quat_norm_error = 0.0;    // per-step drift before renormalization
  double estimation_residual_early = 0.0;  // RMS ||Psi (theta_eff - theta)||, first 10 s
  double estimation_residual_late = 0.0;   // same over the trailing window
  double max_theta_err = 0.0;              // max ||theta_eff - theta|| over the run
};

struct RunResult {
  RunSummary summary;
  std::vector<TelemetryRecord> telemetry;
};

// Coupled plant + governor + estimator integrator. Fixed-step RK4; the
// control law is re-evaluated at every stage; monitors run at every step.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig config);

  // All integrator states advanced together by one RK4 step.
  struct State {
    Attitude attitude;
    Vec3 w = Vec3::Zero();
    double rho = 0.0;
    EstimatorState est;
  };

  // Runs from t0 to t_final (or the first violation) and collects telemetry.
  RunResult run();

  // Single-step interface for tests: advances state by dt and renormalizes
  // the attitude. Throws on constraint violations or non-finite results.
  void step(double t, State& state);

  const ScenarioConfig& config() const { return config_; }
  const ControlLayout& layout() const { return layout_; }

  State initial_state() const;

  // Norm deviation of the unrenormalized quaternion in the latest step.
  double last_norm_error() const { return last_norm_error_; }

 private:
  struct Derivative {
    Vec4 q = Vec4::Zero();
    Vec3 w = Vec3::Zero();
    double rho = 0.0;
    Vec3 theta_hat = Vec3::Zero();
    Vec3 w_filt = Vec3::Zero();
    double filter_gain = 0.0;
    double delta_lp = 0.0;
    Vec3 w_lp = Vec3::Zero();
  };

  Derivative derivative(double t, const State& s, ControlFrame& frame);
  Derivative derivative_from_frame(double t, const State& s,
                                   const ControlFrame& frame) const;
  // stages 2..4 of the step from a precomputed first-stage derivative
  void advance(double t, State& s, const Derivative& d1);
  static State advanced(const State& s, const Derivative& d, double h);
  static bool finite(const State& s);

  ScenarioConfig config_;
  ControlLayout layout_;
  ControlFrame stage_frames_[4];
  double last_norm_error_ = 0.0;
};

}  // namespace boresight

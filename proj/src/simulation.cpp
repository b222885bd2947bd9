#include "boresight/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boresight/errors.hpp"

namespace boresight {

Simulator::Simulator(ScenarioConfig config)
    : config_(std::move(config)), layout_(config_.layout()) {}

Simulator::State Simulator::initial_state() const {
  State s;
  s.attitude = config_.initial_attitude;
  s.attitude.renormalize();
  s.w = config_.initial_rate;
  s.rho = config_.governor.initial_value;
  s.est.w_filt = s.w;
  s.est.w_lp = s.w;

  // The initial raw estimate is chosen so the effective estimate
  // theta_hat + beta starts at the configured inertia guess; beta and the
  // derivative-filter seed do not depend on theta_hat, so one evaluation
  // suffices.
  ControlFrame frame;
  evaluate_control(s.attitude, s.w, s.rho, s.est, layout_, frame);
  s.est.delta_lp = frame.envelope_feedback;
  s.est.theta_hat = config_.controller.inertia_guess - frame.beta;
  return s;
}

Simulator::Derivative Simulator::derivative(double t, const State& s,
                                            ControlFrame& frame) {
  evaluate_control(s.attitude, s.w, s.rho, s.est, layout_, frame);
  return derivative_from_frame(t, s, frame);
}

Simulator::Derivative Simulator::derivative_from_frame(double t, const State& s,
                                                       const ControlFrame& frame) const {
  const Vec3 u = saturate_torque(frame.torque, config_.plant.torque_limit);
  const Vec3 d = config_.plant.disturbance_enabled
                     ? disturbance_torque(t, config_.plant.disturbance_rate)
                     : Vec3::Zero();
  Derivative out;
  out.q = quaternion_rate(s.attitude.q, s.w);
  out.w = body_rate_derivative(s.w, u, d, config_.plant.inertia_diag);
  out.rho = frame.rho_dot;
  out.theta_hat = frame.theta_hat_dot;
  out.w_filt = frame.w_filt_dot;
  out.filter_gain = frame.filter_gain_dot;
  out.delta_lp = frame.delta_lp_dot;
  out.w_lp = frame.w_lp_dot;
  return out;
}

Simulator::State Simulator::advanced(const State& s, const Derivative& d, double h) {
  State out = s;
  out.attitude.q.coeffs() += h * d.q;
  out.attitude.q.normalize();
  out.w += h * d.w;
  out.rho += h * d.rho;
  out.est.theta_hat += h * d.theta_hat;
  out.est.w_filt += h * d.w_filt;
  out.est.filter_gain += h * d.filter_gain;
  out.est.delta_lp += h * d.delta_lp;
  out.est.w_lp += h * d.w_lp;
  return out;
}

bool Simulator::finite(const State& s) {
  return s.attitude.q.coeffs().allFinite() && s.w.allFinite() &&
         std::isfinite(s.rho) && s.est.theta_hat.allFinite() &&
         s.est.w_filt.allFinite() && std::isfinite(s.est.filter_gain) &&
         std::isfinite(s.est.delta_lp) && s.est.w_lp.allFinite();
}

namespace {

void combine(Simulator::State& s, const Vec4& q, const Vec3& w, double rho,
             const Vec3& theta_hat, const Vec3& w_filt, double filter_gain,
             double delta_lp, const Vec3& w_lp, double h6, double* norm_error) {
  s.attitude.q.coeffs() += h6 * q;
  *norm_error = std::abs(s.attitude.q.norm() - 1.0);
  s.attitude.renormalize();
  s.w += h6 * w;
  s.rho += h6 * rho;
  s.est.theta_hat += h6 * theta_hat;
  s.est.w_filt += h6 * w_filt;
  s.est.filter_gain += h6 * filter_gain;
  s.est.delta_lp += h6 * delta_lp;
  s.est.w_lp += h6 * w_lp;
}

}  // namespace

void Simulator::step(double t, State& s) {
  const Derivative d1 = derivative(t, s, stage_frames_[0]);
  advance(t, s, d1);
}

void Simulator::advance(double t, State& s, const Derivative& d1) {
  const double dt = config_.dt;
  const double h2 = 0.5 * dt;
  const Derivative d2 = derivative(t + h2, advanced(s, d1, h2), stage_frames_[1]);
  const Derivative d3 = derivative(t + h2, advanced(s, d2, h2), stage_frames_[2]);
  const Derivative d4 = derivative(t + dt, advanced(s, d3, dt), stage_frames_[3]);

  combine(s, d1.q + 2.0 * d2.q + 2.0 * d3.q + d4.q,
          d1.w + 2.0 * d2.w + 2.0 * d3.w + d4.w,
          d1.rho + 2.0 * d2.rho + 2.0 * d3.rho + d4.rho,
          d1.theta_hat + 2.0 * d2.theta_hat + 2.0 * d3.theta_hat + d4.theta_hat,
          d1.w_filt + 2.0 * d2.w_filt + 2.0 * d3.w_filt + d4.w_filt,
          d1.filter_gain + 2.0 * d2.filter_gain + 2.0 * d3.filter_gain + d4.filter_gain,
          d1.delta_lp + 2.0 * d2.delta_lp + 2.0 * d3.delta_lp + d4.delta_lp,
          d1.w_lp + 2.0 * d2.w_lp + 2.0 * d3.w_lp + d4.w_lp, dt / 6.0,
          &last_norm_error_);

  if (!finite(s)) {
    throw Error(ErrorCode::NonFiniteState, "state diverged during integration");
  }
}

RunResult Simulator::run() {
  config_.validate();

  RunResult result;
  RunSummary& summary = result.summary;
  State s = initial_state();

  const double dt = config_.dt;
  const long n_steps = std::lround(config_.t_final / dt);
  const double window_start = std::max(0.0, config_.t_final - config_.terminal_window);
  const Vec3 theta_true = config_.plant.inertia_diag;

  double terminal_sum = 0.0;
  long terminal_count = 0;
  double early_sq_sum = 0.0;
  long early_count = 0;
  double late_sq_sum = 0.0;
  long late_count = 0;
  summary.min_zone_margin = std::numeric_limits<double>::infinity();
  summary.min_rho = std::numeric_limits<double>::infinity();

  bool in_freeze = false;
  FreezeInterval interval;

  const auto close_interval = [&](double t_end) {
    interval.end = t_end;
    summary.freeze_intervals.push_back(interval);
    in_freeze = false;
  };

  for (long k = 0; k <= n_steps; ++k) {
    const double t = k * dt;
    ControlFrame& frame = stage_frames_[0];

    try {
      evaluate_control(s.attitude, s.w, s.rho, s.est, layout_, frame);
    } catch (const Error& e) {
      summary.first_violation = Violation{t, e.code(), e.what()};
      if (in_freeze) close_interval(t);
      break;
    }

    // run statistics, at integration resolution
    summary.max_abs_rate_dps =
        std::max(summary.max_abs_rate_dps,
                 s.w.cwiseAbs().maxCoeff() * 180.0 / 3.14159265358979323846);
    summary.max_eps = std::max(summary.max_eps, frame.error.eps);
    summary.min_rho = std::min(summary.min_rho, s.rho);
    for (std::size_t n = 0; n < layout_.zones.size(); ++n) {
      summary.min_zone_margin =
          std::min(summary.min_zone_margin,
                   layout_.zones[n].boundary() - frame.zone_cos[n]);
    }
    if (t >= window_start) {
      terminal_sum += frame.x_e;
      ++terminal_count;
    }
    const double residual =
        (frame.regression.total * (frame.theta_eff - theta_true)).norm();
    if (t < 10.0) {
      early_sq_sum += residual * residual;
      ++early_count;
    }
    if (t >= window_start) {
      late_sq_sum += residual * residual;
      ++late_count;
    }
    summary.max_theta_err =
        std::max(summary.max_theta_err, (frame.theta_eff - theta_true).norm());

    // freeze bookkeeping
    if (frame.freeze >= 1.0) {
      if (!in_freeze) {
        in_freeze = true;
        interval = FreezeInterval{t, t, frame.error.eps, 0.0};
      } else {
        const double ref = std::max(std::abs(interval.eps_ref), 1e-300);
        interval.eps_drift = std::max(
            interval.eps_drift, std::abs(frame.error.eps - interval.eps_ref) / ref);
      }
    } else if (in_freeze) {
      close_interval(t);
    }

    if (k % config_.output_decimation == 0 || k == n_steps) {
      TelemetryRecord rec;
      rec.t = t;
      rec.x_e = frame.x_e;
      rec.theta_deg = std::acos(std::clamp(1.0 - frame.x_e, -1.0, 1.0)) * 180.0 /
                      3.14159265358979323846;
      rec.eps = frame.error.eps;
      rec.rho = s.rho;
      rec.freeze_raw = frame.freeze_raw;
      rec.freeze = frame.freeze;
      rec.w = s.w;
      rec.u = saturate_torque(frame.torque, config_.plant.torque_limit);
      rec.zone_cos = frame.zone_cos;
      rec.theta_eff = frame.theta_eff;
      rec.filter_gain = s.est.filter_gain;
      rec.filter_error = frame.filter_error;
      rec.v_rate_barrier = frame.barrier.value;
      rec.v_blf = frame.blf;
      rec.boresight_inertial = frame.boresight_inertial;
      result.telemetry.push_back(std::move(rec));
    }

    if (k == n_steps) {
      if (in_freeze) close_interval(t);
      summary.final_xe = frame.x_e;
      break;
    }

    try {
      advance(t, s, derivative_from_frame(t, s, frame));
      summary.max_quat_norm_error =
          std::max(summary.max_quat_norm_error, last_norm_error_);
    } catch (const Error& e) {
      summary.first_violation = Violation{t, e.code(), e.what()};
      if (in_freeze) close_interval(t);
      break;
    }
  }

  summary.pass = !summary.first_violation.has_value();
  if (terminal_count > 0) {
    summary.terminal_accuracy_xe = terminal_sum / static_cast<double>(terminal_count);
    summary.terminal_accuracy_deg =
        std::acos(std::clamp(1.0 - summary.terminal_accuracy_xe, -1.0, 1.0)) *
        180.0 / 3.14159265358979323846;
  }
  if (early_count > 0) {
    summary.estimation_residual_early =
        std::sqrt(early_sq_sum / static_cast<double>(early_count));
  }
  if (late_count > 0) {
    summary.estimation_residual_late =
        std::sqrt(late_sq_sum / static_cast<double>(late_count));
  }
  return result;
}

}  // namespace boresight

#include "boresight/adaptive_controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boresight/errors.hpp"

namespace boresight {

void ControllerGains::validate() const {
  if (!(damping > 0.0 && adaptation > 0.0 && filter > 0.0 && filter_adaptation > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "controller gains must be positive");
  }
  if (!(dsc_time_constant > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "derivative-filter time constant must be positive");
  }
  if (!(rate_epsilon > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "rate gate threshold must be positive");
  }
  if (!(inertia_guess.minCoeff() > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "inertia guess must be positive");
  }
}

RegressionSet regression_set(const Vec3& w, const Vec3& w_filt, const Vec3& u_nominal) {
  RegressionSet reg;
  reg.gyro = -skew(w) * inertia_regressor(w);
  reg.gyro_filtered = -skew(w_filt) * inertia_regressor(w);
  reg.control = inertia_regressor(-u_nominal);
  reg.total = reg.gyro + reg.control;
  return reg;
}

Vec3 nominal_control(const Vec3& w, const Vec3& steering_gradient,
                     double envelope_feedback, const VelocityBarrier& barrier,
                     const ControllerGains& gains) {
  const double w_sq = w.squaredNorm();
  const bool gated = w_sq < gains.rate_epsilon * gains.rate_epsilon;
  const double denom = std::max(w_sq, gains.rate_floor * gains.rate_floor);
  Vec3 u;
  for (int i = 0; i < 3; ++i) {
    const double inv_weight = 1.0 / barrier.weight_diag[i];
    u[i] = -inv_weight * steering_gradient[i] - gains.damping * barrier.weight_diag[i] * w[i];
    if (!gated) {
      u[i] += inv_weight * envelope_feedback * w[i] / denom;
    }
  }
  return u;
}

Vec3 regulation_beta2(const Vec3& w, const Vec3& steering_gradient,
                      double envelope_feedback, const ApfGains& apf,
                      const ControllerGains& gains) {
  const double k_w = apf.rate_barrier;
  const double limit_sq = apf.rate_limit * apf.rate_limit;
  const double w_sq = w.squaredNorm();
  // The log argument is floored like the feedback quotient in the nominal
  // control; a hard gate here would step the regulation term (and with it
  // the effective estimate) every time the rate crosses the gate.
  const double log_w_sq =
      std::log(std::max(w_sq, gains.rate_floor * gains.rate_floor));

  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double wi = w[i];
    const double inv_weight = (limit_sq - wi * wi) / k_w;
    out[i] = (limit_sq * wi - wi * wi * wi / 3.0) / k_w * steering_gradient[i] -
             0.5 * gains.damping * k_w * std::log(inv_weight) +
             envelope_feedback / (2.0 * k_w) *
                 (log_w_sq * (limit_sq + w_sq - wi * wi) - wi * wi);
  }
  return out;
}

Vec3 regulation_beta1(const Vec3& w, const Vec3& w_filt) {
  return (-skew(w_filt) * inertia_regressor(w)).transpose() * w;
}

FilterRates filter_rates(const Vec3& w_filt, const Vec3& w, double filter_gain,
                         const Vec3& u_nominal, const ControllerGains& gains) {
  const Vec3 error = w_filt - w;
  return FilterRates{-(gains.filter + filter_gain) * error + u_nominal,
                     gains.filter_adaptation * error.squaredNorm()};
}

LowPassDerivative low_pass_derivative(double input, double state, double tau) {
  const double rate = (input - state) / tau;
  return LowPassDerivative{rate, rate};
}

Vec3 control_torque(const Vec3& theta_eff, const RegressionSet& reg) {
  return -reg.total * theta_eff;
}

void evaluate_control(const Attitude& attitude, const Vec3& w, double rho,
                      const EstimatorState& est, const ControlLayout& layout,
                      ControlFrame& out) {
  const ControllerGains& gains = layout.gains;
  const ApfGains& apf = layout.apf;
  const GovernorParams& gov = layout.governor;
  const Vec3& boresight = layout.boresight_body;
  const bool ppc = gains.ppc_enabled;

  // geometry
  out.boresight_inertial = attitude.to_inertial(boresight);
  out.target_body = attitude.to_body(layout.target_inertial);
  out.zone_axes_body.clear();
  out.zone_cos.clear();
  for (const ForbiddenZone& zone : layout.zones) {
    const Vec3 axis_body = attitude.to_body(zone.axis_inertial);
    out.zone_axes_body.push_back(axis_body);
    out.zone_cos.push_back(boresight.dot(axis_body));
  }
  out.x_e = std::max(0.0, pointing_error(boresight, out.target_body));
  out.alignment_axis = out.target_body.cross(boresight);
  out.xe_dot = out.alignment_axis.dot(w);

  // fields and barriers; these throw when a hard constraint is breached
  evaluate_potential(out.x_e, boresight, out.target_body, out.zone_axes_body,
                     out.zone_cos, layout.zones, apf, out.field);
  out.barrier = velocity_barrier(w, apf.rate_barrier, apf.rate_limit);

  // governor
  if (ppc) {
    out.error = transformed_error(out.x_e, rho, gov.blf_gain);
  } else {
    out.error = TransformedError{out.x_e / rho, 0.0};
  }
  evaluate_indicators(out.zone_cos, layout.zones, w, out.error.eps, rho, gov,
                      out.indicators);
  out.freeze_raw = freeze_level_raw(out.indicators, gov.softmax_sharpness);
  out.freeze = freeze_level(out.indicators, gov.softmax_sharpness);
  out.rho_dot = envelope_rate(rho, out.x_e, out.xe_dot, out.freeze, gov);
  out.envelope_feedback =
      ppc ? out.error.weight * out.rho_dot * out.error.eps / rho : 0.0;
  out.steering_gradient = out.field.gradient;
  if (ppc) {
    out.steering_gradient += (out.error.weight / rho) * out.alignment_axis;
  }
  out.blf = out.error.eps < 1.0 ? blf_value(out.error.eps, gov.blf_gain)
                                : std::numeric_limits<double>::infinity();

  // control law
  out.u_nominal = nominal_control(w, out.steering_gradient, out.envelope_feedback,
                                  out.barrier, gains);
  out.beta2 =
      regulation_beta2(w, out.steering_gradient, out.envelope_feedback, apf, gains);
  out.regression = regression_set(w, est.w_filt, out.u_nominal);
  out.beta = gains.adaptation * (regulation_beta1(w, est.w_filt) + out.beta2);
  out.theta_eff = est.theta_hat + out.beta;
  out.torque = control_torque(out.theta_eff, out.regression);

  // identification filter
  const FilterRates filt = filter_rates(est.w_filt, w, est.filter_gain,
                                        out.u_nominal, gains);
  out.w_filt_dot = filt.w_filt_dot;
  out.filter_gain_dot = filt.filter_gain_dot;
  out.filter_error = (est.w_filt - w).norm();

  // derivative estimates for the signals without measurable rates
  const double tau = gains.dsc_time_constant;
  const LowPassDerivative feedback_lp =
      low_pass_derivative(out.envelope_feedback, est.delta_lp, tau);
  out.delta_lp_dot = feedback_lp.state_dot;
  Vec3 w_rate_est;
  for (int i = 0; i < 3; ++i) {
    const LowPassDerivative lp = low_pass_derivative(w[i], est.w_lp[i], tau);
    out.w_lp_dot[i] = lp.state_dot;
    w_rate_est[i] = lp.rate_estimate;
  }

  // analytic rate of the steering gradient
  const Vec3 target_body_dot = -w.cross(out.target_body);
  const Vec3 axis_dot = target_body_dot.cross(boresight);
  const double attraction_dot = apf.attraction * out.xe_dot;
  double repulsion_sum_dot = 0.0;
  Vec3 zone_gradient_sum = Vec3::Zero();
  Vec3 zone_gradient_dot_sum = Vec3::Zero();
  for (std::size_t n = 0; n < layout.zones.size(); ++n) {
    const ZoneFieldTerm& term = out.field.zone_terms[n];
    if (!term.active) continue;
    const Vec3& axis_body = out.zone_axes_body[n];
    const Vec3 lever = axis_body.cross(boresight);
    const Vec3 lever_dot = (-w.cross(axis_body)).cross(boresight);
    const double cos_dot = -lever.dot(w);
    const double slope = layout.zones[n].secant_slope();
    const double arg_dot = slope * cos_dot;
    const double sec = term.sec_arg;
    const double tan = term.tan_arg;
    repulsion_sum_dot += apf.repulsion * sec * tan * arg_dot;
    zone_gradient_sum += term.gradient;
    zone_gradient_dot_sum +=
        -slope * (sec * (tan * tan + sec * sec) * arg_dot * lever + sec * tan * lever_dot);
  }
  Vec3 steering_gradient_dot =
      apf.attraction * (repulsion_sum_dot * out.alignment_axis +
                        out.field.repulsion_sum * axis_dot) +
      apf.repulsion * (attraction_dot * zone_gradient_sum +
                       out.field.attraction * zone_gradient_dot_sum);
  if (ppc) {
    const double eps_dot = (out.xe_dot - out.rho_dot * out.error.eps) / rho;
    const double weight_dot = out.error.weight * eps_dot / (1.0 - out.error.eps);
    steering_gradient_dot +=
        (weight_dot * out.alignment_axis + out.error.weight * axis_dot) / rho -
        (out.error.weight * out.rho_dot / (rho * rho)) * out.alignment_axis;
  }

  // adaptation: drift of the regulation term with respect to everything but w
  const double k_w = apf.rate_barrier;
  const double limit_sq = apf.rate_limit * apf.rate_limit;
  const double w_sq = w.squaredNorm();
  const double log_w_sq =
      std::log(std::max(w_sq, gains.rate_floor * gains.rate_floor));
  Vec3 beta2_drift;
  for (int i = 0; i < 3; ++i) {
    const double wi = w[i];
    const double grad_partial = (limit_sq * wi - wi * wi * wi / 3.0) / k_w;
    const double feedback_partial =
        (log_w_sq * (limit_sq + w_sq - wi * wi) - wi * wi) / (2.0 * k_w);
    beta2_drift[i] = feedback_partial * feedback_lp.rate_estimate +
                     grad_partial * steering_gradient_dot[i];
  }

  const Mat3 gyro_filtered_dot = -skew(out.w_filt_dot) * inertia_regressor(w) -
                                 skew(est.w_filt) * inertia_regressor(w_rate_est);
  out.theta_hat_dot =
      -gains.adaptation *
      (gyro_filtered_dot.transpose() * w +
       (out.regression.gyro_filtered + out.regression.control).transpose() *
           out.u_nominal +
       beta2_drift);
}

}  // namespace boresight

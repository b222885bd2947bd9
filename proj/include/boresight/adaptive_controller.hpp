#pragma once

#include <vector>

#include "boresight/attitude.hpp"
#include "boresight/envelope.hpp"
#include "boresight/potential_field.hpp"

namespace boresight {

struct ControllerGains {
  double damping = 0.05;           // rate-damping gain on the weighted rate
  double adaptation = 0.05;        // adaptation gain
  double filter = 30.0;            // identification-filter base gain [1/s]
  double filter_adaptation = 1.0;  // growth rate of the adaptive filter gain
  double dsc_time_constant = 0.01; // [s] low-pass used for derivative estimates
  double rate_epsilon = 1e-6;      // [rad/s] rest gate for the feedback quotient
  // Floor on ||w|| inside the envelope-feedback quotient and the regulation
  // log term. The raw w/||w||^2 factor is an unbounded brake near rest and
  // pins the plant there; above the floor both terms are untouched, below it
  // the quotient tapers linearly to zero and the log holds its floor value.
  double rate_floor = 0.001;       // [rad/s]
  Vec3 inertia_guess{1.5, 1.5, 1.5};  // [kg m^2] initial effective estimate
  bool ppc_enabled = true;         // false drops the envelope terms from the law

  // True when the damping and filter gains clear the 1/adaptation margin the
  // convergence analysis asks for. Informational; not enforced.
  bool adaptation_margin_satisfied() const {
    return damping > 1.0 / adaptation && filter > 1.0 / adaptation;
  }

  void validate() const;
};

// Rate/attitude estimator and derivative-filter states owned by one run.
struct EstimatorState {
  Vec3 theta_hat = Vec3::Zero();  // raw parameter estimate [kg m^2]
  Vec3 w_filt = Vec3::Zero();     // identification-filter rate [rad/s]
  double filter_gain = 0.0;       // adaptive part of the filter gain, nondecreasing
  double delta_lp = 0.0;          // low-pass tracking the envelope feedback scalar
  Vec3 w_lp = Vec3::Zero();       // low-pass tracking the body rate
};

// Expanded regression matrices. The control law is linear in the inertia
// diagonal through `total`; the filtered variant replaces the unmeasurable
// gyroscopic part.
struct RegressionSet {
  Mat3 gyro = Mat3::Zero();           // -skew(w) diag(w)
  Mat3 gyro_filtered = Mat3::Zero();  // -skew(w_filt) diag(w)
  Mat3 control = Mat3::Zero();        // diag(-u_nominal)
  Mat3 total = Mat3::Zero();          // gyro + control

  Mat3 mismatch() const { return gyro_filtered - gyro; }
};

RegressionSet regression_set(const Vec3& w, const Vec3& w_filt, const Vec3& u_nominal);

// Static nominal control term: barrier-weighted descent on the combined
// steering gradient, rate damping, and the envelope feedback term (gated to
// zero below rate_epsilon where its 1/||w||^2 factor is singular).
Vec3 nominal_control(const Vec3& w, const Vec3& steering_gradient,
                     double envelope_feedback, const VelocityBarrier& barrier,
                     const ControllerGains& gains);

// Component-wise closed-form solution of the control-part regulation PDE.
Vec3 regulation_beta2(const Vec3& w, const Vec3& steering_gradient,
                      double envelope_feedback, const ApfGains& apf,
                      const ControllerGains& gains);

// Filtered-regression regulation term: gyro_filtered^T w.
Vec3 regulation_beta1(const Vec3& w, const Vec3& w_filt);

// Identification-filter derivatives: the filtered rate chases the measured
// rate with gain filter + filter_gain, driven by the nominal control; the
// adaptive gain grows with the squared filter error.
struct FilterRates {
  Vec3 w_filt_dot;
  double filter_gain_dot;
};

FilterRates filter_rates(const Vec3& w_filt, const Vec3& w, double filter_gain,
                         const Vec3& u_nominal, const ControllerGains& gains);

// First-order low-pass derivative estimate: the filter state chases the
// input with time constant tau and (input - state)/tau estimates the input's
// derivative.
struct LowPassDerivative {
  double state_dot;
  double rate_estimate;
};

LowPassDerivative low_pass_derivative(double input, double state, double tau);

// Adaptive control torque: -total_regression * theta_eff.
Vec3 control_torque(const Vec3& theta_eff, const RegressionSet& reg);

// One full control-law evaluation at a state snapshot. Everything downstream
// of the geometry is collected here so the integrator, the telemetry writer
// and the monitors all see one consistent frame.
struct ControlFrame {
  // geometry
  Vec3 boresight_inertial = Vec3::Zero();
  Vec3 target_body = Vec3::Zero();
  Vec3 alignment_axis = Vec3::Zero();  // target_body x boresight_body
  std::vector<Vec3> zone_axes_body;
  std::vector<double> zone_cos;
  double x_e = 0.0;
  double xe_dot = 0.0;

  // potential field and barriers
  PotentialEval field;
  VelocityBarrier barrier;

  // governor
  TransformedError error;  // eps and barrier weight (weight 0 when ppc off)
  IndicatorSet indicators;
  double freeze_raw = 0.0;
  double freeze = 0.0;
  double rho_dot = 0.0;
  double envelope_feedback = 0.0;  // weight * rho_dot * eps / rho
  Vec3 steering_gradient = Vec3::Zero();
  double blf = 0.0;

  // control
  Vec3 u_nominal = Vec3::Zero();
  Vec3 beta2 = Vec3::Zero();
  Vec3 beta = Vec3::Zero();
  Vec3 theta_eff = Vec3::Zero();
  RegressionSet regression;
  Vec3 torque = Vec3::Zero();  // unsaturated command

  // estimator rates
  Vec3 w_filt_dot = Vec3::Zero();
  double filter_gain_dot = 0.0;
  Vec3 theta_hat_dot = Vec3::Zero();
  double delta_lp_dot = 0.0;
  Vec3 w_lp_dot = Vec3::Zero();
  double filter_error = 0.0;  // ||w_filt - w||
};

// Shared static description the controller needs about the scenario.
struct ControlLayout {
  Vec3 boresight_body = Vec3::UnitX();
  Vec3 target_inertial = Vec3::UnitX();
  std::vector<ForbiddenZone> zones;
  ApfGains apf;
  GovernorParams governor;
  ControllerGains gains;
};

void evaluate_control(const Attitude& attitude, const Vec3& w, double rho,
                      const EstimatorState& est, const ControlLayout& layout,
                      ControlFrame& out);

}  // namespace boresight

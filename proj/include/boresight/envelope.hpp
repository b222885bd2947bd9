#pragma once

#include <array>
#include <span>
#include <vector>

#include "boresight/attitude.hpp"
#include "boresight/envelope_switch.hpp"
#include "boresight/potential_field.hpp"

namespace boresight {

// Performance-envelope governor parameters. The envelope rho(t) decays
// exponentially toward terminal_value except while the freeze level is
// raised, when it tracks the pointing error instead so the transformed
// error holds still.
struct GovernorParams {
  double decay_rate = 0.05;          // [1/s]
  double terminal_value = 1e-4;      // asymptotic envelope
  double initial_value = 4.0;        // envelope at t0
  double blf_gain = 0.4;             // log-barrier weight on the transformed error
  double softmax_sharpness = 100.0;  // smooth-max sharpness
  double freeze_floor = 1e-12;       // pointing error below this disables the freeze branch

  SwitchSpec rate_indicator;      // argument: w_i^2, per axis
  SwitchSpec error_indicator;     // argument: transformed error
  SwitchSpec envelope_indicator;  // argument: rho; gates freezing off near terminal

  // Segment points scaled from the rate limit (0.8..0.9 of its square),
// transformed error 0.9..0.95, envelope terminal_value + 1e-3..2e-3.
  static GovernorParams defaults_for(double rate_limit);

  void validate() const;
};

// Smooth maximum of values in [0, 1]: log-sum-exp with the stated sharpness,
// computed max-shifted, clamped to 1. The unclamped value satisfies
// max < result <= max + ln(count)/sharpness.
double smooth_max_raw(std::span<const double> values, double sharpness);
double smooth_max(std::span<const double> values, double sharpness);

// All constraint-proximity switches evaluated at one state.
struct IndicatorSet {
  std::vector<double> zone;           // one per forbidden cone
  std::array<double, 3> rate{};       // per body axis
  double error = 0.0;                 // transformed-error proximity
  double envelope = 1.0;              // envelope-above-terminal guard
};

void evaluate_indicators(const std::vector<double>& zone_cos,
                         const std::vector<ForbiddenZone>& zones, const Vec3& w,
                         double eps, double rho, const GovernorParams& params,
                         IndicatorSet& out);

// Overall freeze level: envelope guard times the (clamped) smooth maximum of
// the safety indicators. Exactly 1 while any safety switch is saturated and
// the envelope guard allows freezing.
double freeze_level_raw(const IndicatorSet& ind, double sharpness);
double freeze_level(const IndicatorSet& ind, double sharpness);

// Envelope dynamics: exponential decay toward terminal_value blended with an
// error-tracking branch by the freeze level. With freeze = 1 the transformed
// error is held constant. A pointing error below freeze_floor falls back to
// the pure decay branch (the tracking quotient is singular there and the
// envelope needs no protection).
double envelope_rate(double rho, double x_e, double xe_dot, double freeze,
                     const GovernorParams& params);

// Transformed error and its barrier weight. Throws EnvelopeViolated when the
// error reaches the envelope.
struct TransformedError {
  double eps = 0.0;     // x_e / rho, in [0, 1) on the admissible set
  double weight = 0.0;  // blf_gain / (1 - eps)
};

TransformedError transformed_error(double x_e, double rho, double blf_gain);

// Barrier value blf_gain * ln(1/(1 - eps)); unbounded as eps -> 1.
double blf_value(double eps, double blf_gain);

}  // namespace boresight

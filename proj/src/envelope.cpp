#include "boresight/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "boresight/errors.hpp"

namespace boresight {

void SwitchSpec::validate() const {
  if (!(lower < upper)) {
    throw Error(ErrorCode::ConfigInvalid, "switch segment points must be ordered");
  }
  if (!(steepness > 1.0 / (upper - lower))) {
    throw Error(ErrorCode::ConfigInvalid, "switch steepness below its admissible minimum");
  }
}

double switching_function(double x, const SwitchSpec& spec) {
  if (x <= spec.lower) return 0.0;
  if (x >= spec.upper) return 1.0;
  const double width = spec.upper - spec.lower;
  const double arg = spec.steepness * width * (x - spec.midpoint()) /
                     std::sqrt((x - spec.lower) * (spec.upper - x));
  return 0.5 * (std::tanh(arg) + 1.0);
}

GovernorParams GovernorParams::defaults_for(double rate_limit) {
  GovernorParams p;
  const double limit_sq = rate_limit * rate_limit;
  p.rate_indicator = SwitchSpec::with_scale(0.8 * limit_sq, 0.9 * limit_sq);
  p.error_indicator = SwitchSpec::with_scale(0.9, 0.95);
  p.envelope_indicator =
      SwitchSpec::with_scale(p.terminal_value + 1e-3, p.terminal_value + 2e-3);
  return p;
}

void GovernorParams::validate() const {
  if (!(terminal_value > 0.0 && initial_value > terminal_value)) {
    throw Error(ErrorCode::ConfigInvalid, "envelope must start above its terminal value");
  }
  if (!(decay_rate > 0.0 && blf_gain > 0.0 && softmax_sharpness > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "governor gains must be positive");
  }
  rate_indicator.validate();
  error_indicator.validate();
  envelope_indicator.validate();
  if (!(error_indicator.upper < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid,
                "error indicator must saturate before the envelope boundary");
  }
  if (!(envelope_indicator.lower > terminal_value)) {
    throw Error(ErrorCode::ConfigInvalid,
                "envelope indicator must engage above the terminal value");
  }
}

double smooth_max_raw(std::span<const double> values, double sharpness) {
  // max-shifted, with the leading 1 factored through log1p so the result
  // stays strictly above the maximum even when the other terms are tiny
  const double top = *std::max_element(values.begin(), values.end());
  double rest = 0.0;
  bool skipped_top = false;
  for (double v : values) {
    if (!skipped_top && v == top) {
      skipped_top = true;
      continue;
    }
    rest += std::exp(sharpness * (v - top));
  }
  return top + std::log1p(rest) / sharpness;
}

double smooth_max(std::span<const double> values, double sharpness) {
  return std::min(1.0, smooth_max_raw(values, sharpness));
}

void evaluate_indicators(const std::vector<double>& zone_cos,
                         const std::vector<ForbiddenZone>& zones, const Vec3& w,
                         double eps, double rho, const GovernorParams& params,
                         IndicatorSet& out) {
  out.zone.clear();
  for (std::size_t n = 0; n < zones.size(); ++n) {
    out.zone.push_back(switching_function(zone_cos[n], zones[n].indicator));
  }
  for (int i = 0; i < 3; ++i) {
    out.rate[i] = switching_function(w[i] * w[i], params.rate_indicator);
  }
  out.error = switching_function(eps, params.error_indicator);
  out.envelope = switching_function(rho, params.envelope_indicator);
}

namespace {

double safety_softmax(const IndicatorSet& ind, double sharpness) {
  // zone + 3 rate + 1 error inputs, gathered for one log-sum-exp; same
  // log1p formulation as smooth_max_raw
  double top = ind.error;
  for (double v : ind.zone) top = std::max(top, v);
  for (double v : ind.rate) top = std::max(top, v);
  double rest = 0.0;
  bool skipped_top = false;
  const auto accumulate = [&](double v) {
    if (!skipped_top && v == top) {
      skipped_top = true;
      return;
    }
    rest += std::exp(sharpness * (v - top));
  };
  accumulate(ind.error);
  for (double v : ind.zone) accumulate(v);
  for (double v : ind.rate) accumulate(v);
  return top + std::log1p(rest) / sharpness;
}

}  // namespace

double freeze_level_raw(const IndicatorSet& ind, double sharpness) {
  return ind.envelope * safety_softmax(ind, sharpness);
}

double freeze_level(const IndicatorSet& ind, double sharpness) {
  return ind.envelope * std::min(1.0, safety_softmax(ind, sharpness));
}

double envelope_rate(double rho, double x_e, double xe_dot, double freeze,
                     const GovernorParams& params) {
  const double decay = -params.decay_rate * (rho - params.terminal_value);
  if (freeze <= 0.0) {
    return decay;
  }
  if (x_e < params.freeze_floor) {
    return decay;  // tracking quotient is singular; envelope needs no protection here
  }
  return decay * (1.0 - freeze) + (xe_dot / x_e) * rho * freeze;
}

TransformedError transformed_error(double x_e, double rho, double blf_gain) {
  const double eps = x_e / rho;
  if (!(eps < 1.0)) {
    throw Error(ErrorCode::EnvelopeViolated, "pointing error reached the envelope");
  }
  return TransformedError{eps, blf_gain / (1.0 - eps)};
}

double blf_value(double eps, double blf_gain) {
  return blf_gain * std::log(1.0 / (1.0 - eps));
}

}  // namespace boresight

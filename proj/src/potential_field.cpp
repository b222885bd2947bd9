#include "boresight/potential_field.hpp"

#include <cmath>

#include "boresight/errors.hpp"

namespace boresight {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
}  // namespace

double ForbiddenZone::secant_slope() const {
  return 0.5 * kPi / (boundary() - acting_start());
}

ForbiddenZone ForbiddenZone::from_degrees(const Vec3& axis, double min_angle_deg,
                                          double acting_margin_deg,
                                          double indicator_on_margin_deg,
                                          double indicator_full_margin_deg,
                                          double indicator_steepness_scale) {
  ForbiddenZone zone;
  zone.axis_inertial = axis.normalized();
  zone.min_angle = min_angle_deg * kDegToRad;
  zone.acting_margin = acting_margin_deg * kDegToRad;
  zone.indicator = SwitchSpec::with_scale(
      std::cos(zone.min_angle + indicator_on_margin_deg * kDegToRad),
      std::cos(zone.min_angle + indicator_full_margin_deg * kDegToRad),
      indicator_steepness_scale);
  return zone;
}

void ForbiddenZone::validate() const {
  if (std::abs(axis_inertial.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigInvalid, "forbidden-zone axis must be a unit vector");
  }
  if (!(min_angle > 0.0 && min_angle < kPi)) {
    throw Error(ErrorCode::ConfigInvalid, "forbidden-zone clearance angle out of range");
  }
  if (!(acting_margin > 0.0 && min_angle + acting_margin < kPi)) {
    throw Error(ErrorCode::ConfigInvalid, "forbidden-zone acting margin out of range");
  }
  if (!(acting_start() < boundary())) {
    throw Error(ErrorCode::ConfigInvalid, "forbidden-zone acting region is empty");
  }
  indicator.validate();
  if (!(indicator.upper < boundary())) {
    throw Error(ErrorCode::ConfigInvalid,
                "zone indicator must saturate before the cone boundary");
  }
}

void ApfGains::validate() const {
  if (!(attraction > 0.0 && repulsion > 0.0 && rate_barrier > 0.0 && rate_limit > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "potential-field gains must be positive");
  }
}

double repulsion_value(double gamma, const ForbiddenZone& zone, double k_r) {
  if (gamma >= zone.boundary()) {
    throw Error(ErrorCode::OutsideDomain, "boresight inside a forbidden cone");
  }
  if (gamma < zone.acting_start()) {
    return 1.0;
  }
  const double arg = zone.secant_slope() * gamma + zone.secant_offset();
  return k_r / std::cos(arg) + 1.0 - k_r;
}

Vec3 repulsion_gradient(double gamma, const Vec3& axis_body,
                        const Vec3& boresight_body, const ForbiddenZone& zone) {
  if (gamma >= zone.boundary()) {
    throw Error(ErrorCode::OutsideDomain, "boresight inside a forbidden cone");
  }
  if (gamma < zone.acting_start()) {
    return Vec3::Zero();
  }
  const double a = zone.secant_slope();
  const double arg = a * gamma + zone.secant_offset();
  const double sec = 1.0 / std::cos(arg);
  return -a * sec * std::tan(arg) * axis_body.cross(boresight_body);
}

void evaluate_potential(double x_e, const Vec3& boresight_body,
                        const Vec3& target_body,
                        const std::vector<Vec3>& zone_axes_body,
                        const std::vector<double>& zone_cos,
                        const std::vector<ForbiddenZone>& zones,
                        const ApfGains& gains, PotentialEval& out) {
  out.attraction = gains.attraction * x_e;
  out.repulsion_sum = 0.0;
  out.zone_terms.clear();

  Vec3 repulsion_gradient_sum = Vec3::Zero();
  for (std::size_t n = 0; n < zones.size(); ++n) {
    const ForbiddenZone& zone = zones[n];
    const double gamma = zone_cos[n];
    if (gamma >= zone.boundary()) {
      throw Error(ErrorCode::OutsideDomain, "boresight inside a forbidden cone");
    }

    ZoneFieldTerm term;
    if (gamma >= zone.acting_start()) {
      const double a = zone.secant_slope();
      const double arg = a * gamma + zone.secant_offset();
      term.sec_arg = 1.0 / std::cos(arg);
      term.tan_arg = std::tan(arg);
      term.active = true;
      term.value = gains.repulsion * term.sec_arg + 1.0 - gains.repulsion;
      term.gradient = -a * term.sec_arg * term.tan_arg *
                      zone_axes_body[n].cross(boresight_body);
    }
    out.repulsion_sum += term.value;
    repulsion_gradient_sum += term.gradient;
    out.zone_terms.push_back(term);
  }

  out.total = out.attraction * out.repulsion_sum;

  // Chain rule of U = U_a * sum(U_r^N): dU/dt = gradient . w.
  out.gradient = gains.attraction * out.repulsion_sum * target_body.cross(boresight_body) +
                 gains.repulsion * out.attraction * repulsion_gradient_sum;
}

VelocityBarrier velocity_barrier(const Vec3& w, double k_w, double rate_limit) {
  const double limit_sq = rate_limit * rate_limit;
  VelocityBarrier out;
  for (int i = 0; i < 3; ++i) {
    const double margin = limit_sq - w[i] * w[i];
    if (!(margin > 0.0)) {
      throw Error(ErrorCode::RateLimitViolated, "body rate reached its limit");
    }
    out.value += 0.5 * k_w * std::log(limit_sq / margin);
    out.weight_diag[i] = k_w / margin;
  }
  return out;
}

}  // namespace boresight

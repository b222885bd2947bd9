#pragma once

#include <vector>

#include "boresight/attitude.hpp"
#include "boresight/envelope_switch.hpp"

namespace boresight {

// One pointing-forbidden cone: a hard boundary at min_angle around the axis,
// a repulsion field acting on [min_angle, min_angle + acting_margin], and the
// segment points of its proximity switching indicator (in cos(angle) units).
struct ForbiddenZone {
  Vec3 axis_inertial = Vec3::UnitZ();  // unit vector toward the bright object
  double min_angle = 0.0;              // [rad] required clearance
  double acting_margin = 0.0;          // [rad] width of the repulsion acting region
  SwitchSpec indicator;                // argument: cos(angle to axis)

  // cos(min_angle): the boresight cosine must stay strictly below this.
  double boundary() const { return std::cos(min_angle); }
  // cos(min_angle + acting_margin): where the repulsion field starts acting.
  double acting_start() const { return std::cos(min_angle + acting_margin); }
  // Secant-argument mapping slope/offset for the acting region.
  double secant_slope() const;
  double secant_offset() const { return -secant_slope() * acting_start(); }

  static ForbiddenZone from_degrees(const Vec3& axis, double min_angle_deg,
                                    double acting_margin_deg = 10.0,
                                    double indicator_on_margin_deg = 10.0,
                                    double indicator_full_margin_deg = 5.0,
                                    double indicator_steepness_scale = 2.0);

  void validate() const;
};

struct ApfGains {
  double attraction = 2.5;     // k_a
  double repulsion = 0.5;      // k_r
  double rate_barrier = 0.03;  // k_w
  double rate_limit = 0.0524;  // [rad/s] per-axis bound M_w

  void validate() const;
};

// Repulsion field value for one zone. Equals 1 outside the acting region,
// grows without bound as gamma approaches the cone boundary, and is
// continuous at the acting-region edge. Throws OutsideDomain at or past the
// boundary.
double repulsion_value(double gamma, const ForbiddenZone& zone, double k_r);

// Gradient vector of one zone field such that d(U_r^N)/dt = k_r grad . w
// (the repulsion gain multiplies the gradient in the chain rule, so the
// vector itself does not depend on it). Zero outside the acting region and
// continuous at its edge.
Vec3 repulsion_gradient(double gamma, const Vec3& axis_body,
                        const Vec3& boresight_body, const ForbiddenZone& zone);

struct ZoneFieldTerm {
  double value = 1.0;        // U_r^N
  Vec3 gradient = Vec3::Zero();
  double sec_arg = 1.0;      // sec of the mapped acting-region argument
  double tan_arg = 0.0;      // tan of the same argument
  bool active = false;       // inside the acting region
};

// Full potential-field evaluation at one state. `gradient` satisfies
// dU/dt = gradient . w along trajectories.
struct PotentialEval {
  double attraction = 0.0;     // k_a * x_e
  double repulsion_sum = 0.0;  // sum of zone field values
  double total = 0.0;          // attraction * repulsion_sum
  Vec3 gradient = Vec3::Zero();
  std::vector<ZoneFieldTerm> zone_terms;
};

// zone_cos[N] = dot(boresight_body, axis_body[N]); all must be below their
// zone boundaries or OutsideDomain is thrown.
void evaluate_potential(double x_e, const Vec3& boresight_body,
                        const Vec3& target_body,
                        const std::vector<Vec3>& zone_axes_body,
                        const std::vector<double>& zone_cos,
                        const std::vector<ForbiddenZone>& zones,
                        const ApfGains& gains, PotentialEval& out);

// Logarithmic barrier on the per-axis body rate. value >= 0, zero only at
// rest; weight_diag is the diagonal of the associated positive-definite
// weighting matrix, d(value)/dt = w . (weight_diag o wdot). Throws
// RateLimitViolated when any |w_i| >= rate_limit.
struct VelocityBarrier {
  double value = 0.0;
  Vec3 weight_diag = Vec3::Zero();
};

VelocityBarrier velocity_barrier(const Vec3& w, double k_w, double rate_limit);

}  // namespace boresight

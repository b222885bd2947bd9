#pragma once

#include "boresight/attitude.hpp"

namespace boresight {

// Truth-model constants of the rigid spacecraft.
struct PlantParams {
  Vec3 inertia_diag{2.0, 2.9, 2.3};  // [kg m^2], principal axes
  double torque_limit = 0.05;        // [N m], per-axis actuator limit
  double disturbance_rate = 0.01;    // [rad/s], base frequency of the disturbance
  bool disturbance_enabled = true;

  // throws ConfigInvalid on non-positive inertia or torque limit
  void validate() const;
};

// Environmental disturbance torque [N m]: three independent sinusoid mixes
// with a common base frequency w_p. Bounded by 15e-3 N m per axis.
Vec3 disturbance_torque(double t, double w_p);

// Component-wise clamp to [-limit, limit]. Idempotent.
Vec3 saturate_torque(const Vec3& u, double limit);

// Euler rigid-body dynamics: wdot = J^-1 (-w x (J w) + u + d).
Vec3 body_rate_derivative(const Vec3& w, const Vec3& u, const Vec3& d,
                          const Vec3& inertia_diag);

}  // namespace boresight

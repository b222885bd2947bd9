#include "boresight/rigid_body.hpp"

#include <cmath>

#include "boresight/errors.hpp"

namespace boresight {

void PlantParams::validate() const {
  if (!(inertia_diag.minCoeff() > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "inertia diagonal must be positive");
  }
  if (!(torque_limit > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "torque limit must be positive");
  }
  if (!(disturbance_rate > 0.0)) {
    throw Error(ErrorCode::ConfigInvalid, "disturbance base rate must be positive");
  }
}

Vec3 disturbance_torque(double t, double w_p) {
  return 1e-3 * Vec3(4.0 * std::sin(3.0 * w_p * t) + 3.0 * std::cos(10.0 * w_p * t) - 4.0,
                     -1.5 * std::sin(2.0 * w_p * t) + 3.0 * std::cos(5.0 * w_p * t) + 4.0,
                     3.0 * std::sin(10.0 * w_p * t) - 8.0 * std::cos(4.0 * w_p * t) + 4.0);
}

Vec3 saturate_torque(const Vec3& u, double limit) {
  return u.cwiseMax(-limit).cwiseMin(limit);
}

Vec3 body_rate_derivative(const Vec3& w, const Vec3& u, const Vec3& d,
                          const Vec3& inertia_diag) {
  const Vec3 momentum = inertia_diag.cwiseProduct(w);
  const Vec3 torque = -w.cross(momentum) + u + d;
  return torque.cwiseQuotient(inertia_diag);
}

}  // namespace boresight

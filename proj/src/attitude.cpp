#include "boresight/attitude.hpp"

#include <cmath>

namespace boresight {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m <<    0.0, -v.z(),  v.y(),
        v.z(),    0.0, -v.x(),
       -v.y(),  v.x(),    0.0;
  return m;
}

Mat3 inertia_regressor(const Vec3& x) {
  return x.asDiagonal();
}

double pointing_error(const Vec3& boresight, const Vec3& target) {
  return 1.0 - boresight.dot(target);
}

Attitude Attitude::from_xyzw(double x, double y, double z, double w) {
  Attitude att;
  att.q = Quat(w, x, y, z);
  att.q.normalize();
  return att;
}

Vec4 quaternion_rate(const Quat& q, const Vec3& w_body) {
  const Quat w_quat(0.0, w_body.x(), w_body.y(), w_body.z());
  return 0.5 * (q * w_quat).coeffs();
}

Attitude propagate_attitude(const Attitude& att, const Vec3& w_body, double dt) {
  const double angle = w_body.norm() * dt;
  if (angle == 0.0) {
    return att;
  }
  const Vec3 axis = w_body.normalized();
  const double half = 0.5 * angle;
  const Vec3 v = std::sin(half) * axis;
  const Quat increment(std::cos(half), v.x(), v.y(), v.z());
  Attitude out;
  out.q = att.q * increment;
  out.q.normalize();
  return out;
}

}  // namespace boresight

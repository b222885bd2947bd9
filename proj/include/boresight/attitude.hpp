#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace boresight {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// Cross-product matrix: skew(v) * w == v.cross(w).
Mat3 skew(const Vec3& v);

// Factors a diagonal inertia matrix out of a product so that
// J * x == inertia_regressor(x) * theta, with theta the diagonal of J.
// Under a diagonal inertia this is simply diag(x).
Mat3 inertia_regressor(const Vec3& x);

// Pointing error 1 - cos(angle) between two unit vectors. Range [0, 2];
// 0 when aligned, 2 when anti-aligned.
double pointing_error(const Vec3& boresight, const Vec3& target);

// Body attitude stored as a unit quaternion, scalar-last [x y z w] on the
// wire. The quaternion encodes the body-to-inertial rotation, so
//   v_inertial = q * v_body
// and the DCM mapping inertial vectors into the body frame is the transpose
// of body_to_inertial(). This pairing satisfies dA/dt = -skew(w) * A for the
// inertial-to-body DCM A with w the body rate.
struct Attitude {
  Quat q = Quat::Identity();

  static Attitude identity() { return Attitude{}; }
  static Attitude from_xyzw(double x, double y, double z, double w);

  Mat3 body_to_inertial() const { return q.toRotationMatrix(); }
  Mat3 inertial_to_body() const { return q.toRotationMatrix().transpose(); }

  Vec3 to_inertial(const Vec3& v_body) const { return q * v_body; }
  Vec3 to_body(const Vec3& v_inertial) const { return q.conjugate() * v_inertial; }

  double norm_error() const { return std::abs(q.norm() - 1.0); }
  void renormalize() { q.normalize(); }
};

// Quaternion rate (coefficients [x y z w]) for a body rate w:
// qdot = 0.5 * q * (w, 0).
Vec4 quaternion_rate(const Quat& q, const Vec3& w_body);

// Advances the attitude by a constant body rate over dt using the exact
// axis-angle increment, which preserves the unit norm analytically.
// Zero rate returns the input unchanged.
Attitude propagate_attitude(const Attitude& att, const Vec3& w_body, double dt);

}  // namespace boresight

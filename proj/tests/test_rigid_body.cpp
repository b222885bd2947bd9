#include <doctest.h>

#include <cmath>

#include "boresight/errors.hpp"
#include "boresight/rigid_body.hpp"
#include "test_helpers.hpp"

using namespace boresight;
using boresight::testing::Rng;

namespace {

// test-local duplicate of the disturbance definition, kept independent of the
// library implementation
Vec3 disturbance_reference(double t, double w_p) {
  Vec3 d;
  d[0] = 1e-3 * (4.0 * std::sin(3.0 * w_p * t) + 3.0 * std::cos(10.0 * w_p * t) - 4.0);
  d[1] = 1e-3 * (-1.5 * std::sin(2.0 * w_p * t) + 3.0 * std::cos(5.0 * w_p * t) + 4.0);
  d[2] = 1e-3 * (3.0 * std::sin(10.0 * w_p * t) - 8.0 * std::cos(4.0 * w_p * t) + 4.0);
  return d;
}

}  // namespace

TEST_CASE("disturbance torque matches its closed form") {
  const Vec3 d0 = disturbance_torque(0.0, 0.01);
  CHECK(d0.x() == doctest::Approx(-1e-3).epsilon(1e-12));
  CHECK(d0.y() == doctest::Approx(7e-3).epsilon(1e-12));
  CHECK(d0.z() == doctest::Approx(-4e-3).epsilon(1e-12));

  for (int i = 0; i <= 20000; ++i) {
    const double t = 0.01 * i;  // dense sampling of [0, 200]
    CHECK(disturbance_torque(t, 0.01).cwiseAbs().maxCoeff() <= 1.5e-2);
  }

  Rng rng;
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.range(0.0, 500.0);
    CHECK((disturbance_torque(t, 0.01) - disturbance_reference(t, 0.01)).norm() == 0.0);
  }

  // all channel frequencies are integer multiples of the base rate, so the
  // signal repeats with the base period
  const double period = 2.0 * 3.14159265358979323846 / 0.01;
  for (int i = 0; i < 200; ++i) {
    const double t = rng.range(0.0, 2.0 * period);
    CHECK((disturbance_torque(t + period, 0.01) - disturbance_torque(t, 0.01)).norm() < 1e-12);
  }
}

TEST_CASE("torque saturation clamps per component") {
  const Vec3 inside(0.01, -0.02, 0.03);
  CHECK((saturate_torque(inside, 0.05) - inside).norm() == 0.0);

  const Vec3 clamped = saturate_torque(Vec3(0.2, -0.2, 0.0), 0.05);
  CHECK(clamped.x() == 0.05);
  CHECK(clamped.y() == -0.05);
  CHECK(clamped.z() == 0.0);

  Rng rng;
  for (int i = 0; i < 500; ++i) {
    const Vec3 u = rng.vec3(-1, 1);
    const Vec3 once = saturate_torque(u, 0.05);
    CHECK((saturate_torque(once, 0.05) - once).norm() == 0.0);
    CHECK(once.cwiseAbs().maxCoeff() <= 0.05);
  }
}

TEST_CASE("rigid-body rate derivative") {
  const Vec3 inertia(2.0, 2.9, 2.3);
  CHECK(body_rate_derivative(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), inertia).norm() == 0.0);

  // spin about a principal axis has no gyroscopic coupling
  CHECK(body_rate_derivative(Vec3(0.01, 0, 0), Vec3::Zero(), Vec3::Zero(), inertia).norm() == 0.0);

  // hand-evaluated gyroscopic term for a two-axis spin
  const Vec3 wdot = body_rate_derivative(Vec3(0.01, 0.02, 0), Vec3::Zero(), Vec3::Zero(), inertia);
  CHECK(wdot.x() == 0.0);
  CHECK(wdot.y() == 0.0);
  CHECK(wdot.z() == doctest::Approx(-(2.9 - 2.0) * 0.01 * 0.02 / 2.3).epsilon(1e-12));

  Rng rng;
  for (int i = 0; i < 200; ++i) {
    const Vec3 w = rng.vec3(-0.1, 0.1);
    const Vec3 u = rng.vec3(-0.05, 0.05);
    const Vec3 d = rng.vec3(-0.01, 0.01);
    const Vec3 expected =
        inertia.asDiagonal().inverse() * (-w.cross(Vec3(inertia.asDiagonal() * w)) + u + d);
    CHECK((body_rate_derivative(w, u, d, inertia) - expected).norm() < 1e-15);
  }
}

TEST_CASE("torque-free motion conserves momentum and energy") {
  // plant-only RK4, independent of the full simulation engine
  const Vec3 inertia(2.0, 2.9, 2.3);
  Attitude att = Attitude::identity();
  Vec3 w(0.05, -0.03, 0.04);
  const double dt = 1e-3;

  const auto deriv = [&](const Attitude& a, const Vec3& omega) {
    return std::make_pair(quaternion_rate(a.q, omega),
                          body_rate_derivative(omega, Vec3::Zero(), Vec3::Zero(), inertia));
  };

  const double h0 = (inertia.asDiagonal() * w).norm();
  const double e0 = w.dot(inertia.asDiagonal() * w);

  for (int i = 0; i < 10000; ++i) {
    const auto [qk1, wk1] = deriv(att, w);
    Attitude a2 = att; a2.q.coeffs() += 0.5 * dt * qk1;
    const auto [qk2, wk2] = deriv(a2, w + 0.5 * dt * wk1);
    Attitude a3 = att; a3.q.coeffs() += 0.5 * dt * qk2;
    const auto [qk3, wk3] = deriv(a3, w + 0.5 * dt * wk2);
    Attitude a4 = att; a4.q.coeffs() += dt * qk3;
    const auto [qk4, wk4] = deriv(a4, w + dt * wk3);
    att.q.coeffs() += dt / 6.0 * (qk1 + 2.0 * qk2 + 2.0 * qk3 + qk4);
    att.renormalize();
    w += dt / 6.0 * (wk1 + 2.0 * wk2 + 2.0 * wk3 + wk4);
  }

  CHECK((inertia.asDiagonal() * w).norm() == doctest::Approx(h0).epsilon(1e-8));
  CHECK(w.dot(inertia.asDiagonal() * w) == doctest::Approx(e0).epsilon(1e-8));
}

TEST_CASE("plant parameter validation") {
  PlantParams good;
  CHECK_NOTHROW(good.validate());

  PlantParams bad = good;
  bad.inertia_diag.y() = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  bad = good;
  bad.torque_limit = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

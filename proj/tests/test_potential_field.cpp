#include <doctest.h>

#include <cmath>

#include "boresight/errors.hpp"
#include "boresight/potential_field.hpp"
#include "test_helpers.hpp"

using namespace boresight;
using boresight::testing::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

ForbiddenZone paper_zone(const Vec3& axis) {
  return ForbiddenZone::from_degrees(axis, 20.0);
}

// Evaluates the full potential at one attitude snapshot.
double potential_at(const Attitude& att, const Vec3& boresight, const Vec3& target,
                    const std::vector<ForbiddenZone>& zones, const ApfGains& gains) {
  std::vector<Vec3> axes;
  std::vector<double> cosines;
  for (const ForbiddenZone& zone : zones) {
    axes.push_back(att.to_body(zone.axis_inertial));
    cosines.push_back(boresight.dot(axes.back()));
  }
  const Vec3 r_b = att.to_body(target);
  PotentialEval eval;
  evaluate_potential(pointing_error(boresight, r_b), boresight, r_b, axes, cosines,
                     zones, gains, eval);
  return eval.total;
}

}  // namespace

TEST_CASE("forbidden-zone geometry") {
  const ForbiddenZone zone = paper_zone(Vec3::UnitZ());
  CHECK(zone.boundary() == doctest::Approx(std::cos(20.0 * kPi / 180.0)));
  CHECK(zone.acting_start() == doctest::Approx(std::cos(30.0 * kPi / 180.0)));
  CHECK(zone.acting_start() < zone.boundary());
  CHECK(zone.secant_slope() > 0.0);
  // mapped argument spans [0, pi/2) over the acting region
  CHECK(zone.secant_slope() * zone.acting_start() + zone.secant_offset() ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zone.secant_slope() * zone.boundary() + zone.secant_offset() ==
        doctest::Approx(0.5 * kPi).epsilon(1e-12));
  CHECK_NOTHROW(zone.validate());
}

TEST_CASE("repulsion value: branches, continuity, monotonicity, blowup") {
  const ForbiddenZone zone = paper_zone(Vec3::UnitZ());
  const double k_r = 0.5;
  const double p0 = zone.acting_start();
  const double p1 = zone.boundary();

  CHECK(repulsion_value(-1.0, zone, k_r) == 1.0);
  CHECK(repulsion_value(p0 - 1e-6, zone, k_r) == 1.0);
  CHECK(repulsion_value(p0, zone, k_r) == doctest::Approx(1.0).epsilon(1e-12));

  // analytic midpoint: mapped argument is pi/4
  CHECK(repulsion_value(0.5 * (p0 + p1), zone, k_r) ==
        doctest::Approx(0.5 * std::sqrt(2.0) + 0.5).epsilon(1e-12));

  double prev = 1.0;
  for (int i = 1; i < 2000; ++i) {
    const double gamma = p0 + (p1 - p0) * i / 2000.0;
    const double value = repulsion_value(gamma, zone, k_r);
    CHECK(value >= prev);
    prev = value;
  }
  CHECK(prev > 100.0);  // grows without bound toward the cone

  CHECK_THROWS_AS(repulsion_value(p1, zone, k_r), Error);
  CHECK_THROWS_AS(repulsion_value(0.99, zone, k_r), Error);
}

TEST_CASE("repulsion gradient: acting region and chain rule") {
  const ForbiddenZone zone = paper_zone(Vec3::UnitY());
  const double k_r = 0.5;
  Rng rng;

  // zero outside the acting region and continuous at its edge
  const Vec3 axis_body = Vec3::UnitY();
  const Vec3 boresight = Vec3::UnitX();
  CHECK(repulsion_gradient(0.0, axis_body, boresight, zone).norm() == 0.0);
  CHECK(repulsion_gradient(zone.acting_start(), axis_body, boresight, zone).norm() ==
        doctest::Approx(0.0).epsilon(1e-12));

  // d(U_r)/dt along a rigid-body trajectory equals k_r * gradient . w
  int tested = 0;
  while (tested < 100) {
    const Attitude att = rng.attitude();
    const Vec3 f_b = att.to_body(zone.axis_inertial);
    const double gamma = boresight.dot(f_b);
    if (gamma < zone.acting_start() + 1e-3 || gamma > zone.boundary() - 2e-3) continue;
    const Vec3 w = rng.vec3(-0.05, 0.05);

    const double h = 1e-5;
    const auto value_at = [&](double s) {
      const Attitude moved = propagate_attitude(att, w, s);
      return repulsion_value(boresight.dot(moved.to_body(zone.axis_inertial)), zone, k_r);
    };
    const double fd = (value_at(h) - value_at(-h)) / (2.0 * h);
    const double analytic = k_r * repulsion_gradient(gamma, f_b, boresight, zone).dot(w);
    if (std::abs(fd) < 1e-9) continue;
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
    ++tested;
  }
}

TEST_CASE("combined gradient at the equilibrium and in closed form") {
  const ApfGains gains;
  std::vector<ForbiddenZone> zones = {paper_zone(Vec3::UnitZ())};

  // aligned boresight, inactive zone: gradient vanishes exactly
  {
    const Vec3 b = Vec3::UnitX();
    std::vector<Vec3> axes = {Vec3::UnitZ()};
    std::vector<double> cosines = {0.0};
    PotentialEval eval;
    evaluate_potential(0.0, b, b, axes, cosines, zones, gains, eval);
    CHECK(eval.gradient.norm() == 0.0);
    CHECK(eval.total == 0.0);
  }

  // single inactive zone: pure attraction, magnitude k_a sin(theta)
  {
    const Vec3 b = Vec3::UnitX();
    const Vec3 target = Vec3(-0.8617, 0.4975, -0.0995).normalized();
    std::vector<Vec3> axes = {Vec3::UnitZ()};
    std::vector<double> cosines = {0.0};
    PotentialEval eval;
    evaluate_potential(pointing_error(b, target), b, target, axes, cosines, zones,
                       gains, eval);
    const double sin_theta = target.cross(b).norm();
    CHECK((eval.gradient - gains.attraction * target.cross(b)).norm() < 1e-12);
    CHECK(eval.gradient.norm() == doctest::Approx(2.5 * sin_theta).epsilon(1e-12));
  }
}

TEST_CASE("combined gradient matches dU/dt along trajectories") {
  const ApfGains gains;
  const std::vector<ForbiddenZone> zones = {
      paper_zone(Vec3(0.5715, 0.8165, 0.0816)),
      paper_zone(Vec3(-0.3369, 0.8422, -0.4211))};
  const Vec3 boresight = Vec3::UnitX();
  const Vec3 target = Vec3(-0.8617, 0.4975, -0.0995).normalized();

  Rng rng;
  int tested = 0;
  while (tested < 100) {
    const Attitude att = rng.attitude();
    std::vector<Vec3> axes;
    std::vector<double> cosines;
    bool admissible = true;
    for (const ForbiddenZone& zone : zones) {
      axes.push_back(att.to_body(zone.axis_inertial));
      cosines.push_back(boresight.dot(axes.back()));
      // keep clear of the boundary and of the acting-region edge, where the
      // field is only C0 and a finite difference straddles the kink
      if (cosines.back() > zone.boundary() - 3e-3 ||
          std::abs(cosines.back() - zone.acting_start()) < 3e-3) {
        admissible = false;
      }
    }
    if (!admissible) continue;

    const Vec3 r_b = att.to_body(target);
    const Vec3 w = rng.vec3(-0.05, 0.05);
    PotentialEval eval;
    evaluate_potential(pointing_error(boresight, r_b), boresight, r_b, axes, cosines,
                       zones, gains, eval);
    const double analytic = eval.gradient.dot(w);

    // Richardson-extrapolated central difference along the flow
    const auto central = [&](double h) {
      return (potential_at(propagate_attitude(att, w, h), boresight, target, zones,
                           gains) -
              potential_at(propagate_attitude(att, w, -h), boresight, target, zones,
                           gains)) /
             (2.0 * h);
    };
    const double fd = (4.0 * central(1e-4) - central(2e-4)) / 3.0;
    // skip states whose directional derivative is too small to resolve
    if (std::abs(fd) < 1e-4) continue;
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
    ++tested;
  }
}

TEST_CASE("velocity barrier value, weights and blowup") {
  const double k_w = 0.03;
  const double limit = 0.0524;

  const VelocityBarrier rest = velocity_barrier(Vec3::Zero(), k_w, limit);
  CHECK(rest.value == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(rest.weight_diag[i] == doctest::Approx(k_w / (limit * limit)).epsilon(1e-12));
    CHECK(rest.weight_diag[i] == doctest::Approx(10.925937).epsilon(1e-6));
  }

  // weights never drop below the rest value on the admissible set
  Rng rng;
  for (int i = 0; i < 500; ++i) {
    const Vec3 w = rng.vec3(-0.05, 0.05);
    const VelocityBarrier barrier = velocity_barrier(w, k_w, limit);
    CHECK(barrier.value >= 0.0);
    CHECK(barrier.weight_diag.minCoeff() >= k_w / (limit * limit) - 1e-15);
    if (w.norm() > 1e-6) CHECK(barrier.value > 0.0);
  }

  CHECK_THROWS_AS(velocity_barrier(Vec3(limit, 0, 0), k_w, limit), Error);
  CHECK_THROWS_AS(velocity_barrier(Vec3(0, -0.06, 0), k_w, limit), Error);

  // dV/dt along a rate trajectory equals w . (weights o wdot)
  for (int i = 0; i < 100; ++i) {
    const Vec3 w = rng.vec3(-0.04, 0.04);
    const Vec3 wdot = rng.vec3(-0.02, 0.02);
    const double h = 1e-6;
    const double fd = (velocity_barrier(w + h * wdot, k_w, limit).value -
                       velocity_barrier(w - h * wdot, k_w, limit).value) /
                      (2.0 * h);
    const double analytic =
        w.dot(velocity_barrier(w, k_w, limit).weight_diag.cwiseProduct(wdot));
    if (std::abs(fd) < 1e-10) continue;
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("potential evaluation rejects a violated cone") {
  const ApfGains gains;
  const std::vector<ForbiddenZone> zones = {paper_zone(Vec3::UnitX())};
  const Vec3 b = Vec3::UnitX();
  std::vector<Vec3> axes = {Vec3::UnitX()};
  std::vector<double> cosines = {1.0};
  PotentialEval eval;
  CHECK_THROWS_AS(
      evaluate_potential(0.5, b, Vec3::UnitY(), axes, cosines, zones, gains, eval),
      Error);
}

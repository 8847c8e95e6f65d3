#include "posespace/errors.hpp"
#include "posespace/metric.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace posespace;
using fixtures::analytic_models;

namespace {

double
floor_of(const ObjectModel& model)
{
  return 1e-9 * model.lambda_frobenius();
}

RigidTransform
random_frame(const ObjectModel& model, std::mt19937_64& rng)
{
  Pose f = fixtures::random_pose(model, rng, 5.0);
  return f.transform();
}

} // namespace

TEST_CASE("distance to itself and to symmetric copies is zero")
{
  std::mt19937_64 rng(1);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      Pose p = fixtures::random_pose(model, rng);
      CHECK(distance(model, p, p) == 0.0);
      Pose q = p.right_composed(fixtures::random_symmetry(model, rng));
      CHECK(distance(model, p, q) < 1e-12);
    }
  }
}

TEST_CASE("pure translation has length |t|")
{
  std::mt19937_64 rng(2);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    for (int i = 0; i < 50; ++i) {
      Pose p = fixtures::random_pose(model, rng);
      Vec3 t = fixtures::random_pose(model, rng).translation();
      Pose q(p.rotation(), p.translation() + t);
      CHECK(std::abs(distance(model, p, q) - t.norm()) < 1e-12);
    }
  }
}

TEST_CASE("revolution axes at an angle")
{
  auto model = analytic_models()[2].model;
  for (double theta : { 0.1, 0.7, 1.5, 3.0 }) {
    Pose a;
    Pose b(rotation_about_axis(Vec3(1, 1, 0), theta), Vec3::Zero());
    CHECK(distance(model, a, b) ==
          doctest::Approx(model.lambda() * 2.0 * std::sin(theta / 2)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms on random triples")
{
  std::mt19937_64 rng(3);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    for (int i = 0; i < 2000; ++i) {
      Pose a = fixtures::random_pose(model, rng);
      Pose b = fixtures::random_pose(model, rng);
      Pose c = fixtures::random_pose(model, rng);
      double ab = distance(model, a, b), ba = distance(model, b, a);
      double bc = distance(model, b, c), ac = distance(model, a, c);
      CHECK(ab >= 0.0);
      CHECK(std::abs(ab - ba) <= 1e-12);
      CHECK(ac <= ab + bc + 1e-9);
    }
  }
}

TEST_CASE("inertial frame invariance")
{
  std::mt19937_64 rng(4);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    for (int i = 0; i < 200; ++i) {
      Pose a = fixtures::random_pose(model, rng);
      Pose b = fixtures::random_pose(model, rng);
      RigidTransform f = random_frame(model, rng);
      double d0 = distance(model, a, b);
      double d1 = distance(model, a.left_composed(f), b.left_composed(f));
      CHECK(std::abs(d1 - d0) <= 1e-9 * std::max(d0, floor_of(model)));
    }
  }
}

TEST_CASE("proper symmetry invariance on either side")
{
  std::mt19937_64 rng(5);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    for (int i = 0; i < 200; ++i) {
      Pose a = fixtures::random_pose(model, rng);
      Pose b = fixtures::random_pose(model, rng);
      double d = distance(model, a, b);
      Pose a2 = a.right_composed(fixtures::random_symmetry(model, rng));
      Pose b2 = b.right_composed(fixtures::random_symmetry(model, rng));
      CHECK(std::abs(distance(model, a2, b) - d) < 1e-12);
      CHECK(std::abs(distance(model, a, b2) - d) < 1e-12);
    }
  }
}

TEST_CASE("closed form agrees with the surface integral")
{
  std::mt19937_64 rng(6);
  SamplingPlan plan;
  for (const auto& f : fixtures::all()) {
    CAPTURE(f.name);
    for (int i = 0; i < 10; ++i) {
      Pose a = fixtures::random_pose(f.model, rng);
      Pose b = fixtures::random_pose(f.model, rng);
      plan.seed = rng();
      double d = distance(f.model, a, b);
      double o = fixtures::oracle(f, a, b, plan);
      CHECK(std::abs(d - o) / std::max(d, floor_of(f.model)) < 0.01);
    }
  }
}

TEST_CASE("oracle with a pure translation and with identical poses")
{
  std::mt19937_64 rng(7);
  for (const auto& f : fixtures::all()) {
    CAPTURE(f.name);
    Pose a = fixtures::random_pose(f.model, rng);
    Vec3 t = fixtures::random_pose(f.model, rng).translation();
    Pose b(a.rotation(), a.translation() + t);
    CHECK(std::abs(fixtures::oracle(f, a, b) - t.norm()) < 1e-3 * t.norm());
    CHECK(fixtures::oracle(f, a, a) < 1e-9);
  }
}

TEST_CASE("oracle moment form equals the pointwise sum")
{
  std::mt19937_64 rng(8);
  SamplingPlan fast;
  fast.surface_samples = 2000;
  fast.symmetry_steps = 90;
  fast.seed = 42;
  SamplingPlan slow = fast;
  slow.pointwise = true;
  for (const auto& f : fixtures::all()) {
    CAPTURE(f.name);
    Pose a = fixtures::random_pose(f.model, rng);
    Pose b = fixtures::random_pose(f.model, rng);
    double x = fixtures::oracle(f, a, b, fast);
    double y = fixtures::oracle(f, a, b, slow);
    CHECK(std::abs(x - y) <= 1e-9 * std::max(1.0, y));
  }
}

TEST_CASE("rotation displacement")
{
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);

  auto none = analytic_models()[0].model;
  CHECK(rotation_displacement(none, Vec3::UnitX(), 0.0) == 0.0);
  const Mat3& l = none.lambda_matrix();
  for (int i = 0; i < 100; ++i) {
    Vec3 k = Vec3(g(rng), g(rng), g(rng)).normalized();
    double theta = u(rng);
    double ik = (l * l).trace() - k.dot(l * l * k);
    double expect = 2.0 * std::sqrt(ik) * std::sin(theta / 2);
    CHECK(std::abs(rotation_displacement(none, k, theta) - expect) < 1e-12);
    Pose rotated(rotation_about_axis(k, theta), Vec3::Zero());
    CHECK(std::abs(distance(none, Pose(), rotated) - expect) < 1e-9);
  }

  double lam = 0.7;
  auto iso = ObjectModel::from_lambda(Symmetry::none3d(), lam * Mat3::Identity());
  Vec3 k = Vec3(1, 2, 3).normalized();
  CHECK(rotation_displacement(iso, k, 0.5) ==
        doctest::Approx(2 * lam * std::sqrt(2.0) * std::sin(0.25)).epsilon(1e-14));

  auto c3 = analytic_models()[4].model;
  double lr = c3.lambda_r();
  CHECK(rotation_displacement(c3, Vec3::UnitZ(), 0.5) ==
        doctest::Approx(2 * std::sqrt(2.0) * lr * std::sin(0.25)).epsilon(1e-14));
  // Below the first fold the symmetry does not help.
  Pose small(rotation_z(0.5), Vec3::Zero());
  CHECK(distance(c3, Pose(), small) ==
        doctest::Approx(rotation_displacement(c3, Vec3::UnitZ(), 0.5)).epsilon(1e-12));
  // A full fold is free under the group, not in the single transformation.
  Pose fold(rotation_z(2 * std::numbers::pi / 3), Vec3::Zero());
  CHECK(distance(c3, Pose(), fold) < 1e-12);
  CHECK(rotation_displacement(c3, Vec3::UnitZ(), 2 * std::numbers::pi / 3) > 0.1);

  CHECK_THROWS_AS(rotation_displacement(none, Vec3(1, 1, 0), 0.1), Error);
  CHECK_THROWS_AS(rotation_displacement(analytic_models()[2].model, Vec3::UnitX(), 0.1),
                  Error);
}

TEST_CASE("small angle matches the Riemannian length")
{
  double lam = 1.3;
  auto iso = ObjectModel::from_lambda(Symmetry::none3d(), lam * Mat3::Identity());
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double theta : { 1e-3, 1e-4, 1e-6 }) {
    Vec3 k = Vec3(g(rng), g(rng), g(rng)).normalized();
    Pose p(rotation_about_axis(k, theta), Vec3::Zero());
    double ratio = distance(iso, Pose(), p) / (std::sqrt(2.0) * lam * theta);
    CHECK(ratio >= 1.0 - 1e-3);
    CHECK(ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("se3 baseline distance")
{
  RigidTransform id;
  CHECK(se3_baseline_distance(id, id, 0.5) == 0.0);
  RigidTransform t(Mat3::Identity(), Vec3(3, 4, 0));
  CHECK(se3_baseline_distance(id, t, 0.5) == doctest::Approx(5.0));
  double alpha = 1.1, r = 0.4;
  RigidTransform rot(rotation_about_axis(Vec3(0, 1, 1), alpha), Vec3::Zero());
  CHECK(se3_baseline_distance(id, rot, r) ==
        doctest::Approx(r * 2 * std::sqrt(2.0) * std::abs(std::sin(alpha / 2))).epsilon(1e-13));
  CHECK_THROWS_AS(se3_baseline_distance(id, rot, 0.0), Error);
  CHECK_THROWS_AS(se3_baseline_distance(id, rot, -1.0), Error);

  auto none = analytic_models()[0].model;
  // sqrt((0.81 + 0.36 + 0.09) / 3)
  CHECK(se3_default_scale(none) == doctest::Approx(std::sqrt(1.26 / 3.0)).epsilon(1e-14));

  std::mt19937_64 rng(11);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    double scale = se3_default_scale(model);
    auto base = se3_baseline_model(model, scale);
    CHECK(base.representative_count() == 1);
    for (int i = 0; i < 50; ++i) {
      Pose a = fixtures::random_pose(model, rng);
      Pose b = fixtures::random_pose(model, rng);
      double expect = se3_baseline_distance(a.transform(), b.transform(), scale);
      CHECK(std::abs(distance(base, a, b) - expect) < 1e-12);
    }
  }
}

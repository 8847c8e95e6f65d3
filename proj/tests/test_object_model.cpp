#include "posespace/errors.hpp"
#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"
#include "posespace/shapes.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace posespace;

TEST_CASE("finite group validation")
{
  auto c3 = cyclic_group(Vec3::UnitZ(), 3);
  CHECK(c3.order() == 3);
  CHECK(c3.elements().front().isIdentity(0.0));
  CHECK(octahedral_group().order() == 24);
  CHECK(dihedral_group(4).order() == 8);

  // Duplicates are merged and the identity is added.
  std::vector<Mat3> twice{ rotation_z(std::numbers::pi), rotation_z(std::numbers::pi) };
  CHECK(validate_symmetry_group(twice).order() == 2);

  std::vector<Mat3> open{ rotation_z(1.0) };
  CHECK_THROWS_AS(validate_symmetry_group(open), Error);
  try {
    validate_symmetry_group(open);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAGroup);
  }
}

TEST_CASE("group closure from generators")
{
  std::vector<Mat3> gens{ rotation_z(2.0 * std::numbers::pi / 3.0) };
  CHECK(group_closure(gens).order() == 3);

  std::vector<Mat3> two{ rotation_z(std::numbers::pi / 2.0),
                         rotation_about_axis(Vec3::UnitX(), std::numbers::pi / 2.0) };
  CHECK(group_closure(two).order() == 24);

  std::vector<Mat3> irrational{ rotation_z(1.0) };
  CHECK_THROWS_AS(group_closure(irrational), Error);
}

TEST_CASE("separation T for each class")
{
  const double lr = 0.7, lz = 1.3;
  Mat3 diag = Vec3(lr, lr, lz).asDiagonal();

  // Order-3 cyclic: T = sqrt(6) lambda_r.
  auto c3 = ObjectModel::from_lambda(
    Symmetry::finite(cyclic_group(Vec3::UnitZ(), 3)), diag);
  CHECK(std::abs(c3.separation() - std::sqrt(6.0) * lr) < 1e-12);

  // Order-n cyclic about z: T = 2 sqrt(2) lambda_r sin(pi / n).
  for (int n : { 2, 4, 5, 7 }) {
    auto cn = ObjectModel::from_lambda(
      Symmetry::finite(cyclic_group(Vec3::UnitZ(), n)), diag);
    CHECK(std::abs(cn.separation() -
                   2.0 * std::sqrt(2.0) * lr * std::sin(std::numbers::pi / n)) <
          1e-12);
  }

  // Rotoreflection: the two representatives are +-lambda R e_z.
  auto roto = ObjectModel::from_lambda(Symmetry::revolution(true), diag);
  CHECK(std::abs(roto.lambda() - std::hypot(lr, lz)) < 1e-15);
  CHECK(std::abs(roto.separation() - 2.0 * roto.lambda()) < 1e-12);

  // Planar cyclic order n: |lambda| |1 - e^{2 i pi / n}|.
  Mat3 planar = Mat3::Zero();
  planar(0, 0) = planar(1, 1) = 0.9;
  auto star = ObjectModel::from_lambda(Symmetry::cyclic2d(5), planar);
  CHECK(std::abs(star.separation() -
                 2.0 * star.lambda() * std::sin(std::numbers::pi / 5.0)) < 1e-12);

  for (const auto& sym : { Symmetry::none3d(), Symmetry::revolution(false) })
    CHECK(std::isinf(ObjectModel::from_lambda(sym, diag).separation()));
  CHECK(std::isinf(
    ObjectModel::from_lambda(Symmetry::spherical(), Mat3::Identity()).separation()));
}

TEST_CASE("analytic Lambda must match the declared symmetry")
{
  Mat3 aniso = Vec3(0.5, 0.7, 1.0).asDiagonal();
  CHECK_THROWS_AS(ObjectModel::from_lambda(Symmetry::spherical(), aniso), Error);
  CHECK_THROWS_AS(ObjectModel::from_lambda(Symmetry::revolution(false), aniso), Error);
  CHECK_THROWS_AS(
    ObjectModel::from_lambda(Symmetry::finite(cyclic_group(Vec3::UnitZ(), 3)), aniso),
    Error);
  CHECK_NOTHROW(ObjectModel::from_lambda(Symmetry::none3d(), aniso));
  // Order 2 about z allows an anisotropic xy block.
  CHECK_NOTHROW(ObjectModel::from_lambda(
    Symmetry::finite(cyclic_group(Vec3::UnitZ(), 2)), aniso));
}

TEST_CASE("sqrt covariance")
{
  Mat3 c;
  c << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  Mat3 l = sqrt_covariance(c);
  CHECK((l * l - c).norm() < 1e-12);
  CHECK((l - l.transpose()).norm() < 1e-15);

  Mat3 neg = -Mat3::Identity();
  CHECK_THROWS_AS(sqrt_covariance(neg), Error);
  Mat3 asym = Mat3::Identity();
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(sqrt_covariance(asym), Error);
}

TEST_CASE("sphere mesh gives an isotropic Lambda of r / sqrt(3)")
{
  auto m = canonicalize_frame(icosphere(2.0, 4), Symmetry::spherical());
  double expect = 2.0 / std::sqrt(3.0);
  CHECK((m.lambda_matrix() - expect * Mat3::Identity()).norm() / expect < 0.005);
  CHECK(m.symmetry_residual() < 1e-9);
}

TEST_CASE("closed cylinder Lambda matches the analytic covariance")
{
  const double a = 0.5, h = 2.0;
  auto m = canonicalize_frame(cylinder(a, h, 256), Symmetry::revolution(true));
  double side = 2.0 * std::numbers::pi * a * h;
  double caps = 2.0 * std::numbers::pi * a * a;
  double sx = (side * a * a / 2.0 + caps * a * a / 4.0) / (side + caps);
  double sz = (side * h * h / 12.0 + caps * h * h / 4.0) / (side + caps);
  CHECK(std::abs(m.lambda_r() - std::sqrt(sx)) / std::sqrt(sx) < 0.005);
  CHECK(std::abs(m.lambda_z() - std::sqrt(sz)) / std::sqrt(sz) < 0.005);
  CHECK(std::abs(m.surface_area() - (side + caps)) / (side + caps) < 0.005);
}

TEST_CASE("canonical frame is independent of the mesh placement")
{
  std::mt19937_64 rng(5);
  for (auto make : { fixtures::cone_shape, fixtures::blob, fixtures::rocket_shape }) {
    auto f = make();
    const auto& mesh = std::get<TriangleMesh>(f.mesh);
    RigidTransform move(fixtures::random_rotation(rng), Vec3(3, -2, 1));
    Symmetry sym = f.model.symmetry();
    if (sym.kind == SymmetryClass::Finite)
      sym.group = sym.group.conjugated(move.rotation);
    auto moved = canonicalize_frame(mesh.transformed(move), sym);
    CAPTURE(f.name);
    auto e0 = f.model.lambda_eigenvalues(), e1 = moved.lambda_eigenvalues();
    for (std::size_t i = 0; i < e0.size(); ++i)
      CHECK(std::abs(e0[i] - e1[i]) < 1e-9);

    // The two canonical frames differ by a map fixing the centroid.
    RigidTransform between = moved.canonical_transform()
                               .compose(move)
                               .compose(f.model.canonical_transform().inverse());
    CHECK(between.translation.norm() < 1e-9);
    if (f.model.kind() == SymmetryClass::Revolution) {
      CHECK((moved.lambda_matrix() - f.model.lambda_matrix()).norm() < 1e-9);
      CHECK(std::abs(std::abs(between.rotation(2, 2)) - 1.0) < 1e-9);
    } else if (f.model.kind() == SymmetryClass::None3D) {
      // Principal axes: a signed permutation.
      Mat3 a = between.rotation.cwiseAbs();
      CHECK((a * a.transpose() - Mat3::Identity()).norm() < 1e-9);
      CHECK(std::abs(a.sum() - 3.0) < 1e-9);
    }
  }
}

TEST_CASE("revolution axis is detected from the geometry")
{
  Vec3 axis = Vec3(1, 2, -0.5).normalized();
  RigidTransform tilt(rotation_from_z(axis), Vec3(1, 1, 1));
  auto m = canonicalize_frame(cone(0.6, 1.5, 128).transformed(tilt),
                              Symmetry::revolution(false));
  Vec3 mapped = m.canonical_transform().rotation * axis;
  CHECK(std::abs(std::abs(mapped.z()) - 1.0) < 1e-9);
  CHECK(m.canonical_transform().apply(tilt.apply(Vec3::Zero())).head<2>().norm() <
        1e-9);
}

TEST_CASE("geometry contradicting the declaration is rejected")
{
  auto expect_mismatch = [](auto fn) {
    try {
      fn();
      FAIL("expected a symmetry mismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SymmetryMismatch);
    }
  };
  auto blob = perturbed_blob(1.2, 0.8, 0.5, 0.05, 7);
  expect_mismatch([&] { canonicalize_frame(blob, Symmetry::spherical()); });
  expect_mismatch([&] { canonicalize_frame(blob, Symmetry::revolution(false)); });
  auto quarter_x = cyclic_group(Vec3::UnitX(), 4);
  expect_mismatch(
    [&] { canonicalize_frame(cylinder(0.5, 2.0, 64), Symmetry::finite(quarter_x)); });

  // A looser tolerance accepts a nearly-revolution shape.
  auto squashed = icosphere(1.0, 3);
  for (auto& v : squashed.vertices) {
    v.x() *= 1.02;
    v.z() *= 1.5;
  }
  CanonicalizeOptions loose;
  loose.symmetry_tolerance = 0.05;
  CHECK_NOTHROW(canonicalize_frame(squashed, Symmetry::revolution(false), loose));
  CanonicalizeOptions strict;
  strict.symmetry_tolerance = 1e-4;
  CHECK_THROWS_AS(canonicalize_frame(squashed, Symmetry::revolution(false), strict),
                  Error);
}

TEST_CASE("declared axis point is checked against the centroid")
{
  Symmetry s = Symmetry::revolution(false, Vec3::UnitZ());
  s.axis_point = Vec3(0, 0, 5);
  CHECK_NOTHROW(canonicalize_frame(cone(0.6, 1.5, 64), s));
  s.axis_point = Vec3(0.5, 0, 0);
  CHECK_THROWS_AS(canonicalize_frame(cone(0.6, 1.5, 64), s), Error);
}

TEST_CASE("Lambda commutes with every group element")
{
  auto f = fixtures::rocket_shape();
  for (const auto& g : f.model.group().elements())
    CHECK((g * f.model.lambda_matrix() - f.model.lambda_matrix() * g).norm() < 1e-12);
  CHECK(commutation_residual(f.model.group(), f.model.lambda_matrix()) < 1e-12);
  // Order-3 symmetry forces the revolution form of Lambda.
  CHECK(std::abs(f.model.lambda_matrix()(0, 0) - f.model.lambda_matrix()(1, 1)) <
        1e-12);
}

TEST_CASE("dimension mismatch between symmetry and mesh")
{
  CHECK_THROWS_AS(canonicalize_frame(regular_polygon(5, 1.0), Symmetry::none3d()),
                  Error);
  CHECK_THROWS_AS(canonicalize_frame(cube(1.0), Symmetry::none2d()), Error);
}

TEST_CASE("planar models")
{
  auto star = fixtures::star();
  CHECK(star.model.dimension() == 2);
  CHECK(star.model.representative_count() == 3);
  CHECK(star.model.ambient_dim() == 4);
  CHECK(std::abs(star.model.lambda_matrix()(0, 0) - star.model.lambda_matrix()(1, 1)) <
        1e-12);
  auto circle = fixtures::circle();
  CHECK(circle.model.ambient_dim() == 2);
  CHECK(std::abs(circle.model.lambda_r() - std::sqrt(0.5)) < 1e-3);
  CHECK_THROWS_AS(canonicalize_frame(random_polygon(9, 3), Symmetry::circular2d()),
                  Error);
}

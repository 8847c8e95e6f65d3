#pragma once

#include "posespace/metric.hpp"
#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"
#include "posespace/shapes.hpp"

#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace fixtures {

using namespace posespace;

struct Fixture
{
  std::string name;
  ObjectModel model;
  std::variant<TriangleMesh, PolylineMesh> mesh;
};

inline Fixture
make(std::string name, TriangleMesh mesh, const Symmetry& sym)
{
  ObjectModel m = canonicalize_frame(mesh, sym);
  return { std::move(name), m, std::move(mesh) };
}

inline Fixture
make(std::string name, PolylineMesh mesh, const Symmetry& sym)
{
  ObjectModel m = canonicalize_frame(mesh, sym);
  return { std::move(name), m, std::move(mesh) };
}

inline Fixture
sphere()
{
  return make("sphere", icosphere(1.0, 3), Symmetry::spherical());
}

inline Fixture
cone_shape()
{
  return make("cone", cone(0.6, 1.5, 96), Symmetry::revolution(false));
}

inline Fixture
cylinder_shape()
{
  return make("cylinder", cylinder(0.5, 2.0, 96), Symmetry::revolution(true));
}

inline Fixture
blob()
{
  return make("blob", perturbed_blob(1.2, 0.8, 0.5, 0.05, 7), Symmetry::none3d());
}

inline Fixture
rocket_shape()
{
  return make("rocket", rocket(0.5, 2.0, 0.8),
              Symmetry::finite(cyclic_group(Vec3::UnitZ(), 3)));
}

inline Fixture
polygon()
{
  return make("polygon", random_polygon(9, 3), Symmetry::none2d());
}

inline Fixture
star()
{
  return make("star", star_polygon(3, 1.0, 0.4), Symmetry::cyclic2d(3));
}

inline Fixture
circle()
{
  return make("circle", regular_polygon(256, 1.0), Symmetry::circular2d());
}

inline std::vector<Fixture>
all_3d()
{
  return { sphere(), cone_shape(), cylinder_shape(), blob(), rocket_shape() };
}

inline std::vector<Fixture>
all_2d()
{
  return { polygon(), star(), circle() };
}

inline std::vector<Fixture>
all()
{
  auto out = all_3d();
  for (auto& f : all_2d())
    out.push_back(std::move(f));
  return out;
}

struct Analytic
{
  std::string name;
  ObjectModel model;
};

/// Models built directly from Lambda, one per symmetry class.
inline std::vector<Analytic>
analytic_models()
{
  auto diag = [](double a, double b, double c) { return Vec3(a, b, c).asDiagonal().toDenseMatrix(); };
  return {
    { "none3d", ObjectModel::from_lambda(Symmetry::none3d(), diag(0.9, 0.6, 0.3)) },
    { "spherical", ObjectModel::from_lambda(Symmetry::spherical(), diag(0.5, 0.5, 0.5)) },
    { "revolution", ObjectModel::from_lambda(Symmetry::revolution(false), diag(0.4, 0.4, 0.7)) },
    { "rotoreflection", ObjectModel::from_lambda(Symmetry::revolution(true), diag(0.3, 0.3, 0.8)) },
    { "finite-c3", ObjectModel::from_lambda(Symmetry::finite(cyclic_group(Vec3::UnitZ(), 3)), diag(0.5, 0.5, 0.9)) },
    { "finite-d2", ObjectModel::from_lambda(Symmetry::finite(dihedral_group(2)), diag(0.8, 0.5, 0.3)) },
    { "none2d", ObjectModel::from_lambda(Symmetry::none2d(), diag(0.7, 0.4, 0.0)) },
    { "cyclic2d-4", ObjectModel::from_lambda(Symmetry::cyclic2d(4), diag(0.5, 0.5, 0.0)) },
    { "circular2d", ObjectModel::from_lambda(Symmetry::circular2d(), diag(0.6, 0.6, 0.0)) },
  };
}

inline Mat3
random_rotation(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng), c = u(rng);
  return rotation_from_uniforms(a, b, c);
}

inline Pose
random_pose(const ObjectModel& model, std::mt19937_64& rng, double extent = 2.0)
{
  std::uniform_real_distribution<double> t(-extent, extent);
  if (model.dimension() == 2) {
    std::uniform_real_distribution<double> a(-std::numbers::pi, std::numbers::pi);
    double theta = a(rng);
    double x = t(rng), y = t(rng);
    return Pose::planar(theta, x, y);
  }
  Mat3 r = random_rotation(rng);
  double x = t(rng), y = t(rng), z = t(rng);
  return Pose(r, Vec3(x, y, z));
}

/// Rotation by a small random angle (at most `max_angle`) about a random axis,
/// about e_z for planar models.
inline Mat3
small_rotation(const ObjectModel& model, std::mt19937_64& rng, double max_angle)
{
  std::uniform_real_distribution<double> a(-max_angle, max_angle);
  if (model.dimension() == 2)
    return rotation_z(a(rng));
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 axis(g(rng), g(rng), g(rng));
  return rotation_about_axis(axis, a(rng));
}

/// A random proper symmetry of the model in the canonical frame.
inline Mat3
random_symmetry(const ObjectModel& model, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> a(0.0, 2.0 * std::numbers::pi);
  switch (model.kind()) {
    case SymmetryClass::Spherical:
      return random_rotation(rng);
    case SymmetryClass::Revolution:
    case SymmetryClass::Circular2D:
      return rotation_z(a(rng));
    case SymmetryClass::RevolutionRotoreflection:
      return rotation_z(a(rng)) *
             (rng() % 2 ? rotation_about_axis(Vec3::UnitX(), std::numbers::pi)
                        : Mat3::Identity());
    case SymmetryClass::Finite:
      return model.group().elements()[rng() % model.group().order()];
    case SymmetryClass::Cyclic2D:
      return rotation_z(2.0 * std::numbers::pi *
                        static_cast<double>(rng() % model.cyclic_order()) /
                        model.cyclic_order());
    default:
      return Mat3::Identity();
  }
}

inline double
oracle(const Fixture& f, const Pose& a, const Pose& b, const SamplingPlan& plan = {})
{
  return std::visit(
    [&](const auto& mesh) { return distance_oracle(f.model, mesh, a, b, plan); },
    f.mesh);
}

} // namespace fixtures

#include "posespace/metric.hpp"
#include "posespace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace posespace {

double
distance(const ObjectModel& model, const Pose& p1, const Pose& p2)
{
  AmbientVector anchor = first_representative(model, p1);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rep : representatives(model, p2))
    best = std::min(best, (rep - anchor).squaredNorm());
  return std::sqrt(best);
}

namespace {

// Points drawn uniformly by weighted measure, in canonical coordinates.
std::vector<Vec3>
sample_surface(const TriangleMesh& mesh,
               const RigidTransform& to_canonical,
               std::size_t count,
               std::uint64_t seed)
{
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3& a = mesh.vertices[t[0]];
    total += mesh.weight(i) * 0.5 *
             (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
    cumulative.push_back(total);
  }
  if (!(total > 0.0))
    fail(ErrorKind::DegenerateMesh, "mesh has zero total area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    std::size_t i = std::min<std::size_t>(it - cumulative.begin(),
                                          cumulative.size() - 1);
    const auto& t = mesh.triangles[i];
    double r1 = std::sqrt(unit(rng)), r2 = unit(rng);
    Vec3 p = (1.0 - r1) * mesh.vertices[t[0]] +
             r1 * (1.0 - r2) * mesh.vertices[t[1]] +
             r1 * r2 * mesh.vertices[t[2]];
    out.push_back(to_canonical.apply(p));
  }
  return out;
}

std::vector<Vec3>
sample_polyline(const PolylineMesh& mesh,
                const RigidTransform& to_canonical,
                std::size_t count,
                std::uint64_t seed)
{
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.segments.size(); ++i) {
    const auto& s = mesh.segments[i];
    total += mesh.weight(i) * (mesh.vertices[s[1]] - mesh.vertices[s[0]]).norm();
    cumulative.push_back(total);
  }
  if (!(total > 0.0))
    fail(ErrorKind::DegenerateMesh, "polyline has zero total length");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    std::size_t i = std::min<std::size_t>(it - cumulative.begin(),
                                          cumulative.size() - 1);
    const auto& s = mesh.segments[i];
    double u = unit(rng);
    Vec2 p = (1.0 - u) * mesh.vertices[s[0]] + u * mesh.vertices[s[1]];
    out.push_back(to_canonical.apply(Vec3(p.x(), p.y(), 0.0)));
  }
  return out;
}

// Symmetry rotations (canonical frame) to minimize over.
std::vector<Mat3>
discretized_group(const ObjectModel& model, std::size_t steps)
{
  if (steps < 1)
    fail(ErrorKind::InvalidInput, "symmetry_steps must be >= 1");
  std::vector<Mat3> out;
  auto about_z = [&](const Mat3& pre) {
    for (std::size_t k = 0; k < steps; ++k)
      out.push_back(pre * rotation_z(2.0 * std::numbers::pi * k / steps));
  };
  switch (model.kind()) {
    case SymmetryClass::Revolution:
    case SymmetryClass::Circular2D:
      about_z(Mat3::Identity());
      break;
    case SymmetryClass::RevolutionRotoreflection:
      about_z(Mat3::Identity());
      about_z(rotation_about_axis(Vec3::UnitX(), std::numbers::pi));
      break;
    case SymmetryClass::Finite:
      out = model.group().elements();
      break;
    case SymmetryClass::Cyclic2D:
      for (int k = 0; k < model.cyclic_order(); ++k)
        out.push_back(rotation_z(2.0 * std::numbers::pi * k / model.cyclic_order()));
      break;
    default:
      out.push_back(Mat3::Identity());
      break;
  }
  return out;
}

double
oracle_from_samples(const ObjectModel& model,
                    const std::vector<Vec3>& samples,
                    const Pose& p1,
                    const Pose& p2,
                    const SamplingPlan& plan)
{
  const Vec3 dt = p2.translation() - p1.translation();
  if (model.kind() == SymmetryClass::Spherical)
    return dt.norm();

  const auto group = discretized_group(model, plan.symmetry_steps);
  const double n = static_cast<double>(samples.size());
  double best = std::numeric_limits<double>::infinity();

  if (plan.pointwise) {
    for (const auto& g : group) {
      Mat3 r2g = p2.rotation() * g;
      double acc = 0.0;
      for (const auto& x : samples)
        acc += (r2g * x + p2.translation() - p1.rotation() * x -
                p1.translation())
                 .squaredNorm();
      best = std::min(best, acc / n);
    }
    return std::sqrt(std::max(best, 0.0));
  }

  // mean |A x + d|^2 = tr(A C A^T) + 2 d^T A m + |d|^2 with the sample
  // first and second moments m and C.
  Vec3 m = Vec3::Zero();
  Mat3 c = Mat3::Zero();
  for (const auto& x : samples) {
    m += x;
    c += x * x.transpose();
  }
  m /= n;
  c /= n;
  for (const auto& g : group) {
    Mat3 a = p2.rotation() * g - p1.rotation();
    double v = (a * c * a.transpose()).trace() + 2.0 * dt.dot(a * m) +
               dt.squaredNorm();
    best = std::min(best, v);
  }
  return std::sqrt(std::max(best, 0.0));
}

} // namespace

double
distance_oracle(const ObjectModel& model,
                const TriangleMesh& mesh,
                const Pose& p1,
                const Pose& p2,
                const SamplingPlan& plan)
{
  if (model.dimension() != 3)
    fail(ErrorKind::InvalidInput, "triangle mesh oracle needs a 3D model");
  if (plan.surface_samples < 1)
    fail(ErrorKind::InvalidInput, "surface_samples must be >= 1");
  mesh.validate();
  auto samples = sample_surface(mesh, model.canonical_transform(),
                                plan.surface_samples, plan.seed);
  return oracle_from_samples(model, samples, p1, p2, plan);
}

double
distance_oracle(const ObjectModel& model,
                const PolylineMesh& mesh,
                const Pose& p1,
                const Pose& p2,
                const SamplingPlan& plan)
{
  if (model.dimension() != 2)
    fail(ErrorKind::InvalidInput, "polyline oracle needs a planar model");
  if (plan.surface_samples < 1)
    fail(ErrorKind::InvalidInput, "surface_samples must be >= 1");
  mesh.validate();
  auto samples = sample_polyline(mesh, model.canonical_transform(),
                                 plan.surface_samples, plan.seed);
  return oracle_from_samples(model, samples, p1, p2, plan);
}

double
rotation_displacement(const ObjectModel& model, const Vec3& axis, double theta)
{
  if (model.kind() != SymmetryClass::None3D &&
      model.kind() != SymmetryClass::Finite)
    fail(ErrorKind::InvalidInput,
         "rotation displacement needs an asymmetric or finite-group object");
  if (std::abs(axis.norm() - 1.0) > 1e-9)
    fail(ErrorKind::InvalidInput, "rotation axis must be a unit vector");
  Mat3 l2 = model.lambda_matrix() * model.lambda_matrix();
  double inertia = std::max(0.0, l2.trace() - axis.dot(l2 * axis));
  return 2.0 * std::sqrt(inertia) * std::abs(std::sin(theta / 2.0));
}

double
se3_baseline_distance(const RigidTransform& t1,
                      const RigidTransform& t2,
                      double r)
{
  if (!(r > 0.0))
    fail(ErrorKind::InvalidInput, "rotation scale must be positive");
  return std::sqrt((t2.translation - t1.translation).squaredNorm() +
                   r * r * (t2.rotation - t1.rotation).squaredNorm());
}

double
se3_default_scale(const ObjectModel& model)
{
  auto ev = model.lambda_eigenvalues();
  double acc = 0.0;
  for (double e : ev)
    acc += e * e;
  return std::sqrt(acc / static_cast<double>(ev.size()));
}

ObjectModel
se3_baseline_model(const ObjectModel& model, double r)
{
  if (!(r > 0.0))
    fail(ErrorKind::InvalidInput, "rotation scale must be positive");
  if (model.dimension() == 2) {
    Mat3 lambda = Mat3::Zero();
    lambda(0, 0) = lambda(1, 1) = r;
    return ObjectModel::from_lambda(Symmetry::none2d(), lambda,
                                    model.surface_area());
  }
  return ObjectModel::from_lambda(Symmetry::none3d(), r * Mat3::Identity(),
                                  model.surface_area());
}

} // namespace posespace

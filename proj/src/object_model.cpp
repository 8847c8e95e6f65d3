#include "posespace/object_model.hpp"
#include "posespace/errors.hpp"
#include "posespace/representation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace posespace {

namespace {

// Tolerance for analytic models, where Lambda is given exactly.
constexpr double kAnalyticTolerance = 1e-6;

double
relative(double residual, double scale)
{
  return scale > 0.0 ? residual / scale : residual;
}

} // namespace

std::string
to_string(SymmetryClass kind)
{
  switch (kind) {
    case SymmetryClass::Spherical:
      return "spherical";
    case SymmetryClass::Revolution:
      return "revolution";
    case SymmetryClass::RevolutionRotoreflection:
      return "revolution-rotoreflection";
    case SymmetryClass::None3D:
      return "none";
    case SymmetryClass::Finite:
      return "finite";
    case SymmetryClass::Circular2D:
      return "circular2d";
    case SymmetryClass::None2D:
      return "none2d";
    case SymmetryClass::Cyclic2D:
      return "cyclic2d";
  }
  return "unknown";
}

SymmetryClass
symmetry_class_from_string(const std::string& name)
{
  for (auto kind : { SymmetryClass::Spherical,
                     SymmetryClass::Revolution,
                     SymmetryClass::RevolutionRotoreflection,
                     SymmetryClass::None3D,
                     SymmetryClass::Finite,
                     SymmetryClass::Circular2D,
                     SymmetryClass::None2D,
                     SymmetryClass::Cyclic2D })
    if (to_string(kind) == name)
      return kind;
  fail(ErrorKind::InvalidInput, "unknown symmetry class '" + name + "'");
}

// ---------------------------------------------------------------------------
// Finite groups

FiniteGroup::FiniteGroup()
  : elements_{ Mat3::Identity() }
{}

FiniteGroup
FiniteGroup::conjugated(const Mat3& q) const
{
  std::vector<Mat3> out;
  out.reserve(elements_.size());
  for (const auto& g : elements_)
    out.push_back(q * g * q.transpose());
  return FiniteGroup(std::move(out));
}

FiniteGroup
validate_symmetry_group(std::span<const Mat3> elements, double tol)
{
  if (elements.empty())
    fail(ErrorKind::InvalidInput, "empty symmetry group");

  std::vector<Mat3> unique{ Mat3::Identity() };
  auto find = [&](const Mat3& m) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < unique.size(); ++i)
      if ((unique[i] - m).norm() <= tol)
        return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  for (const auto& raw : elements) {
    Mat3 g = checked_rotation(raw);
    if (find(g) < 0)
      unique.push_back(g);
  }

  for (std::size_t i = 0; i < unique.size(); ++i) {
    if (find(unique[i].transpose()) < 0)
      fail(ErrorKind::NotAGroup,
           "inverse of element " + std::to_string(i) + " is not in the group");
    for (std::size_t j = 0; j < unique.size(); ++j)
      if (find(unique[i] * unique[j]) < 0)
        fail(ErrorKind::NotAGroup,
             "product of elements " + std::to_string(i) + " and " +
               std::to_string(j) + " is not in the group");
  }
  return FiniteGroup(std::move(unique));
}

FiniteGroup
group_closure(std::span<const Mat3> generators, std::size_t max_order)
{
  std::vector<Mat3> elements{ Mat3::Identity() };
  auto known = [&](const Mat3& m) {
    for (const auto& e : elements)
      if ((e - m).norm() <= 1e-9)
        return true;
    return false;
  };
  std::vector<Mat3> gens;
  for (const auto& g : generators)
    gens.push_back(checked_rotation(g));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gens) {
      Mat3 p = nearest_rotation(elements[i] * g);
      if (known(p))
        continue;
      if (elements.size() >= max_order)
        fail(ErrorKind::NotAGroup,
             "generators do not close into a group of order <= " +
               std::to_string(max_order));
      elements.push_back(p);
    }
  }
  return validate_symmetry_group(elements);
}

FiniteGroup
cyclic_group(const Vec3& axis, int n)
{
  if (n < 1)
    fail(ErrorKind::InvalidInput, "cyclic order must be >= 1");
  std::vector<Mat3> g;
  for (int k = 0; k < n; ++k)
    g.push_back(rotation_about_axis(axis, 2.0 * std::numbers::pi * k / n));
  return validate_symmetry_group(g);
}

FiniteGroup
dihedral_group(int n)
{
  if (n < 2)
    fail(ErrorKind::InvalidInput, "dihedral order must be >= 2");
  std::vector<Mat3> g;
  for (int k = 0; k < n; ++k) {
    double a = std::numbers::pi * k / n;
    g.push_back(rotation_z(2.0 * a));
    g.push_back(rotation_about_axis(Vec3(std::cos(a), std::sin(a), 0.0),
                                    std::numbers::pi));
  }
  return validate_symmetry_group(g);
}

FiniteGroup
octahedral_group()
{
  // All signed permutation matrices with determinant +1.
  std::vector<Mat3> g;
  std::array<int, 3> perm{ 0, 1, 2 };
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 m = Mat3::Zero();
      for (int r = 0; r < 3; ++r)
        m(r, perm[r]) = (signs >> r) & 1 ? -1.0 : 1.0;
      if (m.determinant() > 0.0)
        g.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return validate_symmetry_group(g);
}

// ---------------------------------------------------------------------------
// Symmetry declarations

namespace {

Symmetry
of_kind(SymmetryClass kind)
{
  Symmetry s;
  s.kind = kind;
  return s;
}

} // namespace

Symmetry
Symmetry::none3d()
{
  return of_kind(SymmetryClass::None3D);
}

Symmetry
Symmetry::spherical()
{
  return of_kind(SymmetryClass::Spherical);
}

Symmetry
Symmetry::circular2d()
{
  return of_kind(SymmetryClass::Circular2D);
}

Symmetry
Symmetry::none2d()
{
  return of_kind(SymmetryClass::None2D);
}

Symmetry
Symmetry::revolution(bool rotoreflection, std::optional<Vec3> axis)
{
  Symmetry s;
  s.kind = rotoreflection ? SymmetryClass::RevolutionRotoreflection
                          : SymmetryClass::Revolution;
  s.axis = axis;
  return s;
}

Symmetry
Symmetry::finite(FiniteGroup group)
{
  Symmetry s;
  s.kind = SymmetryClass::Finite;
  s.group = std::move(group);
  return s;
}

Symmetry
Symmetry::cyclic2d(int n)
{
  if (n < 2)
    fail(ErrorKind::InvalidInput, "planar cyclic order must be >= 2");
  Symmetry s;
  s.kind = SymmetryClass::Cyclic2D;
  s.cyclic_order = n;
  return s;
}

int
Symmetry::dimension() const
{
  switch (kind) {
    case SymmetryClass::Circular2D:
    case SymmetryClass::None2D:
    case SymmetryClass::Cyclic2D:
      return 2;
    default:
      return 3;
  }
}

std::size_t
Symmetry::representative_count() const
{
  switch (kind) {
    case SymmetryClass::RevolutionRotoreflection:
      return 2;
    case SymmetryClass::Finite:
      return group.order();
    case SymmetryClass::Cyclic2D:
      return static_cast<std::size_t>(cyclic_order);
    default:
      return 1;
  }
}

int
Symmetry::ambient_dim() const
{
  switch (kind) {
    case SymmetryClass::Spherical:
      return 3;
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection:
      return 6;
    case SymmetryClass::None3D:
    case SymmetryClass::Finite:
      return 12;
    case SymmetryClass::Circular2D:
      return 2;
    case SymmetryClass::None2D:
    case SymmetryClass::Cyclic2D:
      return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Lambda

Mat3
sqrt_covariance(const Mat3& cov)
{
  if (!cov.allFinite())
    fail(ErrorKind::InvalidInput, "non-finite covariance");
  double scale = std::max(1.0, cov.norm());
  if ((cov - cov.transpose()).norm() > 1e-9 * scale)
    fail(ErrorKind::InvalidInput, "covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(0.5 * (cov + cov.transpose()));
  Vec3 ev = eig.eigenvalues();
  for (int i = 0; i < 3; ++i) {
    if (ev[i] < -1e-12 * scale)
      fail(ErrorKind::InvalidInput, "covariance is indefinite");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  const Mat3& v = eig.eigenvectors();
  Mat3 root = v * ev.asDiagonal() * v.transpose();
  return 0.5 * (root + root.transpose());
}

double
commutation_residual(const FiniteGroup& group, const Mat3& lambda)
{
  double worst = 0.0;
  for (const auto& g : group.elements())
    worst = std::max(worst, (g * lambda - lambda * g).norm());
  return relative(worst, lambda.norm());
}

namespace {

Mat3
group_average(const std::vector<Mat3>& group, const Mat3& m)
{
  Mat3 acc = Mat3::Zero();
  for (const auto& g : group)
    acc += g * m * g.transpose();
  acc /= static_cast<double>(group.size());
  return 0.5 * (acc + acc.transpose());
}

std::vector<Mat3>
planar_rotations(int n)
{
  std::vector<Mat3> g;
  for (int k = 0; k < n; ++k)
    g.push_back(rotation_z(2.0 * std::numbers::pi * k / n));
  return g;
}

struct Conformed
{
  Mat3 covariance;
  double residual = 0.0;
};

// Measures how far a canonical-frame covariance is from the form implied by
// the symmetry class, and returns the projection onto that form.
Conformed
conform_covariance(const Symmetry& s, const Mat3& cov)
{
  Conformed out{ cov, 0.0 };
  double scale = sqrt_covariance(cov).norm();
  auto residual_of = [&](const Mat3& target) {
    return relative((sqrt_covariance(cov) - sqrt_covariance(target)).norm(),
                    scale);
  };
  switch (s.kind) {
    case SymmetryClass::Spherical: {
      Mat3 iso = Mat3::Identity() * (cov.trace() / 3.0);
      out.residual = residual_of(iso);
      out.covariance = iso;
      break;
    }
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection: {
      double r2 = 0.5 * (cov(0, 0) + cov(1, 1));
      Mat3 target = Vec3(r2, r2, cov(2, 2)).asDiagonal();
      out.residual = residual_of(target);
      out.covariance = target;
      break;
    }
    case SymmetryClass::None3D:
      break;
    case SymmetryClass::Finite: {
      out.residual = commutation_residual(s.group, sqrt_covariance(cov));
      out.covariance = group_average(s.group.elements(), cov);
      break;
    }
    case SymmetryClass::Circular2D: {
      Mat3 iso = Mat3::Zero();
      iso(0, 0) = iso(1, 1) = 0.5 * (cov(0, 0) + cov(1, 1));
      out.residual = residual_of(iso);
      out.covariance = iso;
      break;
    }
    case SymmetryClass::None2D:
      break;
    case SymmetryClass::Cyclic2D: {
      auto g = planar_rotations(s.cyclic_order);
      Mat3 root = sqrt_covariance(cov);
      double worst = 0.0;
      for (const auto& r : g)
        worst = std::max(worst, (r * root - root * r).norm());
      out.residual = relative(worst, scale);
      out.covariance = group_average(g, cov);
      break;
    }
  }
  return out;
}

void
check_planar_embedding(const Mat3& m)
{
  double off = m.row(2).norm() + m.col(2).norm();
  if (off > 1e-12 * std::max(1.0, m.norm()))
    fail(ErrorKind::InvalidInput,
         "planar model requires a zero third row and column in Lambda");
}

} // namespace

// ---------------------------------------------------------------------------
// ObjectModel

std::vector<double>
ObjectModel::lambda_eigenvalues() const
{
  std::vector<double> out;
  if (dimension() == 2) {
    Eigen::SelfAdjointEigenSolver<Mat2> eig(lambda_.topLeftCorner<2, 2>());
    out = { eig.eigenvalues()[0], eig.eigenvalues()[1] };
  } else {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(lambda_);
    out = { eig.eigenvalues()[0], eig.eigenvalues()[1], eig.eigenvalues()[2] };
  }
  return out;
}

void
ObjectModel::finalize()
{
  lambda_r_ = lambda_(0, 0);
  lambda_z_ = dimension() == 3 ? lambda_(2, 2) : 0.0;
  switch (symmetry_.kind) {
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection:
      lambda_scalar_ = std::hypot(lambda_r_, lambda_z_);
      break;
    default:
      lambda_scalar_ = lambda_.norm();
      break;
  }
  separation_ = min_representative_separation(*this);
}

ObjectModel
ObjectModel::from_covariance(const Symmetry& symmetry,
                             const Mat3& covariance,
                             double surface_area)
{
  return from_lambda(symmetry, sqrt_covariance(covariance), surface_area);
}

ObjectModel
ObjectModel::from_lambda(const Symmetry& symmetry,
                         const Mat3& lambda,
                         double surface_area)
{
  if (!(surface_area > 0.0))
    fail(ErrorKind::InvalidInput, "surface area must be positive");
  if (symmetry.dimension() == 2)
    check_planar_embedding(lambda);
  // Validates symmetry and positive semi-definiteness.
  Mat3 cov = lambda * lambda;
  Mat3 root = sqrt_covariance(cov);
  if ((root - lambda).norm() > 1e-9 * std::max(1.0, lambda.norm()))
    fail(ErrorKind::InvalidInput, "Lambda must be symmetric positive semi-definite");

  Conformed c = conform_covariance(symmetry, cov);
  if (c.residual > kAnalyticTolerance)
    fail(ErrorKind::SymmetryMismatch,
         "Lambda is incompatible with a " + to_string(symmetry.kind) +
           " symmetry (relative residual " + std::to_string(c.residual) + ")");
  Symmetry canonical = symmetry;
  canonical.axis.reset();
  canonical.axis_point.reset();
  return restore(canonical, sqrt_covariance(c.covariance), surface_area,
                 RigidTransform(), c.residual);
}

ObjectModel
ObjectModel::restore(const Symmetry& canonical_symmetry,
                     const Mat3& lambda,
                     double surface_area,
                     const RigidTransform& canonical,
                     double symmetry_residual)
{
  if (!lambda.allFinite())
    fail(ErrorKind::InvalidInput, "non-finite Lambda");
  ObjectModel m;
  m.symmetry_ = canonical_symmetry;
  m.lambda_ = 0.5 * (lambda + lambda.transpose());
  m.surface_area_ = surface_area;
  m.canonical_ = canonical;
  m.symmetry_residual_ = symmetry_residual;
  m.finalize();
  return m;
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

// Principal frame closest to the identity: eigenvectors are assigned to the
// axis they are most aligned with and oriented positively, so an already
// diagonal covariance yields the identity.
Mat3
principal_frame(const Mat3& cov)
{
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Mat3 v = eig.eigenvectors();
  std::array<int, 3> perm{ 0, 1, 2 }, best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (int axis = 0; axis < 3; ++axis)
      score += std::abs(v(axis, perm[axis]));
    if (score > best_score + 1e-15) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Mat3 frame;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 col = v.col(best[axis]);
    if (col[axis] < 0.0)
      col = -col;
    frame.col(axis) = col;
  }
  if (frame.determinant() < 0.0) {
    int weakest = 0;
    for (int axis = 1; axis < 3; ++axis)
      if (std::abs(frame(axis, axis)) < std::abs(frame(weakest, weakest)))
        weakest = axis;
    frame.col(weakest) = -frame.col(weakest);
  }
  return frame;
}

// Eigenvector whose eigenvalue is farthest from the other two.
Vec3
detect_revolution_axis(const Mat3& cov)
{
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3& ev = eig.eigenvalues();
  Vec3 axis = (ev[1] - ev[0] > ev[2] - ev[1]) ? Vec3(eig.eigenvectors().col(0))
                                              : Vec3(eig.eigenvectors().col(2));
  Eigen::Index largest;
  axis.cwiseAbs().maxCoeff(&largest);
  if (axis[largest] < 0.0)
    axis = -axis;
  return axis;
}

ObjectModel
finish_canonical(const Symmetry& declared,
                 const SurfaceStats& stats,
                 const Mat3& rotation,
                 const CanonicalizeOptions& options)
{
  Mat3 cov = rotation * stats.covariance * rotation.transpose();
  Symmetry canonical = declared;
  canonical.axis.reset();
  canonical.axis_point.reset();
  if (canonical.kind == SymmetryClass::Finite)
    canonical.group = declared.group.conjugated(rotation);

  Conformed c = conform_covariance(canonical, cov);
  if (canonical.kind == SymmetryClass::None3D)
    c.covariance = Mat3(c.covariance.diagonal().asDiagonal());
  if (c.residual > options.symmetry_tolerance)
    fail(ErrorKind::SymmetryMismatch,
         "geometry is incompatible with a " + to_string(declared.kind) +
           " symmetry (relative residual " + std::to_string(c.residual) +
           " > " + std::to_string(options.symmetry_tolerance) + ")");

  RigidTransform canonical_transform(rotation, -(rotation * stats.centroid));
  return ObjectModel::restore(canonical, sqrt_covariance(c.covariance),
                              stats.mass, canonical_transform, c.residual);
}

} // namespace

ObjectModel
canonicalize_frame(const TriangleMesh& mesh,
                   const Symmetry& symmetry,
                   const CanonicalizeOptions& options)
{
  if (symmetry.dimension() != 3)
    fail(ErrorKind::InvalidInput,
         "planar symmetry class requires a polyline mesh");
  SurfaceStats stats = mesh_surface_stats(mesh);
  Mat3 rotation = Mat3::Identity();
  switch (symmetry.kind) {
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection: {
      Vec3 axis = symmetry.axis ? *symmetry.axis
                                : detect_revolution_axis(stats.covariance);
      if (!(axis.norm() > 0.0))
        fail(ErrorKind::InvalidInput, "zero revolution axis");
      axis.normalize();
      if (symmetry.axis_point) {
        Vec3 off = stats.centroid - *symmetry.axis_point;
        double miss = (off - off.dot(axis) * axis).norm();
        double scale = std::sqrt(stats.covariance.trace());
        if (miss > options.symmetry_tolerance * scale)
          fail(ErrorKind::SymmetryMismatch,
               "surface centroid is not on the declared revolution axis");
      }
      rotation = rotation_from_z(axis).transpose();
      break;
    }
    case SymmetryClass::None3D:
      rotation = principal_frame(stats.covariance).transpose();
      break;
    default:
      break;
  }
  return finish_canonical(symmetry, stats, rotation, options);
}

ObjectModel
canonicalize_frame(const PolylineMesh& mesh,
                   const Symmetry& symmetry,
                   const CanonicalizeOptions& options)
{
  if (symmetry.dimension() != 2)
    fail(ErrorKind::InvalidInput, "3D symmetry class requires a triangle mesh");
  return finish_canonical(symmetry, polyline_stats(mesh), Mat3::Identity(),
                          options);
}

double
min_representative_separation(const ObjectModel& model)
{
  auto reps = representatives(model, Pose());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      best = std::min(best, (reps[i] - reps[j]).norm());
  return best;
}

} // namespace posespace

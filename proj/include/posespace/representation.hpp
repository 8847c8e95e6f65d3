#pragma once

#include "posespace/geom.hpp"
#include "posespace/object_model.hpp"

#include <cstddef>
#include <vector>

namespace posespace {

/// Point of the ambient space R^N, N <= 12. Fixed capacity, no heap.
using AmbientVector =
  Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 12, 1>;

/// A pose, stored as one member of its equivalence class of rigid
/// transformations (canonical object frame -> world). Two poses are equal
/// only up to the object's symmetries; compare them with distance().
class Pose
{
public:
  Pose() = default;
  explicit Pose(const RigidTransform& t)
    : transform_(t)
  {}
  Pose(const Mat3& rotation, const Vec3& translation)
    : transform_(rotation, translation)
  {}

  static Pose planar(double theta, double tx, double ty)
  {
    return Pose(RigidTransform::planar(theta, tx, ty));
  }

  const RigidTransform& transform() const { return transform_; }
  const Mat3& rotation() const { return transform_.rotation; }
  const Vec3& translation() const { return transform_.translation; }

  /// T o (g, 0): the same pose when g is a proper symmetry.
  Pose right_composed(const Mat3& g) const
  {
    return Pose(rotation() * g, translation());
  }

  /// f o T: change of inertial frame.
  Pose left_composed(const RigidTransform& f) const
  {
    return Pose(f.compose(transform_));
  }

private:
  RigidTransform transform_;
};

/// All representatives of a pose, in deterministic order: group-element
/// order for finite groups, (+, -) for rotoreflection, k ascending for
/// planar cyclic symmetry. The first one is the representative of the
/// stored transformation itself.
std::vector<AmbientVector>
representatives(const ObjectModel& model, const Pose& pose);

/// representatives(model, pose)[0] without building the others.
AmbientVector
first_representative(const ObjectModel& model, const Pose& pose);

/// One element of the finite group of linear isometries of the ambient
/// space that permutes the representatives of every pose.
class AmbientSymmetry
{
public:
  enum class Kind
  {
    Identity,
    RightMultiply,   // 12D: vec(M) -> vec(M G)
    AxisFlip,        // 6D: a -> -a
    ComplexRotation, // 4D: a -> e^{i angle} a
  };

  static AmbientSymmetry identity() { return AmbientSymmetry(Kind::Identity); }
  static AmbientSymmetry right_multiply(const Mat3& g);
  static AmbientSymmetry axis_flip() { return AmbientSymmetry(Kind::AxisFlip); }
  static AmbientSymmetry complex_rotation(double angle);

  Kind kind() const { return kind_; }
  AmbientVector apply(const AmbientVector& x) const;

private:
  explicit AmbientSymmetry(Kind kind)
    : kind_(kind)
  {}

  Kind kind_;
  Mat3 group_element_ = Mat3::Identity();
  double cos_ = 1.0;
  double sin_ = 0.0;
};

/// The ambient symmetry group of the model; its order is |R(.)| and its
/// elements are listed in the same order as representatives().
std::vector<AmbientSymmetry>
ambient_symmetries(const ObjectModel& model);

struct Projection
{
  Pose pose;
  /// Set when the determinant correction applied and the two smallest
  /// singular values coincide: the projection is not unique.
  bool near_degenerate = false;
};

/// Pose whose closest representative is nearest to x. Throws
/// ProjectionError when x has no unique projection.
Projection
project_detailed(const ObjectModel& model, const AmbientVector& x);

inline Pose
project(const ObjectModel& model, const AmbientVector& x)
{
  return project_detailed(model, x).pose;
}

struct RepresentativeChoice
{
  std::size_t slot = 0;
  AmbientVector point;
  double distance = 0.0;
};

/// Representative of `pose` nearest to `anchor`; ties go to the lowest slot.
RepresentativeChoice
closest_representative(const ObjectModel& model,
                       const Pose& pose,
                       const AmbientVector& anchor);

} // namespace posespace

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace posespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Orthonormality drift tolerated silently.
inline constexpr double kRotationTolerance = 1e-9;
/// Drift above this is repaired by polar decomposition.
inline constexpr double kRepairThreshold = 1e-6;
/// Drift above this is rejected.
inline constexpr double kRejectThreshold = 1e-3;

/// Unit quaternion in (w, x, y, z) order. Only used at I/O boundaries;
/// rotations are matrices everywhere else.
struct UnitQuaternion
{
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// x -> R x + t. In the planar case the rotation is about e_z and the
/// translation has a zero z component.
struct RigidTransform
{
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  RigidTransform() = default;
  RigidTransform(const Mat3& r, const Vec3& t)
    : rotation(r)
    , translation(t)
  {}

  static RigidTransform planar(double theta, double tx, double ty);

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }

  /// (*this) o other
  RigidTransform compose(const RigidTransform& other) const;
  RigidTransform inverse() const;

  /// Angle of a planar rotation about e_z.
  double planar_angle() const;
};

/// Throws InvalidInput on a zero quaternion; renormalizes otherwise.
Mat3
quat_to_matrix(const UnitQuaternion& q);

/// Returns the quaternion with w >= 0.
UnitQuaternion
matrix_to_quat(const Mat3& r);

/// Rodrigues rotation. The axis is normalized; a zero axis is rejected.
Mat3
rotation_about_axis(const Vec3& axis, double angle);

/// Planar rotation about e_z.
inline Mat3
rotation_z(double angle)
{
  return rotation_about_axis(Vec3::UnitZ(), angle);
}

/// Angle in [0, pi] of r1^T r2.
double
relative_rotation_angle(const Mat3& r1, const Mat3& r2);

/// Frobenius distance of r^T r to the identity, or infinity if det <= 0.
double
orthonormality_drift(const Mat3& r);

/// Closest rotation in Frobenius norm (polar factor, det forced to +1).
Mat3
nearest_rotation(const Mat3& m);

/// Accepts small drift, repairs moderate drift, rejects the rest.
Mat3
checked_rotation(const Mat3& m);

/// Smallest rotation taking e_z onto the unit vector `axis`.
Mat3
rotation_from_z(const Vec3& axis);

/// Column-major vectorization of a 3x3 matrix.
inline Eigen::Matrix<double, 9, 1>
vec(const Mat3& m)
{
  return Eigen::Map<const Eigen::Matrix<double, 9, 1>>(m.data());
}

/// Uniformly distributed random rotation from three uniforms in [0, 1).
Mat3
rotation_from_uniforms(double u1, double u2, double u3);

} // namespace posespace

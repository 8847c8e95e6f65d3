#include "posespace/geom.hpp"
#include "posespace/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace posespace {

const char*
to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::InvalidInput:
      return "invalid input";
    case ErrorKind::DegenerateMesh:
      return "degenerate mesh";
    case ErrorKind::SymmetryMismatch:
      return "symmetry mismatch";
    case ErrorKind::NotAGroup:
      return "not a group";
    case ErrorKind::NoUniqueProjection:
      return "no unique projection";
    case ErrorKind::NoConsistentTuple:
      return "no consistent tuple";
    case ErrorKind::GuardExceeded:
      return "guard exceeded";
    case ErrorKind::EmptyInput:
      return "empty input";
    case ErrorKind::Io:
      return "i/o error";
  }
  return "unknown error";
}

double
UnitQuaternion::norm() const
{
  return std::sqrt(w * w + x * x + y * y + z * z);
}

RigidTransform
RigidTransform::planar(double theta, double tx, double ty)
{
  return RigidTransform(rotation_z(theta), Vec3(tx, ty, 0.0));
}

RigidTransform
RigidTransform::compose(const RigidTransform& other) const
{
  return RigidTransform(rotation * other.rotation,
                        rotation * other.translation + translation);
}

RigidTransform
RigidTransform::inverse() const
{
  Mat3 rt = rotation.transpose();
  return RigidTransform(rt, -(rt * translation));
}

double
RigidTransform::planar_angle() const
{
  return std::atan2(rotation(1, 0), rotation(0, 0));
}

Mat3
quat_to_matrix(const UnitQuaternion& q)
{
  double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    fail(ErrorKind::InvalidInput, "zero or non-finite quaternion");
  double w = q.w / n, x = q.x / n, y = q.y / n, z = q.z / n;
  // Every entry is even in q, so q and -q give bitwise equal matrices.
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
    2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
    2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

UnitQuaternion
matrix_to_quat(const Mat3& r)
{
  Eigen::Quaterniond q(r);
  q.normalize();
  UnitQuaternion out{ q.w(), q.x(), q.y(), q.z() };
  if (out.w < 0.0) {
    out.w = -out.w;
    out.x = -out.x;
    out.y = -out.y;
    out.z = -out.z;
  }
  return out;
}

Mat3
rotation_about_axis(const Vec3& axis, double angle)
{
  double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    fail(ErrorKind::InvalidInput, "zero or non-finite rotation axis");
  Vec3 k = axis / n;
  double c = std::cos(angle), s = std::sin(angle);
  Mat3 kx;
  kx << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return c * Mat3::Identity() + s * kx + (1 - c) * (k * k.transpose());
}

double
relative_rotation_angle(const Mat3& r1, const Mat3& r2)
{
  double tr = (r1.transpose() * r2).trace();
  double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

double
orthonormality_drift(const Mat3& r)
{
  if (!r.allFinite() || r.determinant() <= 0.0)
    return std::numeric_limits<double>::infinity();
  return (r.transpose() * r - Mat3::Identity()).norm();
}

Mat3
nearest_rotation(const Mat3& m)
{
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  Mat3 s = Mat3::Identity();
  if (u.determinant() * v.determinant() < 0.0)
    s(2, 2) = -1.0;
  return u * s * v.transpose();
}

Mat3
checked_rotation(const Mat3& m)
{
  double drift = orthonormality_drift(m);
  if (drift <= kRepairThreshold)
    return m;
  if (drift <= kRejectThreshold)
    return nearest_rotation(m);
  fail(ErrorKind::InvalidInput, "matrix is not a proper rotation");
}

Mat3
rotation_from_z(const Vec3& axis)
{
  Vec3 a = axis.normalized();
  Vec3 ez = Vec3::UnitZ();
  Vec3 cross = ez.cross(a);
  double s = cross.norm();
  double c = ez.dot(a);
  if (s < 1e-15) {
    if (c > 0.0)
      return Mat3::Identity();
    return rotation_about_axis(Vec3::UnitX(), std::numbers::pi);
  }
  return rotation_about_axis(cross / s, std::atan2(s, c));
}

Mat3
rotation_from_uniforms(double u1, double u2, double u3)
{
  // Shoemake's subgroup algorithm.
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  UnitQuaternion q{ b * std::cos(two_pi * u3),
                    a * std::sin(two_pi * u2),
                    a * std::cos(two_pi * u2),
                    b * std::sin(two_pi * u3) };
  return quat_to_matrix(q);
}

} // namespace posespace

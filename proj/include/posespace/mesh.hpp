#pragma once

#include "posespace/geom.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace posespace {

/// Triangle soup with an optional piecewise-constant density per triangle.
struct TriangleMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
  /// Empty means unit density everywhere.
  std::vector<double> weights;

  double weight(std::size_t triangle) const
  {
    return weights.empty() ? 1.0 : weights[triangle];
  }

  /// Throws InvalidInput on out-of-range indices or bad weights.
  void validate() const;

  TriangleMesh transformed(const RigidTransform& t) const;
};

/// Segment soup in the plane, the 2D counterpart of a triangle mesh.
struct PolylineMesh
{
  std::vector<Vec2> vertices;
  std::vector<std::array<std::size_t, 2>> segments;
  std::vector<double> weights;

  double weight(std::size_t segment) const
  {
    return weights.empty() ? 1.0 : weights[segment];
  }

  void validate() const;

  PolylineMesh transformed(const RigidTransform& t) const;
};

/// Area (or length), centroid and centered covariance of a weighted
/// surface. `mass` is the density-weighted area; centroid and covariance
/// are normalized by it. Planar stats leave the z row/column at zero.
struct SurfaceStats
{
  double area = 0.0;
  double mass = 0.0;
  Vec3 centroid = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
};

/// Uncentered second moment of a triangle, integrated over its area:
/// S/12 (9 o o^T + a a^T + b b^T + c c^T).
Mat3
triangle_second_moment(const Vec3& a, const Vec3& b, const Vec3& c);

/// Uncentered second moment of a segment, integrated over its length.
Mat2
segment_second_moment(const Vec2& a, const Vec2& b);

/// Throws DegenerateMesh when the total area is zero.
SurfaceStats
mesh_surface_stats(const TriangleMesh& mesh);

SurfaceStats
polyline_stats(const PolylineMesh& mesh);

/// Contents of an ASCII OBJ file: faces are fan-triangulated, `l`
/// elements become segments.
struct ObjData
{
  std::vector<Vec3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::array<std::size_t, 2>> segments;

  TriangleMesh triangle_mesh() const;
  /// Drops the z coordinate.
  PolylineMesh polyline_mesh() const;
};

ObjData
parse_obj(std::istream& in);

ObjData
read_obj(const std::string& path);

void
write_obj(std::ostream& out, const TriangleMesh& mesh);

void
write_obj(std::ostream& out, const PolylineMesh& mesh);

} // namespace posespace

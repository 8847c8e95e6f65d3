#include "posespace/mesh.hpp"
#include "posespace/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace posespace {

namespace {

// Neumaier compensated sum, so the stats do not depend on element order
// beyond the last few ulps.
struct CompensatedSum
{
  double sum = 0.0;
  double carry = 0.0;

  void add(double v)
  {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }

  double value() const { return sum + carry; }
};

template<int Rows, int Cols>
struct CompensatedMatrix
{
  std::array<CompensatedSum, Rows * Cols> cells;

  void add(const Eigen::Matrix<double, Rows, Cols>& m)
  {
    for (int j = 0; j < Cols; ++j)
      for (int i = 0; i < Rows; ++i)
        cells[j * Rows + i].add(m(i, j));
  }

  Eigen::Matrix<double, Rows, Cols> value() const
  {
    Eigen::Matrix<double, Rows, Cols> m;
    for (int j = 0; j < Cols; ++j)
      for (int i = 0; i < Rows; ++i)
        m(i, j) = cells[j * Rows + i].value();
    return m;
  }
};

void
check_weights(const std::vector<double>& weights, std::size_t count)
{
  if (weights.empty())
    return;
  if (weights.size() != count)
    fail(ErrorKind::InvalidInput, "weight count does not match element count");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorKind::InvalidInput, "densities must be positive and finite");
}

} // namespace

void
TriangleMesh::validate() const
{
  for (const auto& t : triangles)
    for (std::size_t i : t)
      if (i >= vertices.size())
        fail(ErrorKind::InvalidInput, "triangle index out of range");
  for (const auto& v : vertices)
    if (!v.allFinite())
      fail(ErrorKind::InvalidInput, "non-finite vertex");
  check_weights(weights, triangles.size());
}

TriangleMesh
TriangleMesh::transformed(const RigidTransform& t) const
{
  TriangleMesh out = *this;
  for (auto& v : out.vertices)
    v = t.apply(v);
  return out;
}

void
PolylineMesh::validate() const
{
  for (const auto& s : segments)
    for (std::size_t i : s)
      if (i >= vertices.size())
        fail(ErrorKind::InvalidInput, "segment index out of range");
  for (const auto& v : vertices)
    if (!v.allFinite())
      fail(ErrorKind::InvalidInput, "non-finite vertex");
  check_weights(weights, segments.size());
}

PolylineMesh
PolylineMesh::transformed(const RigidTransform& t) const
{
  PolylineMesh out = *this;
  for (auto& v : out.vertices)
    v = t.apply(Vec3(v.x(), v.y(), 0.0)).head<2>();
  return out;
}

Mat3
triangle_second_moment(const Vec3& a, const Vec3& b, const Vec3& c)
{
  double area = 0.5 * (b - a).cross(c - a).norm();
  Vec3 o = (a + b + c) / 3.0;
  return area / 12.0 *
         (9.0 * o * o.transpose() + a * a.transpose() + b * b.transpose() +
          c * c.transpose());
}

Mat2
segment_second_moment(const Vec2& a, const Vec2& b)
{
  double length = (b - a).norm();
  return length * ((a * a.transpose() + b * b.transpose()) / 3.0 +
                   (a * b.transpose() + b * a.transpose()) / 6.0);
}

SurfaceStats
mesh_surface_stats(const TriangleMesh& mesh)
{
  mesh.validate();
  CompensatedSum area, mass;
  CompensatedMatrix<3, 1> first;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    double s = 0.5 * (b - a).cross(c - a).norm();
    double w = mesh.weight(i);
    area.add(s);
    mass.add(w * s);
    first.add(w * s * (a + b + c) / 3.0);
  }
  SurfaceStats out;
  out.area = area.value();
  out.mass = mass.value();
  if (!(out.area > 0.0))
    fail(ErrorKind::DegenerateMesh, "mesh has zero total area");
  out.centroid = first.value() / out.mass;

  // Second pass around the centroid avoids cancellation for meshes far
  // from the origin.
  CompensatedMatrix<3, 3> second;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    second.add(mesh.weight(i) *
               triangle_second_moment(mesh.vertices[t[0]] - out.centroid,
                                      mesh.vertices[t[1]] - out.centroid,
                                      mesh.vertices[t[2]] - out.centroid));
  }
  Mat3 cov = second.value() / out.mass;
  out.covariance = 0.5 * (cov + cov.transpose());
  return out;
}

SurfaceStats
polyline_stats(const PolylineMesh& mesh)
{
  mesh.validate();
  CompensatedSum length, mass;
  CompensatedMatrix<2, 1> first;
  for (std::size_t i = 0; i < mesh.segments.size(); ++i) {
    const Vec2& a = mesh.vertices[mesh.segments[i][0]];
    const Vec2& b = mesh.vertices[mesh.segments[i][1]];
    double l = (b - a).norm();
    double w = mesh.weight(i);
    length.add(l);
    mass.add(w * l);
    first.add(w * l * (a + b) / 2.0);
  }
  SurfaceStats out;
  out.area = length.value();
  out.mass = mass.value();
  if (!(out.area > 0.0))
    fail(ErrorKind::DegenerateMesh, "polyline has zero total length");
  Vec2 c = first.value() / out.mass;
  out.centroid = Vec3(c.x(), c.y(), 0.0);

  CompensatedMatrix<2, 2> second;
  for (std::size_t i = 0; i < mesh.segments.size(); ++i) {
    second.add(mesh.weight(i) *
               segment_second_moment(mesh.vertices[mesh.segments[i][0]] - c,
                                     mesh.vertices[mesh.segments[i][1]] - c));
  }
  Mat2 cov = second.value() / out.mass;
  out.covariance.topLeftCorner<2, 2>() = 0.5 * (cov + cov.transpose());
  return out;
}

TriangleMesh
ObjData::triangle_mesh() const
{
  TriangleMesh m;
  m.vertices = vertices;
  m.triangles = triangles;
  return m;
}

PolylineMesh
ObjData::polyline_mesh() const
{
  PolylineMesh m;
  m.vertices.reserve(vertices.size());
  for (const auto& v : vertices)
    m.vertices.emplace_back(v.x(), v.y());
  m.segments = segments;
  return m;
}

namespace {

std::size_t
resolve_index(const std::string& token, std::size_t vertex_count, int line)
{
  // "i", "i/j", "i//k", "i/j/k": only the position index matters.
  std::string head = token.substr(0, token.find('/'));
  long long idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoll(head, &used);
    if (used != head.size())
      throw std::invalid_argument(head);
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidInput,
         "OBJ line " + std::to_string(line) + ": bad index '" + token + "'");
  }
  long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(vertex_count) + idx;
  if (idx == 0 || resolved < 0 || resolved >= static_cast<long long>(vertex_count))
    fail(ErrorKind::InvalidInput,
         "OBJ line " + std::to_string(line) + ": index out of range");
  return static_cast<std::size_t>(resolved);
}

} // namespace

ObjData
parse_obj(std::istream& in)
{
  ObjData data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#')
      continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z()))
        fail(ErrorKind::InvalidInput,
             "OBJ line " + std::to_string(line_no) + ": malformed vertex");
      data.vertices.push_back(v);
    } else if (tag == "f" || tag == "l") {
      std::vector<std::size_t> idx;
      std::string tok;
      while (ls >> tok)
        idx.push_back(resolve_index(tok, data.vertices.size(), line_no));
      if (tag == "f") {
        if (idx.size() < 3)
          fail(ErrorKind::InvalidInput,
               "OBJ line " + std::to_string(line_no) + ": face with < 3 vertices");
        for (std::size_t k = 1; k + 1 < idx.size(); ++k)
          data.triangles.push_back({ idx[0], idx[k], idx[k + 1] });
      } else {
        if (idx.size() < 2)
          fail(ErrorKind::InvalidInput,
               "OBJ line " + std::to_string(line_no) + ": line with < 2 vertices");
        for (std::size_t k = 0; k + 1 < idx.size(); ++k)
          data.segments.push_back({ idx[k], idx[k + 1] });
      }
    }
    // Anything else (normals, texture coordinates, materials) is ignored.
  }
  return data;
}

ObjData
read_obj(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::Io, "cannot open '" + path + "'");
  return parse_obj(in);
}

void
write_obj(std::ostream& out, const TriangleMesh& mesh)
{
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices)
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void
write_obj(std::ostream& out, const PolylineMesh& mesh)
{
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices)
    out << "v " << v.x() << ' ' << v.y() << " 0\n";
  for (const auto& s : mesh.segments)
    out << "l " << s[0] + 1 << ' ' << s[1] + 1 << '\n';
}

} // namespace posespace

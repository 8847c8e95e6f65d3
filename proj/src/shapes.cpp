#include "posespace/shapes.hpp"
#include "posespace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

namespace posespace {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Vec3
on_circle(double radius, double angle, double z)
{
  return { radius * std::cos(angle), radius * std::sin(angle), z };
}

PolylineMesh
closed_loop(std::vector<Vec2> vertices)
{
  PolylineMesh m;
  m.vertices = std::move(vertices);
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    m.segments.push_back({ i, (i + 1) % m.vertices.size() });
  return m;
}

} // namespace

TriangleMesh
icosphere(double radius, int subdivisions)
{
  if (!(radius > 0.0) || subdivisions < 0)
    fail(ErrorKind::InvalidInput, "icosphere needs radius > 0, subdivisions >= 0");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh m;
  m.vertices = { { -1, p, 0 }, { 1, p, 0 },   { -1, -p, 0 }, { 1, -p, 0 },
                 { 0, -1, p }, { 0, 1, p },   { 0, -1, -p }, { 0, 1, -p },
                 { p, 0, -1 }, { p, 0, 1 },   { -p, 0, -1 }, { -p, 0, 1 } };
  m.triangles = { { 0, 11, 5 }, { 0, 5, 1 },  { 0, 1, 7 },   { 0, 7, 10 },
                  { 0, 10, 11 }, { 1, 5, 9 }, { 5, 11, 4 },  { 11, 10, 2 },
                  { 10, 7, 6 }, { 7, 1, 8 },  { 3, 9, 4 },   { 3, 4, 2 },
                  { 3, 2, 6 },  { 3, 6, 8 },  { 3, 8, 9 },   { 4, 9, 5 },
                  { 2, 4, 11 }, { 6, 2, 10 }, { 8, 6, 7 },   { 9, 8, 1 } };
  for (auto& v : m.vertices)
    v.normalize();

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoints;
    auto midpoint = [&](std::size_t a, std::size_t b) {
      auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end())
        return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      return midpoints[key] = m.vertices.size() - 1;
    };
    std::vector<std::array<std::size_t, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (const auto& t : m.triangles) {
      std::size_t ab = midpoint(t[0], t[1]);
      std::size_t bc = midpoint(t[1], t[2]);
      std::size_t ca = midpoint(t[2], t[0]);
      next.push_back({ t[0], ab, ca });
      next.push_back({ t[1], bc, ab });
      next.push_back({ t[2], ca, bc });
      next.push_back({ ab, bc, ca });
    }
    m.triangles = std::move(next);
  }
  for (auto& v : m.vertices)
    v *= radius;
  return m;
}

TriangleMesh
cylinder(double radius, double height, std::size_t segments)
{
  if (!(radius > 0.0) || !(height > 0.0) || segments < 3)
    fail(ErrorKind::InvalidInput, "bad cylinder parameters");
  TriangleMesh m;
  const double h = height / 2.0;
  for (std::size_t k = 0; k < segments; ++k) {
    double a = kTau * k / segments;
    m.vertices.push_back(on_circle(radius, a, -h));
    m.vertices.push_back(on_circle(radius, a, h));
  }
  const std::size_t bottom = m.vertices.size();
  m.vertices.push_back({ 0, 0, -h });
  m.vertices.push_back({ 0, 0, h });
  for (std::size_t k = 0; k < segments; ++k) {
    std::size_t lo0 = 2 * k, hi0 = 2 * k + 1;
    std::size_t lo1 = 2 * ((k + 1) % segments), hi1 = lo1 + 1;
    m.triangles.push_back({ lo0, lo1, hi1 });
    m.triangles.push_back({ lo0, hi1, hi0 });
    m.triangles.push_back({ bottom, lo1, lo0 });
    m.triangles.push_back({ bottom + 1, hi0, hi1 });
  }
  return m;
}

TriangleMesh
cone(double radius, double height, std::size_t segments)
{
  if (!(radius > 0.0) || !(height > 0.0) || segments < 3)
    fail(ErrorKind::InvalidInput, "bad cone parameters");
  TriangleMesh m;
  for (std::size_t k = 0; k < segments; ++k)
    m.vertices.push_back(on_circle(radius, kTau * k / segments, 0.0));
  const std::size_t center = m.vertices.size();
  m.vertices.push_back({ 0, 0, 0 });
  m.vertices.push_back({ 0, 0, height });
  for (std::size_t k = 0; k < segments; ++k) {
    std::size_t k1 = (k + 1) % segments;
    m.triangles.push_back({ center, k1, k });
    m.triangles.push_back({ k, k1, center + 1 });
  }
  return m;
}

TriangleMesh
cube(double half)
{
  if (!(half > 0.0))
    fail(ErrorKind::InvalidInput, "cube half-width must be positive");
  TriangleMesh m;
  for (int i = 0; i < 8; ++i)
    m.vertices.push_back({ (i & 1) ? half : -half,
                           (i & 2) ? half : -half,
                           (i & 4) ? half : -half });
  m.triangles = { { 0, 2, 3 }, { 0, 3, 1 }, { 4, 5, 7 }, { 4, 7, 6 },
                  { 0, 1, 5 }, { 0, 5, 4 }, { 2, 6, 7 }, { 2, 7, 3 },
                  { 0, 4, 6 }, { 0, 6, 2 }, { 1, 3, 7 }, { 1, 7, 5 } };
  return m;
}

TriangleMesh
rocket(double radius, double body, double nose)
{
  if (!(radius > 0.0) || !(body > 0.0) || !(nose > 0.0))
    fail(ErrorKind::InvalidInput, "bad rocket parameters");
  TriangleMesh m;
  for (int k = 0; k < 3; ++k) {
    double a = kTau * k / 3.0;
    m.vertices.push_back(on_circle(radius, a, 0.0));
    m.vertices.push_back(on_circle(radius, a, body));
  }
  m.vertices.push_back({ 0, 0, body + nose });
  m.triangles.push_back({ 0, 4, 2 });
  for (std::size_t k = 0; k < 3; ++k) {
    std::size_t lo0 = 2 * k, hi0 = lo0 + 1;
    std::size_t lo1 = 2 * ((k + 1) % 3), hi1 = lo1 + 1;
    m.triangles.push_back({ lo0, lo1, hi1 });
    m.triangles.push_back({ lo0, hi1, hi0 });
    m.triangles.push_back({ hi0, hi1, 6 });
  }
  return m;
}

TriangleMesh
perturbed_blob(double a, double b, double c, double noise, std::uint64_t seed)
{
  TriangleMesh m = icosphere(1.0, 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  for (auto& v : m.vertices) {
    v *= 1.0 + jitter(rng);
    v = Vec3(a * v.x(), b * v.y(), c * v.z());
  }
  return m;
}

PolylineMesh
regular_polygon(std::size_t n, double radius)
{
  if (n < 3 || !(radius > 0.0))
    fail(ErrorKind::InvalidInput, "bad polygon parameters");
  std::vector<Vec2> v;
  for (std::size_t k = 0; k < n; ++k) {
    double a = kTau * k / n;
    v.emplace_back(radius * std::cos(a), radius * std::sin(a));
  }
  return closed_loop(std::move(v));
}

PolylineMesh
star_polygon(std::size_t points, double outer, double inner)
{
  if (points < 2 || !(outer > 0.0) || !(inner > 0.0))
    fail(ErrorKind::InvalidInput, "bad star parameters");
  std::vector<Vec2> v;
  for (std::size_t k = 0; k < 2 * points; ++k) {
    double a = kTau * k / (2.0 * points);
    double r = k % 2 == 0 ? outer : inner;
    v.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return closed_loop(std::move(v));
}

PolylineMesh
random_polygon(std::size_t n, std::uint64_t seed)
{
  if (n < 3)
    fail(ErrorKind::InvalidInput, "polygon needs at least 3 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTau);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  std::vector<double> angles(n);
  for (auto& a : angles)
    a = angle(rng);
  std::sort(angles.begin(), angles.end());
  std::vector<Vec2> v;
  for (double a : angles) {
    double r = radius(rng);
    v.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  return closed_loop(std::move(v));
}

} // namespace posespace

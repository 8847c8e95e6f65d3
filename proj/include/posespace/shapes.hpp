#pragma once

#include "posespace/mesh.hpp"

#include <cstddef>
#include <cstdint>

namespace posespace {

/// Subdivided icosahedron projected on a sphere centered at the origin.
TriangleMesh
icosphere(double radius, int subdivisions);

/// Closed cylinder about e_z, centered at the origin.
TriangleMesh
cylinder(double radius, double height, std::size_t segments);

/// Cone with its base disk, apex on +e_z, base at z = 0.
TriangleMesh
cone(double radius, double height, std::size_t segments);

/// Axis-aligned cube of half-width `half`, centered at the origin.
TriangleMesh
cube(double half);

/// Equilateral triangular prism (circumradius `radius`, z in [0, body])
/// capped by a pyramid nose of height `nose`. Proper symmetry: C3 about e_z.
TriangleMesh
rocket(double radius, double body, double nose);

/// Icosphere stretched to semi-axes (a, b, c) with seeded radial noise.
/// No proper symmetry.
TriangleMesh
perturbed_blob(double a, double b, double c, double noise, std::uint64_t seed);

/// Closed regular n-gon of circumradius `radius`.
PolylineMesh
regular_polygon(std::size_t n, double radius);

/// Closed star with `points` tips at `outer` and notches at `inner`.
PolylineMesh
star_polygon(std::size_t points, double outer, double inner);

/// Closed star-shaped polygon with random angles and radii.
PolylineMesh
random_polygon(std::size_t n, std::uint64_t seed);

} // namespace posespace

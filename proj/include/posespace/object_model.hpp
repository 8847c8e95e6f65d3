#pragma once

#include "posespace/geom.hpp"
#include "posespace/mesh.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace posespace {

enum class SymmetryClass
{
  Spherical,
  Revolution,
  RevolutionRotoreflection,
  None3D,
  Finite,
  Circular2D,
  None2D,
  Cyclic2D,
};

/// Stable lowercase name used in files and on the command line.
std::string
to_string(SymmetryClass kind);

SymmetryClass
symmetry_class_from_string(const std::string& name);

/// A finite subgroup of SO(3). Only obtainable through
/// validate_symmetry_group, so every instance satisfies the group axioms.
class FiniteGroup
{
public:
  FiniteGroup();

  const std::vector<Mat3>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  /// Conjugate every element: g -> q g q^T.
  FiniteGroup conjugated(const Mat3& q) const;

private:
  explicit FiniteGroup(std::vector<Mat3> elements)
    : elements_(std::move(elements))
  {}

  std::vector<Mat3> elements_;

  friend FiniteGroup validate_symmetry_group(std::span<const Mat3>, double);
};

/// Deduplicates (Frobenius distance <= tol), inserts the identity, and
/// checks closure under product and inverse. Throws NotAGroup naming the
/// first offending pair.
FiniteGroup
validate_symmetry_group(std::span<const Mat3> elements, double tol = 1e-9);

/// Smallest group containing the given rotations. Throws NotAGroup when
/// it exceeds `max_order` elements.
FiniteGroup
group_closure(std::span<const Mat3> generators, std::size_t max_order = 1000);

/// {R_axis(2 pi k / n) | k in [0, n)}
FiniteGroup
cyclic_group(const Vec3& axis, int n);

/// Cyclic group of order n about e_z plus n half-turns about horizontal
/// axes; order 2n.
FiniteGroup
dihedral_group(int n);

/// The 24 rotations of a cube centered at the origin with axis-aligned
/// faces.
FiniteGroup
octahedral_group();

/// Declared proper symmetries of an object.
struct Symmetry
{
  SymmetryClass kind = SymmetryClass::None3D;
  /// Finite class only; expressed in the frame of the source geometry.
  FiniteGroup group;
  /// Cyclic2D only.
  int cyclic_order = 1;
  /// Revolution classes: declared axis direction (detected when absent)
  /// and an optional point the axis passes through.
  std::optional<Vec3> axis;
  std::optional<Vec3> axis_point;

  static Symmetry none3d();
  static Symmetry spherical();
  static Symmetry revolution(bool rotoreflection,
                             std::optional<Vec3> axis = std::nullopt);
  static Symmetry finite(FiniteGroup group);
  static Symmetry circular2d();
  static Symmetry none2d();
  static Symmetry cyclic2d(int n);

  int dimension() const;
  /// |R(.)|: number of representatives per pose.
  std::size_t representative_count() const;
  /// N: dimension of the ambient space of representatives.
  int ambient_dim() const;
};

/// Principal PSD square root through an eigendecomposition. Eigenvalues
/// down to -1e-12 (relative) are clamped to zero.
Mat3
sqrt_covariance(const Mat3& cov);

/// max over g of ||g L - L g||_F / ||L||_F.
double
commutation_residual(const FiniteGroup& group, const Mat3& lambda);

/// Immutable per-object context shared by every other operation. All
/// quantities live in the canonical object frame: origin at the surface
/// centroid, revolution axis along e_z, principal axes for asymmetric
/// 3D objects. Planar objects use the upper-left 2x2 block of Lambda.
class ObjectModel
{
public:
  /// Analytic construction from Lambda expressed in the canonical frame.
  /// Throws SymmetryMismatch when Lambda is incompatible with the
  /// declared symmetry.
  static ObjectModel from_lambda(const Symmetry& symmetry,
                                 const Mat3& lambda,
                                 double surface_area = 1.0);

  static ObjectModel from_covariance(const Symmetry& symmetry,
                                     const Mat3& covariance,
                                     double surface_area = 1.0);

  int dimension() const { return symmetry_.dimension(); }
  SymmetryClass kind() const { return symmetry_.kind; }
  const Symmetry& symmetry() const { return symmetry_; }
  /// Group elements in the canonical frame (Finite class).
  const FiniteGroup& group() const { return symmetry_.group; }
  int cyclic_order() const { return symmetry_.cyclic_order; }

  const Mat3& lambda_matrix() const { return lambda_; }
  double lambda_r() const { return lambda_r_; }
  double lambda_z() const { return lambda_z_; }
  /// sqrt(lr^2 + lz^2) for revolution classes, ||Lambda||_F otherwise.
  double lambda() const { return lambda_scalar_; }
  double lambda_frobenius() const { return lambda_.norm(); }
  /// Eigenvalues of Lambda restricted to the object dimension, ascending.
  std::vector<double> lambda_eigenvalues() const;

  double surface_area() const { return surface_area_; }
  /// Minimum distance between distinct representatives of one pose;
  /// +infinity for single-representative classes.
  double separation() const { return separation_; }
  int ambient_dim() const { return symmetry_.ambient_dim(); }
  std::size_t representative_count() const
  {
    return symmetry_.representative_count();
  }

  /// Maps source geometry coordinates to canonical coordinates.
  const RigidTransform& canonical_transform() const { return canonical_; }
  /// Relative deviation of Lambda from the declared symmetry, measured
  /// before Lambda was symmetrized.
  double symmetry_residual() const { return symmetry_residual_; }

  /// Restores a model from serialized fields. T is recomputed.
  static ObjectModel restore(const Symmetry& canonical_symmetry,
                             const Mat3& lambda,
                             double surface_area,
                             const RigidTransform& canonical,
                             double symmetry_residual);

private:
  ObjectModel() = default;
  void finalize();

  Symmetry symmetry_;
  Mat3 lambda_ = Mat3::Zero();
  double lambda_r_ = 0.0;
  double lambda_z_ = 0.0;
  double lambda_scalar_ = 0.0;
  double surface_area_ = 0.0;
  double separation_ = 0.0;
  RigidTransform canonical_;
  double symmetry_residual_ = 0.0;
};

struct CanonicalizeOptions
{
  /// Maximum relative deviation of Lambda from the form implied by the
  /// declared symmetry before the declaration is rejected.
  double symmetry_tolerance = 0.01;
};

/// Builds the canonical model of a mesh under a declared symmetry.
/// model.canonical_transform() maps mesh coordinates to canonical ones.
/// Throws SymmetryMismatch when the geometry contradicts the declaration.
ObjectModel
canonicalize_frame(const TriangleMesh& mesh,
                   const Symmetry& symmetry,
                   const CanonicalizeOptions& options = {});

ObjectModel
canonicalize_frame(const PolylineMesh& mesh,
                   const Symmetry& symmetry,
                   const CanonicalizeOptions& options = {});

/// T: minimum over distinct representative pairs of the reference pose.
double
min_representative_separation(const ObjectModel& model);

} // namespace posespace

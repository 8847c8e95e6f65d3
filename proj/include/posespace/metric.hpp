#pragma once

#include "posespace/mesh.hpp"
#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"

#include <cstddef>
#include <cstdint>

namespace posespace {

/// Pose distance: RMS displacement of the object surface along the
/// shortest displacement between the two poses. Evaluated as the minimum
/// Euclidean distance between one representative of p1 and the
/// representatives of p2.
double
distance(const ObjectModel& model, const Pose& p1, const Pose& p2);

/// Discretization of the defining integral for distance_oracle.
struct SamplingPlan
{
  std::size_t surface_samples = 100000;
  /// Rotations used to discretize a continuous symmetry group.
  std::size_t symmetry_steps = 720;
  std::uint64_t seed = 0;
  /// Sum squared displacements point by point instead of through the
  /// sample moments. Same estimate, much slower for continuous groups.
  bool pointwise = false;
};

/// Monte Carlo estimate of the pose distance straight from its
/// definition: surface points drawn uniformly by (weighted) area, RMS
/// displacement minimized over the (discretized) symmetry group. `mesh`
/// is the geometry the model was built from, in its original frame.
double
distance_oracle(const ObjectModel& model,
                const TriangleMesh& mesh,
                const Pose& p1,
                const Pose& p2,
                const SamplingPlan& plan = {});

double
distance_oracle(const ObjectModel& model,
                const PolylineMesh& mesh,
                const Pose& p1,
                const Pose& p2,
                const SamplingPlan& plan = {});

/// Length of a rotation by `theta` about the unit `axis` through the
/// centroid: 2 sqrt(I_k) sin(theta / 2), I_k = tr(L^2) - k^T L^2 k.
double
rotation_displacement(const ObjectModel& model, const Vec3& axis, double theta);

/// sqrt(|t2 - t1|^2 + r^2 |R2 - R1|_F^2)
double
se3_baseline_distance(const RigidTransform& t1,
                      const RigidTransform& t2,
                      double r);

/// sqrt(mean of the squared eigenvalues of Lambda).
double
se3_default_scale(const ObjectModel& model);

/// Model under which distance() equals se3_baseline_distance with scale r:
/// an asymmetric object with isotropic Lambda = r I. Averaging under it is
/// the Frobenius rotation mean.
ObjectModel
se3_baseline_model(const ObjectModel& model, double r);

} // namespace posespace

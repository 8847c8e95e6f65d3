#pragma once

#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"

#include <cstddef>
#include <vector>

namespace posespace {

struct WeightedPoses
{
  std::vector<Pose> poses;
  std::vector<double> weights;

  static WeightedPoses uniform(std::vector<Pose> poses);

  /// Throws EmptyInput or InvalidInput.
  void validate() const;
};

/// sum_i w_i d(P_i, at)^2
double
frechet_variance(const ObjectModel& model,
                 const WeightedPoses& wp,
                 const Pose& at);

/// Strongest evidence found that a tuple is consistent.
enum class Consistency
{
  Trivial,    // one representative per pose
  Ball,       // orientation blocks within T/4 of their centroid
  Pairwise,   // orientation blocks pairwise closer than T/2
  Definition, // checked against every alternative representative
};

const char*
to_string(Consistency c);

struct RepresentativeTuple
{
  std::vector<AmbientVector> points;
  std::vector<std::size_t> slots;
  Consistency evidence = Consistency::Trivial;
};

/// Orientation block of a representative (everything but the translation).
AmbientVector
orientation_block(const ObjectModel& model, const AmbientVector& x);

bool
ball_condition(const ObjectModel& model, const std::vector<AmbientVector>& tuple);

bool
pairwise_condition(const ObjectModel& model,
                   const std::vector<AmbientVector>& tuple);

/// Every member is strictly closer to every other member than any other
/// representative of that member's pose is.
bool
is_consistent(const ObjectModel& model,
              const std::vector<Pose>& poses,
              const std::vector<AmbientVector>& tuple);

/// Anchors on the first representative of pose 0 and takes each pose's
/// closest representative to it. Throws NoConsistentTuple when the result
/// fails the definitional check.
RepresentativeTuple
select_consistent_tuple(const ObjectModel& model, const WeightedPoses& wp);

/// Projection of the weighted arithmetic mean of a consistent tuple.
Pose
mean_estimate(const ObjectModel& model, const WeightedPoses& wp);

struct ExactMean
{
  Pose pose;
  double variance = 0.0;
  /// False when a different pose reaches the same variance (1e-9 relative).
  bool unique = true;
  std::size_t tuples = 0;
};

/// Exhaustive search over all |R|^n representative tuples. Throws
/// GuardExceeded above `guard` tuples.
ExactMean
exact_mean_small(const ObjectModel& model,
                 const WeightedPoses& wp,
                 std::size_t guard = 1000000);

} // namespace posespace

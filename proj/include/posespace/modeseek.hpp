#pragma once

#include "posespace/index.hpp"
#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace posespace {

struct VoteSet
{
  std::vector<Pose> poses;
  /// Empty means all 1.
  std::vector<double> weights;

  double weight(std::size_t i) const
  {
    return weights.empty() ? 1.0 : weights[i];
  }
  void validate() const;
};

struct Mode
{
  Pose pose;
  double score = 0.0;
  std::size_t support = 0;
};

struct MeanShiftConfig
{
  /// Unset: automatic choice.
  std::optional<double> radius;
  std::size_t max_iterations = 100;
  /// Unset: 1e-6 ||Lambda||_F.
  std::optional<double> convergence_tol;
  std::size_t max_modes = 20;
  /// Unset: the resolved radius.
  std::optional<double> nms_radius;
  /// Project onto the pose space after every step. When false, iterate in
  /// the ambient space and project once at the end.
  bool project_each_iteration = true;
  /// 0: POSESPACE_WORKERS from the environment, else hardware concurrency.
  std::size_t workers = 0;
};

struct RadiusChoice
{
  double radius = 0.0;
  /// radius >= T/4: averaging inside a neighborhood may be inconsistent.
  bool exceeds_quarter_separation = false;
  /// radius >= T/2: a neighborhood may hold two representatives of one pose.
  bool exceeds_half_separation = false;
};

/// Unset radius: min(1.5 lambda_min, 0.999 T/4). An explicit radius is
/// kept and flagged. Throws InvalidInput on a nonpositive radius.
RadiusChoice
resolve_radius_detailed(const ObjectModel& model, const MeanShiftConfig& config);

inline double
resolve_radius(const ObjectModel& model, const MeanShiftConfig& config)
{
  return resolve_radius_detailed(model, config).radius;
}

/// (sqrt(3)/2) lambda_r: the radius used for a symmetric object in the
/// original experiments. Exceeds T/4 for cyclic objects.
double
reference_symmetric_radius(const ObjectModel& model);

struct MeanShiftResult
{
  Pose pose;
  std::size_t iterations = 0;
  bool converged = false;
  /// The next iterate had no unique projection; `pose` is the last good one.
  bool projection_failed = false;
};

/// Mean Shift from `start` over the votes held by `index`. The config
/// radius must be set or is resolved from the index model.
MeanShiftResult
mean_shift_detailed(const PoseIndex& index,
                    const Pose& start,
                    const MeanShiftConfig& config);

inline Pose
mean_shift(const PoseIndex& index, const Pose& start, const MeanShiftConfig& config)
{
  return mean_shift_detailed(index, start, config).pose;
}

/// H(d) = 3/4 (1 - d^2) for |d| <= 1, else 0.
double
epanechnikov(double d);

/// sum_i w_i H(d(mode, P_i) / radius) by linear scan.
double
score_mode_naive(const ObjectModel& model,
                 const VoteSet& votes,
                 const Pose& mode,
                 double radius);

/// Same through the index; also reports the number of votes within radius.
double
score_mode(const PoseIndex& index,
           const Pose& mode,
           double radius,
           std::size_t* support = nullptr);

/// Mean Shift from every vote, scored, then greedy non-maximum
/// suppression. Descending score; deterministic.
std::vector<Mode>
extract_modes(const ObjectModel& model,
              const VoteSet& votes,
              const MeanShiftConfig& config);

/// Worker count used for parallel Mean Shift.
std::size_t
worker_count(const MeanShiftConfig& config);

struct SynthOptions
{
  std::size_t per_instance = 200;
  double rot_noise = 0.0;
  double trans_noise = 0.0;
  double outlier_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Noisy votes around each truth, parameterization scrambled by a random
/// symmetry, plus uniform outliers around the truths. Votes are grouped
/// by truth, outliers last.
VoteSet
synth_votes(const ObjectModel& model,
            const std::vector<Pose>& truths,
            const SynthOptions& options);

/// `count` random poses with translations in a cube of half-width
/// `extent`, pairwise pose distance at least `min_separation`.
std::vector<Pose>
synth_truths(const ObjectModel& model,
             std::size_t count,
             double extent,
             double min_separation,
             std::uint64_t seed);

struct CoverageReport
{
  /// Smallest k such that the top-k modes match every truth; 0 if none.
  std::size_t coverage_rank = 0;
  /// Modes among the top |truths| matching an already matched truth.
  std::size_t duplicates = 0;
  /// Score of the first mode that matches no new truth, relative to the
  /// top score; 0 when there is none.
  double first_spurious_relative = 0.0;
  std::size_t modes = 0;
};

/// A mode matches a truth when their pose distance under `model` is below
/// `match_radius`.
CoverageReport
evaluate_modes(const ObjectModel& model,
               const std::vector<Mode>& modes,
               const std::vector<Pose>& truths,
               double match_radius);

} // namespace posespace

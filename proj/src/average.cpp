#include "posespace/average.hpp"
#include "posespace/errors.hpp"
#include "posespace/metric.hpp"

#include <cmath>
#include <limits>

namespace posespace {

WeightedPoses
WeightedPoses::uniform(std::vector<Pose> poses)
{
  WeightedPoses wp;
  wp.weights.assign(poses.size(), 1.0);
  wp.poses = std::move(poses);
  return wp;
}

void
WeightedPoses::validate() const
{
  if (poses.empty())
    fail(ErrorKind::EmptyInput, "no poses to average");
  if (weights.size() != poses.size())
    fail(ErrorKind::InvalidInput, "weights and poses differ in length");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorKind::InvalidInput, "weights must be positive and finite");
}

double
frechet_variance(const ObjectModel& model,
                 const WeightedPoses& wp,
                 const Pose& at)
{
  wp.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < wp.poses.size(); ++i) {
    double d = distance(model, at, wp.poses[i]);
    acc += wp.weights[i] * d * d;
  }
  return acc;
}

const char*
to_string(Consistency c)
{
  switch (c) {
    case Consistency::Trivial:
      return "trivial";
    case Consistency::Ball:
      return "ball";
    case Consistency::Pairwise:
      return "pairwise";
    case Consistency::Definition:
      return "definition";
  }
  return "?";
}

AmbientVector
orientation_block(const ObjectModel& model, const AmbientVector& x)
{
  int n = static_cast<int>(x.size()) - model.dimension();
  return x.head(std::max(n, 0));
}

bool
ball_condition(const ObjectModel& model, const std::vector<AmbientVector>& tuple)
{
  if (tuple.empty())
    return true;
  AmbientVector c = orientation_block(model, tuple.front());
  c.setZero();
  for (const auto& p : tuple)
    c += orientation_block(model, p);
  c /= static_cast<double>(tuple.size());
  double quarter = model.separation() / 4.0;
  for (const auto& p : tuple)
    if (!((orientation_block(model, p) - c).norm() < quarter))
      return false;
  return true;
}

bool
pairwise_condition(const ObjectModel& model,
                   const std::vector<AmbientVector>& tuple)
{
  double half = model.separation() / 2.0;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t j = i + 1; j < tuple.size(); ++j)
      if (!((orientation_block(model, tuple[i]) -
             orientation_block(model, tuple[j]))
              .norm() < half))
        return false;
  return true;
}

bool
is_consistent(const ObjectModel& model,
              const std::vector<Pose>& poses,
              const std::vector<AmbientVector>& tuple)
{
  if (poses.size() != tuple.size())
    fail(ErrorKind::InvalidInput, "tuple and poses differ in length");
  for (std::size_t j = 0; j < poses.size(); ++j) {
    auto reps = representatives(model, poses[j]);
    std::size_t self = closest_representative(model, poses[j], tuple[j]).slot;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i == j)
        continue;
      double own = (tuple[j] - tuple[i]).norm();
      for (std::size_t k = 0; k < reps.size(); ++k)
        if (k != self && !(own < (reps[k] - tuple[i]).norm()))
          return false;
    }
  }
  return true;
}

RepresentativeTuple
select_consistent_tuple(const ObjectModel& model, const WeightedPoses& wp)
{
  wp.validate();
  RepresentativeTuple out;
  if (model.representative_count() == 1) {
    for (const auto& p : wp.poses) {
      out.points.push_back(first_representative(model, p));
      out.slots.push_back(0);
    }
    out.evidence = Consistency::Trivial;
    return out;
  }

  AmbientVector anchor = first_representative(model, wp.poses.front());
  for (const auto& p : wp.poses) {
    auto choice = closest_representative(model, p, anchor);
    out.points.push_back(choice.point);
    out.slots.push_back(choice.slot);
  }
  if (ball_condition(model, out.points))
    out.evidence = Consistency::Ball;
  else if (pairwise_condition(model, out.points))
    out.evidence = Consistency::Pairwise;
  else if (is_consistent(model, wp.poses, out.points))
    out.evidence = Consistency::Definition;
  else
    fail(ErrorKind::NoConsistentTuple,
         "poses spread across symmetric configurations; no consistent "
         "representative tuple");
  return out;
}

namespace {

AmbientVector
weighted_mean(const std::vector<AmbientVector>& points,
              const std::vector<double>& weights)
{
  AmbientVector acc = points.front();
  acc.setZero();
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    acc += weights[i] * points[i];
    total += weights[i];
  }
  return acc / total;
}

} // namespace

Pose
mean_estimate(const ObjectModel& model, const WeightedPoses& wp)
{
  auto tuple = select_consistent_tuple(model, wp);
  return project(model, weighted_mean(tuple.points, wp.weights));
}

ExactMean
exact_mean_small(const ObjectModel& model,
                 const WeightedPoses& wp,
                 std::size_t guard)
{
  wp.validate();
  const std::size_t r = model.representative_count();
  const std::size_t n = wp.poses.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > guard / r)
      fail(ErrorKind::GuardExceeded,
           "more than " + std::to_string(guard) + " representative tuples");
    total *= r;
  }

  std::vector<std::vector<AmbientVector>> reps;
  reps.reserve(n);
  for (const auto& p : wp.poses)
    reps.push_back(representatives(model, p));

  struct Candidate
  {
    Pose pose;
    double variance;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> digits(n, 0);
  std::vector<AmbientVector> tuple(n);
  for (std::size_t t = 0; t < total; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      tuple[i] = reps[i][digits[i]];
    try {
      Pose p = project(model, weighted_mean(tuple, wp.weights));
      candidates.push_back({ p, frechet_variance(model, wp, p) });
    } catch (const ProjectionError&) {
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < r)
        break;
      digits[i] = 0;
    }
  }
  if (candidates.empty())
    fail(ErrorKind::NoUniqueProjection, "no representative tuple projects");

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].variance < candidates[best].variance)
      best = i;

  ExactMean out;
  out.pose = candidates[best].pose;
  out.variance = candidates[best].variance;
  out.tuples = total;
  const double v = out.variance;
  const double scale = std::max(v, std::numeric_limits<double>::min());
  const double same_pose = 1e-6 * model.lambda_frobenius();
  for (const auto& c : candidates)
    if (std::abs(c.variance - v) < 1e-9 * scale &&
        distance(model, c.pose, out.pose) > same_pose)
      out.unique = false;
  return out;
}

} // namespace posespace

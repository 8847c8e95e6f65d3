#include "posespace/modeseek.hpp"
#include "posespace/errors.hpp"
#include "posespace/metric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace posespace {

void
VoteSet::validate() const
{
  if (poses.empty())
    fail(ErrorKind::EmptyInput, "vote set is empty");
  if (!weights.empty() && weights.size() != poses.size())
    fail(ErrorKind::InvalidInput, "weights and votes differ in length");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorKind::InvalidInput, "vote weights must be positive and finite");
}

RadiusChoice
resolve_radius_detailed(const ObjectModel& model, const MeanShiftConfig& config)
{
  RadiusChoice out;
  const double t = model.separation();
  if (config.radius) {
    if (!(*config.radius > 0.0) || !std::isfinite(*config.radius))
      fail(ErrorKind::InvalidInput, "radius must be positive and finite");
    out.radius = *config.radius;
  } else {
    auto ev = model.lambda_eigenvalues();
    double lmin = *std::min_element(ev.begin(), ev.end());
    out.radius = 1.5 * lmin;
    if (std::isfinite(t))
      out.radius = std::min(out.radius, 0.999 * t / 4.0);
    if (!(out.radius > 0.0))
      fail(ErrorKind::InvalidInput,
           "automatic radius is zero; Lambda is singular, pass a radius");
  }
  out.exceeds_quarter_separation = out.radius >= t / 4.0;
  out.exceeds_half_separation = out.radius >= t / 2.0;
  return out;
}

double
reference_symmetric_radius(const ObjectModel& model)
{
  return std::sqrt(3.0) / 2.0 * model.lambda_r();
}

namespace {

double
convergence_tolerance(const ObjectModel& model, const MeanShiftConfig& config)
{
  if (config.convergence_tol) {
    if (!(*config.convergence_tol >= 0.0))
      fail(ErrorKind::InvalidInput, "convergence tolerance must be >= 0");
    return *config.convergence_tol;
  }
  return 1e-6 * model.lambda_frobenius();
}

} // namespace

MeanShiftResult
mean_shift_detailed(const PoseIndex& index,
                    const Pose& start,
                    const MeanShiftConfig& config)
{
  const ObjectModel& model = index.model();
  const double r = resolve_radius(model, config);
  const double tol = convergence_tolerance(model, config);

  MeanShiftResult out;
  out.pose = start;
  AmbientVector x = first_representative(model, start);
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    auto neighbors = index.radius_search(x, r);
    if (neighbors.empty()) {
      out.converged = true;
      break;
    }
    AmbientVector mean = x;
    mean.setZero();
    double total = 0.0;
    for (const auto& n : neighbors) {
      double w = index.weight(n.pose_index);
      mean += w * index.representative(n.pose_index, n.slot);
      total += w;
    }
    mean /= total;

    AmbientVector next = mean;
    if (config.project_each_iteration) {
      Pose p;
      try {
        p = project(model, mean);
      } catch (const ProjectionError&) {
        out.projection_failed = true;
        break;
      }
      next = closest_representative(model, p, mean).point;
      out.pose = p;
    }
    double step = (next - x).norm();
    x = next;
    out.iterations = it;
    if (step < tol) {
      out.converged = true;
      break;
    }
  }
  if (!config.project_each_iteration && out.iterations > 0) {
    try {
      out.pose = project(model, x);
    } catch (const ProjectionError&) {
      out.projection_failed = true;
    }
  }
  return out;
}

double
epanechnikov(double d)
{
  return std::abs(d) <= 1.0 ? 0.75 * (1.0 - d * d) : 0.0;
}

double
score_mode_naive(const ObjectModel& model,
                 const VoteSet& votes,
                 const Pose& mode,
                 double radius)
{
  if (!(radius > 0.0))
    fail(ErrorKind::InvalidInput, "radius must be positive");
  votes.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < votes.poses.size(); ++i)
    acc += votes.weight(i) *
           epanechnikov(distance(model, mode, votes.poses[i]) / radius);
  return acc;
}

double
score_mode(const PoseIndex& index,
           const Pose& mode,
           double radius,
           std::size_t* support)
{
  auto neighbors = index.radius_search(mode, radius);
  double acc = 0.0;
  for (const auto& n : neighbors)
    acc += index.weight(n.pose_index) * epanechnikov(n.distance / radius);
  if (support)
    *support = neighbors.size();
  return acc;
}

std::size_t
worker_count(const MeanShiftConfig& config)
{
  if (config.workers > 0)
    return config.workers;
  if (const char* env = std::getenv("POSESPACE_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Mode>
extract_modes(const ObjectModel& model,
              const VoteSet& votes,
              const MeanShiftConfig& config)
{
  votes.validate();
  MeanShiftConfig cfg = config;
  cfg.radius = resolve_radius(model, config);
  const double r = *cfg.radius;
  const double nms = config.nms_radius.value_or(r);
  if (!(nms > 0.0))
    fail(ErrorKind::InvalidInput, "suppression radius must be positive");

  PoseIndex index(model, votes.poses, votes.weights);
  const std::size_t n = votes.poses.size();
  std::vector<Pose> converged(n);

  std::atomic<std::size_t> next{ 0 };
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      converged[i] = mean_shift(index, votes.poses[i], cfg);
  };
  std::size_t workers = std::min(worker_count(config), n);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  pool.clear();

  std::vector<Mode> candidates;
  candidates.reserve(n);
  for (const auto& p : converged) {
    Mode m;
    m.pose = p;
    m.score = score_mode(index, p, r, &m.support);
    candidates.push_back(m);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Mode& a, const Mode& b) { return a.score > b.score; });

  std::vector<Mode> modes;
  for (const auto& c : candidates) {
    if (config.max_modes > 0 && modes.size() >= config.max_modes)
      break;
    bool suppressed = false;
    for (const auto& m : modes)
      if (distance(model, m.pose, c.pose) < nms) {
        suppressed = true;
        break;
      }
    if (!suppressed)
      modes.push_back(c);
  }
  return modes;
}

namespace {

Mat3
uniform_rotation(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
  return rotation_from_uniforms(u1, u2, u3);
}

Mat3
random_symmetry(const ObjectModel& model, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  switch (model.kind()) {
    case SymmetryClass::Spherical:
      return uniform_rotation(rng);
    case SymmetryClass::Revolution:
    case SymmetryClass::Circular2D:
      return rotation_z(angle(rng));
    case SymmetryClass::RevolutionRotoreflection: {
      Mat3 g = rotation_z(angle(rng));
      if (std::bernoulli_distribution(0.5)(rng))
        g = g * rotation_about_axis(Vec3::UnitX(), std::numbers::pi);
      return g;
    }
    case SymmetryClass::Finite: {
      const auto& els = model.group().elements();
      std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
      return els[pick(rng)];
    }
    case SymmetryClass::Cyclic2D: {
      std::uniform_int_distribution<int> pick(0, model.cyclic_order() - 1);
      return rotation_z(2.0 * std::numbers::pi * pick(rng) / model.cyclic_order());
    }
    default:
      return Mat3::Identity();
  }
}

Pose
random_pose(const ObjectModel& model,
            const Vec3& lo,
            const Vec3& hi,
            std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec3 t;
  for (int k = 0; k < 3; ++k)
    t[k] = lo[k] + unit(rng) * (hi[k] - lo[k]);
  if (model.dimension() == 2) {
    t.z() = 0.0;
    return Pose(rotation_z(2.0 * std::numbers::pi * unit(rng)), t);
  }
  return Pose(uniform_rotation(rng), t);
}

} // namespace

VoteSet
synth_votes(const ObjectModel& model,
            const std::vector<Pose>& truths,
            const SynthOptions& options)
{
  if (truths.empty())
    fail(ErrorKind::EmptyInput, "no ground-truth poses");
  if (options.per_instance < 1)
    fail(ErrorKind::InvalidInput, "per_instance must be >= 1");
  if (!(options.rot_noise >= 0.0) || !(options.trans_noise >= 0.0))
    fail(ErrorKind::InvalidInput, "noise levels must be >= 0");
  if (!(options.outlier_fraction >= 0.0) || !(options.outlier_fraction < 1.0))
    fail(ErrorKind::InvalidInput, "outlier fraction must be in [0, 1)");

  const bool planar = model.dimension() == 2;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  VoteSet out;
  for (const auto& truth : truths) {
    for (std::size_t k = 0; k < options.per_instance; ++k) {
      Mat3 g = random_symmetry(model, rng);
      Mat3 noise;
      if (planar) {
        noise = rotation_z(options.rot_noise * gauss(rng));
      } else {
        double theta = std::abs(options.rot_noise * gauss(rng));
        Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
        noise = axis.norm() > 0.0 ? rotation_about_axis(axis, theta)
                                  : Mat3::Identity();
      }
      Vec3 dt(gauss(rng), gauss(rng), gauss(rng));
      if (planar)
        dt.z() = 0.0;
      out.poses.emplace_back(noise * truth.rotation() * g,
                             truth.translation() + options.trans_noise * dt);
    }
  }

  const double inliers = static_cast<double>(out.poses.size());
  const auto outliers = static_cast<std::size_t>(std::llround(
    options.outlier_fraction * inliers / (1.0 - options.outlier_fraction)));
  if (outliers > 0) {
    Vec3 lo = truths.front().translation(), hi = lo;
    for (const auto& t : truths) {
      lo = lo.cwiseMin(t.translation());
      hi = hi.cwiseMax(t.translation());
    }
    Vec3 margin = Vec3::Constant(2.0 * model.lambda_frobenius());
    lo -= margin;
    hi += margin;
    for (std::size_t k = 0; k < outliers; ++k)
      out.poses.push_back(random_pose(model, lo, hi, rng));
  }
  return out;
}

std::vector<Pose>
synth_truths(const ObjectModel& model,
             std::size_t count,
             double extent,
             double min_separation,
             std::uint64_t seed)
{
  if (!(extent >= 0.0) || !(min_separation >= 0.0))
    fail(ErrorKind::InvalidInput, "extent and separation must be >= 0");
  std::mt19937_64 rng(seed);
  const Vec3 hi = Vec3::Constant(extent);
  std::vector<Pose> out;
  const std::size_t budget = 10000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= budget)
      fail(ErrorKind::InvalidInput,
           "cannot place " + std::to_string(count) +
             " poses with the requested separation");
    Pose p = random_pose(model, -hi, hi, rng);
    bool ok = true;
    for (const auto& q : out)
      if (distance(model, p, q) < min_separation) {
        ok = false;
        break;
      }
    if (ok)
      out.push_back(p);
  }
  return out;
}

CoverageReport
evaluate_modes(const ObjectModel& model,
               const std::vector<Mode>& modes,
               const std::vector<Pose>& truths,
               double match_radius)
{
  CoverageReport out;
  out.modes = modes.size();
  std::vector<bool> matched(truths.size(), false);
  std::size_t covered = 0;
  bool spurious_seen = false;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    bool fresh = false, any = false;
    for (std::size_t j = 0; j < truths.size(); ++j) {
      if (!(distance(model, modes[k].pose, truths[j]) < match_radius))
        continue;
      any = true;
      if (!matched[j]) {
        matched[j] = true;
        ++covered;
        fresh = true;
        break;
      }
    }
    if (any && !fresh && k < truths.size())
      ++out.duplicates;
    if (!fresh && !spurious_seen) {
      spurious_seen = true;
      if (modes.front().score > 0.0)
        out.first_spurious_relative = modes[k].score / modes.front().score;
    }
    if (covered == truths.size() && out.coverage_rank == 0)
      out.coverage_rank = k + 1;
  }
  return out;
}

} // namespace posespace

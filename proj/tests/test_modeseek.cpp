#include "posespace/errors.hpp"
#include "posespace/index.hpp"
#include "posespace/metric.hpp"
#include "posespace/modeseek.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace posespace;
using fixtures::analytic_models;

namespace {

double
mean_truth_distance(const ObjectModel& model,
                    const VoteSet& votes,
                    const std::vector<Pose>& truths,
                    std::size_t per_instance)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < votes.poses.size(); ++i)
    acc += distance(model, votes.poses[i], truths[i / per_instance]);
  return acc / static_cast<double>(votes.poses.size());
}

bool
same_pose_bits(const Pose& a, const Pose& b)
{
  return a.rotation() == b.rotation() && a.translation() == b.translation();
}

} // namespace

TEST_CASE("radius resolution")
{
  auto none = analytic_models()[0].model;
  CHECK(resolve_radius(none, {}) == doctest::Approx(1.5 * 0.3).epsilon(1e-14));

  auto c3 = analytic_models()[4].model;
  double lr = c3.lambda_r();
  CHECK(c3.separation() == doctest::Approx(std::sqrt(6.0) * lr).epsilon(1e-12));
  auto auto_choice = resolve_radius_detailed(c3, {});
  CHECK(auto_choice.radius == doctest::Approx(0.999 * std::sqrt(6.0) / 4 * lr).epsilon(1e-12));
  CHECK_FALSE(auto_choice.exceeds_quarter_separation);

  double reference = reference_symmetric_radius(c3);
  CHECK(reference == doctest::Approx(std::sqrt(3.0) / 2 * lr).epsilon(1e-14));
  MeanShiftConfig explicit_cfg;
  explicit_cfg.radius = reference;
  auto kept = resolve_radius_detailed(c3, explicit_cfg);
  CHECK(kept.radius == reference);
  CHECK(kept.exceeds_quarter_separation);
  CHECK_FALSE(kept.exceeds_half_separation);

  explicit_cfg.radius = c3.separation();
  CHECK(resolve_radius_detailed(c3, explicit_cfg).exceeds_half_separation);

  explicit_cfg.radius = 0.0;
  CHECK_THROWS_AS(resolve_radius(c3, explicit_cfg), Error);
  explicit_cfg.radius = -1.0;
  CHECK_THROWS_AS(resolve_radius(c3, explicit_cfg), Error);
}

TEST_CASE("Epanechnikov kernel and scores")
{
  CHECK(epanechnikov(0.0) == 0.75);
  CHECK(epanechnikov(0.5) == doctest::Approx(0.5625));
  CHECK(epanechnikov(1.0) == 0.0);
  CHECK(epanechnikov(-0.5) == epanechnikov(0.5));
  CHECK(epanechnikov(1.5) == 0.0);

  auto model = analytic_models()[4].model;
  Pose p;
  VoteSet one{ { p }, {} };
  CHECK(score_mode_naive(model, one, p, 0.3) == 0.75);
  Pose far(Mat3::Identity(), Vec3(10, 0, 0));
  CHECK(score_mode_naive(model, one, far, 0.3) == 0.0);

  std::mt19937_64 rng(1);
  for (const auto& [name, m] : analytic_models()) {
    CAPTURE(name);
    auto truths = synth_truths(m, 2, 1.0, 0.0, rng());
    SynthOptions opt;
    opt.per_instance = 100;
    opt.rot_noise = 0.2;
    opt.trans_noise = 0.05;
    opt.seed = rng();
    VoteSet votes = synth_votes(m, truths, opt);
    std::uniform_real_distribution<double> wd(0.1, 3.0);
    double total = 0.0;
    for (std::size_t i = 0; i < votes.poses.size(); ++i) {
      votes.weights.push_back(wd(rng));
      total += votes.weights.back();
    }
    PoseIndex index(m, votes.poses, votes.weights);
    double r = resolve_radius(m, {});
    for (int trial = 0; trial < 30; ++trial) {
      Pose q = trial % 2 ? votes.poses[rng() % votes.poses.size()]
                         : fixtures::random_pose(m, rng, 1.0);
      std::size_t support = 0;
      double a = score_mode(index, q, r, &support);
      double b = score_mode_naive(m, votes, q, r);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, b));
      CHECK(a <= 0.75 * total + 1e-12);
      CHECK(support == index.radius_search(q, r).size());
    }
  }
}

TEST_CASE("mean shift fixed point and empty neighborhood")
{
  auto model = analytic_models()[4].model;
  std::mt19937_64 rng(2);
  Pose p = fixtures::random_pose(model, rng);
  std::vector<Pose> same(10, p);
  for (std::size_t i = 0; i < same.size(); ++i)
    same[i] = p.right_composed(model.group().elements()[i % 3]);
  PoseIndex index(model, same);
  MeanShiftConfig cfg;
  auto res = mean_shift_detailed(index, p, cfg);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(distance(model, res.pose, p) < 1e-12);

  Pose far(p.rotation(), p.translation() + Vec3(50, 0, 0));
  auto lonely = mean_shift_detailed(index, far, cfg);
  CHECK(same_pose_bits(lonely.pose, far));
}

TEST_CASE("mean shift climbs to the cluster center")
{
  std::mt19937_64 rng(3);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    double r = resolve_radius(model, {});
    Pose truth = fixtures::random_pose(model, rng);
    SynthOptions opt;
    opt.per_instance = 200;
    opt.rot_noise = 0.1 * r / model.lambda_frobenius();
    opt.trans_noise = 0.03 * r;
    opt.seed = rng();
    VoteSet votes = synth_votes(model, { truth }, opt);
    PoseIndex index(model, votes.poses);
    MeanShiftConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
      const Pose& start = votes.poses[rng() % votes.poses.size()];
      auto res = mean_shift_detailed(index, start, cfg);
      CHECK(res.converged);
      CHECK(distance(model, res.pose, truth) < 0.1 * r);
      std::size_t before = 0, after = 0;
      score_mode(index, start, r, &before);
      score_mode(index, res.pose, r, &after);
      CHECK(after >= before);
    }
  }
}

TEST_CASE("single tight cluster gives one mode")
{
  std::mt19937_64 rng(4);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    double r = resolve_radius(model, {});
    Pose truth = fixtures::random_pose(model, rng);
    SynthOptions opt;
    opt.per_instance = 150;
    opt.rot_noise = 0.05 * r / model.lambda_frobenius();
    opt.trans_noise = 0.02 * r;
    opt.seed = rng();
    VoteSet votes = synth_votes(model, { truth }, opt);
    auto modes = extract_modes(model, votes, {});
    REQUIRE(modes.size() == 1);
    CHECK(distance(model, modes[0].pose, truth) < 0.1 * r);
    CHECK(modes[0].support == 150);
  }
}

TEST_CASE("three order-3 instances give three modes without duplicates")
{
  auto model = analytic_models()[4].model;
  double r = resolve_radius(model, {});
  auto truths = synth_truths(model, 3, 3.0, 6.0 * r, 17);
  SynthOptions opt;
  opt.rot_noise = 5.0 * std::numbers::pi / 180.0;
  opt.trans_noise = 0.05 * 0.5;
  opt.outlier_fraction = 0.1;
  opt.seed = 18;
  VoteSet votes = synth_votes(model, truths, opt);
  auto modes = extract_modes(model, votes, {});
  auto report = evaluate_modes(model, modes, truths, 0.5 * r);
  CHECK(report.coverage_rank == 3);
  CHECK(report.duplicates == 0);
  for (std::size_t i = 1; i < modes.size(); ++i)
    CHECK(modes[i - 1].score >= modes[i].score);
  CHECK(modes.size() <= 20);
}

TEST_CASE("mode extraction is deterministic across worker counts")
{
  auto model = analytic_models()[5].model;
  auto truths = synth_truths(model, 2, 2.0, 2.0, 5);
  SynthOptions opt;
  opt.per_instance = 120;
  opt.rot_noise = 0.1;
  opt.trans_noise = 0.03;
  opt.outlier_fraction = 0.2;
  opt.seed = 6;
  VoteSet votes = synth_votes(model, truths, opt);
  VoteSet again = synth_votes(model, truths, opt);
  REQUIRE(votes.poses.size() == again.poses.size());
  for (std::size_t i = 0; i < votes.poses.size(); ++i)
    CHECK(same_pose_bits(votes.poses[i], again.poses[i]));

  MeanShiftConfig one, many;
  one.workers = 1;
  many.workers = 7;
  auto a = extract_modes(model, votes, one);
  auto b = extract_modes(model, votes, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_pose_bits(a[i].pose, b[i].pose));
    CHECK(a[i].score == b[i].score);
    CHECK(a[i].support == b[i].support);
  }
}

TEST_CASE("modes move with the inertial frame")
{
  std::mt19937_64 rng(7);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    double r = resolve_radius(model, {});
    auto truths = synth_truths(model, 2, 5.0 * r, 6.0 * r, rng());
    SynthOptions opt;
    opt.per_instance = 60;
    opt.rot_noise = 0.1 * r / model.lambda_frobenius();
    opt.trans_noise = 0.05 * r;
    opt.seed = rng();
    VoteSet votes = synth_votes(model, truths, opt);
    // Unequal cluster sizes keep the mode order unambiguous.
    votes.poses.resize(votes.poses.size() - 20);

    RigidTransform f = fixtures::random_pose(model, rng, 3.0).transform();
    VoteSet moved = votes;
    for (auto& p : moved.poses)
      p = p.left_composed(f);
    auto a = extract_modes(model, votes, {});
    auto b = extract_modes(model, moved, {});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(distance(model, a[i].pose.left_composed(f), b[i].pose) < 1e-6);
      CHECK(a[i].support == b[i].support);
    }
  }
}

TEST_CASE("synthetic votes")
{
  std::mt19937_64 rng(8);
  for (const auto& [name, model] : analytic_models()) {
    CAPTURE(name);
    auto truths = synth_truths(model, 3, 2.0, 0.5, rng());
    SynthOptions clean;
    clean.per_instance = 30;
    clean.seed = rng();
    VoteSet votes = synth_votes(model, truths, clean);
    REQUIRE(votes.poses.size() == 90);
    bool scrambled = false;
    for (std::size_t i = 0; i < votes.poses.size(); ++i) {
      const Pose& t = truths[i / 30];
      CHECK(distance(model, votes.poses[i], t) < 1e-12);
      scrambled |= !same_pose_bits(votes.poses[i], t);
    }
    if (model.representative_count() > 1 || model.kind() == SymmetryClass::Spherical)
      CHECK(scrambled);

    SynthOptions dirty = clean;
    dirty.outlier_fraction = 0.25;
    VoteSet with_outliers = synth_votes(model, truths, dirty);
    CHECK(with_outliers.poses.size() == 120);
  }

  auto model = analytic_models()[0].model;
  CHECK_THROWS_AS(synth_truths(model, 50, 0.1, 10.0, 1), Error);
  auto truths = synth_truths(model, 4, 3.0, 1.0, 2);
  for (std::size_t i = 0; i < truths.size(); ++i)
    for (std::size_t j = i + 1; j < truths.size(); ++j)
      CHECK(distance(model, truths[i], truths[j]) >= 1.0);
}

TEST_CASE("vote scatter grows with rotation noise")
{
  auto model = analytic_models()[4].model;
  auto truths = synth_truths(model, 2, 2.0, 1.0, 9);
  double previous = 0.0;
  for (double noise : { 0.02, 0.05, 0.1, 0.2, 0.4 }) {
    SynthOptions opt;
    opt.per_instance = 400;
    opt.rot_noise = noise;
    opt.seed = 10;
    VoteSet votes = synth_votes(model, truths, opt);
    double d = mean_truth_distance(model, votes, truths, opt.per_instance);
    CHECK(d > previous);
    previous = d;
  }
}

TEST_CASE("coverage report")
{
  auto model = analytic_models()[0].model;
  Pose a, b(Mat3::Identity(), Vec3(5, 0, 0));
  Pose c(Mat3::Identity(), Vec3(0, 5, 0));
  std::vector<Mode> modes = {
    { a, 10.0, 5 }, { a, 8.0, 4 }, { b, 6.0, 3 }, { c, 2.0, 1 }
  };
  auto rep = evaluate_modes(model, modes, { a, b }, 0.1);
  CHECK(rep.coverage_rank == 3);
  CHECK(rep.duplicates == 1);
  CHECK(rep.first_spurious_relative == doctest::Approx(0.8));
  CHECK(rep.modes == 4);

  auto miss = evaluate_modes(model, { modes[2] }, { a, b }, 0.1);
  CHECK(miss.coverage_rank == 0);
}

TEST_CASE("empty vote sets are rejected")
{
  auto model = analytic_models()[0].model;
  VoteSet empty;
  CHECK_THROWS_AS(extract_modes(model, empty, {}), Error);
  VoteSet bad{ { Pose() }, { -1.0 } };
  CHECK_THROWS_AS(extract_modes(model, bad, {}), Error);
}

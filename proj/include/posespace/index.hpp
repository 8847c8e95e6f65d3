#pragma once

#include "posespace/object_model.hpp"
#include "posespace/representation.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace posespace {

/// Exact kd-tree over points of R^N, N <= 12.
class KdTree
{
public:
  KdTree() = default;
  KdTree(const std::vector<AmbientVector>* points, int dim);

  /// Indices of points with squared distance <= r2, with that squared
  /// distance. Unordered.
  void radius(const AmbientVector& q,
              double r2,
              std::vector<std::pair<std::size_t, double>>& out) const;

  /// The k closest points, ascending squared distance, ties by index.
  std::vector<std::pair<std::size_t, double>>
  nearest(const AmbientVector& q, std::size_t k) const;

private:
  struct Node
  {
    std::size_t begin = 0;
    std::size_t end = 0;
    int axis = -1; // -1: leaf
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  void radius_rec(std::size_t node,
                  const AmbientVector& q,
                  double r2,
                  std::vector<std::pair<std::size_t, double>>& out) const;
  void nearest_rec(std::size_t node,
                   const AmbientVector& q,
                   std::size_t k,
                   std::vector<std::pair<std::size_t, double>>& heap) const;

  const std::vector<AmbientVector>* points_ = nullptr;
  int dim_ = 0;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

struct Neighbor
{
  std::size_t pose_index = 0;
  /// Pose distance: minimum over the pose's representatives.
  double distance = 0.0;
  /// Representative slot achieving it.
  std::size_t slot = 0;
};

/// All representatives of a pose set, indexed for pose-level queries.
/// Immutable after construction; concurrent queries are safe.
class PoseIndex
{
public:
  PoseIndex(const ObjectModel& model,
            std::vector<Pose> poses,
            std::vector<double> weights = {});

  PoseIndex(const PoseIndex&) = delete;
  PoseIndex& operator=(const PoseIndex&) = delete;

  const ObjectModel& model() const { return model_; }
  std::size_t size() const { return poses_.size(); }
  const std::vector<Pose>& poses() const { return poses_; }
  const Pose& pose(std::size_t i) const { return poses_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  std::size_t point_count() const { return points_.size(); }
  const AmbientVector& point(std::size_t i) const { return points_[i]; }
  /// (pose index, representative slot) of an indexed point.
  std::pair<std::size_t, std::size_t> owner(std::size_t point) const;
  /// Indexed point of (pose, slot).
  const AmbientVector& representative(std::size_t pose, std::size_t slot) const;

  /// Poses having a representative within r of the ambient point q, once
  /// each, ascending distance (ties by pose index).
  std::vector<Neighbor> radius_search(const AmbientVector& q, double r) const;
  std::vector<Neighbor> radius_search(const Pose& query, double r) const;

  std::vector<Neighbor> k_nearest(const AmbientVector& q, std::size_t k) const;
  std::vector<Neighbor> k_nearest(const Pose& query, std::size_t k) const;

private:
  ObjectModel model_;
  std::vector<Pose> poses_;
  std::vector<double> weights_;
  std::size_t stride_ = 1;
  std::vector<AmbientVector> points_;
  KdTree tree_;
};

/// Throws EmptyInput on an empty list.
inline PoseIndex
build_index(const ObjectModel& model,
            std::vector<Pose> poses,
            std::vector<double> weights = {})
{
  return PoseIndex(model, std::move(poses), std::move(weights));
}

inline std::vector<Neighbor>
radius_search(const PoseIndex& index, const Pose& query, double r)
{
  return index.radius_search(query, r);
}

inline std::vector<Neighbor>
k_nearest(const PoseIndex& index, const Pose& query, std::size_t k)
{
  return index.k_nearest(query, k);
}

} // namespace posespace

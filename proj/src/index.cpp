#include "posespace/index.hpp"
#include "posespace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace posespace {

namespace {

constexpr std::size_t kLeafSize = 8;

bool
closer(const std::pair<std::size_t, double>& a,
       const std::pair<std::size_t, double>& b)
{
  return a.second < b.second || (a.second == b.second && a.first < b.first);
}

} // namespace

KdTree::KdTree(const std::vector<AmbientVector>* points, int dim)
  : points_(points)
  , dim_(dim)
{
  order_.resize(points_->size());
  std::iota(order_.begin(), order_.end(), std::size_t{ 0 });
  nodes_.reserve(2 * points_->size() / kLeafSize + 1);
  if (!order_.empty())
    build(0, order_.size());
}

std::size_t
KdTree::build(std::size_t begin, std::size_t end)
{
  std::size_t id = nodes_.size();
  nodes_.push_back(Node{ begin, end });
  if (end - begin <= kLeafSize)
    return id;

  const auto& pts = *points_;
  int axis = 0;
  double spread = -1.0;
  for (int d = 0; d < dim_; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      lo = std::min(lo, pts[order_[i]][d]);
      hi = std::max(hi, pts[order_[i]][d]);
    }
    if (hi - lo > spread) {
      spread = hi - lo;
      axis = d;
    }
  }
  if (spread <= 0.0)
    return id;

  std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](std::size_t a, std::size_t b) {
                     return pts[a][axis] < pts[b][axis];
                   });
  double split = pts[order_[mid]][axis];

  std::size_t left = build(begin, mid);
  std::size_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void
KdTree::radius(const AmbientVector& q,
               double r2,
               std::vector<std::pair<std::size_t, double>>& out) const
{
  if (!nodes_.empty())
    radius_rec(0, q, r2, out);
}

void
KdTree::radius_rec(std::size_t node,
                   const AmbientVector& q,
                   double r2,
                   std::vector<std::pair<std::size_t, double>>& out) const
{
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i) {
      double d2 = ((*points_)[order_[i]] - q).squaredNorm();
      if (d2 <= r2)
        out.emplace_back(order_[i], d2);
    }
    return;
  }
  // Left holds values <= split, right values >= split.
  double diff = q[n.axis] - n.split;
  if (diff <= 0.0 || diff * diff <= r2)
    radius_rec(n.left, q, r2, out);
  if (diff >= 0.0 || diff * diff <= r2)
    radius_rec(n.right, q, r2, out);
}

std::vector<std::pair<std::size_t, double>>
KdTree::nearest(const AmbientVector& q, std::size_t k) const
{
  std::vector<std::pair<std::size_t, double>> heap;
  if (k == 0 || nodes_.empty())
    return heap;
  heap.reserve(k + 1);
  nearest_rec(0, q, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

void
KdTree::nearest_rec(std::size_t node,
                    const AmbientVector& q,
                    std::size_t k,
                    std::vector<std::pair<std::size_t, double>>& heap) const
{
  const Node& n = nodes_[node];
  if (n.axis < 0) {
    for (std::size_t i = n.begin; i < n.end; ++i) {
      std::pair<std::size_t, double> c{ order_[i],
                                        ((*points_)[order_[i]] - q).squaredNorm() };
      if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(c, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }
  double diff = q[n.axis] - n.split;
  std::size_t near = diff <= 0.0 ? n.left : n.right;
  std::size_t far = diff <= 0.0 ? n.right : n.left;
  nearest_rec(near, q, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().second)
    nearest_rec(far, q, k, heap);
}

PoseIndex::PoseIndex(const ObjectModel& model,
                     std::vector<Pose> poses,
                     std::vector<double> weights)
  : model_(model)
  , poses_(std::move(poses))
  , weights_(std::move(weights))
  , stride_(model.representative_count())
{
  if (poses_.empty())
    fail(ErrorKind::EmptyInput, "cannot index an empty pose set");
  if (weights_.empty())
    weights_.assign(poses_.size(), 1.0);
  if (weights_.size() != poses_.size())
    fail(ErrorKind::InvalidInput, "weights and poses differ in length");
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorKind::InvalidInput, "weights must be positive and finite");

  points_.reserve(poses_.size() * stride_);
  for (const auto& p : poses_)
    for (auto& rep : representatives(model_, p))
      points_.push_back(std::move(rep));
  tree_ = KdTree(&points_, model_.ambient_dim());
}

std::pair<std::size_t, std::size_t>
PoseIndex::owner(std::size_t point) const
{
  return { point / stride_, point % stride_ };
}

const AmbientVector&
PoseIndex::representative(std::size_t pose, std::size_t slot) const
{
  return points_[pose * stride_ + slot];
}

namespace {

std::vector<Neighbor>
collapse(const std::vector<std::pair<std::size_t, double>>& hits,
         std::size_t stride)
{
  std::vector<Neighbor> out;
  out.reserve(hits.size());
  for (const auto& [point, d2] : hits)
    out.push_back(Neighbor{ point / stride, d2, point % stride });
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.pose_index != b.pose_index)
      return a.pose_index < b.pose_index;
    if (a.distance != b.distance)
      return a.distance < b.distance;
    return a.slot < b.slot;
  });
  auto last = std::unique(out.begin(), out.end(),
                          [](const Neighbor& a, const Neighbor& b) {
                            return a.pose_index == b.pose_index;
                          });
  out.erase(last, out.end());
  for (auto& n : out)
    n.distance = std::sqrt(n.distance);
  std::stable_sort(out.begin(), out.end(),
                   [](const Neighbor& a, const Neighbor& b) {
                     return a.distance < b.distance;
                   });
  return out;
}

} // namespace

std::vector<Neighbor>
PoseIndex::radius_search(const AmbientVector& q, double r) const
{
  if (!(r > 0.0))
    fail(ErrorKind::InvalidInput, "search radius must be positive");
  if (q.size() != model_.ambient_dim())
    fail(ErrorKind::InvalidInput, "query has the wrong dimension");
  std::vector<std::pair<std::size_t, double>> hits;
  // Slightly generous squared bound; the exact test is on the root.
  tree_.radius(q, r * r * (1.0 + 1e-12), hits);
  auto out = collapse(hits, stride_);
  std::erase_if(out, [r](const Neighbor& n) { return n.distance > r; });
  return out;
}

std::vector<Neighbor>
PoseIndex::radius_search(const Pose& query, double r) const
{
  return radius_search(first_representative(model_, query), r);
}

std::vector<Neighbor>
PoseIndex::k_nearest(const AmbientVector& q, std::size_t k) const
{
  if (k < 1)
    fail(ErrorKind::InvalidInput, "k must be at least 1");
  if (q.size() != model_.ambient_dim())
    fail(ErrorKind::InvalidInput, "query has the wrong dimension");
  // Every pose owns stride_ points, so k * stride_ points cover k poses.
  std::size_t fetch = std::min(points_.size(), k * stride_);
  auto out = collapse(tree_.nearest(q, fetch), stride_);
  if (out.size() > k)
    out.resize(k);
  return out;
}

std::vector<Neighbor>
PoseIndex::k_nearest(const Pose& query, std::size_t k) const
{
  return k_nearest(first_representative(model_, query), k);
}

} // namespace posespace

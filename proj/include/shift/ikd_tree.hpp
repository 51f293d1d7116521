#pragma once

#include "shift/types.hpp"

#include <memory>
#include <vector>

namespace shift {

struct DistanceFieldQuery {
  double distance = kInfinity;
  Vec3 nearest{Vec3::Zero()};
  bool found = false;
};

/// Incremental 3D KD-tree with scapegoat-style partial rebuilds and
/// tombstoned deletion. Nearest-point queries are exact over the live set.
///
/// Single-writer, multiple-reader: mutations are serialized by the caller;
/// snapshot() hands out an immutable copy safe for concurrent queries.
class IkdTree {
 public:
  explicit IkdTree(double alpha_bal = 0.7, double dedup_tolerance = 1e-9);

  void insert(const Vec3& point);
  void insert(const std::vector<Vec3>& points);

  /// Tombstone all live points inside the box; returns how many.
  std::size_t remove_box(const Aabb& box);

  /// Exact nearest live point; +infinity sentinel when the tree is empty.
  DistanceFieldQuery nearest(const Vec3& query) const;

  /// Distance to the nearest live point (the field D(p)).
  double nearest_distance(const Vec3& query) const;

  std::size_t live_count() const { return live_count_; }
  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return live_count_ == 0; }

  int depth() const;
  double alpha_bal() const { return alpha_bal_; }

  /// All live points, in tree order.
  std::vector<Vec3> live_points() const;

  /// Node list for the dump-tree debug command.
  struct NodeInfo {
    Vec3 point;
    int axis;
    bool live;
  };
  std::vector<NodeInfo> dump() const;

  using Snapshot = std::shared_ptr<const IkdTree>;
  Snapshot snapshot() const { return std::make_shared<IkdTree>(*this); }

 private:
  struct Node {
    Vec3 point;
    int axis = 0;
    int left = -1, right = -1, parent = -1;
    int subtree_nodes = 1;  // structural count, tombstones included
    int subtree_live = 1;
    bool dead = false;
  };

  int build_balanced(std::vector<Vec3>& pts, int lo, int hi, int parent);
  void collect_live(int node, std::vector<Vec3>& out) const;
  void rebuild_subtree(int node);
  void rebuild_all();
  void refresh_counts_upward(int node);
  void nearest_impl(int node, const Vec3& query, double& best_sq, int& best_node) const;
  int subtree_depth(int node) const;
  int height_limit() const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::size_t live_count_ = 0;
  double alpha_bal_;
  double dedup_tolerance_;
};

}  // namespace shift

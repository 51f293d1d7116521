#include "shift/ikd_tree.hpp"

#include <algorithm>
#include <cmath>

namespace shift {

IkdTree::IkdTree(double alpha_bal, double dedup_tolerance)
    : alpha_bal_(alpha_bal), dedup_tolerance_(dedup_tolerance) {
  if (alpha_bal <= 0.5 || alpha_bal >= 1.0) {
    throw DomainError("IkdTree: alpha_bal must be in (0.5, 1)");
  }
}

int IkdTree::height_limit() const {
  const double n = static_cast<double>(std::max<std::size_t>(nodes_.size(), 1));
  return static_cast<int>(std::floor(std::log(n) / std::log(1.0 / alpha_bal_))) + 1;
}

void IkdTree::insert(const std::vector<Vec3>& points) {
  for (const auto& p : points) insert(p);
}

void IkdTree::insert(const Vec3& point) {
  if (!point.allFinite()) throw DomainError("IkdTree::insert: non-finite point");

  // Deduplicate within tolerance; revive a tombstone hit exactly.
  double best_sq = kInfinity;
  int best_node = -1;
  if (root_ >= 0) {
    // Search over all nodes including tombstones so a dead duplicate revives.
    double tol_sq = dedup_tolerance_ * dedup_tolerance_;
    int walk = root_;
    // A full NN over live points does not see tombstones; do a bounded
    // recursive scan instead.
    (void)walk;
    struct Finder {
      const std::vector<Node>& nodes;
      const Vec3& p;
      double tol_sq;
      int found = -1;
      void run(int idx) {
        if (idx < 0 || found >= 0) return;
        const Node& n = nodes[static_cast<std::size_t>(idx)];
        if ((n.point - p).squaredNorm() <= tol_sq) {
          found = idx;
          return;
        }
        const double delta = p[n.axis] - n.point[n.axis];
        run(delta < 0.0 ? n.left : n.right);
        if (found < 0 && std::abs(delta) <= std::sqrt(tol_sq)) {
          run(delta < 0.0 ? n.right : n.left);
        }
      }
    } finder{nodes_, point, tol_sq};
    finder.run(root_);
    best_node = finder.found;
    if (best_node >= 0) best_sq = 0.0;
  }
  if (best_node >= 0 && best_sq <= dedup_tolerance_ * dedup_tolerance_) {
    Node& hit = nodes_[static_cast<std::size_t>(best_node)];
    if (hit.dead) {
      hit.dead = false;
      ++live_count_;
      for (int a = best_node; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
        ++nodes_[static_cast<std::size_t>(a)].subtree_live;
      }
    }
    return;
  }

  const int new_index = static_cast<int>(nodes_.size());
  Node fresh;
  fresh.point = point;
  if (root_ < 0) {
    fresh.axis = 0;
    nodes_.push_back(fresh);
    root_ = new_index;
    live_count_ = 1;
    return;
  }

  int cursor = root_;
  int depth = 0;
  while (true) {
    Node& n = nodes_[static_cast<std::size_t>(cursor)];
    ++depth;
    const bool go_left = point[n.axis] < n.point[n.axis];
    int& child = go_left ? n.left : n.right;
    if (child < 0) {
      fresh.axis = (n.axis + 1) % 3;
      fresh.parent = cursor;
      nodes_.push_back(fresh);
      child = new_index;
      break;
    }
    cursor = child;
  }
  ++live_count_;
  for (int a = nodes_[static_cast<std::size_t>(new_index)].parent; a >= 0;
       a = nodes_[static_cast<std::size_t>(a)].parent) {
    ++nodes_[static_cast<std::size_t>(a)].subtree_nodes;
    ++nodes_[static_cast<std::size_t>(a)].subtree_live;
  }

  if (depth > height_limit()) {
    // Walk up from the new leaf; rebuild the first scapegoat.
    int child = new_index;
    int parent = nodes_[static_cast<std::size_t>(child)].parent;
    while (parent >= 0) {
      const Node& p = nodes_[static_cast<std::size_t>(parent)];
      const double child_size =
          static_cast<double>(nodes_[static_cast<std::size_t>(child)].subtree_nodes);
      if (child_size > alpha_bal_ * static_cast<double>(p.subtree_nodes)) {
        rebuild_subtree(parent);
        return;
      }
      child = parent;
      parent = p.parent;
    }
    rebuild_all();
  }
}

void IkdTree::collect_live(int node, std::vector<Vec3>& out) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  collect_live(n.left, out);
  if (!n.dead) out.push_back(n.point);
  collect_live(n.right, out);
}

int IkdTree::build_balanced(std::vector<Vec3>& pts, int lo, int hi, int parent) {
  if (lo >= hi) return -1;
  // Split on the widest axis for compact query regions.
  Vec3 mn = pts[static_cast<std::size_t>(lo)];
  Vec3 mx = mn;
  for (int k = lo + 1; k < hi; ++k) {
    mn = mn.cwiseMin(pts[static_cast<std::size_t>(k)]);
    mx = mx.cwiseMax(pts[static_cast<std::size_t>(k)]);
  }
  int axis = 0;
  const Vec3 extent = mx - mn;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  const int mid = lo + (hi - lo) / 2;
  std::nth_element(pts.begin() + lo, pts.begin() + mid, pts.begin() + hi,
                   [axis](const Vec3& a, const Vec3& b) {
                     if (a[axis] != b[axis]) return a[axis] < b[axis];
                     if (a.x() != b.x()) return a.x() < b.x();
                     if (a.y() != b.y()) return a.y() < b.y();
                     return a.z() < b.z();
                   });

  const int idx = static_cast<int>(nodes_.size());
  Node node;
  node.point = pts[static_cast<std::size_t>(mid)];
  node.axis = axis;
  node.parent = parent;
  nodes_.push_back(node);

  const int left = build_balanced(pts, lo, mid, idx);
  const int right = build_balanced(pts, mid + 1, hi, idx);
  Node& n = nodes_[static_cast<std::size_t>(idx)];
  n.left = left;
  n.right = right;
  n.subtree_nodes = 1;
  n.subtree_live = 1;
  if (left >= 0) {
    n.subtree_nodes += nodes_[static_cast<std::size_t>(left)].subtree_nodes;
    n.subtree_live += nodes_[static_cast<std::size_t>(left)].subtree_live;
  }
  if (right >= 0) {
    n.subtree_nodes += nodes_[static_cast<std::size_t>(right)].subtree_nodes;
    n.subtree_live += nodes_[static_cast<std::size_t>(right)].subtree_live;
  }
  return idx;
}

void IkdTree::refresh_counts_upward(int node) {
  for (int a = node; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
    Node& n = nodes_[static_cast<std::size_t>(a)];
    n.subtree_nodes = 1;
    n.subtree_live = n.dead ? 0 : 1;
    if (n.left >= 0) {
      n.subtree_nodes += nodes_[static_cast<std::size_t>(n.left)].subtree_nodes;
      n.subtree_live += nodes_[static_cast<std::size_t>(n.left)].subtree_live;
    }
    if (n.right >= 0) {
      n.subtree_nodes += nodes_[static_cast<std::size_t>(n.right)].subtree_nodes;
      n.subtree_live += nodes_[static_cast<std::size_t>(n.right)].subtree_live;
    }
  }
}

void IkdTree::rebuild_subtree(int node) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(nodes_[static_cast<std::size_t>(node)].subtree_nodes));
  collect_live(node, pts);
  const int parent = nodes_[static_cast<std::size_t>(node)].parent;

  // Rebuilding in place would walk freed nodes; rebuild the whole storage
  // when the subtree is the root, otherwise graft a fresh balanced subtree
  // and drop the old nodes at the next full rebuild.
  if (parent < 0) {
    rebuild_all();
    return;
  }
  Node& p = nodes_[static_cast<std::size_t>(parent)];
  const bool was_left = (p.left == node);
  const int fresh = build_balanced(pts, 0, static_cast<int>(pts.size()), parent);
  if (was_left) {
    p.left = fresh;
  } else {
    p.right = fresh;
  }
  refresh_counts_upward(parent);

  // Storage hygiene: purge detached nodes when they dominate.
  if (root_ >= 0) {
    const double structural =
        static_cast<double>(nodes_[static_cast<std::size_t>(root_)].subtree_nodes);
    if (structural < alpha_bal_ * static_cast<double>(nodes_.size())) {
      rebuild_all();
    }
  }
}

void IkdTree::rebuild_all() {
  std::vector<Vec3> pts;
  pts.reserve(live_count_);
  collect_live(root_, pts);
  nodes_.clear();
  root_ = -1;
  live_count_ = pts.size();
  if (!pts.empty()) {
    nodes_.reserve(pts.size());
    root_ = build_balanced(pts, 0, static_cast<int>(pts.size()), -1);
  }
}

std::size_t IkdTree::remove_box(const Aabb& box) {
  std::size_t removed = 0;
  struct Walker {
    std::vector<Node>& nodes;
    const Aabb& box;
    std::size_t removed = 0;
    void run(int idx) {
      if (idx < 0) return;
      Node& n = nodes[static_cast<std::size_t>(idx)];
      if (n.subtree_live == 0) return;
      const double coord = n.point[n.axis];
      if (box.min[n.axis] <= coord) run(n.left);
      if (box.max[n.axis] >= coord) run(n.right);
      if (!n.dead && box.contains(n.point)) {
        n.dead = true;
        ++removed;
      }
      n.subtree_live = n.dead ? 0 : 1;
      if (n.left >= 0) n.subtree_live += nodes[static_cast<std::size_t>(n.left)].subtree_live;
      if (n.right >= 0) n.subtree_live += nodes[static_cast<std::size_t>(n.right)].subtree_live;
    }
  } walker{nodes_, box};
  walker.run(root_);
  removed = walker.removed;
  live_count_ -= removed;

  // Purge when tombstones dominate the structure.
  if (!nodes_.empty() &&
      static_cast<double>(live_count_) < alpha_bal_ * static_cast<double>(nodes_.size())) {
    rebuild_all();
  }
  return removed;
}

void IkdTree::nearest_impl(int node, const Vec3& query, double& best_sq,
                           int& best_node) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.subtree_live == 0) return;
  if (!n.dead) {
    const double d = (n.point - query).squaredNorm();
    if (d < best_sq) {
      best_sq = d;
      best_node = node;
    }
  }
  const double delta = query[n.axis] - n.point[n.axis];
  const int near_side = delta < 0.0 ? n.left : n.right;
  const int far_side = delta < 0.0 ? n.right : n.left;
  nearest_impl(near_side, query, best_sq, best_node);
  if (delta * delta < best_sq) {
    nearest_impl(far_side, query, best_sq, best_node);
  }
}

DistanceFieldQuery IkdTree::nearest(const Vec3& query) const {
  DistanceFieldQuery result;
  if (root_ < 0 || live_count_ == 0) return result;
  double best_sq = kInfinity;
  int best_node = -1;
  nearest_impl(root_, query, best_sq, best_node);
  if (best_node >= 0) {
    result.distance = std::sqrt(best_sq);
    result.nearest = nodes_[static_cast<std::size_t>(best_node)].point;
    result.found = true;
  }
  return result;
}

double IkdTree::nearest_distance(const Vec3& query) const {
  return nearest(query).distance;
}

int IkdTree::subtree_depth(int node) const {
  if (node < 0) return 0;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  return 1 + std::max(subtree_depth(n.left), subtree_depth(n.right));
}

int IkdTree::depth() const { return subtree_depth(root_); }

std::vector<Vec3> IkdTree::live_points() const {
  std::vector<Vec3> pts;
  pts.reserve(live_count_);
  collect_live(root_, pts);
  return pts;
}

std::vector<IkdTree::NodeInfo> IkdTree::dump() const {
  std::vector<NodeInfo> out;
  out.reserve(nodes_.size());
  struct Walker {
    const std::vector<Node>& nodes;
    std::vector<NodeInfo>& out;
    void run(int idx) {
      if (idx < 0) return;
      const Node& n = nodes[static_cast<std::size_t>(idx)];
      run(n.left);
      out.push_back({n.point, n.axis, !n.dead});
      run(n.right);
    }
  } walker{nodes_, out};
  walker.run(root_);
  return out;
}

}  // namespace shift

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "coplan/errors.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Insertion-only kd-tree over fixed-dimension points with payload ids.
/// Split axis cycles with depth. Queries tie-break on the smaller id so
/// results are reproducible.
class KdTree {
public:
    explicit KdTree(int dim) : dim_(dim) {
        if (dim < 1) throw ArgumentError("KdTree: dimension must be positive");
    }

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }

    void insert(const Vector& point, int id) {
        if (point.size() != dim_) throw DimensionError("KdTree::insert: point dimension mismatch");
        const int idx = static_cast<int>(nodes_.size());
        nodes_.push_back({point, id, -1, -1});
        if (root_ < 0) {
            root_ = idx;
            return;
        }
        int cur = root_;
        int depth = 0;
        for (;;) {
            const int axis = depth % dim_;
            int& child = (point[axis] < nodes_[static_cast<std::size_t>(cur)].point[axis])
                             ? nodes_[static_cast<std::size_t>(cur)].left
                             : nodes_[static_cast<std::size_t>(cur)].right;
            if (child < 0) {
                child = idx;
                return;
            }
            cur = child;
            ++depth;
        }
    }

    struct Hit {
        int id = -1;
        double squared_distance = std::numeric_limits<double>::infinity();
    };

    /// Nearest stored point; id -1 when empty.
    [[nodiscard]] Hit nearest(const Vector& query) const {
        Hit hit;
        if (root_ >= 0) nearest_impl(root_, 0, query, hit.squared_distance, hit.id);
        return hit;
    }

    /// Ids of all stored points within `radius` of the query.
    void within_radius(const Vector& query, double radius, std::vector<int>& out) const {
        out.clear();
        if (root_ >= 0) radius_impl(root_, 0, query, radius * radius, out);
    }

private:
    struct Node {
        Vector point;
        int id;
        int left;
        int right;
    };

    void nearest_impl(int node, int depth, const Vector& q, double& best_d2, int& best_id) const {
        const Node& n = nodes_[static_cast<std::size_t>(node)];
        const double d2 = (n.point - q).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && n.id < best_id)) {
            best_d2 = d2;
            best_id = n.id;
        }
        const int axis = depth % dim_;
        const double delta = q[axis] - n.point[axis];
        const int near_child = (delta < 0.0) ? n.left : n.right;
        const int far_child = (delta < 0.0) ? n.right : n.left;
        if (near_child >= 0) nearest_impl(near_child, depth + 1, q, best_d2, best_id);
        if (far_child >= 0 && delta * delta <= best_d2) nearest_impl(far_child, depth + 1, q, best_d2, best_id);
    }

    void radius_impl(int node, int depth, const Vector& q, double r2, std::vector<int>& out) const {
        const Node& n = nodes_[static_cast<std::size_t>(node)];
        if ((n.point - q).squaredNorm() <= r2) out.push_back(n.id);
        const int axis = depth % dim_;
        const double delta = q[axis] - n.point[axis];
        const int near_child = (delta < 0.0) ? n.left : n.right;
        const int far_child = (delta < 0.0) ? n.right : n.left;
        if (near_child >= 0) radius_impl(near_child, depth + 1, q, r2, out);
        if (far_child >= 0 && delta * delta <= r2) radius_impl(far_child, depth + 1, q, r2, out);
    }

    int dim_;
    int root_ = -1;
    std::vector<Node> nodes_;
};

} // namespace coplan

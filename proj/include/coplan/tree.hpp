#pragma once

#include <limits>
#include <unordered_map>
#include <vector>

#include "coplan/kdtree.hpp"
#include "coplan/propagation.hpp"
#include "coplan/team.hpp"
#include "coplan/types.hpp"

namespace coplan {

/// Search-tree vertex. `ws_means` caches the concatenated per-robot
/// workspace means of the belief, the coordinates every selection metric
/// works in. `neighbor_count` is the EST sparsity statistic n_r.
struct BeliefNode {
    ExpectedBelief belief;
    int parent = -1;
    int edge = -1;
    Vector ws_means;
    int neighbor_count = 0;
};

/// Single-rooted belief tree with the nearest-neighbor structures the
/// planners and re-branching need: one kd-tree over concatenated workspace
/// means, one kd-tree per (time index, robot) over that robot's workspace
/// mean, and incrementally maintained EST sparsity weights 1/(1 + n_r).
class BeliefTree {
public:
    BeliefTree(const TeamModel& model, double est_radius);

    /// Inserts a node; the root passes parent = -1 and an empty edge.
    int insert(ExpectedBelief belief, int parent, EdgeRecord edge);

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const BeliefNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    [[nodiscard]] const EdgeRecord& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    /// Nearest node to a concatenated workspace sample (Euclidean, smaller
    /// id on ties).
    [[nodiscard]] int nearest(const Vector& ws_sample) const;

    /// EST sparsity weight of one node and the running total.
    [[nodiscard]] double sparsity_weight(int id) const {
        return 1.0 / (1.0 + nodes_[static_cast<std::size_t>(id)].neighbor_count);
    }
    [[nodiscard]] double sparsity_total() const { return sparsity_total_; }

    struct RobotHit {
        int node = -1;
        int robot = -1;
        double squared_distance = std::numeric_limits<double>::infinity();
    };

    /// Over all nodes at `time_index` and robots other than `exclude_robot`,
    /// the robot mean closest to `ws_point`. Ties go to the smaller robot,
    /// then the smaller node id.
    [[nodiscard]] RobotHit nearest_robot_at_time(int time_index, int exclude_robot, const Vector& ws_point) const;

    [[nodiscard]] int count_at_time(int time_index) const;

    /// Node ids along the root-to-node path, root first.
    [[nodiscard]] std::vector<int> path_from_root(int node_id) const;

    /// Per-step composed controls along the root-to-node path.
    [[nodiscard]] std::vector<Vector> controls_from_root(int node_id) const;

    [[nodiscard]] const TeamModel& model() const { return *model_; }
    [[nodiscard]] double est_radius() const { return est_radius_; }

private:
    const TeamModel* model_;
    double est_radius_;
    std::vector<BeliefNode> nodes_;
    std::vector<EdgeRecord> edges_;
    KdTree ws_index_;
    std::unordered_map<int, std::vector<KdTree>> time_robot_index_;
    std::unordered_map<int, int> time_counts_;
    double sparsity_total_ = 0.0;
    mutable std::vector<int> scratch_;
};

/// Concatenated per-robot workspace means of a composed state.
Vector workspace_means(const TeamModel& model, const Vector& composed_state);

} // namespace coplan

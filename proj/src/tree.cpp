#include "coplan/tree.hpp"

#include "coplan/errors.hpp"

namespace coplan {

Vector workspace_means(const TeamModel& model, const Vector& composed_state) {
    const int w = model.workspace_dim();
    Vector out(static_cast<Index>(w) * model.num_robots());
    for (int i = 0; i < model.num_robots(); ++i) {
        out.segment(static_cast<Index>(i) * w, w) = model.workspace_position(i, composed_state);
    }
    return out;
}

BeliefTree::BeliefTree(const TeamModel& model, double est_radius)
    : model_(&model),
      est_radius_(est_radius),
      ws_index_(model.workspace_dim() * model.num_robots()) {
    if (est_radius <= 0.0) throw ArgumentError("BeliefTree: est_radius must be positive");
}

int BeliefTree::insert(ExpectedBelief belief, int parent, EdgeRecord edge) {
    if (parent >= 0) {
        const BeliefNode& p = nodes_[static_cast<std::size_t>(parent)];
        if (belief.time_index != p.belief.time_index + static_cast<int>(edge.length())) {
            throw ArgumentError("BeliefTree::insert: time index != parent time + edge length");
        }
    } else if (!nodes_.empty()) {
        throw ArgumentError("BeliefTree::insert: tree already has a root");
    }

    const int id = static_cast<int>(nodes_.size());
    BeliefNode node;
    node.ws_means = workspace_means(*model_, belief.mean);
    node.parent = parent;

    // sparsity statistics over existing nodes within est_radius
    ws_index_.within_radius(node.ws_means, est_radius_, scratch_);
    node.neighbor_count = static_cast<int>(scratch_.size());
    for (int nb : scratch_) {
        BeliefNode& other = nodes_[static_cast<std::size_t>(nb)];
        sparsity_total_ -= 1.0 / (1.0 + other.neighbor_count);
        other.neighbor_count += 1;
        sparsity_total_ += 1.0 / (1.0 + other.neighbor_count);
    }
    sparsity_total_ += 1.0 / (1.0 + node.neighbor_count);

    ws_index_.insert(node.ws_means, id);

    const int w = model_->workspace_dim();
    auto [it, inserted] = time_robot_index_.try_emplace(belief.time_index);
    if (inserted) {
        it->second.reserve(static_cast<std::size_t>(model_->num_robots()));
        for (int r = 0; r < model_->num_robots(); ++r) it->second.emplace_back(w);
    }
    for (int r = 0; r < model_->num_robots(); ++r) {
        it->second[static_cast<std::size_t>(r)].insert(node.ws_means.segment(static_cast<Index>(r) * w, w), id);
    }
    time_counts_[belief.time_index] += 1;

    if (edge.length() > 0 || parent >= 0) {
        node.edge = static_cast<int>(edges_.size());
        edges_.push_back(std::move(edge));
    }
    node.belief = std::move(belief);
    nodes_.push_back(std::move(node));
    return id;
}

int BeliefTree::nearest(const Vector& ws_sample) const {
    return ws_index_.nearest(ws_sample).id;
}

BeliefTree::RobotHit BeliefTree::nearest_robot_at_time(int time_index, int exclude_robot,
                                                       const Vector& ws_point) const {
    RobotHit best;
    const auto it = time_robot_index_.find(time_index);
    if (it == time_robot_index_.end()) return best;
    for (int r = 0; r < model_->num_robots(); ++r) {
        if (r == exclude_robot) continue;
        const KdTree::Hit hit = it->second[static_cast<std::size_t>(r)].nearest(ws_point);
        if (hit.id < 0) continue;
        if (hit.squared_distance < best.squared_distance ||
            (hit.squared_distance == best.squared_distance &&
             (r < best.robot || (r == best.robot && hit.id < best.node)))) {
            best.node = hit.id;
            best.robot = r;
            best.squared_distance = hit.squared_distance;
        }
    }
    return best;
}

int BeliefTree::count_at_time(int time_index) const {
    const auto it = time_counts_.find(time_index);
    return it == time_counts_.end() ? 0 : it->second;
}

std::vector<int> BeliefTree::path_from_root(int node_id) const {
    std::vector<int> path;
    for (int cur = node_id; cur >= 0; cur = nodes_[static_cast<std::size_t>(cur)].parent) {
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Vector> BeliefTree::controls_from_root(int node_id) const {
    std::vector<Vector> controls;
    for (int id : path_from_root(node_id)) {
        const BeliefNode& n = nodes_[static_cast<std::size_t>(id)];
        if (n.edge < 0) continue;
        const EdgeRecord& e = edges_[static_cast<std::size_t>(n.edge)];
        controls.insert(controls.end(), e.controls.begin(), e.controls.end());
    }
    return controls;
}

} // namespace coplan

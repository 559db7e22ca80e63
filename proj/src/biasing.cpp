#include "coplan/biasing.hpp"

#include "coplan/errors.hpp"

namespace coplan {

void RejectionTally::count(Violation cause, bool numeric_failure) {
    if (numeric_failure) {
        ++numeric;
        return;
    }
    switch (cause) {
        case Violation::Obstacle: ++obstacle; break;
        case Violation::RobotRobot: ++robot_robot; break;
        case Violation::Cl: ++cl; break;
        case Violation::None: break;
    }
}

void BiasState::on_insert(const BeliefTree& tree, int node_id) {
    if (static_cast<std::size_t>(node_id) != weights_.size()) {
        throw ArgumentError("BiasState::on_insert: nodes must be registered in insertion order");
    }
    const TeamModel& model = tree.model();
    const double w = distance_weight(tree.node(node_id).ws_means, model.num_robots(),
                                     model.workspace_dim(), weight_cap_);
    weights_.push_back(w);
    weight_total_ += w;
}

Vector clone_sample(const Vector& ws_sample, int num_robots, int workspace_dim, BiasState& state) {
    const int source = state.advance_cursor(num_robots);
    Vector out = ws_sample;
    const auto w = static_cast<Index>(workspace_dim);
    const Vector source_pos = ws_sample.segment(source * w, w);
    for (int r = 0; r < num_robots; ++r) {
        out.segment(r * w, w) = source_pos;
    }
    return out;
}

double distance_weight(const Vector& ws_means, int num_robots, int workspace_dim, double weight_cap) {
    const auto w = static_cast<Index>(workspace_dim);
    double d = 0.0;
    for (int i = 0; i < num_robots; ++i) {
        for (int j = 0; j < num_robots; ++j) {
            d += (ws_means.segment(i * w, w) - ws_means.segment(j * w, w)).norm();
        }
    }
    return d > 0.0 ? std::min(1.0 / d, weight_cap) : weight_cap;
}

int biased_pdf_sample(const BeliefTree& tree, const BiasState& state, Rng& rng) {
    const double r = rng.uniform() * state.weight_total();
    double acc = 0.0;
    const int n = static_cast<int>(tree.size());
    for (int id = 0; id < n; ++id) {
        acc += state.weight(id);
        if (r < acc) return id;
    }
    return n - 1;
}

int rebranch(BeliefTree& tree, int selected, const ValidationContext& ctx, const Matrix& K,
             BiasState& state, RejectionTally& tally) {
    const TeamModel& model = tree.model();
    const int k_dagger = tree.node(selected).belief.time_index;
    if (k_dagger == 0) return selected;
    if (tree.count_at_time(k_dagger) < 2) return selected;

    const int i_target = state.advance_cursor(model.num_robots());
    const auto w = static_cast<Index>(model.workspace_dim());
    const Vector target_pos = tree.node(selected).ws_means.segment(i_target * w, w);

    const BeliefTree::RobotHit hit = tree.nearest_robot_at_time(k_dagger, i_target, target_pos);
    if (hit.node < 0) return selected;
    const int i_pair = hit.robot;

    std::vector<Vector> controls = tree.controls_from_root(selected);
    const std::vector<Vector> pair_controls = tree.controls_from_root(hit.node);
    if (controls.size() != pair_controls.size()) return selected;

    const IndexRange rows = model.control_block(i_pair);
    for (std::size_t k = 0; k < controls.size(); ++k) {
        controls[k].segment(rows.start, rows.size) = pair_controls[k].segment(rows.start, rows.size);
    }

    const ExpectedBelief& root = tree.node(0).belief;
    GuardedExtension ext = propagate_guarded(model, ctx, K, root, controls);
    if (!ext.ok) {
        tally.count(ext.cause, ext.numeric_failure);
        ++tally.rebranch;
        return selected;
    }

    if (hit.node == selected) return selected;   // identity splice, nothing new to store

    const int tip = tree.insert(std::move(ext.terminal), 0, std::move(ext.record));
    state.on_insert(tree, tip);
    return tip;
}

} // namespace coplan

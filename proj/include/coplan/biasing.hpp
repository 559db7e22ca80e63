#pragma once

#include <cstdint>
#include <vector>

#include "coplan/extension.hpp"
#include "coplan/rng.hpp"
#include "coplan/tree.hpp"
#include "coplan/types.hpp"

namespace coplan {

struct RejectionTally {
    std::uint64_t obstacle = 0;
    std::uint64_t robot_robot = 0;
    std::uint64_t cl = 0;
    std::uint64_t numeric = 0;
    std::uint64_t rebranch = 0;

    void count(Violation cause, bool numeric_failure);
};

/// Mutable state of the biasing techniques for one planning query: the
/// round-robin robot cursor shared by cloning and re-branching, and the
/// per-node inverse-pairwise-distance weights with their running normalizer.
class BiasState {
public:
    explicit BiasState(double weight_cap = 1e6) : weight_cap_(weight_cap) {}

    /// Registers a freshly inserted node: caches its distance weight.
    void on_insert(const BeliefTree& tree, int node_id);

    [[nodiscard]] double weight(int node_id) const { return weights_[static_cast<std::size_t>(node_id)]; }
    [[nodiscard]] double weight_total() const { return weight_total_; }
    [[nodiscard]] double weight_cap() const { return weight_cap_; }

    [[nodiscard]] int clone_cursor() const { return clone_cursor_; }
    int advance_cursor(int num_robots) {
        const int picked = clone_cursor_;
        clone_cursor_ = (clone_cursor_ + 1) % num_robots;
        return picked;
    }

private:
    double weight_cap_;
    int clone_cursor_ = 0;
    std::vector<double> weights_;
    double weight_total_ = 0.0;
};

/// Overwrites every robot's workspace coordinates in a concatenated
/// workspace sample with those of the round-robin clone source, producing a
/// sample where all robots occupy one state. Touches only the sample, never
/// the tree.
Vector clone_sample(const Vector& ws_sample, int num_robots, int workspace_dim, BiasState& state);

/// Inverse summed pairwise distance 1/D over ordered robot pairs of a
/// node's workspace means; coincident robots (D = 0) map to the cap.
double distance_weight(const Vector& ws_means, int num_robots, int workspace_dim, double weight_cap);

/// Samples a node id proportionally to the cached distance weights.
int biased_pdf_sample(const BeliefTree& tree, const BiasState& state, Rng& rng);

/// Re-branching (tree surgery): pick the round-robin target robot of the
/// selected node, find the closest same-time robot mean anywhere in the
/// tree, splice that robot's control rows from the paired branch into the
/// selected branch, and re-propagate the whole branch from the root with
/// re-derived measurement schedule and full validation. On success the new
/// tip is inserted (one root-anchored edge) and returned; on any failure the
/// selected node is returned unchanged and the reject is tallied.
int rebranch(BeliefTree& tree, int selected, const ValidationContext& ctx, const Matrix& K,
             BiasState& state, RejectionTally& tally);

} // namespace coplan
